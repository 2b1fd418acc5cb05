// Command line front end: segment pages, train a model, label pages with
// it, and score predictions against gold labels.
//
// Exit codes: 0 success, 1 usage error, 2 bad input or output data,
// 3 model file or training failure.

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semtext/dataset.hpp"
#include "semtext/dom.hpp"
#include "semtext/embedding.hpp"
#include "semtext/errors.hpp"
#include "semtext/lexicalizer.hpp"
#include "semtext/metrics.hpp"
#include "semtext/model_io.hpp"
#include "semtext/network.hpp"
#include "semtext/pipeline.hpp"
#include "semtext/segmenter.hpp"
#include "semtext/trainer.hpp"
#include "semtext/util.hpp"

namespace fs = std::filesystem;
using namespace semtext;

namespace {

// Thrown to unwind to main with a specific exit code.
struct CliExit {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliExit{code, message};
}

// --- shared plumbing --------------------------------------------------------

struct Resources {
    TagTable table = TagTable::builtin();
    Lexicalizer lex;
};

Resources load_resources(const std::string& dir) {
    Resources res;
    if (dir.empty()) return res;  // compiled-in tables
    try {
        res.table = TagTable::load_file(dir + "/tag_groups.tsv");
        res.lex.load_tag_phrases(dir + "/tag_phrases.tsv");
        res.lex.load_abbreviations(dir + "/abbreviations.tsv");
        res.lex.load_stopwords(dir + "/stopwords.txt");
    } catch (const Error& e) {
        fail(2, std::string("cannot load data directory: ") + e.what());
    }
    return res;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return std::move(buf).str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(2, "cannot read input file: " + path);
    return {std::istreambuf_iterator<char>(f),
            std::istreambuf_iterator<char>()};
}

// Files stay files, directories expand to their *.html/*.htm entries in
// name order, "-" means stdin. No inputs at all also means stdin.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args) {
    std::vector<std::string> inputs;
    for (const std::string& arg : args) {
        std::error_code ec;
        if (arg != "-" && fs::is_directory(arg, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(arg)) {
                std::string ext = entry.path().extension().string();
                if (entry.is_regular_file() &&
                    (ext == ".html" || ext == ".htm"))
                    found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            if (found.empty())
                warn("no .html files under directory: " + arg);
            inputs.insert(inputs.end(), found.begin(), found.end());
        } else {
            inputs.push_back(arg);
        }
    }
    if (inputs.empty()) inputs.push_back("-");
    return inputs;
}

ModelParams open_model(const std::string& path) {
    try {
        return load_model(path);
    } catch (const Error& e) {
        fail(3, e.what());
    }
}

EmbeddingStore open_embeddings(const std::string& path,
                               const ModelConfig& config) {
    EmbeddingStore::Options opts;
    opts.subword_seed = config.subword_seed;
    opts.subword_buckets = config.subword_buckets;
    EmbeddingStore store = [&] {
        try {
            return EmbeddingStore::load(path, opts);
        } catch (const Error& e) {
            fail(2, e.what());
        }
    }();
    if (store.dim() != config.k)
        fail(2, "embedding dimension " + std::to_string(store.dim()) +
                    " does not match the model's " + std::to_string(config.k));
    return store;
}

// The flag wins; otherwise the path recorded in the model file, tried as
// given and then relative to the model file's directory.
std::string resolve_embeddings(const std::string& flag,
                               const ModelConfig& config,
                               const std::string& model_path) {
    if (!flag.empty()) return flag;
    if (config.embeddings_path.empty())
        fail(2, "the model does not name an embeddings file; "
                "pass --embeddings");
    fs::path recorded(config.embeddings_path);
    std::error_code ec;
    if (fs::exists(recorded, ec)) return recorded.string();
    if (recorded.is_relative()) {
        fs::path near = fs::path(model_path).parent_path() / recorded;
        if (fs::exists(near, ec)) return near.string();
    }
    fail(2, "embeddings file not found: " + recorded.string() +
                " (pass --embeddings to point elsewhere)");
}

// Renders documents with `render` and writes the results in input order.
// Worker threads park finished strings in a bounded reorder window, so the
// bytes written are independent of scheduling.
void write_ordered(std::ostream& out, size_t count, unsigned jobs,
                   const std::function<std::string(size_t)>& render) {
    if (jobs <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) out << render(i);
        return;
    }
    std::mutex mu;
    std::condition_variable cv;
    std::map<size_t, std::string> ready;
    std::exception_ptr error;
    std::atomic<size_t> next{0};
    size_t emitted = 0;
    const size_t window = static_cast<size_t>(jobs) * 4;

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            std::string piece;
            try {
                piece = render(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
                cv.notify_all();
                return;
            }
            std::unique_lock<std::mutex> lock(mu);
            cv.wait(lock, [&] { return error || i < emitted + window; });
            if (error) return;
            ready.emplace(i, std::move(piece));
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    {
        std::unique_lock<std::mutex> lock(mu);
        while (emitted < count) {
            cv.wait(lock,
                    [&] { return error || ready.count(emitted) > 0; });
            if (error) break;
            std::string piece = std::move(ready.at(emitted));
            ready.erase(emitted);
            ++emitted;
            lock.unlock();
            out << piece;
            lock.lock();
            cv.notify_all();
        }
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct OutputFile {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputFile(const std::string& path) {
        if (path == "-") return;
        file.open(path, std::ios::binary);
        if (!file) fail(2, "cannot write output file: " + path);
        stream = &file;
    }
};

// --- segment ----------------------------------------------------------------

struct SegmentOptions {
    std::vector<std::string> inputs;
    std::string output = "-";
    std::string data_dir;
    std::string charset;
    unsigned jobs = 1;
    bool include_ids = false;
};

BlockSequence segment_document(const std::string& html,
                               const std::string& name,
                               const std::string& charset,
                               const TagTable& table, bool include_ids) {
    try {
        auto root = parse_html(html, charset);
        return segment(*root, table, html.size(), include_ids);
    } catch (const EmptyDocumentError&) {
        warn("no content in " + name);
        return {};
    } catch (const EncodingError& e) {
        fail(2, name + ": " + e.what());
    }
}

std::string render_blocks(const BlockSequence& seq, const std::string& name) {
    std::string out;
    for (size_t i = 0; i < seq.blocks.size(); ++i) {
        const TextBlock& b = seq.blocks[i];
        nlohmann::json j{{"file", name},
                         {"i", i},
                         {"tags", b.tag_seq},
                         {"classes", b.class_seq},
                         {"text", b.text}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

int run_segment(const SegmentOptions& opt) {
    Resources res = load_resources(opt.data_dir);
    std::vector<std::string> inputs = expand_inputs(opt.inputs);
    std::vector<std::string> bytes;
    for (const std::string& path : inputs) bytes.push_back(read_input(path));
    OutputFile out(opt.output);
    write_ordered(*out.stream, inputs.size(), opt.jobs, [&](size_t i) {
        return render_blocks(segment_document(bytes[i], inputs[i],
                                              opt.charset, res.table,
                                              opt.include_ids),
                             inputs[i]);
    });
    out.stream->flush();
    return 0;
}

// --- extract ----------------------------------------------------------------

struct ExtractOptions {
    std::vector<std::string> inputs;
    std::string model_path;
    std::string embeddings;
    std::string format = "text";
    std::string output = "-";
    std::string data_dir;
    std::string charset;
    unsigned jobs = 1;
    bool blocks_only = false;
};

std::string render_extract(const BlockSequence& seq, const std::string& name,
                           const ModelParams& model,
                           const EmbeddingStore& store, const Lexicalizer& lex,
                           bool jsonl) {
    auto tensors = page_tensors(store, lex, model.config, seq);
    std::vector<Label> labels = predict_labels(model, tensors);
    std::string out;
    if (!jsonl) {
        for (size_t i = 0; i < seq.blocks.size(); ++i)
            if (labels[i] == Label::kMain) {
                out += seq.blocks[i].text;
                out += '\n';
            }
        return out;
    }
    Eigen::VectorXd scores = predict_main_scores(model, tensors);
    for (size_t i = 0; i < seq.blocks.size(); ++i) {
        const TextBlock& b = seq.blocks[i];
        nlohmann::json j{{"file", name},
                         {"i", i},
                         {"tags", b.tag_seq},
                         {"classes", b.class_seq},
                         {"text", b.text},
                         {"label", label_name(labels[i])},
                         {"score", scores[static_cast<Eigen::Index>(i)]}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

int run_extract(const ExtractOptions& opt) {
    if (opt.blocks_only) {
        SegmentOptions seg;
        seg.inputs = opt.inputs;
        seg.output = opt.output;
        seg.data_dir = opt.data_dir;
        seg.charset = opt.charset;
        seg.jobs = opt.jobs;
        return run_segment(seg);
    }
    if (opt.model_path.empty())
        fail(1, "extract needs --model (or --blocks-only)");
    ModelParams model = open_model(opt.model_path);
    Resources res = load_resources(opt.data_dir);
    res.lex.set_max_words(model.config.n);
    EmbeddingStore store = open_embeddings(
        resolve_embeddings(opt.embeddings, model.config, opt.model_path),
        model.config);

    std::vector<std::string> inputs = expand_inputs(opt.inputs);
    std::vector<std::string> bytes;
    for (const std::string& path : inputs) bytes.push_back(read_input(path));
    OutputFile out(opt.output);
    bool jsonl = opt.format == "jsonl";
    write_ordered(*out.stream, inputs.size(), opt.jobs, [&](size_t i) {
        BlockSequence seq =
            segment_document(bytes[i], inputs[i], opt.charset, res.table,
                             model.config.include_ids);
        return render_extract(seq, inputs[i], model, store, res.lex, jsonl);
    });
    out.stream->flush();
    return 0;
}

// --- train ------------------------------------------------------------------

struct TrainOptions {
    std::string data;
    std::string embeddings;
    std::string out;
    std::string init_from;
    std::string data_dir;
    ModelConfig model;
    TrainConfig optim;
    bool no_tags = false;
    bool no_classes = false;
    bool no_text = false;
};

int run_train(TrainOptions opt) {
    std::vector<LabeledPage> corpus;
    try {
        corpus = load_pages_jsonl(opt.data);
    } catch (const Error& e) {
        fail(2, e.what());
    }

    ModelParams init;
    if (!opt.init_from.empty()) {
        init = open_model(opt.init_from);
        if (opt.embeddings.empty())
            opt.embeddings = resolve_embeddings("", init.config,
                                                opt.init_from);
    } else {
        if (opt.embeddings.empty())
            fail(1, "train needs --embeddings (or --init-from)");
        opt.model.use_tags = !opt.no_tags;
        opt.model.use_classes = !opt.no_classes;
        opt.model.use_text = !opt.no_text;
        opt.model.embeddings_path = opt.embeddings;
    }

    Resources res = load_resources(opt.data_dir);
    ModelConfig& config =
        opt.init_from.empty() ? opt.model : init.config;
    EmbeddingStore probe = [&] {
        try {
            EmbeddingStore::Options eo;
            eo.subword_seed = config.subword_seed;
            eo.subword_buckets = config.subword_buckets;
            return EmbeddingStore::load(opt.embeddings, eo);
        } catch (const Error& e) {
            fail(2, e.what());
        }
    }();
    if (opt.init_from.empty()) {
        config.k = probe.dim();  // the embedding file fixes the word width
        try {
            config.validate();
        } catch (const ConfigError& e) {
            fail(1, e.what());
        }
        init = ModelParams::init(config, opt.optim.seed);
    } else if (probe.dim() != config.k) {
        fail(2, "embedding dimension " + std::to_string(probe.dim()) +
                    " does not match the model's " + std::to_string(config.k));
    }
    res.lex.set_max_words(config.n);

    try {
        opt.optim.validate();
    } catch (const ConfigError& e) {
        fail(1, e.what());
    }

    TrainResult result;
    try {
        result = train(corpus, init, probe, res.lex, opt.optim);
    } catch (const EmptyCorpusError& e) {
        fail(2, e.what());
    } catch (const DivergenceError& e) {
        fail(3, e.what());
    }
    for (const EpochStats& s : result.log)
        std::fprintf(stderr, "epoch %3zu  loss %.6f  val_f1 %.4f\n", s.epoch,
                     s.mean_loss, s.val_f1);
    std::fprintf(stderr, "best epoch %zu  val_f1 %.4f\n", result.best_epoch,
                 result.best_f1);
    try {
        save_model(result.params, opt.out);
    } catch (const Error& e) {
        fail(3, e.what());
    }
    return 0;
}

// --- eval -------------------------------------------------------------------

struct EvalOptions {
    std::string data;
    std::string model_path;
    std::string embeddings;
    std::string report;
    std::string data_dir;
};

int run_eval(const EvalOptions& opt) {
    ModelParams model = open_model(opt.model_path);
    Resources res = load_resources(opt.data_dir);
    res.lex.set_max_words(model.config.n);
    EmbeddingStore store = open_embeddings(
        resolve_embeddings(opt.embeddings, model.config, opt.model_path),
        model.config);

    std::vector<LabeledPage> pages;
    try {
        pages = load_pages_jsonl(opt.data);
    } catch (const Error& e) {
        fail(2, e.what());
    }

    std::vector<std::vector<Label>> pred, gold;
    std::vector<std::string> ids;
    for (const LabeledPage& page : pages) {
        auto tensors = page_tensors(store, res.lex, model.config, page);
        pred.push_back(predict_labels(model, tensors));
        gold.push_back(page_labels(page));
        ids.push_back(page.id);
    }
    EvalReport report = evaluate(pred, gold, ids);
    std::string json = report_to_json(report);
    if (opt.report.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream f(opt.report, std::ios::binary);
        if (!f) fail(2, "cannot write report file: " + opt.report);
        f << json << '\n';
        std::printf("precision %.4f  recall %.4f  f1 %.4f  (%zu pages)\n",
                    report.precision, report.recall, report.f1,
                    report.pages.size());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boilerplate detection: segment HTML pages into text "
                 "blocks and label each block main or boilerplate"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "read options from an ini-style key=value file");
    app.set_version_flag("--version", "semtext 0.1.0");

    ExtractOptions ex;
    CLI::App* extract = app.add_subcommand(
        "extract", "label blocks and print the main content");
    extract->add_option("inputs", ex.inputs,
                        "HTML files, directories, or - for stdin");
    extract->add_option("-m,--model", ex.model_path, "trained model file");
    extract->add_option("--embeddings", ex.embeddings,
                        "embeddings file (defaults to the one the model "
                        "names)");
    extract->add_option("-f,--format", ex.format,
                        "text: main block texts; jsonl: every block with "
                        "label and score")
        ->check(CLI::IsMember({"text", "jsonl"}));
    extract->add_option("-o,--output", ex.output, "output file, - for stdout");
    extract->add_option("-j,--jobs", ex.jobs, "worker threads across documents")
        ->check(CLI::Range(1u, 512u));
    extract->add_option("--charset", ex.charset,
                        "encoding hint for documents without one");
    extract->add_option("--data-dir", ex.data_dir,
                        "directory with tag_groups.tsv, tag_phrases.tsv, "
                        "abbreviations.tsv, stopwords.txt")
        ->envname("SEMTEXT_DATA_DIR");
    extract->add_flag("--blocks-only", ex.blocks_only,
                      "skip labeling and emit the segmented blocks");

    SegmentOptions sg;
    CLI::App* seg = app.add_subcommand(
        "segment", "cut pages into text blocks without labeling them");
    seg->add_option("inputs", sg.inputs,
                    "HTML files, directories, or - for stdin");
    seg->add_option("-o,--output", sg.output, "output file, - for stdout");
    seg->add_option("-j,--jobs", sg.jobs, "worker threads across documents")
        ->check(CLI::Range(1u, 512u));
    seg->add_option("--charset", sg.charset,
                    "encoding hint for documents without one");
    seg->add_option("--data-dir", sg.data_dir,
                    "directory with the segmentation data files")
        ->envname("SEMTEXT_DATA_DIR");
    seg->add_flag("--include-ids", sg.include_ids,
                  "treat id attributes like class tokens");

    TrainOptions tr;
    CLI::App* train_cmd =
        app.add_subcommand("train", "fit a model on a labeled dataset");
    train_cmd->add_option("--data", tr.data, "labeled pages, one JSON per line")
        ->required();
    train_cmd->add_option("--embeddings", tr.embeddings,
                          "word embeddings in text format");
    train_cmd->add_option("--out", tr.out, "model file to write")->required();
    train_cmd->add_option("--init-from", tr.init_from,
                          "continue from an existing model (its dimensions "
                          "and channels win)");
    train_cmd->add_option("--data-dir", tr.data_dir,
                          "directory with the segmentation data files")
        ->envname("SEMTEXT_DATA_DIR");
    train_cmd->add_option("--n", tr.model.n, "words kept per block");
    train_cmd->add_option("--m", tr.model.m,
                          "training sub-sequence length bound");
    train_cmd->add_option("--hidden", tr.model.hidden, "LSTM state width");
    train_cmd
        ->add_option("--kernel-widths", tr.model.kernel_widths,
                     "convolution window sizes")
        ->delimiter(',');
    train_cmd
        ->add_option("--kernel-counts", tr.model.kernel_counts,
                     "filters per window size")
        ->delimiter(',');
    train_cmd->add_flag("--conv-relu", tr.model.conv_relu,
                        "apply a ReLU before max pooling");
    train_cmd->add_flag("--include-ids", tr.model.include_ids,
                        "treat id attributes like class tokens at "
                        "extraction time");
    train_cmd->add_option("--subword-seed", tr.model.subword_seed,
                          "seed of the subword hash vectors");
    train_cmd->add_option("--subword-buckets", tr.model.subword_buckets,
                          "size of the subword hash space");
    train_cmd->add_flag("--no-tags", tr.no_tags, "disable the tag channel");
    train_cmd->add_flag("--no-classes", tr.no_classes,
                        "disable the class channel");
    train_cmd->add_flag("--no-text", tr.no_text, "disable the text channel");
    train_cmd->add_option("--epochs", tr.optim.epochs, "training epochs");
    train_cmd->add_option("--lr", tr.optim.learning_rate, "SGD step size");
    train_cmd->add_option("--batch-size", tr.optim.batch_size,
                          "sub-sequences per SGD step");
    train_cmd->add_option("--seed", tr.optim.seed,
                          "seed for init, shuffles and the holdout split");
    train_cmd->add_option("--val-split", tr.optim.validation_split,
                          "fraction of pages held out for validation");
    train_cmd->add_option("--grad-clip", tr.optim.grad_clip,
                          "L2 cap on the batch gradient, 0 disables");

    EvalOptions ev;
    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "score a model against a labeled dataset");
    eval_cmd->add_option("--data", ev.data, "labeled pages, one JSON per line")
        ->required();
    eval_cmd->add_option("-m,--model", ev.model_path, "trained model file")
        ->required();
    eval_cmd->add_option("--embeddings", ev.embeddings,
                         "embeddings file (defaults to the one the model "
                         "names)");
    eval_cmd->add_option("--report", ev.report,
                         "write the JSON report here instead of stdout");
    eval_cmd->add_option("--data-dir", ev.data_dir,
                         "directory with the segmentation data files")
        ->envname("SEMTEXT_DATA_DIR");

    try {
        app.parse(argc, argv);
        if (*extract) return run_extract(ex);
        if (*seg) return run_segment(sg);
        if (*train_cmd) return run_train(tr);
        if (*eval_cmd) return run_eval(ev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const CliExit& e) {
        if (!e.message.empty())
            std::fprintf(stderr, "semtext: error: %s\n", e.message.c_str());
        return e.code;
    } catch (const Error& e) {
        std::fprintf(stderr, "semtext: error: %s\n", e.what());
        return 2;
    }
    return 0;
}
