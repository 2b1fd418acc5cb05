#include "semtext/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semtext/errors.hpp"

namespace semtext {

using nlohmann::json;

namespace {

Label parse_label(const std::string& s, size_t line_no) {
    if (s == "main") return Label::kMain;
    if (s == "boilerplate") return Label::kBoilerplate;
    throw FormatError("dataset line " + std::to_string(line_no) +
                      ": unknown label '" + s + "'");
}

std::vector<std::string> string_list(const json& j, const char* key,
                                     size_t line_no) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_array())
        throw FormatError("dataset line " + std::to_string(line_no) +
                          ": missing array field '" + key + "'");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string())
            throw FormatError("dataset line " + std::to_string(line_no) +
                              ": '" + key + "' entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

LabeledPage parse_page(const std::string& line, size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw FormatError("dataset line " + std::to_string(line_no) +
                          ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object())
        throw FormatError("dataset line " + std::to_string(line_no) +
                          ": expected a JSON object");
    LabeledPage page;
    if (auto it = j.find("id"); it != j.end() && it->is_string())
        page.id = it->get<std::string>();
    const auto blocks = j.find("blocks");
    if (blocks == j.end() || !blocks->is_array())
        throw FormatError("dataset line " + std::to_string(line_no) +
                          ": missing 'blocks' array");
    for (const auto& b : *blocks) {
        if (!b.is_object())
            throw FormatError("dataset line " + std::to_string(line_no) +
                              ": block entries must be objects");
        LabeledBlock block;
        block.tags = string_list(b, "tags", line_no);
        block.classes = string_list(b, "classes", line_no);
        const auto text = b.find("text");
        if (text == b.end() || !text->is_string())
            throw FormatError("dataset line " + std::to_string(line_no) +
                              ": missing string field 'text'");
        block.text = text->get<std::string>();
        const auto label = b.find("label");
        if (label == b.end() || !label->is_string())
            throw FormatError("dataset line " + std::to_string(line_no) +
                              ": missing string field 'label'");
        block.label = parse_label(label->get<std::string>(), line_no);
        page.blocks.push_back(std::move(block));
    }
    return page;
}

}  // namespace

std::vector<LabeledPage> parse_pages_jsonl(std::istream& in) {
    std::vector<LabeledPage> pages;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        pages.push_back(parse_page(line, line_no));
    }
    return pages;
}

std::vector<LabeledPage> load_pages_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file: " + path);
    return parse_pages_jsonl(in);
}

std::string page_to_jsonl(const LabeledPage& page) {
    json blocks = json::array();
    for (const LabeledBlock& b : page.blocks)
        blocks.push_back({{"tags", b.tags},
                          {"classes", b.classes},
                          {"text", b.text},
                          {"label", label_name(b.label)}});
    json j{{"id", page.id}, {"blocks", std::move(blocks)}};
    return j.dump();
}

void save_pages_jsonl(const std::vector<LabeledPage>& pages,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset file: " + path);
    for (const LabeledPage& p : pages) out << page_to_jsonl(p) << '\n';
    if (!out) throw IoError("failed writing dataset file: " + path);
}

}  // namespace semtext
