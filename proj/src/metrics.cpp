#include "semtext/metrics.hpp"

#include <json.hpp>

#include "semtext/errors.hpp"

namespace semtext {

namespace {

double ratio(size_t num, size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1_score(double precision, double recall) {
    double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

EvalReport evaluate(const std::vector<std::vector<Label>>& pred,
                    const std::vector<std::vector<Label>>& gold,
                    const std::vector<std::string>& page_ids) {
    if (pred.size() != gold.size())
        throw LengthMismatchError("prediction and gold page counts differ");
    EvalReport report;
    double macro_p = 0.0, macro_r = 0.0, macro_f = 0.0;
    size_t scored_pages = 0;
    for (size_t p = 0; p < pred.size(); ++p) {
        if (pred[p].size() != gold[p].size())
            throw LengthMismatchError(
                "page " + std::to_string(p) +
                ": prediction and gold block counts differ");
        PageScore page;
        if (p < page_ids.size()) page.id = page_ids[p];
        for (size_t b = 0; b < pred[p].size(); ++b) {
            bool pred_main = pred[p][b] == Label::kMain;
            bool gold_main = gold[p][b] == Label::kMain;
            if (pred_main && gold_main)
                ++page.tp;
            else if (pred_main)
                ++page.fp;
            else if (gold_main)
                ++page.fn;
            else
                ++page.tn;
        }
        page.precision = ratio(page.tp, page.tp + page.fp);
        page.recall = ratio(page.tp, page.tp + page.fn);
        page.f1 = f1_score(page.precision, page.recall);
        report.tp += page.tp;
        report.fp += page.fp;
        report.fn += page.fn;
        report.tn += page.tn;
        if (!pred[p].empty()) {
            macro_p += page.precision;
            macro_r += page.recall;
            macro_f += page.f1;
            ++scored_pages;
        }
        report.pages.push_back(std::move(page));
    }
    report.precision = ratio(report.tp, report.tp + report.fp);
    report.recall = ratio(report.tp, report.tp + report.fn);
    report.f1 = f1_score(report.precision, report.recall);
    if (scored_pages > 0) {
        report.macro_precision = macro_p / static_cast<double>(scored_pages);
        report.macro_recall = macro_r / static_cast<double>(scored_pages);
        report.macro_f1 = macro_f / static_cast<double>(scored_pages);
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json pages = nlohmann::json::array();
    for (const PageScore& p : report.pages)
        pages.push_back({{"id", p.id},
                         {"tp", p.tp},
                         {"fp", p.fp},
                         {"fn", p.fn},
                         {"tn", p.tn},
                         {"precision", p.precision},
                         {"recall", p.recall},
                         {"f1", p.f1}});
    nlohmann::json j{{"tp", report.tp},
                     {"fp", report.fp},
                     {"fn", report.fn},
                     {"tn", report.tn},
                     {"precision", report.precision},
                     {"recall", report.recall},
                     {"f1", report.f1},
                     {"macro_precision", report.macro_precision},
                     {"macro_recall", report.macro_recall},
                     {"macro_f1", report.macro_f1},
                     {"pages", std::move(pages)}};
    return j.dump(2);
}

}  // namespace semtext
