#pragma once

#include <string>
#include <vector>

#include "semtext/model.hpp"

namespace semtext {

// Block-level scores with MAIN as the positive class.
struct PageScore {
    std::string id;
    size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct EvalReport {
    size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;  // micro (pooled counts)
    double macro_precision = 0.0, macro_recall = 0.0,
           macro_f1 = 0.0;  // mean over non-empty pages, diagnostics only
    std::vector<PageScore> pages;
};

double f1_score(double precision, double recall);

// One label sequence per page; pred and gold must align page by page and
// block by block (LengthMismatchError otherwise).
EvalReport evaluate(const std::vector<std::vector<Label>>& pred,
                    const std::vector<std::vector<Label>>& gold,
                    const std::vector<std::string>& page_ids = {});

std::string report_to_json(const EvalReport& report);

}  // namespace semtext
