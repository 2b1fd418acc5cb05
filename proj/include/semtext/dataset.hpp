#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semtext/model.hpp"

namespace semtext {

// One annotated block as stored in the dataset: the raw tag path, raw class
// tokens, normalized text, and the gold label.
struct LabeledBlock {
    std::vector<std::string> tags;
    std::vector<std::string> classes;
    std::string text;
    Label label = Label::kBoilerplate;
};

struct LabeledPage {
    std::string id;
    std::vector<LabeledBlock> blocks;
};

// JSON Lines, one page per line:
//   {"id": "...", "blocks": [{"tags": [...], "classes": [...],
//                             "text": "...", "label": "main"}, ...]}
std::vector<LabeledPage> parse_pages_jsonl(std::istream& in);
std::vector<LabeledPage> load_pages_jsonl(const std::string& path);

std::string page_to_jsonl(const LabeledPage& page);
void save_pages_jsonl(const std::vector<LabeledPage>& pages,
                      const std::string& path);

}  // namespace semtext
