#include "pswm/training.hpp"

#include <fstream>

#include "pswm/errors.hpp"
#include "pswm/query.hpp"
#include "pswm/scoring.hpp"

namespace pswm {

std::vector<Judgment> parse_judgments(std::istream& in) {
    std::vector<Judgment> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
            throw DataError("judgments line " + std::to_string(line_no) + ": expected query<TAB>doc_id<TAB>label");
        }
        Judgment j;
        j.query = line.substr(0, tab1);
        j.doc_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string label = line.substr(tab2 + 1);
        if (label == "0") {
            j.label = 0;
        } else if (label == "1") {
            j.label = 1;
        } else {
            throw DataError("judgments line " + std::to_string(line_no) + ": label must be 0 or 1, got '" + label + "'");
        }
        if (j.doc_id.empty()) throw DataError("judgments line " + std::to_string(line_no) + ": empty doc id");
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<Judgment> parse_judgments_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open judgments file " + path.string());
    return parse_judgments(in);
}

std::vector<TrainingExample> judgments_to_examples(const std::vector<Judgment>& judgments,
                                                   const InvertedIndex& index) {
    std::vector<TrainingExample> out;
    out.reserve(judgments.size());
    for (const auto& j : judgments) {
        const Document* doc = index.find_doc(j.doc_id);
        if (!doc) throw DataError("judgment references unknown document '" + j.doc_id + "'");
        QuerySyntaxTree tree;
        try {
            tree = build_syntax_tree(j.query);
        } catch (const EmptyQueryError&) {
            throw DataError("judgment for '" + j.doc_id + "' has an empty query");
        }
        out.push_back(TrainingExample{{syntactic_score(tree, *doc), semantic_score(tree, doc->meta)},
                                      {static_cast<double>(j.label)}});
    }
    return out;
}

EvalReport evaluate(const Network& net, const std::vector<Judgment>& judgments, const InvertedIndex& index) {
    if (judgments.empty()) throw ContractError("evaluate: no judgments");
    const auto examples = judgments_to_examples(judgments, index);

    EvalReport report;
    report.count = examples.size();
    std::size_t correct = 0;
    double total = 0.0;
    for (const auto& ex : examples) {
        const auto out = forward(net, ex.features).back();
        total += error(out, ex.desired);
        const bool predicted = out.front() >= kAccuracyThreshold;
        if (predicted == (ex.desired.front() >= 0.5)) ++correct;
    }
    report.mean_error = total / static_cast<double>(report.count);
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.count);
    return report;
}

}  // namespace pswm
