#include "pswm/scoring.hpp"

#include <algorithm>
#include <map>

namespace pswm {

namespace {

std::set<std::string> distinct_leaves(const QuerySyntaxTree& tree) {
    return {tree.leaves.begin(), tree.leaves.end()};
}

}  // namespace

std::set<std::string> syntactic_candidates(const QuerySyntaxTree& tree, const InvertedIndex& index) {
    std::set<std::string> out;
    for (const auto& leaf : distinct_leaves(tree)) {
        if (const auto* list = index.find_postings(leaf)) {
            for (const auto& p : *list) out.insert(p.doc_id);
        }
    }
    return out;
}

double syntactic_score(const QuerySyntaxTree& tree, const Document& doc) {
    const auto leaves = distinct_leaves(tree);
    if (leaves.empty()) return 0.0;
    const auto body = tokenize(doc.body);
    const std::set<std::string> body_tokens(body.begin(), body.end());
    std::size_t matched = 0;
    for (const auto& leaf : leaves) matched += body_tokens.count(leaf);
    return static_cast<double>(matched) / static_cast<double>(leaves.size());
}

std::set<std::string> semantic_keys(const MetaRecord& meta) {
    std::set<std::string> keys = meta.keywords;
    for (const auto& [tag, weight] : meta.concepts) {
        if (weight >= kConceptWeightThreshold) {
            for (auto& t : tokenize(tag)) keys.insert(std::move(t));
        }
    }
    return keys;
}

double semantic_score(const QuerySyntaxTree& tree, const MetaRecord& meta) {
    const auto query = distinct_leaves(tree);
    const auto keys = semantic_keys(meta);
    std::size_t common = 0;
    for (const auto& q : query) common += keys.count(q);
    const std::size_t united = query.size() + keys.size() - common;
    if (united == 0) return 0.0;
    return static_cast<double>(common) / static_cast<double>(united);
}

std::vector<CandidateFeatures> analyze(const QuerySyntaxTree& tree, const InvertedIndex& index) {
    const auto leaves = distinct_leaves(tree);
    std::vector<const std::vector<Posting>*> lists;
    for (const auto& leaf : leaves) {
        if (const auto* list = index.find_postings(leaf)) lists.push_back(list);
    }

    // Number of distinct leaves each candidate matches, read straight off the postings.
    std::map<std::string, std::size_t> matched;
    for (const auto* list : lists) {
        for (const auto& p : *list) ++matched[p.doc_id];
    }

    std::vector<CandidateFeatures> out;
    out.reserve(matched.size());
    for (const auto& [id, count] : matched) {
        const Document* doc = index.find_doc(id);
        CandidateFeatures f;
        f.doc_id = id;
        f.syntactic = static_cast<double>(count) / static_cast<double>(leaves.size());
        f.semantic = doc ? semantic_score(tree, doc->meta) : 0.0;
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace pswm
