#pragma once

#include <set>
#include <string>
#include <vector>

#include "pswm/corpus.hpp"
#include "pswm/query.hpp"

namespace pswm {

/// Concept tags at or above this weight join the document's semantic key set.
inline constexpr double kConceptWeightThreshold = 0.5;

/// Feature pair fed to the neural analyzer for one candidate document.
struct CandidateFeatures {
    std::string doc_id;
    double syntactic = 0.0;
    double semantic = 0.0;

    bool operator==(const CandidateFeatures&) const = default;
};

/// Docs whose body contains at least one leaf token.
std::set<std::string> syntactic_candidates(const QuerySyntaxTree& tree, const InvertedIndex& index);

/// Fraction of distinct leaves occurring at least once in the tokenized body.
double syntactic_score(const QuerySyntaxTree& tree, const Document& doc);

/// Keywords plus tokens of every concept tag whose weight >= kConceptWeightThreshold.
std::set<std::string> semantic_keys(const MetaRecord& meta);

/// Jaccard overlap of distinct leaves against semantic_keys(meta); 0 when both are empty.
double semantic_score(const QuerySyntaxTree& tree, const MetaRecord& meta);

/// One entry per syntactic candidate, ascending by doc id. Candidates with no
/// metadata overlap are kept; the probability cutoff decides their fate.
std::vector<CandidateFeatures> analyze(const QuerySyntaxTree& tree, const InvertedIndex& index);

}  // namespace pswm
