#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "pswm/corpus.hpp"
#include "pswm/neural.hpp"

namespace pswm {

struct Judgment {
    std::string query;
    std::string doc_id;
    int label = 0;  // 0 irrelevant, 1 relevant

    bool operator==(const Judgment&) const = default;
};

struct EvalReport {
    std::size_t count = 0;
    double mean_error = 0.0;
    double accuracy = 0.0;  // fraction where (probability >= 0.5) == label
};

inline constexpr double kAccuracyThreshold = 0.5;

/// `query<TAB>doc_id<TAB>label` per line; blank lines and '#' comments skipped.
std::vector<Judgment> parse_judgments(std::istream& in);
std::vector<Judgment> parse_judgments_file(const std::filesystem::path& path);

/// Features [syntactic, semantic], desired [label]. Non-candidate docs are
/// kept with syntactic = 0. Throws DataError on unknown doc ids or empty queries.
std::vector<TrainingExample> judgments_to_examples(const std::vector<Judgment>& judgments,
                                                   const InvertedIndex& index);

/// Throws ContractError on empty judgments.
EvalReport evaluate(const Network& net, const std::vector<Judgment>& judgments,
                    const InvertedIndex& index);

}  // namespace pswm
