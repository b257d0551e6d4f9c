#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pswm/neural.hpp"
#include "pswm/scoring.hpp"

namespace pswm {

inline constexpr double kDefaultCutoff = 0.5;

struct RankedResult {
    std::string doc_id;
    double syntactic = 0.0;
    double semantic = 0.0;
    double probability = 0.0;

    bool operator==(const RankedResult&) const = default;
};

struct ResultPage {
    std::string query;
    std::vector<RankedResult> results;
    double cutoff = kDefaultCutoff;
    std::size_t total_candidates = 0;

    bool operator==(const ResultPage&) const = default;
};

enum class RenderMode { text, machine };

/// probability = forward(net, {syntactic, semantic}) output. Order preserving.
/// Throws ContractError unless the network is n_in = 2, n_out = 1.
std::vector<RankedResult> attach_probabilities(const std::vector<CandidateFeatures>& candidates,
                                               const Network& net);

/// Keeps probability >= cutoff, sorts by probability descending then doc id
/// ascending, truncates to top_k.
ResultPage format_results(std::vector<RankedResult> ranked, double cutoff,
                          std::optional<std::size_t> top_k = std::nullopt,
                          std::string query = {});

std::string render(const ResultPage& page, RenderMode mode);

/// Inverse of render(page, RenderMode::machine). Throws DataError.
ResultPage parse_machine_page(std::string_view json_text);

}  // namespace pswm
