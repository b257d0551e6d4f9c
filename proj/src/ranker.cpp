#include "pswm/ranker.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pswm/errors.hpp"

namespace pswm {

std::vector<RankedResult> attach_probabilities(const std::vector<CandidateFeatures>& candidates,
                                               const Network& net) {
    if (net.layer_sizes.empty() || net.input_size() != 2 || net.output_size() != 1) {
        throw ContractError("ranking network must have 2 inputs and 1 output");
    }
    std::vector<RankedResult> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        const std::array<double, 2> features{c.syntactic, c.semantic};
        const auto acts = forward(net, features);
        out.push_back(RankedResult{c.doc_id, c.syntactic, c.semantic, acts.back().front()});
    }
    return out;
}

ResultPage format_results(std::vector<RankedResult> ranked, double cutoff, std::optional<std::size_t> top_k,
                          std::string query) {
    ResultPage page;
    page.query = std::move(query);
    page.cutoff = cutoff;
    page.total_candidates = ranked.size();

    std::erase_if(ranked, [cutoff](const RankedResult& r) { return !(r.probability >= cutoff); });
    std::sort(ranked.begin(), ranked.end(), [](const RankedResult& a, const RankedResult& b) {
        if (a.probability != b.probability) return a.probability > b.probability;
        return a.doc_id < b.doc_id;
    });
    if (top_k && ranked.size() > *top_k) ranked.resize(*top_k);
    page.results = std::move(ranked);
    return page;
}

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string render_text(const ResultPage& page) {
    std::size_t id_width = 6;
    for (const auto& r : page.results) id_width = std::max(id_width, r.doc_id.size());

    std::ostringstream out;
    out << "query: " << page.query << "  (cutoff " << fixed4(page.cutoff) << ", " << page.total_candidates
        << " candidates)\n";
    out << pad_left("rank", 4) << "  " << pad_right("doc_id", id_width) << "  probability  syntactic  semantic\n";
    std::size_t rank = 1;
    for (const auto& r : page.results) {
        out << pad_left(std::to_string(rank++), 4) << "  " << pad_right(r.doc_id, id_width) << "  "
            << pad_right(fixed4(r.probability), 11) << "  " << pad_right(fixed4(r.syntactic), 9) << "  "
            << fixed4(r.semantic) << '\n';
    }
    out << page.results.size() << (page.results.size() == 1 ? " result\n" : " results\n");
    return out.str();
}

std::string render_machine(const ResultPage& page) {
    nlohmann::ordered_json j;
    j["query"] = page.query;
    j["cutoff"] = page.cutoff;
    j["total_candidates"] = page.total_candidates;
    j["results"] = nlohmann::ordered_json::array();
    std::size_t rank = 1;
    for (const auto& r : page.results) {
        nlohmann::ordered_json row;
        row["rank"] = rank++;
        row["doc_id"] = r.doc_id;
        row["probability"] = r.probability;
        row["syntactic"] = r.syntactic;
        row["semantic"] = r.semantic;
        j["results"].push_back(std::move(row));
    }
    return j.dump() + "\n";
}

}  // namespace

std::string render(const ResultPage& page, RenderMode mode) {
    return mode == RenderMode::machine ? render_machine(page) : render_text(page);
}

ResultPage parse_machine_page(std::string_view json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        ResultPage page;
        page.query = j.at("query").get<std::string>();
        page.cutoff = j.at("cutoff").get<double>();
        page.total_candidates = j.at("total_candidates").get<std::size_t>();
        std::size_t expected_rank = 1;
        for (const auto& row : j.at("results")) {
            if (row.at("rank").get<std::size_t>() != expected_rank++) throw DataError("result ranks are not 1..n");
            page.results.push_back(RankedResult{row.at("doc_id").get<std::string>(),
                                                row.at("syntactic").get<double>(),
                                                row.at("semantic").get<double>(),
                                                row.at("probability").get<double>()});
        }
        return page;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed result page: ") + e.what());
    }
}

}  // namespace pswm
