#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pswm {

/// Per-document metadata: normalized keyword tokens plus weighted concept tags.
struct MetaRecord {
    std::set<std::string> keywords;
    std::map<std::string, double> concepts;  // weight in [0, 1]

    bool operator==(const MetaRecord&) const = default;
};

struct Document {
    std::string id;
    std::string url;
    std::string title;
    std::string body;
    MetaRecord meta;

    bool operator==(const Document&) const = default;
};

struct Posting {
    std::string doc_id;
    std::uint32_t term_frequency = 0;

    bool operator==(const Posting&) const = default;
};

/// Token -> postings sorted ascending by doc id. Immutable once built.
struct InvertedIndex {
    std::map<std::string, std::vector<Posting>> postings;
    std::map<std::string, Document> docs;
    std::size_t doc_count = 0;

    bool operator==(const InvertedIndex&) const = default;

    const Document* find_doc(std::string_view id) const;
    const std::vector<Posting>* find_postings(std::string_view token) const;
};

/// Normalizes raw keyword strings into tokens and validates concept weights.
/// Throws DataError when a concept weight is outside [0, 1] or not finite.
MetaRecord make_meta_record(const std::vector<std::string>& keywords,
                            const std::map<std::string, double>& concepts);

/// Line-delimited JSON, one document per non-blank line.
/// Throws DataError naming the line number (malformed record) or the id (duplicate).
std::vector<Document> parse_corpus(std::istream& in);
std::vector<Document> parse_corpus_file(const std::filesystem::path& path);

/// Throws ContractError on duplicate ids.
InvertedIndex build_index(const std::vector<Document>& docs);

// Index file layout (all lines '\n'-terminated):
//
//   PSWM-INDEX v1
//   docs <N>
//   <N lines: one compact JSON object per document, ascending by id>
//   postings <M>
//   <M lines: token <count> (<doc ordinal> <tf>)*>
//   end
//
// Doc ordinals index the docs section. Tokens never contain whitespace.
void write_index(const InvertedIndex& index, std::ostream& out);
InvertedIndex read_index(std::istream& in);
void save_index(const InvertedIndex& index, const std::filesystem::path& path);
InvertedIndex load_index(const std::filesystem::path& path);

inline constexpr std::string_view kIndexMagic = "PSWM-INDEX v1";

}  // namespace pswm
