#include "pswm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pswm/errors.hpp"
#include "pswm/query.hpp"

namespace pswm {

using nlohmann::json;

const Document* InvertedIndex::find_doc(std::string_view id) const {
    auto it = docs.find(std::string(id));
    return it == docs.end() ? nullptr : &it->second;
}

const std::vector<Posting>* InvertedIndex::find_postings(std::string_view token) const {
    auto it = postings.find(std::string(token));
    return it == postings.end() ? nullptr : &it->second;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

std::string optional_string(const json& record, const char* key) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) return {};
    if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

Document document_from_json(const json& record) {
    if (!record.is_object()) throw DataError("record is not a JSON object");

    Document doc;
    auto id = record.find("id");
    if (id == record.end() || !id->is_string()) throw DataError("missing string field 'id'");
    doc.id = id->get<std::string>();
    if (doc.id.empty()) throw DataError("field 'id' is empty");

    auto body = record.find("body");
    if (body == record.end() || !body->is_string()) throw DataError("missing string field 'body'");
    doc.body = body->get<std::string>();

    doc.url = optional_string(record, "url");
    doc.title = optional_string(record, "title");

    std::vector<std::string> keywords;
    std::map<std::string, double> concepts;
    if (auto meta = record.find("meta"); meta != record.end() && !meta->is_null()) {
        if (!meta->is_object()) throw DataError("field 'meta' must be an object");
        if (auto kw = meta->find("keywords"); kw != meta->end()) {
            if (!kw->is_array()) throw DataError("field 'meta.keywords' must be an array");
            for (const auto& k : *kw) {
                if (!k.is_string()) throw DataError("meta.keywords entries must be strings");
                keywords.push_back(k.get<std::string>());
            }
        }
        if (auto cs = meta->find("concepts"); cs != meta->end()) {
            if (!cs->is_object()) throw DataError("field 'meta.concepts' must be an object");
            for (const auto& [tag, weight] : cs->items()) {
                if (!weight.is_number()) throw DataError("concept '" + tag + "' weight must be a number");
                concepts[tag] = weight.get<double>();
            }
        }
    }
    doc.meta = make_meta_record(keywords, concepts);
    return doc;
}

json document_to_json(const Document& doc) {
    json concepts = json::object();
    for (const auto& [tag, weight] : doc.meta.concepts) concepts[tag] = weight;
    return json{{"id", doc.id},
                {"url", doc.url},
                {"title", doc.title},
                {"body", doc.body},
                {"meta", {{"keywords", doc.meta.keywords}, {"concepts", concepts}}}};
}

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

}  // namespace

MetaRecord make_meta_record(const std::vector<std::string>& keywords,
                            const std::map<std::string, double>& concepts) {
    MetaRecord meta;
    for (const auto& k : keywords) {
        for (auto& t : tokenize(k)) meta.keywords.insert(std::move(t));
    }
    for (const auto& [raw_tag, weight] : concepts) {
        if (!std::isfinite(weight) || weight < 0.0 || weight > 1.0) {
            throw DataError("concept '" + raw_tag + "' weight outside [0, 1]");
        }
        std::string tag = join_tokens(tokenize(raw_tag));
        if (tag.empty()) continue;
        // Tags that normalize to the same string keep the strongest weight.
        auto [it, inserted] = meta.concepts.emplace(tag, weight);
        if (!inserted) it->second = std::max(it->second, weight);
    }
    return meta;
}

std::vector<Document> parse_corpus(std::istream& in) {
    std::vector<Document> docs;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        Document doc;
        try {
            doc = document_from_json(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(doc.id).second) {
            throw DataError("corpus line " + std::to_string(line_no) + ": duplicate document id '" + doc.id + "'");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> parse_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file " + path.string());
    return parse_corpus(in);
}

InvertedIndex build_index(const std::vector<Document>& docs) {
    InvertedIndex index;
    for (const auto& doc : docs) {
        if (!index.docs.emplace(doc.id, doc).second) {
            throw ContractError("duplicate document id '" + doc.id + "'");
        }
    }
    index.doc_count = index.docs.size();

    // Walking docs in id order appends postings already sorted by id.
    for (const auto& [id, doc] : index.docs) {
        std::map<std::string, std::uint32_t> counts;
        for (auto& t : tokenize(doc.body)) ++counts[std::move(t)];
        for (auto& [token, tf] : counts) {
            index.postings[token].push_back(Posting{id, tf});
        }
    }
    return index;
}

void write_index(const InvertedIndex& index, std::ostream& out) {
    std::map<std::string_view, std::size_t> ordinal;
    out << kIndexMagic << '\n';
    out << "docs " << index.docs.size() << '\n';
    for (const auto& [id, doc] : index.docs) {
        ordinal.emplace(id, ordinal.size());
        out << document_to_json(doc).dump() << '\n';
    }
    out << "postings " << index.postings.size() << '\n';
    for (const auto& [token, list] : index.postings) {
        out << token << ' ' << list.size();
        for (const auto& p : list) {
            auto it = ordinal.find(p.doc_id);
            if (it == ordinal.end()) throw ContractError("posting references unknown doc '" + p.doc_id + "'");
            out << ' ' << it->second << ' ' << p.term_frequency;
        }
        out << '\n';
    }
    out << "end\n";
}

namespace {

std::size_t read_count_line(std::istream& in, std::string_view keyword) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("index truncated: expected '" + std::string(keyword) + "' line");
    std::istringstream ls(line);
    std::string word;
    std::size_t n = 0;
    std::string extra;
    if (!(ls >> word >> n) || word != keyword || (ls >> extra)) {
        throw DataError("index: malformed '" + std::string(keyword) + "' line");
    }
    return n;
}

}  // namespace

InvertedIndex read_index(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kIndexMagic) {
        throw DataError("index: bad header, expected '" + std::string(kIndexMagic) + "'");
    }

    InvertedIndex index;
    std::vector<std::string> ids;
    const std::size_t doc_n = read_count_line(in, "docs");
    for (std::size_t i = 0; i < doc_n; ++i) {
        if (!std::getline(in, line)) throw DataError("index truncated in docs section");
        Document doc;
        try {
            doc = document_from_json(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError(std::string("index: malformed document record: ") + e.what());
        }
        if (!ids.empty() && !(ids.back() < doc.id)) throw DataError("index: documents not strictly ascending by id");
        ids.push_back(doc.id);
        index.docs.emplace(doc.id, std::move(doc));
    }
    index.doc_count = doc_n;

    const std::size_t token_n = read_count_line(in, "postings");
    for (std::size_t i = 0; i < token_n; ++i) {
        if (!std::getline(in, line)) throw DataError("index truncated in postings section");
        std::istringstream ls(line);
        std::string token;
        std::size_t n = 0;
        if (!(ls >> token >> n) || n == 0) throw DataError("index: malformed posting line " + std::to_string(i + 1));
        if (!index.postings.empty() && !(index.postings.rbegin()->first < token)) {
            throw DataError("index: tokens not strictly ascending");
        }
        std::vector<Posting> list;
        list.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t ord = 0;
            std::uint32_t tf = 0;
            if (!(ls >> ord >> tf)) throw DataError("index: truncated posting list for '" + token + "'");
            if (ord >= ids.size()) throw DataError("index: posting references unknown doc ordinal");
            if (tf == 0) throw DataError("index: zero term frequency for '" + token + "'");
            if (!list.empty() && !(list.back().doc_id < ids[ord])) {
                throw DataError("index: posting list for '" + token + "' not ascending");
            }
            list.push_back(Posting{ids[ord], tf});
        }
        std::string extra;
        if (ls >> extra) throw DataError("index: trailing data on posting line for '" + token + "'");
        index.postings.emplace(std::move(token), std::move(list));
    }

    if (!std::getline(in, line) || line != "end") throw DataError("index truncated: missing end marker");
    if (std::getline(in, line)) throw DataError("index: trailing data after end marker");
    return index;
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write index file " + path.string());
    write_index(index, out);
    if (!out.flush()) throw DataError("failed writing index file " + path.string());
}

InvertedIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open index file " + path.string());
    return read_index(in);
}

}  // namespace pswm
