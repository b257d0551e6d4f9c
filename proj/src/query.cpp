#include "pswm/query.hpp"

#include "pswm/errors.hpp"

namespace pswm {

namespace {

bool is_token_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char ascii_lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string token;
    for (unsigned char c : text) {
        if (is_token_byte(c)) {
            token.push_back(ascii_lower(c));
        } else if (!token.empty()) {
            tokens.push_back(std::move(token));
            token.clear();
        }
    }
    if (!token.empty()) {
        tokens.push_back(std::move(token));
    }
    return tokens;
}

QuerySyntaxTree build_syntax_tree(std::string_view query) {
    QuerySyntaxTree tree{std::string(query), tokenize(query)};
    if (tree.leaves.empty()) {
        throw EmptyQueryError("query contains no searchable tokens");
    }
    return tree;
}

}  // namespace pswm
