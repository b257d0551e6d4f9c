#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pswm {

/// Lowercases ASCII letters and splits on every run of bytes that are not
/// ASCII alphanumerics. Bytes >= 0x80 are kept as token characters so that
/// multi-byte UTF-8 sequences stay intact. Empty tokens are dropped.
///
/// The same function normalizes query strings, document bodies and metadata.
std::vector<std::string> tokenize(std::string_view text);

/// Root node plus ordered leaf tokens of a parsed query. The tree carries no
/// operators; leaves are matched with OR semantics during candidate generation.
struct QuerySyntaxTree {
    std::string raw;
    std::vector<std::string> leaves;

    bool operator==(const QuerySyntaxTree&) const = default;
};

/// Throws EmptyQueryError when the query has no tokens.
QuerySyntaxTree build_syntax_tree(std::string_view query);

}  // namespace pswm
