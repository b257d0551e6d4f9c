#pragma once

#include <stdexcept>
#include <string>

namespace pswm {

/// Malformed or inconsistent input data (corpus, index, model, judgments).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (shapes, ranges, lengths).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The query string produced no tokens.
class EmptyQueryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace pswm
