#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Base class for all errors raised by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (infix expression, prefix token stream, tower file).
struct parse_error : error {
    parse_error(const std::string& what, std::size_t position)
        : error(what + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

/// Mathematically invalid request (division by zero, unknown indeterminate, ...).
struct domain_error : error {
    using error::error;
};

/// An expression cannot be represented over the given tower.
struct conversion_error : error {
    using error::error;
};

/// Bad generator/CLI configuration.
struct config_error : error {
    using error::error;
};

/// Generation gave up (degenerate drafts exhausted the retry budget).
struct generation_error : error {
    using error::error;
};

} // namespace liouville
