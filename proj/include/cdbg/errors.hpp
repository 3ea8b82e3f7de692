#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cdbg {

// Exit code conventions used by the CLI: 0 success, 1 usage, 2 input, 3 resource.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the exact edge table would exceed its configured key budget.
// Carries the cardinality reached so the operator can size the round count.
struct TableOverflow : ResourceError {
    TableOverflow(std::uint64_t cardinality, std::uint64_t limit)
        : ResourceError("exact edge table exceeded " + std::to_string(limit) +
                        " keys (cardinality " + std::to_string(cardinality) +
                        "); increase the number of rounds"),
          cardinality(cardinality), limit(limit) {}
    std::uint64_t cardinality;
    std::uint64_t limit;
};

struct ParseError : InputError {
    ParseError(const std::string& what, std::size_t line)
        : InputError(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

}  // namespace cdbg
