#pragma once

#include <stdexcept>
#include <string>

namespace bri {

/// Caller passed something outside an operation's domain (bad length, bad
/// parameter range, empty input). Maps to exit code 2 / HTTP 400.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed schema, data or labels document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Donor selection was asked to pick from an empty pool.
class NoDonors : public std::runtime_error {
public:
    NoDonors() : std::runtime_error("no complete entity available as donor") {}
};

/// Training set cannot support the requested classifier.
class DegenerateTrainingSet : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace bri
