#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttp {

// Malformed instance, model or CSV text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A packing whose weight exceeds the knapsack, or a DP table beyond its work budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateGenotypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedExpansionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Missing prerequisite artifact for a pipeline stage.
class StageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ttp
