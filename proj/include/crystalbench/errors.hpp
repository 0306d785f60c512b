#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crystalbench {

/// Violated precondition on an argument (bad scales, mismatched grids, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would need more cells than the configured budget allows.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t required_cells, std::uint64_t budget)
        : std::runtime_error(what + " (requires " + std::to_string(required_cells) +
                             " cells, budget " + std::to_string(budget) + ")"),
          required_cells_(required_cells), budget_(budget) {}

    std::uint64_t required_cells() const noexcept { return required_cells_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t required_cells_;
    std::uint64_t budget_;
};

/// The scale set does not contain an arithmetic progression of the requested length.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency assertion of a construction failed.
class ConstructionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace crystalbench
