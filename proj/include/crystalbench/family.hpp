#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "crystalbench/crystal.hpp"

namespace crystalbench {

/// Generators of a Cartesian family of rectangles in R^n.
///
/// The family is spanned by the unit-volume rectangles
/// R_a = I_{a_1} x ... x I_{a_{n-1}} x I_{-(a_1 + ... + a_{n-1})}, a in A_1 x ... x A_{n-1},
/// closed under translation and, when `dilation_closed`, under dyadic central
/// dilations. The last axis carries the volume normalization; this choice is
/// not canonical and only fixes how the generators are written down.
struct FamilySpec {
    int dimension = 2;
    std::vector<std::vector<int>> axis_sets;
    bool dilation_closed = false;

    /// B_{A^{n-1}}: the same set on every one of the n-1 free axes.
    static FamilySpec power(int dimension, std::vector<int> axis_set, bool dilation_closed = false);

    /// Throws ParameterError unless dimension >= 2 and there are n-1 non-empty axis sets.
    void validate() const;
};

void to_json(nlohmann::json& j, const FamilySpec& spec);
void from_json(const nlohmann::json& j, FamilySpec& spec);

/// Every generator shape (a_1, ..., a_{n-1}, -sum a_j). All have zero exponent sum.
std::set<Shape> generate_shapes(const FamilySpec& spec);

struct Membership {
    bool member = false;
    /// t such that shape - t(1,...,1) is a generator; 0 unless dilation_closed.
    std::optional<int> dilation;
};

Membership is_member(const Shape& shape, const FamilySpec& spec);

/// u_k = u_0 + k * step.
class Progression {
public:
    Progression(std::int64_t start, std::int64_t step, std::size_t length);
    static Progression from_terms(std::vector<std::int64_t> terms);

    std::size_t length() const noexcept { return terms_.size(); }
    std::int64_t step() const noexcept { return step_; }
    std::int64_t operator[](std::size_t k) const { return terms_[k]; }
    std::span<const std::int64_t> terms() const noexcept { return terms_; }

    friend bool operator==(const Progression&, const Progression&) = default;

private:
    std::vector<std::int64_t> terms_;
    std::int64_t step_;
};

/// A length-m arithmetic progression inside `values`, choosing the smallest
/// step and then the smallest start. Requires m >= 2.
std::optional<Progression> find_progression(std::span<const int> values, std::size_t length);

/// Zero-sum exponent vectors whose first n-1 entries lie in [-bound, bound].
std::set<Shape> zero_sum_shapes(int dimension, int bound);

} // namespace crystalbench
