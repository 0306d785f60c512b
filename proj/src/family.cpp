#include "crystalbench/family.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "crystalbench/errors.hpp"

namespace crystalbench {

FamilySpec FamilySpec::power(int dimension, std::vector<int> axis_set, bool dilation_closed) {
    FamilySpec spec;
    spec.dimension = dimension;
    if (dimension >= 2) spec.axis_sets.assign(static_cast<std::size_t>(dimension - 1), axis_set);
    spec.dilation_closed = dilation_closed;
    spec.validate();
    return spec;
}

void FamilySpec::validate() const {
    if (dimension < 2) throw ParameterError("family dimension must be at least 2");
    if (axis_sets.size() != static_cast<std::size_t>(dimension - 1))
        throw ParameterError("family needs exactly n-1 axis sets");
    for (const auto& axis : axis_sets)
        if (axis.empty()) throw ParameterError("family axis sets must be non-empty");
}

void to_json(nlohmann::json& j, const FamilySpec& spec) {
    j = nlohmann::json{{"n", spec.dimension},
                       {"axis_sets", spec.axis_sets},
                       {"dilation_closed", spec.dilation_closed}};
}

void from_json(const nlohmann::json& j, FamilySpec& spec) {
    try {
        j.at("n").get_to(spec.dimension);
        j.at("axis_sets").get_to(spec.axis_sets);
        spec.dilation_closed = j.value("dilation_closed", false);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed family spec: ") + e.what());
    }
    for (auto& axis : spec.axis_sets) {
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    }
    spec.validate();
}

std::set<Shape> generate_shapes(const FamilySpec& spec) {
    spec.validate();
    const std::size_t free_axes = spec.axis_sets.size();
    std::set<Shape> shapes;
    std::vector<std::size_t> pick(free_axes, 0);
    while (true) {
        std::vector<int> exponents(free_axes + 1);
        int sum = 0;
        for (std::size_t j = 0; j < free_axes; ++j) {
            exponents[j] = spec.axis_sets[j][pick[j]];
            sum += exponents[j];
        }
        exponents.back() = -sum;
        shapes.emplace(std::move(exponents));

        std::size_t j = 0;
        while (j < free_axes && ++pick[j] == spec.axis_sets[j].size()) pick[j++] = 0;
        if (j == free_axes) break;
    }
    return shapes;
}

Membership is_member(const Shape& shape, const FamilySpec& spec) {
    spec.validate();
    if (shape.dimension() != static_cast<std::size_t>(spec.dimension)) return {};
    const auto n = static_cast<std::int64_t>(spec.dimension);
    std::int64_t t = 0;
    if (spec.dilation_closed) {
        // Dilation by 2^t adds t to every exponent, hence n*t to the sum.
        const std::int64_t sum = shape.volume_exponent();
        if (sum % n != 0) return {};
        t = sum / n;
    } else if (shape.volume_exponent() != 0) {
        return {};
    }
    for (std::size_t j = 0; j + 1 < shape.dimension(); ++j) {
        const auto& axis = spec.axis_sets[j];
        if (std::find(axis.begin(), axis.end(), shape[j] - t) == axis.end()) return {};
    }
    return {true, spec.dilation_closed ? std::optional<int>(static_cast<int>(t)) : std::nullopt};
}

Progression::Progression(std::int64_t start, std::int64_t step, std::size_t length) : step_(step) {
    if (step <= 0) throw ParameterError("progression step must be positive");
    if (length < 1) throw ParameterError("progression must have at least one term");
    terms_.reserve(length);
    for (std::size_t k = 0; k < length; ++k) terms_.push_back(start + static_cast<std::int64_t>(k) * step);
}

Progression Progression::from_terms(std::vector<std::int64_t> terms) {
    if (terms.size() < 2) throw ParameterError("progression needs at least two terms");
    Progression p(terms[0], terms[1] - terms[0], terms.size());
    if (p.terms_ != terms) throw ParameterError("terms do not form an arithmetic progression");
    return p;
}

std::optional<Progression> find_progression(std::span<const int> values, std::size_t length) {
    if (length < 2) throw ParameterError("find_progression: length must be at least 2");
    std::vector<std::int64_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::unordered_set<std::int64_t> lookup(sorted.begin(), sorted.end());

    // Every progression is fixed by its first two terms, both in the set.
    std::optional<std::pair<std::int64_t, std::int64_t>> best;  // (step, start)
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            const std::int64_t step = sorted[j] - sorted[i];
            if (best && step > best->first) break;
            bool ok = true;
            for (std::size_t k = 2; k < length && ok; ++k)
                ok = lookup.contains(sorted[i] + static_cast<std::int64_t>(k) * step);
            if (ok && (!best || std::pair{step, sorted[i]} < *best)) best = {step, sorted[i]};
        }
    }
    if (!best) return std::nullopt;
    return Progression(best->second, best->first, length);
}

std::set<Shape> zero_sum_shapes(int dimension, int bound) {
    if (dimension < 1) throw ParameterError("zero_sum_shapes: dimension must be positive");
    if (bound < 0) throw ParameterError("zero_sum_shapes: bound must be non-negative");
    if (dimension == 1) return {Shape({0})};
    std::vector<int> range;
    for (int a = -bound; a <= bound; ++a) range.push_back(a);
    return generate_shapes(FamilySpec::power(dimension, range));
}

} // namespace crystalbench
