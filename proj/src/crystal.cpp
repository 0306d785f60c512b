#include "crystalbench/crystal.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

#include "crystalbench/errors.hpp"

namespace crystalbench {

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        int value = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size())
            throw ParameterError("malformed integer list: '" + std::string(text) + "'");
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

ScaleSet::ScaleSet(std::vector<int> scales) : scales_(std::move(scales)) {
    if (scales_.empty()) throw ParameterError("scale set must not be empty");
    for (std::size_t i = 1; i < scales_.size(); ++i)
        if (scales_[i - 1] >= scales_[i])
            throw ParameterError("scale set must be strictly increasing: " + to_string());
}

ScaleSet ScaleSet::parse(std::string_view text) {
    return ScaleSet(parse_int_list(text));
}

std::string ScaleSet::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < scales_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(scales_[i]);
    }
    return out;
}

ScaleSet suffix(const ScaleSet& scales, std::size_t first) {
    if (first < 1 || first > scales.size())
        throw ParameterError("suffix index " + std::to_string(first) + " outside 1.." +
                             std::to_string(scales.size()));
    const auto values = scales.values();
    return ScaleSet(std::vector<int>(values.begin() + static_cast<std::ptrdiff_t>(first - 1), values.end()));
}

namespace {

DyadicSet1D rasterize_scales(const ScaleSet& scales, int resolution, int extent) {
    if (resolution > scales.min())
        throw ParameterError("crystal rasterization: resolution coarser than the finest scale");
    if (extent < scales.max())
        throw ParameterError("crystal rasterization: extent smaller than the coarsest scale");
    DyadicSet1D set = interval_set(scales.max(), resolution, extent);
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
        set = set_intersect(set, oscillation_set(scales[i], resolution, extent));
    return set;
}

} // namespace

DyadicSet1D Crystal1D::rasterize(int resolution, int extent) const {
    return rasterize_scales(scales_, resolution, extent);
}

DyadicRational Crystal1D::measure() const {
    return DyadicRational::pow2(static_cast<std::int64_t>(scales_.max()) -
                                static_cast<std::int64_t>(scales_.size() - 1));
}

Crystal1D build_crystal(const ScaleSet& scales) {
    return Crystal1D(scales, rasterize_scales(scales, scales.min(), scales.max()));
}

CrystalND::CrystalND(std::vector<Crystal1D> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ParameterError("crystal product needs at least one factor");
}

std::int64_t Shape::volume_exponent() const {
    std::int64_t sum = 0;
    for (int e : exponents_) sum += e;
    return sum;
}

Shape Shape::dilated(int t) const {
    std::vector<int> out(exponents_);
    for (int& e : out) e += t;
    return Shape(std::move(out));
}

Shape Shape::parse(std::string_view text) {
    if (!text.empty() && text.front() == '(') text.remove_prefix(1);
    if (!text.empty() && text.back() == ')') text.remove_suffix(1);
    return Shape(parse_int_list(text));
}

std::string Shape::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(exponents_[i]);
    }
    return out + ")";
}

namespace {

// Largest b with I_b contained in the rasterized set.
int largest_anchored_scale(const DyadicSet1D& set) {
    if (set.cell_count() == 0 || !set.test(0))
        throw ConstructionError("set contains no anchored interval");
    std::size_t run = 0;
    while (run < set.cell_count() && set.test(run)) ++run;
    return set.resolution() + static_cast<int>(std::bit_width(run)) - 1;
}

} // namespace

Shape primitive_rectangle(const CrystalND& crystal) {
    // A box is inside a product iff each side is inside its factor, so the
    // per-axis maxima form the unique largest anchored rectangle.
    std::vector<int> exponents;
    exponents.reserve(crystal.dimension());
    for (const Crystal1D& factor : crystal.factors()) exponents.push_back(largest_anchored_scale(factor.set()));
    return Shape(std::move(exponents));
}

DyadicRational crystal_measure(const CrystalND& crystal) {
    DyadicRational total = DyadicRational::integer(1);
    for (const Crystal1D& factor : crystal.factors()) total *= factor.measure();
    return total;
}

} // namespace crystalbench
