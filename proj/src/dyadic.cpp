#include "crystalbench/dyadic.hpp"

#include <algorithm>

#include "crystalbench/errors.hpp"

namespace crystalbench {

namespace {

BigInt shift_left(const BigInt& value, std::int64_t k) {
    return value << static_cast<unsigned>(k);
}

BigInt pow_big(unsigned base, std::int64_t exponent) {
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

} // namespace

DyadicRational::DyadicRational(BigInt mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    if (mantissa_.is_zero()) {
        exponent_ = 0;
        return;
    }
    const bool negative = mantissa_.sign() < 0;
    BigInt magnitude = boost::multiprecision::abs(mantissa_);
    const auto trailing = boost::multiprecision::lsb(magnitude);
    if (trailing > 0) {
        magnitude >>= trailing;
        exponent_ += static_cast<std::int64_t>(trailing);
    }
    mantissa_ = negative ? BigInt(-magnitude) : magnitude;
}

DyadicRational DyadicRational::scaled(std::int64_t k) const {
    return {mantissa_, exponent_ + k};
}

BigRational DyadicRational::to_rational() const {
    if (exponent_ >= 0) return BigRational(shift_left(mantissa_, exponent_));
    return BigRational(mantissa_, shift_left(BigInt(1), -exponent_));
}

std::string DyadicRational::to_string() const {
    return mantissa_.str() + "*2^" + std::to_string(exponent_);
}

std::string DyadicRational::to_decimal() const {
    if (exponent_ >= 0) return shift_left(mantissa_, exponent_).str();
    const auto places = static_cast<std::size_t>(-exponent_);
    // m * 2^-k = (m * 5^k) / 10^k
    std::string digits = (boost::multiprecision::abs(mantissa_) * pow_big(5, -exponent_)).str();
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return (mantissa_.sign() < 0 ? "-" : "") + digits;
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::int64_t e = std::min(a.exponent_, b.exponent_);
    return {shift_left(a.mantissa_, a.exponent_ - e) + shift_left(b.mantissa_, b.exponent_ - e), e};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
    return a + (-b);
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    return {a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_};
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const int s = (a - b).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

ExactRatio::ExactRatio(const DyadicRational& num, const DyadicRational& den) {
    if (den.is_zero()) throw ParameterError("ExactRatio: zero denominator");
    value_ = num.to_rational() / den.to_rational();
}

std::string ExactRatio::to_string() const {
    const BigInt& den = boost::multiprecision::denominator(value_);
    if (den == 1) return boost::multiprecision::numerator(value_).str();
    return boost::multiprecision::numerator(value_).str() + "/" + den.str();
}

std::string ExactRatio::to_decimal(int digits) const {
    const BigInt num = boost::multiprecision::numerator(value_);
    const BigInt& den = boost::multiprecision::denominator(value_);
    const BigInt scaled = boost::multiprecision::abs(num) * pow_big(10, digits) / den;
    std::string text = scaled.str();
    const auto places = static_cast<std::size_t>(digits);
    if (places > 0) {
        if (text.size() <= places) text.insert(0, places - text.size() + 1, '0');
        text.insert(text.size() - places, ".");
    }
    return (num.sign() < 0 ? "-" : "") + text;
}

DyadicSet1D::DyadicSet1D(int resolution, int extent)
    : resolution_(resolution), extent_(extent) {
    if (resolution > extent)
        throw ParameterError("DyadicSet1D: resolution " + std::to_string(resolution) +
                             " is coarser than extent " + std::to_string(extent));
    if (extent - resolution > kMaxLogCells)
        throw ParameterError("DyadicSet1D: 2^" + std::to_string(extent - resolution) +
                             " cells exceeds the 1D limit");
    cells_.resize(std::size_t{1} << (extent - resolution));
}

DyadicSet1D::DyadicSet1D(int resolution, int extent, boost::dynamic_bitset<std::uint64_t> cells)
    : DyadicSet1D(resolution, extent) {
    if (cells.size() != cells_.size())
        throw ParameterError("DyadicSet1D: bitset length does not match 2^(L-r)");
    cells_ = std::move(cells);
}

DyadicRational DyadicSet1D::measure() const {
    return {BigInt(popcount()), resolution_};
}

std::vector<std::size_t> DyadicSet1D::set_cells() const {
    std::vector<std::size_t> out;
    out.reserve(popcount());
    for (auto i = cells_.find_first(); i != cells_.npos; i = cells_.find_next(i)) out.push_back(i);
    return out;
}

bool DyadicSet1D::is_subset_of(const DyadicSet1D& other) const {
    if (resolution_ != other.resolution_ || extent_ != other.extent_)
        throw ParameterError("is_subset_of: mismatched grids");
    return cells_.is_subset_of(other.cells_);
}

DyadicSet1D DyadicSet1D::refine(int new_resolution) const {
    if (new_resolution > resolution_)
        throw ParameterError("refine: target resolution is coarser than the current one");
    DyadicSet1D out(new_resolution, extent_);
    const std::size_t factor = std::size_t{1} << (resolution_ - new_resolution);
    for (auto i = cells_.find_first(); i != cells_.npos; i = cells_.find_next(i))
        out.cells_.set(i * factor, factor, true);
    return out;
}

DyadicSet1D interval_set(int scale, int resolution, int extent) {
    if (resolution > scale)
        throw ParameterError("interval_set: resolution coarser than the interval scale");
    if (scale > extent) throw ParameterError("interval_set: interval exceeds the extent");
    DyadicSet1D out(resolution, extent);
    boost::dynamic_bitset<std::uint64_t> bits(out.cell_count());
    bits.set(0, std::size_t{1} << (scale - resolution), true);
    return {resolution, extent, std::move(bits)};
}

DyadicSet1D oscillation_set(int scale, int resolution, int extent) {
    if (resolution > scale)
        throw ParameterError("oscillation_set: resolution coarser than the oscillation scale");
    if (scale + 1 > extent)
        throw ParameterError("oscillation_set: extent holds less than one full period");
    DyadicSet1D out(resolution, extent);
    boost::dynamic_bitset<std::uint64_t> bits(out.cell_count());
    const std::size_t block = std::size_t{1} << (scale - resolution);
    for (std::size_t start = 0; start < bits.size(); start += 2 * block) bits.set(start, block, true);
    return {resolution, extent, std::move(bits)};
}

namespace {

void require_same_grid(const DyadicSet1D& x, const DyadicSet1D& y, const char* op) {
    if (x.resolution() != y.resolution() || x.extent() != y.extent())
        throw ParameterError(std::string(op) + ": mismatched grids (refine explicitly first)");
}

} // namespace

DyadicSet1D set_intersect(const DyadicSet1D& x, const DyadicSet1D& y) {
    require_same_grid(x, y, "set_intersect");
    return {x.resolution(), x.extent(), x.bits() & y.bits()};
}

DyadicSet1D set_union(const DyadicSet1D& x, const DyadicSet1D& y) {
    require_same_grid(x, y, "set_union");
    return {x.resolution(), x.extent(), x.bits() | y.bits()};
}

DyadicSet1D set_diff(const DyadicSet1D& x, const DyadicSet1D& y) {
    require_same_grid(x, y, "set_diff");
    return {x.resolution(), x.extent(), x.bits() - y.bits()};
}

TranslateResult translate(const DyadicSet1D& x, std::int64_t cells) {
    const auto size = static_cast<std::int64_t>(x.cell_count());
    boost::dynamic_bitset<std::uint64_t> bits(x.cell_count());
    if (cells > -size && cells < size) {
        bits = cells >= 0 ? x.bits() << static_cast<std::size_t>(cells)
                          : x.bits() >> static_cast<std::size_t>(-cells);
    }
    const bool truncated = bits.count() != x.popcount();
    return {DyadicSet1D(x.resolution(), x.extent(), std::move(bits)), truncated};
}

} // namespace crystalbench
