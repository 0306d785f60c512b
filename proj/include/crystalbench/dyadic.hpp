#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace crystalbench {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact value mantissa * 2^exponent.
///
/// Kept in canonical form: the mantissa is odd, or zero with exponent zero,
/// so structural equality coincides with numerical equality.
class DyadicRational {
public:
    DyadicRational() = default;
    DyadicRational(BigInt mantissa, std::int64_t exponent);

    static DyadicRational integer(std::int64_t value) { return {BigInt(value), 0}; }
    static DyadicRational pow2(std::int64_t exponent) { return {BigInt(1), exponent}; }

    const BigInt& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }
    bool is_zero() const noexcept { return mantissa_.is_zero(); }
    int sign() const noexcept { return mantissa_.sign(); }

    /// Multiply by 2^k.
    DyadicRational scaled(std::int64_t k) const;

    BigRational to_rational() const;

    /// "mantissa*2^exponent".
    std::string to_string() const;
    /// Exact decimal expansion; every dyadic rational has a finite one.
    std::string to_decimal() const;

    friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
    friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
    friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
    DyadicRational operator-() const { return {-mantissa_, exponent_}; }
    DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
    DyadicRational& operator*=(const DyadicRational& o) { return *this = *this * o; }

    friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
    friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

private:
    BigInt mantissa_{0};
    std::int64_t exponent_{0};
};

/// Quotient of two exact values. Ratios reported by the verifier are not
/// dyadic in general (they divide by m^(n-1)), so they live here.
class ExactRatio {
public:
    ExactRatio() = default;
    explicit ExactRatio(BigRational value) : value_(std::move(value)) {}
    ExactRatio(const DyadicRational& num, const DyadicRational& den);

    const BigRational& value() const noexcept { return value_; }
    /// "p/q" in lowest terms ("p" when q = 1).
    std::string to_string() const;
    /// Truncated toward zero to `digits` fractional digits.
    std::string to_decimal(int digits = 12) const;

    friend bool operator==(const ExactRatio& a, const ExactRatio& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    BigRational value_{0};
};

/// [offset, offset + 2^scale].
struct DyadicInterval {
    int scale = 0;
    DyadicRational offset;

    static DyadicInterval anchored(int scale) { return {scale, {}}; }
    DyadicRational length() const { return DyadicRational::pow2(scale); }
    DyadicRational right() const { return offset + length(); }
};

/// Finite union of cells [k 2^r, (k+1) 2^r] inside [0, 2^L], one bit per cell.
class DyadicSet1D {
public:
    /// Largest number of cells a single 1D set may hold.
    static constexpr int kMaxLogCells = 32;

    DyadicSet1D(int resolution, int extent);
    DyadicSet1D(int resolution, int extent, boost::dynamic_bitset<std::uint64_t> cells);

    int resolution() const noexcept { return resolution_; }
    int extent() const noexcept { return extent_; }
    std::size_t cell_count() const noexcept { return cells_.size(); }
    std::size_t popcount() const { return cells_.count(); }
    bool test(std::size_t cell) const { return cells_.test(cell); }
    const boost::dynamic_bitset<std::uint64_t>& bits() const noexcept { return cells_; }

    DyadicRational measure() const;
    std::vector<std::size_t> set_cells() const;
    bool is_subset_of(const DyadicSet1D& other) const;

    /// Same set on a finer grid (new_resolution <= resolution).
    DyadicSet1D refine(int new_resolution) const;

    friend bool operator==(const DyadicSet1D&, const DyadicSet1D&) = default;

private:
    int resolution_;
    int extent_;
    boost::dynamic_bitset<std::uint64_t> cells_;
};

/// Rasterization of I_a = [0, 2^a] at resolution r inside [0, 2^L].
DyadicSet1D interval_set(int scale, int resolution, int extent);

/// Rasterization of the oscillation O_a = U_k (k 2^(a+1) + I_a) restricted to [0, 2^L].
DyadicSet1D oscillation_set(int scale, int resolution, int extent);

DyadicSet1D set_intersect(const DyadicSet1D& x, const DyadicSet1D& y);
DyadicSet1D set_union(const DyadicSet1D& x, const DyadicSet1D& y);
DyadicSet1D set_diff(const DyadicSet1D& x, const DyadicSet1D& y);

struct TranslateResult {
    DyadicSet1D set;
    bool truncated = false;
};

/// Shift by `cells` (positive moves toward larger coordinates). Cells leaving
/// [0, 2^L] are dropped and reported through `truncated`.
TranslateResult translate(const DyadicSet1D& x, std::int64_t cells);

} // namespace crystalbench
