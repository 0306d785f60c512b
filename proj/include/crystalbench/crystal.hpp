#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crystalbench/dyadic.hpp"

namespace crystalbench {

/// Strictly increasing, non-empty list of scales a_1 < ... < a_m.
class ScaleSet {
public:
    explicit ScaleSet(std::vector<int> scales);

    /// Parses "0,2,3". Throws ParameterError on malformed or non-increasing input.
    static ScaleSet parse(std::string_view text);

    std::size_t size() const noexcept { return scales_.size(); }
    int operator[](std::size_t i) const { return scales_[i]; }
    int min() const noexcept { return scales_.front(); }
    int max() const noexcept { return scales_.back(); }
    std::span<const int> values() const noexcept { return scales_; }

    std::string to_string() const;

    friend bool operator==(const ScaleSet&, const ScaleSet&) = default;

private:
    std::vector<int> scales_;
};

/// A[i] = {a_i < ... < a_m}, with i counted from 1 as in A[1] = A.
ScaleSet suffix(const ScaleSet& scales, std::size_t first);

/// C(A) = I_{a_m} ∩ O_{a_1} ∩ ... ∩ O_{a_{m-1}}.
class Crystal1D {
public:
    const ScaleSet& scales() const noexcept { return scales_; }
    /// Rasterized at resolution a_1 inside [0, 2^{a_m}].
    const DyadicSet1D& set() const noexcept { return set_; }

    /// Rasterization on an arbitrary grid with resolution <= a_1 and extent >= a_m.
    DyadicSet1D rasterize(int resolution, int extent) const;

    /// 2^{a_m - (m-1)}.
    DyadicRational measure() const;

private:
    friend Crystal1D build_crystal(const ScaleSet& scales);
    Crystal1D(ScaleSet scales, DyadicSet1D set) : scales_(std::move(scales)), set_(std::move(set)) {}

    ScaleSet scales_;
    DyadicSet1D set_;
};

Crystal1D build_crystal(const ScaleSet& scales);

/// Cartesian product of one-dimensional crystals, kept symbolic.
class CrystalND {
public:
    explicit CrystalND(std::vector<Crystal1D> factors);

    std::size_t dimension() const noexcept { return factors_.size(); }
    const Crystal1D& factor(std::size_t axis) const { return factors_.at(axis); }
    std::span<const Crystal1D> factors() const noexcept { return factors_; }

private:
    std::vector<Crystal1D> factors_;
};

/// Dyadic rectangle I_{e_1} x ... x I_{e_n} up to translation.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<int> exponents) : exponents_(std::move(exponents)) {}

    std::size_t dimension() const noexcept { return exponents_.size(); }
    int operator[](std::size_t axis) const { return exponents_[axis]; }
    std::span<const int> exponents() const noexcept { return exponents_; }

    /// log2 of the volume.
    std::int64_t volume_exponent() const;
    DyadicRational volume() const { return DyadicRational::pow2(volume_exponent()); }

    /// Central dyadic dilation by 2^t.
    Shape dilated(int t) const;

    /// Parses "1,1,-2" (parentheses optional).
    static Shape parse(std::string_view text);
    /// "(1,1,-2)".
    std::string to_string() const;

    friend bool operator==(const Shape&, const Shape&) = default;
    friend auto operator<=>(const Shape&, const Shape&) = default;

private:
    std::vector<int> exponents_;
};

/// Largest anchored dyadic rectangle contained in the product.
Shape primitive_rectangle(const CrystalND& crystal);

/// Product of the factor measures.
DyadicRational crystal_measure(const CrystalND& crystal);

/// Comma-separated integers, shared by ScaleSet and Shape parsing.
std::vector<int> parse_int_list(std::string_view text);

} // namespace crystalbench
