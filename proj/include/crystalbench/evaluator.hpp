#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "crystalbench/crystal.hpp"
#include "crystalbench/dyadic.hpp"

namespace crystalbench {

/// Per-axis cell grid: axis j is cut into 2^{L_j - r_j} cells of length 2^{r_j}
/// covering [0, 2^{L_j}]. Cells are stored row-major, last axis fastest.
class GridSpec {
public:
    static constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 30;
    static constexpr std::uint64_t kHardCap = std::uint64_t{1} << 36;

    GridSpec(std::vector<int> resolution, std::vector<int> extent,
             std::uint64_t budget = kDefaultBudget);

    std::size_t dimension() const noexcept { return resolution_.size(); }
    int resolution(std::size_t axis) const { return resolution_[axis]; }
    int extent(std::size_t axis) const { return extent_[axis]; }
    std::span<const int> resolutions() const noexcept { return resolution_; }
    std::span<const int> extents() const noexcept { return extent_; }

    std::size_t cells_on_axis(std::size_t axis) const { return sizes_[axis]; }
    std::span<const std::size_t> sizes() const noexcept { return sizes_; }
    std::size_t total_cells() const noexcept { return total_; }
    std::int64_t cell_volume_exponent() const;
    DyadicRational cell_volume() const { return DyadicRational::pow2(cell_volume_exponent()); }

    /// Same extents, every resolution lowered by `levels`.
    GridSpec refined(int levels, std::uint64_t budget = kDefaultBudget) const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.resolution_ == b.resolution_ && a.extent_ == b.extent_;
    }

private:
    std::vector<int> resolution_;
    std::vector<int> extent_;
    std::vector<std::size_t> sizes_;
    std::size_t total_ = 1;
};

/// Row-major flat index of `coords` within `sizes`.
std::size_t flat_index(std::span<const std::size_t> sizes, std::span<const std::size_t> coords);

/// One bit per grid cell.
class CellMask {
public:
    explicit CellMask(GridSpec grid);
    CellMask(GridSpec grid, std::vector<std::uint8_t> bits);

    const GridSpec& grid() const noexcept { return grid_; }
    bool test(std::size_t index) const { return bits_[index] != 0; }
    void set(std::size_t index, bool value = true) { bits_[index] = value ? 1 : 0; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::uint64_t popcount() const;
    DyadicRational measure() const;
    bool is_subset_of(const CellMask& other) const;

    friend bool operator==(const CellMask&, const CellMask&) = default;

private:
    GridSpec grid_;
    std::vector<std::uint8_t> bits_;
};

CellMask mask_union(const CellMask& x, const CellMask& y);
CellMask mask_intersect(const CellMask& x, const CellMask& y);

/// Exact average count * 2^{-shift}, stored with the fraction reduced.
struct CellAverage {
    std::uint64_t count = 0;
    int shift = 0;

    static CellAverage make(std::uint64_t count, int shift);
    DyadicRational value() const { return {BigInt(count), -static_cast<std::int64_t>(shift)}; }

    friend bool operator==(const CellAverage&, const CellAverage&) = default;
    friend std::strong_ordering operator<=>(const CellAverage& a, const CellAverage& b);
};

/// Exact per-cell averages over a grid.
class AverageField {
public:
    explicit AverageField(GridSpec grid);
    AverageField(GridSpec grid, std::vector<CellAverage> values);

    const GridSpec& grid() const noexcept { return grid_; }
    const CellAverage& operator[](std::size_t index) const { return values_[index]; }
    CellAverage& operator[](std::size_t index) { return values_[index]; }
    std::span<const CellAverage> values() const noexcept { return values_; }

    /// Pointwise max with `other` (same grid).
    void merge_max(const AverageField& other);

    friend bool operator==(const AverageField&, const AverageField&) = default;

private:
    GridSpec grid_;
    std::vector<CellAverage> values_;
};

CellMask rasterize(const CrystalND& crystal, const GridSpec& grid);

/// Inclusive n-dimensional prefix sums of a mask, padded by one zero layer per axis.
class PrefixTable {
public:
    explicit PrefixTable(const CellMask& mask);

    const GridSpec& grid() const noexcept { return grid_; }
    /// Number of set cells in the half-open cell box [lo, hi).
    std::uint64_t box_sum(std::span<const std::size_t> lo, std::span<const std::size_t> hi) const;
    std::uint64_t total() const;

private:
    GridSpec grid_;
    std::vector<std::size_t> padded_sizes_;
    std::vector<std::size_t> padded_strides_;
    std::vector<std::uint64_t> table_;
};

inline PrefixTable prefix_sums(const CellMask& mask) { return PrefixTable(mask); }

/// Averages of the mask over every cell-aligned translate of one shape that
/// lies inside the grid box. Position p covers cells [p, p + window).
struct ShapeAverages {
    Shape shape;
    std::vector<std::size_t> window;     ///< cells per side
    std::vector<std::size_t> positions;  ///< translates per axis = cells - window + 1
    std::vector<std::uint64_t> counts;   ///< set cells per translate, row-major over positions
    int shift = 0;                       ///< log2 of cells per rectangle

    CellAverage average(std::size_t position_index) const { return CellAverage::make(counts[position_index], shift); }
};

/// Cells per side of `shape` on `grid`; throws ParameterError when a side is
/// finer than a cell or longer than the grid.
std::vector<std::size_t> shape_window(const GridSpec& grid, const Shape& shape);

/// Whether `shape` can be evaluated on `grid` (no side finer than a cell or longer than the box).
bool shape_fits(const GridSpec& grid, const Shape& shape);

ShapeAverages shape_average_field(const PrefixTable& table, const Shape& shape);
ShapeAverages shape_average_field(const CellMask& mask, const Shape& shape);

struct MaximalOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Per cell, the largest average over the given shapes and their aligned
/// translates containing the cell. Translates hanging over the box edge are
/// never needed: shifting such a window back inside keeps the cell and the
/// in-box part of the window, so it can only gain mass.
AverageField maximal_field(const PrefixTable& table, std::span<const Shape> shapes, MaximalOptions options = {});
AverageField maximal_field(const CellMask& mask, std::span<const Shape> shapes, MaximalOptions options = {});

enum class Comparison { AtLeast, Exceeds };

const char* to_string(Comparison comparison);

/// Cells whose value is >= threshold (AtLeast) or > threshold (Exceeds).
CellMask superlevel_mask(const AverageField& field, const DyadicRational& threshold,
                         Comparison comparison = Comparison::AtLeast);
DyadicRational superlevel_measure(const AverageField& field, const DyadicRational& threshold,
                                  Comparison comparison = Comparison::AtLeast);

/// Measures of the union of anchored boxes [0, 2^{e}] and of each box minus all the others.
struct AnchoredUnion {
    DyadicRational union_measure;
    std::vector<DyadicRational> exclusive;
    bool used_grid = false;
};

constexpr std::size_t kInclusionExclusionLimit = 20;

/// Inclusion-exclusion up to kInclusionExclusionLimit shapes, compressed grid beyond.
AnchoredUnion anchored_union_measure(std::span<const Shape> shapes);
AnchoredUnion anchored_union_inclusion_exclusion(std::span<const Shape> shapes);
AnchoredUnion anchored_union_grid(std::span<const Shape> shapes,
                                  std::uint64_t budget = GridSpec::kDefaultBudget);

/// Debug dump: "CBFIELD\0", u32 version, u32 kind (1 mask, 2 averages), u32 n,
/// n x (i32 resolution, i32 extent), then little-endian payload words.
void write_field(std::ostream& out, const CellMask& mask);
void write_field(std::ostream& out, const AverageField& field);
std::variant<CellMask, AverageField> read_field(std::istream& in);

} // namespace crystalbench
