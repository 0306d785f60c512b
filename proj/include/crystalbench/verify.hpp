#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crystalbench/crystal.hpp"
#include "crystalbench/dyadic.hpp"
#include "crystalbench/evaluator.hpp"
#include "crystalbench/family.hpp"

namespace crystalbench {

/// The lower-bound construction driven by an arithmetic progression u_0 < ... < u_{m-1}.
///
/// h_s = (n-1) u_0 + (u_1 - u_0) s, X = C(u_0 < ... < u_{m-1}), Z = C(-h_{m-1} < ... < -h_0),
/// E = X^{n-1} x Z. For every multi-index i >= 0 with |i| = s <= m-1,
/// Y(i) = C(u_{i_1} < ...) x ... x C(u_{i_{n-1}} < ...) x C(-h_s < ... < -h_0)
/// has primitive rectangle R(i) = (u_{i_1}, ..., u_{i_{n-1}}, -h_s), whose exponents
/// sum to zero because the progression forces h_s = u_{i_1} + ... + u_{i_{n-1}}.
struct TheoremInstance {
    int dimension;
    Progression progression;
    std::vector<std::int64_t> h;
    Crystal1D x;
    Crystal1D z;
    CrystalND e;
    std::vector<std::vector<int>> indices;  ///< lexicographic
    std::vector<CrystalND> y;
    std::vector<Shape> r;

    std::size_t m() const noexcept { return progression.length(); }
    /// Resolution u_0 / -h_{m-1} and extent u_{m-1} / -h_0 on the free / last axes.
    GridSpec grid(std::uint64_t budget = GridSpec::kDefaultBudget) const;
};

/// Multi-indices i in N^{k} with i_1 + ... + i_k <= max_sum, lexicographic.
std::vector<std::vector<int>> bounded_indices(std::size_t k, int max_sum);

/// Throws ConstructionError if some R(i) is not in B_{A^{n-1}} for A = {u_k},
/// or is not the primitive rectangle of Y(i).
TheoremInstance build_instance(int dimension, const Progression& progression);

/// Rasterized E with its prefix table, shared by all per-index checks.
class InstanceRaster {
public:
    InstanceRaster(const TheoremInstance& instance, std::uint64_t budget = GridSpec::kDefaultBudget);

    const TheoremInstance& instance() const noexcept { return *instance_; }
    const GridSpec& grid() const noexcept { return mask_e_.grid(); }
    const CellMask& mask_e() const noexcept { return mask_e_; }
    const PrefixTable& prefix() const noexcept { return prefix_; }
    CellMask mask_y(std::size_t index) const;

private:
    const TheoremInstance* instance_;
    CellMask mask_e_;
    PrefixTable prefix_;
};

struct HomogeneityResult {
    std::vector<int> index;
    Shape rectangle;
    bool contains_e = false;     ///< Y(i) ∩ E = E
    std::optional<int> k;        ///< |Y(i)| = 2^k |Y(i) ∩ E|, when the ratio is a power of two
    DyadicRational measure_y;
    CellAverage min_on_y;        ///< smallest maximal-function value over Y(i)
    std::optional<std::vector<std::size_t>> counterexample;  ///< a cell of Y(i) below 2^{-k}
    bool pass = false;
};

/// Checks Y(i) ⊂ {M_{R(i)} 1_E >= 2^{-k}} cell by cell, with k = m - 1 required.
HomogeneityResult check_homogeneity(const InstanceRaster& raster, std::size_t index_position,
                                    MaximalOptions options = {});
HomogeneityResult check_homogeneity(const TheoremInstance& instance, std::size_t index_position,
                                    std::uint64_t budget = GridSpec::kDefaultBudget);

struct DisjointnessResult {
    std::vector<ExactRatio> deltas;  ///< |R(i) \ U_{j != i} R(j)| / |R(i)|
    ExactRatio min_delta;
    DyadicRational union_y;          ///< |U Y(i)|, rasterized
    DyadicRational sum_y;            ///< sum |Y(i)|
    ExactRatio rho;                  ///< union_y / sum_y
    bool used_grid = false;
    bool pass = false;               ///< min_delta > 0 and rho > 0
};

DisjointnessResult check_disjointness(const InstanceRaster& raster);
DisjointnessResult check_disjointness(const TheoremInstance& instance,
                                      std::uint64_t budget = GridSpec::kDefaultBudget);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Superlevel measure at threshold 2^{threshold_exponent} and the ratio
/// S / (m^{n-1} 2^m |E|).
struct LevelResult {
    int threshold_exponent = 0;
    DyadicRational superlevel;
    ExactRatio ratio;
};

struct VerificationReport {
    std::string kind;  ///< "theorem" or "cube"
    int dimension = 0;
    std::size_t m = 0;
    std::vector<int> set;
    std::optional<Progression> progression;
    Comparison comparison = Comparison::AtLeast;
    std::vector<int> grid_resolution;
    std::vector<int> grid_extent;
    std::size_t shape_count = 0;

    DyadicRational measure_e;
    std::size_t index_count = 0;
    DyadicRational measure_y_each;
    std::optional<DisjointnessResult> disjointness;

    /// First entry is the primary level (2^{-(m-1)} for theorems, 2^{-m} for cubes).
    std::vector<LevelResult> levels;
    std::vector<Check> checks;
    std::int64_t runtime_ms = 0;

    bool passed() const;
};

struct VerifyOptions {
    std::uint64_t budget = GridSpec::kDefaultBudget;
    Comparison comparison = Comparison::AtLeast;
    unsigned threads = 0;
};

/// Full certification run for B_{A^{n-1}} at progression length m.
/// Throws HypothesisError when A has no arithmetic progression of length m.
VerificationReport verify_theorem(int dimension, std::span<const int> set, std::size_t m,
                                  const VerifyOptions& options = {});

struct CubeOptions {
    VerifyOptions verify;
    /// Largest side exponent of the rectangles tried; defaults to m.
    std::optional<int> max_exponent;
};

/// Superlevel set of the maximal function of the unit cube indicator at 2^{-m},
/// over all dyadic rectangles with exponents in [0, max_exponent]^n.
VerificationReport cube_counterexample(int dimension, std::size_t m, const CubeOptions& options = {});

/// m^{n-1} 2^m |E|.
DyadicRational sharpness_scale(int dimension, std::size_t m, const DyadicRational& measure_e);

} // namespace crystalbench
