#include "crystalbench/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>

#include "crystalbench/errors.hpp"

namespace crystalbench {

namespace {

int checked_int(std::int64_t value, const char* what) {
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
        throw ParameterError(std::string(what) + " does not fit in an int scale");
    return static_cast<int>(value);
}

std::vector<std::size_t> unflatten(std::span<const std::size_t> sizes, std::size_t index) {
    std::vector<std::size_t> coords(sizes.size());
    for (std::size_t j = sizes.size(); j-- > 0;) {
        coords[j] = index % sizes[j];
        index /= sizes[j];
    }
    return coords;
}

std::string index_to_string(std::span<const int> index) {
    std::string out = "(";
    for (std::size_t k = 0; k < index.size(); ++k) out += (k ? "," : "") + std::to_string(index[k]);
    return out + ")";
}

void fill_indices(std::vector<int>& current, std::size_t k, int remaining, std::vector<std::vector<int>>& out) {
    if (current.size() == k) {
        out.push_back(current);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        current.push_back(v);
        fill_indices(current, k, remaining - v, out);
        current.pop_back();
    }
}

} // namespace

std::vector<std::vector<int>> bounded_indices(std::size_t k, int max_sum) {
    std::vector<std::vector<int>> out;
    if (max_sum < 0) return out;
    std::vector<int> current;
    fill_indices(current, k, max_sum, out);
    return out;
}

GridSpec TheoremInstance::grid(std::uint64_t budget) const {
    const auto free_axes = static_cast<std::size_t>(dimension - 1);
    std::vector<int> resolution(free_axes, x.scales().min());
    std::vector<int> extent(free_axes, x.scales().max());
    resolution.push_back(z.scales().min());
    extent.push_back(z.scales().max());
    return GridSpec(std::move(resolution), std::move(extent), budget);
}

TheoremInstance build_instance(int dimension, const Progression& progression) {
    if (dimension < 2) throw ParameterError("build_instance: dimension must be at least 2");
    const std::size_t m = progression.length();
    if (m < 2) throw ParameterError("build_instance: progression must have at least two terms");

    std::vector<int> u;
    for (std::int64_t term : progression.terms()) u.push_back(checked_int(term, "progression term"));
    std::vector<std::int64_t> h(m);
    std::vector<int> z_scales(m);
    for (std::size_t s = 0; s < m; ++s) {
        h[s] = (dimension - 1) * progression[0] + progression.step() * static_cast<std::int64_t>(s);
        z_scales[m - 1 - s] = checked_int(-h[s], "-h_s");
    }
    const ScaleSet x_scales(u);
    const ScaleSet z_scale_set(z_scales);
    Crystal1D x = build_crystal(x_scales);
    Crystal1D z = build_crystal(z_scale_set);

    const auto free_axes = static_cast<std::size_t>(dimension - 1);
    std::vector<Crystal1D> e_factors(free_axes, x);
    e_factors.push_back(z);

    std::vector<Crystal1D> x_suffix;
    std::vector<Crystal1D> z_suffix;
    for (std::size_t i = 0; i < m; ++i) {
        x_suffix.push_back(build_crystal(suffix(x_scales, i + 1)));
        z_suffix.push_back(build_crystal(suffix(z_scale_set, i + 1)));
    }

    TheoremInstance instance{dimension, progression, h, x, z, CrystalND(std::move(e_factors)),
                             bounded_indices(free_axes, static_cast<int>(m) - 1), {}, {}};
    const FamilySpec family = FamilySpec::power(dimension, u);
    for (const auto& index : instance.indices) {
        std::size_t s = 0;
        std::vector<Crystal1D> factors;
        std::vector<int> exponents;
        for (int ik : index) {
            const auto k = static_cast<std::size_t>(ik);
            factors.push_back(x_suffix[k]);
            exponents.push_back(u[k]);
            s += k;
        }
        // C(-h_s < ... < -h_0) is Z with its first m-1-s scales dropped.
        factors.push_back(z_suffix[m - 1 - s]);
        exponents.push_back(checked_int(-h[s], "-h_s"));

        CrystalND y(std::move(factors));
        Shape r(std::move(exponents));
        if (primitive_rectangle(y) != r)
            throw ConstructionError("primitive rectangle of Y" + index_to_string(index) + " is " +
                                    primitive_rectangle(y).to_string() + ", expected " + r.to_string());
        if (!is_member(r, family).member)
            throw ConstructionError("R" + index_to_string(index) + " = " + r.to_string() +
                                    " is not in the family B_{A^{n-1}}");
        instance.y.push_back(std::move(y));
        instance.r.push_back(std::move(r));
    }
    return instance;
}

InstanceRaster::InstanceRaster(const TheoremInstance& instance, std::uint64_t budget)
    : instance_(&instance), mask_e_(rasterize(instance.e, instance.grid(budget))), prefix_(mask_e_) {}

CellMask InstanceRaster::mask_y(std::size_t index) const {
    return rasterize(instance_->y.at(index), grid());
}

HomogeneityResult check_homogeneity(const InstanceRaster& raster, std::size_t index_position,
                                    MaximalOptions options) {
    const TheoremInstance& instance = raster.instance();
    HomogeneityResult result;
    result.index = instance.indices.at(index_position);
    result.rectangle = instance.r.at(index_position);

    const CellMask mask_y = raster.mask_y(index_position);
    const CellMask& mask_e = raster.mask_e();
    result.contains_e = mask_e.is_subset_of(mask_y);
    result.measure_y = mask_y.measure();

    const std::uint64_t pop_y = mask_y.popcount();
    const std::uint64_t pop_common = mask_intersect(mask_y, mask_e).popcount();
    if (pop_common > 0 && pop_y % pop_common == 0 && std::has_single_bit(pop_y / pop_common))
        result.k = std::countr_zero(pop_y / pop_common);

    const int k = result.k.value_or(static_cast<int>(instance.m()) - 1);
    const CellAverage threshold = CellAverage::make(1, k);
    const std::vector<Shape> shapes{result.rectangle};
    const AverageField field = maximal_field(raster.prefix(), shapes, options);

    bool first = true;
    for (std::size_t i = 0; i < mask_y.grid().total_cells(); ++i) {
        if (!mask_y.test(i)) continue;
        if (first || field[i] < result.min_on_y) result.min_on_y = field[i];
        first = false;
        if (!result.counterexample && field[i] < threshold)
            result.counterexample = unflatten(mask_y.grid().sizes(), i);
    }
    result.pass = result.contains_e && result.k == static_cast<int>(instance.m()) - 1 && !result.counterexample;
    return result;
}

HomogeneityResult check_homogeneity(const TheoremInstance& instance, std::size_t index_position,
                                    std::uint64_t budget) {
    return check_homogeneity(InstanceRaster(instance, budget), index_position);
}

namespace {

CellMask union_of_y(const InstanceRaster& raster, DyadicRational* sum) {
    CellMask out(raster.grid());
    for (std::size_t i = 0; i < raster.instance().y.size(); ++i) {
        const CellMask y = raster.mask_y(i);
        if (sum) *sum += y.measure();
        out = mask_union(out, y);
    }
    return out;
}

} // namespace

DisjointnessResult check_disjointness(const InstanceRaster& raster) {
    const TheoremInstance& instance = raster.instance();
    DisjointnessResult result;
    const AnchoredUnion anchored = anchored_union_measure(instance.r);
    result.used_grid = anchored.used_grid;
    for (std::size_t i = 0; i < instance.r.size(); ++i) {
        result.deltas.emplace_back(anchored.exclusive[i], instance.r[i].volume());
        if (i == 0 || result.deltas.back() < result.min_delta) result.min_delta = result.deltas.back();
    }
    result.union_y = union_of_y(raster, &result.sum_y).measure();
    result.rho = ExactRatio(result.union_y, result.sum_y);
    result.pass = result.min_delta > ExactRatio() && result.rho > ExactRatio();
    return result;
}

DisjointnessResult check_disjointness(const TheoremInstance& instance, std::uint64_t budget) {
    return check_disjointness(InstanceRaster(instance, budget));
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

DyadicRational sharpness_scale(int dimension, std::size_t m, const DyadicRational& measure_e) {
    const BigInt power = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(dimension - 1));
    return DyadicRational(power, static_cast<std::int64_t>(m)) * measure_e;
}

VerificationReport verify_theorem(int dimension, std::span<const int> set, std::size_t m,
                                  const VerifyOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    if (dimension < 2) throw ParameterError("verify_theorem: dimension must be at least 2");
    if (m < 2) throw ParameterError("verify_theorem: m must be at least 2");
    const std::optional<Progression> progression = find_progression(set, m);
    if (!progression)
        throw HypothesisError("the set contains no arithmetic progression of length " + std::to_string(m));

    VerificationReport report;
    report.kind = "theorem";
    report.dimension = dimension;
    report.m = m;
    report.set.assign(set.begin(), set.end());
    std::sort(report.set.begin(), report.set.end());
    report.set.erase(std::unique(report.set.begin(), report.set.end()), report.set.end());
    report.progression = progression;
    report.comparison = options.comparison;

    const TheoremInstance instance = build_instance(dimension, *progression);
    report.checks.push_back({"membership", true,
                             "every R(i) is a zero-sum member of B_{A^{n-1}} and the primitive rectangle of Y(i)"});

    const InstanceRaster raster(instance, options.budget);
    const GridSpec& grid = raster.grid();
    report.grid_resolution.assign(grid.resolutions().begin(), grid.resolutions().end());
    report.grid_extent.assign(grid.extents().begin(), grid.extents().end());
    report.index_count = instance.indices.size();
    report.measure_e = crystal_measure(instance.e);

    // |Y(i)| = 2^{m-1} |E|, symbolically and on the grid.
    const DyadicRational expected_y = report.measure_e.scaled(static_cast<std::int64_t>(m) - 1);
    report.measure_y_each = expected_y;
    bool measures_ok = raster.mask_e().measure() == report.measure_e;
    for (const CrystalND& y : instance.y) measures_ok = measures_ok && crystal_measure(y) == expected_y;
    report.checks.push_back({"measure_identity", measures_ok,
                             "|Y(i)| = 2^(m-1) |E| = " + expected_y.to_decimal()});

    const MaximalOptions maximal{options.threads};
    bool homogeneous = true;
    std::string homogeneity_detail = "all " + std::to_string(instance.indices.size()) + " indices pass with k = m-1";
    for (std::size_t i = 0; i < instance.indices.size(); ++i) {
        const HomogeneityResult h = check_homogeneity(raster, i, maximal);
        if (!h.pass && homogeneous) {
            homogeneous = false;
            homogeneity_detail = "index " + index_to_string(h.index) + " fails";
            if (h.counterexample) {
                std::vector<int> cell(h.counterexample->begin(), h.counterexample->end());
                homogeneity_detail += " at cell " + index_to_string(cell);
            }
        }
    }
    report.checks.push_back({"homogeneity", homogeneous, homogeneity_detail});

    DisjointnessResult disjoint = check_disjointness(raster);
    report.checks.push_back({"disjointness", disjoint.pass,
                             "min delta = " + disjoint.min_delta.to_string() + ", rho = " + disjoint.rho.to_string()});

    std::vector<Shape> shapes;
    for (const Shape& s : generate_shapes(FamilySpec::power(dimension, report.set)))
        if (shape_fits(grid, s)) shapes.push_back(s);
    report.shape_count = shapes.size();
    const AverageField field = maximal_field(raster.prefix(), shapes, maximal);

    const DyadicRational scale = sharpness_scale(dimension, m, report.measure_e);
    for (const int t : {static_cast<int>(m) - 1, static_cast<int>(m)}) {
        const DyadicRational s = superlevel_measure(field, DyadicRational::pow2(-t), options.comparison);
        report.levels.push_back({-t, s, ExactRatio(s, scale)});
    }

    const CellMask union_y = union_of_y(raster, nullptr);
    const CellMask resonant = superlevel_mask(field, DyadicRational::pow2(1 - static_cast<std::int64_t>(m)));
    report.checks.push_back({"certified_inclusion", union_y.is_subset_of(resonant),
                             "U Y(i) inside the aligned closed superlevel set at 2^-(m-1)"});
    report.checks.push_back({"lower_bound", disjoint.union_y <= resonant.measure(),
                             "|U Y(i)| = " + disjoint.union_y.to_decimal() + " <= S = " +
                                 resonant.measure().to_decimal()});
    report.checks.push_back({"level_monotone", report.levels[1].superlevel >= report.levels[0].superlevel,
                             "S(2^-m) >= S(2^-(m-1))"});
    report.checks.push_back({"ratio_positive", report.levels[0].ratio > ExactRatio(),
                             "ratio = " + report.levels[0].ratio.to_decimal()});
    report.disjointness = std::move(disjoint);

    report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started).count();
    return report;
}

VerificationReport cube_counterexample(int dimension, std::size_t m, const CubeOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    if (dimension < 1) throw ParameterError("cube_counterexample: dimension must be positive");
    if (m < 1) throw ParameterError("cube_counterexample: m must be at least 1");
    const int max_exponent = options.max_exponent.value_or(static_cast<int>(m));
    if (max_exponent < 0) throw ParameterError("cube_counterexample: max exponent must be non-negative");
    const int extent = std::max(static_cast<int>(m), max_exponent);
    const auto n = static_cast<std::size_t>(dimension);

    VerificationReport report;
    report.kind = "cube";
    report.dimension = dimension;
    report.m = m;
    report.comparison = options.verify.comparison;

    const GridSpec grid(std::vector<int>(n, 0), std::vector<int>(n, extent), options.verify.budget);
    report.grid_resolution.assign(n, 0);
    report.grid_extent.assign(n, extent);
    const CrystalND cube(std::vector<Crystal1D>(n, build_crystal(ScaleSet({0}))));
    const CellMask mask = rasterize(cube, grid);
    report.measure_e = crystal_measure(cube);

    std::vector<Shape> shapes;
    std::vector<int> exponents(n, 0);
    while (true) {
        shapes.emplace_back(exponents);
        std::size_t j = 0;
        while (j < n && ++exponents[j] > max_exponent) exponents[j++] = 0;
        if (j == n) break;
    }
    report.shape_count = shapes.size();
    const AverageField field = maximal_field(mask, shapes, MaximalOptions{options.verify.threads});

    const DyadicRational threshold = DyadicRational::pow2(-static_cast<std::int64_t>(m));
    const DyadicRational s = superlevel_measure(field, threshold, options.verify.comparison);
    report.levels.push_back({-static_cast<int>(m), s, ExactRatio(s, sharpness_scale(dimension, m, report.measure_e))});

    report.checks.push_back({"cube_in_superlevel", mask.is_subset_of(superlevel_mask(field, threshold)),
                             "Q inside the closed superlevel set"});
    report.checks.push_back({"ratio_positive", report.levels[0].ratio > ExactRatio(),
                             "ratio = " + report.levels[0].ratio.to_decimal()});
    report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace crystalbench
