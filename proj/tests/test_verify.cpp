#include <doctest.h>

#include <fstream>
#include <numeric>

#include "crystalbench/errors.hpp"
#include "crystalbench/verify.hpp"
#include "oracles.hpp"

using namespace crystalbench;

namespace {

std::vector<int> range(int count) {
    std::vector<int> out(static_cast<std::size_t>(count));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// E rebuilt from the crystal definition on the instance grid: free axes use the
// progression's scales, the last axis the reflected h_s.
std::vector<std::uint8_t> brute_e(int n, const std::vector<int>& u, const std::vector<std::int64_t>& h,
                                  std::vector<std::size_t>& sizes) {
    const std::size_t m = u.size();
    std::vector<int> z;
    for (std::size_t s = m; s-- > 0;) z.push_back(static_cast<int>(-h[s]));
    std::vector<std::vector<std::uint8_t>> axes;
    for (int j = 0; j + 1 < n; ++j) axes.push_back(oracle::crystal_cells(u, u.front(), u.back()));
    axes.push_back(oracle::crystal_cells(z, z.front(), z.back()));
    sizes.clear();
    for (const auto& a : axes) sizes.push_back(a.size());
    std::vector<std::int64_t> lo(axes.size(), 0), hi(oracle::to_signed(sizes));
    std::vector<std::uint8_t> bits;
    oracle::for_each_point(lo, hi, [&](const std::vector<std::int64_t>& c) {
        bool in = true;
        for (std::size_t j = 0; j < axes.size(); ++j) in = in && axes[j][static_cast<std::size_t>(c[j])];
        bits.push_back(in);
    });
    return bits;
}

}  // namespace

TEST_CASE("bounded indices") {
    const auto two = bounded_indices(2, 2);
    CHECK(two.size() == 6);
    CHECK(two.front() == std::vector<int>{0, 0});
    CHECK(two.back() == std::vector<int>{2, 0});
    CHECK(std::is_sorted(two.begin(), two.end()));
    for (std::size_t k = 1; k <= 3; ++k)
        for (int s = 0; s <= 6; ++s) CHECK(bounded_indices(k, s).size() == binomial(static_cast<std::size_t>(s) + k, k));
}

TEST_CASE("instance construction") {
    const auto inst = build_instance(3, Progression(0, 1, 3));
    CHECK(inst.h == std::vector<std::int64_t>{0, 1, 2});
    CHECK(inst.z.scales() == ScaleSet({-2, -1, 0}));
    CHECK(inst.indices.size() == 6);
    for (std::size_t i = 0; i < inst.indices.size(); ++i) {
        const Shape& r = inst.r[i];
        CHECK(std::accumulate(r.exponents().begin(), r.exponents().end(), 0) == 0);
        CHECK(primitive_rectangle(inst.y[i]) == r);
    }

    const auto small = build_instance(2, Progression(0, 1, 2));
    CHECK(small.h == std::vector<std::int64_t>{0, 1});
    CHECK(small.r.front() == Shape({0, 0}));

    const auto shifted = build_instance(2, Progression(3, 2, 3));
    CHECK(shifted.h == std::vector<std::int64_t>{3, 5, 7});
    CHECK_THROWS_AS(build_instance(1, Progression(0, 1, 2)), ParameterError);
}

TEST_CASE("instance measures") {
    for (int n = 2; n <= 4; ++n)
        for (int m = 2; m <= 5; ++m) {
            const auto inst = build_instance(n, Progression(0, 1, static_cast<std::size_t>(m)));
            const auto& u = inst.progression;
            const DyadicRational expected =
                DyadicRational::pow2((n - 1) * (u[static_cast<std::size_t>(m) - 1] - (m - 1))) *
                DyadicRational::pow2(-inst.h[0] - (m - 1));
            CHECK(crystal_measure(inst.e) == expected);
            CHECK(inst.indices.size() == binomial(static_cast<std::size_t>(m + n - 2), static_cast<std::size_t>(n - 1)));
            for (const CrystalND& y : inst.y) CHECK(crystal_measure(y) == expected.scaled(m - 1));
            if (n <= 3 && m <= 4) {
                const InstanceRaster raster(inst);
                CHECK(raster.mask_e().measure() == expected);
                std::vector<std::size_t> sizes;
                const std::vector<int> terms(u.terms().begin(), u.terms().end());
                const auto bits = brute_e(n, terms, inst.h, sizes);
                CHECK(std::vector<std::uint8_t>(raster.mask_e().bits().begin(), raster.mask_e().bits().end()) == bits);
                for (std::size_t i = 0; i < inst.y.size(); ++i) {
                    const CellMask y = raster.mask_y(i);
                    CHECK(y.measure() == expected.scaled(m - 1));
                    CHECK(raster.mask_e().is_subset_of(y));
                }
            }
        }
}

TEST_CASE("homogeneity") {
    const auto tiny = build_instance(2, Progression(0, 1, 2));
    const auto h0 = check_homogeneity(tiny, 0);
    CHECK(h0.pass);
    REQUIRE(h0.k);
    CHECK(*h0.k <= 1);

    for (int n : {2, 3}) {
        const auto inst = build_instance(n, Progression(0, 1, 3));
        for (std::size_t i = 0; i < inst.indices.size(); ++i) {
            const auto h = check_homogeneity(inst, i);
            CHECK(h.pass);
            CHECK(h.contains_e);
            REQUIRE(h.k);
            CHECK(*h.k == 2);
            CHECK(h.min_on_y.value() >= DyadicRational::pow2(-2));
            CHECK_FALSE(h.counterexample);
        }
    }
}

TEST_CASE("disjointness golden values") {
    const auto inst = build_instance(2, Progression(0, 1, 3));
    const auto d = check_disjointness(inst);
    CHECK(d.pass);

    std::vector<std::vector<int>> boxes;
    for (const Shape& r : inst.r) boxes.emplace_back(r.exponents().begin(), r.exponents().end());
    const auto brute = oracle::anchored_union(boxes);
    REQUIRE(d.deltas.size() == boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i)
        CHECK(d.deltas[i].value() == brute.exclusive[i] / inst.r[i].volume().to_rational());

    // union of the Y(i) from the crystal definition
    const InstanceRaster raster(inst);
    std::uint64_t covered = 0;
    for (std::size_t c = 0; c < raster.grid().total_cells(); ++c) {
        bool any = false;
        for (std::size_t i = 0; i < inst.y.size() && !any; ++i) any = raster.mask_y(i).test(c);
        covered += any ? 1 : 0;
    }
    CHECK(d.union_y == DyadicRational(BigInt(covered), raster.grid().cell_volume_exponent()));
    CHECK(d.sum_y == crystal_measure(inst.e).scaled(2) * DyadicRational::integer(3));

    std::ifstream golden(std::string(GOLDEN_DIR) + "/disjointness_n2_m3.txt");
    REQUIRE(golden);
    std::string key, deltas, min_delta, rho;
    golden >> key >> deltas;
    CHECK(key == "deltas");
    golden >> key >> min_delta;
    CHECK(key == "min_delta");
    golden >> key >> rho;
    CHECK(key == "rho");
    std::string got;
    for (const auto& x : d.deltas) got += (got.empty() ? "" : ",") + x.to_string();
    CHECK(got == deltas);
    CHECK(d.min_delta.to_string() == min_delta);
    CHECK(d.rho.to_string() == rho);
}

TEST_CASE("verify_theorem superlevel matches brute force") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {2, 7}, {2, 8}, {3, 2}, {3, 3}, {3, 4}, {3, 5}}) {
        CAPTURE(n);
        CAPTURE(m);
        const auto set = range(m);
        const auto report = verify_theorem(n, set, static_cast<std::size_t>(m));
        CHECK(report.passed());

        const auto inst = build_instance(n, Progression(0, 1, static_cast<std::size_t>(m)));
        std::vector<std::size_t> sizes;
        const auto bits = brute_e(n, set, inst.h, sizes);
        // every generator of B_{A^{n-1}} as a window on the instance grid
        const auto grid = inst.grid();
        std::vector<std::vector<std::size_t>> windows;
        std::vector<std::int64_t> lo(static_cast<std::size_t>(n - 1), 0), hi(static_cast<std::size_t>(n - 1), m);
        oracle::for_each_point(lo, hi, [&](const std::vector<std::int64_t>& a) {
            std::vector<int> e(a.begin(), a.end());
            e.push_back(-static_cast<int>(std::accumulate(a.begin(), a.end(), std::int64_t{0})));
            std::vector<std::size_t> w;
            for (std::size_t j = 0; j < e.size(); ++j) {
                const int d = e[j] - grid.resolution(j);
                if (d < 0 || e[j] > grid.extent(j)) return;
                w.push_back(std::size_t{1} << d);
            }
            windows.push_back(w);
        });
        CHECK(windows.size() == report.shape_count);
        const auto field = oracle::maximal_field(bits, sizes, windows);
        const oracle::Rational cell = grid.cell_volume().to_rational();
        for (const LevelResult& level : report.levels) {
            const oracle::Rational t = DyadicRational::pow2(level.threshold_exponent).to_rational();
            oracle::Rational s(0);
            for (const auto& v : field) s += v >= t ? cell : oracle::Rational(0);
            CHECK(level.superlevel.to_rational() == s);
            CHECK(level.ratio.value() == s / sharpness_scale(n, static_cast<std::size_t>(m), report.measure_e).to_rational());
        }
    }
}

TEST_CASE("verify_theorem report") {
    const std::vector<int> set{0, 1, 2, 3};
    const auto report = verify_theorem(3, set, 4);
    CHECK(report.passed());
    CHECK(report.kind == "theorem");
    CHECK(report.index_count == 10);
    CHECK(report.measure_y_each == report.measure_e.scaled(3));
    REQUIRE(report.levels.size() == 2);
    CHECK(report.levels[0].threshold_exponent == -3);
    CHECK(report.levels[1].threshold_exponent == -4);
    CHECK(report.levels[1].superlevel >= report.levels[0].superlevel);
    CHECK(report.levels[0].ratio > ExactRatio());
    REQUIRE(report.disjointness);
    CHECK(report.disjointness->union_y <= report.levels[0].superlevel);

    const auto strict = verify_theorem(3, set, 4, VerifyOptions{GridSpec::kDefaultBudget, Comparison::Exceeds, 0});
    CHECK(strict.levels[0].superlevel <= report.levels[0].superlevel);

    const std::vector<int> powers{1, 2, 4, 8};
    CHECK_THROWS_AS(verify_theorem(2, powers, 3), HypothesisError);
    CHECK_THROWS_AS(verify_theorem(1, set, 3), ParameterError);
    CHECK_THROWS_AS(verify_theorem(2, set, 1), ParameterError);
    CHECK_THROWS_AS(verify_theorem(2, range(12), 12, VerifyOptions{1000, Comparison::AtLeast, 0}), ResourceError);
}

TEST_CASE("refined grids") {
    // At 2^-(m-1) the aligned measure is already exact on the instance grid;
    // at 2^-m finer translates keep adding mass, so only monotonicity holds.
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 3}}) {
        const auto inst = build_instance(n, Progression(0, 1, static_cast<std::size_t>(m)));
        const auto shapes = generate_shapes(FamilySpec::power(n, range(m)));
        std::vector<Shape> family;
        for (const Shape& s : shapes)
            if (shape_fits(inst.grid(), s)) family.push_back(s);
        std::optional<DyadicRational> primary, slack;
        for (int level = 0; level <= 2; ++level) {
            const GridSpec grid = inst.grid().refined(level);
            const CellMask e = rasterize(inst.e, grid);
            CHECK(e.measure() == crystal_measure(inst.e));
            const AverageField field = maximal_field(e, family);
            const DyadicRational s0 = superlevel_measure(field, DyadicRational::pow2(1 - m));
            const DyadicRational s1 = superlevel_measure(field, DyadicRational::pow2(-m));
            if (primary) {
                CHECK(s0 == *primary);
                CHECK(s1 >= *slack);
            }
            primary = s0;
            slack = s1;
        }
    }
}

TEST_CASE("cube counterexample") {
    const auto one = cube_counterexample(1, 4);
    CHECK(one.passed());
    // In one dimension M 1_[0,1] >= 2^-m on [0, 2^m] exactly: ratio 1.
    CHECK(one.levels[0].superlevel == DyadicRational::pow2(4));
    CHECK(one.levels[0].ratio == ExactRatio(DyadicRational::integer(1), DyadicRational::integer(1)));

    for (int m = 1; m <= 5; ++m) {
        const auto report = cube_counterexample(2, static_cast<std::size_t>(m));
        CHECK(report.passed());
        CHECK(report.shape_count == static_cast<std::size_t>((m + 1) * (m + 1)));
        const std::size_t side = std::size_t{1} << m;
        std::vector<std::uint8_t> bits(side * side, 0);
        bits[0] = 1;
        std::vector<std::vector<std::size_t>> windows;
        for (int a = 0; a <= m; ++a)
            for (int b = 0; b <= m; ++b) windows.push_back({std::size_t{1} << a, std::size_t{1} << b});
        const std::vector<std::size_t> sizes{side, side};
        const auto field = oracle::maximal_field(bits, sizes, windows);
        std::int64_t above = 0;
        for (const auto& v : field) above += v >= oracle::Rational(1, std::int64_t{1} << m) ? 1 : 0;
        CHECK(report.levels[0].superlevel == DyadicRational::integer(above));
    }

    DyadicRational previous;
    for (int e = 0; e <= 5; ++e) {
        const auto grown = cube_counterexample(2, 4, CubeOptions{{}, e});
        CHECK(grown.levels[0].superlevel >= previous);
        previous = grown.levels[0].superlevel;
    }
    CHECK_THROWS_AS(cube_counterexample(2, 0), ParameterError);
    CHECK_THROWS_AS(cube_counterexample(3, 12, CubeOptions{{1 << 20, Comparison::AtLeast, 0}, {}}), ResourceError);
}

TEST_CASE("sharpness scale") {
    CHECK(sharpness_scale(2, 3, DyadicRational::pow2(-2)) == DyadicRational::integer(6));
    CHECK(sharpness_scale(3, 4, DyadicRational::integer(1)) == DyadicRational::integer(256));
}
