#pragma once

// Brute-force reference implementations. Everything here works straight from
// the definitions with plain loops and shares no code with the library beyond
// its value types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

// Calls f(coords) for every point of the box [lo, hi), last axis fastest.
template <class F>
void for_each_point(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi, F&& f) {
    const std::size_t n = lo.size();
    for (std::size_t j = 0; j < n; ++j)
        if (lo[j] >= hi[j]) return;
    std::vector<std::int64_t> c = lo;
    while (true) {
        f(c);
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (++c[j] < hi[j]) break;
            c[j] = lo[j];
            if (j == 0) return;
        }
        if (n == 0) return;
    }
}

inline std::vector<std::int64_t> to_signed(std::span<const std::size_t> v) {
    return {v.begin(), v.end()};
}

inline std::size_t row_major(std::span<const std::size_t> sizes, const std::vector<std::int64_t>& c) {
    std::size_t index = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) index = index * sizes[j] + static_cast<std::size_t>(c[j]);
    return index;
}

// Is the open cell (c 2^r, (c+1) 2^r) inside C(scales)? Tested at the cell
// midpoint x = (2c+1) 2^(r-1): x lies in O_a iff floor(x / 2^a) is even, and in
// I_top iff x < 2^top. All scales must be >= r.
inline bool crystal_cell(std::span<const int> scales, int r, std::int64_t c) {
    const std::int64_t twice = 2 * c + 1;  // x in units of 2^(r-1)
    const int top = scales.back();
    if (c < 0 || twice >= (std::int64_t{1} << (top - r + 1))) return false;
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        const int shift = scales[i] - r + 1;
        if (((twice >> shift) & 1) != 0) return false;
    }
    return true;
}

inline std::vector<std::uint8_t> crystal_cells(std::span<const int> scales, int r, int extent) {
    std::vector<std::uint8_t> out(std::size_t{1} << (extent - r));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = crystal_cell(scales, r, static_cast<std::int64_t>(c));
    return out;
}

// Set cells of `bits` (row-major over `sizes`) inside the box [lo, hi), clipped to the grid.
inline std::uint64_t box_count(std::span<const std::uint8_t> bits, std::span<const std::size_t> sizes,
                               std::vector<std::int64_t> lo, std::vector<std::int64_t> hi) {
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        lo[j] = std::max<std::int64_t>(lo[j], 0);
        hi[j] = std::min<std::int64_t>(hi[j], static_cast<std::int64_t>(sizes[j]));
    }
    std::uint64_t total = 0;
    for_each_point(lo, hi, [&](const std::vector<std::int64_t>& c) { total += bits[row_major(sizes, c)] ? 1 : 0; });
    return total;
}

// Per cell, the largest average over every translate (in cell steps) of every
// window that contains the cell, including translates hanging over the edge of
// the grid. Windows are given in cells per side.
inline std::vector<Rational> maximal_field(std::span<const std::uint8_t> bits, std::span<const std::size_t> sizes,
                                           const std::vector<std::vector<std::size_t>>& windows) {
    const std::size_t n = sizes.size();
    std::size_t total = 1;
    for (std::size_t s : sizes) total *= s;
    // best average per cell as count / volume; counts and volumes stay below 2^32
    std::vector<std::uint64_t> count(total, 0), volume(total, 1);
    for (const auto& w : windows) {
        std::uint64_t vol = 1;
        std::vector<std::int64_t> lo(n), hi(n);
        for (std::size_t j = 0; j < n; ++j) {
            vol *= w[j];
            lo[j] = 1 - static_cast<std::int64_t>(w[j]);
            hi[j] = static_cast<std::int64_t>(sizes[j]);
        }
        for_each_point(lo, hi, [&](const std::vector<std::int64_t>& p) {
            std::vector<std::int64_t> end(n), clo(n), chi(n);
            for (std::size_t j = 0; j < n; ++j) {
                end[j] = p[j] + static_cast<std::int64_t>(w[j]);
                clo[j] = std::max<std::int64_t>(p[j], 0);
                chi[j] = std::min<std::int64_t>(end[j], static_cast<std::int64_t>(sizes[j]));
            }
            const std::uint64_t c = box_count(bits, sizes, p, end);
            for_each_point(clo, chi, [&](const std::vector<std::int64_t>& x) {
                const std::size_t i = row_major(sizes, x);
                if (c * volume[i] > count[i] * vol) {
                    count[i] = c;
                    volume[i] = vol;
                }
            });
        });
    }
    std::vector<Rational> out;
    out.reserve(total);
    for (std::size_t i = 0; i < total; ++i) out.emplace_back(Rational(count[i]) / volume[i]);
    return out;
}

// All maximal exponent vectors e in [lo, hi]^n such that the anchored box
// [0, 2^e_1] x ... x [0, 2^e_n] is contained in the set described by `inside`
// (a predicate on exponent vectors).
inline std::vector<std::vector<int>> maximal_contained(std::size_t n, int lo, int hi,
                                                       const std::function<bool(const std::vector<int>&)>& inside) {
    std::vector<std::vector<int>> contained;
    std::vector<std::int64_t> a(n, lo), b(n, hi + 1);
    for_each_point(a, b, [&](const std::vector<std::int64_t>& p) {
        std::vector<int> e(p.begin(), p.end());
        if (inside(e)) contained.push_back(e);
    });
    std::vector<std::vector<int>> maximal;
    for (const auto& e : contained) {
        bool dominated = false;
        for (const auto& f : contained) {
            if (f == e) continue;
            bool ge = true;
            for (std::size_t j = 0; j < n; ++j) ge = ge && f[j] >= e[j];
            if (ge) {
                dominated = true;
                break;
            }
        }
        if (!dominated) maximal.push_back(e);
    }
    return maximal;
}

// Union measure and exclusive measures of anchored boxes [0, 2^e], counted on
// the grid of cells of side 2^min (per axis) covering [0, 2^max].
struct UnionCount {
    Rational union_measure;
    std::vector<Rational> exclusive;
};

inline UnionCount anchored_union(const std::vector<std::vector<int>>& boxes) {
    const std::size_t n = boxes.front().size();
    std::vector<int> res(n), ext(n);
    for (std::size_t j = 0; j < n; ++j) {
        res[j] = ext[j] = boxes.front()[j];
        for (const auto& e : boxes) {
            res[j] = std::min(res[j], e[j]);
            ext[j] = std::max(ext[j], e[j]);
        }
    }
    Rational cell(1);
    for (std::size_t j = 0; j < n; ++j)
        cell *= res[j] >= 0 ? Rational(boost::multiprecision::cpp_int(1) << res[j])
                            : Rational(1, boost::multiprecision::cpp_int(1) << -res[j]);
    std::vector<std::int64_t> lo(n, 0), hi(n);
    for (std::size_t j = 0; j < n; ++j) hi[j] = std::int64_t{1} << (ext[j] - res[j]);
    UnionCount out{Rational(0), std::vector<Rational>(boxes.size(), Rational(0))};
    for_each_point(lo, hi, [&](const std::vector<std::int64_t>& c) {
        std::optional<std::size_t> only;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            bool in = true;
            for (std::size_t j = 0; j < n && in; ++j) in = c[j] < (std::int64_t{1} << (boxes[i][j] - res[j]));
            if (in) {
                ++hits;
                only = i;
            }
        }
        if (hits > 0) out.union_measure += cell;
        if (hits == 1) out.exclusive[*only] += cell;
    });
    return out;
}

// Longest arithmetic progression search by trying every start and step.
inline std::optional<std::pair<std::int64_t, std::int64_t>> progression(std::span<const int> values,
                                                                         std::size_t length) {
    if (values.empty()) return std::nullopt;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const std::int64_t lo = *lo_it, hi = *hi_it;
    auto has = [&](std::int64_t v) { return std::find(values.begin(), values.end(), v) != values.end(); };
    for (std::int64_t step = 1; step <= hi - lo; ++step)
        for (std::int64_t start = lo; start <= hi; ++start) {
            std::size_t k = 0;
            while (k < length && has(start + static_cast<std::int64_t>(k) * step)) ++k;
            if (k == length) return std::pair{start, step};
        }
    return std::nullopt;
}

}  // namespace oracle
