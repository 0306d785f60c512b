#pragma once

// Random grids, masks and shapes for the oracle comparisons.

#include <random>
#include <vector>

#include "crystalbench/evaluator.hpp"
#include "oracles.hpp"

namespace support {

struct RandomCase {
    crystalbench::CellMask mask;
    std::vector<crystalbench::Shape> shapes;
    std::vector<std::vector<std::size_t>> windows;  // cells per side, per shape
};

// A grid with at most 2^max_log_cells cells, a mask of random density and
// 1..4 shapes that fit on it.
inline RandomCase random_case(std::mt19937_64& rng, int max_log_cells = 12) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<int> logs(n, 0);
    int budget = static_cast<int>(rng() % static_cast<unsigned>(max_log_cells + 1));
    for (int k = 0; k < budget; ++k) ++logs[rng() % n];
    std::vector<int> res(n), ext(n);
    for (std::size_t j = 0; j < n; ++j) {
        res[j] = static_cast<int>(rng() % 5) - 2;
        ext[j] = res[j] + logs[j];
    }
    crystalbench::GridSpec grid(res, ext);
    crystalbench::CellMask mask(grid);
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::bernoulli_distribution bit(density);
    for (std::size_t i = 0; i < grid.total_cells(); ++i) mask.set(i, bit(rng));

    RandomCase out{mask, {}, {}};
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<int> e(n);
        std::vector<std::size_t> w(n);
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = res[j] + static_cast<int>(rng() % static_cast<unsigned>(logs[j] + 1));
            w[j] = std::size_t{1} << (e[j] - res[j]);
        }
        out.shapes.emplace_back(e);
        out.windows.push_back(w);
    }
    return out;
}

inline oracle::Rational rational(const crystalbench::DyadicRational& v) { return v.to_rational(); }

}  // namespace support
