#include "pcgcn/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcgcn/rng.hpp"

namespace pcgcn {

namespace {
constexpr int kCoordMin = 0;
constexpr int kCoordMax = 100;
}  // namespace

Instance::Instance(std::uint64_t id, std::uint32_t p, std::vector<std::array<int, 2>> coords)
    : id_(id), n_(static_cast<std::uint32_t>(coords.size())), p_(p), coords_(std::move(coords)) {
    if (n_ == 0) throw std::invalid_argument("instance needs at least one vertex");
    if (p_ < 1 || p_ > n_)
        throw std::invalid_argument("p=" + std::to_string(p_) + " outside [1, n=" +
                                    std::to_string(n_) + "]");
    for (const auto& c : coords_) {
        if (c[0] < kCoordMin || c[0] > kCoordMax || c[1] < kCoordMin || c[1] > kCoordMax)
            throw std::invalid_argument("coordinate outside [0,100]");
    }
    dist_sq_.resize(static_cast<std::size_t>(n_) * n_);
    dist_.resize(static_cast<std::size_t>(n_) * n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
        for (std::uint32_t j = 0; j < n_; ++j) {
            const int dx = coords_[i][0] - coords_[j][0];
            const int dy = coords_[i][1] - coords_[j][1];
            const std::int32_t d2 = dx * dx + dy * dy;
            dist_sq_[static_cast<std::size_t>(i) * n_ + j] = d2;
            dist_[static_cast<std::size_t>(i) * n_ + j] = std::sqrt(static_cast<double>(d2));
        }
    }
}

Instance generate_instance(std::uint32_t n, std::uint32_t p, std::uint64_t seed) {
    if (p < 1 || (n > 0 && p > n) || n == 0)
        throw std::invalid_argument("generate_instance requires 1 <= p <= n");
    Rng rng(seed);
    std::vector<std::array<int, 2>> coords(n);
    for (auto& c : coords) {
        c[0] = static_cast<int>(rng.below(kCoordMax + 1));
        c[1] = static_cast<int>(rng.below(kCoordMax + 1));
    }
    return Instance(seed, p, std::move(coords));
}

KnnGraph build_knn(const Instance& inst, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const std::uint32_t n = inst.n();
    const std::uint32_t deg = std::min(k, n - 1);
    KnnGraph g;
    g.k = k;
    g.nbrs.resize(n);
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        order.resize(0);
        for (std::uint32_t j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        // ascending distance, ties by smaller index
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const std::int32_t da = inst.dist_sq(i, a);
            const std::int32_t db = inst.dist_sq(i, b);
            return da != db ? da < db : a < b;
        });
        g.nbrs[i].assign(order.begin(), order.begin() + deg);
    }
    return g;
}

double objective(const Instance& inst, const Solution& sol) {
    if (sol.open.empty()) throw std::invalid_argument("objective of an empty solution");
    const std::uint32_t n = inst.n();
    for (std::uint32_t v : sol.open)
        if (v >= n) throw std::invalid_argument("solution vertex out of range");
    std::int32_t worst = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::int32_t best = inst.dist_sq(i, sol.open[0]);
        for (std::size_t s = 1; s < sol.open.size() && best > 0; ++s)
            best = std::min(best, inst.dist_sq(i, sol.open[s]));
        worst = std::max(worst, best);
    }
    return std::sqrt(static_cast<double>(worst));
}

}  // namespace pcgcn
