#include "pcgcn/decoder.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pcgcn/rng.hpp"

namespace pcgcn {

namespace {

std::vector<std::uint32_t> scan_order(std::span<const double> probs) {
    std::vector<std::uint32_t> order(probs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return probs[a] != probs[b] ? probs[a] > probs[b] : a < b;
    });
    return order;
}

void check_decode_args(const Instance& inst, std::span<const double> probs, std::uint32_t p) {
    if (probs.size() != inst.n()) throw std::invalid_argument("probs length != n");
    if (p < 1 || p > inst.n()) throw std::invalid_argument("p outside [1, n]");
}

}  // namespace

DecodeResult naive_decode(const Instance& inst, std::span<const double> probs, std::uint32_t p) {
    check_decode_args(inst, probs, p);
    const auto order = scan_order(probs);
    DecodeResult res;
    res.strategy = DecodeStrategy::naive;
    res.solution.open.assign(order.begin(), order.begin() + p);
    std::sort(res.solution.open.begin(), res.solution.open.end());
    res.z = objective(inst, res.solution);
    return res;
}

DecodeResult greedy_decode(const Instance& inst, std::span<const double> probs, std::uint32_t p) {
    check_decode_args(inst, probs, p);
    const std::uint32_t n = inst.n();
    const auto order = scan_order(probs);

    DecodeResult res;
    res.strategy = DecodeStrategy::greedy;
    std::vector<std::uint8_t> taken(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    double z = 0.0;

    auto add = [&](std::uint32_t v) {
        taken[v] = 1;
        res.solution.open.push_back(v);
        double worst = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], inst.dist(i, v));
            worst = std::max(worst, nearest[i]);
        }
        z = worst;
    };

    add(order[0]);
    for (std::uint32_t t = 1; t < n && res.solution.open.size() < p; ++t) {
        const std::uint32_t v = order[t];
        double candidate = 0.0;
        for (std::uint32_t i = 0; i < n; ++i)
            candidate = std::max(candidate, std::min(nearest[i], inst.dist(i, v)));
        if (candidate < z) add(v);
    }
    // fill: highest-probability unused vertices, in scan order
    for (std::uint32_t t = 1; t < n && res.solution.open.size() < p; ++t) {
        if (!taken[order[t]]) add(order[t]);
    }

    std::sort(res.solution.open.begin(), res.solution.open.end());
    res.z = objective(inst, res.solution);
    return res;
}

DecodeResult baseline_decode(const Instance& inst, std::uint32_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> probs(inst.n());
    for (double& q : probs) q = rng.real01();
    DecodeResult res = greedy_decode(inst, probs, p);
    res.strategy = DecodeStrategy::baseline;
    return res;
}

double optimality_gap(double z, double z_star) {
    if (z < 0.0 || z_star < 0.0) throw std::invalid_argument("objective values must be >= 0");
    if (z_star == 0.0) return z == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return 100.0 * (z - z_star) / z_star;
}

}  // namespace pcgcn
