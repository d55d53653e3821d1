#pragma once

#include <cstdint>
#include <span>

#include "pcgcn/instance.hpp"

namespace pcgcn {

enum class DecodeStrategy { naive, greedy, baseline };

struct DecodeResult {
    Solution solution;  // exactly p distinct vertices, ascending
    double z = 0.0;     // objective of the solution
    DecodeStrategy strategy = DecodeStrategy::naive;
};

// The p vertices with the largest probabilities, ties by smaller index.
DecodeResult naive_decode(const Instance& inst, std::span<const double> probs, std::uint32_t p);

// Scan vertices by descending probability (ties by smaller index); the first
// is always taken, later ones only when they strictly decrease the objective.
// If the pass ends short of p, fill with the highest-probability unused
// vertices in scan order.
DecodeResult greedy_decode(const Instance& inst, std::span<const double> probs, std::uint32_t p);

// greedy_decode on per-vertex probabilities drawn uniformly from [0,1).
DecodeResult baseline_decode(const Instance& inst, std::uint32_t p, std::uint64_t seed);

// 100 * (z - z*) / z*. Zero when both are zero; +infinity when only z* is.
double optimality_gap(double z, double z_star);

}  // namespace pcgcn
