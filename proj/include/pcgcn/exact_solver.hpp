#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcgcn/instance.hpp"

namespace pcgcn {

// Bitset rows over V: row j holds the vertices within the radius of center j.
// Distances are symmetric, so row i read the other way lists the centers that
// cover vertex i.
struct CoverageSystem {
    double radius = 0.0;
    std::uint32_t n = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;  // n rows of `words` 64-bit words

    const std::uint64_t* row(std::uint32_t j) const {
        return bits.data() + static_cast<std::size_t>(j) * words;
    }
    bool covers(std::uint32_t center, std::uint32_t vertex) const {
        return (row(center)[vertex >> 6] >> (vertex & 63)) & 1ULL;
    }
};

CoverageSystem build_coverage(const Instance& inst, double r);

struct OptimumCertificate {
    double z_star = 0.0;
    Solution solution;                 // exactly p vertices
    std::vector<std::uint8_t> labels;  // labels[i] == 1 iff i is open
};

// All distinct pairwise distances in increasing order, starting at 0.
std::vector<double> candidate_radii(const Instance& inst);

// Decision problem: can at most p centers cover every vertex within radius r?
// Set-cover branch and bound; returns a witness of size <= p when feasible.
std::optional<Solution> feasible_at(const Instance& inst, double r, std::uint32_t p);

// Smallest candidate radius admitting a cover, with one optimal solution
// (padded to exactly p centers) and its 0/1 label vector.
OptimumCertificate solve_exact(const Instance& inst);

}  // namespace pcgcn
