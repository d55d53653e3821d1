#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace pcgcn {

// Set of open facility vertices.
struct Solution {
    std::vector<std::uint32_t> open;
};

// A p-center instance on the integer grid [0,100]^2. Distances are derived
// from the coordinates on construction and never serialized. The squared
// integer distances are kept next to the Euclidean ones so that radius
// comparisons can be done exactly.
class Instance {
public:
    Instance(std::uint64_t id, std::uint32_t p, std::vector<std::array<int, 2>> coords);

    std::uint64_t id() const { return id_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t p() const { return p_; }
    const std::vector<std::array<int, 2>>& coords() const { return coords_; }

    double dist(std::uint32_t i, std::uint32_t j) const {
        return dist_[static_cast<std::size_t>(i) * n_ + j];
    }
    std::int32_t dist_sq(std::uint32_t i, std::uint32_t j) const {
        return dist_sq_[static_cast<std::size_t>(i) * n_ + j];
    }

private:
    std::uint64_t id_ = 0;
    std::uint32_t n_ = 0;
    std::uint32_t p_ = 0;
    std::vector<std::array<int, 2>> coords_;
    std::vector<std::int32_t> dist_sq_;  // n*n, row-major
    std::vector<double> dist_;           // n*n, sqrt of dist_sq_
};

// Directed k-nearest-neighbor lists. nbrs[i] holds the min(k, n-1) vertices
// closest to i (self excluded), sorted by ascending distance with ties broken
// by smaller vertex index.
struct KnnGraph {
    std::uint32_t k = 0;  // requested neighborhood size
    std::vector<std::vector<std::uint32_t>> nbrs;
};

// n points drawn uniformly from {0,...,100}^2, duplicates allowed. The
// instance id is the seed. Throws std::invalid_argument unless 1 <= p <= n.
Instance generate_instance(std::uint32_t n, std::uint32_t p, std::uint64_t seed);

KnnGraph build_knn(const Instance& inst, std::uint32_t k);

// max over vertices of the distance to the closest open facility.
// Throws std::invalid_argument on an empty solution.
double objective(const Instance& inst, const Solution& sol);

}  // namespace pcgcn
