#include "pcgcn/exact_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcgcn {

namespace {

template <typename CoversPred>
CoverageSystem build_coverage_pred(const Instance& inst, double r, CoversPred covers) {
    CoverageSystem cov;
    cov.radius = r;
    cov.n = inst.n();
    cov.words = (cov.n + 63) / 64;
    cov.bits.assign(static_cast<std::size_t>(cov.n) * cov.words, 0);
    for (std::uint32_t j = 0; j < cov.n; ++j) {
        std::uint64_t* row = cov.bits.data() + static_cast<std::size_t>(j) * cov.words;
        for (std::uint32_t i = 0; i < cov.n; ++i)
            if (covers(i, j)) row[i >> 6] |= 1ULL << (i & 63);
    }
    return cov;
}

CoverageSystem build_coverage_sq(const Instance& inst, std::int32_t r_sq) {
    return build_coverage_pred(inst, std::sqrt(static_cast<double>(r_sq)),
                               [&](std::uint32_t i, std::uint32_t j) {
                                   return inst.dist_sq(i, j) <= r_sq;
                               });
}

// Depth-first set-cover search: branch on an uncovered vertex with the fewest
// covering centers, try its centers in ascending index order, skip centers
// whose residual coverage is contained in another candidate's.
class CoverSearch {
public:
    CoverSearch(const CoverageSystem& cov, std::uint32_t p)
        : cov_(cov), p_(p), words_(cov.words), full_(cov.words, 0) {
        for (std::uint32_t i = 0; i < cov_.n; ++i) full_[i >> 6] |= 1ULL << (i & 63);
        covered_.assign(static_cast<std::size_t>(p_ + 1) * words_, 0);
    }

    std::optional<std::vector<std::uint32_t>> run() {
        chosen_.clear();
        if (descend(0)) return chosen_;
        return std::nullopt;
    }

private:
    std::uint64_t* covered_at(std::uint32_t depth) { return covered_.data() + depth * words_; }

    bool is_full(const std::uint64_t* c) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (c[w] != full_[w]) return false;
        return true;
    }

    bool descend(std::uint32_t depth) {
        const std::uint64_t* cur = covered_at(depth);
        if (is_full(cur)) return true;
        if (depth == p_) return false;

        // uncovered vertex with the fewest covering centers, smallest index on ties
        std::uint32_t pivot = cov_.n;
        int best_cnt = std::numeric_limits<int>::max();
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t rem = full_[w] & ~cur[w];
            while (rem) {
                const std::uint32_t i =
                    static_cast<std::uint32_t>(w * 64 + std::countr_zero(rem));
                rem &= rem - 1;
                int cnt = 0;
                const std::uint64_t* coverers = cov_.row(i);
                for (std::size_t ww = 0; ww < words_; ++ww)
                    cnt += std::popcount(coverers[ww]);
                if (cnt < best_cnt) {
                    best_cnt = cnt;
                    pivot = i;
                }
            }
        }
        if (pivot == cov_.n || best_cnt == 0) return false;

        // candidate centers covering the pivot, ascending
        std::vector<std::uint32_t> cands;
        const std::uint64_t* coverers = cov_.row(pivot);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t rem = coverers[w];
            while (rem) {
                cands.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(rem)));
                rem &= rem - 1;
            }
        }

        // residual coverage (new vertices each candidate would add)
        std::vector<std::uint64_t> residual(cands.size() * words_);
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const std::uint64_t* row = cov_.row(cands[c]);
            for (std::size_t w = 0; w < words_; ++w)
                residual[c * words_ + w] = row[w] & ~cur[w];
        }
        auto subset = [&](std::size_t a, std::size_t b) {
            for (std::size_t w = 0; w < words_; ++w)
                if (residual[a * words_ + w] & ~residual[b * words_ + w]) return false;
            return true;
        };
        for (std::size_t c = 0; c < cands.size(); ++c) {
            bool dominated = false;
            for (std::size_t d = 0; d < cands.size() && !dominated; ++d) {
                if (d == c || !subset(c, d)) continue;
                // proper containment, or an equal set with a smaller index
                if (!subset(d, c) || d < c) dominated = true;
            }
            if (dominated) continue;
            const std::uint64_t* row = cov_.row(cands[c]);
            std::uint64_t* next = covered_at(depth + 1);
            for (std::size_t w = 0; w < words_; ++w) next[w] = cur[w] | row[w];
            chosen_.push_back(cands[c]);
            if (descend(depth + 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    const CoverageSystem& cov_;
    std::uint32_t p_;
    std::size_t words_;
    std::vector<std::uint64_t> full_;
    std::vector<std::uint64_t> covered_;  // (p+1) stacked masks
    std::vector<std::uint32_t> chosen_;
};

std::optional<Solution> search_cover(const CoverageSystem& cov, std::uint32_t p) {
    CoverSearch search(cov, p);
    auto chosen = search.run();
    if (!chosen) return std::nullopt;
    Solution sol;
    sol.open = std::move(*chosen);
    std::sort(sol.open.begin(), sol.open.end());
    return sol;
}

}  // namespace

CoverageSystem build_coverage(const Instance& inst, double r) {
    return build_coverage_pred(inst, r, [&](std::uint32_t i, std::uint32_t j) {
        return inst.dist(i, j) <= r;
    });
}

std::vector<double> candidate_radii(const Instance& inst) {
    const std::uint32_t n = inst.n();
    std::vector<std::int32_t> sq;
    sq.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j) sq.push_back(inst.dist_sq(i, j));
    std::sort(sq.begin(), sq.end());
    sq.erase(std::unique(sq.begin(), sq.end()), sq.end());
    std::vector<double> radii(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) radii[i] = std::sqrt(static_cast<double>(sq[i]));
    return radii;
}

std::optional<Solution> feasible_at(const Instance& inst, double r, std::uint32_t p) {
    if (r < 0.0) throw std::invalid_argument("radius must be nonnegative");
    return search_cover(build_coverage(inst, r), p);
}

OptimumCertificate solve_exact(const Instance& inst) {
    const std::uint32_t n = inst.n();
    const std::uint32_t p = inst.p();

    std::vector<std::int32_t> cands;
    cands.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j) cands.push_back(inst.dist_sq(i, j));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    // Smallest candidate radius with a feasible cover. The largest candidate
    // is always feasible: a single center covers everything at that radius.
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (search_cover(build_coverage_sq(inst, cands[mid]), p))
            hi = mid;
        else
            lo = mid + 1;
    }

    OptimumCertificate cert;
    cert.z_star = std::sqrt(static_cast<double>(cands[lo]));
    cert.solution = *search_cover(build_coverage_sq(inst, cands[lo]), p);

    // Pad with the smallest unused vertices; adding centers never raises the
    // objective, and it cannot drop below the optimum.
    std::vector<std::uint8_t> open(n, 0);
    for (std::uint32_t v : cert.solution.open) open[v] = 1;
    for (std::uint32_t v = 0; v < n && cert.solution.open.size() < p; ++v) {
        if (!open[v]) {
            open[v] = 1;
            cert.solution.open.push_back(v);
        }
    }
    std::sort(cert.solution.open.begin(), cert.solution.open.end());
    cert.labels.assign(open.begin(), open.end());
    return cert;
}

}  // namespace pcgcn
