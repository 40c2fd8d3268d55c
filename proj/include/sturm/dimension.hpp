#ifndef STURM_DIMENSION_HPP
#define STURM_DIMENSION_HPP

#include <utility>
#include <vector>

#include "sturm/bands.hpp"
#include "sturm/real.hpp"

namespace sturm {

struct MoranSolution {
    double s = 0;
    double residual = 0;
    bool out_of_theory_range = false;  // s > 1
};

// The unique s >= 0 with sum |l|^s = 1, by bisection on the strictly
// decreasing map s -> sum l^s; residual at the returned s is <= 1e-12.
// Every length must lie in (0,1).
MoranSolution moran_exponent(const std::vector<Real>& lengths);

struct MoranLevel {
    int k = 0;
    double s = 0;
    double residual = 0;
    double s_err = 0;      // propagated from band endpoint error bars
    double max_len = 0;
    long long count = 0;
    bool defined = true;   // false when some length >= 1 (s has no solution)
    bool out_of_theory_range = false;
};

struct MoranResult {
    std::vector<MoranLevel> s_by_level;
    double tail_min = 0;  // min of the last tail_window defined s_k
    double tail_max = 0;
    int tail_window = 0;  // number of trailing levels actually used
};

// Per-level Moran exponents over generations k_min..k_max of the tree,
// with tail_min/tail_max taken over the last tail_window defined levels.
// Levels containing a band of length >= 1 are reported as undefined and
// excluded from the tail; finite-depth tails are proxies for the liminf
// and limsup, never claimed as converged values.
MoranResult pre_dimensions(const BandTree& tree, int k_min, int k_max,
                           int tail_window);

// Same tail logic over caller-supplied per-level length lists (k, lengths,
// endpoint error bars; errs may be empty).
struct LevelLengths {
    int k = 0;
    std::vector<Real> lengths;
    std::vector<Real> errs;
};
MoranResult pre_dimensions_from_lengths(const std::vector<LevelLengths>& levels,
                                        int tail_window);

// Moran exponents over the descendants of one band only, levels
// root.order .. root.order+depth.
MoranResult subtree_pre_dimensions(const Band& root, int depth, const Real& lambda,
                                   const ContinuedFraction& cf, const Precision& prec,
                                   int tail_window = 3, int threads = 1);

// Least-squares slope of log N(eps) against log(1/eps), where N(eps)
// counts eps-grid boxes meeting the cover. Scales must be positive, no
// larger than the longest interval, and span at least two decades.
double box_counting_estimate(const std::vector<std::pair<double, double>>& cover,
                             const std::vector<double>& scales);

// Lengths (and endpoint error bars) of one generation, for Moran input.
std::vector<Real> generation_lengths(const BandTree& tree, int k);

} // namespace sturm

#endif
