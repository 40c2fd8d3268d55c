#ifndef STURM_EXPERIMENTS_HPP
#define STURM_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sturm/bands.hpp"
#include "sturm/dimension.hpp"

namespace sturm {

// ----- bounded covariance ------------------------------------------------

struct CovarianceReport {
    long long pairs_tested = 0;
    double max_ratio = 1;  // empirical eta
    // max ratio seen among samples whose suffix ends at that level
    std::vector<std::pair<int, double>> per_depth_max;
    std::string max_pair_w, max_pair_w_tilde, max_suffix;  // achieving the max
    bool lambda_below_theorem_range = false;               // lambda < 24
};

// Samples word pairs (w, w~) of equal level and type plus a common
// admissible suffix u, and reports the spread of the relative-length
// ratios (|B_wu|/|B_w|) / (|B_w~u|/|B_w~|).
CovarianceReport covariance_check(const BandTree& tree, long long sample_size,
                                  std::uint64_t seed);
CovarianceReport covariance_check(const Real& lambda, const ContinuedFraction& cf,
                                  int depth, long long sample_size, std::uint64_t seed,
                                  const Precision& prec, int threads = 1);

// ----- Gauss-map invariance ----------------------------------------------

struct InvarianceReport {
    MoranResult alpha;        // s_k for the frequency itself
    MoranResult shifted;      // s_k for the shifted frequency
    double tail_gap = 0;      // max of |tail_min gap| and |tail_max gap|
    double tail_gap_min = 0;  // |tail_min(alpha) - tail_min(shifted)|
    double tail_gap_max = 0;
    std::string w_id;  // the level-1 word tying the two hierarchies together
    double eta_emp = 1;
    long long correspondence_samples = 0;
    long long correspondence_in_bounds = 0;
    double correspondence_min = 1;  // extremes of the ratio-of-ratios
    double correspondence_max = 1;
};

// Builds the hierarchy for alpha and for its shift independently, compares
// the s_k tails, and checks the band correspondence u <-> wu with
// w = ((III,I), a_1, 1): relative lengths agree within the empirical eta.
InvarianceReport gauss_experiment(const Real& lambda, const ContinuedFraction& cf,
                                  int depth, const Precision& prec,
                                  int tail_window = 3, int threads = 1,
                                  long long correspondence_samples = 50);

// ----- local dimension ----------------------------------------------------

struct LocalDimensionReport {
    struct Probe {
        std::string word;
        std::string type;
        MoranResult result;
    };
    std::vector<Probe> probes;
    double max_pairwise_gap = 0;
};

// Picks probe bands at level 2 and compares the Moran tails of their
// subtrees; same-type (and, empirically, cross-type) bands carry the same
// local dimension.
LocalDimensionReport local_dimension_experiment(const Real& lambda,
                                                const ContinuedFraction& cf, int depth,
                                                int probe_count, std::uint64_t seed,
                                                const Precision& prec,
                                                int tail_window = 3, int threads = 1);

// ----- transition-matrix reachability -------------------------------------

// Product of the transition matrices for the given quotients,
// left-to-right = increasing level; the caller inspects the zero pattern.
TransitionMatrix reachability_pattern(const std::vector<long long>& a_values);

// True iff for every ordered type pair the window product over 3 or 4
// consecutive levels starting at start (1-based) has a positive entry.
bool reachable_within_3_or_4(const ContinuedFraction& cf, int start);

// ----- continuity in the frequency ----------------------------------------

struct ContinuityReport {
    double hausdorff_distance = 0;
    double alpha_gap = 0;  // |alpha1 - alpha2|
};

// Hausdorff distance between the level-`level` covers of the spectra of
// two frequencies sharing a continued-fraction prefix.
ContinuityReport continuity_experiment(const Real& lambda, const ContinuedFraction& cf1,
                                       const ContinuedFraction& cf2, int level,
                                       const Precision& prec, int threads = 1);

// Exact Hausdorff distance between two finite unions of closed intervals.
double hausdorff_distance(std::vector<std::pair<double, double>> a,
                          std::vector<std::pair<double, double>> b);

// ----- Monte Carlo over sampled frequencies --------------------------------

struct McReport {
    struct Entry {
        std::string cf_literal;
        std::vector<MoranLevel> levels;            // k = 1..depth
        std::vector<double> tail_min_by_depth;     // aligned with depths
    };
    std::vector<Entry> entries;
    std::vector<int> depths;           // depths at which tails are compared
    std::vector<double> dispersion;    // max - min of tail_min per depth
    std::vector<long long> histogram;  // of tail_min at the deepest depth
    double histogram_lo = 0, histogram_hi = 0;
};

// Samples `count` Gauss-Kuzmin frequencies, builds each hierarchy to
// `depth`, and reports how the spread of the tail estimates behaves as
// depth grows (the desk-scale face of almost-everywhere constancy).
McReport mc_sweep(const Real& lambda, int count, int depth, int cf_depth,
                  std::uint64_t seed, const Precision& prec, int tail_window = 3,
                  int threads = 1);

} // namespace sturm

#endif
