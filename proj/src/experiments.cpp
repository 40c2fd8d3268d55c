#include "sturm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sturm/errors.hpp"
#include "sturm/parallel.hpp"

namespace sturm {

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return n ? rng() % n : 0;
}

std::string node_id(const BandTree& tree, int idx) {
    const Band& b = tree.node(idx);
    return b.word.empty() ? band_type_name(b.type) : word_id(b.word);
}

// Random downward walk of `len` steps; returns the final node.
int random_walk(const BandTree& tree, std::mt19937_64& rng, int start, int len) {
    int cur = start;
    for (int step = 0; step < len; ++step) {
        auto kids = tree.children_of(cur);
        if (kids.empty()) return -1;
        cur = kids[bounded(rng, kids.size())];
    }
    return cur;
}

// Follows the trailing `len` letters of src's word starting from dst.
int follow_suffix(const BandTree& tree, int src, int len, int dst) {
    const SymbolicWord& w = tree.node(src).word;
    for (std::size_t j = w.size() - len; j < w.size(); ++j) {
        dst = tree.find_child(dst, w[j].to, w[j].index);
        if (dst < 0) return -1;
    }
    return dst;
}

} // namespace

CovarianceReport covariance_check(const BandTree& tree, long long sample_size,
                                  std::uint64_t seed) {
    const int depth = tree.depth();
    if (depth < 2) throw ConfigError("covariance check needs depth >= 2");
    CovarianceReport rep;
    rep.lambda_below_theorem_range = tree.lambda() < 24;

    // Same-level same-type pools with at least two members.
    struct Pool {
        int level;
        std::vector<int> nodes;
    };
    std::vector<Pool> pools;
    for (int j = 1; j <= depth - 1; ++j) {
        std::map<BandType, std::vector<int>> by_type;
        for (int idx : tree.level(j)) by_type[tree.node(idx).type].push_back(idx);
        for (auto& [t, nodes] : by_type)
            if (nodes.size() >= 2) pools.push_back({j, std::move(nodes)});
    }
    if (pools.empty()) throw ConfigError("no comparable word pairs at this depth");

    std::mt19937_64 rng(seed);
    std::map<int, double> per_depth;
    for (long long s = 0; s < sample_size; ++s) {
        const Pool& pool = pools[bounded(rng, pools.size())];
        int w = pool.nodes[bounded(rng, pool.nodes.size())];
        int wt = w;
        while (wt == w) wt = pool.nodes[bounded(rng, pool.nodes.size())];
        int suffix_len = 1 + static_cast<int>(bounded(rng, depth - pool.level));
        int wu = random_walk(tree, rng, w, suffix_len);
        if (wu < 0) continue;
        int wtu = follow_suffix(tree, wu, suffix_len, wt);
        if (wtu < 0)
            throw InvariantViolation("suffix admissible under w but not under w~");

        Real rw = tree.node(wu).length() / tree.node(w).length();
        Real rwt = tree.node(wtu).length() / tree.node(wt).length();
        double r = to_double(rw / rwt);
        double ratio = std::max(r, 1.0 / r);
        ++rep.pairs_tested;
        int end_level = pool.level + suffix_len;
        auto it = per_depth.find(end_level);
        if (it == per_depth.end() || ratio > it->second) per_depth[end_level] = ratio;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.max_pair_w = node_id(tree, w);
            rep.max_pair_w_tilde = node_id(tree, wt);
            rep.max_suffix = node_id(tree, wu);
        }
    }
    for (auto& [lvl, d] : per_depth) rep.per_depth_max.emplace_back(lvl, d);
    return rep;
}

CovarianceReport covariance_check(const Real& lambda, const ContinuedFraction& cf,
                                  int depth, long long sample_size, std::uint64_t seed,
                                  const Precision& prec, int threads) {
    BandTree tree = BandTree::build(lambda, cf, depth, prec, threads);
    return covariance_check(tree, sample_size, seed);
}

InvarianceReport gauss_experiment(const Real& lambda, const ContinuedFraction& cf,
                                  int depth, const Precision& prec, int tail_window,
                                  int threads, long long correspondence_samples) {
    if (depth < 2) throw ConfigError("gauss experiment needs depth >= 2");
    ContinuedFraction shifted = gauss_shift(cf);

    // One extra level for alpha: a band B_u at level L of the shifted
    // hierarchy corresponds to B_wu at level L+1 of the original one.
    BandTree tree_a = BandTree::build(lambda, cf, depth + 1, prec, threads);
    BandTree tree_b = BandTree::build(lambda, shifted, depth, prec, threads);

    InvarianceReport rep;
    rep.alpha = pre_dimensions(tree_a, 1, depth, tail_window);
    rep.shifted = pre_dimensions(tree_b, 1, depth, tail_window);
    rep.tail_gap_min = std::fabs(rep.alpha.tail_min - rep.shifted.tail_min);
    rep.tail_gap_max = std::fabs(rep.alpha.tail_max - rep.shifted.tail_max);
    rep.tail_gap = std::max(rep.tail_gap_min, rep.tail_gap_max);

    int w_idx = tree_a.find_child(tree_a.find_root(BandType::III), BandType::I, 1);
    if (w_idx < 0) throw InvariantViolation("no leftmost type-(1,I) band");
    rep.w_id = node_id(tree_a, w_idx);

    rep.eta_emp = covariance_check(tree_a, 200, /*seed=*/20240503u).max_ratio;

    int root_b = tree_b.find_root(BandType::I);
    Real len_w = tree_a.node(w_idx).length();
    Real len_i = tree_b.node(root_b).length();
    std::mt19937_64 rng(911u);
    double lo_seen = 1, hi_seen = 1;
    long long in_bounds = 0, taken = 0;
    for (long long s = 0; s < correspondence_samples; ++s) {
        int len = 1 + static_cast<int>(bounded(rng, depth));
        int u = random_walk(tree_b, rng, root_b, len);
        if (u < 0) continue;
        int wu = follow_suffix(tree_a, u, len, w_idx);
        if (wu < 0)
            throw InvariantViolation("shifted-hierarchy word missing under w");
        Real r1 = tree_a.node(wu).length() / len_w;
        Real r2 = tree_b.node(u).length() / len_i;
        double rr = to_double(r1 / r2);
        ++taken;
        lo_seen = std::min(lo_seen, rr);
        hi_seen = std::max(hi_seen, rr);
        if (rr >= 1.0 / rep.eta_emp && rr <= rep.eta_emp) ++in_bounds;
    }
    rep.correspondence_samples = taken;
    rep.correspondence_in_bounds = in_bounds;
    rep.correspondence_min = lo_seen;
    rep.correspondence_max = hi_seen;
    return rep;
}

LocalDimensionReport local_dimension_experiment(const Real& lambda,
                                                const ContinuedFraction& cf, int depth,
                                                int probe_count, std::uint64_t seed,
                                                const Precision& prec, int tail_window,
                                                int threads) {
    if (depth < 4) throw ConfigError("local dimension experiment needs depth >= 4");
    if (probe_count < 2) throw ConfigError("need at least two probes");
    BandTree base = BandTree::build(lambda, cf, 2, prec, threads);
    std::vector<int> candidates = base.level(2);
    std::mt19937_64 rng(seed);
    std::vector<int> picks;
    if (probe_count >= static_cast<int>(candidates.size())) {
        picks = candidates;
    } else {
        while (static_cast<int>(picks.size()) < probe_count) {
            int c = candidates[bounded(rng, candidates.size())];
            if (std::find(picks.begin(), picks.end(), c) == picks.end())
                picks.push_back(c);
        }
        std::sort(picks.begin(), picks.end());
    }

    LocalDimensionReport rep;
    std::vector<MoranResult> results(picks.size());
    parallel_for(picks.size(), 1, [&](std::size_t i) {
        results[i] = subtree_pre_dimensions(base.node(picks[i]), depth, lambda, cf,
                                            prec, tail_window, threads);
    });
    for (std::size_t i = 0; i < picks.size(); ++i) {
        const Band& b = base.node(picks[i]);
        rep.probes.push_back({word_id(b.word), band_type_name(b.type), results[i]});
    }
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            double gap =
                std::max(std::fabs(results[i].tail_min - results[j].tail_min),
                         std::fabs(results[i].tail_max - results[j].tail_max));
            rep.max_pairwise_gap = std::max(rep.max_pairwise_gap, gap);
        }
    return rep;
}

TransitionMatrix reachability_pattern(const std::vector<long long>& a_values) {
    return matrix_product(a_values);
}

bool reachable_within_3_or_4(const ContinuedFraction& cf, int start) {
    std::vector<long long> w3, w4;
    for (int j = 0; j < 4; ++j) {
        if (j < 3) w3.push_back(cf.quotient(start + j));
        w4.push_back(cf.quotient(start + j));
    }
    TransitionMatrix p3 = matrix_product(w3);
    TransitionMatrix p4 = matrix_product(w4);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (p3[r][c] < 1 && p4[r][c] < 1) return false;
    return true;
}

namespace {

double dist_to_union(double x, const std::vector<std::pair<double, double>>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (auto& [lo, hi] : b) {
        if (x >= lo && x <= hi) return 0;
        best = std::min(best, std::min(std::fabs(x - lo), std::fabs(x - hi)));
    }
    return best;
}

bool in_union(double x, const std::vector<std::pair<double, double>>& a) {
    for (auto& [lo, hi] : a)
        if (x >= lo && x <= hi) return true;
    return false;
}

double directed_hausdorff(const std::vector<std::pair<double, double>>& a,
                          const std::vector<std::pair<double, double>>& b) {
    double d = 0;
    for (auto& [lo, hi] : a) {
        d = std::max(d, dist_to_union(lo, b));
        d = std::max(d, dist_to_union(hi, b));
    }
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        double g = (b[i].second + b[i + 1].first) / 2;
        if (in_union(g, a)) d = std::max(d, dist_to_union(g, b));
    }
    return d;
}

} // namespace

double hausdorff_distance(std::vector<std::pair<double, double>> a,
                          std::vector<std::pair<double, double>> b) {
    if (a.empty() || b.empty())
        throw ConfigError("Hausdorff distance of an empty cover");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ContinuityReport continuity_experiment(const Real& lambda, const ContinuedFraction& cf1,
                                       const ContinuedFraction& cf2, int level,
                                       const Precision& prec, int threads) {
    if (cf1.quotient(1) != cf2.quotient(1))
        throw ConfigError("frequencies must share a prefix of length >= 1");
    BandTree t1 = BandTree::build(lambda, cf1, level, prec, threads);
    BandTree t2 = BandTree::build(lambda, cf2, level, prec, threads);
    auto cover = [](const BandTree& t, int k) {
        std::vector<std::pair<double, double>> out;
        for (int idx : t.level(k))
            out.emplace_back(to_double(t.node(idx).lo), to_double(t.node(idx).hi));
        return out;
    };
    ContinuityReport rep;
    rep.hausdorff_distance = hausdorff_distance(cover(t1, level), cover(t2, level));
    rep.alpha_gap = std::fabs(to_double(cf1.value(prec) - cf2.value(prec)));
    return rep;
}

McReport mc_sweep(const Real& lambda, int count, int depth, int cf_depth,
                  std::uint64_t seed, const Precision& prec, int tail_window,
                  int threads) {
    if (count < 1) throw ConfigError("mc sweep needs count >= 1");
    if (cf_depth < depth + 1) cf_depth = depth + 1;
    McReport rep;
    for (int d = std::max(tail_window + 2, depth - 2); d <= depth; ++d)
        rep.depths.push_back(d);

    rep.entries.resize(count);
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
        ContinuedFraction cf = sample_frequency(seed + i, cf_depth);
        BandTree tree = BandTree::build(lambda, cf, depth, prec, 1);
        MoranResult res = pre_dimensions(tree, 1, depth, tail_window);
        McReport::Entry e;
        e.cf_literal = cf.literal();
        e.levels = res.s_by_level;
        for (int d : rep.depths) {
            // tail over the last tail_window defined levels up to depth d
            std::vector<double> defined;
            for (const MoranLevel& lv : res.s_by_level)
                if (lv.defined && lv.k <= d) defined.push_back(lv.s);
            int w = std::min<int>(tail_window, static_cast<int>(defined.size()));
            double tmin = 0;
            if (w > 0)
                tmin = *std::min_element(defined.end() - w, defined.end());
            e.tail_min_by_depth.push_back(tmin);
        }
        rep.entries[i] = std::move(e);
    });

    for (std::size_t di = 0; di < rep.depths.size(); ++di) {
        double mn = rep.entries.front().tail_min_by_depth[di];
        double mx = mn;
        for (const auto& e : rep.entries) {
            mn = std::min(mn, e.tail_min_by_depth[di]);
            mx = std::max(mx, e.tail_min_by_depth[di]);
        }
        rep.dispersion.push_back(mx - mn);
    }

    // Histogram of the deepest tail estimate.
    std::vector<double> finals;
    for (const auto& e : rep.entries) finals.push_back(e.tail_min_by_depth.back());
    rep.histogram_lo = *std::min_element(finals.begin(), finals.end());
    rep.histogram_hi = *std::max_element(finals.begin(), finals.end());
    int bins = 12;
    rep.histogram.assign(bins, 0);
    double span = rep.histogram_hi - rep.histogram_lo;
    for (double v : finals) {
        int b = span > 0 ? std::min<int>(bins - 1, static_cast<int>((v - rep.histogram_lo) /
                                                                    span * bins))
                         : 0;
        ++rep.histogram[b];
    }
    return rep;
}

} // namespace sturm
