#include "sturm/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sturm/errors.hpp"
#include "sturm/parallel.hpp"

namespace sturm {

namespace {

// Compensated sum of exp(s * log_l) in long double.
long double moran_sum(const std::vector<long double>& logs, long double s) {
    long double sum = 0, comp = 0;
    for (long double L : logs) {
        long double term = std::exp(s * L);
        long double y = term - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

MoranSolution solve_moran(const std::vector<long double>& logs) {
    MoranSolution sol;
    if (logs.size() == 1) {
        sol.s = 0;
        sol.residual = 0;
        return sol;
    }
    long double lo = 0, hi = 1;
    while (moran_sum(logs, hi) > 1) {
        lo = hi;
        hi *= 2;
        if (hi > 64) throw InvariantViolation("Moran exponent diverges");
    }
    sol.out_of_theory_range = lo >= 1;
    long double mid = hi, res = 0;
    for (int iter = 0; iter < 200; ++iter) {
        mid = (lo + hi) / 2;
        long double f = moran_sum(logs, mid);
        res = f - 1;
        if (std::fabs(res) <= 1e-12L) break;
        if (f > 1)
            lo = mid;
        else
            hi = mid;
    }
    sol.s = static_cast<double>(mid);
    sol.residual = static_cast<double>(std::fabs(res));
    if (sol.s > 1) sol.out_of_theory_range = true;
    return sol;
}

} // namespace

MoranSolution moran_exponent(const std::vector<Real>& lengths) {
    if (lengths.empty()) throw ConfigError("moran_exponent needs a nonempty list");
    std::vector<long double> logs;
    logs.reserve(lengths.size());
    for (const Real& l : lengths) {
        if (!(l > 0 && l < 1))
            throw LengthOutOfRange("Moran lengths must lie in (0,1), got " +
                                   to_decimal(l));
        logs.push_back(static_cast<long double>(to_double(log(l))));
    }
    return solve_moran(logs);
}

std::vector<Real> generation_lengths(const BandTree& tree, int k) {
    std::vector<Real> out;
    for (int idx : tree.level(k)) out.push_back(tree.node(idx).length());
    return out;
}

namespace {

MoranLevel level_stat(int k, const std::vector<Real>& lengths,
                      const std::vector<Real>& errs) {
    MoranLevel lv;
    lv.k = k;
    lv.count = static_cast<long long>(lengths.size());
    double max_len = 0;
    bool in_domain = true;
    for (const Real& l : lengths) {
        max_len = std::max(max_len, to_double(l));
        if (!(l > 0 && l < 1)) in_domain = false;
    }
    lv.max_len = max_len;
    if (!in_domain) {
        lv.defined = false;
        lv.s = std::numeric_limits<double>::quiet_NaN();
        lv.residual = std::numeric_limits<double>::quiet_NaN();
        lv.s_err = std::numeric_limits<double>::quiet_NaN();
        return lv;
    }
    MoranSolution sol = moran_exponent(lengths);
    lv.s = sol.s;
    lv.residual = sol.residual;
    lv.out_of_theory_range = sol.out_of_theory_range;

    // Error propagation: F(s) = sum l^s = 1, so
    // ds = -s * sum(l^s dlog l) / sum(l^s log l), with dlog l = 2 err / l.
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        long double L = static_cast<long double>(to_double(log(lengths[i])));
        long double w = std::exp(static_cast<long double>(sol.s) * L);
        long double dlog =
            errs.empty() ? 0.0L
                         : 2.0L * static_cast<long double>(to_double(errs[i] / lengths[i]));
        num += w * dlog;
        den += w * (-L);
    }
    lv.s_err = den > 0 ? static_cast<double>(sol.s * num / den) : 0.0;
    return lv;
}

MoranResult assemble(std::vector<MoranLevel> levels, int tail_window) {
    MoranResult r;
    r.s_by_level = std::move(levels);
    std::vector<double> defined;
    for (const MoranLevel& lv : r.s_by_level)
        if (lv.defined) defined.push_back(lv.s);
    int window = std::min<int>(tail_window, static_cast<int>(defined.size()));
    r.tail_window = window;
    if (window > 0) {
        auto first = defined.end() - window;
        r.tail_min = *std::min_element(first, defined.end());
        r.tail_max = *std::max_element(first, defined.end());
    }
    return r;
}

} // namespace

MoranResult pre_dimensions(const BandTree& tree, int k_min, int k_max,
                           int tail_window) {
    if (tail_window < 1) throw ConfigError("tail_window must be >= 1");
    if (k_max - k_min + 1 < tail_window)
        throw ConfigError("need at least tail_window levels");
    if (k_min < 1) throw ConfigError("Moran levels start at k = 1");
    if (k_max > tree.depth()) throw ConfigError("tree too shallow for k_max");

    std::vector<MoranLevel> levels;
    for (int k = k_min; k <= k_max; ++k) {
        std::vector<Real> lengths, errs;
        for (int idx : tree.level(k)) {
            lengths.push_back(tree.node(idx).length());
            errs.push_back(tree.node(idx).err);
        }
        levels.push_back(level_stat(k, lengths, errs));
    }
    return assemble(std::move(levels), tail_window);
}

MoranResult pre_dimensions_from_lengths(const std::vector<LevelLengths>& levels,
                                        int tail_window) {
    if (tail_window < 1) throw ConfigError("tail_window must be >= 1");
    if (static_cast<int>(levels.size()) < tail_window)
        throw ConfigError("need at least tail_window levels");
    std::vector<MoranLevel> stats;
    for (const LevelLengths& lv : levels)
        stats.push_back(level_stat(lv.k, lv.lengths, lv.errs));
    return assemble(std::move(stats), tail_window);
}

MoranResult subtree_pre_dimensions(const Band& root, int depth, const Real& lambda,
                                   const ContinuedFraction& cf, const Precision& prec,
                                   int tail_window, int threads) {
    if (depth < 0) throw ConfigError("depth must be >= 0");
    std::vector<MoranLevel> levels;
    std::vector<Band> current{root};
    {
        std::vector<Real> lens{root.length()}, errs{root.err};
        levels.push_back(level_stat(root.order, lens, errs));
    }
    for (int d = 1; d <= depth; ++d) {
        long long a_next = cf.quotient(root.order + d);
        std::vector<std::vector<Band>> results(current.size());
        parallel_for(current.size(), threads, [&](std::size_t i) {
            results[i] = refine(current[i], a_next, lambda, cf, prec);
        });
        std::vector<Band> next;
        std::vector<Real> lens, errs;
        for (auto& kids : results)
            for (Band& b : kids) {
                lens.push_back(b.length());
                errs.push_back(b.err);
                next.push_back(std::move(b));
            }
        levels.push_back(level_stat(root.order + d, lens, errs));
        current = std::move(next);
    }
    return assemble(std::move(levels), tail_window);
}

double box_counting_estimate(const std::vector<std::pair<double, double>>& cover,
                             const std::vector<double>& scales) {
    if (cover.empty()) throw ConfigError("box counting needs a nonempty cover");
    double diameter = 0;
    double lo_min = cover.front().first, hi_max = cover.front().second;
    for (auto& [lo, hi] : cover) {
        if (!(hi > lo)) throw ConfigError("cover intervals must have positive length");
        lo_min = std::min(lo_min, lo);
        hi_max = std::max(hi_max, hi);
    }
    diameter = hi_max - lo_min;
    if (scales.size() < 2) throw DegenerateScales("need at least two scales");
    double smin = scales.front(), smax = scales.front();
    for (double s : scales) {
        if (!(s > 0)) throw DegenerateScales("scales must be positive");
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    if (smax > diameter)
        throw DegenerateScales("scales must sit below the cover diameter");
    if (smax / smin < 100)
        throw DegenerateScales("scales must span at least two decades");

    std::vector<double> xs, ys;
    for (double eps : scales) {
        std::vector<std::pair<long long, long long>> ranges;
        ranges.reserve(cover.size());
        for (auto& [lo, hi] : cover)
            ranges.emplace_back(static_cast<long long>(std::floor(lo / eps)),
                                static_cast<long long>(std::floor(hi / eps)));
        std::sort(ranges.begin(), ranges.end());
        long long boxes = 0;
        long long cur_lo = 0, cur_hi = -1;
        bool open = false;
        for (auto& [a, b] : ranges) {
            if (!open || a > cur_hi + 1) {
                if (open) boxes += cur_hi - cur_lo + 1;
                cur_lo = a;
                cur_hi = b;
                open = true;
            } else {
                cur_hi = std::max(cur_hi, b);
            }
        }
        if (open) boxes += cur_hi - cur_lo + 1;
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(boxes)));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace sturm
