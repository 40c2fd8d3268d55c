#include "sturm/bands.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "sturm/errors.hpp"
#include "sturm/parallel.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace sturm {

const char* band_type_name(BandType t) {
    switch (t) {
        case BandType::I: return "I";
        case BandType::II: return "II";
        case BandType::III: return "III";
    }
    return "?";
}

static BandType band_type_from_name(const std::string& s) {
    if (s == "I") return BandType::I;
    if (s == "II") return BandType::II;
    if (s == "III") return BandType::III;
    throw ConfigError("unknown band type '" + s + "'");
}

long long tau_multiplicity(BandType from, BandType to, long long n) {
    if (n < 1) throw ConfigError("tau multiplicity needs n >= 1");
    if (from == BandType::I && to == BandType::II) return 1;
    if (from == BandType::II && to == BandType::I) return n + 1;
    if (from == BandType::II && to == BandType::III) return n;
    if (from == BandType::III && to == BandType::I) return n;
    if (from == BandType::III && to == BandType::III) return n - 1;
    throw ConfigError(std::string("no edge ") + band_type_name(from) + " -> " +
                      band_type_name(to));
}

bool admissible(const SymbolicLetter& u, const SymbolicLetter& v) {
    return u.to == v.from;
}

std::string word_id(const SymbolicWord& word) {
    std::ostringstream os;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) os << "/";
        os << band_type_name(word[i].from) << "-" << band_type_name(word[i].to)
           << "." << word[i].tau << "." << word[i].index;
    }
    return os.str();
}

SymbolicWord word_from_id(const std::string& id) {
    SymbolicWord word;
    if (id.empty()) return word;
    std::stringstream ss(id);
    std::string letter;
    while (std::getline(ss, letter, '/')) {
        std::size_t dash = letter.find('-');
        std::size_t dot1 = letter.find('.', dash);
        std::size_t dot2 = letter.find('.', dot1 + 1);
        if (dash == std::string::npos || dot1 == std::string::npos ||
            dot2 == std::string::npos)
            throw ConfigError("bad word id '" + id + "'");
        SymbolicLetter l;
        l.from = band_type_from_name(letter.substr(0, dash));
        l.to = band_type_from_name(letter.substr(dash + 1, dot1 - dash - 1));
        l.tau = std::stoll(letter.substr(dot1 + 1, dot2 - dot1 - 1));
        l.index = std::stoll(letter.substr(dot2 + 1));
        word.push_back(l);
    }
    return word;
}

ChildCounts child_counts(BandType parent_type, long long a_next) {
    if (a_next < 1) throw ConfigError("a_next must be >= 1");
    switch (parent_type) {
        case BandType::I: return {0, 1, 0};
        case BandType::II: return {a_next + 1, 0, a_next};
        case BandType::III: return {a_next, 0, a_next - 1};
    }
    return {};
}

TransitionMatrix transition_matrix(long long a) {
    if (a < 1) throw ConfigError("transition matrix needs a >= 1");
    return {{{0, 1, 0}, {a + 1, 0, a}, {a, 0, a - 1}}};
}

TransitionMatrix matrix_product(const std::vector<long long>& a_values) {
    if (a_values.empty()) throw ConfigError("matrix product needs at least one a");
    TransitionMatrix prod = transition_matrix(a_values.front());
    for (std::size_t i = 1; i < a_values.size(); ++i) {
        TransitionMatrix m = transition_matrix(a_values[i]);
        TransitionMatrix next{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                long long s = 0;
                for (int j = 0; j < 3; ++j) s += prod[r][j] * m[j][c];
                next[r][c] = s;
            }
        prod = next;
    }
    return prod;
}

std::array<long long, 3> type_counts(const ContinuedFraction& cf, int k) {
    std::array<long long, 3> v{1, 0, 1};
    for (int j = 1; j <= k; ++j) {
        TransitionMatrix m = transition_matrix(cf.quotient(j));
        std::array<long long, 3> next{};
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r) next[c] += v[r] * m[r][c];
        v = next;
    }
    return v;
}

Generation level0(const Real& lambda, const Precision& prec) {
    if (!(lambda > 4))
        throw CouplingTooSmall("band hierarchy requires lambda > 4");
    Real two = make_real(2, prec);
    Band b3;
    b3.order = 0;
    b3.type = BandType::III;
    b3.lo = -two;
    b3.hi = two;
    b3.err = make_real(0, prec);
    b3.tspec = {1, 0};
    Band b1;
    b1.order = 0;
    b1.type = BandType::I;
    b1.lo = lambda - two;
    b1.hi = lambda + two;
    b1.err = make_real(0, prec);
    b1.tspec = {0, 1};
    return Generation{0, {b3, b1}};
}

// ---------------------------------------------------------------------
// Band location. A band of {|f| <= 2} is a maximal interval on which f is
// monotone onto [-2,2], so it contains exactly one zero of f, and |f| > 2
// everywhere in the gaps. Zeros are found by sign changes of f on a
// uniform grid (they sit one per band, spaced like the bands themselves,
// never closer), each band edge is then an isolated sign change of
// |f| - 2 between the zero and a gap point, and every crossing is refined
// by bisection to the endpoint tolerance. Anchoring the search at zeros
// matters: the bands themselves can be exponentially narrow (a type-II
// child shrinks like lambda^-a inside its type-I parent), while the zeros
// stay detectable at any density.
// ---------------------------------------------------------------------

namespace {

struct ZeroBracket {
    Real a, b;   // f changes sign across [a, b] (or a == b on an exact hit)
    Real anchor; // point inside the band, |f(anchor)| well below 2
};

// Bisect the sign change of f on [a, b] until the midpoint is well inside
// the band; the full endpoint tolerance is not needed for an anchor.
Real settle_anchor(const std::function<Real(const Real&)>& f, Real a, Real b, Real fa) {
    if (a == b) return a;
    for (;;) {
        Real m = (a + b) / 2;
        Real fm = f(m);
        if (abs(fm) <= 1 || m == a || m == b) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

// One sign change of g = |f| - 2 on [a, b] with g(a), g(b) of opposite
// sign; returns midpoint and radius of the final bracket.
std::pair<Real, Real> bisect_edge(const std::function<Real(const Real&)>& f, Real a,
                                  Real b, const Real& tol) {
    Real ga = abs(f(a)) - 2;
    while (abs(b - a) > tol) {
        Real m = (a + b) / 2;
        Real gm = abs(f(m)) - 2;
        if (gm == 0) {
            a = m;
            b = m;
            break;
        }
        if ((gm > 0) == (ga > 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return {(a + b) / 2, abs(b - a) / 2};
}

// A point strictly between two band anchors where |f| > 2, if the bands
// are separated at sampling densities up to 256.
std::optional<Real> find_gap_point(const std::function<Real(const Real&)>& f,
                                   const Real& a, const Real& b) {
    for (int density = 2; density <= 256; density *= 2) {
        Real step = (b - a) / density;
        for (int i = 1; i < density; i += 2) {
            Real x = a + step * i;
            if (abs(f(x)) > 2) return x;
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<TraceInterval> locate_trace_bands(
    const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
    long long expected, const Precision& prec, int max_points_log2,
    bool merge_touching) {
    if (expected < 0) throw ConfigError("expected band count must be >= 0");
    if (expected == 0) return {};
    Real width = hi - lo;
    if (!(width > 0)) throw ConfigError("locate_trace_bands needs lo < hi");
    Real scale = abs(lo) > abs(hi) ? abs(lo) : abs(hi);
    if (scale < 1) scale = Real(1, lo.precision());
    Real tol = endpoint_tolerance(prec) * scale;

    const long long cap = 1LL << max_points_log2;
    long long n = std::min(cap, 16 * expected);
    if (n < 16) n = 16;

    std::vector<ZeroBracket> zeros;
    for (;; n *= 2) {
        zeros.clear();
        Real step = width / n;
        Real x_prev = lo;
        Real f_prev = f(lo);
        for (long long i = 1; i <= n; ++i) {
            Real x = i == n ? hi : lo + step * i;
            Real fx = f(x);
            if (fx == 0) {
                zeros.push_back({x, x, x});
            } else if (f_prev != 0 && (fx > 0) != (f_prev > 0)) {
                zeros.push_back({x_prev, x, x_prev});
            }
            x_prev = x;
            f_prev = fx;
        }
        if (static_cast<long long>(zeros.size()) > expected)
            throw CountMismatch(expected, static_cast<long long>(zeros.size()),
                                "more trace zeros than the transition matrix allows");
        if (static_cast<long long>(zeros.size()) == expected) break;
        if (n >= cap)
            throw CountMismatch(expected, static_cast<long long>(zeros.size()),
                                "expected " + std::to_string(expected) +
                                    " bands, found " + std::to_string(zeros.size()) +
                                    " at the sampling cap");
    }

    for (ZeroBracket& z : zeros)
        z.anchor = settle_anchor(f, z.a, z.b, f(z.a));

    // Gap separators between consecutive bands; a missing separator means
    // the bands touch, which only the merging mode tolerates.
    std::vector<std::optional<Real>> gap(expected > 0 ? expected - 1 : 0);
    for (long long i = 0; i + 1 < expected; ++i) {
        gap[i] = find_gap_point(f, zeros[i].anchor, zeros[i + 1].anchor);
        if (!gap[i] && !merge_touching)
            throw CountMismatch(expected, expected,
                                "adjacent bands not separated at sampling density");
    }

    std::vector<TraceInterval> bands;
    long long i = 0;
    while (i < expected) {
        long long j = i;
        while (j + 1 < expected && !gap[j]) ++j;  // merged run i..j
        TraceInterval b;
        Real left_anchor = i == 0 ? lo : *gap[i - 1];
        Real right_anchor = j + 1 == expected ? hi : *gap[j];
        auto [elo, erlo] = bisect_edge(f, left_anchor, zeros[i].anchor, tol);
        auto [ehi, erhi] = bisect_edge(f, zeros[j].anchor, right_anchor, tol);
        b.lo = elo;
        b.hi = ehi;
        b.err_lo = erlo;
        b.err_hi = erhi;
        b.merged_touching = j > i;
        // Orientation from the sign of f between the lower edge and the
        // first zero: rising bands pass -2 -> 0 -> +2.
        Real probe = f((b.lo + zeros[i].anchor) / 2);
        if (probe == 0) probe = f((b.lo * 3 + zeros[i].anchor) / 4);
        b.rising = probe < 0 ? 1 : -1;
        bands.push_back(b);
        i = j + 1;
    }
    return bands;
}

// ---------------------------------------------------------------------
// refine
// ---------------------------------------------------------------------

namespace {

struct RawChild {
    TraceInterval iv;
    BandType type;
    TraceSpec tspec;
};

void validate_child(const Band& child, const Band& parent, bool duplicate,
                    const Real& lambda, const ContinuedFraction& cf,
                    const Precision& prec) {
    Real scale = abs(parent.lo) > abs(parent.hi) ? abs(parent.lo) : abs(parent.hi);
    if (scale < 1) scale = Real(1, scale.precision());
    Real tol = endpoint_tolerance(prec) * scale;
    Real two = make_real(2, prec);

    if (!(child.lo < child.hi))
        throw InvariantViolation("degenerate band interval");

    if (duplicate) {
        if (abs(child.lo - parent.lo) > 4 * tol || abs(child.hi - parent.hi) > 4 * tol)
            throw InvariantViolation("duplicated type-II band drifted from its parent");
        return;  // geometry inherited from the parent
    }

    if (!(child.lo > parent.lo && child.hi < parent.hi))
        throw InvariantViolation("child band not strictly inside its parent");

    auto t = [&](const Real& E) { return trace(child.tspec, E, lambda, cf, prec); };

    // Endpoint certificate: the target value is crossed within +-e of the
    // stored endpoint.
    for (int side = 0; side < 2; ++side) {
        Real x = side == 0 ? child.lo : child.hi;
        Real e = child.err > tol ? child.err : tol;
        Real tv = t(x);
        Real target = abs(tv - two) < abs(tv + two) ? two : -two;
        Real g0 = t(x - e) - target;
        Real g1 = t(x + e) - target;
        if (g0 != 0 && g1 != 0 && (g0 > 0) == (g1 > 0))
            throw InvariantViolation("band endpoint does not bracket the trace level");
    }

    // Interior: |t| <= 2 + tolerance at 16 samples, strictly monotone.
    Real itol = noise_floor(prec) * 16;
    Real len = child.hi - child.lo;
    Real prev;
    int dir = 0;
    for (int i = 1; i <= 16; ++i) {
        Real x = child.lo + len * i / 17;
        Real tv = t(x);
        if (abs(tv) > two + itol)
            throw InvariantViolation("interior trace value escapes [-2,2]");
        if (i > 1) {
            int d = tv > prev ? 1 : -1;
            if (dir == 0)
                dir = d;
            else if (d != dir)
                throw InvariantViolation("trace not monotone across the band");
        }
        prev = tv;
    }
}

std::vector<Band> refine_at(const Band& parent, long long a_next, const Real& lambda,
                            const ContinuedFraction& cf, const Precision& prec,
                            const RefineOptions& opts,
                            std::vector<std::string>* warnings) {
    const int k = parent.order;
    ChildCounts counts = child_counts(parent.type, a_next);
    std::vector<RawChild> raw;

    TraceSpec spec_one{k + 1, 1};   // candidate type-I children
    TraceSpec spec_zero{k + 2, 0};  // candidate type-II/III children
    auto f_one = [&](const Real& E) { return trace(spec_one, E, lambda, cf, prec); };
    auto f_zero = [&](const Real& E) { return trace(spec_zero, E, lambda, cf, prec); };

    bool duplicate = false;
    if (parent.type == BandType::I) {
        if (a_next == 1) {
            // M_{k+1} = M_{k-1} M_k, so t_(k+2,0) coincides with the
            // parent's defining t_(k,1): the unique type-II child is the
            // parent interval itself.
            duplicate = true;
            TraceInterval iv;
            iv.lo = parent.lo;
            iv.hi = parent.hi;
            iv.err_lo = parent.err;
            iv.err_hi = parent.err;
            raw.push_back({iv, BandType::II, spec_zero});
        } else {
            auto found = locate_trace_bands(f_zero, parent.lo, parent.hi, counts.nII,
                                            prec, opts.max_points_log2);
            for (auto& iv : found) raw.push_back({iv, BandType::II, spec_zero});
        }
    } else {
        auto found_i = locate_trace_bands(f_one, parent.lo, parent.hi, counts.nI, prec,
                                          opts.max_points_log2);
        for (auto& iv : found_i) raw.push_back({iv, BandType::I, spec_one});
        if (counts.nIII > 0) {
            auto found_iii = locate_trace_bands(f_zero, parent.lo, parent.hi,
                                                counts.nIII, prec, opts.max_points_log2);
            for (auto& iv : found_iii) raw.push_back({iv, BandType::III, spec_zero});
        }
        std::sort(raw.begin(), raw.end(),
                  [](const RawChild& a, const RawChild& b) { return a.iv.lo < b.iv.lo; });
        // I and III children interleave, starting and ending with I.
        bool interleaved = raw.front().type == BandType::I &&
                           raw.back().type == BandType::I;
        for (std::size_t i = 0; i + 1 < raw.size() && interleaved; ++i)
            if (raw[i].type == raw[i + 1].type) interleaved = false;
        if (!interleaved && warnings)
            warnings->push_back("interleaving violated inside band " +
                                (parent.word.empty() ? std::string(band_type_name(parent.type))
                                                     : word_id(parent.word)));
    }

    // A band narrower than a few endpoint brackets cannot be resolved at
    // this precision; escalate before emitting garbage endpoints.
    {
        Real scale = abs(parent.lo) > abs(parent.hi) ? abs(parent.lo) : abs(parent.hi);
        if (scale < 1) scale = Real(1, scale.precision());
        Real tol = endpoint_tolerance(prec) * scale;
        for (const RawChild& rc : raw)
            if (!duplicate && rc.iv.hi - rc.iv.lo <= tol * 256)
                throw CountMismatch(counts.total(), static_cast<long long>(raw.size()),
                                    "band narrower than the endpoint tolerance");
    }

    std::vector<Band> children;
    children.reserve(raw.size());
    long long seen_i = 0, seen_ii = 0, seen_iii = 0;
    for (const RawChild& rc : raw) {
        Band child;
        child.order = k + 1;
        child.type = rc.type;
        child.lo = rc.iv.lo;
        child.hi = rc.iv.hi;
        child.err = rc.iv.err_lo > rc.iv.err_hi ? rc.iv.err_lo : rc.iv.err_hi;
        child.tspec = rc.tspec;
        long long ell = rc.type == BandType::I     ? ++seen_i
                        : rc.type == BandType::II  ? ++seen_ii
                                                   : ++seen_iii;
        SymbolicLetter letter;
        letter.from = parent.type;
        letter.to = rc.type;
        letter.tau = tau_multiplicity(parent.type, rc.type, a_next);
        letter.index = ell;
        child.word = parent.word;
        child.word.push_back(letter);
        children.push_back(std::move(child));
    }

    if (opts.validate) {
        for (const Band& child : children)
            validate_child(child, parent, duplicate, lambda, cf, prec);
        for (std::size_t i = 0; i + 1 < children.size(); ++i)
            if (!(children[i].hi < children[i + 1].lo))
                throw InvariantViolation("sibling bands overlap");
    }
    return children;
}

} // namespace

std::vector<Band> refine(const Band& parent, long long a_next, const Real& lambda,
                         const ContinuedFraction& cf, const Precision& prec,
                         const RefineOptions& opts, std::vector<std::string>* warnings) {
    if (a_next < 1) throw ConfigError("a_next must be >= 1");
    auto escalate = [&]() {
        Precision prec2 = prec.doubled();
        unsigned d2 = prec2.digits10();
        Band parent2 = parent;
        parent2.lo.precision(d2);
        parent2.hi.precision(d2);
        Real lambda2 = lambda;
        lambda2.precision(d2);
        try {
            return refine_at(parent2, a_next, lambda2, cf, prec2, opts, warnings);
        } catch (const CountMismatch& e) {
            throw PrecisionExhausted(
                std::string("still failing at doubled precision: ") + e.what());
        } catch (const InvariantViolation& e) {
            throw PrecisionExhausted(
                std::string("still failing at doubled precision: ") + e.what());
        }
    };
    try {
        return refine_at(parent, a_next, lambda, cf, prec, opts, warnings);
    } catch (const CountMismatch&) {
        if (!opts.allow_escalation) throw;
        return escalate();
    } catch (const InvariantViolation&) {
        if (!opts.allow_escalation) throw;
        return escalate();
    }
}

// ---------------------------------------------------------------------
// BandTree
// ---------------------------------------------------------------------

BandTree BandTree::build(const Real& lambda, const ContinuedFraction& cf, int depth,
                         const Precision& prec, int threads, const RefineOptions& opts) {
    if (depth < 0) throw ConfigError("depth must be >= 0");
    BandTree t;
    t.lambda_ = lambda;
    t.cf_ = cf;
    t.prec_ = prec;
    t.depth_ = depth;

    Generation g0 = level0(lambda, prec);
    t.nodes_ = g0.bands;
    t.levels_.push_back({0, 1});

    for (int k = 1; k <= depth; ++k) {
        long long a_k = cf.quotient(k);
        const std::vector<int>& parents = t.levels_[k - 1];
        std::vector<std::vector<Band>> results(parents.size());
        std::vector<std::vector<std::string>> warns(parents.size());
        parallel_for(parents.size(), threads, [&](std::size_t i) {
            results[i] = refine(t.nodes_[parents[i]], a_k, lambda, cf, prec, opts,
                                &warns[i]);
        });
        std::vector<int> level;
        for (std::size_t i = 0; i < parents.size(); ++i) {
            for (Band& b : results[i]) {
                b.parent = parents[i];
                level.push_back(static_cast<int>(t.nodes_.size()));
                t.nodes_.push_back(std::move(b));
            }
            for (auto& w : warns[i]) t.warnings_.push_back(std::move(w));
        }
        t.levels_.push_back(std::move(level));
    }
    return t;
}

const std::vector<int>& BandTree::level(int k) const {
    if (k < 0 || k > depth_) throw ConfigError("level out of range");
    return levels_[k];
}

Generation BandTree::generation(int k) const {
    Generation g;
    g.order = k;
    for (int idx : level(k)) g.bands.push_back(nodes_[idx]);
    return g;
}

std::vector<int> BandTree::children_of(int idx) const {
    std::vector<int> out;
    int k = nodes_[idx].order;
    if (k + 1 > depth_) return out;
    for (int c : levels_[k + 1])
        if (nodes_[c].parent == idx) out.push_back(c);
    return out;
}

int BandTree::find_child(int idx, BandType t, long long ell) const {
    for (int c : children_of(idx))
        if (nodes_[c].type == t && nodes_[c].word.back().index == ell) return c;
    return -1;
}

int BandTree::find_root(BandType t) const {
    for (int idx : levels_[0])
        if (nodes_[idx].type == t) return idx;
    return -1;
}

int BandTree::find_word(const SymbolicWord& word) const {
    if (word.empty()) return -1;
    int cur = find_root(word.front().from);
    for (const SymbolicLetter& l : word) {
        if (cur < 0) return -1;
        if (static_cast<std::size_t>(nodes_[cur].order) + 1 >
            static_cast<std::size_t>(depth_))
            return -1;
        cur = find_child(cur, l.to, l.index);
    }
    return cur;
}

BandTree BandTree::truncated(int depth) const {
    if (depth > depth_) throw ConfigError("cannot extend a tree by truncation");
    BandTree t;
    t.lambda_ = lambda_;
    t.cf_ = cf_;
    t.prec_ = prec_;
    t.depth_ = depth;
    t.warnings_ = warnings_;
    std::size_t count = 0;
    for (int k = 0; k <= depth; ++k) {
        t.levels_.push_back(levels_[k]);
        count += levels_[k].size();
    }
    t.nodes_.assign(nodes_.begin(), nodes_.begin() + count);
    return t;
}

// ---------------------------------------------------------------------
// JSON + cache
// ---------------------------------------------------------------------

static ojson word_to_json(const SymbolicWord& w) {
    ojson arr = ojson::array();
    for (const SymbolicLetter& l : w) {
        ojson jl;
        jl["from"] = band_type_name(l.from);
        jl["to"] = band_type_name(l.to);
        jl["tau"] = l.tau;
        jl["index"] = l.index;
        arr.push_back(jl);
    }
    return arr;
}

static SymbolicWord word_from_json(const ojson& arr) {
    SymbolicWord w;
    for (const auto& jl : arr) {
        SymbolicLetter l;
        l.from = band_type_from_name(jl.at("from").get<std::string>());
        l.to = band_type_from_name(jl.at("to").get<std::string>());
        l.tau = jl.at("tau").get<long long>();
        l.index = jl.at("index").get<long long>();
        w.push_back(l);
    }
    return w;
}

static Real parse_real(const std::string& s, const Precision& prec) {
    unsigned digits = std::max<unsigned>(prec.digits10(), static_cast<unsigned>(s.size()));
    return Real(s, digits);
}

std::string BandTree::to_json(const std::string& lambda_str) const {
    ojson j;
    j["lambda"] = lambda_str;
    j["cf"] = cf_.literal();
    j["mantissa_bits"] = prec_.mantissa_bits;
    j["depth"] = depth_;
    j["warnings"] = warnings_;
    ojson nodes = ojson::array();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Band& b = nodes_[i];
        ojson n;
        std::string id = b.word.empty() ? band_type_name(b.type) : word_id(b.word);
        n["id"] = id;
        n["order"] = b.order;
        n["type"] = band_type_name(b.type);
        n["lo"] = to_decimal(b.lo);
        n["hi"] = to_decimal(b.hi);
        n["err"] = to_decimal(b.err);
        n["word"] = word_to_json(b.word);
        if (b.parent < 0) {
            n["parent_id"] = nullptr;
        } else {
            const Band& p = nodes_[b.parent];
            n["parent_id"] = p.word.empty() ? band_type_name(p.type) : word_id(p.word);
        }
        nodes.push_back(n);
    }
    j["nodes"] = nodes;
    return j.dump(2) + "\n";
}

BandTree BandTree::from_json(const std::string& text) {
    ojson j = ojson::parse(text);
    BandTree t;
    Precision prec{j.at("mantissa_bits").get<unsigned>()};
    t.prec_ = prec;
    t.depth_ = j.at("depth").get<int>();
    t.cf_ = ContinuedFraction::parse(j.at("cf").get<std::string>());
    t.lambda_ = parse_real(j.at("lambda").get<std::string>(), prec);
    t.warnings_ = j.at("warnings").get<std::vector<std::string>>();
    t.levels_.resize(t.depth_ + 1);
    std::unordered_map<std::string, int> by_id;
    for (const auto& n : j.at("nodes")) {
        Band b;
        b.order = n.at("order").get<int>();
        b.type = band_type_from_name(n.at("type").get<std::string>());
        b.lo = parse_real(n.at("lo").get<std::string>(), prec);
        b.hi = parse_real(n.at("hi").get<std::string>(), prec);
        b.err = parse_real(n.at("err").get<std::string>(), prec);
        b.word = word_from_json(n.at("word"));
        if (n.at("parent_id").is_null()) {
            b.parent = -1;
        } else {
            auto it = by_id.find(n.at("parent_id").get<std::string>());
            if (it == by_id.end()) throw ConfigError("tree json: parent before child");
            b.parent = it->second;
        }
        if (b.order > t.depth_) throw ConfigError("tree json: node deeper than depth");
        int idx = static_cast<int>(t.nodes_.size());
        by_id[n.at("id").get<std::string>()] = idx;
        t.levels_[b.order].push_back(idx);
        t.nodes_.push_back(std::move(b));
    }
    // Restore defining trace specs from order and type.
    for (Band& b : t.nodes_) {
        if (b.order == 0) {
            b.tspec = b.type == BandType::III ? TraceSpec{1, 0} : TraceSpec{0, 1};
        } else {
            b.tspec = b.type == BandType::I ? TraceSpec{b.order, 1}
                                            : TraceSpec{b.order + 1, 0};
        }
    }
    return t;
}

static std::string sanitize_key(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += c;
        } else if (c == ',') {
            out += '-';
        } else if (c == ':') {
            out += '_';
        } else if (c == '(') {
            out += 'p';
        } else if (c == ')') {
            out += 'q';
        } else if (c == '.') {
            out += 'd';
        } else {
            out += '_';
        }
    }
    return out;
}

static fs::path cache_subdir(const std::string& cache_dir, const std::string& lambda_str,
                             const ContinuedFraction& cf, const Precision& prec) {
    return fs::path(cache_dir) /
           (sanitize_key(lambda_str) + "_" + sanitize_key(cf.literal()) + "_" +
            std::to_string(prec.mantissa_bits));
}

std::optional<BandTree> cache_load(const std::string& cache_dir,
                                   const std::string& lambda_str,
                                   const ContinuedFraction& cf, const Precision& prec,
                                   int depth) {
    if (cache_dir.empty()) return std::nullopt;
    fs::path dir = cache_subdir(cache_dir, lambda_str, cf, prec);
    if (!fs::is_directory(dir)) return std::nullopt;
    int best = -1;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("tree_d", 0) != 0 || entry.path().extension() != ".json") continue;
        int d = std::atoi(name.substr(6).c_str());
        if (d >= depth && (best < 0 || d < best)) best = d;
    }
    if (best < 0) return std::nullopt;
    std::ifstream in(dir / ("tree_d" + std::to_string(best) + ".json"));
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    BandTree t = BandTree::from_json(buf.str());
    return best == depth ? std::move(t) : t.truncated(depth);
}

void cache_store(const std::string& cache_dir, const std::string& lambda_str,
                 const BandTree& tree) {
    if (cache_dir.empty()) return;
    fs::path dir = cache_subdir(cache_dir, lambda_str, tree.cf(), tree.precision());
    fs::create_directories(dir);
    fs::path file = dir / ("tree_d" + std::to_string(tree.depth()) + ".json");
    std::ofstream out(file, std::ios::binary);
    out << tree.to_json(lambda_str);
}

// ---------------------------------------------------------------------
// Free operations
// ---------------------------------------------------------------------

Generation generation(int k, const Real& lambda, const ContinuedFraction& cf,
                      const Precision& prec) {
    return BandTree::build(lambda, cf, k, prec).generation(k);
}

Band band_of(const SymbolicWord& word, const Real& lambda, const ContinuedFraction& cf,
             const Precision& prec) {
    if (word.empty()) throw InadmissibleWord("empty word");
    if (word.front().from == BandType::II)
        throw InadmissibleWord("words cannot start at type II");
    for (std::size_t j = 0; j < word.size(); ++j) {
        long long a_j = cf.quotient(static_cast<int>(j) + 1);
        long long tau = tau_multiplicity(word[j].from, word[j].to, a_j);
        if (word[j].tau != tau)
            throw InadmissibleWord("letter " + std::to_string(j + 1) +
                                   " carries multiplicity " + std::to_string(word[j].tau) +
                                   ", expected " + std::to_string(tau));
        if (word[j].index < 1 || word[j].index > tau)
            throw InadmissibleWord("letter index out of range");
        if (j + 1 < word.size() && !admissible(word[j], word[j + 1]))
            throw InadmissibleWord("letters " + std::to_string(j + 1) + "," +
                                   std::to_string(j + 2) + " not admissible");
    }

    Generation g0 = level0(lambda, prec);
    Band cur;
    bool found_root = false;
    for (const Band& b : g0.bands)
        if (b.type == word.front().from) {
            cur = b;
            found_root = true;
        }
    if (!found_root) throw InadmissibleWord("no level-0 band of the required type");

    for (std::size_t j = 0; j < word.size(); ++j) {
        long long a_j = cf.quotient(static_cast<int>(j) + 1);
        std::vector<Band> kids = refine(cur, a_j, lambda, cf, prec);
        bool hit = false;
        for (Band& kid : kids)
            if (kid.type == word[j].to && kid.word.back().index == word[j].index) {
                cur = std::move(kid);
                hit = true;
                break;
            }
        if (!hit) throw InadmissibleWord("no child matches letter " + std::to_string(j + 1));
    }
    return cur;
}

bool sigma_minus1_containment(const Band& band, const Real& lambda,
                              const ContinuedFraction& cf, const Precision& prec) {
    if (band.type != BandType::II || band.order < 1)
        throw ConfigError("sigma_minus1_containment expects a type-II band of order >= 1");
    TraceSpec spec{band.order, -1};
    Real bound = 2 + noise_floor(prec) * 16;
    for (const Real& E : {band.lo, band.midpoint(), band.hi})
        if (abs(trace(spec, E, lambda, cf, prec)) > bound) return false;
    return true;
}

} // namespace sturm
