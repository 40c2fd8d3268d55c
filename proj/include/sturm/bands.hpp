#ifndef STURM_BANDS_HPP
#define STURM_BANDS_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sturm/contfrac.hpp"
#include "sturm/real.hpp"
#include "sturm/tracemap.hpp"

namespace sturm {

enum class BandType { I, II, III };

const char* band_type_name(BandType t);

// Allowed transitions between band types across one level. The multiplicity
// tau of an edge at quotient n counts how many children of the target type
// one parent of the source type produces.
struct SymbolicLetter {
    BandType from = BandType::I;
    BandType to = BandType::I;
    long long tau = 1;    // tau_edge(a_j) for the level j the letter occupies
    long long index = 1;  // 1..tau, counted from the left
    bool operator==(const SymbolicLetter&) const = default;
};

using SymbolicWord = std::vector<SymbolicLetter>;

// tau_edge(n): (I,II) -> 1, (II,I) -> n+1, (II,III) -> n, (III,I) -> n,
// (III,III) -> n-1. Throws for edges that cannot occur.
long long tau_multiplicity(BandType from, BandType to, long long n);

// True iff the target type of u equals the source type of v.
bool admissible(const SymbolicLetter& u, const SymbolicLetter& v);

// Serialized form used as stable node ids, e.g. "III-I.1.1/I-II.1.1".
std::string word_id(const SymbolicWord& word);
SymbolicWord word_from_id(const std::string& id);

// Per-parent child counts (nI, nII, nIII); the rows of the transition
// matrix [[0,1,0],[a+1,0,a],[a,0,a-1]].
struct ChildCounts {
    long long nI = 0, nII = 0, nIII = 0;
    long long total() const { return nI + nII + nIII; }
    bool operator==(const ChildCounts&) const = default;
};
ChildCounts child_counts(BandType parent_type, long long a_next);

// The transition matrix itself, rows/cols indexed I, II, III.
using TransitionMatrix = std::array<std::array<long long, 3>, 3>;
TransitionMatrix transition_matrix(long long a);
TransitionMatrix matrix_product(const std::vector<long long>& a_values);

// Per-type band counts of G_k from iterating the matrix on (1,0,1).
std::array<long long, 3> type_counts(const ContinuedFraction& cf, int k);

// One spectral generating band.
struct Band {
    int order = 0;
    BandType type = BandType::I;
    Real lo, hi;        // midpoints of the final bisection brackets
    Real err;           // bracket radius bound for both endpoints
    TraceSpec tspec;    // defining trace function
    SymbolicWord word;  // empty at order 0
    int parent = -1;    // index into the owning tree, -1 for roots

    Real length() const { return hi - lo; }
    Real midpoint() const { return (lo + hi) / 2; }
};

struct Generation {
    int order = 0;
    std::vector<Band> bands;  // ascending lo
};

// G_0 = { [-2,2] of type III, [lambda-2, lambda+2] of type I }.
// Requires lambda > 4.
Generation level0(const Real& lambda, const Precision& prec);

struct RefineOptions {
    bool validate = true;        // geometric checks on every child band
    int max_points_log2 = 14;    // sampling cap before escalation
    bool allow_escalation = true;  // one retry at doubled mantissa_bits
};

// All order-(k+1) children of a parent at order k, sorted ascending, with
// per-type left-to-right indices and extended words. Candidate type-I
// children come from t_(k+1,1), type-II/III children from t_(k+2,0); the
// transition-matrix row fixes how many of each type must be found.
std::vector<Band> refine(const Band& parent, long long a_next, const Real& lambda,
                         const ContinuedFraction& cf, const Precision& prec,
                         const RefineOptions& opts = {},
                         std::vector<std::string>* warnings = nullptr);

// The full hierarchy G_0 .. G_depth.
class BandTree {
  public:
    static BandTree build(const Real& lambda, const ContinuedFraction& cf, int depth,
                          const Precision& prec, int threads = 1,
                          const RefineOptions& opts = {});

    int depth() const { return depth_; }
    const std::vector<Band>& nodes() const { return nodes_; }
    const Band& node(int idx) const { return nodes_[idx]; }
    // Node indices of generation k, ascending lo.
    const std::vector<int>& level(int k) const;
    Generation generation(int k) const;
    std::vector<int> children_of(int idx) const;
    // Child of the given type with per-type index ell (1-based).
    int find_child(int idx, BandType t, long long ell) const;
    int find_root(BandType t) const;
    // Index of the node with the given word, -1 if absent.
    int find_word(const SymbolicWord& word) const;

    const Real& lambda() const { return lambda_; }
    const ContinuedFraction& cf() const { return cf_; }
    const Precision& precision() const { return prec_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

    BandTree truncated(int depth) const;

    // Band-tree JSON: header plus nodes {id, order, type, lo, hi, err,
    // word, parent_id} with endpoints as full-precision decimal strings.
    std::string to_json(const std::string& lambda_str) const;
    static BandTree from_json(const std::string& text);

  private:
    std::vector<Band> nodes_;
    std::vector<std::vector<int>> levels_;
    int depth_ = 0;
    Real lambda_;
    ContinuedFraction cf_;
    Precision prec_;
    std::vector<std::string> warnings_;
};

// G_k built from scratch (k refine sweeps).
Generation generation(int k, const Real& lambda, const ContinuedFraction& cf,
                      const Precision& prec);

// The unique band coded by an admissible word, found by navigating the
// hierarchy without building whole generations.
Band band_of(const SymbolicWord& word, const Real& lambda,
             const ContinuedFraction& cf, const Precision& prec);

// Debug assertion for the type-II defining condition: |t_(k,-1)| <= 2 at
// the band's endpoints and midpoint.
bool sigma_minus1_containment(const Band& band, const Real& lambda,
                              const ContinuedFraction& cf, const Precision& prec);

// Locate all components of {|f| <= 2} inside [lo, hi] by adaptive sampling
// and bisection, requiring exactly `expected` of them. Exposed for the
// periodic-approximant oracle, which reuses the band-edge machinery.
struct TraceInterval {
    Real lo, hi;
    Real err_lo, err_hi;
    int rising = 1;  // +1 if f sweeps -2 -> +2 left to right
    bool merged_touching = false;
};
std::vector<TraceInterval> locate_trace_bands(
    const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
    long long expected, const Precision& prec, int max_points_log2 = 14,
    bool merge_touching = false);

// Cache of serialized trees keyed by (lambda decimal string, CF literal,
// mantissa_bits); files are per-depth. Returns the tree restricted to the
// requested depth when a deep-enough file exists.
std::optional<BandTree> cache_load(const std::string& cache_dir,
                                   const std::string& lambda_str,
                                   const ContinuedFraction& cf,
                                   const Precision& prec, int depth);
void cache_store(const std::string& cache_dir, const std::string& lambda_str,
                 const BandTree& tree);

} // namespace sturm

#endif
