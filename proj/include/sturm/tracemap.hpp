#ifndef STURM_TRACEMAP_HPP
#define STURM_TRACEMAP_HPP

#include "sturm/contfrac.hpp"
#include "sturm/real.hpp"

namespace sturm {

// 2x2 real matrix, row-major. All transfer matrices are unimodular
// (det = 1), which inverse() relies on.
struct Mat2 {
    Real a, b, c, d;

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Real trace() const { return a + d; }
    Real det() const { return a * d - b * c; }
    // Adjugate = inverse for det 1.
    Mat2 inverse() const { return {d, -b, -c, a}; }
    static Mat2 identity(const Precision& prec) {
        Real one = make_real(1, prec), zero = make_real(0, prec);
        return {one, zero, zero, one};
    }
    Mat2 pow(long long n) const; // n >= 0, exponentiation by squaring
};

// Identifies the trace function t_(k,p)(E) = tr(M_{k-1}(E) M_k(E)^p).
struct TraceSpec {
    int k = 0;  // >= 0
    int p = 0;  // >= -1
    bool operator==(const TraceSpec&) const = default;
};

// M_k(E) for k >= -1, built by M_{k+1} = M_{k-1} M_k^{a_{k+1}} from the
// seeds M_{-1} = [[1,-lambda],[0,1]], M_0 = [[E,-1],[1,0]].
Mat2 transfer_matrix(int k, const Real& E, const Real& lambda,
                     const ContinuedFraction& cf, const Precision& prec);

// t_spec(E), evaluated by the three-term recursion in p
// t_(k,p+1) = tr(M_k) t_(k,p) - t_(k,p-1); p = -1 uses the adjugate.
Real trace(const TraceSpec& spec, const Real& E, const Real& lambda,
           const ContinuedFraction& cf, const Precision& prec);

// x^2 + y^2 + z^2 - xyz - 4 for (x,y,z) = (tr M_k, tr M_{k-1},
// tr(M_k M_{k-1})); equals lambda^2 for every k and E, which makes it an
// end-to-end precision monitor.
Real fricke_invariant(int k, const Real& E, const Real& lambda,
                      const ContinuedFraction& cf, const Precision& prec);

// Sign of d/dE t_spec at E by central difference. step_hint should be
// scaled to the enclosing band (bands use band_length/1000); raises
// AmbiguousSign when the difference sits below the noise floor.
int trace_derivative_sign(const TraceSpec& spec, const Real& E, const Real& lambda,
                          const ContinuedFraction& cf, const Precision& prec,
                          const Real& step_hint);

} // namespace sturm

#endif
