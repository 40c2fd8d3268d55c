#include "sturm/tracemap.hpp"

#include "sturm/errors.hpp"

namespace sturm {

Mat2 Mat2::pow(long long n) const {
    if (n < 0) throw ConfigError("Mat2::pow expects n >= 0");
    Mat2 base = *this;
    Mat2 acc{Real(1, a.precision()), Real(0, a.precision()),
             Real(0, a.precision()), Real(1, a.precision())};
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

namespace {

Mat2 seed_m_minus1(const Real& lambda, const Precision& prec) {
    Real one = make_real(1, prec), zero = make_real(0, prec);
    return {one, -lambda, zero, one};
}

Mat2 seed_m0(const Real& E, const Precision& prec) {
    Real one = make_real(1, prec), zero = make_real(0, prec);
    return {E, -one, one, zero};
}

// (M_{k-1}, M_k) by the two-term recursion.
std::pair<Mat2, Mat2> matrix_pair(int k, const Real& E, const Real& lambda,
                                  const ContinuedFraction& cf, const Precision& prec) {
    if (k < 0) throw ConfigError("matrix pair needs k >= 0");
    Mat2 prev = seed_m_minus1(lambda, prec);
    Mat2 cur = seed_m0(E, prec);
    for (int j = 1; j <= k; ++j) {
        Mat2 next = prev * cur.pow(cf.quotient(j));
        prev = cur;
        cur = next;
    }
    return {prev, cur};
}

} // namespace

Mat2 transfer_matrix(int k, const Real& E, const Real& lambda,
                     const ContinuedFraction& cf, const Precision& prec) {
    if (k < -1) throw ConfigError("transfer matrix index must be >= -1");
    if (k == -1) return seed_m_minus1(lambda, prec);
    return matrix_pair(k, E, lambda, cf, prec).second;
}

Real trace(const TraceSpec& spec, const Real& E, const Real& lambda,
           const ContinuedFraction& cf, const Precision& prec) {
    if (spec.k < 0 || spec.p < -1) throw ConfigError("invalid trace spec");
    auto [m_prev, m_cur] = matrix_pair(spec.k, E, lambda, cf, prec);
    if (spec.p == -1) return (m_prev * m_cur.inverse()).trace();
    Real t0 = m_prev.trace();
    if (spec.p == 0) return t0;
    Real t1 = (m_prev * m_cur).trace();
    Real x = m_cur.trace();
    for (int p = 1; p < spec.p; ++p) {
        Real t2 = x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

Real fricke_invariant(int k, const Real& E, const Real& lambda,
                      const ContinuedFraction& cf, const Precision& prec) {
    if (k < 0) throw ConfigError("fricke invariant needs k >= 0");
    auto [m_prev, m_cur] = matrix_pair(k, E, lambda, cf, prec);
    Real x = m_cur.trace();
    Real y = m_prev.trace();
    Real z = (m_cur * m_prev).trace();
    return x * x + y * y + z * z - x * y * z - 4;
}

int trace_derivative_sign(const TraceSpec& spec, const Real& E, const Real& lambda,
                          const ContinuedFraction& cf, const Precision& prec,
                          const Real& step_hint) {
    if (step_hint <= 0) throw ConfigError("derivative step must be positive");
    Real tp = trace(spec, E + step_hint, lambda, cf, prec);
    Real tm = trace(spec, E - step_hint, lambda, cf, prec);
    Real diff = tp - tm;
    Real scale = abs(tp) + abs(tm) + 2;
    if (abs(diff) <= noise_floor(prec) * scale)
        throw AmbiguousSign("derivative difference below noise floor; escalate precision");
    return diff > 0 ? 1 : -1;
}

} // namespace sturm
