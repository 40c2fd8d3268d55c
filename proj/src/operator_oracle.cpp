#include "sturm/operator_oracle.hpp"

#include <Eigen/Dense>

#include "sturm/errors.hpp"
#include "sturm/tracemap.hpp"

namespace sturm {

PotentialSpec PotentialSpec::from_cf(const Real& lambda, const ContinuedFraction& cf,
                                     const Real& omega, const Precision& prec) {
    PotentialSpec spec;
    spec.lambda = lambda;
    spec.alpha = cf.value(prec);
    spec.omega = omega;
    return spec;
}

Real potential(long long n, const PotentialSpec& spec) {
    Real x = n * spec.alpha + spec.omega;
    Real frac = x - floor(x);
    if (frac >= 1 - spec.alpha && frac < 1) return spec.lambda;
    return Real(0, spec.alpha.precision());
}

int sturmian_symbol(long long n, const Convergent& conv) {
    if (conv.q <= 0) throw ConfigError("convergent with non-positive denominator");
    BigInt r = (BigInt(n) * conv.p) % conv.q;
    if (r < 0) r += conv.q;
    return r >= conv.q - conv.p ? 1 : 0;
}

std::vector<TraceInterval> periodic_band_edges(int k, const Real& lambda,
                                               const ContinuedFraction& cf,
                                               const Precision& prec) {
    if (k < 1) throw ConfigError("periodic approximant needs k >= 1");
    auto convs = convergents(cf, k);
    long long q_k = convs.back().q.convert_to<long long>();
    TraceSpec spec{k + 1, 0};
    auto f = [&](const Real& E) { return trace(spec, E, lambda, cf, prec); };
    Real lo = -2 - lambda;
    Real hi = 2 + lambda;
    return locate_trace_bands(f, lo, hi, q_k, prec, 14, /*merge_touching=*/true);
}

std::vector<double> finite_eigenvalues(int size, const PotentialSpec& spec) {
    if (size < 2) throw ConfigError("truncation size must be >= 2");
    Eigen::VectorXd diag(size), sub(size - 1);
    for (int i = 0; i < size; ++i)
        diag(i) = to_double(potential(i + 1, spec));
    sub.setOnes();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> out(size);
    for (int i = 0; i < size; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

} // namespace sturm
