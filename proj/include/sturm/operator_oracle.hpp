#ifndef STURM_OPERATOR_ORACLE_HPP
#define STURM_OPERATOR_ORACLE_HPP

#include <vector>

#include "sturm/bands.hpp"
#include "sturm/contfrac.hpp"
#include "sturm/real.hpp"

namespace sturm {

// Parameters of the potential lambda * chi_[1-alpha,1)({n alpha + omega}).
struct PotentialSpec {
    Real lambda;
    Real alpha;  // in (0,1)
    Real omega;  // in [0,1)

    static PotentialSpec from_cf(const Real& lambda, const ContinuedFraction& cf,
                                 const Real& omega, const Precision& prec);
};

// Potential value at site n: lambda if {n alpha + omega} lands in
// [1 - alpha, 1), else 0.
Real potential(long long n, const PotentialSpec& spec);

// Indicator of the rotation coded with the exact rational alpha = p/q of a
// convergent (omega = 0): 1 iff (n p) mod q >= q - p. Integer arithmetic,
// immune to boundary rounding.
int sturmian_symbol(long long n, const Convergent& conv);

// Spectrum of the period-q_k approximant: the q_k components of
// {|t_(k+1,0)| <= 2} on [-2-lambda, 2+lambda]. Touching bands come back
// merged with the merged_touching flag set.
std::vector<TraceInterval> periodic_band_edges(int k, const Real& lambda,
                                               const ContinuedFraction& cf,
                                               const Precision& prec);

// Eigenvalues of the size x size Dirichlet truncation (symmetric
// tridiagonal, sites 1..size), ascending. Runs at double precision; its
// role is coarse cross-validation of the band covers.
std::vector<double> finite_eigenvalues(int size, const PotentialSpec& spec);

} // namespace sturm

#endif
