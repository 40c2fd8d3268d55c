#ifndef STURM_CONTFRAC_HPP
#define STURM_CONTFRAC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sturm/real.hpp"

namespace sturm {

// A frequency alpha in (0,1) encoded by its positive partial quotients.
// An optional periodic tail makes the represented number a quadratic
// irrational whose expansion can be read to any depth; without a tail the
// expansion is finite and requests past the end raise Exhausted.
class ContinuedFraction {
  public:
    ContinuedFraction() = default;

    static ContinuedFraction finite(std::vector<long long> quotients);
    // head holds all listed quotients; tail_start indexes (0-based) the
    // first quotient of the repeating block.
    static ContinuedFraction periodic(std::vector<long long> head, std::size_t tail_start);

    // Literal syntax: "1,1,1" finite; "1,2:(3,4)" = [1,2,3,4,3,4,...];
    // "(1)" = [1,1,1,...].
    static ContinuedFraction parse(const std::string& literal);
    std::string literal() const;

    // a_i with 1-based index i.
    long long quotient(int i) const;
    bool has(int i) const;
    // Number of explicitly listed quotients.
    int head_size() const { return static_cast<int>(head_.size()); }
    bool is_periodic() const { return tail_start_.has_value(); }
    std::optional<std::size_t> tail_start() const { return tail_start_; }
    const std::vector<long long>& head() const { return head_; }

    // First `depth` quotients as a finite CF.
    ContinuedFraction prefix(int depth) const;

    // Value of the represented number at the requested precision.
    Real value(const Precision& prec) const;

    bool operator==(const ContinuedFraction& other) const = default;

  private:
    std::vector<long long> head_;
    std::optional<std::size_t> tail_start_;
};

struct Convergent {
    int k = 0;      // level index, from -1
    BigInt p;       // numerator
    BigInt q;       // denominator
};

// Partial-quotient expansion of x in (0,1). Terminating expansions raise
// RationalInput; when the convergent denominators outgrow the precision of
// x the remaining quotients are untrustworthy and InsufficientPrecision is
// raised instead of emitting them.
ContinuedFraction expand(const Real& x, int depth);

// Drops the leading quotient: [a1,a2,a3,...] -> [a2,a3,...].
ContinuedFraction gauss_shift(const ContinuedFraction& cf);

// {1/x}, the Gauss map on (0,1).
Real gauss_real(const Real& x);

// (p_k, q_k) for k = -1 .. k_max, exact integer arithmetic.
std::vector<Convergent> convergents(const ContinuedFraction& cf, int k_max);

// depth quotients drawn i.i.d. from the Gauss-Kuzmin law
// P(a = k) = log2(1 + 1/(k(k+2))); deterministic in the seed.
ContinuedFraction sample_frequency(std::uint64_t seed, int depth);

// P(a = k) under the Gauss-Kuzmin law.
double gauss_kuzmin_probability(long long k);

} // namespace sturm

#endif
