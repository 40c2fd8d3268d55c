#ifndef STURM_REAL_HPP
#define STURM_REAL_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <type_traits>

namespace sturm {

// Arbitrary-precision real. Expression templates are off: every operation
// yields a materialized value whose precision is the max of its operands,
// so precision propagates from the seeds of a computation without touching
// the (process-global) default. Workers on different threads can therefore
// run at different precisions concurrently.
using Real = boost::multiprecision::number<
    boost::multiprecision::backends::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

using BigInt = boost::multiprecision::cpp_int;

// Working-precision request. mantissa_bits is the nominal binary mantissa
// size; endpoint brackets are refined until their relative width drops
// below 2^-(mantissa_bits-32), leaving a 32-bit guard between the bracket
// resolution and the arithmetic noise floor.
struct Precision {
    unsigned mantissa_bits = 192;

    unsigned digits10() const {
        // ceil(bits * log10(2)) plus guard digits; actual mpfr precision
        // is then at least mantissa_bits.
        return static_cast<unsigned>(mantissa_bits * 0.30103) + 4;
    }
    Precision doubled() const { return Precision{mantissa_bits * 2}; }
};

template <typename T, std::enable_if_t<std::is_arithmetic_v<T>, int> = 0>
inline Real make_real(T v, const Precision& prec) {
    return Real(v, prec.digits10());
}
inline Real make_real(const std::string& decimal, const Precision& prec) {
    return Real(decimal, prec.digits10());
}
inline Real make_real(const BigInt& v, const Precision& prec) {
    return Real(v.str(), prec.digits10());
}

// 2^e at the given precision (exact).
inline Real pow2(long e, const Precision& prec) {
    return ldexp(make_real(1.0, prec), e);
}

// Relative endpoint tolerance 2^-(mantissa_bits-32).
inline Real endpoint_tolerance(const Precision& prec) {
    return pow2(-static_cast<long>(prec.mantissa_bits) + 32, prec);
}

// Arithmetic noise floor 2^-(mantissa_bits/2), used by integrity checks.
inline Real noise_floor(const Precision& prec) {
    return pow2(-static_cast<long>(prec.mantissa_bits / 2), prec);
}

// Decimal string with enough digits to reproduce the value bit-exactly.
inline std::string to_decimal(const Real& x) {
    return x.str(0, std::ios_base::scientific);
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

} // namespace sturm

#endif
