#ifndef STURM_ERRORS_HPP
#define STURM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sturm {

// Exit classes used by the CLI: 2 = bad configuration or input,
// 3 = precision budget exhausted, 4 = internal invariant violated.
enum class ErrorClass { Config = 2, Precision = 3, Internal = 4 };

struct Error : std::runtime_error {
    Error(std::string code_, ErrorClass cls_, const std::string& msg)
        : std::runtime_error(msg), code(std::move(code_)), cls(cls_) {}
    std::string code;
    ErrorClass cls;
};

struct RationalInput : Error {
    explicit RationalInput(const std::string& msg)
        : Error("RationalInput", ErrorClass::Config, msg) {}
};
struct InsufficientPrecision : Error {
    explicit InsufficientPrecision(const std::string& msg)
        : Error("InsufficientPrecision", ErrorClass::Precision, msg) {}
};
struct Exhausted : Error {
    explicit Exhausted(const std::string& msg)
        : Error("Exhausted", ErrorClass::Config, msg) {}
};
struct ZeroInput : Error {
    explicit ZeroInput(const std::string& msg)
        : Error("ZeroInput", ErrorClass::Config, msg) {}
};
struct CouplingTooSmall : Error {
    explicit CouplingTooSmall(const std::string& msg)
        : Error("CouplingTooSmall", ErrorClass::Config, msg) {}
};
struct AmbiguousSign : Error {
    explicit AmbiguousSign(const std::string& msg)
        : Error("AmbiguousSign", ErrorClass::Precision, msg) {}
};
struct CountMismatch : Error {
    CountMismatch(long long expected_, long long found_, const std::string& msg)
        : Error("CountMismatch", ErrorClass::Precision, msg),
          expected(expected_), found(found_) {}
    long long expected;
    long long found;
};
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg)
        : Error("PrecisionExhausted", ErrorClass::Precision, msg) {}
};
struct InadmissibleWord : Error {
    explicit InadmissibleWord(const std::string& msg)
        : Error("InadmissibleWord", ErrorClass::Config, msg) {}
};
struct LengthOutOfRange : Error {
    explicit LengthOutOfRange(const std::string& msg)
        : Error("LengthOutOfRange", ErrorClass::Config, msg) {}
};
struct DegenerateScales : Error {
    explicit DegenerateScales(const std::string& msg)
        : Error("DegenerateScales", ErrorClass::Config, msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg)
        : Error("ConfigError", ErrorClass::Config, msg) {}
};
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg)
        : Error("InvariantViolation", ErrorClass::Internal, msg) {}
};

} // namespace sturm

#endif
