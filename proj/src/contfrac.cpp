#include "sturm/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sturm/errors.hpp"

namespace sturm {

ContinuedFraction ContinuedFraction::finite(std::vector<long long> quotients) {
    for (long long a : quotients)
        if (a < 1) throw ConfigError("partial quotients must be >= 1");
    ContinuedFraction cf;
    cf.head_ = std::move(quotients);
    return cf;
}

ContinuedFraction ContinuedFraction::periodic(std::vector<long long> head,
                                              std::size_t tail_start) {
    if (head.empty() || tail_start >= head.size())
        throw ConfigError("periodic tail must contain at least one quotient");
    ContinuedFraction cf = finite(std::move(head));
    cf.tail_start_ = tail_start;
    return cf;
}

ContinuedFraction ContinuedFraction::parse(const std::string& literal) {
    auto parse_csv = [](const std::string& s) {
        std::vector<long long> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw ConfigError("empty quotient in CF literal");
            std::size_t pos = 0;
            long long v = 0;
            try {
                v = std::stoll(item, &pos);
            } catch (const std::exception&) {
                throw ConfigError("bad quotient '" + item + "' in CF literal");
            }
            if (pos != item.size())
                throw ConfigError("bad quotient '" + item + "' in CF literal");
            out.push_back(v);
        }
        return out;
    };

    std::string s = literal;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw ConfigError("empty CF literal");

    std::size_t colon = s.find(':');
    std::string head_part, tail_part;
    if (colon != std::string::npos) {
        head_part = s.substr(0, colon);
        tail_part = s.substr(colon + 1);
    } else if (s.front() == '(') {
        tail_part = s;
    } else {
        head_part = s;
    }

    std::vector<long long> head =
        head_part.empty() ? std::vector<long long>{} : parse_csv(head_part);
    if (tail_part.empty()) return finite(std::move(head));

    if (tail_part.front() != '(' || tail_part.back() != ')')
        throw ConfigError("periodic tail must be parenthesized: " + literal);
    std::vector<long long> tail = parse_csv(tail_part.substr(1, tail_part.size() - 2));
    if (tail.empty()) throw ConfigError("empty periodic tail in CF literal");
    std::size_t tail_start = head.size();
    head.insert(head.end(), tail.begin(), tail.end());
    return periodic(std::move(head), tail_start);
}

std::string ContinuedFraction::literal() const {
    std::ostringstream os;
    std::size_t split = tail_start_.value_or(head_.size());
    for (std::size_t i = 0; i < split; ++i) {
        if (i) os << ",";
        os << head_[i];
    }
    if (tail_start_) {
        if (split) os << ":";
        os << "(";
        for (std::size_t i = split; i < head_.size(); ++i) {
            if (i > split) os << ",";
            os << head_[i];
        }
        os << ")";
    }
    return os.str();
}

bool ContinuedFraction::has(int i) const {
    if (i < 1) return false;
    return tail_start_.has_value() || i <= static_cast<int>(head_.size());
}

long long ContinuedFraction::quotient(int i) const {
    if (i < 1) throw ConfigError("quotient index must be >= 1");
    std::size_t idx = static_cast<std::size_t>(i - 1);
    if (idx < head_.size()) return head_[idx];
    if (!tail_start_)
        throw Exhausted("continued fraction provides only " +
                        std::to_string(head_.size()) + " quotients, need a_" +
                        std::to_string(i));
    std::size_t period = head_.size() - *tail_start_;
    return head_[*tail_start_ + (idx - *tail_start_) % period];
}

ContinuedFraction ContinuedFraction::prefix(int depth) const {
    std::vector<long long> out;
    out.reserve(depth);
    for (int i = 1; i <= depth; ++i) out.push_back(quotient(i));
    return finite(std::move(out));
}

Real ContinuedFraction::value(const Precision& prec) const {
    // Fold convergents until q_k^2 clears the precision budget; the
    // convergent then brackets the value to within 2^-(bits+16).
    BigInt p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
    BigInt bound = BigInt(1) << (prec.mantissa_bits / 2 + 10);
    int i = 1;
    while (has(i) && q_cur < bound) {
        BigInt a = quotient(i);
        BigInt p_next = a * p_cur + p_prev;
        BigInt q_next = a * q_cur + q_prev;
        p_prev = p_cur; p_cur = p_next;
        q_prev = q_cur; q_cur = q_next;
        ++i;
    }
    return make_real(p_cur, prec) / make_real(q_cur, prec);
}

ContinuedFraction expand(const Real& x, int depth) {
    if (depth < 1) throw ConfigError("expansion depth must be >= 1");
    if (!(x > 0 && x < 1)) throw ConfigError("expand requires x in (0,1)");

    // Quotients stay trustworthy while q_k^2 is well inside the precision
    // of x; beyond that the residual is dominated by representation error.
    unsigned bits = static_cast<unsigned>(
        std::lround(static_cast<double>(x.precision()) / 0.30103));
    BigInt q_limit = BigInt(1) << std::max(8u, (bits > 16 ? (bits - 16) / 2 : 4u));

    std::vector<long long> quotients;
    BigInt q_prev = 0, q_cur = 1;
    Real rem = x;
    for (int i = 0; i < depth; ++i) {
        if (rem == 0)
            throw RationalInput("expansion terminated after " +
                                std::to_string(i) + " quotients");
        Real inv = 1 / rem;
        Real fl = floor(inv);
        if (fl >= Real(1LL << 62))
            throw InsufficientPrecision("residual below working precision");
        long long a = fl.convert_to<long long>();
        if (a < 1) throw InsufficientPrecision("non-positive quotient from residual");
        quotients.push_back(a);
        BigInt q_next = BigInt(a) * q_cur + q_prev;
        q_prev = q_cur; q_cur = q_next;
        if (q_cur > q_limit && i + 1 < depth)
            throw InsufficientPrecision(
                "convergent denominator exceeds the precision budget after " +
                std::to_string(i + 1) + " quotients");
        rem = inv - fl;
    }
    return ContinuedFraction::finite(std::move(quotients));
}

ContinuedFraction gauss_shift(const ContinuedFraction& cf) {
    const auto& head = cf.head();
    auto tail = cf.tail_start();
    if (!tail && head.size() < 2)
        throw Exhausted("cannot shift: only one quotient and no periodic tail");

    if (tail && *tail == 0) {
        // Pure periodic word: rotate the block.
        std::vector<long long> rotated(head.begin() + 1, head.end());
        rotated.push_back(head.front());
        return ContinuedFraction::periodic(std::move(rotated), 0);
    }
    std::vector<long long> rest(head.begin() + 1, head.end());
    if (tail) return ContinuedFraction::periodic(std::move(rest), *tail - 1);
    return ContinuedFraction::finite(std::move(rest));
}

Real gauss_real(const Real& x) {
    if (x == 0) throw ZeroInput("Gauss map undefined at 0");
    Real inv = 1 / x;
    return inv - floor(inv);
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, int k_max) {
    if (k_max < -1) throw ConfigError("k_max must be >= -1");
    std::vector<Convergent> out;
    out.reserve(k_max + 2);
    out.push_back({-1, 1, 0});
    if (k_max >= 0) out.push_back({0, 0, 1});
    for (int k = 1; k <= k_max; ++k) {
        BigInt a = cf.quotient(k); // throws Exhausted when the CF runs out
        const Convergent& c1 = out[out.size() - 1];
        const Convergent& c2 = out[out.size() - 2];
        out.push_back({k, a * c1.p + c2.p, a * c1.q + c2.q});
    }
    return out;
}

double gauss_kuzmin_probability(long long k) {
    return std::log2(1.0 + 1.0 / (static_cast<double>(k) * (k + 2)));
}

ContinuedFraction sample_frequency(std::uint64_t seed, int depth) {
    if (depth < 1) throw ConfigError("depth must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<long long> quotients;
    quotients.reserve(depth);
    for (int i = 0; i < depth; ++i) {
        // Invert the Gauss-measure CDF: x = 2^u - 1 has density
        // 1/((1+x) log 2); its first quotient floor(1/x) is Gauss-Kuzmin.
        double u;
        do {
            u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        } while (u == 0.0);
        double x = std::exp2(u) - 1.0;
        double af = std::floor(1.0 / x);
        long long a = af >= 9e18 ? 9000000000000000000LL : static_cast<long long>(af);
        quotients.push_back(std::max(1LL, a));
    }
    return ContinuedFraction::finite(std::move(quotients));
}

} // namespace sturm
