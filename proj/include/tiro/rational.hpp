#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tiro {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Raised on malformed input text or documents.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation's precondition does not hold.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an exploration exceeds its configured budget.
class ResourceExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ── Rational helpers ────────────────────────────────────────────────

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer lcm_integer(const Integer& a, const Integer& b) {
    if (a == 0) return b;
    if (b == 0) return a;
    Integer g = boost::multiprecision::gcd(a, b);
    return boost::multiprecision::abs(a / g * b);
}

inline Integer floor_of(const Rational& r) {
    Integer n = numerator_of(r), d = denominator_of(r);
    Integer q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

inline Integer ceil_of(const Rational& r) {
    Integer f = floor_of(r);
    return Rational(f) == r ? f : f + 1;
}

inline Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

inline bool is_integral(const Rational& r) { return denominator_of(r) == 1; }

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline std::int64_t to_int64(const Integer& z) {
    if (z > Integer(INT64_MAX) || z < Integer(INT64_MIN))
        throw ResourceExceeded("integer value exceeds 64-bit range");
    return z.convert_to<std::int64_t>();
}

inline std::string to_string(const Rational& r) {
    if (is_integral(r)) return numerator_of(r).str();
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p/q", "-p/q", integers and finite decimals such as "0.25".
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw ParseError("malformed rational '" + std::string(text) + "'"); };
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) fail();
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
        negative = s[0] == '-';
        pos = 1;
    }
    auto digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) fail();
        for (std::size_t i = from; i < to; ++i)
            if (s[i] < '0' || s[i] > '9') fail();
        return Integer(s.substr(from, to - from));
    };
    Rational value;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Integer num = digits(pos, slash);
        Integer den = digits(slash + 1, s.size());
        if (den == 0) fail();
        value = Rational(num, den);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        Integer whole = dot == pos ? Integer(0) : digits(pos, dot);
        if (dot + 1 >= s.size()) fail();
        Integer part = digits(dot + 1, s.size());
        Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(s.size() - dot - 1));
        value = Rational(whole) + Rational(part, scale);
    } else {
        value = Rational(digits(pos, s.size()));
    }
    return negative ? Rational(-value) : value;
}

// ── Extended values ─────────────────────────────────────────────────

/// A rational extended with the two infinities.
class ExtendedValue {
public:
    enum class Kind { negative_infinity, finite, positive_infinity };

    ExtendedValue() = default;
    ExtendedValue(Rational value) : value_(std::move(value)) {}
    ExtendedValue(int value) : value_(value) {}

    static ExtendedValue infinity() { return ExtendedValue(Kind::positive_infinity); }
    static ExtendedValue negative_infinity() { return ExtendedValue(Kind::negative_infinity); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_positive_infinity() const { return kind_ == Kind::positive_infinity; }
    bool is_negative_infinity() const { return kind_ == Kind::negative_infinity; }

    const Rational& value() const {
        if (!is_finite()) throw std::logic_error("value() on an infinite ExtendedValue");
        return value_;
    }

    friend ExtendedValue operator+(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.is_finite() && b.is_finite()) return ExtendedValue(a.value_ + b.value_);
        if ((a.is_positive_infinity() && b.is_negative_infinity()) ||
            (a.is_negative_infinity() && b.is_positive_infinity()))
            throw std::domain_error("undefined sum of opposite infinities");
        return a.is_finite() ? b : a;
    }

    friend ExtendedValue operator-(const ExtendedValue& a) {
        if (a.is_finite()) return ExtendedValue(Rational(-a.value_));
        return a.is_positive_infinity() ? negative_infinity() : infinity();
    }

    friend ExtendedValue operator-(const ExtendedValue& a, const ExtendedValue& b) { return a + (-b); }

    /// Scales by a rational; zero times an infinity is zero (degenerate intervals).
    friend ExtendedValue operator*(const Rational& k, const ExtendedValue& a) {
        if (a.is_finite()) return ExtendedValue(Rational(k * a.value_));
        if (k == 0) return ExtendedValue(0);
        if (k > 0) return a;
        return -a;
    }

    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.kind_ != b.kind_) return false;
        return !a.is_finite() || a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        if (!a.is_finite()) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::positive_infinity: return "inf";
            case Kind::negative_infinity: return "-inf";
            default: return to_string(value_);
        }
    }

private:
    explicit ExtendedValue(Kind k) : kind_(k) {}
    Kind kind_ = Kind::finite;
    Rational value_{0};
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedValue& v) { return os << v.str(); }

inline ExtendedValue parse_extended(std::string_view text) {
    std::string s(text);
    if (s == "inf" || s == "+inf" || s == "∞") return ExtendedValue::infinity();
    if (s == "-inf") return ExtendedValue::negative_infinity();
    return ExtendedValue(parse_rational(s));
}

}  // namespace tiro
