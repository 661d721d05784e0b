#include "tdledger/rational.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "tdledger/errors.hpp"

namespace tdledger {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kI64Max = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 v, const char* what) {
    if (v > static_cast<i128>(kI64Max) || v < -static_cast<i128>(kI64Max)) {
        throw Error(std::string("rational overflow in ") + what);
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

static Rational make_reduced(i128 num, i128 den, const char* what) {
    if (den == 0) throw Error("rational with zero denominator");
    bool negative = (num < 0) != (den < 0);
    u128 n = uabs(num);
    u128 d = uabs(den);
    if (n == 0) return Rational(0);
    u128 g = gcd128(n, d);
    n /= g;
    d /= g;
    std::int64_t rn = narrow(static_cast<i128>(n), what);
    std::int64_t rd = narrow(static_cast<i128>(d), what);
    return Rational(negative ? -rn : rn, rd);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    Rational r = make_reduced(num, den, "construction");
    num_ = r.num_;
    den_ = r.den_;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    *this = make_reduced(n, d, "addition");
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    i128 n = static_cast<i128>(num_) * o.den_ - static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    *this = make_reduced(n, d, "subtraction");
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    i128 n = static_cast<i128>(num_) * o.num_;
    i128 d = static_cast<i128>(den_) * o.den_;
    *this = make_reduced(n, d, "multiplication");
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw Error("rational division by zero");
    i128 n = static_cast<i128>(num_) * o.den_;
    i128 d = static_cast<i128>(den_) * o.num_;
    *this = make_reduced(n, d, "division");
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    i128 lhs = static_cast<i128>(a.num_) * b.den_;
    i128 rhs = static_cast<i128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Rational::to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::optional<Rational> Rational::try_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    auto digits = [&](std::string_view* out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        *out = text.substr(start, pos - start);
        return !out->empty();
    };
    std::string_view int_part;
    if (!digits(&int_part)) return std::nullopt;

    std::string_view frac_part;
    std::string_view den_part;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        if (!digits(&frac_part)) return std::nullopt;
    } else if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!digits(&den_part)) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    // 18 significant digits keeps every later product inside int64 range for
    // human-scale inputs.
    if (int_part.size() + frac_part.size() > 18 || den_part.size() > 18) return std::nullopt;

    auto to_u64 = [](std::string_view s) {
        std::uint64_t v = 0;
        std::from_chars(s.data(), s.data() + s.size(), v);
        return v;
    };
    i128 num = to_u64(int_part);
    i128 den = 1;
    if (!frac_part.empty()) {
        for (std::size_t i = 0; i < frac_part.size(); ++i) {
            num *= 10;
            den *= 10;
        }
        num += to_u64(frac_part);
    } else if (!den_part.empty()) {
        den = to_u64(den_part);
        if (den == 0) return std::nullopt;
    }
    if (negative) num = -num;
    try {
        return make_reduced(num, den, "parse");
    } catch (const Error&) {
        return std::nullopt;
    }
}

Rational Rational::parse(std::string_view text) {
    auto r = try_parse(text);
    if (!r) throw ValidationError("not a rational number: '" + std::string(text) + "'");
    return *r;
}

Rational Rational::from_double_repr(double value) {
    if (!std::isfinite(value)) throw ValidationError("non-finite number");
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    if (res.ec != std::errc()) throw ValidationError("number too wide to represent");
    return parse(std::string_view(buf, res.ptr - buf));
}

std::string Rational::to_string() const {
    // Strip the 2s and 5s from the denominator; anything left means the
    // decimal expansion does not terminate.
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    int k = twos > fives ? twos : fives;
    if (d != 1 || k > 18) {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    i128 scale = 1;
    for (int i = 0; i < k; ++i) scale *= 10;
    i128 scaled = static_cast<i128>(num_) * (scale / den_);
    u128 mag = uabs(scaled);
    u128 ip = mag / static_cast<u128>(scale);
    u128 fp = mag % static_cast<u128>(scale);

    auto u128_str = [](u128 v) {
        if (v == 0) return std::string("0");
        std::string s;
        while (v != 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    };
    std::string out = (num_ < 0 ? "-" : "") + u128_str(ip);
    if (k > 0 && fp != 0) {
        std::string frac = u128_str(fp);
        frac.insert(frac.begin(), static_cast<std::size_t>(k) - frac.size(), '0');
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out += "." + frac;
    }
    return out;
}

std::string Rational::to_decimal(int max_frac) const {
    assert(max_frac >= 0 && max_frac <= 18);
    i128 scale = 1;
    for (int i = 0; i < max_frac; ++i) scale *= 10;
    i128 n = static_cast<i128>(num_) * scale;
    i128 q = n / den_;
    i128 r = n % den_;
    // Half away from zero.
    if (uabs(r) * 2 >= static_cast<u128>(den_)) q += (num_ < 0 ? -1 : 1);

    u128 mag = uabs(q);
    u128 ip = mag / static_cast<u128>(scale);
    u128 fp = mag % static_cast<u128>(scale);
    auto u128_str = [](u128 v) {
        if (v == 0) return std::string("0");
        std::string s;
        while (v != 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    };
    std::string out = (q < 0 ? "-" : "") + u128_str(ip);
    if (max_frac > 0 && fp != 0) {
        std::string frac = u128_str(fp);
        frac.insert(frac.begin(), static_cast<std::size_t>(max_frac) - frac.size(), '0');
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    }
    return out;
}

}  // namespace tdledger
