#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "errors.hpp"

namespace ksbox {

using Rational = boost::rational<std::int64_t>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
inline double to_double(double x) { return x; }

inline std::int64_t floor_int(const Rational& r)
{
    // boost::rational keeps den > 0
    std::int64_t q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}
inline std::int64_t floor_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }

inline bool is_integral(const Rational& r) { return r.denominator() == 1; }
inline bool is_integral(double x) { return x == std::floor(x); }

inline std::string to_string(const Rational& r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "a/b", "a", or a finite decimal such as "0.35" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&] { return InvalidArgument("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();

    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) throw fail();
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) throw fail();
        std::int64_t v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw fail();
            v = v * 10 + (s[i] - '0');
        }
        return neg ? -v : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto den = parse_int(text.substr(slash + 1));
        if (den == 0) throw fail();
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.size() > 15) throw fail();
        bool neg = !whole.empty() && whole[0] == '-';
        std::int64_t scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
        std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        if (f < 0) throw fail();
        std::int64_t mag = (w < 0 ? -w : w) * scale + f;
        return Rational(neg ? -mag : mag, scale);
    }
    return Rational(parse_int(text));
}

}  // namespace ksbox
