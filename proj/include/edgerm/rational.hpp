#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <boost/rational.hpp>

#include "edgerm/error.hpp"

namespace edgerm {

/// Exact error probabilities and targets. Always printed as "p/q".
using Rational = boost::rational<std::int64_t>;

inline std::string format_rational(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q" or a bare integer "p".
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            auto n = std::stoll(text, &used);
            if (used != text.size()) throw MalformedError("trailing characters in rational '" + text + "'");
            return Rational(n);
        }
        auto num_text = text.substr(0, slash);
        auto den_text = text.substr(slash + 1);
        auto n = std::stoll(num_text, &used);
        if (used != num_text.size()) throw MalformedError("bad numerator in '" + text + "'");
        auto d = std::stoll(den_text, &used);
        if (used != den_text.size()) throw MalformedError("bad denominator in '" + text + "'");
        if (d == 0) throw MalformedError("zero denominator in '" + text + "'");
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        throw MalformedError("not a rational: '" + text + "'");
    } catch (const std::out_of_range&) {
        throw MalformedError("rational out of range: '" + text + "'");
    }
}

inline Rational make_fraction(std::uint64_t num, std::uint64_t den) {
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace edgerm
