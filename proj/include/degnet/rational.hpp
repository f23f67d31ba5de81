// Exact rational arithmetic used everywhere feasibility or tightness is decided.
// Thin helpers around GMP's mpq_class; no floating tolerances leak into checks.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace degnet {

using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }

inline Rat rat_pow(const Rat& base, unsigned exp) {
    Rat result(1);
    Rat b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

// Accepts "3", "-5/2" and decimal strings like "0.25".
inline Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rat q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        q.canonicalize();
        return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits = digits.substr(1);
    }
    if (digits.empty()) throw std::invalid_argument("bad rational literal: " + s);
    mpz_class num(digits, 10);
    mpz_class den(1);
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat q(num, den);
    q.canonicalize();
    return neg ? Rat(-q) : q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat dot_product(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace degnet
