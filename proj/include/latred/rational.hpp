#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace latred {

// All lattice data is exact: integer matrices with a shared denominator and
// rational scalars. cpp_int/cpp_rational keep every comparison decidable.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

// floor(a/b) for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int floor_rat(const Rat& x) { return floor_div(num(x), den(x)); }
inline Int ceil_rat(const Rat& x) { return ceil_div(num(x), den(x)); }

// Round half up, deterministically.
inline Int round_rat(const Rat& x) { return floor_rat(x + Rat(1, 2)); }

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int gcd_vec(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd_int(g, x);
    return g;
}

inline Int pow_int(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned e) {
    return Rat(pow_int(num(base), e), pow_int(den(base), e));
}

inline double to_double(const Rat& x) { return static_cast<double>(x); }
inline long double to_ld(const Rat& x) {
    return static_cast<long double>(num(x)) / static_cast<long double>(den(x));
}
inline long double to_ld(const Int& x) { return static_cast<long double>(x); }

inline std::string int_to_string(const Int& x) { return x.str(); }

// "num/den" with no decimal representation, so round trips are bit exact.
inline std::string rat_to_string(const Rat& x) {
    if (den(x) == 1) return num(x).str();
    return num(x).str() + "/" + den(x).str();
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

// floor(sqrt(n)) for n >= 0.
inline Int isqrt(const Int& n) { return boost::multiprecision::sqrt(n); }

}  // namespace latred
