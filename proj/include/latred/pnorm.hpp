#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "latred/errors.hpp"
#include "latred/rational.hpp"

namespace latred {

/// An lp norm tag: a finite p >= 1 or the infinity sentinel.
///
/// For p in {1, 2} (and any integral p) and for p = inf, comparisons between
/// rational vectors are exact integer arithmetic on the comparison key
/// (sum |x_i|^p resp. max |x_i|). Other finite p use extended precision
/// floating point (long double, 64 significand bits) with a relative 1e-9
/// tie rule.
class PNorm {
public:
    static PNorm finite(double p) {
        if (!(p >= 1.0)) throw InputError("p-norm requires p >= 1");
        PNorm n;
        n.infinite_ = false;
        n.p_ = p;
        return n;
    }
    static PNorm infinity() {
        PNorm n;
        n.infinite_ = true;
        n.p_ = 0.0;
        return n;
    }

    bool is_infinity() const { return infinite_; }
    double p() const { return p_; }

    // True when comparisons are exact integer arithmetic.
    bool exact() const {
        if (infinite_) return true;
        double r = std::round(p_);
        return std::abs(p_ - r) < 1e-12 && r >= 1.0 && r <= 16.0;
    }
    // Integral exponent; only valid when exact() and finite.
    unsigned ipow() const { return static_cast<unsigned>(std::llround(p_)); }

    static PNorm parse(const std::string& s) {
        if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return infinity();
        try {
            return finite(std::stod(s));
        } catch (const std::exception&) {
            throw InputError("cannot parse norm '" + s + "'");
        }
    }
    std::string to_string() const {
        if (infinite_) return "inf";
        if (exact()) return std::to_string(ipow());
        // trim trailing zeros
        std::string s = std::to_string(p_);
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    bool operator==(const PNorm& o) const {
        return infinite_ == o.infinite_ && (infinite_ || p_ == o.p_);
    }

private:
    bool infinite_ = false;
    double p_ = 2.0;
};

/// Comparison key of a vector norm under a fixed PNorm.
///
/// Exact keys store the p-th power of the norm (for finite p) or the norm
/// itself (p = inf) as a rational. Inexact keys store the norm value in long
/// double; two inexact keys within relative 1e-9 are considered tied.
struct NormKey {
    bool exact = true;
    Rat pow = 0;             // ||v||^p (finite exact) or ||v|| (inf)
    long double approx = 0;  // ||v|| in all cases

    static NormKey zero(const PNorm&) { return NormKey{true, Rat(0), 0.0L}; }

    // Key for a plain nonnegative rational radius value.
    static NormKey from_value(const PNorm& p, const Rat& value) {
        NormKey k;
        k.approx = to_ld(value);
        if (p.is_infinity()) {
            k.exact = true;
            k.pow = value;
        } else if (p.exact()) {
            k.exact = true;
            k.pow = pow_rat(value, p.ipow());
        } else {
            k.exact = false;
            k.pow = 0;
        }
        return k;
    }

    // Key whose p-th power is the given rational (finite p only).
    static NormKey from_pow(const PNorm& p, const Rat& pw) {
        if (p.is_infinity()) throw InputError("from_pow is for finite p");
        NormKey k;
        k.approx = powl(to_ld(pw), 1.0L / static_cast<long double>(p.p()));
        k.exact = p.exact();
        k.pow = k.exact ? pw : Rat(0);
        if (!k.exact) k.pow = 0;
        return k;
    }

    static NormKey from_approx(long double v) { return NormKey{false, Rat(0), v}; }

    bool is_zero() const { return exact ? pow == 0 : approx == 0.0L; }

    double value() const { return static_cast<double>(approx); }

    // Scale the underlying norm value by a nonnegative rational factor.
    NormKey scaled(const PNorm& p, const Rat& factor) const {
        NormKey k = *this;
        k.approx = approx * to_ld(factor);
        if (exact) {
            if (p.is_infinity())
                k.pow = pow * factor;
            else
                k.pow = pow * pow_rat(factor, p.ipow());
        }
        return k;
    }
};

// Three-way comparison; inexact pairs within relative 1e-9 compare equal.
inline int compare(const NormKey& a, const NormKey& b) {
    if (a.exact && b.exact) {
        if (a.pow < b.pow) return -1;
        if (a.pow > b.pow) return 1;
        return 0;
    }
    long double x = a.approx, y = b.approx;
    long double scale = std::max(std::max(fabsl(x), fabsl(y)), 1e-300L);
    if (fabsl(x - y) <= 1e-9L * scale) return 0;
    return x < y ? -1 : 1;
}

inline bool key_le(const NormKey& a, const NormKey& b) { return compare(a, b) <= 0; }
inline bool key_lt(const NormKey& a, const NormKey& b) { return compare(a, b) < 0; }
inline bool key_eq(const NormKey& a, const NormKey& b) { return compare(a, b) == 0; }

}  // namespace latred
