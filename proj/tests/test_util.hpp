#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/rng.hpp"

namespace testutil {

using namespace latred;

inline Basis make_basis(std::vector<std::vector<long long>> cols, long long denom = 1) {
    std::vector<IntVec> c;
    for (auto& col : cols) {
        IntVec v;
        for (long long x : col) v.push_back(Int(x));
        c.push_back(v);
    }
    return Basis(std::move(c), Int(denom));
}

inline Basis zn(int n) {
    std::vector<IntVec> cols(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) cols[i][i] = 1;
    return Basis(std::move(cols));
}

inline RatVec rvec(std::vector<Rat> xs) { return RatVec(xs.begin(), xs.end()); }

// Independent reference: scan the fixed coefficient box [-K, K]^n and keep
// points passing the exact norm test. Deliberately avoids the Hoelder box
// and the production kernels.
inline std::vector<IntVec> brute_ball(const Basis& B, const RatVec& center, const PNorm& p,
                                      const NormKey& radius, long long K) {
    int n = B.rank();
    std::vector<IntVec> out;
    IntVec x(n, Int(-K));
    while (true) {
        RatVec diff(B.dimension());
        IntVec emb = B.apply(x);
        for (int i = 0; i < B.dimension(); ++i)
            diff[i] = Rat(emb[i], B.denominator()) - center[i];
        if (key_le(norm_key(p, diff), radius)) out.push_back(x);
        int j = n - 1;
        while (j >= 0 && x[j] == K) {
            x[j] = -K;
            --j;
        }
        if (j < 0) break;
        ++x[j];
    }
    // brute order is already lexicographic
    return out;
}

// Double-precision row norms of the pseudo-inverse (B^T B)^{-1} B^T, by
// Gaussian elimination on doubles; no shared code with the exact layer.
inline std::vector<double> pinv_row_norms(const Basis& B) {
    int n = B.rank(), m = B.dimension();
    std::vector<std::vector<double>> aug(n, std::vector<double>(n + m, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < m; ++k)
                s += static_cast<double>(B.column(i)[k]) * static_cast<double>(B.column(j)[k]);
            aug[i][j] = s;
        }
        for (int k = 0; k < m; ++k)
            aug[i][n + k] =
                static_cast<double>(B.column(i)[k]) * static_cast<double>(B.denominator());
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        std::swap(aug[piv], aug[col]);
        double pv = aug[col][col];
        for (int j = col; j < n + m; ++j) aug[col][j] /= pv;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = aug[r][col];
            for (int j = col; j < n + m; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    std::vector<double> norms(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int k = 0; k < m; ++k) s += aug[i][n + k] * aug[i][n + k];
        norms[i] = std::sqrt(s);
    }
    return norms;
}

// Complete straight-box scan: the box is derived from Cauchy-Schwarz with a
// generous inflation, so every lattice point within radius_value of the
// center is inside. Returns nullopt if the box exceeds cell_cap.
inline std::optional<std::vector<IntVec>> brute_ball_sound(const Basis& B, const RatVec& center,
                                                           const PNorm& p, const NormKey& radius,
                                                           double radius_value,
                                                           long long cell_cap = 40'000'000) {
    int n = B.rank(), m = B.dimension();
    std::vector<double> rows = pinv_row_norms(B);
    // ||v||_2 <= m^{max(0, 1/2 - 1/p)} ||v||_p
    double ip = p.is_infinity() ? 0.0 : 1.0 / p.p();
    double conv = std::pow(static_cast<double>(m), std::max(0.0, 0.5 - ip));
    double t2 = 0;
    for (int k = 0; k < m; ++k) {
        double tv = static_cast<double>(center[k]);
        t2 += tv * tv;
    }
    std::vector<long long> lo(n), hi(n);
    double cells = 1;
    for (int i = 0; i < n; ++i) {
        // |x_i - (B^+ t)_i| <= rows_i ||v - t||_2 <= rows_i conv radius,
        // and |(B^+ t)_i| <= rows_i ||t||_2
        double K = rows[i] * conv * radius_value * (1.0 + 1e-6) + 1.0;
        double c0 = rows[i] * std::sqrt(t2) * (1.0 + 1e-6) + 1.0;
        lo[i] = static_cast<long long>(std::floor(-c0 - K));
        hi[i] = static_cast<long long>(std::ceil(c0 + K));
        cells *= static_cast<double>(hi[i] - lo[i] + 1);
        if (cells > static_cast<double>(cell_cap)) return std::nullopt;
    }

    // exact scan on scaled integers; fall back to rationals if they do not fit
    Int tden = 1;
    for (const Rat& c : center) tden = tden / gcd_int(tden, den(c)) * den(c);
    Int D = B.denominator() * tden;
    bool small = true;
    Int magnitude = 0;
    for (int k = 0; k < m; ++k) {
        Int b = -B.denominator() * (num(center[k]) * (tden / den(center[k])));
        Int worst = abs_int(b);
        for (int j = 0; j < n; ++j) {
            Int cjk = tden * B.column(j)[k];
            worst += abs_int(cjk) * Int(std::max(std::llabs(lo[j]), std::llabs(hi[j])));
        }
        magnitude = std::max(magnitude, worst);
    }
    small = magnitude < Int(1) << 55;
    std::vector<std::vector<long long>> cols64(n, std::vector<long long>(m, 0));
    std::vector<long long> base64(m, 0);
    if (small) {
        for (int k = 0; k < m; ++k) {
            base64[k] = static_cast<long long>(
                Int(-B.denominator() * (num(center[k]) * (tden / den(center[k])))));
            for (int j = 0; j < n; ++j)
                cols64[j][k] = static_cast<long long>(Int(tden * B.column(j)[k]));
        }
    }

    const bool exact_int = p.exact();
    unsigned e = p.is_infinity() ? 1 : (p.exact() ? p.ipow() : 0);
    __int128 thr128 = 0;
    if (exact_int) {
        Rat tpow = radius.pow * (p.is_infinity() ? Rat(D) : Rat(pow_int(D, e)));
        Int thr = floor_rat(tpow);
        small = small && boost::multiprecision::msb(abs_int(thr) + 1) < 120 &&
                boost::multiprecision::msb(pow_int(magnitude, e) * m + 1) < 120;
        if (small) {
            bool neg = thr < 0;
            Int a = abs_int(thr);
            thr128 = (static_cast<__int128>(static_cast<std::uint64_t>(a >> 64)) << 64) |
                     static_cast<__int128>(static_cast<std::uint64_t>(
                         a & Int(std::numeric_limits<std::uint64_t>::max())));
            if (neg) thr128 = -thr128;
        }
    }

    std::vector<IntVec> out;
    std::vector<long long> x(n, 0);
    for (int i = 0; i < n; ++i) x[i] = lo[i];
    long double invD = 1.0L / to_ld(D);
    long double fp = p.is_infinity() ? 1.0L : static_cast<long double>(p.p());
    while (true) {
        bool in;
        if (small) {
            __int128 acc = 0;
            long double facc = 0;
            for (int k = 0; k < m; ++k) {
                long long d = base64[k];
                for (int j = 0; j < n; ++j) d += cols64[j][k] * x[j];
                if (exact_int) {
                    __int128 a = d < 0 ? -static_cast<__int128>(d) : d;
                    if (p.is_infinity()) {
                        acc = std::max(acc, a);
                    } else {
                        __int128 t = 1;
                        for (unsigned q = 0; q < e; ++q) t *= a;
                        acc += t;
                    }
                } else {
                    facc += powl(fabsl(static_cast<long double>(d)) * invD, fp);
                }
            }
            if (exact_int) {
                in = acc <= thr128;
            } else {
                long double v = powl(facc, 1.0L / fp);
                long double scale = std::max(std::max(v, (long double)radius.approx), 1e-300L);
                in = v <= radius.approx + 1e-9L * scale;
            }
        } else {
            IntVec xi(n);
            for (int i = 0; i < n; ++i) xi[i] = Int(x[i]);
            RatVec diff(m);
            IntVec emb = B.apply(xi);
            for (int i = 0; i < m; ++i) diff[i] = Rat(emb[i], B.denominator()) - center[i];
            in = key_le(norm_key(p, diff), radius);
        }
        if (in) {
            IntVec xi(n);
            for (int i = 0; i < n; ++i) xi[i] = Int(x[i]);
            out.push_back(std::move(xi));
        }
        int j = n - 1;
        while (j >= 0 && x[j] == hi[j]) {
            x[j] = lo[j];
            --j;
        }
        if (j < 0) break;
        ++x[j];
    }
    return out;
}

inline Basis random_basis(RngStream& rng, int n, int m, long long bound) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<IntVec> cols(n, IntVec(m));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) cols[j][i] = Int(rng.range(-bound, bound));
        if (integer_rank(cols) == n) return Basis(std::move(cols));
    }
    throw std::runtime_error("random_basis failed");
}

inline std::set<std::vector<long long>> coeff_set(const std::vector<LatticeVector>& pts) {
    std::set<std::vector<long long>> s;
    for (const auto& v : pts) {
        std::vector<long long> c;
        for (const Int& x : v.coeffs) c.push_back(static_cast<long long>(x));
        s.insert(c);
    }
    return s;
}

}  // namespace testutil
