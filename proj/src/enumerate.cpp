#include "latred/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace latred {
namespace {

using std::vector;

Int int128_to_int(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    Int out = static_cast<std::uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(u);
    return neg ? Int(-out) : out;
}

bool fits_bits(const Int& x, unsigned bits) {
    if (x == 0) return true;
    return boost::multiprecision::msb(abs_int(x)) + 1 <= bits;
}

std::int64_t to_i64(const Int& x) { return static_cast<std::int64_t>(x); }

__int128 to_i128(const Int& x) {
    bool neg = x < 0;
    Int a = abs_int(x);
    unsigned __int128 hi = static_cast<std::uint64_t>(a >> 64);
    unsigned __int128 lo = static_cast<std::uint64_t>(a & Int(std::numeric_limits<std::uint64_t>::max()));
    unsigned __int128 u = (hi << 64) | lo;
    __int128 v = static_cast<__int128>(u);
    return neg ? -v : v;
}

enum class PCase { one, two, inf, int_p, approx };

// ---------------------------------------------------------------------------
// Coefficient box from the Hoelder bound.
// ---------------------------------------------------------------------------

struct Box {
    int n = 0, m = 0;
    vector<Int> lo, hi;
    vector<IntVec> cols;  // cols[j] = t_den * B.column(j)
    IntVec base;          // -B_den * t numerators
    Int D = 1;            // B_den * t_den
    PCase pc = PCase::two;
    unsigned ip = 2;
    long double fp = 2.0L;
    Int cells = 0;
    bool empty = false;
};

// [lo,hi] = { x in Z : (x-c)^2 <= R2 }, exact.
void quad_range(const Rat& c, const Rat& R2, Int& lo, Int& hi) {
    if (R2 < 0) {
        lo = 1;
        hi = 0;
        return;
    }
    Int u = num(R2), v = den(R2);
    Int w = isqrt(u * v);  // w/v <= sqrt(R2) < (w+1)/v
    auto inside = [&](const Int& x) {
        Rat d = Rat(x) - c;
        return d * d <= R2;
    };
    Int l = ceil_rat(c - Rat(w + 1, v));
    Int h = floor_rat(c + Rat(w + 1, v));
    while (l <= h && !inside(l)) ++l;
    while (h >= l && !inside(h)) --h;
    lo = l;
    hi = h;
}

Box make_box(const Basis& B, const BallSpec& ball, const EnumLimits& limits) {
    const PNorm& p = ball.norm;
    int n = B.rank(), m = B.dimension();
    if (static_cast<int>(ball.center.size()) != m) throw InputError("ball center length mismatch");
    if (p.exact() && !ball.radius.exact)
        throw InputError("exact norm requires an exact radius key");

    Box box;
    box.n = n;
    box.m = m;
    box.lo.resize(n);
    box.hi.resize(n);

    Int tden = 1;
    for (const Rat& x : ball.center) tden = tden / gcd_int(tden, den(x)) * den(x);
    box.D = B.denominator() * tden;
    box.base.resize(m);
    for (int i = 0; i < m; ++i) box.base[i] = -B.denominator() * (num(ball.center[i]) * (tden / den(ball.center[i])));
    box.cols.assign(n, IntVec(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) box.cols[j][i] = tden * B.column(j)[i];

    if (p.is_infinity())
        box.pc = PCase::inf;
    else if (!p.exact())
        box.pc = PCase::approx;
    else if (p.ipow() == 1)
        box.pc = PCase::one;
    else if (p.ipow() == 2)
        box.pc = PCase::two;
    else
        box.pc = PCase::int_p;
    box.ip = p.is_infinity() ? 0 : (p.exact() ? p.ipow() : 0);
    box.fp = p.is_infinity() ? 0.0L : static_cast<long double>(p.p());

    LeftInverse P = left_inverse(B);
    RatVec c(n);
    for (int i = 0; i < n; ++i) {
        Rat s = 0;
        for (int k = 0; k < m; ++k) s += P.rows[i][k] * ball.center[k];
        c[i] = s;
    }

    const NormKey& r = ball.radius;
    for (int i = 0; i < n; ++i) {
        if (box.pc == PCase::one) {
            Rat mx = 0;
            for (int k = 0; k < m; ++k) mx = std::max(mx, abs_rat(P.rows[i][k]));
            Rat R = r.pow * mx;  // pow == value for p = 1
            box.lo[i] = ceil_rat(c[i] - R);
            box.hi[i] = floor_rat(c[i] + R);
        } else if (box.pc == PCase::inf) {
            Rat s = 0;
            for (int k = 0; k < m; ++k) s += abs_rat(P.rows[i][k]);
            Rat R = r.pow * s;  // pow == value for p = inf
            box.lo[i] = ceil_rat(c[i] - R);
            box.hi[i] = floor_rat(c[i] + R);
        } else if (box.pc == PCase::two) {
            Rat s = 0;
            for (int k = 0; k < m; ++k) s += P.rows[i][k] * P.rows[i][k];
            quad_range(c[i], r.pow * s, box.lo[i], box.hi[i]);
        } else {
            // p' = p/(p-1) is not an integer: float bound, inflated outward.
            long double pe = box.pc == PCase::int_p ? static_cast<long double>(box.ip) : box.fp;
            long double pd = pe / (pe - 1.0L);
            long double s = 0;
            for (int k = 0; k < m; ++k) s += powl(fabsl(to_ld(P.rows[i][k])), pd);
            long double rowdual = powl(s, 1.0L / pd);
            long double rv = r.exact ? powl(to_ld(r.pow), 1.0L / pe) : r.approx;
            long double W = rv * rowdual * (1.0L + 1e-9L) + 1e-9L;
            Int wceil = Int(static_cast<long long>(ceill(W))) + 1;
            box.lo[i] = ceil_rat(c[i]) - wceil;
            box.hi[i] = floor_rat(c[i]) + wceil;
        }
        if (box.hi[i] < box.lo[i]) {
            box.empty = true;
            return box;
        }
    }

    box.cells = 1;
    for (int i = 0; i < n; ++i) box.cells *= box.hi[i] - box.lo[i] + 1;
    if (box.cells > limits.cell_cap)
        throw EnumerationBudgetExceeded("coefficient box has " + box.cells.str() + " cells (cap " +
                                        std::to_string(limits.cell_cap) + ")");
    return box;
}

// ---------------------------------------------------------------------------
// Kernels. The small kernel runs on int64 coordinates with __int128
// accumulators; the big kernel uses cpp_int throughout. Both visit cells in
// lexicographic coefficient order and apply the exact norm test.
// ---------------------------------------------------------------------------

// |x|^p for the float path; half-integer p goes through sqrt instead of powl.
inline long double pow_abs(long double a, long double fp, int half_twice) {
    if (half_twice > 0) {
        long double t = sqrtl(a);
        for (int k = half_twice / 2; k > 0; --k) t *= a;
        return t;
    }
    return powl(a, fp);
}

inline int detect_half(long double fp) {
    long double tw = fp * 2.0L;
    long double r = roundl(tw);
    if (fabsl(tw - r) < 1e-12L && static_cast<long long>(r) % 2 == 1)
        return static_cast<int>(r);
    return 0;
}

struct SmallKernel {
    int n, m;
    PCase pc;
    unsigned ip;
    long double fp;
    int half_twice = 0;
    __int128 thr;          // exact cases
    long double fthr;      // approx case: radius value
    long double invD;
    vector<std::int64_t> lo, hi, cols, base;  // cols flattened [j*m + i]

    template <class V>
    void rec(int depth, vector<std::int64_t>& acc, vector<std::int64_t>& xs, V&& visit) {
        std::int64_t* cur = acc.data() + depth * m;
        std::int64_t* nxt = acc.data() + (depth + 1) * m;
        const std::int64_t* C = cols.data() + depth * m;
        for (int i = 0; i < m; ++i) nxt[i] = cur[i] + C[i] * lo[depth];
        for (std::int64_t x = lo[depth];; ++x) {
            xs[depth] = x;
            if (depth == n - 1)
                test_and_visit(nxt, xs, visit);
            else
                rec(depth + 1, acc, xs, visit);
            if (x == hi[depth]) break;
            for (int i = 0; i < m; ++i) nxt[i] += C[i];
        }
    }

    template <class V>
    void test_and_visit(const std::int64_t* d, const vector<std::int64_t>& xs, V&& visit) {
        switch (pc) {
            case PCase::one: {
                __int128 s = 0;
                for (int i = 0; i < m; ++i) s += d[i] < 0 ? -static_cast<__int128>(d[i]) : d[i];
                if (s <= thr) visit(xs, s, 0.0L);
                return;
            }
            case PCase::two: {
                __int128 s = 0;
                for (int i = 0; i < m; ++i) {
                    s += static_cast<__int128>(d[i]) * d[i];
                    if (s > thr) return;
                }
                visit(xs, s, 0.0L);
                return;
            }
            case PCase::inf: {
                __int128 mx = 0;
                for (int i = 0; i < m; ++i) {
                    __int128 a = d[i] < 0 ? -static_cast<__int128>(d[i]) : d[i];
                    if (a > mx) mx = a;
                    if (mx > thr) return;
                }
                visit(xs, mx, 0.0L);
                return;
            }
            case PCase::int_p: {
                __int128 s = 0;
                for (int i = 0; i < m; ++i) {
                    __int128 a = d[i] < 0 ? -static_cast<__int128>(d[i]) : d[i];
                    __int128 t = 1;
                    for (unsigned e = 0; e < ip; ++e) t *= a;
                    s += t;
                    if (s > thr) return;
                }
                visit(xs, s, 0.0L);
                return;
            }
            case PCase::approx: {
                long double s = 0;
                for (int i = 0; i < m; ++i)
                    s += pow_abs(fabsl(static_cast<long double>(d[i])) * invD, fp, half_twice);
                long double v = powl(s, 1.0L / fp);
                long double scale = std::max(std::max(v, fthr), 1e-300L);
                if (v <= fthr + 1e-9L * scale) visit(xs, static_cast<__int128>(0), v);
                return;
            }
        }
    }

    template <class V>
    void run(V&& visit) {
        half_twice = detect_half(fp);
        vector<std::int64_t> acc(static_cast<size_t>(n + 1) * m, 0);
        const std::int64_t* b = base.data();
        for (int i = 0; i < m; ++i) acc[i] = b[i];
        vector<std::int64_t> xs(n, 0);
        rec(0, acc, xs, visit);
    }
};

struct BigKernel {
    int n, m;
    PCase pc;
    unsigned ip;
    long double fp;
    Int thr;
    long double fthr;
    long double invD;
    vector<Int> lo, hi;
    vector<IntVec> cols;
    IntVec base;

    template <class V>
    void rec(int depth, vector<IntVec>& acc, IntVec& xs, V&& visit) {
        IntVec& cur = acc[depth];
        IntVec& nxt = acc[depth + 1];
        const IntVec& C = cols[depth];
        for (int i = 0; i < m; ++i) nxt[i] = cur[i] + C[i] * lo[depth];
        for (Int x = lo[depth];; ++x) {
            xs[depth] = x;
            if (depth == n - 1)
                test_and_visit(nxt, xs, visit);
            else
                rec(depth + 1, acc, xs, visit);
            if (x == hi[depth]) break;
            for (int i = 0; i < m; ++i) nxt[i] += C[i];
        }
    }

    template <class V>
    void test_and_visit(const IntVec& d, const IntVec& xs, V&& visit) {
        if (pc == PCase::approx) {
            long double s = 0;
            for (int i = 0; i < m; ++i)
                s += pow_abs(fabsl(to_ld(d[i])) * invD, fp, detect_half(fp));
            long double v = powl(s, 1.0L / fp);
            long double scale = std::max(std::max(v, fthr), 1e-300L);
            if (v <= fthr + 1e-9L * scale) visit(xs, Int(0), v);
            return;
        }
        Int s = 0;
        if (pc == PCase::one) {
            for (int i = 0; i < m; ++i) s += abs_int(d[i]);
        } else if (pc == PCase::two) {
            for (int i = 0; i < m; ++i) s += d[i] * d[i];
        } else if (pc == PCase::inf) {
            for (int i = 0; i < m; ++i) s = std::max(s, abs_int(d[i]));
        } else {
            for (int i = 0; i < m; ++i) s += pow_int(abs_int(d[i]), ip);
        }
        if (s <= thr) visit(xs, s, 0.0L);
    }

    template <class V>
    void run(V&& visit) {
        vector<IntVec> acc(n + 1, IntVec(m, 0));
        acc[0] = base;
        IntVec xs(n, 0);
        rec(0, acc, xs, visit);
    }
};

Int exact_threshold(const Box& box, const NormKey& radius) {
    if (box.pc == PCase::inf) return floor_rat(radius.pow * box.D);
    return floor_rat(radius.pow * Rat(pow_int(box.D, box.ip)));
}

bool small_feasible(const Box& box, const Int& thr, Int& emax_out) {
    Int emax = 0;
    for (int i = 0; i < box.m; ++i) {
        Int e = abs_int(box.base[i]);
        for (int j = 0; j < box.n; ++j)
            e += abs_int(box.cols[j][i]) * std::max(abs_int(box.lo[j]), abs_int(box.hi[j]));
        emax = std::max(emax, e);
    }
    emax_out = emax;
    for (int j = 0; j < box.n; ++j)
        if (!fits_bits(box.lo[j], 62) || !fits_bits(box.hi[j], 62)) return false;
    if (!fits_bits(emax, 61)) return false;
    if (box.pc == PCase::two || box.pc == PCase::int_p) {
        unsigned e = box.pc == PCase::two ? 2 : box.ip;
        Int worst = Int(box.m) * pow_int(emax, e);
        if (!fits_bits(worst, 126)) return false;
        if (!fits_bits(thr, 126)) return false;
    } else if (box.pc != PCase::approx) {
        if (!fits_bits(thr, 126)) return false;
    }
    return true;
}

// Dispatches to the right kernel. VisitSmall/VisitBig receive
// (coeffs, exact-norm-accumulator, approx-norm-value).
template <class VS, class VB>
void run_box(const Box& box, const NormKey& radius, VS&& vs, VB&& vb, bool force_big = false) {
    if (box.empty) return;
    Int thr = 0;
    if (box.pc != PCase::approx) thr = exact_threshold(box, radius);
    Int emax;
    if (!force_big && small_feasible(box, thr, emax)) {
        SmallKernel k;
        k.n = box.n;
        k.m = box.m;
        k.pc = box.pc;
        k.ip = box.ip;
        k.fp = box.fp;
        k.thr = box.pc == PCase::approx ? 0 : to_i128(thr);
        k.fthr = radius.exact ? static_cast<long double>(radius.approx) : radius.approx;
        k.invD = 1.0L / to_ld(box.D);
        k.lo.resize(box.n);
        k.hi.resize(box.n);
        for (int j = 0; j < box.n; ++j) {
            k.lo[j] = to_i64(box.lo[j]);
            k.hi[j] = to_i64(box.hi[j]);
        }
        k.cols.resize(static_cast<size_t>(box.n) * box.m);
        for (int j = 0; j < box.n; ++j)
            for (int i = 0; i < box.m; ++i) k.cols[j * box.m + i] = to_i64(box.cols[j][i]);
        k.base.resize(box.m);
        for (int i = 0; i < box.m; ++i) k.base[i] = to_i64(box.base[i]);
        k.run(vs);
        return;
    }
    BigKernel k;
    k.n = box.n;
    k.m = box.m;
    k.pc = box.pc;
    k.ip = box.ip;
    k.fp = box.fp;
    k.thr = thr;
    k.fthr = radius.exact ? static_cast<long double>(radius.approx) : radius.approx;
    k.invD = 1.0L / to_ld(box.D);
    k.lo = box.lo;
    k.hi = box.hi;
    k.cols = box.cols;
    k.base = box.base;
    k.run(vb);
}

// Exact norm key from an accumulator value.
NormKey key_from_acc(const Box& box, const Int& acc, long double approx, const PNorm& p) {
    if (box.pc == PCase::approx) return NormKey::from_approx(approx);
    NormKey k;
    k.exact = true;
    if (box.pc == PCase::inf) {
        k.pow = Rat(acc, box.D);
        k.approx = to_ld(k.pow);
    } else {
        k.pow = Rat(acc, pow_int(box.D, box.ip));
        k.approx = powl(std::max(0.0L, to_ld(k.pow)), 1.0L / static_cast<long double>(p.p()));
    }
    return k;
}

// Candidate orderings for tie-breaking among equal-norm points.
template <class T>
int first_nonzero_sign(const vector<T>& xs) {
    for (const T& x : xs) {
        if (x > 0) return 1;
        if (x < 0) return -1;
    }
    return 0;
}

// true if a is preferred over b; zero_first selects the CVP ordering.
template <class T>
bool candidate_better(const vector<T>& a, const vector<T>& b, bool zero_first) {
    int sa = first_nonzero_sign(a), sb = first_nonzero_sign(b);
    if (zero_first) {
        if (sa == 0 || sb == 0) return sa == 0 && sb != 0;
    }
    bool na = sa < 0, nb = sb < 0;
    if (na != nb) return !na;
    return a < b;
}

template <class T>
bool parallel_to(const vector<T>& xs, const vector<T>& dir) {
    size_t n = xs.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (xs[i] * dir[j] != xs[j] * dir[i]) return false;
    return true;
}

IntVec to_intvec(const vector<std::int64_t>& xs) {
    IntVec out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i];
    return out;
}

}  // namespace

std::vector<LatticeVector> enumerate_points(const Basis& B, const BallSpec& ball,
                                            const EnumLimits& limits) {
    Box box = make_box(B, ball, limits);
    std::vector<LatticeVector> out;
    run_box(
        box, ball.radius,
        [&](const vector<std::int64_t>& xs, __int128, long double) {
            out.push_back(LatticeVector::make(B, to_intvec(xs)));
        },
        [&](const IntVec& xs, const Int&, long double) { out.push_back(LatticeVector::make(B, xs)); });
    return out;
}

void enumerate_coeffs(const Basis& B, const BallSpec& ball,
                      const std::function<void(const IntVec&)>& visit, const EnumLimits& limits) {
    Box box = make_box(B, ball, limits);
    run_box(
        box, ball.radius,
        [&](const vector<std::int64_t>& xs, __int128, long double) { visit(to_intvec(xs)); },
        [&](const IntVec& xs, const Int&, long double) { visit(xs); });
}

void enumerate_norms(const Basis& B, const BallSpec& ball,
                     const std::function<void(const IntVec&, long double)>& visit,
                     const EnumLimits& limits) {
    Box box = make_box(B, ball, limits);
    long double invDp = 1.0L;
    if (box.pc == PCase::inf)
        invDp = 1.0L / to_ld(box.D);
    else if (box.pc != PCase::approx)
        invDp = 1.0L / to_ld(pow_int(box.D, box.ip));
    long double fp = box.fp;
    run_box(
        box, ball.radius,
        [&](const vector<std::int64_t>& xs, __int128 s, long double v) {
            long double npow = box.pc == PCase::approx
                                   ? powl(v, fp)
                                   : static_cast<long double>(s) * invDp;
            visit(to_intvec(xs), npow);
        },
        [&](const IntVec& xs, const Int& s, long double v) {
            long double npow =
                box.pc == PCase::approx ? powl(v, fp) : to_ld(s) * invDp;
            visit(xs, npow);
        });
}

Int count_points(const Basis& B, const BallSpec& ball, const EnumLimits& limits) {
    Box box = make_box(B, ball, limits);
    long long c = 0;
    Int cbig = 0;
    run_box(
        box, ball.radius, [&](const vector<std::int64_t>&, __int128, long double) { ++c; },
        [&](const IntVec&, const Int&, long double) { ++cbig; });
    return cbig + c;
}

Int count_primitive(const Basis& B, const BallSpec& ball, const EnumLimits& limits) {
    for (const Rat& x : ball.center)
        if (x != 0) throw InputError("count_primitive requires a zero center");
    Box box = make_box(B, ball, limits);
    long long c = 0;
    Int cbig = 0;
    run_box(
        box, ball.radius,
        [&](const vector<std::int64_t>& xs, __int128, long double) {
            std::int64_t g = 0;
            for (std::int64_t x : xs) {
                x = x < 0 ? -x : x;
                while (x) {
                    std::int64_t t = g % x;
                    g = x;
                    x = t;
                }
            }
            if (g == 1) ++c;
        },
        [&](const IntVec& xs, const Int&, long double) {
            if (gcd_vec(xs) == 1) ++cbig;
        });
    return cbig + c;
}

MultiCounts count_ball_multi(const Basis& B, const RatVec& center, const PNorm& p,
                             const std::vector<NormKey>& radii, const EnumLimits& limits) {
    if (radii.empty()) return {};
    for (size_t i = 1; i < radii.size(); ++i)
        if (compare(radii[i - 1], radii[i]) > 0) throw InputError("radii must be ascending");
    BallSpec ball{center, radii.back(), p};
    Box box = make_box(B, ball, limits);

    size_t R = radii.size();
    vector<long long> tot(R, 0), prim(R, 0);

    if (box.pc != PCase::approx) {
        vector<Int> thrs_big(R);
        for (size_t k = 0; k < R; ++k) thrs_big[k] = exact_threshold(box, radii[k]);
        // Converted values are only read when the small kernel runs, which
        // implies the largest threshold (and hence all of them) fits.
        vector<__int128> thrs(R);
        for (size_t k = 0; k < R; ++k)
            thrs[k] = fits_bits(thrs_big[k], 126) ? to_i128(thrs_big[k]) : 0;
        run_box(
            box, ball.radius,
            [&](const vector<std::int64_t>& xs, __int128 s, long double) {
                size_t k = std::lower_bound(thrs.begin(), thrs.end(), s) - thrs.begin();
                std::int64_t g = 0;
                for (std::int64_t x : xs) {
                    x = x < 0 ? -x : x;
                    while (x) {
                        std::int64_t t = g % x;
                        g = x;
                        x = t;
                    }
                }
                for (size_t j = k; j < R; ++j) {
                    ++tot[j];
                    if (g == 1) ++prim[j];
                }
            },
            [&](const IntVec& xs, const Int& s, long double) {
                size_t k = std::lower_bound(thrs_big.begin(), thrs_big.end(), s) - thrs_big.begin();
                bool g1 = gcd_vec(xs) == 1;
                for (size_t j = k; j < R; ++j) {
                    ++tot[j];
                    if (g1) ++prim[j];
                }
            });
    } else {
        auto bucket_f = [&](long double v, bool g1) {
            for (size_t j = 0; j < R; ++j) {
                long double r = radii[j].approx;
                long double scale = std::max(std::max(v, r), 1e-300L);
                if (v <= r + 1e-9L * scale) {
                    for (size_t k = j; k < R; ++k) {
                        ++tot[k];
                        if (g1) ++prim[k];
                    }
                    return;
                }
            }
        };
        run_box(
            box, ball.radius,
            [&](const vector<std::int64_t>& xs, __int128, long double v) {
                std::int64_t g = 0;
                for (std::int64_t x : xs) {
                    x = x < 0 ? -x : x;
                    while (x) {
                        std::int64_t t = g % x;
                        g = x;
                        x = t;
                    }
                }
                bucket_f(v, g == 1);
            },
            [&](const IntVec& xs, const Int&, long double v) { bucket_f(v, gcd_vec(xs) == 1); });
    }

    MultiCounts out;
    out.total.assign(R, 0);
    out.primitive.assign(R, 0);
    for (size_t k = 0; k < R; ++k) {
        out.total[k] = tot[k];
        out.primitive[k] = prim[k];
    }
    return out;
}

namespace {

BestPoint min_search(const Basis& B, const BallSpec& ball, const EnumLimits& limits,
                     bool zero_first, bool require_nonzero, const IntVec* skip_parallel) {
    Box box = make_box(B, ball, limits);
    BestPoint best;
    bool force_big = false;
    vector<std::int64_t> dir64;
    if (skip_parallel) {
        for (const Int& d : *skip_parallel)
            if (!fits_bits(d, 40)) force_big = true;
        if (!force_big)
            for (const Int& d : *skip_parallel) dir64.push_back(to_i64(d));
    }

    // Exact paths compare accumulators directly; approx path compares values.
    bool have = false;
    __int128 best_s = 0;
    Int best_sb = 0;
    long double best_v = 0;
    vector<std::int64_t> best_xs64;
    IntVec best_xs;
    bool best_is_small = false;

    run_box(
        box, ball.radius,
        [&](const vector<std::int64_t>& xs, __int128 s, long double v) {
            bool zero = true;
            for (std::int64_t x : xs)
                if (x) {
                    zero = false;
                    break;
                }
            if (require_nonzero && zero) return;
            if (skip_parallel) {
                bool par = true;
                size_t n = xs.size();
                for (size_t i = 0; i < n && par; ++i)
                    for (size_t j = i + 1; j < n; ++j)
                        if (static_cast<__int128>(xs[i]) * dir64[j] !=
                            static_cast<__int128>(xs[j]) * dir64[i]) {
                            par = false;
                            break;
                        }
                if (par) return;
            }
            int cmp;
            if (!have)
                cmp = -1;
            else if (box.pc == PCase::approx) {
                long double scale = std::max(std::max(v, best_v), 1e-300L);
                cmp = fabsl(v - best_v) <= 1e-9L * scale ? 0 : (v < best_v ? -1 : 1);
            } else
                cmp = s < best_s ? -1 : (s > best_s ? 1 : 0);
            if (cmp < 0 || (cmp == 0 && have && best_is_small &&
                            candidate_better(xs, best_xs64, zero_first))) {
                have = true;
                best_is_small = true;
                best_s = s;
                best_v = v;
                best_xs64 = xs;
            }
        },
        [&](const IntVec& xs, const Int& s, long double v) {
            bool zero = true;
            for (const Int& x : xs)
                if (x != 0) {
                    zero = false;
                    break;
                }
            if (require_nonzero && zero) return;
            if (skip_parallel && parallel_to(xs, *skip_parallel)) return;
            int cmp;
            if (!have)
                cmp = -1;
            else if (box.pc == PCase::approx) {
                long double scale = std::max(std::max(v, best_v), 1e-300L);
                cmp = fabsl(v - best_v) <= 1e-9L * scale ? 0 : (v < best_v ? -1 : 1);
            } else
                cmp = s < best_sb ? -1 : (s > best_sb ? 1 : 0);
            if (cmp < 0 ||
                (cmp == 0 && have && !best_is_small && candidate_better(xs, best_xs, zero_first))) {
                have = true;
                best_is_small = false;
                best_sb = s;
                best_v = v;
                best_xs = xs;
            }
        },
        force_big);

    if (!have) return best;
    best.found = true;
    best.coeffs = best_is_small ? to_intvec(best_xs64) : best_xs;
    best.key = key_from_acc(box, best_is_small ? int128_to_int(best_s) : best_sb, best_v, ball.norm);
    return best;
}

}  // namespace

BestPoint min_norm_nonzero(const Basis& B, const BallSpec& ball, const EnumLimits& limits) {
    return min_search(B, ball, limits, /*zero_first=*/false, /*require_nonzero=*/true, nullptr);
}

BestPoint min_norm_point(const Basis& B, const BallSpec& ball, const EnumLimits& limits) {
    return min_search(B, ball, limits, /*zero_first=*/true, /*require_nonzero=*/false, nullptr);
}

BestPoint min_norm_independent(const Basis& B, const BallSpec& ball, const IntVec& dir,
                               const EnumLimits& limits) {
    return min_search(B, ball, limits, /*zero_first=*/false, /*require_nonzero=*/true, &dir);
}

}  // namespace latred
