#include "latred/supergaussian.hpp"

#include <algorithm>
#include <cmath>

namespace latred {

namespace {

long double pow_norm_ld(const IntVec& nums, const Int& den, const PNorm& p) {
    long double d = to_ld(den);
    long double pe = static_cast<long double>(p.p());
    long double s = 0;
    for (const Int& x : nums) s += powl(fabsl(to_ld(x)) / d, pe);
    return s;
}

// Supergaussian tail factor (e a^p e^{-a^p})^{n/p}.
long double tail_factor(long double a, long double p, int n) {
    long double ap = powl(a, p);
    return powl(expl(1.0L) * ap * expl(-ap), static_cast<long double>(n) / p);
}

// Smallest a on the grid 1 + k/8 with tail factor <= rel_err.
Rat choose_a(const PNorm& p, int n, double rel_err) {
    long double pe = static_cast<long double>(p.p());
    for (int k = 0; k <= 2048; ++k) {
        Rat a(8 + k, 8);
        if (tail_factor(to_ld(a), pe, n) <= static_cast<long double>(rel_err)) return a;
    }
    throw Error("f_p_lattice: no truncation level reached the requested rel_err");
}

NormKey truncation_radius(const PNorm& p, int n, const Rat& a) {
    // radius a (n/p)^{1/p}; exact pow a^p n/p for integral p
    if (p.exact()) {
        unsigned e = p.ipow();
        return NormKey::from_pow(p, pow_rat(a, e) * Rat(n, static_cast<long long>(e)));
    }
    long double pe = static_cast<long double>(p.p());
    long double r = to_ld(a) * powl(static_cast<long double>(n) / pe, 1.0L / pe);
    return NormKey::from_approx(r);
}

}  // namespace

long double f_p_point(const RatVec& x, const PNorm& p) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    long double s = 0;
    long double pe = static_cast<long double>(p.p());
    for (const Rat& c : x) s += powl(fabsl(to_ld(c)), pe);
    return expl(-s);
}

long double f_p_point_scaled(const IntVec& nums, const Int& den, const PNorm& p) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    return expl(-pow_norm_ld(nums, den, p));
}

MassAccumulator f_p_lattice_scan(const Basis& B, const PNorm& p, double rel_err,
                                 const std::function<void(const IntVec&, long double)>& extra,
                                 const EnumLimits& limits) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    if (!(rel_err > 0 && rel_err < 0.5)) throw InputError("rel_err must lie in (0, 1/2)");
    int n = B.rank();
    Rat a = choose_a(p, n, rel_err);
    NormKey R = truncation_radius(p, n, a);
    MassAccumulator acc;
    acc.truncation_radius = R;
    long double sum = 0;
    enumerate_norms(
        B, BallSpec::around_zero(B.dimension(), p, R),
        [&](const IntVec& coeffs, long double npow) {
            sum += expl(-npow);
            if (extra) extra(coeffs, npow);
        },
        limits);
    acc.value = sum;
    // certified by the supergaussian tail bound at a; the extra 1e-14 absorbs
    // long double summation roundoff
    acc.tail_fraction = tail_factor(to_ld(a), static_cast<long double>(p.p()), n) + 1e-14L;
    return acc;
}

MassAccumulator f_p_lattice(const Basis& B, const PNorm& p, double rel_err,
                            const EnumLimits& limits) {
    return f_p_lattice_scan(B, p, rel_err, nullptr, limits);
}

MassAccumulator f_p_shifted(const Basis& B, const RatVec& t, const PNorm& p, double rel_err,
                            const EnumLimits& limits) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    if (!(rel_err > 0 && rel_err < 0.5)) throw InputError("rel_err must lie in (0, 1/2)");
    int n = B.rank();
    long double pe = static_cast<long double>(p.p());

    // Mass of L + t = sum over y in L of f_p(y + t); enumerate around -t.
    auto [sv, l1] = exact_svp(B, p, limits);
    long double lam = static_cast<long double>(l1.approx);
    long double tnorm = static_cast<long double>(norm_key(p, t).approx);
    Int n0 = count_points(B, BallSpec::around_zero(B.dimension(), p, l1), limits);
    long double base_count = to_ld(n0);

    // Packing tail: points of L+t in the shell [j, j+1) number at most
    // (1 + 2(j+1+||t||)/lambda1)^n * N(lambda1); each contributes <= e^{-j^p}.
    auto tail_from = [&](long double r0) {
        long double s = 0;
        for (long double j = std::max(0.0L, floorl(r0)); j < r0 + 400.0L; j += 1.0L) {
            long double bound =
                powl(1.0L + 2.0L * (j + 1.0L + tnorm) / lam, static_cast<long double>(n)) *
                base_count;
            long double term = bound * expl(-powl(j, pe));
            s += term;
            if (term < 1e-38L && j > r0 + 2) break;
        }
        return s;
    };

    RatVec center(t.size());
    for (size_t i = 0; i < t.size(); ++i) center[i] = -t[i];

    long double R = std::max(2.0L, tnorm + 1.0L);
    MassAccumulator acc;
    for (int grow = 0; grow < 64; ++grow) {
        NormKey Rkey =
            p.exact() ? NormKey::from_pow(p, pow_rat(Rat(static_cast<long long>(ceill(R * 16)), 16),
                                                     p.ipow()))
                      : NormKey::from_approx(R);
        long double sum = 0;
        // ||y - (-t)||^p = ||y + t||^p, straight from the kernel
        enumerate_norms(
            B, BallSpec{center, Rkey, p},
            [&](const IntVec&, long double npow) { sum += expl(-npow); }, limits);
        long double tail = tail_from(R);
        acc.truncation_radius = Rkey;
        acc.value = sum;
        if (sum > 0 && tail <= static_cast<long double>(rel_err) * sum) {
            acc.tail_fraction = tail / (sum + tail) + 1e-14L;
            return acc;
        }
        R += 2.0L;
    }
    throw Error("f_p_shifted: tail certification did not converge");
}

long double one_d_mass(long double r, const PNorm& p) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    if (!(r > 0)) throw InputError("one_d_mass needs r > 0");
    long double pe = static_cast<long double>(p.p());
    long double s = 0;
    for (long long k = 1; k <= 4000000; ++k) {
        long double e = powl(static_cast<long double>(k) * r, pe);
        if (e > 11400.0L) break;  // exp underflows far below long double tiny
        long double term = expl(-e);
        s += term;
        if (term < s * 1e-25L) break;
    }
    return 2.0L * s;
}

long long sample_multiple(long double r, const PNorm& p, RngStream& rng) {
    long double mass = one_d_mass(r, p);
    long double target = static_cast<long double>(rng.uniform_pos()) * mass;
    long double pe = static_cast<long double>(p.p());
    long double acc = 0;
    long long k = 1;
    for (; k <= 4000000; ++k) {
        long double e = powl(static_cast<long double>(k) * r, pe);
        long double term = e > 11400.0L ? 0.0L : expl(-e);
        acc += 2.0L * term;
        if (acc >= target || term == 0.0L) break;
    }
    return rng.coin() ? k : -k;
}

std::vector<LatticeVector> dss_exact(const Basis& B, const PNorm& p, long long M, RngStream& rng,
                                     double rel_err, const EnumLimits& limits) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    int n = B.rank();
    Rat a = choose_a(p, n, rel_err);
    NormKey R = truncation_radius(p, n, a);
    std::vector<IntVec> pts;
    std::vector<long double> cum;
    long double s = 0;
    enumerate_norms(
        B, BallSpec::around_zero(B.dimension(), p, R),
        [&](const IntVec& coeffs, long double npow) {
            s += expl(-npow);
            pts.push_back(coeffs);
            cum.push_back(s);
        },
        limits);
    std::vector<LatticeVector> out;
    out.reserve(M);
    for (long long i = 0; i < M; ++i) {
        long double u = static_cast<long double>(rng.uniform_pos()) * s;
        size_t idx = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        if (idx >= pts.size()) idx = pts.size() - 1;
        out.push_back(LatticeVector::make(B, pts[idx]));
    }
    return out;
}

DssViaSvp::DssViaSvp(const Basis& B, const PNorm& p, long long f, SvpOracle& oracle,
                     const EnumLimits& limits)
    : B_(B), p_(p), f_(f) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    if (f < 1) throw InputError("f must be >= 1");
    int m = B.dimension();
    long long ell = 200 * static_cast<long long>(m) * m * f;

    OracleAnswer shortest = oracle.solve(B, p);
    NormKey l1 = shortest.vector.norm(p);

    // Ladder radii r_i^p = lambda1^p + i/(100 m f). With inexact p the pow
    // values are tracked approximately alongside exact comparisons.
    bool exact = p.exact();
    Rat l1pow = exact ? l1.pow : Rat(0);
    long double l1pow_ld = exact ? to_ld(l1.pow)
                                 : powl(static_cast<long double>(l1.approx),
                                        static_cast<long double>(p.p()));
    radii_pow_.resize(ell + 1);
    for (long long i = 0; i <= ell; ++i)
        radii_pow_[i] = exact ? l1pow + Rat(i, 100 * static_cast<long long>(m) * f) : Rat(0);

    // One enumeration at the top radius; primitive points sorted by norm give
    // every prefix count N_i.
    NormKey top = exact ? NormKey::from_pow(p, radii_pow_[ell])
                        : NormKey::from_approx(powl(
                              l1pow_ld + static_cast<long double>(ell) /
                                             (100.0L * m * f),
                              1.0L / static_cast<long double>(p.p())));
    std::vector<LatticeVector> pts =
        enumerate_points(B_, BallSpec::around_zero(m, p, top), limits);
    struct Prim {
        Rat pow;
        long double norm;
        IntVec coeffs;
    };
    std::vector<Prim> prim;
    for (const LatticeVector& v : pts) {
        if (v.is_zero() || gcd_vec(v.coeffs) != 1) continue;
        NormKey k = v.norm(p);
        prim.push_back(Prim{exact ? k.pow : Rat(0), static_cast<long double>(k.approx), v.coeffs});
    }
    std::sort(prim.begin(), prim.end(), [&](const Prim& a, const Prim& b) {
        if (exact) {
            if (a.pow != b.pow) return a.pow < b.pow;
        } else if (a.norm != b.norm) {
            return a.norm < b.norm;
        }
        return a.coeffs < b.coeffs;
    });
    prim_coeffs_.reserve(prim.size());
    for (auto& pr : prim) {
        prim_pow_.push_back(pr.pow);
        prim_norm_.push_back(pr.norm);
        prim_coeffs_.push_back(std::move(pr.coeffs));
    }

    // N_i = #s of +-pairs of primitive points with ||x||^p <= r_i^p (exact
    // prefix counts, halved: the one-dimensional weights f_p(Z_{!=0} r)
    // already range over both signed multiples of a pair representative, so
    // pair counts are what make sum_i N_i w_i equal the nonzero mass).
    ladder_count_.resize(ell + 1);
    long double pe = static_cast<long double>(p.p());
    for (long long i = 0; i <= ell; ++i) {
        long long both;
        if (exact) {
            both = std::upper_bound(prim_pow_.begin(), prim_pow_.end(), radii_pow_[i]) -
                   prim_pow_.begin();
        } else {
            long double rpow = l1pow_ld + static_cast<long double>(i) / (100.0L * m * f);
            long double r = powl(rpow, 1.0L / pe) * (1.0L + 1e-12L);
            both = std::upper_bound(prim_norm_.begin(), prim_norm_.end(), r) - prim_norm_.begin();
        }
        ladder_count_[i] = both / 2;
    }

    // w_l = f_p(Z_{!=0} r_l); w_i = f_p(Z_{!=0} r_i) - f_p(Z_{!=0} r_{i+1}).
    // All rung masses in one sweep: with u_i = r_i^p = u_0 + i*step,
    // f_p(Z_{!=0} r_i) = 2 sum_k e^{-k^p u_i}, and each k-term decays by the
    // fixed factor e^{-k^p step} per rung. Terms are dropped once negligible.
    long double u0 = exact ? to_ld(radii_pow_[0]) : l1pow_ld;
    long double step = 1.0L / (100.0L * m * f);
    std::vector<long double> term, ratio;
    for (long long k = 1;; ++k) {
        long double e = powl(static_cast<long double>(k), pe) * u0;
        if (e > 60.0L && k > 1) break;
        long double tk = expl(-e);
        if (tk < 1e-26L && k > 1) break;
        term.push_back(tk);
        ratio.push_back(expl(-powl(static_cast<long double>(k), pe) * step));
        if (k > 8000000) throw Error("dss ladder: lambda1 too small");
    }
    std::vector<long double> mass(ell + 1);
    for (long long i = 0; i <= ell; ++i) {
        long double s = 0;
        for (size_t k = 0; k < term.size(); ++k) s += term[k];
        mass[i] = 2.0L * s;
        while (!term.empty() && term.back() < 1e-26L * (s + 1e-300L)) {
            term.pop_back();
            ratio.pop_back();
        }
        for (size_t k = 0; k < term.size(); ++k) term[k] *= ratio[k];
    }
    cum_weight_.resize(ell + 1);
    long double acc = 0;
    for (long long i = 0; i <= ell; ++i) {
        long double w = (i == ell) ? mass[i] : mass[i] - mass[i + 1];
        if (w < 0) w = 0;
        acc += w * static_cast<long double>(ladder_count_[i]);
        cum_weight_[i] = acc;
    }
    W_ = acc;
    cdf_cache_.assign(prim_coeffs_.size(), {});
}

double DssViaSvp::delta() const {
    return 0.5 * std::log1p(1.0 / static_cast<double>(f_));
}

LatticeVector DssViaSvp::draw(RngStream& rng) const {
    long double u = static_cast<long double>(rng.uniform01()) * (1.0L + W_);
    if (u <= 1.0L || W_ <= 0)
        return LatticeVector::make(B_, IntVec(B_.rank(), 0));
    long double target = static_cast<long double>(rng.uniform_pos()) * W_;
    size_t k = std::lower_bound(cum_weight_.begin(), cum_weight_.end(), target) -
               cum_weight_.begin();
    if (k >= cum_weight_.size()) k = cum_weight_.size() - 1;
    long long Nk = ladder_count_[k];
    if (Nk <= 0) {
        // only reachable through zero-weight rounding; fall back to 0
        return LatticeVector::make(B_, IntVec(B_.rank(), 0));
    }
    // uniform over the 2 N_k signed representatives; the multiple draw below
    // is sign symmetric, so this is a uniform pair draw
    size_t idx = static_cast<size_t>(rng.below(static_cast<std::uint64_t>(2 * Nk)));
    std::vector<long double>& cdf = cdf_cache_[idx];
    if (cdf.empty()) {
        long double r = prim_norm_[idx];
        long double pe = static_cast<long double>(p_.p());
        long double s = 0;
        for (long long k = 1; k <= 4000000; ++k) {
            long double e = powl(static_cast<long double>(k) * r, pe);
            long double term = e > 11400.0L ? 0.0L : expl(-e);
            s += 2.0L * term;
            cdf.push_back(s);
            if (term < s * 1e-25L || term == 0.0L) break;
        }
    }
    long double mtarget = static_cast<long double>(rng.uniform_pos()) * cdf.back();
    long long z = 1 + (std::lower_bound(cdf.begin(), cdf.end(), mtarget) - cdf.begin());
    if (z > static_cast<long long>(cdf.size())) z = static_cast<long long>(cdf.size());
    if (rng.coin()) z = -z;
    const IntVec& xc = prim_coeffs_[idx];
    IntVec coeffs(xc.size());
    for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = xc[i] * z;
    return LatticeVector::make(B_, std::move(coeffs));
}

std::vector<LatticeVector> DssViaSvp::sample(long long M, RngStream& rng) const {
    std::vector<LatticeVector> out;
    out.reserve(M);
    for (long long i = 0; i < M; ++i) out.push_back(draw(rng));
    return out;
}

double supergaussian_cp(double p) {
    return std::pow(2.0, p) * std::pow(std::tgamma(1.0 + 1.0 / p), p);
}

ContinuousSupergaussian::ContinuousSupergaussian(PNorm norm, int m)
    : p(norm), dimension(m), c_p(norm.is_infinity() ? 0.0 : supergaussian_cp(norm.p())) {}

std::vector<double> sample_continuous(const ContinuousSupergaussian& dist, RngStream& rng) {
    std::vector<double> out(dist.dimension);
    if (dist.p.is_infinity()) {
        for (double& x : out) x = 2.0 * rng.uniform01() - 1.0;
        return out;
    }
    double p = dist.p.p();
    double C = dist.c_p;
    if (std::abs(p - 1.0) < 1e-12) {
        for (double& x : out) {
            double e = rng.exponential(C);  // C_1 = 2
            x = rng.coin() ? e : -e;
        }
        return out;
    }
    if (std::abs(p - 2.0) < 1e-12) {
        double sigma = 1.0 / std::sqrt(2.0 * C);  // C_2 = pi
        for (double& x : out) x = sigma * rng.normal();
        return out;
    }
    // Rejection from a two-sided exponential envelope with rate lambda:
    // accept u <= exp((lambda |x| - C |x|^p) - hstar).
    double lambda = p * std::pow(C, 1.0 / p);
    double xstar = std::pow(lambda / (C * p), 1.0 / (p - 1.0));
    double hstar = lambda * xstar - C * std::pow(xstar, p);
    for (double& x : out) {
        while (true) {
            double cand = rng.exponential(lambda);
            double h = lambda * cand - C * std::pow(cand, p);
            if (rng.uniform01() <= std::exp(h - hstar)) {
                x = rng.coin() ? cand : -cand;
                break;
            }
        }
    }
    return out;
}

}  // namespace latred
