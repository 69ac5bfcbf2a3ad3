#pragma once

#include <vector>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/oracle.hpp"
#include "latred/rng.hpp"

namespace latred {

/// Certified enclosure of a supergaussian lattice mass: `value` is the sum
/// over the truncation ball and underestimates the true mass by at most
/// tail_fraction * (true mass). The enclosure is [value, value/(1-tail_fraction)].
struct MassAccumulator {
    long double value = 0;
    NormKey truncation_radius;
    long double tail_fraction = 0;

    long double lower() const { return value; }
    long double upper() const { return value / (1.0L - tail_fraction); }
    // DSS truncation cost: Pr over the ball >= e^{-delta}.
    double delta() const { return static_cast<double>(-logl(1.0L - tail_fraction)); }
};

/// f_p(x) = exp(-||x||_p^p); finite p only.
long double f_p_point(const RatVec& x, const PNorm& p);
long double f_p_point_scaled(const IntVec& nums, const Int& den, const PNorm& p);

/// Certified f_p(L): enumerates L within radius a(n/p)^{1/p} where a is
/// chosen so the supergaussian tail bound (e a^p e^{-a^p})^{n/p} <= rel_err.
MassAccumulator f_p_lattice(const Basis& B, const PNorm& p, double rel_err,
                            const EnumLimits& limits = {});

/// Same computation, also invoking `extra(coeffs, norm^p)` per point so
/// callers can fold their own sums into the single enumeration pass.
MassAccumulator f_p_lattice_scan(const Basis& B, const PNorm& p, double rel_err,
                                 const std::function<void(const IntVec&, long double)>& extra,
                                 const EnumLimits& limits = {});

/// Certified f_p(L + t) (shift-tail controlled by a packing bound).
MassAccumulator f_p_shifted(const Basis& B, const RatVec& t, const PNorm& p, double rel_err,
                            const EnumLimits& limits = {});

/// f_p(Z_{!=0} r) = 2 sum_{k>=1} e^{-(kr)^p}, truncated with certified tail.
long double one_d_mass(long double r, const PNorm& p);

/// z = k with probability e^{-|kr|^p} / f_p(Z_{!=0} r), via inverse CDF on the
/// truncated series. Always nonzero.
long long sample_multiple(long double r, const PNorm& p, RngStream& rng);

/// M i.i.d. samples from the discrete supergaussian D_{L,p} restricted to the
/// certified truncation ball: Pr[X=y] >= e^{-delta} Pr_{D_{L,p}}[y] on the
/// ball with delta = -ln(1 - tail fraction).
std::vector<LatticeVector> dss_exact(const Basis& B, const PNorm& p, long long M, RngStream& rng,
                                     double rel_err = 1e-12, const EnumLimits& limits = {});

/// Radius-ladder sampler backed by an SVP oracle plus the exact primitive
/// counter: lambda1 from the oracle, radii r_i = (lambda1^p + i/(100 m f))^{1/p}
/// for i = 0..200 m^2 f, ladder weights from one-dimensional masses, then a
/// uniform primitive draw and a multiple draw. Construction does all the
/// per-lattice work; draws are cheap.
class DssViaSvp {
public:
    DssViaSvp(const Basis& B, const PNorm& p, long long f, SvpOracle& oracle,
              const EnumLimits& limits = {});

    LatticeVector draw(RngStream& rng) const;
    std::vector<LatticeVector> sample(long long M, RngStream& rng) const;

    double delta() const;  // (1/2) ln(1 + 1/f)
    long long ladder_size() const { return static_cast<long long>(radii_pow_.size()) - 1; }

private:
    Basis B_;
    PNorm p_;
    long long f_;
    std::vector<Rat> radii_pow_;             // r_i^p
    std::vector<long double> cum_weight_;    // cumulative N_i w_i
    long double W_ = 0;
    // primitive points sorted by norm; prefix counts give N_i
    std::vector<IntVec> prim_coeffs_;
    std::vector<Rat> prim_pow_;
    std::vector<long double> prim_norm_;
    std::vector<long long> ladder_count_;    // N_i per rung
    // lazily built inverse-CDF tables for the multiple draw, one per point
    mutable std::vector<std::vector<long double>> cdf_cache_;
};

/// Continuous supergaussian D^(p): i.i.d. coordinates with density
/// e^{-C_p |x|^p}, C_p = 2^p Gamma(1+1/p)^p; p = inf is uniform on [-1,1]^m.
struct ContinuousSupergaussian {
    PNorm p;
    int dimension;
    double c_p;  // 2 for p=1, pi for p=2; unused for p=inf

    ContinuousSupergaussian(PNorm norm, int m);
};

double supergaussian_cp(double p);
std::vector<double> sample_continuous(const ContinuousSupergaussian& dist, RngStream& rng);

}  // namespace latred
