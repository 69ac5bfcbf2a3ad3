#pragma once

#include <string>
#include <vector>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/rng.hpp"

namespace latred {

/// One verified inequality instance: both sides computed, never asserted
/// blindly; usable as a regression fixture.
struct LemmaReport {
    std::string lemma;
    std::string instance;
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
    std::string method;  // "exact-enumeration" or "monte-carlo(samples,sigma)"
};

/// Theta_p(tau) = sum_{z in Z} e^{-tau |z|^p}, certified truncation.
long double theta_p(long double tau, const PNorm& p);

/// Covering check: the explicit center set S = Z^m cap (m^{1/p}/alpha) B_p
/// satisfies |S| <= (e^4 alpha^p)^{m/alpha^p}, and rounding sampled source-ball
/// points toward zero lands within l_q distance m^{1/q} of a center.
LemmaReport covering_check(int m, const PNorm& p, const PNorm& q, double alpha, int n_samples,
                           RngStream& rng, const EnumLimits& limits = {});

/// Slow-growth radius scan: returns the smallest c_dagger = c' + j (with
/// c' = c - floor(c/2), 1 <= j <= floor(c/2)) whose consecutive-count ratio is
/// at most 5^{m/floor(c/2)}, plus that ratio. Existence is the proposition.
struct GrowthResult {
    Rat c_dagger;
    double ratio;
    Int count_hi, count_lo;
};
GrowthResult growth_ladder(const Basis& B, const PNorm& p, const NormKey& r, const Rat& c,
                           const EnumLimits& limits = {});

LemmaReport verify_tail(const Basis& B, const PNorm& p, const Rat& a, double rel_err = 1e-11,
                        const EnumLimits& limits = {});
/// All levels in one enumeration pass.
std::vector<LemmaReport> verify_tail_multi(const Basis& B, const PNorm& p,
                                           const std::vector<Rat>& levels, double rel_err = 1e-11,
                                           const EnumLimits& limits = {});
LemmaReport verify_shifted_mass(const Basis& B, const RatVec& t, const PNorm& p,
                                double rel_err = 1e-11, const EnumLimits& limits = {});
LemmaReport verify_projection(const Basis& B, const LatticeVector& x, const EnumLimits& limits = {});
/// S is the full nonzero ball at radius r_factor * lambda1 (or a random
/// subset when subset_rng is given); checks |S'| >= (lambda1/r) |S|.
LemmaReport verify_multiples_bound(const Basis& B, const PNorm& p, const Rat& r_factor,
                                   RngStream* subset_rng = nullptr, const EnumLimits& limits = {});
/// Point count versus 1 + (2+r)^{4 m l}; l is the max entry bit length
/// (a fixed convention for the unspecified polynomial).
LemmaReport verify_point_count_bound(const Basis& B, const RatVec& t, const PNorm& p, const Rat& r,
                                     const EnumLimits& limits = {});

}  // namespace latred
