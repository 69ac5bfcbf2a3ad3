#pragma once

#include <optional>
#include <vector>

#include "latred/basis.hpp"
#include "latred/oracle.hpp"
#include "latred/rng.hpp"
#include "latred/sparsify.hpp"
#include "latred/supergaussian.hpp"

namespace latred {

/// Guessing steps (dist rescale, slow-growth radius, count and modulus
/// windows) run in one of two modes: desk mode takes exact values from the
/// referee enumeration so guarantee audits isolate the core reduction logic;
/// theory mode guesses randomly the way the procedures are written.
enum class GuessMode { desk, theory };

struct ReductionParams {
    Rat eps{1, 2};          // in (0, 1/100) in theory mode; desk allows larger
    Rat delta{1, 100};      // < eps/40 for the uSVP-based reductions
    Rat tau{1};
    double gamma_oracle = 1.0;
    std::optional<Int> q_override;
    int max_trials = 200;
    GuessMode mode = GuessMode::desk;
    bool stop_at_bound = true;   // desk drivers may stop once the audited bound is met
    bool audit_promises = false; // verify BDD/uSVP promises before reducing
    long long f = 10;            // f(m) for the supergaussian pipeline
    long long dss_M = 1000;      // DSS batch size per trial
    double theory_dist_lo = 0.25;
    double theory_dist_hi = 16.0;
    double bound_override = 0;   // audit/stop bound; 0 = the guarantee formula
    EnumLimits limits;
};

struct ReductionTrace {
    int trials_used = 0;
    int successes = 0;
    Int Q = 0;
    double selected_r = 0;
    Int selected_N = 0;
    long long f_used = 0;
    bool slow_growth_checked = false;  // selected radius passed the count-ratio test
    bool ladder_extended = false;
    double referee = 0;         // exact lambda1 / dist (desk mode)
    double bound = 0;           // audited guarantee value
    double achieved = 0;
};

/// Basis with a target embedded as the last column [pre_scale*B, -pre_scale*t; 0, s].
struct EmbeddedBasis {
    Basis base;  // (m+1) x (n+1)
    Rat s;
    Rat pre_scale;

    // Layer index k of a vector: its coefficient on the embedded column.
    static Int layer(const LatticeVector& v) { return v.coeffs.back(); }
};

EmbeddedBasis kannan_embed(const Basis& B, const RatVec& t, const Rat& s,
                           const Rat& pre_scale = Rat(1));

/// m^{1/p - 1/q}.
double norm_switch_kappa(int m, const PNorm& p, const PNorm& q);

/// z1 v1 - z2 v2 with z1 a - z2 b = 1 (a, b the layers), minimized in l_q over
/// the one-parameter solution family by a scan around the real minimizer.
/// Empty when gcd(a, b) != 1.
std::optional<LatticeVector> combine_pair(const EmbeddedBasis& emb, const LatticeVector& v1,
                                          const LatticeVector& v2, const PNorm& q);

// ---------------------------------------------------------------------------
// The six reductions. Each is a driver around a single-trial primitive:
// it repeats up to max_trials, keeps the best output, and (desk mode)
// records referee, bound, and achieved values in the trace.
// ---------------------------------------------------------------------------

/// gamma'-SVP_q from gamma-SVP_p via two independent sparsifications
/// (gamma' = 100 log^{1/p}(1/eps) gamma / eps^{1/p}).
LatticeVector reduce_svp_q_to_svp_p(const Basis& B, const PNorm& p, const PNorm& q,
                                    const ReductionParams& params, SvpOracle& oracle,
                                    RngStream rng, ReductionTrace* trace = nullptr);

/// (1+1/tau)gamma-CVP_p from (1+tau, gamma)-BDD_p via coset sparsification.
LatticeVector reduce_cvp_to_bdd(const CvpInstance& inst, const ReductionParams& params,
                                BddOracle& oracle, RngStream rng,
                                ReductionTrace* trace = nullptr);

/// (2,gamma)-BDD_q from (1+delta)-uSVP_p via the embedded lattice, the
/// slow-growth radius, and two uniform primitive samples.
LatticeVector reduce_bdd_q_to_usvp_p(const CvpInstance& inst, const PNorm& p,
                                     const ReductionParams& params, UsvpOracle& oracle,
                                     RngStream rng, ReductionTrace* trace = nullptr);

/// gamma-CVP_q from (1+delta)-uSVP_p: the tau=1 composition of the two above.
LatticeVector reduce_cvp_q_to_usvp_p(const CvpInstance& inst, const PNorm& p,
                                     const ReductionParams& params, UsvpOracle& oracle,
                                     RngStream rng, ReductionTrace* trace = nullptr);

/// gamma'-CVP_p from gamma-CVP_q (p < q) by perturbing the target with a
/// continuous supergaussian sample.
LatticeVector reduce_cvp_p_to_cvp_q(const CvpInstance& inst, const PNorm& q,
                                    const ReductionParams& params, CvpOracle& oracle,
                                    RngStream rng, ReductionTrace* trace = nullptr);

class DssSampler {
public:
    virtual ~DssSampler() = default;
    virtual std::vector<LatticeVector> sample(const Basis& B, const PNorm& p, long long M,
                                              RngStream& rng) = 0;
    virtual double delta() const = 0;
};

class DssExactSampler : public DssSampler {
public:
    explicit DssExactSampler(double rel_err = 1e-12, EnumLimits limits = {})
        : rel_err_(rel_err), limits_(limits) {}
    std::vector<LatticeVector> sample(const Basis& B, const PNorm& p, long long M,
                                      RngStream& rng) override;
    double delta() const override { return 1e-12; }

private:
    double rel_err_;
    EnumLimits limits_;
};

class DssViaSvpSampler : public DssSampler {
public:
    DssViaSvpSampler(SvpOracle& oracle, long long f, EnumLimits limits = {})
        : oracle_(oracle), f_(f), limits_(limits) {}
    std::vector<LatticeVector> sample(const Basis& B, const PNorm& p, long long M,
                                      RngStream& rng) override;
    double delta() const override { return 0.5 * std::log1p(1.0 / static_cast<double>(f_)); }

private:
    SvpOracle& oracle_;
    long long f_;
    EnumLimits limits_;
    std::optional<DssViaSvp> cache_;  // ladder setup reused across batches
    std::optional<Basis> cache_basis_;
};

/// gamma-CVP_p (gamma >= 4, 1 <= p <= 2) from discrete supergaussian samples
/// over the 1/alpha-scaled embedded lattice, alpha = gamma/4.
LatticeVector reduce_cvp_to_dss(const CvpInstance& inst, double gamma, DssSampler& sampler,
                                const ReductionParams& params, RngStream rng,
                                ReductionTrace* trace = nullptr);

/// gamma-CVP_p from exact SVP_p: reduce_cvp_to_dss with the via-SVP sampler.
LatticeVector reduce_cvp_to_svp_supergaussian(const CvpInstance& inst, double gamma,
                                              SvpOracle& oracle, const ReductionParams& params,
                                              RngStream rng, ReductionTrace* trace = nullptr);

// Guarantee factors of the reductions, evaluated with natural logarithms.
double bound_svp_switch(const Rat& eps, double gamma, const PNorm& p);   // 100 log^{1/p}(1/e) g/e^{1/p}
double bound_cvp_to_bdd(const Rat& tau, double gamma);                   // (1+1/tau) g
double bound_bdd_to_usvp(const Rat& eps, const PNorm& p, const PNorm& q);  // 80/e (10/e log(1/e))^{1/p}
double bound_cvp_to_usvp(const Rat& eps, const PNorm& p, const PNorm& q);  // 120/e (...)^{1/p}
double bound_cvp_switch(const Rat& eps, double gamma, const PNorm& p);   // 100 log^{1/p}(1/e)/e^{1/p} g

}  // namespace latred
