#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/rng.hpp"

namespace latred {

enum class OracleKind { svp, usvp, cvp, bdd };

/// A returned lattice vector together with the guarantee it claims, so the
/// harness can audit every answer against an exact referee.
struct OracleAnswer {
    LatticeVector vector;
    OracleKind kind = OracleKind::svp;
    double claimed_factor = 1.0;
};

struct OracleStats {
    long long calls = 0;
    int max_rank_queried = 0;
    int max_dimension_queried = 0;
    bool sublattice_only = true;
};

/// Exact ground truth, shared by every backend and by the audit referee.
/// exact_svp: doubling-radius enumeration from the shortest basis column.
std::pair<LatticeVector, NormKey> exact_svp(const Basis& B, const PNorm& p,
                                            const EnumLimits& limits = {});
std::pair<LatticeVector, NormKey> exact_cvp(const CvpInstance& inst, const EnumLimits& limits = {});

/// Minimal norm of a lattice vector linearly independent from a fixed
/// shortest vector.
NormKey lambda2(const Basis& B, const PNorm& p, const EnumLimits& limits = {});

// ---------------------------------------------------------------------------
// Oracle interfaces. Reductions only ever see these; backends may be exact,
// adversarial, or promise-checking wrappers.
// ---------------------------------------------------------------------------

class OracleBase {
public:
    virtual ~OracleBase() = default;
    OracleStats& stats() { return stats_; }
    const OracleStats& stats() const { return stats_; }
    void register_parent(const Basis& parent) { parent_ = parent; }
    void clear_parent() { parent_.reset(); }

protected:
    void record(const Basis& queried);
    OracleStats stats_;
    std::optional<Basis> parent_;
};

class SvpOracle : public OracleBase {
public:
    virtual OracleAnswer solve(const Basis& B, const PNorm& p) = 0;
    virtual double gamma() const = 0;
};

/// gamma = 1; always returns the tie-broken shortest vector.
class ExactSvpOracle : public SvpOracle {
public:
    explicit ExactSvpOracle(EnumLimits limits = {}) : limits_(limits) {}
    OracleAnswer solve(const Basis& B, const PNorm& p) override;
    double gamma() const override { return 1.0; }

private:
    EnumLimits limits_;
};

/// Legal but uncooperative: uniform over {v != 0 : ||v||_p <= gamma*lambda1}.
class AdversarialSvpOracle : public SvpOracle {
public:
    AdversarialSvpOracle(double gamma, RngStream rng, EnumLimits limits = {})
        : gamma_(gamma), rng_(rng), limits_(limits) {}
    OracleAnswer solve(const Basis& B, const PNorm& p) override;
    double gamma() const override { return gamma_; }

private:
    double gamma_;
    RngStream rng_;
    EnumLimits limits_;
};

/// uSVP oracle with promise gamma*lambda1 < lambda2. In strict mode the
/// promise is checked first and PromiseViolated is thrown when it fails;
/// the default permissive mode answers anyway, like a real oracle whose
/// out-of-promise behavior is simply unspecified.
class UsvpOracle : public OracleBase {
public:
    UsvpOracle(double gamma, bool strict, EnumLimits limits = {})
        : gamma_(gamma), strict_(strict), limits_(limits) {}
    OracleAnswer solve(const Basis& B, const PNorm& p);
    double gamma() const { return gamma_; }
    bool strict() const { return strict_; }

private:
    double gamma_;
    bool strict_;
    EnumLimits limits_;
};

class CvpOracle : public OracleBase {
public:
    virtual OracleAnswer solve(const CvpInstance& inst) = 0;
    virtual double gamma() const = 0;
};

class ExactCvpOracle : public CvpOracle {
public:
    explicit ExactCvpOracle(EnumLimits limits = {}) : limits_(limits) {}
    OracleAnswer solve(const CvpInstance& inst) override;
    double gamma() const override { return 1.0; }

private:
    EnumLimits limits_;
};

/// Uniform over {v : ||v - t||_p <= gamma * dist_p(t, L)}.
class AdversarialCvpOracle : public CvpOracle {
public:
    AdversarialCvpOracle(double gamma, RngStream rng, EnumLimits limits = {})
        : gamma_(gamma), rng_(rng), limits_(limits) {}
    OracleAnswer solve(const CvpInstance& inst) override;
    double gamma() const override { return gamma_; }

private:
    double gamma_;
    RngStream rng_;
    EnumLimits limits_;
};

/// BDD oracle with promise dist_p(t, L) < alpha * lambda1.
class BddOracle : public OracleBase {
public:
    virtual OracleAnswer solve(const CvpInstance& inst) = 0;
    virtual double alpha() const = 0;
    virtual double gamma() const = 0;
};

/// Exact backend; strict mode checks the promise first.
class ExactBddOracle : public BddOracle {
public:
    ExactBddOracle(double alpha, double gamma, bool strict, EnumLimits limits = {})
        : alpha_(alpha), gamma_(gamma), strict_(strict), limits_(limits) {}
    OracleAnswer solve(const CvpInstance& inst) override;
    double alpha() const override { return alpha_; }
    double gamma() const override { return gamma_; }

private:
    double alpha_;
    double gamma_;
    bool strict_;
    EnumLimits limits_;
};

/// Uniform over the legal answer set of gamma-SVP: a stress backend for the
/// robustness claims of the norm-switching reduction.
OracleAnswer adversarial_svp(const Basis& B, const PNorm& p, double gamma, RngStream& rng,
                             const EnumLimits& limits = {});

}  // namespace latred
