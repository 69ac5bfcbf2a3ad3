#include "latred/oracle.hpp"

#include <cmath>

namespace latred {

namespace {

NormKey min_column_key(const Basis& B, const PNorm& p) {
    NormKey best;
    for (int j = 0; j < B.rank(); ++j) {
        NormKey k = norm_key_scaled(p, B.column(j), B.denominator());
        if (j == 0 || key_lt(k, best)) best = k;
    }
    return best;
}

NormKey max_column_key(const Basis& B, const PNorm& p) {
    NormKey best;
    for (int j = 0; j < B.rank(); ++j) {
        NormKey k = norm_key_scaled(p, B.column(j), B.denominator());
        if (j == 0 || key_lt(best, k)) best = k;
    }
    return best;
}

// Shrinking-radius schedule: powers of two below the starting radius. The
// first nonempty ball already contains a global minimizer.
Rat shrink_factor(int k) { return Rat(1, pow_int(2, static_cast<unsigned>(k))); }

}  // namespace

void OracleBase::record(const Basis& queried) {
    ++stats_.calls;
    stats_.max_rank_queried = std::max(stats_.max_rank_queried, queried.rank());
    stats_.max_dimension_queried = std::max(stats_.max_dimension_queried, queried.dimension());
    if (parent_ && !is_sublattice(queried, *parent_)) stats_.sublattice_only = false;
}

std::pair<LatticeVector, NormKey> exact_svp(const Basis& B, const PNorm& p,
                                            const EnumLimits& limits) {
    NormKey r0 = min_column_key(B, p);
    for (int k = 12; k >= 0; --k) {
        NormKey r = r0.scaled(p, shrink_factor(k));
        BestPoint best = min_norm_nonzero(B, BallSpec::around_zero(B.dimension(), p, r), limits);
        if (best.found) {
            LatticeVector v = LatticeVector::make(B, best.coeffs);
            return {v, best.key};
        }
    }
    throw Error("exact_svp: shortest column ball contained no nonzero point");
}

std::pair<LatticeVector, NormKey> exact_cvp(const CvpInstance& inst, const EnumLimits& limits) {
    const Basis& B = inst.basis;
    LeftInverse P = left_inverse(B);
    int n = B.rank(), m = B.dimension();
    IntVec x0(n);
    for (int i = 0; i < n; ++i) {
        Rat c = 0;
        for (int k = 0; k < m; ++k) c += P.rows[i][k] * inst.target[k];
        x0[i] = round_rat(c);
    }
    LatticeVector babai = LatticeVector::make(B, x0);
    NormKey r0 = babai.distance(inst.norm, inst.target);
    if (r0.is_zero()) return {babai, r0};
    for (int k = 12; k >= 0; --k) {
        NormKey r = r0.scaled(inst.norm, shrink_factor(k));
        BestPoint best = min_norm_point(B, BallSpec{inst.target, r, inst.norm}, limits);
        if (best.found) {
            LatticeVector v = LatticeVector::make(B, best.coeffs);
            return {v, best.key};
        }
    }
    throw Error("exact_cvp: Babai ball contained no lattice point");
}

NormKey lambda2(const Basis& B, const PNorm& p, const EnumLimits& limits) {
    if (B.rank() < 2) throw RankOne();
    auto [v1, l1] = exact_svp(B, p, limits);
    NormKey cap = max_column_key(B, p);
    NormKey r = l1;
    while (true) {
        BestPoint best =
            min_norm_independent(B, BallSpec::around_zero(B.dimension(), p, r), v1.coeffs, limits);
        if (best.found) return best.key;
        if (!key_lt(r, cap)) break;
        r = r.scaled(p, Rat(2));
        if (key_lt(cap, r)) r = cap;
    }
    throw Error("lambda2: no independent vector within the column bound");
}

OracleAnswer ExactSvpOracle::solve(const Basis& B, const PNorm& p) {
    record(B);
    auto [v, l1] = exact_svp(B, p, limits_);
    return OracleAnswer{std::move(v), OracleKind::svp, 1.0};
}

OracleAnswer adversarial_svp(const Basis& B, const PNorm& p, double gamma, RngStream& rng,
                             const EnumLimits& limits) {
    if (gamma < 1.0) throw InputError("gamma must be >= 1");
    auto [v1, l1] = exact_svp(B, p, limits);
    // Legal answer set: nonzero vectors of norm <= gamma * lambda1. The
    // radius key scales lambda1 by a rational within double precision of
    // gamma, rounding toward inclusion.
    Rat g(static_cast<long long>(std::ceil(gamma * (1LL << 30))), 1LL << 30);
    NormKey r = l1.scaled(p, g);
    std::vector<LatticeVector> pts =
        enumerate_points(B, BallSpec::around_zero(B.dimension(), p, r), limits);
    std::vector<const LatticeVector*> legal;
    for (const LatticeVector& v : pts)
        if (!v.is_zero()) legal.push_back(&v);
    if (legal.empty()) throw Error("adversarial_svp: empty legal set");
    const LatticeVector* pick = legal[rng.below(legal.size())];
    return OracleAnswer{*pick, OracleKind::svp, gamma};
}

OracleAnswer AdversarialSvpOracle::solve(const Basis& B, const PNorm& p) {
    record(B);
    return adversarial_svp(B, p, gamma_, rng_, limits_);
}

OracleAnswer UsvpOracle::solve(const Basis& B, const PNorm& p) {
    record(B);
    auto [v, l1] = exact_svp(B, p, limits_);
    if (strict_) {
        NormKey l2 = lambda2(B, p, limits_);
        Rat g(static_cast<long long>(std::llround(gamma_ * (1LL << 30))), 1LL << 30);
        NormKey gl1 = l1.scaled(p, g);
        if (!key_lt(gl1, l2))
            throw PromiseViolated("uSVP promise gamma*lambda1 < lambda2 fails");
    }
    return OracleAnswer{std::move(v), OracleKind::usvp, gamma_};
}

OracleAnswer ExactCvpOracle::solve(const CvpInstance& inst) {
    record(inst.basis);
    auto [v, d] = exact_cvp(inst, limits_);
    return OracleAnswer{std::move(v), OracleKind::cvp, 1.0};
}

OracleAnswer AdversarialCvpOracle::solve(const CvpInstance& inst) {
    record(inst.basis);
    auto [v, d] = exact_cvp(inst, limits_);
    if (d.is_zero()) return OracleAnswer{std::move(v), OracleKind::cvp, gamma_};
    Rat g(static_cast<long long>(std::ceil(gamma_ * (1LL << 30))), 1LL << 30);
    NormKey r = d.scaled(inst.norm, g);
    std::vector<LatticeVector> pts =
        enumerate_points(inst.basis, BallSpec{inst.target, r, inst.norm}, limits_);
    if (pts.empty()) return OracleAnswer{std::move(v), OracleKind::cvp, gamma_};
    LatticeVector pick = pts[rng_.below(pts.size())];
    return OracleAnswer{std::move(pick), OracleKind::cvp, gamma_};
}

OracleAnswer ExactBddOracle::solve(const CvpInstance& inst) {
    record(inst.basis);
    auto [v, d] = exact_cvp(inst, limits_);
    if (strict_) {
        auto [sv, l1] = exact_svp(inst.basis, inst.norm, limits_);
        Rat a(static_cast<long long>(std::llround(alpha_ * (1LL << 30))), 1LL << 30);
        NormKey al1 = l1.scaled(inst.norm, a);
        if (!key_lt(d, al1)) throw PromiseViolated("BDD promise dist < alpha*lambda1 fails");
    }
    return OracleAnswer{std::move(v), OracleKind::bdd, gamma_};
}

}  // namespace latred
