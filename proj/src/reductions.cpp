#include "latred/reductions.hpp"

#include <algorithm>
#include <cmath>

namespace latred {

namespace {

double eps_d(const Rat& eps) { return to_double(eps); }

double inv_p(const PNorm& p) { return p.is_infinity() ? 0.0 : 1.0 / p.p(); }

Rat rationalize(double x, long long denom) {
    return Rat(Int(static_cast<long long>(std::llround(x * static_cast<double>(denom)))),
               Int(denom));
}

// Positive rational within 1e-6 relative of x, any magnitude.
Rat rationalize_pos(double x) {
    if (!(x > 0) || !std::isfinite(x)) throw InputError("expected a positive finite scale");
    int e;
    double man = std::frexp(x, &e);  // x = man 2^e, man in [1/2, 1)
    Rat r(Int(static_cast<long long>(std::llround(man * (1 << 20)))), Int(1 << 20));
    if (e > 0)
        r *= Rat(pow_int(Int(2), static_cast<unsigned>(e)));
    else if (e < 0)
        r /= Rat(pow_int(Int(2), static_cast<unsigned>(-e)));
    return r;
}

IntVec coeff_sub(const IntVec& a, const IntVec& b) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

IntVec coeff_add(const IntVec& a, const IntVec& b) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

LatticeVector to_parent(const Basis& parent, const OracleAnswer& ans) {
    auto coeffs = member_coeffs(parent, ans.vector);
    if (!coeffs) throw Error("oracle answer is not a member of the parent lattice");
    return LatticeVector::make(parent, *coeffs);
}

struct ReducedTarget {
    RatVec t_hat;       // t - B x0, coefficients of B^{-1} t_hat in [-1/2, 1/2]
    IntVec shift;       // x0
};

ReducedTarget babai_reduce(const Basis& B, const RatVec& t) {
    LeftInverse P = left_inverse(B);
    int n = B.rank(), m = B.dimension();
    ReducedTarget out;
    out.shift.resize(n);
    for (int i = 0; i < n; ++i) {
        Rat c = 0;
        for (int k = 0; k < m; ++k) c += P.rows[i][k] * t[k];
        out.shift[i] = round_rat(c);
    }
    RatVec moved = B.apply_rat(out.shift);
    out.t_hat = rat_vec_sub(t, moved);
    return out;
}

struct RescaledInstance {
    Basis basis;
    RatVec target;
    Rat sigma;
};

// Place sigma * dist into ((1 - 1/m) c_hi, c_hi]; desk mode aims for the
// geometric middle of the window from the exact referee distance, theory mode
// guesses the distance from a geometric grid with ratio (1 - 1/m).
RescaledInstance rescale_to_window(const CvpInstance& inst, const NormKey& dist, double c_hi,
                                   GuessMode mode, const ReductionParams& params,
                                   RngStream& rng) {
    int m = inst.basis.dimension();
    double lo = c_hi * (1.0 - 1.0 / m);
    // m = 1 leaves the window (0, c]; aim for an interior point
    double mid = lo > 0 ? std::sqrt(lo * c_hi) : 0.75 * c_hi;
    double guess;
    if (mode == GuessMode::desk) {
        guess = static_cast<double>(dist.approx);
    } else {
        double ratio = 1.0 - 1.0 / m;
        int J = std::max(1, static_cast<int>(std::ceil(
                                std::log(params.theory_dist_hi / params.theory_dist_lo) /
                                -std::log(ratio))));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(J)));
        guess = params.theory_dist_hi * std::pow(ratio, j);
    }
    Rat sigma = rationalize_pos(mid / guess);
    if (mode == GuessMode::desk) {
        long double val = dist.approx * to_ld(sigma);
        for (int step = 0; step < 64 && val > c_hi; ++step) {
            sigma *= Rat(4095, 4096);
            val = dist.approx * to_ld(sigma);
        }
        for (int step = 0; step < 64 && val <= lo; ++step) {
            sigma *= Rat(4097, 4096);
            val = dist.approx * to_ld(sigma);
        }
    }
    return RescaledInstance{inst.basis.scaled(sigma), rat_vec_scaled(inst.target, sigma), sigma};
}

}  // namespace

EmbeddedBasis kannan_embed(const Basis& B, const RatVec& t, const Rat& s, const Rat& pre_scale) {
    if (static_cast<int>(t.size()) != B.dimension()) throw InputError("target length mismatch");
    if (s <= 0 || pre_scale <= 0) throw InputError("embedding scales must be positive");
    int m = B.dimension(), n = B.rank();
    // common denominator over pre_scale*B, pre_scale*t, s
    Int D = B.denominator() * den(pre_scale);
    for (const Rat& x : t) {
        Rat e = x * pre_scale;
        D = D / gcd_int(D, den(e)) * den(e);
    }
    D = D / gcd_int(D, den(s)) * den(s);
    std::vector<IntVec> cols;
    for (int j = 0; j < n; ++j) {
        IntVec col(m + 1, 0);
        Int mult = num(pre_scale) * (D / (B.denominator() * den(pre_scale)));
        for (int i = 0; i < m; ++i) col[i] = B.column(j)[i] * mult;
        cols.push_back(std::move(col));
    }
    IntVec last(m + 1, 0);
    for (int i = 0; i < m; ++i) {
        Rat e = -t[i] * pre_scale;
        last[i] = num(e) * (D / den(e));
    }
    last[m] = num(s) * (D / den(s));
    cols.push_back(std::move(last));
    EmbeddedBasis out{Basis(std::move(cols), D), s, pre_scale};
    return out;
}

double norm_switch_kappa(int m, const PNorm& p, const PNorm& q) {
    return std::pow(static_cast<double>(m), inv_p(p) - inv_p(q));
}

std::optional<LatticeVector> combine_pair(const EmbeddedBasis& emb, const LatticeVector& v1,
                                          const LatticeVector& v2, const PNorm& q) {
    Int a = EmbeddedBasis::layer(v1), b = EmbeddedBasis::layer(v2);
    // extended gcd: x a + y b = g
    Int old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        Int quo = old_r / r;
        Int t;
        t = old_r - quo * r; old_r = r; r = t;
        t = old_x - quo * x; old_x = x; x = t;
        t = old_y - quo * y; old_y = y; y = t;
    }
    if (old_r != 1 && old_r != -1) return std::nullopt;
    Int sign = old_r;  // 1/g for g = +-1
    Int z1 = old_x * sign, z2 = -old_y * sign;

    IntVec u0(v1.coeffs.size()), dir(v1.coeffs.size());
    for (size_t i = 0; i < u0.size(); ++i) {
        u0[i] = z1 * v1.coeffs[i] - z2 * v2.coeffs[i];
        dir[i] = b * v1.coeffs[i] - a * v2.coeffs[i];
    }
    LatticeVector best = LatticeVector::make(emb.base, u0);
    bool dir_zero = true;
    for (const Int& d : dir)
        if (d != 0) dir_zero = false;
    if (dir_zero) return best;

    LatticeVector dvec = LatticeVector::make(emb.base, dir);
    // real minimizer of the l2 proxy seeds the scan
    Int ud = 0, dd = 0;
    for (size_t i = 0; i < best.embedding.size(); ++i) {
        ud += best.embedding[i] * dvec.embedding[i];
        dd += dvec.embedding[i] * dvec.embedding[i];
    }
    long long k0 = static_cast<long long>(llroundl(-to_ld(ud) / to_ld(dd)));
    long long W = static_cast<long long>(
        ceill(v1.norm(q).approx + v2.norm(q).approx)) + 2;

    auto eval = [&](long long k) {
        IntVec c(u0.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = u0[i] + Int(k) * dir[i];
        LatticeVector v = LatticeVector::make(emb.base, std::move(c));
        return std::make_pair(v.norm(q), std::move(v));
    };
    auto [bk, bv] = eval(k0);
    // the norm along the line is convex: walk outward until it worsens
    for (int dirn : {1, -1}) {
        for (long long step = 1; step <= W; ++step) {
            auto [k, v] = eval(k0 + dirn * step);
            if (key_lt(k, bk)) {
                bk = k;
                bv = std::move(v);
            } else if (key_lt(bk, k) && step > 2) {
                break;
            }
        }
    }
    return bv;
}

double bound_svp_switch(const Rat& eps, double gamma, const PNorm& p) {
    double e = eps_d(eps);
    return 100.0 * std::pow(std::log(1.0 / e), inv_p(p)) * gamma / std::pow(e, inv_p(p));
}

double bound_cvp_to_bdd(const Rat& tau, double gamma) {
    return (1.0 + 1.0 / to_double(tau)) * gamma;
}

double bound_bdd_to_usvp(const Rat& eps, const PNorm& p, const PNorm& q) {
    double e = eps_d(eps);
    if (p == q) return 80.0 / e;
    return 80.0 / e * std::pow(10.0 / e * std::log(1.0 / e), inv_p(p));
}

double bound_cvp_to_usvp(const Rat& eps, const PNorm& p, const PNorm& q) {
    double e = eps_d(eps);
    if (p == q) return 120.0 / e;
    return 120.0 / e * std::pow(10.0 / e * std::log(1.0 / e), inv_p(p));
}

double bound_cvp_switch(const Rat& eps, double gamma, const PNorm& p) {
    double e = eps_d(eps);
    return 100.0 * std::pow(std::log(1.0 / e), inv_p(p)) / std::pow(e, inv_p(p)) * gamma;
}

LatticeVector reduce_svp_q_to_svp_p(const Basis& B, const PNorm& p, const PNorm& q,
                                    const ReductionParams& params, SvpOracle& oracle,
                                    RngStream rng, ReductionTrace* trace) {
    int m = B.dimension(), n = B.rank();
    oracle.register_parent(B);

    NormKey lambda1_q;
    double bound = bound_svp_switch(params.eps, oracle.gamma(), p);
    bool have_ref = false;
    if (params.mode == GuessMode::desk) {
        lambda1_q = exact_svp(B, q, params.limits).second;
        have_ref = true;
    }

    Int Q;
    if (params.q_override) {
        Q = *params.q_override;
    } else {
        double g = std::max(1.0, oracle.gamma());
        double w = 10.0 * g * m * m * std::pow(2.0, eps_d(params.eps) * m / 4.0);
        Q = find_prime(Int(static_cast<long long>(std::ceil(w))),
                       Int(static_cast<long long>(std::floor(2.0 * w))));
    }

    std::uint64_t root = rng.u64();
    std::optional<LatticeVector> best;
    NormKey best_key;
    int trials = 0;
    for (int t = 0; t < params.max_trials; ++t) {
        trials = t + 1;
        RngStream tr(root, t + 1);
        Sparsifier s1 = sample_sparsifier(n, Q, tr);
        Sparsifier s2 = sample_sparsifier(n, Q, tr);
        Basis L1 = sublattice_basis(B, s1);
        Basis L2 = sublattice_basis(B, s2);
        LatticeVector v1 = to_parent(B, oracle.solve(L1, p));
        LatticeVector v2 = to_parent(B, oracle.solve(L2, p));

        LatticeVector prim = primitive_part(B, v1).first;
        LatticeVector cand = prim;
        NormKey cand_key = prim.norm(q);
        IntVec dcoeffs = coeff_sub(v1.coeffs, v2.coeffs);
        bool dzero = true;
        for (const Int& c : dcoeffs)
            if (c != 0) dzero = false;
        if (!dzero) {
            LatticeVector diff = LatticeVector::make(B, dcoeffs);
            NormKey dkey = diff.norm(q);
            if (key_lt(dkey, cand_key)) {
                cand = diff;
                cand_key = dkey;
            }
        }
        if (!best || key_lt(cand_key, best_key)) {
            best = cand;
            best_key = cand_key;
        }
        if (params.stop_at_bound && have_ref &&
            static_cast<double>(best_key.approx) <=
                bound * static_cast<double>(lambda1_q.approx) * (1 + 1e-12))
            break;
    }
    if (!best) throw AllTrialsFailed("svp switch produced no candidate");
    if (trace) {
        trace->trials_used = trials;
        trace->Q = Q;
        trace->bound = bound;
        if (have_ref) {
            trace->referee = static_cast<double>(lambda1_q.approx);
            trace->achieved = static_cast<double>(best_key.approx) /
                              std::max(1e-300, static_cast<double>(lambda1_q.approx));
        }
    }
    return *best;
}

LatticeVector reduce_cvp_to_bdd(const CvpInstance& inst, const ReductionParams& params,
                                BddOracle& oracle, RngStream rng, ReductionTrace* trace) {
    const Basis& B = inst.basis;
    const PNorm& p = inst.norm;
    int n = B.rank();
    Rat tau = params.tau;
    if (tau <= 0) throw InputError("tau must be positive");
    oracle.register_parent(B);

    double gamma = oracle.gamma();
    double bound = params.bound_override > 0 ? params.bound_override
                                             : bound_cvp_to_bdd(tau, gamma);

    NormKey dist;
    LatticeVector closest = LatticeVector::make(B, IntVec(n, 0));
    bool have_ref = false;
    bool direct = false;  // inside the unique decoding radius: call as-is
    Int Q = 0;
    if (params.mode == GuessMode::desk) {
        auto res = exact_cvp(inst, params.limits);
        closest = res.first;
        dist = res.second;
        have_ref = true;
        auto [sv, l1] = exact_svp(B, p, params.limits);
        direct = key_lt(dist, l1);
        if (!direct) {
            NormKey r = dist.scaled(p, Rat(1) / tau);
            Int N = count_points(B, BallSpec::around_zero(B.dimension(), p, r), params.limits);
            if (!params.q_override)
                Q = find_prime(100 * N, 200 * N);
            else
                Q = *params.q_override;
        }
    } else if (params.q_override) {
        Q = *params.q_override;
    }

    std::uint64_t root = rng.u64();
    std::optional<LatticeVector> best;
    NormKey best_key;
    int trials = 0;
    for (int t = 0; t < params.max_trials; ++t) {
        trials = t + 1;
        RngStream tr(root, t + 1);
        try {
            if (direct || (params.mode == GuessMode::theory && t == 0)) {
                // the trivial branch; composed backends may fail transiently,
                // so it stays inside the retry loop
                LatticeVector v = to_parent(B, oracle.solve(inst));
                NormKey k = v.distance(p, inst.target);
                if (!best || key_lt(k, best_key)) {
                    best = v;
                    best_key = k;
                }
                if (params.stop_at_bound && have_ref &&
                    static_cast<double>(best_key.approx) <=
                        bound * static_cast<double>(dist.approx) * (1 + 1e-12))
                    break;
                continue;
            }
            Int Qt = Q;
            if (Qt == 0) {
                // guess the point count as a power of two
                int j = static_cast<int>(tr.below(25));
                Int N = pow_int(Int(2), static_cast<unsigned>(j));
                Qt = find_prime(100 * N, 200 * N);
            }
            Sparsifier s = sample_sparsifier(n, Qt, tr, /*with_coset=*/true);
            Sparsifier zonly = s;
            zonly.coset.reset();
            Basis sub = sublattice_basis(B, zonly);
            LatticeVector y = coset_point(B, s);
            RatVec tprime = inst.target;
            RatVec yr = y.embedding_rat();
            for (size_t i = 0; i < tprime.size(); ++i) tprime[i] = tprime[i] + yr[i];
            OracleAnswer ans = oracle.solve(CvpInstance(sub, tprime, p));
            LatticeVector vp = to_parent(B, ans);
            LatticeVector v = LatticeVector::make(B, coeff_sub(vp.coeffs, y.coeffs));
            NormKey k = v.distance(p, inst.target);
            if (!best || key_lt(k, best_key)) {
                best = v;
                best_key = k;
            }
        } catch (const PromiseViolated&) {
            continue;
        } catch (const AllTrialsFailed&) {
            continue;  // composed backends may fail a whole inner budget
        }
        if (params.stop_at_bound && have_ref && best &&
            static_cast<double>(best_key.approx) <=
                bound * static_cast<double>(dist.approx) * (1 + 1e-12))
            break;
    }
    if (!best) throw AllTrialsFailed("cvp-to-bdd produced no candidate");
    if (trace) {
        trace->trials_used = trials;
        trace->Q = Q;
        trace->bound = bound;
        if (have_ref) {
            trace->referee = static_cast<double>(dist.approx);
            trace->achieved = dist.is_zero()
                                  ? (best_key.is_zero() ? 1.0 : 1e300)
                                  : static_cast<double>(best_key.approx / dist.approx);
        }
    }
    return *best;
}

namespace {

// Slow-growth radius scan on the embedded lattice: the smallest rung
// r = j * 2(m+1), j >= 2, with N(r)/N(r - 2(m+1)) <= 2^{eps m / 4}; counts
// are exact, and the comparison is done in integers.
struct LadderChoice {
    Rat r;
    Int n_prim_r;
    Int n_prim_mid;  // at r - (m+1)
    bool extended = false;
};

LadderChoice scan_ladder(const Basis& emb, const PNorm& p, int m, const Rat& eps,
                         const EnumLimits& limits) {
    long long step = 2LL * (m + 1);
    Rat exp_ratio = eps * m / 4;  // bound 2^{eps m/4}
    unsigned edenom = static_cast<unsigned>(den(exp_ratio));
    Int enumr = num(exp_ratio);
    long long jcap = static_cast<long long>(std::ceil(20.0 / to_double(eps)));
    RatVec zero(emb.dimension(), Rat(0));

    Int prev_total = -1;
    for (long long j = 2; j <= std::max(jcap, 4LL) + 400; ++j) {
        Rat r(j * step);
        Rat rmid(j * step - (m + 1));
        Rat rlo((j - 1) * step);
        std::vector<NormKey> radii = {NormKey::from_value(p, rlo), NormKey::from_value(p, rmid),
                                      NormKey::from_value(p, r)};
        MultiCounts mc = count_ball_multi(emb, zero, p, radii, limits);
        Int lo_total = prev_total >= 0 ? prev_total : mc.total[0];
        prev_total = mc.total[2];
        // N(r)^denom <= 2^num N(r')^denom
        if (lo_total > 0 &&
            pow_int(mc.total[2], edenom) <=
                (Int(1) << static_cast<unsigned>(enumr)) * pow_int(lo_total, edenom)) {
            LadderChoice out;
            out.r = r;
            out.n_prim_r = mc.primitive[2];
            out.n_prim_mid = mc.primitive[1];
            out.extended = j > jcap;
            return out;
        }
    }
    throw Error("slow-growth scan found no admissible radius");
}

}  // namespace

LatticeVector reduce_bdd_q_to_usvp_p(const CvpInstance& inst, const PNorm& p,
                                     const ReductionParams& params, UsvpOracle& oracle,
                                     RngStream rng, ReductionTrace* trace) {
    const Basis& B = inst.basis;
    const PNorm& q = inst.norm;
    int m = B.dimension(), n = B.rank();
    double bound = params.bound_override > 0 ? params.bound_override
                                             : bound_bdd_to_usvp(params.eps, p, q);

    NormKey dist;
    LatticeVector closest = LatticeVector::make(B, IntVec(n, 0));
    bool have_ref = false;
    if (params.mode == GuessMode::desk) {
        auto res = exact_cvp(inst, params.limits);
        closest = res.first;
        dist = res.second;
        have_ref = true;
        if (dist.is_zero()) {
            if (trace) {
                trace->trials_used = 0;
                trace->referee = 0;
                trace->bound = bound;
                trace->achieved = 1.0;
            }
            return closest;
        }
        if (params.audit_promises) {
            auto [sv, l1] = exact_svp(B, q, params.limits);
            NormKey two_l1 = l1.scaled(q, Rat(2));
            if (!key_lt(dist, two_l1))
                throw PromiseViolated("BDD promise dist_q < 2 lambda1 fails");
        }
    }

    double kappa = norm_switch_kappa(m, p, q);
    double c_hi = static_cast<double>(m) / kappa;

    long long step = 2LL * (m + 1);
    long long jcap = static_cast<long long>(std::ceil(20.0 / to_double(params.eps)));
    LadderChoice ladder;
    long long N = 1;
    long long f = 10;
    std::optional<ReducedTarget> desk_red;
    std::optional<EmbeddedBasis> desk_emb;
    if (params.mode == GuessMode::desk) {
        RescaledInstance sc = rescale_to_window(inst, dist, c_hi, params.mode, params, rng);
        desk_red = babai_reduce(sc.basis, sc.target);
        desk_emb = kannan_embed(sc.basis, desk_red->t_hat, Rat(1));
        oracle.register_parent(desk_emb->base);
        ladder = scan_ladder(desk_emb->base, p, m, params.eps, params.limits);
        N = std::max<long long>(1, static_cast<long long>(ladder.n_prim_mid));
        Rat fr = Rat(m) * Rat(ladder.n_prim_r) / Rat(ladder.n_prim_mid);
        f = std::max<long long>(10, static_cast<long long>(ceil_rat(fr)));
    }

    std::uint64_t root = rng.u64();
    std::optional<LatticeVector> best;
    NormKey best_key;
    int trials = 0, successes = 0;
    for (int t = 0; t < params.max_trials; ++t) {
        trials = t + 1;
        RngStream tr(root, t + 1);
        Rat r_val = ladder.r;
        long long Nt = N, ft = f;
        ReducedTarget red;
        std::optional<EmbeddedBasis> theory_emb;
        const EmbeddedBasis* emb;
        if (params.mode == GuessMode::theory) {
            // every guess is re-drawn per trial: rescale, radius, counts
            RescaledInstance sc = rescale_to_window(inst, dist, c_hi, params.mode, params, tr);
            red = babai_reduce(sc.basis, sc.target);
            theory_emb = kannan_embed(sc.basis, red.t_hat, Rat(1));
            oracle.register_parent(theory_emb->base);
            emb = &*theory_emb;
            long long j = 2 + static_cast<long long>(tr.below(static_cast<std::uint64_t>(
                                  std::max<long long>(1, jcap - 1))));
            r_val = Rat(j * step);
            Nt = 1LL << tr.below(12);
            ft = 1LL << (4 + tr.below(6));
        } else {
            red = *desk_red;
            emb = &*desk_emb;
        }
        NormKey rkey = NormKey::from_value(p, r_val);
        auto v1 = uniform_primitive_sample(emb->base, p, rkey, Nt, ft, oracle, tr,
                                           params.q_override);
        if (!v1) continue;
        auto v2 = uniform_primitive_sample(emb->base, p, rkey, Nt, ft, oracle, tr,
                                           params.q_override);
        if (!v2) continue;
        auto comb = combine_pair(*emb, *v1, *v2, q);
        if (!comb) continue;
        ++successes;
        IntVec x(comb->coeffs.begin(), comb->coeffs.end() - 1);
        LatticeVector v = LatticeVector::make(B, coeff_add(x, red.shift));
        NormKey k = v.distance(q, inst.target);
        if (!best || key_lt(k, best_key)) {
            best = v;
            best_key = k;
        }
        if (params.stop_at_bound && have_ref &&
            static_cast<double>(best_key.approx) <=
                bound * static_cast<double>(dist.approx) * (1 + 1e-12))
            break;
    }
    if (!best) throw AllTrialsFailed("bdd-to-usvp: no trial produced a combination");
    if (trace) {
        trace->trials_used = trials;
        trace->successes = successes;
        trace->Q = params.q_override.value_or(Int(0));
        trace->selected_r = params.mode == GuessMode::desk ? to_double(ladder.r) : 0.0;
        trace->selected_N = Int(N);
        trace->f_used = f;
        trace->slow_growth_checked = params.mode == GuessMode::desk;
        trace->ladder_extended = params.mode == GuessMode::desk && ladder.extended;
        trace->bound = bound;
        if (have_ref) {
            trace->referee = static_cast<double>(dist.approx);
            trace->achieved = static_cast<double>(best_key.approx / dist.approx);
        }
    }
    return *best;
}

namespace {

/// BDD backend implemented by the embedded-lattice uSVP reduction; used to
/// compose the CVP-to-BDD and BDD-to-uSVP steps.
class BddViaUsvp : public BddOracle {
public:
    BddViaUsvp(const PNorm& p, const PNorm& q, UsvpOracle& usvp, const ReductionParams& inner,
               RngStream rng)
        : p_(p), q_(q), usvp_(usvp), inner_(inner), rng_(rng) {}

    OracleAnswer solve(const CvpInstance& inst) override {
        record(inst.basis);
        LatticeVector v =
            reduce_bdd_q_to_usvp_p(inst, p_, inner_, usvp_, rng_.substream(++calls_), nullptr);
        return OracleAnswer{std::move(v), OracleKind::bdd, gamma()};
    }
    double alpha() const override { return 2.0; }
    double gamma() const override { return bound_bdd_to_usvp(inner_.eps, p_, q_); }

private:
    PNorm p_;
    PNorm q_;
    UsvpOracle& usvp_;
    ReductionParams inner_;
    RngStream rng_;
    std::uint64_t calls_ = 0;
};

}  // namespace

LatticeVector reduce_cvp_q_to_usvp_p(const CvpInstance& inst, const PNorm& p,
                                     const ReductionParams& params, UsvpOracle& oracle,
                                     RngStream rng, ReductionTrace* trace) {
    // the inner embedded-lattice step gets the full trial budget (a single
    // coset draw can only be rescued inside it); the outer coset loop is short
    ReductionParams inner = params;
    inner.bound_override = 0;
    ReductionParams outer = params;
    outer.max_trials = std::max(8, params.max_trials / 8);
    outer.tau = 1;  // alpha = 2 matches the BDD promise provided by the inner step
    outer.bound_override = bound_cvp_to_usvp(params.eps, p, inst.norm);
    BddViaUsvp adapter(p, inst.norm, oracle, inner, RngStream(rng.u64(), 0x5e));
    return reduce_cvp_to_bdd(inst, outer, adapter, rng, trace);
}

LatticeVector reduce_cvp_p_to_cvp_q(const CvpInstance& inst, const PNorm& q,
                                    const ReductionParams& params, CvpOracle& oracle,
                                    RngStream rng, ReductionTrace* trace) {
    const Basis& B = inst.basis;
    const PNorm& p = inst.norm;
    if (p.is_infinity()) throw InputError("cvp switch needs finite p");
    int m = B.dimension();
    double bound = params.bound_override > 0
                       ? params.bound_override
                       : bound_cvp_switch(params.eps, oracle.gamma(), p);

    NormKey dist;
    bool have_ref = false;
    if (params.mode == GuessMode::desk) {
        auto res = exact_cvp(inst, params.limits);
        dist = res.second;
        have_ref = true;
        if (dist.is_zero()) {
            if (trace) {
                trace->trials_used = 0;
                trace->referee = 0;
                trace->bound = bound;
                trace->achieved = 1.0;
            }
            return res.first;
        }
    }

    double cp = supergaussian_cp(p.p());
    double c_hi = std::pow(eps_d(params.eps) * m, 1.0 / p.p()) / (2.0 * std::pow(cp, 1.0 / p.p()));
    ContinuousSupergaussian dist_p(p, m);
    std::optional<RescaledInstance> desk_sc;
    if (params.mode == GuessMode::desk) {
        desk_sc = rescale_to_window(inst, dist, c_hi, params.mode, params, rng);
        oracle.register_parent(desk_sc->basis);
    } else {
        oracle.register_parent(B);
    }

    std::uint64_t root = rng.u64();
    std::optional<LatticeVector> best;
    NormKey best_key;
    int trials = 0;
    for (int t = 0; t < params.max_trials; ++t) {
        trials = t + 1;
        RngStream tr(root, t + 1);
        // theory mode guesses a fresh rescale every trial
        RescaledInstance sc = desk_sc ? *desk_sc
                                      : rescale_to_window(inst, dist, c_hi, params.mode, params, tr);
        if (!desk_sc) oracle.register_parent(sc.basis);
        std::vector<double> x = sample_continuous(dist_p, tr);
        RatVec tprime = sc.target;
        for (int i = 0; i < m; ++i) tprime[i] += rationalize(x[i], 1 << 30);
        LatticeVector vp = to_parent(sc.basis, oracle.solve(CvpInstance(sc.basis, tprime, q)));
        LatticeVector v = LatticeVector::make(B, vp.coeffs);
        NormKey k = v.distance(p, inst.target);
        if (!best || key_lt(k, best_key)) {
            best = v;
            best_key = k;
        }
        if (params.stop_at_bound && have_ref &&
            static_cast<double>(best_key.approx) <=
                bound * static_cast<double>(dist.approx) * (1 + 1e-12))
            break;
    }
    if (!best) throw AllTrialsFailed("cvp norm switch: no trials ran");
    if (trace) {
        trace->trials_used = trials;
        trace->bound = bound;
        if (have_ref) {
            trace->referee = static_cast<double>(dist.approx);
            trace->achieved = dist.is_zero()
                                  ? 1.0
                                  : static_cast<double>(best_key.approx / dist.approx);
        }
    }
    return *best;
}

std::vector<LatticeVector> DssExactSampler::sample(const Basis& B, const PNorm& p, long long M,
                                                   RngStream& rng) {
    return dss_exact(B, p, M, rng, rel_err_, limits_);
}

std::vector<LatticeVector> DssViaSvpSampler::sample(const Basis& B, const PNorm& p, long long M,
                                                    RngStream& rng) {
    oracle_.register_parent(B);
    if (!cache_ || !cache_basis_ || !(*cache_basis_ == B)) {
        cache_.emplace(B, p, f_, oracle_, limits_);
        cache_basis_ = B;
    }
    return cache_->sample(M, rng);
}

LatticeVector reduce_cvp_to_dss(const CvpInstance& inst, double gamma, DssSampler& sampler,
                                const ReductionParams& params, RngStream rng,
                                ReductionTrace* trace) {
    const Basis& B = inst.basis;
    const PNorm& p = inst.norm;
    if (p.is_infinity() || p.p() > 2.0 + 1e-12)
        throw InputError("supergaussian pipeline needs 1 <= p <= 2");
    if (gamma < 4.0) throw InputError("gamma must be >= 4");
    int m = B.dimension();
    double bound = params.bound_override > 0 ? params.bound_override : gamma;

    NormKey dist;
    bool have_ref = false;
    if (params.mode == GuessMode::desk) {
        auto res = exact_cvp(inst, params.limits);
        dist = res.second;
        have_ref = true;
        if (dist.is_zero()) {
            if (trace) {
                trace->trials_used = 0;
                trace->referee = 0;
                trace->bound = bound;
                trace->achieved = 1.0;
            }
            return res.first;
        }
    }

    double c_hi = std::pow(static_cast<double>(m), 1.0 / p.p());
    Rat gamma_rat = rationalize(gamma, 1024);
    Rat alpha = gamma_rat / 4;
    std::optional<ReducedTarget> desk_red;
    std::optional<EmbeddedBasis> desk_emb;
    if (params.mode == GuessMode::desk) {
        RescaledInstance sc = rescale_to_window(inst, dist, c_hi, params.mode, params, rng);
        desk_red = babai_reduce(sc.basis, sc.target);
        desk_emb = kannan_embed(sc.basis, desk_red->t_hat, Rat(1), Rat(1) / alpha);
    }

    std::uint64_t root = rng.u64();
    std::optional<LatticeVector> best;
    NormKey best_key;
    int trials = 0;
    bool saw_layer_one = false;
    for (int t = 0; t < params.max_trials; ++t) {
        trials = t + 1;
        RngStream tr(root, t + 1);
        ReducedTarget red;
        std::optional<EmbeddedBasis> theory_emb;
        const EmbeddedBasis* embp;
        if (params.mode == GuessMode::theory) {
            RescaledInstance sc = rescale_to_window(inst, dist, c_hi, params.mode, params, tr);
            red = babai_reduce(sc.basis, sc.target);
            theory_emb = kannan_embed(sc.basis, red.t_hat, Rat(1), Rat(1) / alpha);
            embp = &*theory_emb;
        } else {
            red = *desk_red;
            embp = &*desk_emb;
        }
        const EmbeddedBasis& emb = *embp;
        std::vector<LatticeVector> samples = sampler.sample(emb.base, p, params.dss_M, tr);
        const LatticeVector* pick = nullptr;
        NormKey pick_key;
        for (const LatticeVector& s : samples) {
            if (EmbeddedBasis::layer(s) != 1) continue;
            NormKey k = s.norm(p);
            if (!pick || key_lt(k, pick_key)) {
                pick = &s;
                pick_key = k;
            }
        }
        if (!pick) continue;
        saw_layer_one = true;
        IntVec x(pick->coeffs.begin(), pick->coeffs.end() - 1);
        LatticeVector v = LatticeVector::make(B, coeff_add(x, red.shift));
        NormKey k = v.distance(p, inst.target);
        if (!best || key_lt(k, best_key)) {
            best = v;
            best_key = k;
        }
        if (params.stop_at_bound && have_ref &&
            static_cast<double>(best_key.approx) <=
                bound * static_cast<double>(dist.approx) * (1 + 1e-12))
            break;
    }
    if (!best) {
        if (!saw_layer_one)
            throw NoLayerOneSample("no sample landed on layer 1 in " +
                                   std::to_string(params.max_trials) + " batches");
        throw AllTrialsFailed("cvp-to-dss produced no candidate");
    }
    if (trace) {
        trace->trials_used = trials;
        trace->bound = bound;
        trace->f_used = params.f;
        if (have_ref) {
            trace->referee = static_cast<double>(dist.approx);
            trace->achieved = static_cast<double>(best_key.approx / dist.approx);
        }
    }
    return *best;
}

LatticeVector reduce_cvp_to_svp_supergaussian(const CvpInstance& inst, double gamma,
                                              SvpOracle& oracle, const ReductionParams& params,
                                              RngStream rng, ReductionTrace* trace) {
    DssViaSvpSampler sampler(oracle, params.f, params.limits);
    return reduce_cvp_to_dss(inst, gamma, sampler, params, rng, trace);
}

}  // namespace latred
