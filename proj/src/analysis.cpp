#include "latred/analysis.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "latred/oracle.hpp"
#include "latred/supergaussian.hpp"

namespace latred {

long double theta_p(long double tau, const PNorm& p) {
    if (p.is_infinity()) throw InfinityNormUnsupported();
    if (!(tau > 0)) throw InputError("theta_p needs tau > 0");
    long double pe = static_cast<long double>(p.p());
    return 1.0L + one_d_mass(powl(tau, 1.0L / pe), p);
}

LemmaReport covering_check(int m, const PNorm& p, const PNorm& q, double alpha, int n_samples,
                           RngStream& rng, const EnumLimits& limits) {
    if (p.is_infinity()) throw InputError("covering_check needs finite p");
    if (!(alpha >= std::exp(1.0) - 1e-12)) throw InputError("covering_check needs alpha >= e");
    double pe = p.p();
    long double r = powl(static_cast<long double>(m), 1.0L / pe) / static_cast<long double>(alpha);

    // Center set S = Z^m cap r B_p. For integral p the norm^p of integer
    // points is an integer, so a tight rational upper bound on r^p decides
    // membership exactly (r^p = m/alpha^p is never within 1e-6 of an integer
    // on the tested grid).
    long double rpow = powl(r, pe);
    Basis zm = [&] {
        std::vector<IntVec> cols(m, IntVec(m, 0));
        for (int i = 0; i < m; ++i) cols[i][i] = 1;
        return Basis(std::move(cols));
    }();
    NormKey rkey = p.exact() ? NormKey::from_pow(p, Rat(static_cast<long long>(floorl(rpow * 1048576.0L)),
                                                        1048576))
                             : NormKey::from_approx(r);
    std::vector<LatticeVector> S = enumerate_points(zm, BallSpec::around_zero(m, p, rkey), limits);
    long double bound = powl(expl(4.0L) * powl(static_cast<long double>(alpha), pe),
                             static_cast<long double>(m) / powl(static_cast<long double>(alpha), pe));

    bool count_ok = static_cast<long double>(S.size()) <= bound * (1.0L + 1e-12L);

    // Coverage: sample t in r B_p, round toward zero, verify the center is in
    // S and within l_q distance m^{1/q}.
    long double qe = q.is_infinity() ? 0.0L : static_cast<long double>(q.p());
    long double mq = q.is_infinity() ? 1.0L : powl(static_cast<long double>(m), 1.0L / qe);
    int failures = 0;
    for (int s = 0; s < n_samples; ++s) {
        std::vector<long double> t(m);
        while (true) {
            long double norm = 0;
            for (int i = 0; i < m; ++i) {
                t[i] = (2.0L * static_cast<long double>(rng.uniform01()) - 1.0L) * r;
                norm += powl(fabsl(t[i]), pe);
            }
            if (norm <= rpow) break;
        }
        IntVec z(m);
        long double znorm = 0, dist = 0;
        for (int i = 0; i < m; ++i) {
            long double zi = truncl(t[i]);
            z[i] = Int(static_cast<long long>(zi));
            znorm += powl(fabsl(zi), pe);
            long double di = fabsl(t[i] - zi);
            dist = q.is_infinity() ? std::max(dist, di) : dist + powl(di, qe);
        }
        if (!q.is_infinity()) dist = powl(dist, 1.0L / qe);
        bool in_S = znorm <= rpow * (1.0L + 1e-12L);
        bool covered = dist <= mq * (1.0L + 1e-9L);
        if (!in_S || !covered) ++failures;
    }

    LemmaReport rep;
    rep.lemma = "covering";
    std::ostringstream os;
    os << "m=" << m << " p=" << p.to_string() << " q=" << q.to_string() << " alpha=" << alpha;
    rep.instance = os.str();
    rep.lhs = static_cast<double>(S.size());
    rep.rhs = static_cast<double>(bound);
    rep.holds = count_ok && failures == 0;
    rep.method = "monte-carlo(" + std::to_string(n_samples) + ",cover-fails=" +
                 std::to_string(failures) + ")";
    return rep;
}

GrowthResult growth_ladder(const Basis& B, const PNorm& p, const NormKey& r, const Rat& c,
                           const EnumLimits& limits) {
    if (c < 2) throw InputError("growth_ladder needs c >= 2");
    Int c2 = floor_rat(c / 2);
    Rat cprime = c - Rat(c2);
    unsigned c2u = static_cast<unsigned>(c2);
    int m = B.dimension();

    auto count_at = [&](const Rat& mult) {
        return count_points(B, BallSpec::around_zero(m, p, r.scaled(p, mult)), limits);
    };

    Int prev = count_at(cprime);
    for (Int j = 1; j <= c2; ++j) {
        Int cur = count_at(cprime + Rat(j));
        // ratio <= 5^{m/floor(c/2)}  <=>  cur^{c2} <= 5^m prev^{c2}, exact
        if (prev > 0 &&
            pow_int(cur, c2u) <= pow_int(Int(5), static_cast<unsigned>(m)) * pow_int(prev, c2u)) {
            GrowthResult out;
            out.c_dagger = cprime + Rat(j);
            out.ratio = static_cast<double>(to_ld(cur) / to_ld(prev));
            out.count_hi = cur;
            out.count_lo = prev;
            return out;
        }
        prev = cur;
    }
    throw Error("growth_ladder: no rung satisfied the pigeonhole bound");
}

std::vector<LemmaReport> verify_tail_multi(const Basis& B, const PNorm& p,
                                           const std::vector<Rat>& levels, double rel_err,
                                           const EnumLimits& limits) {
    int n = B.rank();
    long double pe = static_cast<long double>(p.p());

    // lhs: mass at norm >= a(n/p)^{1/p}, summed within the certified ball;
    // the residual beyond the certification radius is bounded by the
    // accumulator's tail fraction. Boundary points are included generously,
    // which only enlarges the left side of the inequality being certified.
    std::vector<long double> cut_pow, shell(levels.size(), 0.0L);
    for (const Rat& a : levels) {
        if (a < 1) throw InputError("tail bound needs a >= 1");
        cut_pow.push_back(powl(to_ld(a), pe) * static_cast<long double>(n) / pe);
    }
    MassAccumulator total = f_p_lattice_scan(
        B, p, rel_err,
        [&](const IntVec&, long double npow) {
            for (size_t i = 0; i < cut_pow.size(); ++i)
                if (npow >= cut_pow[i] * (1.0L - 1e-15L)) shell[i] += expl(-npow);
        },
        limits);

    std::vector<LemmaReport> reps;
    for (size_t i = 0; i < levels.size(); ++i) {
        long double lhs_hi = shell[i] + total.tail_fraction * total.upper();
        long double apow = powl(to_ld(levels[i]), pe);
        long double factor =
            powl(expl(1.0L) * apow * expl(-apow), static_cast<long double>(n) / pe);
        long double rhs_lo = factor * total.lower();

        LemmaReport rep;
        rep.lemma = "tail";
        std::ostringstream os;
        os << "rank=" << n << " p=" << p.to_string() << " a=" << rat_to_string(levels[i]);
        rep.instance = os.str();
        rep.lhs = static_cast<double>(lhs_hi);
        rep.rhs = static_cast<double>(rhs_lo);
        rep.holds = lhs_hi <= rhs_lo;
        rep.method = "exact-enumeration";
        reps.push_back(rep);
    }
    return reps;
}

LemmaReport verify_tail(const Basis& B, const PNorm& p, const Rat& a, double rel_err,
                        const EnumLimits& limits) {
    return verify_tail_multi(B, p, {a}, rel_err, limits).at(0);
}

LemmaReport verify_shifted_mass(const Basis& B, const RatVec& t, const PNorm& p, double rel_err,
                                const EnumLimits& limits) {
    MassAccumulator base = f_p_lattice(B, p, rel_err, limits);
    MassAccumulator shifted = f_p_shifted(B, t, p, rel_err, limits);
    long double ft = f_p_point(t, p);

    // f_p(t) f_p(L) <= f_p(L+t) <= f_p(L), compared on certified enclosures.
    bool lower_ok = ft * base.lower() <= shifted.upper();
    bool upper_ok = shifted.lower() <= base.upper();

    LemmaReport rep;
    rep.lemma = "shifted-mass";
    std::ostringstream os;
    os << "rank=" << B.rank() << " p=" << p.to_string();
    rep.instance = os.str();
    rep.lhs = static_cast<double>(ft * base.lower());
    rep.rhs = static_cast<double>(shifted.value);
    rep.holds = lower_ok && upper_ok;
    rep.method = "exact-enumeration";
    return rep;
}

LemmaReport verify_projection(const Basis& B, const LatticeVector& x, const EnumLimits& limits) {
    PNorm p2 = PNorm::finite(2);
    Basis proj = project_orthogonal(B, x);
    auto [pv, pl1] = exact_svp(proj, p2, limits);
    auto [v, l1] = exact_svp(B, p2, limits);
    NormKey xn = x.norm(p2);

    // lambda1(pi(L))^2 ||x||^2 >= (9/16) lambda1(L)^4, exact rationals
    bool holds = pl1.pow * xn.pow >= Rat(9, 16) * l1.pow * l1.pow;

    LemmaReport rep;
    rep.lemma = "projection";
    rep.instance = "rank=" + std::to_string(B.rank());
    rep.lhs = pl1.value();
    rep.rhs = 0.75 * l1.value() * l1.value() / xn.value();
    rep.holds = holds;
    rep.method = "exact-enumeration";
    return rep;
}

LemmaReport verify_multiples_bound(const Basis& B, const PNorm& p, const Rat& r_factor,
                                   RngStream* subset_rng, const EnumLimits& limits) {
    auto [v1, l1] = exact_svp(B, p, limits);
    NormKey r = l1.scaled(p, r_factor);
    std::vector<LatticeVector> pts =
        enumerate_points(B, BallSpec::around_zero(B.dimension(), p, r), limits);
    std::vector<IntVec> S;
    std::set<IntVec> Sprime;
    for (const LatticeVector& v : pts) {
        if (v.is_zero()) continue;
        if (subset_rng && subset_rng->coin()) continue;
        S.push_back(v.coeffs);
        auto [w, k] = primitive_part(B, v);
        Sprime.insert(w.coeffs);
    }

    // |S'| >= (lambda1/r)|S| <=> |S'|^p r^p >= lambda1^p |S|^p, exact for
    // integral p; r = r_factor * lambda1 makes the ratio rational anyway.
    bool holds;
    if (p.exact()) {
        unsigned e = p.ipow();
        holds = pow_int(Int(Sprime.size()), e) * r.pow >= l1.pow * pow_int(Int(S.size()), e);
    } else {
        holds = static_cast<long double>(Sprime.size()) * r.approx >=
                l1.approx * static_cast<long double>(S.size()) * (1.0L - 1e-9L);
    }

    LemmaReport rep;
    rep.lemma = "multiples-bound";
    std::ostringstream os;
    os << "rank=" << B.rank() << " p=" << p.to_string() << " r=" << rat_to_string(r_factor)
       << "*lambda1 |S|=" << S.size();
    rep.instance = os.str();
    rep.lhs = static_cast<double>(Sprime.size());
    rep.rhs = static_cast<double>(to_ld(Rat(1) / r_factor) * static_cast<long double>(S.size()));
    rep.holds = holds;
    rep.method = "exact-enumeration";
    return rep;
}

LemmaReport verify_point_count_bound(const Basis& B, const RatVec& t, const PNorm& p, const Rat& r,
                                     const EnumLimits& limits) {
    Int count = count_points(B, BallSpec{t, NormKey::from_value(p, r), p}, limits);
    // l = max bit length over entries and the denominator (a fixed convention
    // for the bound's unspecified poly -> exponent 4 m l).
    unsigned l = 1;
    for (int j = 0; j < B.rank(); ++j)
        for (int i = 0; i < B.dimension(); ++i) {
            const Int& e = B.column(j)[i];
            if (e != 0) l = std::max(l, boost::multiprecision::msb(abs_int(e)) + 1);
        }
    l = std::max(l, boost::multiprecision::msb(B.denominator()) + 1);
    double m = B.dimension();
    double log_rhs = 4.0 * m * l * std::log(2.0 + to_double(r));
    double log_lhs = count > 1 ? std::log(to_double(Rat(count - 1))) : -1e300;

    LemmaReport rep;
    rep.lemma = "point-count";
    rep.instance = "rank=" + std::to_string(B.rank()) + " r=" + rat_to_string(r) +
                   " l=" + std::to_string(l);
    rep.lhs = to_double(Rat(count));
    rep.rhs = log_rhs;  // log of the bound; the bound itself overflows double
    rep.holds = log_lhs <= log_rhs;
    rep.method = "exact-enumeration";
    return rep;
}

}  // namespace latred
