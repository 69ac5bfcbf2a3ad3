#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latred/basis.hpp"
#include "latred/enumerate.hpp"
#include "latred/oracle.hpp"
#include "test_util.hpp"

using namespace latred;
using namespace testutil;

TEST_CASE("lp_norm basics") {
    CHECK(lp_norm(rvec({3, 4}), PNorm::finite(2)) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(lp_norm(rvec({1, -1, 1}), PNorm::infinity()) == doctest::Approx(1.0).epsilon(1e-12));
    // (1+1)^(2/3), evaluated independently via exp/log to 12 digits
    double expect = std::exp((2.0 / 3.0) * std::log(2.0));
    CHECK(lp_norm(rvec({1, 1}), PNorm::finite(1.5)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("lp_norm exact keys for p in {1,2,inf}") {
    RatVec v = rvec({Rat(3, 2), Rat(-1, 3)});
    NormKey k1 = norm_key(PNorm::finite(1), v);
    CHECK(k1.exact);
    CHECK(k1.pow == Rat(11, 6));
    NormKey k2 = norm_key(PNorm::finite(2), v);
    CHECK(k2.pow == Rat(9, 4) + Rat(1, 9));
    NormKey ki = norm_key(PNorm::infinity(), v);
    CHECK(ki.pow == Rat(3, 2));
}

TEST_CASE("left_inverse examples") {
    Basis id3 = zn(3);
    LeftInverse P = left_inverse(id3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(P.rows[i][j] == (i == j ? Rat(1) : Rat(0)));

    Basis col = make_basis({{2, 0}});
    LeftInverse Pc = left_inverse(col);
    CHECK(Pc.rows[0][0] == Rat(1, 2));
    CHECK(Pc.rows[0][1] == Rat(0));

    Basis B = make_basis({{1, 0}, {1, 2}});
    LeftInverse PB = left_inverse(B);
    CHECK(PB.rows[0][0] == Rat(1));
    CHECK(PB.rows[0][1] == Rat(-1, 2));
    CHECK(PB.rows[1][0] == Rat(0));
    CHECK(PB.rows[1][1] == Rat(1, 2));
    // P*B = I, exact
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Rat s = 0;
            for (int k = 0; k < 2; ++k) s += PB.rows[i][k] * B.entry(k, j);
            CHECK(s == (i == j ? Rat(1) : Rat(0)));
        }
}

TEST_CASE("left_inverse rejects dependent columns") {
    CHECK_THROWS_AS(make_basis({{1, 2}, {2, 4}}), SingularBasis);
}

TEST_CASE("enumerate_points examples") {
    Basis z2 = zn(2);
    auto pts = enumerate_points(
        z2, BallSpec::around_zero(2, PNorm::finite(2), NormKey::from_value(PNorm::finite(2), 1)));
    CHECK(pts.size() == 5);
    auto s = coeff_set(pts);
    CHECK(s.count({0, 0}));
    CHECK(s.count({1, 0}));
    CHECK(s.count({-1, 0}));
    CHECK(s.count({0, 1}));
    CHECK(s.count({0, -1}));

    // lexicographic order by coefficients
    for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].coeffs < pts[i].coeffs);

    auto empty = enumerate_points(z2, BallSpec{rvec({Rat(1, 2), Rat(1, 2)}),
                                               NormKey::from_value(PNorm::finite(1), Rat(1, 2)),
                                               PNorm::finite(1)});
    CHECK(empty.empty());

    Basis B = make_basis({{1, 0}, {1, 2}});
    auto inf_pts = enumerate_points(
        B, BallSpec::around_zero(2, PNorm::infinity(), NormKey::from_value(PNorm::infinity(), 2)));
    // independent derivation: brute force over coefficients in [-4, 4]^2
    auto ref = brute_ball(B, rvec({0, 0}), PNorm::infinity(),
                          NormKey::from_value(PNorm::infinity(), 2), 4);
    CHECK(inf_pts.size() == ref.size());
    CHECK(inf_pts.size() == 15);
}

TEST_CASE("enumeration agrees with brute force on random lattices") {
    RngStream rng(20240811);
    std::vector<PNorm> norms = {PNorm::finite(1), PNorm::finite(2), PNorm::infinity(),
                                PNorm::finite(1.5)};
    for (int it = 0; it < 40; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        int m = n + static_cast<int>(rng.below(2));
        Basis B = random_basis(rng, n, m, 4);
        RatVec center(m);
        for (int i = 0; i < m; ++i) center[i] = Rat(rng.range(-6, 6), 1 + rng.below(3));
        const PNorm& p = norms[it % norms.size()];
        NormKey radius = NormKey::from_value(p, Rat(1 + static_cast<long long>(rng.below(5)), 1));
        auto got = enumerate_points(B, BallSpec{center, radius, p});
        auto ref = brute_ball(B, center, p, radius, 40);
        REQUIRE(got.size() == ref.size());
        for (size_t i = 0; i < ref.size(); ++i) CHECK(got[i].coeffs == ref[i]);
    }
}

TEST_CASE("count_points and count_primitive examples") {
    Basis z2 = zn(2);
    PNorm p2 = PNorm::finite(2);
    CHECK(count_points(z2, BallSpec::around_zero(2, p2, NormKey::from_value(p2, 1))) == 5);

    Basis z1 = zn(1);
    PNorm p1 = PNorm::finite(1);
    CHECK(count_primitive(z1, BallSpec::around_zero(1, p1, NormKey::from_value(p1, 3))) == 2);

    CHECK(count_primitive(z2, BallSpec::around_zero(2, p2, NormKey::from_value(p2, 2))) == 8);

    CHECK_THROWS_AS(count_primitive(z2, BallSpec{rvec({1, 0}), NormKey::from_value(p2, 1), p2}),
                    InputError);
}

TEST_CASE("primitive_part") {
    Basis z2 = zn(2);
    auto [w, k] = primitive_part(z2, LatticeVector::make(z2, {Int(2), Int(4)}));
    CHECK(w.coeffs == IntVec{Int(1), Int(2)});
    CHECK(k == 2);

    auto [w2, k2] = primitive_part(z2, LatticeVector::make(z2, {Int(3), Int(5)}));
    CHECK(k2 == 1);

    Basis z3 = zn(3);
    auto [w3, k3] = primitive_part(z3, LatticeVector::make(z3, {Int(-6), Int(9), Int(15)}));
    CHECK(w3.coeffs == IntVec{Int(-2), Int(3), Int(5)});
    CHECK(k3 == 3);

    CHECK_THROWS_AS(primitive_part(z2, LatticeVector::make(z2, {Int(0), Int(0)})), ZeroVector);
}

TEST_CASE("project_orthogonal examples") {
    Basis z2 = zn(2);
    Basis p1 = project_orthogonal(z2, LatticeVector::make(z2, {Int(1), Int(0)}));
    CHECK(p1.rank() == 1);
    // lattice Z*e2
    CHECK(p1.entry(0, 0) == Rat(0));
    CHECK(abs_rat(p1.entry(1, 0)) == Rat(1));

    Basis pd = project_orthogonal(z2, LatticeVector::make(z2, {Int(1), Int(1)}));
    CHECK(pd.rank() == 1);
    // generated by (1/2, -1/2) up to sign
    CHECK(abs_rat(pd.entry(0, 0)) == Rat(1, 2));
    CHECK(pd.entry(0, 0) + pd.entry(1, 0) == Rat(0));

    Basis z3 = zn(3);
    Basis pz = project_orthogonal(z3, LatticeVector::make(z3, {Int(0), Int(0), Int(1)}));
    CHECK(pz.rank() == 2);
    auto [v, l1] = exact_svp(pz, PNorm::finite(2));
    CHECK(l1.pow == Rat(1));

    CHECK_THROWS_AS(project_orthogonal(zn(1), LatticeVector::make(zn(1), {Int(1)})), RankOne);
}

TEST_CASE("norm comparison inequality on random vectors") {
    // ||v||_q <= ||v||_p <= m^(1/p-1/q) ||v||_q, exact for (p,q) in {1,2,inf}
    RngStream rng(7);
    for (int it = 0; it < 200; ++it) {
        int m = 2 + static_cast<int>(rng.below(4));
        RatVec v(m);
        for (int i = 0; i < m; ++i) v[i] = Rat(rng.range(-20, 20), 1 + rng.below(5));
        NormKey k1 = norm_key(PNorm::finite(1), v);
        NormKey k2 = norm_key(PNorm::finite(2), v);
        NormKey ki = norm_key(PNorm::infinity(), v);
        // q=2, p=1: ||v||_2 <= ||v||_1 and ||v||_1^2 <= m * ||v||_2^2
        CHECK(k2.pow <= k1.pow * k1.pow);
        CHECK(k1.pow * k1.pow <= Rat(m) * k2.pow);
        // q=inf, p=2
        CHECK(ki.pow * ki.pow <= k2.pow);
        CHECK(k2.pow <= Rat(m) * ki.pow * ki.pow);
        // q=inf, p=1
        CHECK(ki.pow <= k1.pow);
        CHECK(k1.pow <= Rat(m) * ki.pow);
    }
}

TEST_CASE("enumeration closed under negation and monotone in radius") {
    RngStream rng(99);
    PNorm p2 = PNorm::finite(2);
    for (int it = 0; it < 20; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        NormKey r = NormKey::from_value(p2, Rat(2 + static_cast<long long>(rng.below(4))));
        auto pts = enumerate_points(B, BallSpec::around_zero(n, p2, r));
        auto s = coeff_set(pts);
        for (const auto& c : s) {
            std::vector<long long> neg(c.size());
            for (size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
            CHECK(s.count(neg));
        }
        Int c1 = count_points(B, BallSpec::around_zero(n, p2, r));
        Int c2 = count_points(B, BallSpec::around_zero(n, p2, r.scaled(p2, Rat(3, 2))));
        CHECK(c1 <= c2);
    }
}

TEST_CASE("multiples bound: |S'| >= (lambda1/r) |S|") {
    RngStream rng(424242);
    PNorm p2 = PNorm::finite(2);
    for (int it = 0; it < 30; ++it) {
        int n = 1 + static_cast<int>(rng.below(4));
        Basis B = random_basis(rng, n, n, 3);
        auto [v1, l1] = exact_svp(B, p2);
        Rat rfac(2 + static_cast<long long>(rng.below(3)));
        NormKey r = l1.scaled(p2, rfac);
        auto pts = enumerate_points(B, BallSpec::around_zero(n, p2, r));
        std::set<IntVec> S, Sprime;
        for (const auto& v : pts) {
            if (v.is_zero()) continue;
            S.insert(v.coeffs);
            auto [w, k] = primitive_part(B, v);
            Sprime.insert(w.coeffs);
        }
        if (S.empty()) continue;
        // |S'|^2 * r^2 >= lambda1^2 * |S|^2, exact in the squared domain
        Rat lhs = Rat(Int(Sprime.size()) * Int(Sprime.size())) * r.pow;
        Rat rhs = l1.pow * Rat(Int(S.size()) * Int(S.size()));
        CHECK(lhs >= rhs);
    }
}

TEST_CASE("projection lemma: lambda1(pi(L)) >= (3/4) lambda1^2 / ||x||") {
    RngStream rng(5150);
    PNorm p2 = PNorm::finite(2);
    int done = 0;
    for (int it = 0; it < 60 && done < 25; ++it) {
        Basis B = random_basis(rng, 3, 3, 4);
        IntVec c(3);
        for (int i = 0; i < 3; ++i) c[i] = Int(rng.range(-2, 2));
        LatticeVector x = LatticeVector::make(B, c);
        if (x.is_zero()) continue;
        Basis proj = project_orthogonal(B, x);
        auto [pv, pl1] = exact_svp(proj, p2);
        auto [v, l1] = exact_svp(B, p2);
        NormKey xn = x.norm(p2);
        // lambda1(pi)^2 * ||x||^2 >= (9/16) lambda1^4, exact
        CHECK(pl1.pow * xn.pow >= Rat(9, 16) * l1.pow * l1.pow);
        ++done;
    }
    CHECK(done >= 25);
}

TEST_CASE("counting lemma: N(R K) <= (1+2R/r)^n N(r K)") {
    RngStream rng(31337);
    PNorm p2 = PNorm::finite(2);
    for (int it = 0; it < 25; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        auto [v1, l1] = exact_svp(B, p2);
        for (long long R : {2, 3}) {
            Int cr = count_points(B, BallSpec::around_zero(n, p2, l1));
            Int cR = count_points(B, BallSpec::around_zero(n, p2, l1.scaled(p2, Rat(R))));
            CHECK(cR <= pow_int(Int(1 + 2 * R), static_cast<unsigned>(n)) * cr);
        }
    }
}

TEST_CASE("enumeration budget") {
    Basis z4 = zn(4);
    PNorm p2 = PNorm::finite(2);
    EnumLimits tight;
    tight.cell_cap = 10;
    CHECK_THROWS_AS(
        count_points(z4, BallSpec::around_zero(4, p2, NormKey::from_value(p2, 50)), tight),
        EnumerationBudgetExceeded);
}

TEST_CASE("count_ball_multi matches repeated counts") {
    RngStream rng(2024);
    PNorm p2 = PNorm::finite(2);
    for (int it = 0; it < 10; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        auto [v1, l1] = exact_svp(B, p2);
        std::vector<NormKey> radii;
        for (int j = 1; j <= 4; ++j) radii.push_back(l1.scaled(p2, Rat(j)));
        RatVec center(n, Rat(0));
        MultiCounts mc = count_ball_multi(B, center, p2, radii);
        for (int j = 0; j < 4; ++j) {
            CHECK(mc.total[j] == count_points(B, BallSpec::around_zero(n, p2, radii[j])));
            CHECK(mc.primitive[j] == count_primitive(B, BallSpec::around_zero(n, p2, radii[j])));
        }
    }
}
