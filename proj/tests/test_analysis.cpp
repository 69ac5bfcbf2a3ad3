#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latred/analysis.hpp"
#include "latred/oracle.hpp"
#include "test_util.hpp"

using namespace latred;
using namespace testutil;

TEST_CASE("covering_check examples") {
    RngStream rng(1);
    // m=1, alpha=3: the center set is {0}
    LemmaReport r1 = covering_check(1, PNorm::finite(1), PNorm::finite(2), 3.0, 200, rng);
    CHECK(r1.holds);
    CHECK(r1.lhs == 1.0);

    // m=4, p=1, q=2, alpha=e: |S| counted exactly (9 points of Z^4 with
    // l1 norm <= 4/e) against (e^4 alpha)^{4/alpha}
    LemmaReport r2 = covering_check(4, PNorm::finite(1), PNorm::finite(2), std::exp(1.0), 500, rng);
    CHECK(r2.holds);
    CHECK(r2.lhs == 9.0);
}

TEST_CASE("covering_check full grid") {
    RngStream rng(2);
    std::vector<std::pair<PNorm, PNorm>> grid = {{PNorm::finite(1), PNorm::finite(2)},
                                                 {PNorm::finite(2), PNorm::finite(4)},
                                                 {PNorm::finite(1), PNorm::infinity()},
                                                 {PNorm::finite(2), PNorm::infinity()}};
    for (int m = 2; m <= 4; ++m)
        for (const auto& [p, q] : grid)
            for (double alpha : {std::exp(1.0), 4.0}) {
                LemmaReport rep = covering_check(m, p, q, alpha, 400, rng);
                CHECK(rep.holds);
            }
}

TEST_CASE("growth_ladder examples") {
    PNorm pinf = PNorm::infinity();
    Basis z1 = zn(1);
    GrowthResult g = growth_ladder(z1, pinf, NormKey::from_value(pinf, 1), Rat(4));
    CHECK(g.c_dagger == Rat(3));
    CHECK(g.ratio == doctest::Approx(7.0 / 5.0));

    // c = 2 forces the single candidate j = 1, backed by the counting lemma
    RngStream rng(3);
    for (int it = 0; it < 10; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        PNorm p2 = PNorm::finite(2);
        auto [v, l1] = exact_svp(B, p2);
        GrowthResult g2 = growth_ladder(B, p2, l1, Rat(2));
        CHECK(g2.c_dagger == Rat(2));
        CHECK(static_cast<double>(to_ld(Rat(g2.count_hi) / Rat(g2.count_lo))) <=
              std::pow(5.0, B.dimension()) + 1e-9);
    }

    PNorm p2 = PNorm::finite(2);
    Basis z2 = zn(2);
    auto [v, l1] = exact_svp(z2, p2);
    GrowthResult g3 = growth_ladder(z2, p2, l1, Rat(6));
    CHECK(g3.ratio <= std::pow(2.0, std::log2(5.0) / 3.0 * 2.0) * (1 + 1e-12));
}

TEST_CASE("growth_ladder ratio bound on random instances (c in {4,6})") {
    RngStream rng(4);
    PNorm p2 = PNorm::finite(2);
    for (int it = 0; it < 25; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        auto [v, l1] = exact_svp(B, p2);
        for (long long c : {4, 6}) {
            GrowthResult g = growth_ladder(B, p2, l1, Rat(c));
            double bound = std::pow(2.0, std::log2(5.0) / std::floor(c / 2.0) * B.dimension());
            CHECK(g.ratio <= bound * (1 + 1e-12));
        }
    }
}

TEST_CASE("verify_inequality examples") {
    Basis z1 = zn(1);
    PNorm p2 = PNorm::finite(2);

    LemmaReport shift0 = verify_shifted_mass(z1, rvec({0}), p2);
    CHECK(shift0.holds);

    Basis z2 = zn(2);
    LemmaReport proj = verify_projection(z2, LatticeVector::make(z2, {Int(1), Int(1)}));
    CHECK(proj.holds);
    // lambda1(pi) = sqrt(2)/2 vs (3/4) * 1/sqrt(2)
    CHECK(proj.lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(proj.rhs == doctest::Approx(0.75 / std::sqrt(2.0)).epsilon(1e-12));

    LemmaReport mult = verify_multiples_bound(z1, PNorm::finite(1), Rat(3));
    CHECK(mult.holds);
    CHECK(mult.lhs == 2.0);  // S' = {+1, -1}, equality at (1/3)*6

    LemmaReport pc = verify_point_count_bound(z2, rvec({0, 0}), p2, Rat(3));
    CHECK(pc.holds);
}

TEST_CASE("all inequality families on seeded random instances") {
    RngStream rng(5);
    int count = 0;
    for (int it = 0; it < 15; ++it) {
        int n = 1 + static_cast<int>(rng.below(3));
        Basis B = random_basis(rng, n, n, 4);
        for (double pv : {1.0, 1.5, 2.0}) {
            PNorm p = PNorm::finite(pv);
            for (const LemmaReport& rep :
                 verify_tail_multi(B, p, {Rat(1), Rat(3, 2), Rat(2)}))
                CHECK(rep.holds);
            RatVec t(B.dimension());
            for (auto& x : t) x = Rat(rng.range(-8, 8), 4);
            CHECK(verify_shifted_mass(B, t, p).holds);
            CHECK(verify_multiples_bound(B, p, Rat(2 + rng.below(3))).holds);
            ++count;
        }
        if (n >= 3) {
            IntVec c(3, 0);
            c[rng.below(3)] = 1 + Int(rng.below(2));
            CHECK(verify_projection(B, LatticeVector::make(B, c)).holds);
        }
        RatVec t(B.dimension(), Rat(1, 3));
        CHECK(verify_point_count_bound(B, t, PNorm::finite(2), Rat(2)).holds);
    }
    CHECK(count >= 45);
}

TEST_CASE("multiples bound on random subsets") {
    RngStream rng(6);
    for (int it = 0; it < 10; ++it) {
        Basis B = random_basis(rng, 2, 2, 4);
        RngStream sub(99, it);
        CHECK(verify_multiples_bound(B, PNorm::finite(2), Rat(3), &sub).holds);
    }
}

TEST_CASE("theta closed form at ln 2") {
    CHECK(static_cast<double>(theta_p(logl(2.0L), PNorm::finite(1))) ==
          doctest::Approx(3.0).epsilon(1e-12));
}
