#include "dgbv/gauge.hpp"
#include "dgbv/examples.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dgbv;

namespace {

struct World {
    Fixture fx = bv_model(2, 4);
    CohomologyBasis H = cohomology_basis(fx.D);
    MCSolution sol;
    World(int order = 5) : sol(solve_mc_universal(fx.D, H, order)) {}
};

} // namespace

TEST_CASE("gauge element screening")
{
    World w;
    auto spec = w.sol.gamma.spec;
    AlgSeries bad(spec);
    bad.add_term(zero_mono(*spec), w.fx.D.algebra.unit_vector());
    CHECK_THROWS_AS(GaugeElement(w.fx.D, bad), std::invalid_argument);

    AlgSeries wrong_parity(spec);
    wrong_parity.add_term(param_mono(*spec, 0), w.fx.D.algebra.unit_vector());
    CHECK_THROWS_AS(GaugeElement(w.fx.D, wrong_parity), std::invalid_argument);
}

TEST_CASE("ad basics: ad_0 = 0 and self-bracket of shifted-even elements vanishes")
{
    World w;
    std::mt19937_64 rng(1);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    AlgSeries zero(w.sol.gamma.spec);
    CHECK(ad_series(w.fx.D, zero, A).is_zero_series());
    CHECK(ad_series(w.fx.D, A, A).is_zero_series());
    // nilpotency: ad_A^{N+1} = 0 on any series with constant term
    AlgSeries f = constant_series(w.sol.gamma.spec, unit_vec(w.fx.D.dim(), 3));
    CHECK(ad_power(w.fx.D, A, w.sol.gamma.spec->order + 1, f).is_zero_series());
}

TEST_CASE("exp(ad_A) exp(ad_-A) is the identity on all generators")
{
    World w;
    std::mt19937_64 rng(2);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    for (std::size_t i = 0; i < w.fx.D.dim(); ++i) {
        AlgSeries x = constant_series(w.sol.gamma.spec, unit_vec(w.fx.D.dim(), i));
        AlgSeries back = exp_ad(w.fx.D, A, exp_ad(w.fx.D, A.scaled(Rational(-1)), x));
        CHECK((back - x).is_zero_series());
    }
}

TEST_CASE("cbh: identity element and the order-2 expansion")
{
    World w;
    std::mt19937_64 rng(3);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    AlgSeries zero(w.sol.gamma.spec);
    CHECK((cbh(w.fx.D, A, zero) - A).is_zero_series());
    CHECK((cbh(w.fx.D, zero, A) - A).is_zero_series());

    AlgSeries B = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    AlgSeries C = cbh(w.fx.D, A, B);
    // C = A + B + 1/2 [A.B] + higher commutators
    AlgSeries low = A + B;
    low.axpy(Rational(1, 2), ad_series(w.fx.D, A, B));
    AlgSeries diff = C - low;
    // whatever remains is made of nested brackets of order >= 3 in A,B; verify
    // the order-2 part agrees exactly
    for (const auto& [m, c] : diff.terms)
        CHECK(mono_degree(m) >= 3);
}

TEST_CASE("cbh agrees with the exp/log oracle on seeded random pairs")
{
    World w(6);
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 6; ++trial) {
        AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
        AlgSeries B = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
        AlgSeries C = cbh(w.fx.D, A, B);
        for (std::size_t i = 0; i < w.fx.D.dim(); ++i) {
            AlgSeries x = constant_series(w.sol.gamma.spec, unit_vec(w.fx.D.dim(), i));
            AlgSeries lhs = log_composed_exp(w.fx.D, A, B, x);
            AlgSeries rhs = ad_series(w.fx.D, C, x);
            CHECK((lhs - rhs).is_zero_series());
        }
    }
}

TEST_CASE("cbh group law through the gauge action")
{
    World w;
    std::mt19937_64 rng(31415);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    AlgSeries B = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    GaugeElement gA(w.fx.D, A), gB(w.fx.D, B);
    GaugeElement gC(w.fx.D, cbh(w.fx.D, A, B));
    AlgSeries lhs = gauge_action(w.fx.D, gC, w.sol.gamma);
    AlgSeries rhs = gauge_action(w.fx.D, gA, gauge_action(w.fx.D, gB, w.sol.gamma));
    CHECK((lhs - rhs).is_zero_series());
}

TEST_CASE("cbh associativity on random triples")
{
    World w;
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 3; ++trial) {
        AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng, 3);
        AlgSeries B = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng, 3);
        AlgSeries C = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng, 3);
        AlgSeries lhs = cbh(w.fx.D, cbh(w.fx.D, A, B), C);
        AlgSeries rhs = cbh(w.fx.D, A, cbh(w.fx.D, B, C));
        CHECK((lhs - rhs).is_zero_series());
    }
}

TEST_CASE("exp(ad) conjugation identities and the binomial expansion")
{
    World w;
    std::mt19937_64 rng(4);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    AlgSeries B = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    auto rep = conjugation_identity_check(w.fx.D, A, B);
    for (const auto& s : rep.witnesses)
        INFO(s);
    CHECK(rep.pass);

    // A = 0 reduces both sides to ad_B
    AlgSeries zero(w.sol.gamma.spec);
    CHECK(conjugation_identity_check(w.fx.D, zero, B, 1).pass);
}

TEST_CASE("conjugating the differential by exp(ad) shifts it by an inner term")
{
    World w;
    std::mt19937_64 rng(5);
    AlgSeries A = random_gauge_series(w.fx.D, w.sol.gamma.spec, rng);
    auto rep = differential_conjugation_check(w.fx.D, A);
    for (const auto& s : rep.witnesses)
        INFO(s);
    CHECK(rep.pass);
    AlgSeries zero(w.sol.gamma.spec);
    CHECK(differential_conjugation_check(w.fx.D, zero).pass);
}

TEST_CASE("gauge action: A = 0 fixes everything; delta A = 0 reduces to exp(ad)")
{
    World w;
    AlgSeries zero(w.sol.gamma.spec);
    GaugeElement g0(w.fx.D, zero);
    CHECK((gauge_action(w.fx.D, g0, w.sol.gamma) - w.sol.gamma).is_zero_series());

    // a delta-closed gauge element: z1-coefficient terms (δz = 0 in the fixture)
    AlgSeries A(w.sol.gamma.spec);
    std::size_t even_param = 0;
    for (std::size_t p = 1; p < w.sol.gamma.spec->count(); ++p)
        if (w.sol.gamma.spec->parities[p] == 0)
            even_param = p;
    Mono m = param_mono(*w.sol.gamma.spec, even_param);
    A.add_term(m, unit_vec(w.fx.D.dim(), w.fx.D.algebra.basis.index_of("z1")));
    REQUIRE(is_zero(w.fx.D.delta.apply(unit_vec(w.fx.D.dim(),
                                                w.fx.D.algebra.basis.index_of("z1")))));
    GaugeElement g(w.fx.D, A);
    AlgSeries lhs = gauge_action(w.fx.D, g, w.sol.gamma);
    AlgSeries rhs = exp_ad(w.fx.D, A, w.sol.gamma);
    CHECK((lhs - rhs).is_zero_series());
}

TEST_CASE("gauge action preserves the Maurer-Cartan set")
{
    World w;
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        GaugeElement g(w.fx.D, random_gauge_series(w.fx.D, w.sol.gamma.spec, rng));
        AlgSeries acted = gauge_action(w.fx.D, g, w.sol.gamma);
        AlgSeries resid = apply_operator(w.fx.D.delta, acted);
        resid.axpy(Rational(1, 2), bracket_series(w.fx.D, acted, acted));
        CHECK(resid.is_zero_series());
    }
}

TEST_CASE("conjugating the deformed differential matches the acted solution")
{
    World w(4);
    std::mt19937_64 rng(7);
    GaugeElement g(w.fx.D, random_gauge_series(w.fx.D, w.sol.gamma.spec, rng, 3));
    auto rep = conjugate_differential_check(w.fx.D, g, w.sol.gamma);
    for (const auto& s : rep.witnesses)
        INFO(s);
    CHECK(rep.pass);
}

TEST_CASE("construct_gauge_equivalence: identical solutions give A = 0")
{
    World w;
    GaugeElement g = construct_gauge_equivalence(w.fx.D, w.sol, w.sol);
    CHECK(g.A.is_zero_series());
}

TEST_CASE("construct_gauge_equivalence connects a twisted normalized solution")
{
    World w;
    std::mt19937_64 rng(8);
    // produce a second normalized solution by gauging with an admissible A
    // whose coefficients lie in Im Delta, then renormalizing is unnecessary:
    // the acted solution stays normalized in this fixture precisely because
    // the corrections stay in Im Delta; verify, then reconstruct.
    GaugeElement g(w.fx.D, random_gauge_series(w.fx.D, w.sol.gamma.spec, rng));
    AlgSeries acted = gauge_action(w.fx.D, g, w.sol.gamma);
    // the orbit point is again normalized: higher terms in Im Delta, and the
    // linear term moves only by a harmonic deltaDelta-exact shift
    const Subspace imD = image(w.fx.D.Delta.matrix);
    const Subspace im_dD =
        image(w.fx.D.delta.matrix.compose(w.fx.D.Delta.matrix));
    for (const auto& [m, c] : acted.terms)
        if (mono_degree(m) >= 2)
            REQUIRE(imD.contains(c));
    AlgSeries shift1 = acted.order_part(1) - w.sol.gamma1;
    for (const auto& [m, c] : shift1.terms)
        REQUIRE(im_dD.contains(c));
    MCSolution twisted{MCSolution::Kind::universal, acted, acted.order_part(1),
                       AlgSeries(w.sol.gamma.spec)};
    GaugeElement rec = construct_gauge_equivalence(w.fx.D, w.sol, twisted);
    AlgSeries check = gauge_action(w.fx.D, rec, w.sol.gamma) - acted;
    CHECK(check.is_zero_series());
}

TEST_CASE("one-parameter solutions from shifted representatives are gauge equivalent")
{
    World w;
    std::size_t even_cls = 0;
    for (std::size_t a = 1; a < w.H.rank(); ++a)
        if (w.H.parity(a) == 0)
            even_cls = a;
    const Vec x1 = w.H.reps[even_cls];
    // same class, different harmonic representative: shift by an even
    // deltaDelta image
    Vec u = unit_vec(w.fx.D.dim(), w.fx.D.algebra.basis.index_of("a1*w1"));
    Vec shift = w.fx.D.delta.apply(w.fx.D.Delta.apply(u));
    REQUIRE_FALSE(is_zero(shift));
    Vec x1bar = x1 + shift;
    MCSolution sol = solve_mc_one_param_rep(w.fx.D, x1, 5);
    MCSolution solbar = solve_mc_one_param_rep(w.fx.D, x1bar, 5);
    REQUIRE_FALSE((sol.gamma - solbar.gamma).is_zero_series());
    // order-1 step: xbar_1 = x_1 - deltaDelta z_1, then order by order
    GaugeElement g = construct_gauge_equivalence(w.fx.D, sol, solbar);
    CHECK_FALSE(g.A.is_zero_series());
    AlgSeries check = gauge_action(w.fx.D, g, sol.gamma) - solbar.gamma;
    CHECK(check.is_zero_series());
}

TEST_CASE("construct_gauge_equivalence rejects different order-1 classes")
{
    World w;
    // shift the linear term by a genuinely different class
    AlgSeries gamma2 = w.sol.gamma;
    gamma2.add_term(param_mono(*w.sol.gamma.spec, 0), w.H.reps[3]);
    MCSolution other{MCSolution::Kind::universal, gamma2, gamma2.order_part(1),
                     AlgSeries(w.sol.gamma.spec)};
    CHECK_THROWS_AS(construct_gauge_equivalence(w.fx.D, w.sol, other),
                    std::invalid_argument);
}

TEST_CASE("potential is gauge invariant, finitely and linearized")
{
    World w(6);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 4; ++trial) {
        GaugeElement g(w.fx.D, random_gauge_series(w.fx.D, w.sol.gamma.spec, rng));
        auto rep = check_phi_gauge_invariance(w.fx.D, w.sol, w.fx.integral, g);
        CHECK(rep.action_preserves_mc);
        CHECK(rep.finite_invariance);
        CHECK(rep.linearized_invariance);
        CHECK(rep.cubic_bracket_identity);
    }
    // A = 0 trivially passes
    GaugeElement g0(w.fx.D, AlgSeries(w.sol.gamma.spec));
    auto rep0 = check_phi_gauge_invariance(w.fx.D, w.sol, w.fx.integral, g0);
    CHECK(rep0.finite_invariance);
}
