#include "dgbv/examples.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dgbv;

namespace {

// Λ(θ) ⊗ Q[x]/(x²) with the BV operator ∂²/∂x∂θ. Not a GBV algebra (the
// truncation breaks the second-order identity), but the derived bracket is
// still well defined and matches the hand-computed differentiation table.
DGBVStructure polyvector_toy()
{
    GradedBasis b;
    b.labels = {"one", "x", "th", "xth"};
    b.degrees = {0, 0, 1, 1};
    GradedAlgebra alg(b, 0);
    for (std::size_t i = 0; i < 4; ++i) {
        alg.set_product(0, i, SparseVec{{i, Rational(1)}});
        if (i != 0)
            alg.set_product(i, 0, SparseVec{{i, Rational(1)}});
    }
    alg.set_product(1, 2, SparseVec{{3, Rational(1)}}); // x th = xth
    alg.set_product(2, 1, SparseVec{{3, Rational(1)}}); // th x = xth
    Matrix D(4, 4);
    D(0, 3) = 1; // Δ(xth) = 1
    return DGBVStructure(std::move(alg), zero_operator(4, +1),
                         LinearOperator{std::move(D), -1});
}

} // namespace

TEST_CASE("derived bracket on the polyvector toy: [x . th] = 1")
{
    DGBVStructure D = polyvector_toy();
    Vec x = unit_vec(4, 1), th = unit_vec(4, 2);
    CHECK(D.derived_bracket(x, th) == unit_vec(4, 0));
    // graded antisymmetry in shifted degrees: [th . x] = -[x . th]
    CHECK(D.derived_bracket(th, x) == Rational(-1) * unit_vec(4, 0));
    // [1 . b] = 0 since Δ1 = 0
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(D.derived_bracket(D.algebra.unit_vector(), unit_vec(4, j)) == zero_vec(4));
}

TEST_CASE("truncated polyvector toy fails the second-order axiom with a witness")
{
    DGBVStructure D = polyvector_toy();
    auto rep = D.validate_gbv();
    const auto* second = rep.find("bracket-second-order");
    REQUIRE(second != nullptr);
    CHECK_FALSE(second->pass);
    CHECK_FALSE(second->witness.empty());
}

TEST_CASE("trivial structure passes all axioms")
{
    Fixture fx = trivial_exterior(2);
    CHECK(fx.D.validate_dgbv().all_pass());
    auto q = fx.D.check_q_condition();
    CHECK(q.equalities_hold);
    CHECK(q.homology_iso);
    CHECK(q.verdicts_match);
    CHECK(q.h_harmonic == 4);
    CHECK(q.im_dD.dim() == 0);
}

TEST_CASE("bv fixtures pass the full validator")
{
    for (auto [n, m] : {std::pair{1, 3}, std::pair{2, 4}}) {
        Fixture fx = bv_model(n, m);
        auto rep = fx.D.validate_dgbv();
        for (const auto& ax : rep.axioms) {
            INFO(fx.name << ": " << ax.name << " witness: " << ax.witness);
            CHECK(ax.pass);
        }
    }
}

TEST_CASE("koszul fixture passes the full validator; f = 0 gives zero differential")
{
    std::vector<Poly> f{poly_monomial(2, {2, 0}), poly_monomial(2, {0, 2})};
    Fixture fx = koszul_model(f, 4);
    CHECK(fx.D.validate_dgbv().all_pass());
    CHECK_FALSE(fx.D.delta.matrix.is_zero_matrix());

    std::vector<Poly> zeros{Poly{}, Poly{}};
    Fixture z = koszul_model(zeros, 4);
    CHECK(z.D.delta.matrix.is_zero_matrix());
    CHECK(z.D.validate_dgbv().all_pass());
}

TEST_CASE("bracket graded antisymmetry on a valid GBV structure")
{
    Fixture fx = bv_model(2, 4);
    const auto& D = fx.D;
    const std::size_t n = D.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            int s = ((D.algebra.basis.parity(i) + 1) * (D.algebra.basis.parity(j) + 1)) % 2
                        ? -1
                        : 1;
            CHECK(D.bracket_basis(i, j) == Rational(-s) * D.bracket_basis(j, i));
        }
}

TEST_CASE("mutating one structure constant breaks an axiom with a witness")
{
    Fixture fx = bv_model(2, 4);
    DGBVStructure broken = fx.D;
    GradedAlgebra alg = fx.D.algebra;
    // bump a1*a2 by +1 in the top slot
    const std::size_t i = alg.basis.index_of("a1");
    const std::size_t j = alg.basis.index_of("a2");
    SparseVec p = alg.basis_product(i, j);
    p.emplace_back(alg.basis.index_of("a1a2*v1"), Rational(1));
    alg.set_product(i, j, std::move(p));
    DGBVStructure mutated(std::move(alg), fx.D.delta, fx.D.Delta);
    auto rep = mutated.validate_dgbv();
    CHECK_FALSE(rep.all_pass());
    bool witnessed = false;
    for (const auto& ax : rep.axioms)
        if (!ax.pass && !ax.witness.empty())
            witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("q-condition on bv fixtures: verdicts agree and equalities hold")
{
    for (auto [n, m] : {std::pair{1, 3}, std::pair{2, 4}}) {
        Fixture fx = bv_model(n, m);
        auto q = fx.D.check_q_condition();
        CHECK(q.equalities_hold);
        CHECK(q.homology_iso);
        CHECK(q.verdicts_match);
        CHECK(q.h_harmonic == (n == 1 ? 2u : 4u));
        CHECK(q.h_amb_delta == q.h_harmonic);
        CHECK(q.h_sub_delta == q.h_harmonic);
    }
}

TEST_CASE("koszul fixture: valid DGBV whose quasi-isomorphism conditions fail consistently")
{
    std::vector<Poly> f{poly_monomial(2, {2, 0}), poly_monomial(2, {0, 2})};
    Fixture fx = koszul_model(f, 4);
    auto q = fx.D.check_q_condition();
    CHECK_FALSE(q.equalities_hold); // Im delta ^ Ker Delta = Im delta != 0 = Im deltaDelta
    CHECK_FALSE(q.homology_iso);
    CHECK(q.verdicts_match);
}

TEST_CASE("engineered 4-dimensional counterexample: anticommuting pair violating the equalities")
{
    // wedge module {a, u = δa, v = Δa} plus a dot
    Matrix d(4, 4), D(4, 4);
    d(1, 0) = 1;
    D(2, 0) = 1;
    auto q = check_q_condition_ops(d, D);
    CHECK_FALSE(q.equalities_hold);
    CHECK_FALSE(q.homology_iso);
    CHECK(q.verdicts_match);
    CHECK_FALSE(q.inclusion_delta_iso); // u is a boundary downstairs, not upstairs
}

TEST_CASE("subspace equalities match the homology verdicts on seeded random operator pairs")
{
    std::mt19937_64 rng(2024);
    int q_true = 0, q_false = 0;
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t dim = 4 + (rng() % 5);
        auto [d, D] = random_operator_pair(dim, rng);
        REQUIRE(d.compose(d).is_zero_matrix());
        REQUIRE(D.compose(D).is_zero_matrix());
        REQUIRE((d.compose(D) + D.compose(d)).is_zero_matrix());
        auto q = check_q_condition_ops(d, D);
        CHECK(q.verdicts_match);
        (q.equalities_hold ? q_true : q_false)++;
    }
    CHECK(q_true > 0);
    CHECK(q_false > 0);
}

TEST_CASE("decompose: harmonic input returns (z, 0, 0) under the deterministic rule")
{
    Fixture fx = bv_model(2, 4);
    auto H = cohomology_basis(fx.D);
    for (const Vec& rep : H.reps) {
        auto dec = fx.D.decompose(rep);
        CHECK(dec.h == rep);
        CHECK(is_zero(dec.u));
        CHECK(is_zero(dec.v));
    }
}

TEST_CASE("decompose: reassembly is exact on random deltaDelta-closed inputs")
{
    Fixture fx = bv_model(2, 4);
    const std::size_t n = fx.D.dim();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        Vec u(n), v(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = coeff(rng);
            v[i] = coeff(rng);
            w[i] = coeff(rng);
        }
        // harmonic + Δu + δv is always δΔ-closed
        auto H = cohomology_basis(fx.D);
        Vec z = fx.D.Delta.apply(u) + fx.D.delta.apply(v);
        add_scaled(z, Rational(coeff(rng)), H.reps[rng() % H.reps.size()]);
        auto dec = fx.D.decompose(z);
        Vec back = dec.h + fx.D.Delta.apply(dec.u) + fx.D.delta.apply(dec.v);
        CHECK(back == z);
        CHECK(is_zero(fx.D.delta.apply(dec.h)));
        CHECK(is_zero(fx.D.Delta.apply(dec.h)));
    }
}

TEST_CASE("decompose rejects inputs that are not deltaDelta-closed")
{
    Fixture fx = bv_model(2, 4);
    Vec w1 = unit_vec(fx.D.dim(), fx.D.algebra.basis.index_of("w1"));
    CHECK_THROWS_AS(fx.D.decompose(w1), std::invalid_argument);
}

TEST_CASE("cohomology basis: trivial structure recovers the algebra basis, unit first")
{
    Fixture fx = trivial_exterior(2);
    auto H = cohomology_basis(fx.D);
    CHECK(H.rank() == 4);
    CHECK(H.reps[0] == fx.D.algebra.unit_vector());
    CHECK(H.rank() == H.harmonic.dim() - H.im_dD.dim());
}

TEST_CASE("cohomology basis on bv(2,4): dimensions, projection, Euler characteristic")
{
    Fixture fx = bv_model(2, 4);
    auto H = cohomology_basis(fx.D);
    CHECK(H.rank() == 4);
    CHECK(H.reps[0] == fx.D.algebra.unit_vector());
    CHECK(H.rank() == H.harmonic.dim() - H.im_dD.dim());

    // P(e_i) = i-th coordinate vector
    for (std::size_t a = 0; a < H.rank(); ++a)
        CHECK(H.project(fx.D, H.reps[a]) == unit_vec(H.rank(), a));
    // P kills Im δΔ
    Vec w1 = unit_vec(fx.D.dim(), fx.D.algebra.basis.index_of("w1"));
    Vec junk = fx.D.delta.apply(fx.D.Delta.apply(w1));
    REQUIRE_FALSE(is_zero(junk));
    CHECK(H.project(fx.D, junk) == zero_vec(H.rank()));

    // Euler characteristic of H equals that of the algebra (δ-homology)
    std::map<long, long> adim, hdim;
    for (std::size_t i = 0; i < fx.D.dim(); ++i)
        adim[fx.D.algebra.basis.degrees[i]]++;
    for (std::size_t a = 0; a < H.rank(); ++a)
        hdim[H.degrees[a]]++;
    long chiA = 0, chiH = 0;
    for (auto [d, c] : adim)
        chiA += (d % 2 ? -c : c);
    for (auto [d, c] : hdim)
        chiH += (d % 2 ? -c : c);
    CHECK(chiA == chiH);
}

TEST_CASE("cohomology basis rejects acyclic structures")
{
    Fixture fx = acyclic_model(2);
    CHECK_THROWS_AS(cohomology_basis(fx.D), std::runtime_error);
    auto q = fx.D.check_q_condition();
    CHECK(q.equalities_hold);
    CHECK(q.h_harmonic == 0);
}

TEST_CASE("generator parameter guards")
{
    CHECK_THROWS_AS(bv_model(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(bv_model(2, 3), std::invalid_argument); // needs m >= n + 2
    CHECK_THROWS_AS(acyclic_model(3), std::invalid_argument);
    CHECK_THROWS_AS(acyclic_model(0), std::invalid_argument);
    CHECK_THROWS_AS(trivial_exterior(0), std::invalid_argument);
    CHECK_THROWS_AS(koszul_model({}, 3), std::invalid_argument);
}

TEST_CASE("image of Delta matches the independent rank oracle")
{
    Fixture fx = bv_model(2, 4);
    CHECK(image(fx.D.Delta.matrix).dim() == rank_bareiss(fx.D.Delta.matrix));
    CHECK(image(fx.D.delta.matrix).dim() == rank_bareiss(fx.D.delta.matrix));
}
