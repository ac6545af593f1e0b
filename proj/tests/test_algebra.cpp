#include "dgbv/constructors.hpp"
#include "dgbv/examples.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dgbv;

namespace {

// Independent sign oracle: transposition count when sorting the
// concatenation of two ascending index sets.
int sort_sign(std::vector<int> v)
{
    int swaps = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[j] < v[i])
                ++swaps;
    return swaps % 2 ? -1 : 1;
}

} // namespace

TEST_CASE("exterior algebra validates and multiplies with correct signs")
{
    Fixture fx = trivial_exterior(2);
    const auto& A = fx.D.algebra;
    CHECK(A.dim() == 4);
    CHECK(A.validate().all_pass());

    const std::size_t t1 = A.basis.index_of("t1");
    const std::size_t t2 = A.basis.index_of("t2");
    const std::size_t t12 = A.basis.index_of("t1t2");
    Vec p = A.multiply(unit_vec(4, t1), unit_vec(4, t2));
    CHECK(p == unit_vec(4, t12));
    Vec q = A.multiply(unit_vec(4, t2), unit_vec(4, t1));
    CHECK(q == Rational(-1) * unit_vec(4, t12));
    CHECK(Rational(sort_sign({2, 1})) == Rational(-1));
    CHECK(A.multiply(unit_vec(4, t1), unit_vec(4, t1)) == zero_vec(4));
}

TEST_CASE("unit law and graded commutativity as vector identities")
{
    Fixture fx = trivial_exterior(3);
    const auto& A = fx.D.algebra;
    Vec y = zero_vec(A.dim());
    y[1] = Rational(3, 2);
    y[6] = Rational(-1, 5);
    CHECK(A.multiply(A.unit_vector(), y) == y);
    // homogeneous x, y: x y = (-1)^{|x||y|} y x
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
            Vec xy = A.multiply(unit_vec(A.dim(), i), unit_vec(A.dim(), j));
            Vec yx = A.multiply(unit_vec(A.dim(), j), unit_vec(A.dim(), i));
            int s = (A.basis.parity(i) * A.basis.parity(j)) % 2 ? -1 : 1;
            CHECK(xy == Rational(s) * yx);
        }
}

TEST_CASE("multiply rejects dimension mismatch")
{
    Fixture fx = trivial_exterior(2);
    CHECK_THROWS_AS(fx.D.algebra.multiply(zero_vec(3), zero_vec(4)),
                    std::invalid_argument);
}

TEST_CASE("validator catches broken structures with witnesses")
{
    Fixture fx = trivial_exterior(2);
    GradedAlgebra broken = fx.D.algebra;
    // t1*t2 := t1t2 + one breaks degree additivity (and more)
    broken.set_product(1, 2, SparseVec{{3, Rational(1)}, {0, Rational(1)}});
    auto rep = broken.validate();
    CHECK_FALSE(rep.all_pass());
    const auto* deg = rep.find("degree-additivity");
    REQUIRE(deg != nullptr);
    CHECK_FALSE(deg->pass);
    CHECK_FALSE(deg->witness.empty());
}

TEST_CASE("duplicate labels and empty basis rejected")
{
    GradedBasis b;
    CHECK_THROWS_AS(b.check(), std::invalid_argument);
    b.labels = {"x", "x"};
    b.degrees = {0, 1};
    CHECK_THROWS_AS(b.check(), std::invalid_argument);
}

TEST_CASE("direct sum dimensions add and validator passes")
{
    Fixture a = trivial_exterior(1);
    Fixture b = trivial_exterior(2);
    DGBVStructure s = direct_sum(a.D, b.D);
    CHECK(s.dim() == a.D.dim() + b.D.dim());
    CHECK(s.validate_dgbv().all_pass());
    // unit really is the identity for everything
    for (std::size_t i = 0; i < s.dim(); ++i)
        CHECK(s.algebra.multiply(s.algebra.unit_vector(), unit_vec(s.dim(), i)) ==
              unit_vec(s.dim(), i));
}

TEST_CASE("tensor with the one-dimensional trivial algebra is an isomorphic copy")
{
    GradedBasis unit_basis;
    unit_basis.labels = {"one"};
    unit_basis.degrees = {0};
    GradedAlgebra k(unit_basis, 0);
    k.set_product(0, 0, SparseVec{{0, Rational(1)}});
    DGBVStructure kk = trivial_structure(k);

    Fixture b = trivial_exterior(2);
    DGBVStructure t = tensor_product(b.D, kk);
    CHECK(t.dim() == b.D.dim());
    CHECK(t.validate_dgbv().all_pass());
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            CHECK(to_dense(t.algebra.basis_product(i, j), t.dim()) ==
                  to_dense(b.D.algebra.basis_product(i, j), b.D.dim()));
}

TEST_CASE("tensor product of validated structures passes the full validator")
{
    Fixture a = trivial_exterior(1);
    Fixture b = bv_model(1, 3);
    DGBVStructure t = tensor_product(b.D, a.D);
    CHECK(t.dim() == 20);
    CHECK(t.validate_dgbv().all_pass());
    // q-conditions survive the tensor as well
    CHECK(t.check_q_condition().equalities_hold);
    CHECK(t.check_q_condition().verdicts_match);
}

TEST_CASE("direct sum preserves validator success on nontrivial summands")
{
    Fixture a = bv_model(1, 3);
    Fixture c = acyclic_model(2);
    DGBVStructure s = direct_sum(a.D, c.D);
    CHECK(s.validate_dgbv().all_pass());
    CHECK(s.check_q_condition().equalities_hold);
}
