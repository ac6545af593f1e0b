#pragma once

#include "dgbv/algebra.hpp"

#include <memory>
#include <optional>

namespace dgbv {

/// Subspace reports for the two equality chains of the quasi-isomorphism
/// criterion, plus the homology dimensions computed independently.
struct QConditionReport {
    Subspace im_dD;        // Im δΔ
    Subspace im_Dd;        // Im Δδ
    Subspace im_d_cap_kD;  // Im δ ∩ Ker Δ
    Subspace im_D_cap_kd;  // Im Δ ∩ Ker δ
    Subspace harmonic;     // Ker δ ∩ Ker Δ
    bool equalities_hold = false;

    std::size_t h_sub_delta = 0;  // dim H(Ker Δ, δ)
    std::size_t h_amb_delta = 0;  // dim H(A, δ)
    std::size_t h_sub_Delta = 0;  // dim H(Ker δ, Δ)
    std::size_t h_amb_Delta = 0;  // dim H(A, Δ)
    std::size_t h_harmonic = 0;   // dim (Ker δ ∩ Ker Δ)/Im δΔ
    bool inclusion_delta_iso = false;
    bool inclusion_Delta_iso = false;
    bool homology_iso = false; // both inclusions induce isomorphisms
    bool verdicts_match = false;
};

/// Raw form of the quasi-isomorphism check: pure linear algebra on an
/// operator pair with δ² = Δ² = δΔ + Δδ = 0.
inline QConditionReport check_q_condition_ops(const Matrix& delta, const Matrix& Delta)
{
    QConditionReport q;
    const Matrix dD = delta.compose(Delta);
    const Matrix Dd = Delta.compose(delta);
    const Subspace ker_d = kernel(delta);
    const Subspace ker_D = kernel(Delta);
    const Subspace im_d = image(delta);
    const Subspace im_D = image(Delta);
    q.im_dD = image(dD);
    q.im_Dd = image(Dd);
    q.im_d_cap_kD = subspace_intersection(im_d, ker_D);
    q.im_D_cap_kd = subspace_intersection(im_D, ker_d);
    q.harmonic = subspace_intersection(ker_d, ker_D);
    q.equalities_hold = q.im_dD == q.im_Dd && q.im_dD == q.im_d_cap_kD &&
                        q.im_dD == q.im_D_cap_kd;

    // Homology of the inclusions (Ker Δ, δ) ⊂ (A, δ) and (Ker δ, Δ) ⊂ (A, Δ),
    // computed exactly: cycles/boundaries of each complex as subspaces.
    auto restricted_image = [](const Matrix& op, const Subspace& sub) {
        std::vector<Vec> gens;
        for (const Vec& v : sub.basis())
            gens.push_back(op.apply(v));
        return Subspace::span(op.rows(), gens);
    };
    const Subspace z_sub_d = q.harmonic;              // Ker δ ∩ Ker Δ
    const Subspace b_sub_d = restricted_image(delta, ker_D);
    const Subspace z_amb_d = ker_d;
    const Subspace b_amb_d = im_d;
    const Subspace z_sub_D = q.harmonic;
    const Subspace b_sub_D = restricted_image(Delta, ker_d);
    const Subspace z_amb_D = ker_D;
    const Subspace b_amb_D = im_D;

    q.h_sub_delta = z_sub_d.dim() - b_sub_d.dim();
    q.h_amb_delta = z_amb_d.dim() - b_amb_d.dim();
    q.h_sub_Delta = z_sub_D.dim() - b_sub_D.dim();
    q.h_amb_Delta = z_amb_D.dim() - b_amb_D.dim();
    q.h_harmonic = q.harmonic.dim() - q.im_dD.dim();

    // i_* injective  <=>  Z_sub ∩ B_amb ⊆ B_sub ; surjective <=> Z_amb ⊆ Z_sub + B_amb.
    auto inclusion_iso = [](const Subspace& z_sub, const Subspace& b_sub,
                            const Subspace& z_amb, const Subspace& b_amb) {
        const bool inj = b_sub.contains_subspace(subspace_intersection(z_sub, b_amb));
        const bool surj = subspace_sum(z_sub, b_amb).contains_subspace(z_amb);
        return inj && surj;
    };
    q.inclusion_delta_iso = inclusion_iso(z_sub_d, b_sub_d, z_amb_d, b_amb_d);
    q.inclusion_Delta_iso = inclusion_iso(z_sub_D, b_sub_D, z_amb_D, b_amb_D);
    q.homology_iso = q.inclusion_delta_iso && q.inclusion_Delta_iso;
    q.verdicts_match = (q.homology_iso == q.equalities_hold);
    return q;
}

/// Graded commutative algebra with odd operators δ (a derivation) and Δ
/// (the BV operator), their derived bracket, and exact validation.
class DGBVStructure {
public:
    GradedAlgebra algebra;
    LinearOperator delta;  // differential δ
    LinearOperator Delta;  // BV operator Δ

    DGBVStructure() = default;
    DGBVStructure(GradedAlgebra a, LinearOperator d, LinearOperator D)
        : algebra(std::move(a)), delta(std::move(d)), Delta(std::move(D))
    {
        build_bracket_table();
    }

    std::size_t dim() const { return algebra.dim(); }

    /// Derived bracket on basis elements; bilinear extension to vectors.
    const SparseVec& bracket_table(std::size_t i, std::size_t j) const
    {
        return bracket_[i][j];
    }

    Vec derived_bracket(const Vec& x, const Vec& y) const
    {
        const std::size_t n = dim();
        if (x.size() != n || y.size() != n)
            throw std::invalid_argument("derived_bracket: dimension mismatch");
        Vec out(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (y[j] == 0)
                    continue;
                const Rational c = x[i] * y[j];
                for (const auto& [k, s] : bracket_[i][j])
                    out[k] += c * s;
            }
        }
        return out;
    }

    Vec bracket_basis(std::size_t i, std::size_t j) const
    {
        return to_dense(bracket_[i][j], dim());
    }

    Vec bracket_sparse(const SparseVec& x, const SparseVec& y) const
    {
        Vec out(dim(), Rational(0));
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) {
                const Rational c = a * b;
                for (const auto& [k, s] : bracket_[i][j])
                    out[k] += c * s;
            }
        return out;
    }

    /// GBV axioms: Δ well-formed and odd, Δ² = 0, the second-order condition
    /// on the bracket, plus the three derived identities as redundant checks.
    ValidationReport validate_gbv() const
    {
        ValidationReport rep = algebra.validate();
        const std::size_t n = dim();
        const auto& b = algebra.basis;

        AxiomResult shape{"Delta-well-formed-odd"};
        std::string w;
        if (Delta.degree_shift % 2 == 0)
            shape.fail("Delta degree shift is even");
        else if (!Delta.well_formed(b, &w))
            shape.fail(w);
        rep.axioms.push_back(shape);

        AxiomResult sq{"Delta-squared-zero"};
        if (!Delta.matrix.compose(Delta.matrix).is_zero_matrix())
            sq.fail("Delta^2 != 0");
        rep.axioms.push_back(sq);

        AxiomResult second{"bracket-second-order"};
        for (std::size_t i = 0; i < n && second.pass; ++i) {
            const SparseVec ei{{i, Rational(1)}};
            for (std::size_t j = 0; j < n && second.pass; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (algebra.basis_product(j, k).empty() && bracket_[i][j].empty() &&
                        bracket_[i][k].empty())
                        continue;
                    // [b_i . (b_j ∧ b_k)] = [b_i . b_j] ∧ b_k
                    //                       + (-1)^{(|b_i|-1)|b_j|} b_j ∧ [b_i . b_k]
                    Vec lhs = bracket_sparse(ei, algebra.basis_product(j, k));
                    Vec rhs = algebra.multiply_sparse(bracket_[i][j],
                                                      SparseVec{{k, Rational(1)}});
                    int sign = ((b.parity(i) + 1) * b.parity(j)) % 2 ? -1 : 1;
                    add_scaled(rhs, Rational(sign),
                               algebra.multiply_sparse(SparseVec{{j, Rational(1)}},
                                                       bracket_[i][k]));
                    if (!(lhs == rhs)) {
                        second.fail("(" + b.labels[i] + ", " + b.labels[j] + ", " +
                                    b.labels[k] + ")");
                        break;
                    }
                }
        }
        rep.axioms.push_back(second);

        AxiomResult anti{"bracket-antisymmetry"};
        for (std::size_t i = 0; i < n && anti.pass; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                int sign = ((b.parity(i) + 1) * (b.parity(j) + 1)) % 2 ? -1 : 1;
                Vec rhs = Rational(-sign) * bracket_basis(j, i);
                if (!(bracket_basis(i, j) == rhs)) {
                    anti.fail("(" + b.labels[i] + ", " + b.labels[j] + ")");
                    break;
                }
            }
        rep.axioms.push_back(anti);

        AxiomResult jac{"bracket-jacobi"};
        for (std::size_t i = 0; i < n && jac.pass; ++i) {
            const SparseVec ei{{i, Rational(1)}};
            for (std::size_t j = 0; j < n && jac.pass; ++j) {
                const SparseVec ej{{j, Rational(1)}};
                for (std::size_t k = 0; k < n; ++k) {
                    if (bracket_[j][k].empty() && bracket_[i][j].empty() &&
                        bracket_[i][k].empty())
                        continue;
                    Vec lhs = bracket_sparse(ei, bracket_[j][k]);
                    Vec rhs = bracket_sparse(bracket_[i][j], SparseVec{{k, Rational(1)}});
                    int sign = ((b.parity(i) + 1) * (b.parity(j) + 1)) % 2 ? -1 : 1;
                    add_scaled(rhs, Rational(sign), bracket_sparse(ej, bracket_[i][k]));
                    if (!(lhs == rhs)) {
                        jac.fail("(" + b.labels[i] + ", " + b.labels[j] + ", " +
                                 b.labels[k] + ")");
                        break;
                    }
                }
            }
        }
        rep.axioms.push_back(jac);

        AxiomResult leib{"Delta-bracket-leibniz"};
        for (std::size_t i = 0; i < n && leib.pass; ++i) {
            const SparseVec ei{{i, Rational(1)}};
            const SparseVec Di = sparse_col(Delta.matrix, i);
            for (std::size_t j = 0; j < n; ++j) {
                Vec lhs = apply_sparse(Delta.matrix, bracket_[i][j]);
                Vec rhs = bracket_sparse(Di, SparseVec{{j, Rational(1)}});
                int sign = (b.parity(i) + 1) % 2 ? -1 : 1;
                add_scaled(rhs, Rational(sign),
                           bracket_sparse(ei, sparse_col(Delta.matrix, j)));
                if (!(lhs == rhs)) {
                    leib.fail("(" + b.labels[i] + ", " + b.labels[j] + ")");
                    break;
                }
            }
        }
        rep.axioms.push_back(leib);
        return rep;
    }

    /// Full DGBV validation: GBV axioms plus δ² = 0, δΔ + Δδ = 0, the
    /// δ-derivation law and the δ-Leibniz rule for the bracket.
    ValidationReport validate_dgbv() const
    {
        ValidationReport rep = validate_gbv();
        const std::size_t n = dim();
        const auto& b = algebra.basis;

        AxiomResult shape{"delta-well-formed-odd"};
        std::string w;
        if (delta.degree_shift % 2 == 0)
            shape.fail("delta degree shift is even");
        else if (!delta.well_formed(b, &w))
            shape.fail(w);
        rep.axioms.push_back(shape);

        AxiomResult sq{"delta-squared-zero"};
        if (!delta.matrix.compose(delta.matrix).is_zero_matrix())
            sq.fail("delta^2 != 0");
        rep.axioms.push_back(sq);

        AxiomResult acm{"delta-Delta-anticommute"};
        if (!(delta.matrix.compose(Delta.matrix) + Delta.matrix.compose(delta.matrix))
                 .is_zero_matrix())
            acm.fail("delta Delta + Delta delta != 0");
        rep.axioms.push_back(acm);

        AxiomResult der{"delta-derivation"};
        for (std::size_t i = 0; i < n && der.pass; ++i) {
            const SparseVec di = sparse_col(delta.matrix, i);
            for (std::size_t j = 0; j < n; ++j) {
                Vec lhs = apply_sparse(delta.matrix, algebra.basis_product(i, j));
                Vec rhs = algebra.multiply_sparse(di, SparseVec{{j, Rational(1)}});
                int sign = b.parity(i) ? -1 : 1;
                add_scaled(rhs, Rational(sign),
                           algebra.multiply_sparse(SparseVec{{i, Rational(1)}},
                                                   sparse_col(delta.matrix, j)));
                if (!(lhs == rhs)) {
                    der.fail("(" + b.labels[i] + ", " + b.labels[j] + ")");
                    break;
                }
            }
        }
        rep.axioms.push_back(der);

        AxiomResult leib{"delta-bracket-leibniz"};
        for (std::size_t i = 0; i < n && leib.pass; ++i) {
            const SparseVec ei{{i, Rational(1)}};
            const SparseVec di = sparse_col(delta.matrix, i);
            for (std::size_t j = 0; j < n; ++j) {
                Vec lhs = apply_sparse(delta.matrix, bracket_[i][j]);
                Vec rhs = bracket_sparse(di, SparseVec{{j, Rational(1)}});
                int sign = (b.parity(i) + 1) % 2 ? -1 : 1;
                add_scaled(rhs, Rational(sign),
                           bracket_sparse(ei, sparse_col(delta.matrix, j)));
                if (!(lhs == rhs)) {
                    leib.fail("(" + b.labels[i] + ", " + b.labels[j] + ")");
                    break;
                }
            }
        }
        rep.axioms.push_back(leib);
        return rep;
    }

    QConditionReport check_q_condition() const
    {
        return check_q_condition_ops(delta.matrix, Delta.matrix);
    }

    /// Splits a δΔ-closed element as z = h + Δu + δv with h harmonic,
    /// following the two linear solves of the underlying proof.
    struct Decomposition {
        Vec h, u, v;
    };

    Decomposition decompose(const Vec& z) const
    {
        const std::size_t n = dim();
        const Matrix dD = delta.matrix.compose(Delta.matrix);
        const Matrix Dd = Delta.matrix.compose(delta.matrix);
        Vec resid = dD.apply(z);
        if (!is_zero(resid))
            throw std::invalid_argument("decompose: input is not deltaDelta-closed, residual " +
                                        algebra.format_element(resid));
        // Δz ∈ Ker δ ∩ Im Δ = Im Δδ, so Δz = Δδ v for some v.
        auto v = solve_linear(Dd, Delta.apply(z));
        if (!v)
            throw std::runtime_error("decompose: could not solve Delta z = Delta delta v "
                                     "(quasi-isomorphism conditions violated)");
        Vec r = z - delta.apply(*v); // Δr = 0
        // r = h + Δu with h in Ker δ ∩ Ker Δ: joint solve over [harmonics | Δ].
        const Subspace harm =
            subspace_intersection(kernel(delta.matrix), kernel(Delta.matrix));
        const std::size_t hs = harm.dim();
        Matrix joint(n, hs + n);
        for (std::size_t c = 0; c < hs; ++c)
            for (std::size_t rr = 0; rr < n; ++rr)
                joint(rr, c) = harm.basis()[c][rr];
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t rr = 0; rr < n; ++rr)
                joint(rr, hs + c) = Delta.matrix(rr, c);
        auto sol = solve_linear(joint, r);
        if (!sol)
            throw std::runtime_error("decompose: harmonic split failed "
                                     "(quasi-isomorphism conditions violated)");
        Vec h = zero_vec(n), u(sol->begin() + hs, sol->end());
        for (std::size_t c = 0; c < hs; ++c)
            if (!((*sol)[c] == 0))
                add_scaled(h, (*sol)[c], harm.basis()[c]);
        Vec check = h + Delta.apply(u) + delta.apply(*v);
        if (!(check == z))
            throw std::runtime_error("decompose: reassembly failed");
        return Decomposition{std::move(h), std::move(u), std::move(*v)};
    }

private:
    std::vector<std::vector<SparseVec>> bracket_;

    void build_bracket_table()
    {
        const std::size_t n = dim();
        bracket_.assign(n, std::vector<SparseVec>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const int pi = algebra.basis.parity(i);
            const Rational outer(pi ? -1 : 1);
            const SparseVec Di = sparse_col(Delta.matrix, i);
            for (std::size_t j = 0; j < n; ++j) {
                // (-1)^{|a|} (Δ(a∧b) - (Δa)∧b - (-1)^{|a|} a∧Δb)
                Vec t = apply_sparse(Delta.matrix, algebra.basis_product(i, j));
                add_scaled(t, Rational(-1),
                           algebra.multiply_sparse(Di, SparseVec{{j, Rational(1)}}));
                add_scaled(t, Rational(pi ? 1 : -1),
                           algebra.multiply_sparse(SparseVec{{i, Rational(1)}},
                                                   sparse_col(Delta.matrix, j)));
                bracket_[i][j] = to_sparse(outer * t);
            }
        }
    }
};

/// Harmonic cohomology basis: representatives in Ker δ ∩ Ker Δ with the unit
/// class first, plus projection to class coordinates.
class CohomologyBasis {
public:
    std::vector<Vec> reps;      // reps[0] = algebra unit
    std::vector<long> degrees;  // degree of each class
    Subspace harmonic;          // Ker δ ∩ Ker Δ
    Subspace im_dD;             // Im δΔ

    std::size_t rank() const { return reps.size(); }
    int parity(std::size_t a) const { return parity_of_degree(degrees[a]); }

    /// Class coordinates of a δ-closed element (projection along Im δ).
    /// Throws if the element is not δ-closed.
    Vec project(const DGBVStructure& D, const Vec& x) const
    {
        const std::size_t n = D.dim();
        if (!is_zero(D.delta.apply(x)))
            throw std::invalid_argument("project: element is not delta-closed");
        const std::size_t h = reps.size();
        Matrix joint(n, h + n);
        for (std::size_t c = 0; c < h; ++c)
            for (std::size_t r = 0; r < n; ++r)
                joint(r, c) = reps[c][r];
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r)
                joint(r, h + c) = D.delta.matrix(r, c);
        auto sol = solve_linear(joint, x);
        if (!sol)
            throw std::runtime_error("project: element is not a combination of "
                                     "class representatives modulo Im delta");
        return Vec(sol->begin(), sol->begin() + h);
    }

    Vec representative_combination(const Vec& coords) const
    {
        Vec out = zero_vec(reps.empty() ? 0 : reps[0].size());
        for (std::size_t a = 0; a < reps.size(); ++a)
            if (!(coords[a] == 0))
                add_scaled(out, coords[a], reps[a]);
        return out;
    }
};

/// Deterministic harmonic basis of H = (Ker δ ∩ Ker Δ)/Im δΔ with e_0 = 1.
inline CohomologyBasis cohomology_basis(const DGBVStructure& D)
{
    const std::size_t n = D.dim();
    CohomologyBasis out;
    out.harmonic = subspace_intersection(kernel(D.delta.matrix), kernel(D.Delta.matrix));
    out.im_dD = image(D.delta.matrix.compose(D.Delta.matrix));

    const Vec one = D.algebra.unit_vector();
    if (!out.harmonic.contains(one))
        throw std::runtime_error("cohomology_basis: unit is not harmonic");
    if (out.im_dD.contains(one))
        throw std::runtime_error("cohomology_basis: unit class vanishes "
                                 "(1 lies in Im deltaDelta), no unital structure");
    // Greedy extension of Im δΔ ∪ {1} to a basis of the harmonic space,
    // scanning its RREF rows in order (deterministic).
    std::vector<Vec> chosen = {one};
    auto spanned = [&]() {
        std::vector<Vec> gens = out.im_dD.basis();
        gens.insert(gens.end(), chosen.begin(), chosen.end());
        return Subspace::span(n, gens);
    };
    Subspace cur = spanned();
    for (const Vec& row : out.harmonic.basis()) {
        if (cur.contains(row))
            continue;
        chosen.push_back(row);
        cur = spanned();
    }
    if (cur.dim() != out.im_dD.dim() + chosen.size())
        throw std::runtime_error("cohomology_basis: complement construction failed");
    auto degree_of = [&](const Vec& r) {
        long deg = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i)
            if (!(r[i] == 0)) {
                if (found && D.algebra.basis.degrees[i] != deg)
                    throw std::runtime_error("cohomology_basis: inhomogeneous representative");
                deg = D.algebra.basis.degrees[i];
                found = true;
            }
        return deg;
    };
    // unit first, the rest by ascending degree (stable in scan order)
    std::stable_sort(chosen.begin() + 1, chosen.end(),
                     [&](const Vec& a, const Vec& b) { return degree_of(a) < degree_of(b); });
    out.reps = std::move(chosen);
    for (const Vec& r : out.reps)
        out.degrees.push_back(degree_of(r));
    if (out.reps.empty())
        throw std::runtime_error("cohomology_basis: zero cohomology");
    return out;
}

} // namespace dgbv
