#pragma once

#include "dgbv/gauge.hpp"

namespace dgbv {

/// Degree-0 linear map intertwining products, units and both operators.
struct DGBVMorphism {
    const DGBVStructure* source = nullptr;
    const DGBVStructure* target = nullptr;
    Matrix matrix; // target-dim x source-dim

    Vec apply(const Vec& x) const { return matrix.apply(x); }

    AlgSeries apply(const AlgSeries& f) const
    {
        AlgSeries out(f.spec);
        for (const auto& [m, c] : f.terms)
            out.add_term(m, matrix.apply(c));
        return out;
    }
};

inline DGBVMorphism identity_morphism(const DGBVStructure& D)
{
    return DGBVMorphism{&D, &D, Matrix::identity(D.dim())};
}

/// For a direct sum built as direct_sum(A, B): the canonical inclusion of A
/// (unit to unit, basis to the left block).
inline DGBVMorphism sum_inclusion(const DGBVStructure& A, const DGBVStructure& sum)
{
    Matrix m(sum.dim(), A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i)
        m(i, i) = 1;
    return DGBVMorphism{&A, &sum, std::move(m)};
}

inline ValidationReport validate_morphism(const DGBVMorphism& f)
{
    ValidationReport rep;
    const auto& S = *f.source;
    const auto& T = *f.target;
    const std::size_t ns = S.dim();

    AxiomResult shape{"morphism-degree-zero"};
    for (std::size_t j = 0; j < ns && shape.pass; ++j)
        for (std::size_t i = 0; i < T.dim(); ++i)
            if (!(f.matrix(i, j) == 0) &&
                T.algebra.basis.degrees[i] != S.algebra.basis.degrees[j]) {
                shape.fail(S.algebra.basis.labels[j] + " -> " + T.algebra.basis.labels[i]);
                break;
            }
    rep.axioms.push_back(shape);

    AxiomResult unit{"morphism-unit"};
    if (!(f.apply(S.algebra.unit_vector()) == T.algebra.unit_vector()))
        unit.fail("f(1) != 1");
    rep.axioms.push_back(unit);

    AxiomResult ring{"morphism-ring-map"};
    for (std::size_t i = 0; i < ns && ring.pass; ++i)
        for (std::size_t j = 0; j < ns; ++j) {
            Vec lhs = f.apply(to_dense(S.algebra.basis_product(i, j), ns));
            Vec rhs = T.algebra.multiply(f.matrix.col(i), f.matrix.col(j));
            if (!(lhs == rhs)) {
                ring.fail("(" + S.algebra.basis.labels[i] + ", " +
                          S.algebra.basis.labels[j] + ")");
                break;
            }
        }
    rep.axioms.push_back(ring);

    AxiomResult chain_d{"morphism-intertwines-delta"};
    if (!(f.matrix.compose(S.delta.matrix) + (-T.delta.matrix.compose(f.matrix)))
             .is_zero_matrix())
        chain_d.fail("f delta != delta f");
    rep.axioms.push_back(chain_d);

    AxiomResult chain_D{"morphism-intertwines-Delta"};
    if (!(f.matrix.compose(S.Delta.matrix) + (-T.Delta.matrix.compose(f.matrix)))
             .is_zero_matrix())
        chain_D.fail("f Delta != Delta f");
    rep.axioms.push_back(chain_D);

    AxiomResult br{"morphism-preserves-bracket"};
    for (std::size_t i = 0; i < ns && br.pass; ++i)
        for (std::size_t j = 0; j < ns; ++j) {
            Vec lhs = f.apply(S.bracket_basis(i, j));
            Vec rhs = T.derived_bracket(f.matrix.col(i), f.matrix.col(j));
            if (!(lhs == rhs)) {
                br.fail("(" + S.algebra.basis.labels[i] + ", " +
                        S.algebra.basis.labels[j] + ")");
                break;
            }
        }
    rep.axioms.push_back(br);
    return rep;
}

/// Induced map on harmonic cohomology bases, with an exact inverse when it
/// is an isomorphism.
struct QuasiIsoCertificate {
    Matrix induced;          // target-rank x source-rank
    bool well_defined = false;
    bool invertible = false;
    Matrix inverse;
};

inline QuasiIsoCertificate induced_map(const DGBVMorphism& f, const CohomologyBasis& Hs,
                                       const CohomologyBasis& Ht)
{
    QuasiIsoCertificate cert;
    const auto& T = *f.target;
    // chain-map sanity: representatives stay harmonic and δΔ-junk stays junk
    cert.well_defined = true;
    for (const Vec& r : Hs.reps) {
        Vec fr = f.apply(r);
        if (!is_zero(T.delta.apply(fr)) || !is_zero(T.Delta.apply(fr)))
            cert.well_defined = false;
    }
    for (const Vec& b : Hs.im_dD.basis())
        if (!Ht.im_dD.contains(f.apply(b)))
            cert.well_defined = false;
    if (!cert.well_defined)
        return cert;

    cert.induced = Matrix(Ht.rank(), Hs.rank());
    for (std::size_t a = 0; a < Hs.rank(); ++a) {
        Vec coords = Ht.project(T, f.apply(Hs.reps[a]));
        for (std::size_t k = 0; k < Ht.rank(); ++k)
            cert.induced(k, a) = coords[k];
    }
    if (Ht.rank() == Hs.rank()) {
        const std::size_t r = Hs.rank();
        Matrix aug(r, 2 * r);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j)
                aug(i, j) = cert.induced(i, j);
            aug(i, r + i) = 1;
        }
        auto pivots = rref_in_place(aug);
        cert.invertible = pivots.size() == r &&
                          std::all_of(pivots.begin(), pivots.end(),
                                      [r](std::size_t p) { return p < r; });
        if (cert.invertible) {
            cert.inverse = Matrix(r, r);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    cert.inverse(i, j) = aug(i, r + j);
        }
    }
    return cert;
}

struct FunctorialityReport {
    bool pushed_solution_normalized = false;
    bool products_agree = false;
    std::vector<std::string> witnesses;
};

/// Pushes a one-parameter solution downstream and compares the deformed
/// products through the induced map on classes.
inline FunctorialityReport check_functoriality(const DGBVMorphism& f,
                                               const CohomologyBasis& Hs,
                                               const CohomologyBasis& Ht,
                                               std::size_t class_index, int order)
{
    FunctorialityReport rep;
    const auto& S = *f.source;
    const auto& T = *f.target;
    MCSolution up = solve_mc_one_param(S, Hs, class_index, order);

    // f(x(t)) is again a normalized solution downstream; verify loudly
    MCSolution down{MCSolution::Kind::one_param, f.apply(up.gamma), f.apply(up.gamma1),
                    f.apply(up.B)};
    AlgSeries resid = apply_operator(T.delta, down.gamma);
    resid.axpy(Rational(1, 2), bracket_series(T, down.gamma, down.gamma));
    rep.pushed_solution_normalized = resid.is_zero_series();
    const Subspace harmT =
        subspace_intersection(kernel(T.delta.matrix), kernel(T.Delta.matrix));
    const Subspace imDT = image(T.Delta.matrix);
    for (const auto& [m, c] : down.gamma.terms) {
        if (mono_degree(m) <= 1 && !harmT.contains(c))
            rep.pushed_solution_normalized = false;
        if (mono_degree(m) > 1 && !imDT.contains(c))
            rep.pushed_solution_normalized = false;
    }
    if (!rep.pushed_solution_normalized) {
        rep.witnesses.push_back("pushed solution fails downstream normalization");
        return rep;
    }

    QuasiIsoCertificate cert = induced_map(f, Hs, Ht);
    ExtensionMap phi_up = extension_map(S, Hs, up);
    ExtensionMap phi_down = extension_map(T, Ht, down);

    rep.products_agree = true;
    for (std::size_t a = 0; a < Hs.rank(); ++a)
        for (std::size_t b = 0; b < Hs.rank(); ++b) {
            auto up_coords = deformed_product(S, Hs, up, phi_up, a, b);
            // f_*(α ∧_x β): push the coordinate series through the induced map
            std::vector<ScalarSeries> lhs(Ht.rank(), ScalarSeries(up.gamma.spec));
            for (std::size_t k = 0; k < Ht.rank(); ++k)
                for (std::size_t c = 0; c < Hs.rank(); ++c)
                    if (!(cert.induced(k, c) == 0))
                        lhs[k].axpy(cert.induced(k, c), up_coords[c]);
            // (f_*α) ∧_{f(x)} (f_*β): multiply the pushed lifts downstream
            AlgSeries la(up.gamma.spec), lb(up.gamma.spec);
            for (std::size_t k = 0; k < Ht.rank(); ++k) {
                if (!(cert.induced(k, a) == 0))
                    la.axpy(cert.induced(k, a), phi_down.lifts[k]);
                if (!(cert.induced(k, b) == 0))
                    lb.axpy(cert.induced(k, b), phi_down.lifts[k]);
            }
            auto rhs = phi_inverse(T, Ht, down, phi_down,
                                   series_multiply(T.algebra, la, lb))
                           .coords;
            for (std::size_t k = 0; k < Ht.rank(); ++k)
                if (!(lhs[k] - rhs[k]).is_zero_series()) {
                    rep.products_agree = false;
                    rep.witnesses.push_back("classes (" + std::to_string(a) + ", " +
                                            std::to_string(b) + ") coordinate " +
                                            std::to_string(k));
                }
        }
    return rep;
}

struct IdentifyReport {
    bool quasi_iso = false;
    bool integrals_compatible = false;
    Vec integral_discrepancy;   // ∫_T f(b_i) - ∫_S b_i per source basis element
    bool pushed_universal = false;
    bool gram_matches = false;
    bool potentials_equal = false;
    ScalarSeries phi_source;
    ScalarSeries phi_target;
};

/// Pushes the source universal solution through a quasi-isomorphism and
/// compares the Frobenius data under the coordinate identification induced
/// by f_* (source classes to their images).
inline IdentifyReport identify_frobenius(const DGBVMorphism& f, const CohomologyBasis& Hs,
                                         const CohomologyBasis& Ht, const Vec& int_src,
                                         const Vec& int_tgt, int order)
{
    IdentifyReport rep;
    const auto& S = *f.source;
    const auto& T = *f.target;

    QuasiIsoCertificate cert = induced_map(f, Hs, Ht);
    rep.quasi_iso = cert.well_defined && cert.invertible;

    rep.integral_discrepancy = zero_vec(S.dim());
    rep.integrals_compatible = true;
    for (std::size_t i = 0; i < S.dim(); ++i) {
        Rational lhs = integral_value(int_tgt, f.matrix.col(i));
        rep.integral_discrepancy[i] = lhs - int_src[i];
        if (!(rep.integral_discrepancy[i] == 0))
            rep.integrals_compatible = false;
    }

    MCSolution up = solve_mc_universal(S, Hs, order);
    MCSolution down{MCSolution::Kind::universal, f.apply(up.gamma), f.apply(up.gamma1),
                    f.apply(up.B)};

    // downstream universal normalization for the pushed basis f(x_α)
    AlgSeries resid = apply_operator(T.delta, down.gamma);
    resid.axpy(Rational(1, 2), bracket_series(T, down.gamma, down.gamma));
    rep.pushed_universal = resid.is_zero_series();
    const Subspace harmT =
        subspace_intersection(kernel(T.delta.matrix), kernel(T.Delta.matrix));
    const Subspace imDT = image(T.Delta.matrix);
    for (const auto& [m, c] : down.gamma.terms) {
        if (mono_degree(m) == 1 && !harmT.contains(c))
            rep.pushed_universal = false;
        if (mono_degree(m) > 1 && (!imDT.contains(c) || m[0] > 0))
            rep.pushed_universal = false;
    }

    // Gram matrices in identified coordinates
    const std::size_t r = Hs.rank();
    rep.gram_matches = true;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            Rational gs = integral_value(
                int_src, S.algebra.multiply(Hs.reps[a], Hs.reps[b]));
            Rational gt = integral_value(
                int_tgt, T.algebra.multiply(f.apply(Hs.reps[a]), f.apply(Hs.reps[b])));
            if (!(gs == gt))
                rep.gram_matches = false;
        }

    rep.phi_source = potential(S, up, int_src).Phi;
    rep.phi_target = potential_second_form(T, down.gamma, int_tgt);
    rep.potentials_equal = (rep.phi_source - rep.phi_target).is_zero_series();
    return rep;
}

} // namespace dgbv
