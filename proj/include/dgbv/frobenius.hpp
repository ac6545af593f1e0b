#pragma once

#include "dgbv/mc.hpp"

namespace dgbv {

/// Adjointness checks for an integral functional: for all basis pairs,
/// ∫ δa ∧ b = (-1)^{|a|+1} ∫ a ∧ δb and ∫ Δa ∧ b = (-1)^{|a|} ∫ a ∧ Δb.
inline ValidationReport validate_integral(const DGBVStructure& D, const Vec& integral)
{
    ValidationReport rep;
    const std::size_t n = D.dim();
    if (integral.size() != n)
        throw std::invalid_argument("validate_integral: wrong length");
    auto pair_value = [&](const Vec& x, const SparseVec& y) {
        Vec prod = D.algebra.multiply_sparse(to_sparse(x), y);
        Rational acc(0);
        for (std::size_t i = 0; i < n; ++i)
            if (!(prod[i] == 0))
                acc += integral[i] * prod[i];
        return acc;
    };
    AxiomResult adj_d{"integral-delta-adjoint"};
    AxiomResult adj_D{"integral-Delta-adjoint"};
    for (std::size_t i = 0; i < n; ++i) {
        const int pi = D.algebra.basis.parity(i);
        for (std::size_t j = 0; j < n; ++j) {
            const SparseVec ej{{j, Rational(1)}};
            Rational lhs = pair_value(D.delta.matrix.col(i), ej);
            Rational rhs = pair_value(unit_vec(n, i), to_sparse(D.delta.matrix.col(j)));
            if (!(lhs == Rational(pi ? 1 : -1) * rhs)) {
                adj_d.fail("(" + D.algebra.basis.labels[i] + ", " +
                           D.algebra.basis.labels[j] + ")");
            }
            Rational lhsD = pair_value(D.Delta.matrix.col(i), ej);
            Rational rhsD = pair_value(unit_vec(n, i), to_sparse(D.Delta.matrix.col(j)));
            if (!(lhsD == Rational(pi ? -1 : 1) * rhsD)) {
                adj_D.fail("(" + D.algebra.basis.labels[i] + ", " +
                           D.algebra.basis.labels[j] + ")");
            }
        }
    }
    rep.axioms.push_back(adj_d);
    rep.axioms.push_back(adj_D);
    return rep;
}

/// Pairing matrix on cohomology classes, its exact inverse when it exists.
struct GramData {
    Matrix g;
    Matrix g_inv;
    bool nice = false;
    bool supersymmetric = false;
};

inline Rational integral_value(const Vec& integral, const Vec& x)
{
    Rational acc(0);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] == 0))
            acc += integral[i] * x[i];
    return acc;
}

inline GramData gram(const DGBVStructure& D, const Vec& integral, const CohomologyBasis& H)
{
    const std::size_t r = H.rank();
    GramData out;
    out.g = Matrix(r, r);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            out.g(a, b) = integral_value(integral, D.algebra.multiply(H.reps[a], H.reps[b]));
    out.supersymmetric = true;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            int s = (H.parity(a) * H.parity(b)) % 2 ? -1 : 1;
            if (!(out.g(a, b) == Rational(s) * out.g(b, a)))
                out.supersymmetric = false;
        }
    // exact inverse via row reduction of [g | I]
    Matrix aug(r, 2 * r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j)
            aug(i, j) = out.g(i, j);
        aug(i, r + i) = 1;
    }
    auto pivots = rref_in_place(aug);
    out.nice = pivots.size() == r && std::all_of(pivots.begin(), pivots.end(),
                                                 [r](std::size_t p) { return p < r; });
    out.g_inv = Matrix(r, r);
    if (out.nice)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                out.g_inv(i, j) = aug(i, r + j);
    return out;
}

/// The pairing of deformed lifts is parameter-independent:
/// ∫(y1 + ΔZ1)(y2 + ΔZ2) = ∫ y1 y2 exactly.
struct InvarianceReport {
    bool pass = false;
    ScalarSeries lhs;
    Rational constant;
};

inline InvarianceReport invariance_on_deformed_classes(const DGBVStructure& D,
                                                       const Vec& integral,
                                                       const AlgSeries& lift1,
                                                       const AlgSeries& lift2)
{
    InvarianceReport rep;
    rep.lhs = integrate_series(integral, series_multiply(D.algebra, lift1, lift2));
    const Mono m0 = zero_mono(*lift1.spec);
    Vec y1 = lift1.coefficient(m0, zero_vec(D.dim()));
    Vec y2 = lift2.coefficient(m0, zero_vec(D.dim()));
    rep.constant = integral_value(integral, D.algebra.multiply(y1, y2));
    ScalarSeries expect = constant_series(lift1.spec, rep.constant);
    ScalarSeries diff = rep.lhs - expect;
    rep.pass = diff.is_zero_series();
    return rep;
}

/// Potential of a universal normalized solution, computed through both
/// printed forms and cross-asserted:
///   Φ = ∫(1/6 Γ³ - 1/2 δB ∧ ΔB) = ∫(1/6 Γ³ - 1/4 (Γ - Γ1) ∧ Γ²).
struct PotentialReport {
    ScalarSeries Phi;
    bool forms_agree = false;
    bool even_parity = false;
    std::string first_mismatch;
};

inline PotentialReport potential(const DGBVStructure& D, const MCSolution& s,
                                 const Vec& integral)
{
    const auto& A = D.algebra;
    AlgSeries g2 = series_multiply(A, s.gamma, s.gamma);
    AlgSeries g3 = series_multiply(A, g2, s.gamma);
    ScalarSeries cubic = integrate_series(integral, g3).scaled(Rational(1, 6));

    AlgSeries dB = apply_operator(D.delta, s.B);
    AlgSeries DB = apply_operator(D.Delta, s.B);
    ScalarSeries phi_a = cubic - integrate_series(integral, series_multiply(A, dB, DB))
                                     .scaled(Rational(1, 2));

    AlgSeries corr = s.gamma - s.gamma1;
    ScalarSeries phi_b = cubic - integrate_series(integral, series_multiply(A, corr, g2))
                                     .scaled(Rational(1, 4));

    PotentialReport rep;
    rep.Phi = phi_a;
    ScalarSeries diff = phi_a - phi_b;
    rep.forms_agree = diff.is_zero_series();
    rep.even_parity = true;
    for (const auto& [m, c] : rep.Phi.terms)
        if (mono_parity(m, *rep.Phi.spec) != 0)
            rep.even_parity = false;
    if (!rep.forms_agree) {
        rep.first_mismatch = format_mono(diff.terms.begin()->first, *phi_a.spec);
        throw std::runtime_error("potential: the two closed forms disagree at monomial " +
                                 rep.first_mismatch);
    }
    return rep;
}

/// Third left partial with rightmost index applied first.
inline ScalarSeries third_partial(const ScalarSeries& phi, std::size_t a, std::size_t b,
                                  std::size_t c)
{
    return left_partial(left_partial(left_partial(phi, c), b), a);
}

struct UnitAxiomReport {
    bool pass = true;
    std::vector<std::string> witnesses;
};

/// ∂³Φ/∂t⁰∂t^α∂t^β = g_{αβ} for all α, β.
inline UnitAxiomReport check_unit_axiom(const ScalarSeries& phi, const GramData& gd)
{
    UnitAxiomReport rep;
    const std::size_t r = gd.g.rows();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            ScalarSeries d3 = third_partial(phi, 0, a, b);
            ScalarSeries expect = constant_series(phi.spec, gd.g(a, b));
            ScalarSeries diff = d3 - expect;
            if (!diff.is_zero_series()) {
                rep.pass = false;
                rep.witnesses.push_back("(alpha=" + std::to_string(a) +
                                        ", beta=" + std::to_string(b) + ")");
            }
        }
    return rep;
}

struct WDVVReport {
    bool pass = true;
    long quadruples_checked = 0;
    std::vector<std::string> witnesses;
};

/// WDVV associativity constraints with super signs, all index quadruples:
///   Σ Φ_{αβμ} g^{μν} Φ_{νγδ} =
///   (-1)^{|e_α|(|e_β|+|e_γ|)} Σ Φ_{βγμ} g^{μν} Φ_{ναδ}.
inline WDVVReport check_wdvv(const ScalarSeries& phi, const GramData& gd,
                             const CohomologyBasis& H)
{
    WDVVReport rep;
    if (!gd.nice)
        throw std::invalid_argument("check_wdvv: the pairing is degenerate, refusing to "
                                    "invert");
    const std::size_t r = H.rank();
    // cache all third partials
    std::vector<std::vector<std::vector<ScalarSeries>>> d3(
        r, std::vector<std::vector<ScalarSeries>>(r, std::vector<ScalarSeries>(r)));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                d3[a][b][c] = third_partial(phi, a, b, c);

    // E[a][b][nu] = Σ_mu Φ_{abμ} g^{μν}
    std::vector<std::vector<std::vector<ScalarSeries>>> E(
        r, std::vector<std::vector<ScalarSeries>>(r, std::vector<ScalarSeries>(r)));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t nu = 0; nu < r; ++nu) {
                ScalarSeries acc(phi.spec);
                for (std::size_t mu = 0; mu < r; ++mu)
                    if (!(gd.g_inv(mu, nu) == 0))
                        acc.axpy(gd.g_inv(mu, nu), d3[a][b][mu]);
                E[a][b][nu] = std::move(acc);
            }
    auto contracted = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        ScalarSeries acc(phi.spec);
        for (std::size_t nu = 0; nu < r; ++nu)
            if (!E[a][b][nu].is_zero_series())
                acc += series_multiply(E[a][b][nu], d3[nu][c][d]);
        return acc;
    };

    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t d = 0; d < r; ++d) {
                    ScalarSeries lhs = contracted(a, b, c, d);
                    ScalarSeries rhs = contracted(b, c, a, d);
                    int sign = (H.parity(a) * (H.parity(b) + H.parity(c))) % 2 ? -1 : 1;
                    ScalarSeries diff = lhs - rhs.scaled(Rational(sign));
                    ++rep.quadruples_checked;
                    if (!diff.is_zero_series()) {
                        rep.pass = false;
                        rep.witnesses.push_back(
                            "(α=" + std::to_string(a) + ",β=" + std::to_string(b) +
                            ",γ=" + std::to_string(c) + ",δ=" + std::to_string(d) +
                            ") at " + format_mono(diff.terms.begin()->first, *phi.spec));
                    }
                }
    return rep;
}

/// Independent oracle for the cubic part of the potential: assembles
/// 1/6 ∫ Γ1³ by a direct triple loop with explicit Koszul reorder signs.
inline ScalarSeries cubic_term_oracle(const DGBVStructure& D, const CohomologyBasis& H,
                                      const Vec& integral, const ParamSpecPtr& spec)
{
    const std::size_t r = H.rank();
    ScalarSeries out(spec);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                const int pa = H.parity(a), pb = H.parity(b), pc = H.parity(c);
                // (x_a t^a)(x_b t^b)(x_c t^c) -> coefficients left
                int sign_exp = pa * pb + (pa + pb) * pc;
                // sort t^a t^b t^c into ascending order
                std::array<std::size_t, 3> order{a, b, c};
                std::array<int, 3> par{pa, pb, pc};
                int swaps = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 2 - i; ++j)
                        if (order[j] > order[j + 1]) {
                            std::swap(order[j], order[j + 1]);
                            swaps += par[j] * par[j + 1];
                            std::swap(par[j], par[j + 1]);
                        }
                // odd parameter squared
                if ((a == b && pa) || (b == c && pb) || (a == c && pa))
                    continue;
                Mono m(spec->count(), 0);
                m[a] += 1;
                m[b] += 1;
                m[c] += 1;
                Rational v = integral_value(
                    integral,
                    D.algebra.multiply(D.algebra.multiply(H.reps[a], H.reps[b]), H.reps[c]));
                int sign = (sign_exp + swaps) % 2 ? -1 : 1;
                out.add_term(m, v, Rational(sign, 6));
            }
    return out;
}

} // namespace dgbv
