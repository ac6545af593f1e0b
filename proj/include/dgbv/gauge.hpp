#pragma once

#include "dgbv/frobenius.hpp"

namespace dgbv {

/// Total parity of a homogeneous series term in the degree-shifted Lie
/// algebra view: algebra parity + 1 + parameter parity.
inline bool is_shifted_even(const DGBVStructure& D, const AlgSeries& f)
{
    for (const auto& [m, c] : f.terms) {
        const int pm = mono_parity(m, *f.spec);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == 0) && (D.algebra.basis.parity(i) + 1 + pm) % 2 != 0)
                return false;
    }
    return true;
}

inline bool has_constant_term(const AlgSeries& f)
{
    auto it = f.terms.find(zero_mono(*f.spec));
    return it != f.terms.end();
}

/// Gauge group element: shifted-even series with vanishing constant term.
struct GaugeElement {
    AlgSeries A;

    GaugeElement(const DGBVStructure& D, AlgSeries a) : A(std::move(a))
    {
        if (has_constant_term(A))
            throw std::invalid_argument("gauge element has a constant term");
        if (!is_shifted_even(D, A))
            throw std::invalid_argument("gauge element is not shifted-even");
    }
};

inline AlgSeries ad_series(const DGBVStructure& D, const AlgSeries& A, const AlgSeries& f)
{
    return bracket_series(D, A, f);
}

inline AlgSeries ad_power(const DGBVStructure& D, const AlgSeries& A, int n,
                          const AlgSeries& f)
{
    AlgSeries out = f;
    for (int k = 0; k < n; ++k)
        out = ad_series(D, A, out);
    return out;
}

/// e^{ad_A} f; terminates because A has no constant term.
inline AlgSeries exp_ad(const DGBVStructure& D, const AlgSeries& A, const AlgSeries& f)
{
    AlgSeries out = f;
    AlgSeries cur = f;
    Rational fact(1);
    for (int k = 1; k <= f.spec->order + 1; ++k) {
        cur = ad_series(D, A, cur);
        if (cur.is_zero_series())
            break;
        fact *= k;
        out.axpy(Rational(1) / fact, cur);
    }
    return out;
}

/// ((1 - e^{ad_A})/ad_A) δA = -Σ_{q>=0} ad_A^q(δA)/(q+1)!.
inline AlgSeries gauge_inhomogeneous_term(const DGBVStructure& D, const AlgSeries& A)
{
    AlgSeries dA = apply_operator(D.delta, A);
    AlgSeries out(A.spec);
    AlgSeries cur = dA;
    Rational fact(1);
    for (int q = 0; q <= A.spec->order + 1; ++q) {
        if (cur.is_zero_series())
            break;
        fact *= (q + 1);
        out.axpy(Rational(-1) / fact, cur);
        cur = ad_series(D, A, cur);
    }
    return out;
}

/// Gauge action e^A · ω = e^{ad_A} ω + ((1 - e^{ad_A})/ad_A) δA.
inline AlgSeries gauge_action(const DGBVStructure& D, const GaugeElement& g,
                              const AlgSeries& omega)
{
    return exp_ad(D, g.A, omega) + gauge_inhomogeneous_term(D, g.A);
}

/// Campbell-Baker-Hausdorff product in Dynkin form: C with e^A e^B = e^C up
/// to the truncation order. Coefficients are first accumulated per letter
/// word, then each distinct right-nested bracket is evaluated once.
inline AlgSeries cbh(const DGBVStructure& D, const AlgSeries& A, const AlgSeries& B)
{
    A.check_spec(B);
    const int N = A.spec->order;

    // accumulate Dynkin coefficients per word; word bits: 0 = A, 1 = B
    std::map<std::vector<int>, Rational> weights;
    std::vector<std::pair<int, int>> blocks;
    std::function<void(int)> emit = [&](int weight) {
        if (!blocks.empty()) {
            std::vector<int> word;
            for (auto [p, q] : blocks) {
                word.insert(word.end(), p, 0);
                word.insert(word.end(), q, 1);
            }
            const int n = static_cast<int>(word.size());
            const int m = static_cast<int>(blocks.size());
            Rational denom(m);
            denom *= n;
            for (auto [p, q] : blocks) {
                for (int k = 2; k <= p; ++k)
                    denom *= k;
                for (int k = 2; k <= q; ++k)
                    denom *= k;
            }
            weights[word] += Rational((m - 1) % 2 ? -1 : 1) / denom;
        }
        if (weight >= N)
            return;
        for (int p = 0; p + weight <= N; ++p)
            for (int q = (p == 0 ? 1 : 0); p + q + weight <= N; ++q) {
                blocks.emplace_back(p, q);
                emit(weight + p + q);
                blocks.pop_back();
            }
    };
    emit(0);

    // evaluate right-nested brackets with suffix sharing
    std::map<std::vector<int>, AlgSeries> nested;
    std::function<const AlgSeries&(const std::vector<int>&)> value =
        [&](const std::vector<int>& word) -> const AlgSeries& {
        auto it = nested.find(word);
        if (it != nested.end())
            return it->second;
        AlgSeries v(A.spec);
        if (word.size() == 1) {
            v = word[0] ? B : A;
        } else {
            std::vector<int> tail(word.begin() + 1, word.end());
            const AlgSeries& rest = value(tail);
            if (!rest.is_zero_series())
                v = ad_series(D, word[0] ? B : A, rest);
        }
        return nested.emplace(word, std::move(v)).first->second;
    };

    AlgSeries C(A.spec);
    for (const auto& [word, coeff] : weights) {
        if (coeff == 0)
            continue;
        const AlgSeries& term = value(word);
        if (!term.is_zero_series())
            C.axpy(coeff, term);
    }
    return C;
}

/// Oracle for cbh: log(e^{ad_A} ∘ e^{ad_B}) as an operator, applied to f.
inline AlgSeries log_composed_exp(const DGBVStructure& D, const AlgSeries& A,
                                  const AlgSeries& B, const AlgSeries& f)
{
    auto F = [&](const AlgSeries& x) { return exp_ad(D, A, exp_ad(D, B, x)); };
    auto G = [&](const AlgSeries& x) { return F(x) - x; }; // order-raising
    AlgSeries out(f.spec);
    AlgSeries cur = G(f);
    for (int k = 1; k <= f.spec->order + 1; ++k) {
        if (cur.is_zero_series())
            break;
        out.axpy(Rational((k - 1) % 2 ? -1 : 1) / k, cur);
        cur = G(cur);
    }
    return out;
}

struct IdentityReport {
    bool pass = true;
    std::vector<std::string> witnesses;
};

/// e^{ad_A} ad_B e^{-ad_A} = ad_{e^{ad_A}B}, applied to every basis
/// generator; plus the finite binomial expansion of ad_B ad_A^n.
inline IdentityReport conjugation_identity_check(const DGBVStructure& D,
                                                 const AlgSeries& A, const AlgSeries& B,
                                                 int binomial_orders = 3)
{
    IdentityReport rep;
    const std::size_t n = D.dim();
    AlgSeries eAB = exp_ad(D, A, B);
    for (std::size_t i = 0; i < n; ++i) {
        AlgSeries x = constant_series(A.spec, unit_vec(n, i));
        AlgSeries lhs = exp_ad(D, A, ad_series(D, B, exp_ad(D, A.scaled(Rational(-1)), x)));
        AlgSeries rhs = ad_series(D, eAB, x);
        if (!(lhs - rhs).is_zero_series()) {
            rep.pass = false;
            rep.witnesses.push_back("conjugation at generator " +
                                    D.algebra.basis.labels[i]);
        }
    }
    for (int nn = 1; nn <= binomial_orders; ++nn) {
        // ad_B ad_A^n = Σ_j C(n, j) ad_A^j ad_{(-ad_A)^{n-j} B}
        for (std::size_t i = 0; i < n; ++i) {
            AlgSeries x = constant_series(A.spec, unit_vec(n, i));
            AlgSeries lhs = ad_series(D, B, ad_power(D, A, nn, x));
            AlgSeries rhs(A.spec);
            Rational binom(1);
            for (int j = 0; j <= nn; ++j) {
                AlgSeries inner = ad_power(D, A.scaled(Rational(-1)), nn - j, B);
                rhs.axpy(binom, ad_power(D, A, j, ad_series(D, inner, x)));
                binom = binom * (nn - j) / (j + 1);
            }
            if (!(lhs - rhs).is_zero_series()) {
                rep.pass = false;
                rep.witnesses.push_back("binomial n=" + std::to_string(nn) +
                                        " at generator " + D.algebra.basis.labels[i]);
            }
        }
    }
    return rep;
}

/// e^{ad_A} δ e^{-ad_A} = δ + ad_{((1-e^{ad_A})/ad_A) δA}.
inline IdentityReport differential_conjugation_check(const DGBVStructure& D,
                                                     const AlgSeries& A)
{
    IdentityReport rep;
    const std::size_t n = D.dim();
    AlgSeries shift = gauge_inhomogeneous_term(D, A);
    for (std::size_t i = 0; i < n; ++i) {
        AlgSeries x = constant_series(A.spec, unit_vec(n, i));
        AlgSeries lhs = exp_ad(
            D, A, apply_operator(D.delta, exp_ad(D, A.scaled(Rational(-1)), x)));
        AlgSeries rhs = apply_operator(D.delta, x) + ad_series(D, shift, x);
        if (!(lhs - rhs).is_zero_series()) {
            rep.pass = false;
            rep.witnesses.push_back("generator " + D.algebra.basis.labels[i]);
        }
    }
    return rep;
}

/// e^A δ_ω e^{-A} = δ_{e^A · ω} on every basis generator.
inline IdentityReport conjugate_differential_check(const DGBVStructure& D,
                                                   const GaugeElement& g,
                                                   const AlgSeries& omega)
{
    IdentityReport rep;
    const std::size_t n = D.dim();
    AlgSeries acted = gauge_action(D, g, omega);
    auto d_omega = [&](const AlgSeries& x) {
        return apply_operator(D.delta, x) + bracket_series(D, omega, x);
    };
    auto d_acted = [&](const AlgSeries& x) {
        return apply_operator(D.delta, x) + bracket_series(D, acted, x);
    };
    for (std::size_t i = 0; i < n; ++i) {
        AlgSeries x = constant_series(g.A.spec, unit_vec(n, i));
        AlgSeries lhs = exp_ad(D, g.A, d_omega(exp_ad(D, g.A.scaled(Rational(-1)), x)));
        AlgSeries rhs = d_acted(x);
        if (!(lhs - rhs).is_zero_series()) {
            rep.pass = false;
            rep.witnesses.push_back("generator " + D.algebra.basis.labels[i]);
        }
    }
    return rep;
}

/// Builds A with e^A · x = xbar order by order (both must be normalized
/// solutions of the same kind representing the same classes).
inline GaugeElement construct_gauge_equivalence(const DGBVStructure& D,
                                                const MCSolution& x,
                                                const MCSolution& xbar)
{
    if (x.kind != xbar.kind)
        throw std::invalid_argument("construct_gauge_equivalence: solution kinds differ");
    x.gamma.check_spec(xbar.gamma);
    const Matrix dD = D.delta.matrix.compose(D.Delta.matrix);
    const int N = x.gamma.spec->order;
    AlgSeries A(x.gamma.spec);
    bool have_A = false;
    for (int n = 1; n <= N; ++n) {
        AlgSeries cur = have_A
                            ? gauge_action(D, GaugeElement(D, A), x.gamma)
                            : x.gamma;
        AlgSeries diff = (xbar.gamma - cur).order_part(n);
        if (diff.is_zero_series())
            continue;
        AlgSeries step(x.gamma.spec);
        for (const auto& [m, c] : diff.terms) {
            // xbar_n - x_n = -δΔ z_n
            auto z = solve_linear(dD, Rational(-1) * c);
            if (!z) {
                if (n == 1)
                    throw std::invalid_argument("construct_gauge_equivalence: order-1 "
                                                "classes differ");
                throw std::runtime_error("construct_gauge_equivalence: unsolvable at "
                                         "order " + std::to_string(n));
            }
            step.add_term(m, D.Delta.apply(*z));
        }
        A = have_A ? cbh(D, step, A) : step;
        have_A = true;
    }
    GaugeElement g(D, A);
    AlgSeries check = gauge_action(D, g, x.gamma) - xbar.gamma;
    if (!check.is_zero_series())
        throw std::runtime_error("construct_gauge_equivalence: verification failed");
    return g;
}

/// Potential of a possibly non-normalized Maurer-Cartan solution, through
/// the closed form that only needs the linear part.
inline ScalarSeries potential_second_form(const DGBVStructure& D, const AlgSeries& gamma,
                                          const Vec& integral)
{
    AlgSeries g2 = series_multiply(D.algebra, gamma, gamma);
    AlgSeries g3 = series_multiply(D.algebra, g2, gamma);
    ScalarSeries out = integrate_series(integral, g3).scaled(Rational(1, 6));
    AlgSeries corr = gamma - gamma.order_part(1);
    out.axpy(Rational(-1, 4), integrate_series(integral, series_multiply(D.algebra, corr, g2)));
    return out;
}

/// Seeded random shifted-even gauge element with coefficients in Im Delta
/// and no constant term.
inline AlgSeries random_gauge_series(const DGBVStructure& D, ParamSpecPtr spec,
                                     std::mt19937_64& rng, int terms = 4)
{
    const std::size_t n = D.dim();
    std::uniform_int_distribution<int> coeff(-2, 2);
    AlgSeries A(spec);
    for (int t = 0; t < terms; ++t) {
        Mono m(spec->count(), 0);
        int deg = 0;
        for (std::size_t p = 0; p < m.size(); ++p) {
            m[p] = spec->parities[p] ? int(rng() % 2) : int(rng() % 2);
            deg += m[p];
        }
        if (deg == 0)
            continue;
        Vec w(n);
        for (auto& x : w)
            x = coeff(rng);
        Vec c = D.Delta.apply(w);
        const int want = (1 + mono_parity(m, *spec)) % 2;
        auto [even, odd] = parity_split(c, D.algebra.basis);
        A.add_term(m, want ? odd : even);
    }
    return A;
}

struct GaugeInvarianceReport {
    bool action_preserves_mc = false;
    bool finite_invariance = false;      // Φ(e^A·Γ) = Φ(Γ)
    bool linearized_invariance = false;  // directional derivative vanishes
    bool cubic_bracket_identity = false; // ∫ Γ ∧ [Γ.Γ] ∧ A = 0
};

inline GaugeInvarianceReport check_phi_gauge_invariance(const DGBVStructure& D,
                                                        const MCSolution& s,
                                                        const Vec& integral,
                                                        const GaugeElement& g)
{
    const Subspace imD = image(D.Delta.matrix);
    for (const auto& [m, c] : g.A.terms)
        if (!imD.contains(c))
            throw std::invalid_argument("check_phi_gauge_invariance: gauge element must "
                                        "have coefficients in Im Delta");

    GaugeInvarianceReport rep;
    const auto& A = D.algebra;

    AlgSeries acted = gauge_action(D, g, s.gamma);
    AlgSeries resid = apply_operator(D.delta, acted);
    resid.axpy(Rational(1, 2), bracket_series(D, acted, acted));
    rep.action_preserves_mc = resid.is_zero_series();

    ScalarSeries phi = potential_second_form(D, s.gamma, integral);
    ScalarSeries phi_acted = potential_second_form(D, acted, integral);
    rep.finite_invariance = (phi - phi_acted).is_zero_series();

    // linearized direction V = [A . Γ] - δA
    AlgSeries V = bracket_series(D, g.A, s.gamma) - apply_operator(D.delta, g.A);
    AlgSeries g2 = series_multiply(A, s.gamma, s.gamma);
    ScalarSeries deriv = integrate_series(integral, series_multiply(A, g2, V))
                             .scaled(Rational(1, 2));
    AlgSeries v_corr = V - V.order_part(1);
    deriv.axpy(Rational(-1, 4),
               integrate_series(integral, series_multiply(A, v_corr, g2)));
    AlgSeries gamma_corr = s.gamma - s.gamma.order_part(1);
    deriv.axpy(Rational(-1, 2),
               integrate_series(
                   integral,
                   series_multiply(A, series_multiply(A, gamma_corr, s.gamma), V)));
    rep.linearized_invariance = deriv.is_zero_series();

    ScalarSeries cubic = integrate_series(
        integral,
        series_multiply(A,
                        series_multiply(A, s.gamma, bracket_series(D, s.gamma, s.gamma)),
                        g.A));
    rep.cubic_bracket_identity = cubic.is_zero_series();
    return rep;
}

} // namespace dgbv
