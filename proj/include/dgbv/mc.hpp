#pragma once

#include "dgbv/series.hpp"

#include <random>

namespace dgbv {

/// A solved Maurer-Cartan element with its normalization data: the linear
/// term gamma1, the full solution gamma, and a stored preimage B with
/// ΔB = gamma - gamma1.
struct MCSolution {
    enum class Kind { one_param, epsilon, universal };
    Kind kind = Kind::universal;
    AlgSeries gamma;
    AlgSeries gamma1;
    AlgSeries B;
};

/// δ_Γ = δ + [Γ . -] acting on series.
struct DeformedDifferential {
    const DGBVStructure* D = nullptr;
    AlgSeries gamma;

    AlgSeries apply(const AlgSeries& f) const
    {
        AlgSeries out = apply_operator(D->delta, f);
        out += bracket_series(*D, gamma, f);
        return out;
    }
};

namespace detail {

/// Order-by-order Maurer-Cartan solve: at each order n the right-hand side
/// -1/2 Σ_{i+j=n} [Γ_i . Γ_j] must lie in Im δΔ coefficientwise; the
/// correction is Δw with δΔw = rhs (deterministic solve). Returns gamma and
/// the accumulated preimage B.
inline std::pair<AlgSeries, AlgSeries> solve_mc_orders(const DGBVStructure& D,
                                                       const AlgSeries& gamma1,
                                                       const char* ctx,
                                                       bool alternate_pivot = false)
{
    const Matrix dD = D.delta.matrix.compose(D.Delta.matrix);
    const Subspace im_dD = image(dD);
    const int N = gamma1.spec->order;

    // deterministic alternate complement: parity-homogeneous kernel vectors
    // of δΔ whose Δ-image is nonzero shift the chosen preimage
    std::vector<Vec> shifts;
    if (alternate_pivot) {
        const Subspace ker_dD = kernel(dD);
        for (const Vec& k : ker_dD.basis())
            if (!is_zero(D.Delta.apply(k)))
                shifts.push_back(k);
    }
    auto coefficient_parity = [&](const Vec& v) -> int {
        int p = -1;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(v[i] == 0)) {
                int q = D.algebra.basis.parity(i);
                if (p == -1)
                    p = q;
                else if (p != q)
                    return -2; // mixed
            }
        return p;
    };

    AlgSeries gamma = gamma1;
    AlgSeries B(gamma1.spec);
    for (int n = 2; n <= N; ++n) {
        AlgSeries br = bracket_series(D, gamma, gamma).order_part(n);
        for (const auto& [m, c] : br.terms) {
            Vec rhs = Rational(-1, 2) * c;
            if (!im_dD.contains(rhs))
                throw std::runtime_error(std::string(ctx) +
                                         ": right-hand side escapes Im deltaDelta at order " +
                                         std::to_string(n) +
                                         " (quasi-isomorphism conditions violated)");
            auto w = solve_linear(dD, rhs);
            if (!w)
                throw std::runtime_error(std::string(ctx) + ": linear solve failed at order " +
                                         std::to_string(n));
            if (alternate_pivot) {
                const int want = coefficient_parity(rhs);
                for (const Vec& k : shifts)
                    if (coefficient_parity(k) == want) {
                        add_scaled(*w, Rational(1), k);
                        break;
                    }
            }
            gamma.add_term(m, D.Delta.apply(*w));
            B.add_term(m, *w);
        }
    }
    return {std::move(gamma), std::move(B)};
}

inline void verify_mc(const DGBVStructure& D, const AlgSeries& gamma, const char* ctx)
{
    AlgSeries resid = apply_operator(D.delta, gamma);
    resid.axpy(Rational(1, 2), bracket_series(D, gamma, gamma));
    if (!resid.is_zero_series())
        throw std::runtime_error(std::string(ctx) + ": Maurer-Cartan residual is nonzero");
}

inline void verify_normalization(const DGBVStructure& D, const MCSolution& s,
                                 const char* ctx)
{
    const Subspace harm =
        subspace_intersection(kernel(D.delta.matrix), kernel(D.Delta.matrix));
    const Subspace imD = image(D.Delta.matrix);
    for (const auto& [m, c] : s.gamma.terms) {
        if (mono_degree(m) <= 1) {
            if (!harm.contains(c))
                throw std::runtime_error(std::string(ctx) +
                                         ": order-1 coefficient is not harmonic");
        } else if (!imD.contains(c)) {
            throw std::runtime_error(std::string(ctx) +
                                     ": higher coefficient escapes Im Delta");
        }
    }
    // stored preimage really satisfies ΔB = Γ - Γ_1
    AlgSeries diff = apply_operator(D.Delta, s.B) - (s.gamma - s.gamma1);
    if (!diff.is_zero_series())
        throw std::runtime_error(std::string(ctx) + ": stored preimage fails DeltaB = "
                                                    "gamma - gamma1");
}

} // namespace detail

/// One-parameter solution x(t) = x_1 t + x_2 t² + ... for an even harmonic
/// representative x_1.
inline MCSolution solve_mc_one_param_rep(const DGBVStructure& D, const Vec& x1, int order)
{
    if (!is_zero(D.delta.apply(x1)) || !is_zero(D.Delta.apply(x1)))
        throw std::invalid_argument("solve_mc_one_param: representative is not harmonic");
    for (std::size_t i = 0; i < x1.size(); ++i)
        if (!(x1[i] == 0) && D.algebra.basis.parity(i) != 0)
            throw std::invalid_argument("solve_mc_one_param: class must be even");
    auto spec = one_param_spec(order);
    AlgSeries gamma1(spec);
    gamma1.add_term(param_mono(*spec, 0), x1);
    auto [gamma, B] = detail::solve_mc_orders(D, gamma1, "solve_mc_one_param");
    MCSolution s{MCSolution::Kind::one_param, std::move(gamma), std::move(gamma1),
                 std::move(B)};
    detail::verify_mc(D, s.gamma, "solve_mc_one_param");
    detail::verify_normalization(D, s, "solve_mc_one_param");
    return s;
}

inline MCSolution solve_mc_one_param(const DGBVStructure& D, const CohomologyBasis& H,
                                     std::size_t class_index, int order)
{
    if (H.parity(class_index) != 0)
        throw std::invalid_argument("solve_mc_one_param: class must be even");
    return solve_mc_one_param_rep(D, H.reps[class_index], order);
}

/// Odd deformation x(ε) = x_1 ε; the bracket square vanishes by the ε rules.
inline MCSolution solve_mc_epsilon_rep(const DGBVStructure& D, const Vec& x1, int order)
{
    if (!is_zero(D.delta.apply(x1)) || !is_zero(D.Delta.apply(x1)))
        throw std::invalid_argument("solve_mc_epsilon: representative is not harmonic");
    for (std::size_t i = 0; i < x1.size(); ++i)
        if (!(x1[i] == 0) && D.algebra.basis.parity(i) != 1)
            throw std::invalid_argument("solve_mc_epsilon: class must be odd");
    auto spec = epsilon_spec(order);
    AlgSeries gamma1(spec);
    gamma1.add_term(param_mono(*spec, 0), x1);
    MCSolution s{MCSolution::Kind::epsilon, gamma1, gamma1, AlgSeries(spec)};
    detail::verify_mc(D, s.gamma, "solve_mc_epsilon");
    return s;
}

inline MCSolution solve_mc_epsilon(const DGBVStructure& D, const CohomologyBasis& H,
                                   std::size_t class_index, int order)
{
    if (H.parity(class_index) != 1)
        throw std::invalid_argument("solve_mc_epsilon: class must be odd");
    return solve_mc_epsilon_rep(D, H.reps[class_index], order);
}

/// Universal normalized solution Γ = Σ e_α t^α + higher, with t^0 dual to
/// the unit class and confined to the linear term. With alternate_pivot the
/// linear solves pick a different deterministic representative, giving a
/// gauge-equivalent but generally distinct solution.
inline MCSolution solve_mc_universal(const DGBVStructure& D, const CohomologyBasis& H,
                                     int order, bool alternate_pivot = false)
{
    if (!is_zero(D.Delta.apply(D.algebra.unit_vector())))
        throw std::runtime_error("solve_mc_universal: Delta(1) != 0, normalization "
                                 "impossible");
    std::vector<std::string> names;
    std::vector<int> parities;
    for (std::size_t a = 0; a < H.rank(); ++a) {
        names.push_back("t" + std::to_string(a));
        parities.push_back(H.parity(a));
    }
    auto spec = make_spec(std::move(names), std::move(parities), order);
    AlgSeries gamma1(spec);
    for (std::size_t a = 0; a < H.rank(); ++a)
        gamma1.add_term(param_mono(*spec, a), H.reps[a]);
    auto [gamma, B] =
        detail::solve_mc_orders(D, gamma1, "solve_mc_universal", alternate_pivot);
    MCSolution s{MCSolution::Kind::universal, std::move(gamma), std::move(gamma1),
                 std::move(B)};
    detail::verify_mc(D, s.gamma, "solve_mc_universal");
    detail::verify_normalization(D, s, "solve_mc_universal");
    // t^0 only appears in the linear term
    for (const auto& [m, c] : s.gamma.terms)
        if (m[0] > 0 && mono_degree(m) > 1)
            throw std::runtime_error("solve_mc_universal: t0 appears beyond the linear term");
    return s;
}

inline DeformedDifferential deformed_differential(const DGBVStructure& D,
                                                  const MCSolution& s)
{
    return DeformedDifferential{&D, s.gamma};
}

/// Report for the order-by-order quasi-isomorphism property of the deformed
/// differential: constructed preimages for sampled elements of the two
/// intersections, each verified exactly.
struct DeformedQReport {
    bool delta_gamma_squares_zero = false;
    bool anticommutes_with_Delta = false;
    int preimage_trials = 0;
    int preimage_failures = 0;
    bool pass() const
    {
        return delta_gamma_squares_zero && anticommutes_with_Delta &&
               preimage_failures == 0;
    }
};

namespace detail {

/// Constructs v with y = δ_Γ Δ v order by order; y must lie in
/// Im(δ_Γ Δ) up to truncation. Throws when an order is obstructed.
inline AlgSeries deformed_square_preimage(const DGBVStructure& D,
                                          const DeformedDifferential& dG,
                                          const AlgSeries& y)
{
    const Matrix dD = D.delta.matrix.compose(D.Delta.matrix);
    const Subspace im_dD = image(dD);
    const int N = y.spec->order;
    AlgSeries v(y.spec);
    for (int k = 0; k <= N; ++k) {
        AlgSeries resid = y - dG.apply(apply_operator(D.Delta, v));
        AlgSeries lead = resid.order_part(k);
        for (const auto& [m, c] : lead.terms) {
            if (!im_dD.contains(c))
                throw std::runtime_error("deformed preimage: leading term escapes Im "
                                         "deltaDelta at order " + std::to_string(k));
            auto w = solve_linear(dD, c);
            v.add_term(m, *w);
        }
    }
    AlgSeries check = y - dG.apply(apply_operator(D.Delta, v));
    if (!check.is_zero_series())
        throw std::runtime_error("deformed preimage: reconstruction failed");
    return v;
}

} // namespace detail

inline DeformedQReport check_deformed_q(const DGBVStructure& D, const MCSolution& s,
                                        int trials, std::uint64_t seed)
{
    DeformedQReport rep;
    DeformedDifferential dG = deformed_differential(D, s);
    const std::size_t n = D.dim();

    rep.delta_gamma_squares_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        AlgSeries f = constant_series(s.gamma.spec, unit_vec(n, i));
        if (!dG.apply(dG.apply(f)).is_zero_series())
            rep.delta_gamma_squares_zero = false;
    }
    rep.anticommutes_with_Delta = true;
    for (std::size_t i = 0; i < n; ++i) {
        AlgSeries f = constant_series(s.gamma.spec, unit_vec(n, i));
        AlgSeries anti = apply_operator(D.Delta, dG.apply(f)) +
                         dG.apply(apply_operator(D.Delta, f));
        if (!anti.is_zero_series())
            rep.anticommutes_with_Delta = false;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int t = 0; t < trials; ++t) {
        AlgSeries u(s.gamma.spec);
        for (int term = 0; term < 4; ++term) {
            Mono m(s.gamma.spec->count(), 0);
            for (std::size_t p = 0; p < m.size(); ++p)
                m[p] = s.gamma.spec->parities[p] ? int(rng() % 2) : int(rng() % 3);
            Vec c(n);
            for (auto& x : c)
                x = coeff(rng);
            u.add_term(m, c);
        }
        // y = δ_Γ Δ u lies in Im Δ ∩ Ker δ_Γ; reconstruct a preimage.
        AlgSeries y = dG.apply(apply_operator(D.Delta, u));
        ++rep.preimage_trials;
        try {
            (void)detail::deformed_square_preimage(D, dG, y);
        } catch (const std::runtime_error&) {
            ++rep.preimage_failures;
        }
    }
    return rep;
}

/// Extends a harmonic element to a δ_Γ-closed series with higher terms in
/// Im Δ (deterministic).
inline AlgSeries extend_class(const DGBVStructure& D, const MCSolution& s, const Vec& y0)
{
    if (!is_zero(D.delta.apply(y0)) || !is_zero(D.Delta.apply(y0)))
        throw std::invalid_argument("extend_class: element is not harmonic");
    const Matrix dD = D.delta.matrix.compose(D.Delta.matrix);
    const Subspace im_dD = image(dD);
    const int N = s.gamma.spec->order;
    AlgSeries y = constant_series(s.gamma.spec, y0);
    for (int k = 1; k <= N; ++k) {
        // δ y_k = -(order-k part of [Γ . y])
        AlgSeries rhs = bracket_series(D, s.gamma, y).order_part(k).scaled(Rational(-1));
        for (const auto& [m, c] : rhs.terms) {
            if (!im_dD.contains(c))
                throw std::runtime_error("extend_class: right-hand side escapes Im "
                                         "deltaDelta at order " + std::to_string(k));
            auto w = solve_linear(dD, c);
            y.add_term(m, D.Delta.apply(*w));
        }
    }
    DeformedDifferential dG{&D, s.gamma};
    if (!dG.apply(y).is_zero_series())
        throw std::runtime_error("extend_class: lift is not closed for the deformed "
                                 "differential");
    return y;
}

/// The extension map on every class of the basis, cached.
struct ExtensionMap {
    std::vector<AlgSeries> lifts; // lifts[a] extends H.reps[a]
};

inline ExtensionMap extension_map(const DGBVStructure& D, const CohomologyBasis& H,
                                  const MCSolution& s)
{
    ExtensionMap phi;
    for (std::size_t a = 0; a < H.rank(); ++a)
        phi.lifts.push_back(extend_class(D, s, H.reps[a]));
    return phi;
}

/// Inverse of the extension isomorphism: writes a δ_Γ-closed series as
/// Σ c_α(t) φ(e_α) + δ_Γ z and returns (c, z).
struct PhiInverseResult {
    std::vector<ScalarSeries> coords; // one scalar series per class
    AlgSeries exactness_witness;      // z
};

inline PhiInverseResult phi_inverse(const DGBVStructure& D, const CohomologyBasis& H,
                                    const MCSolution& s, const ExtensionMap& phi,
                                    const AlgSeries& w)
{
    DeformedDifferential dG{&D, s.gamma};
    if (!dG.apply(w).is_zero_series())
        throw std::invalid_argument("phi_inverse: input is not closed for the deformed "
                                    "differential");
    const int N = w.spec->order;
    PhiInverseResult out;
    out.coords.assign(H.rank(), ScalarSeries(w.spec));
    out.exactness_witness = AlgSeries(w.spec);
    AlgSeries resid = w;
    for (int k = 0; k <= N; ++k) {
        AlgSeries lead = resid.order_part(k);
        for (const auto& [m, c] : lead.terms) {
            // leading coefficient is δ-closed; project to class coordinates.
            // In c_α(t)·φ(e_α) the scalar stands left of the monomial, so the
            // visible coefficient carries (-1)^{p(m)p(e_α)}; undo it here.
            Vec coords = H.project(D, c);
            const int pm = mono_parity(m, *w.spec);
            for (std::size_t a = 0; a < H.rank(); ++a) {
                if (coords[a] == 0)
                    continue;
                const Rational ca =
                    Rational((pm * H.parity(a)) % 2 ? -1 : 1) * coords[a];
                out.coords[a].add_term(m, ca);
                ScalarSeries cm(w.spec);
                cm.add_term(m, ca);
                resid.axpy(Rational(-1),
                           series_multiply(D.algebra.basis, cm, phi.lifts[a]));
            }
        }
        // the remaining order-k part is δ-exact; peel it into the witness
        AlgSeries rest = resid.order_part(k);
        for (const auto& [m, c] : rest.terms) {
            auto zc = solve_linear(D.delta.matrix, c);
            if (!zc)
                throw std::runtime_error("phi_inverse: residual is not delta-exact at "
                                         "order " + std::to_string(k));
            AlgSeries zterm(w.spec);
            zterm.add_term(m, *zc);
            out.exactness_witness += zterm;
            resid.axpy(Rational(-1), dG.apply(zterm));
        }
        if (!resid.order_part(k).is_zero_series())
            throw std::runtime_error("phi_inverse: order " + std::to_string(k) +
                                     " not eliminated");
    }
    // exact reconstruction: w = Σ c_α φ(e_α) + δ_Γ z
    AlgSeries rebuilt(w.spec);
    for (std::size_t a = 0; a < H.rank(); ++a)
        rebuilt += series_multiply(D.algebra.basis, out.coords[a], phi.lifts[a]);
    rebuilt += dG.apply(out.exactness_witness);
    AlgSeries diff = w - rebuilt;
    if (!diff.is_zero_series())
        throw std::runtime_error("phi_inverse: reconstruction failed");
    return out;
}

/// Deformed product on class coordinates: a ∧_Γ b = φ^{-1}(φ(a) ∧ φ(b)).
inline std::vector<ScalarSeries> deformed_product(const DGBVStructure& D,
                                                  const CohomologyBasis& H,
                                                  const MCSolution& s,
                                                  const ExtensionMap& phi,
                                                  std::size_t alpha, std::size_t beta)
{
    AlgSeries prod = series_multiply(D.algebra, phi.lifts[alpha], phi.lifts[beta]);
    return phi_inverse(D, H, s, phi, prod).coords;
}

} // namespace dgbv
