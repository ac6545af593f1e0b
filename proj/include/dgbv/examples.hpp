#pragma once

#include "dgbv/constructors.hpp"

#include <functional>
#include <numeric>
#include <random>

namespace dgbv {

/// A generated structure together with its integral functional.
struct Fixture {
    std::string name;
    DGBVStructure D;
    Vec integral;
};

namespace detail {

// Sign of merging two disjoint ascending odd-index sets (shuffle sign).
inline int merge_sign(const std::vector<int>& I, const std::vector<int>& J)
{
    int inversions = 0;
    for (int i : I)
        for (int j : J)
            if (j < i)
                ++inversions;
    return inversions % 2 ? -1 : 1;
}

inline std::vector<int> merged(const std::vector<int>& I, const std::vector<int>& J)
{
    std::vector<int> out;
    std::merge(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(out));
    return out;
}

inline bool disjoint(const std::vector<int>& I, const std::vector<int>& J)
{
    for (int i : I)
        if (std::binary_search(J.begin(), J.end(), i))
            return false;
    return true;
}

inline std::vector<std::vector<int>> subsets(int n)
{
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                s.push_back(i + 1);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

} // namespace detail

/// Exterior algebra Λ(θ_1..θ_n) with δ = Δ = 0; integral = top coefficient.
inline Fixture trivial_exterior(int n)
{
    if (n < 1 || n > 6)
        throw std::invalid_argument("trivial(n): need 1 <= n <= 6");
    auto subs = detail::subsets(n);
    const std::size_t dim = subs.size();
    GradedBasis basis;
    for (const auto& I : subs) {
        std::string label;
        for (int i : I)
            label += "t" + std::to_string(i);
        basis.labels.push_back(I.empty() ? "one" : label);
        basis.degrees.push_back(static_cast<long>(I.size()));
    }
    GradedAlgebra alg(basis, 0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (!detail::disjoint(subs[i], subs[j]))
                continue;
            auto m = detail::merged(subs[i], subs[j]);
            auto it = std::find(subs.begin(), subs.end(), m);
            SparseVec p{{static_cast<std::size_t>(it - subs.begin()),
                         Rational(detail::merge_sign(subs[i], subs[j]))}};
            alg.set_product(i, j, std::move(p));
        }
    DGBVStructure D(std::move(alg), zero_operator(dim, +1), zero_operator(dim, -1));
    Vec integral = zero_vec(dim);
    integral[dim - 1] = 1; // dual of θ_1..θ_n
    return Fixture{"trivial:" + std::to_string(n), std::move(D), std::move(integral)};
}

/// Trivial structure (δ = Δ = 0) over an arbitrary validated algebra.
inline DGBVStructure trivial_structure(GradedAlgebra alg)
{
    const std::size_t dim = alg.dim();
    return DGBVStructure(std::move(alg), zero_operator(dim, +1), zero_operator(dim, -1));
}

/// Finite-dimensional BV model: exterior generators a_1..a_n whose pairwise
/// "Schouten" brackets land on a central odd generator z, which is paired off
/// by contractible squares {w_j, v_j, s_j, z_j}. Quotient of a free DGBV by a
/// δ,Δ-stable ideal, so every identity holds exactly; in the quasi-isomorphism
/// class the harmonic space is Λ(a_1..a_n) with deformed representatives.
/// m controls the number of squares: m - n - 1 of them (m >= n + 2).
inline Fixture bv_model(int n, int m)
{
    if (n < 1 || n > 4)
        throw std::invalid_argument("bv(n,m): need 1 <= n <= 4");
    const int squares = m - n - 1;
    if (squares < 1 || squares > 4)
        throw std::invalid_argument("bv(n,m): need n + 2 <= m <= n + 5");

    auto subs = detail::subsets(n);
    // junk slots: 0 = none, then per square j: 1 + 4j .. 4 + 4j -> s, w, z, v
    enum SlotKind { kNone = 0, kS, kW, kZ, kV };
    struct Slot {
        int kind;   // SlotKind
        int square; // 0-based square index, -1 for none
    };
    std::vector<Slot> slots{{kNone, -1}};
    for (int j = 0; j < squares; ++j)
        for (int k : {kS, kW, kZ, kV})
            slots.push_back({k, j});

    auto slot_degree = [](const Slot& s) -> long {
        switch (s.kind) {
        case kS: return 0;
        case kW: return 1;
        case kZ: return 1;
        case kV: return 2;
        default: return 0;
        }
    };
    auto slot_parity = [&](const Slot& s) { return parity_of_degree(slot_degree(s)); };
    auto slot_name = [](const Slot& s) -> std::string {
        static const char* names[] = {"", "s", "w", "z", "v"};
        if (s.kind == kNone)
            return "";
        return names[s.kind] + std::to_string(s.square + 1);
    };

    const std::size_t ns = slots.size();
    const std::size_t dim = subs.size() * ns;
    auto idx = [&](std::size_t sub, std::size_t slot) { return sub * ns + slot; };

    GradedBasis basis;
    for (std::size_t si = 0; si < subs.size(); ++si)
        for (std::size_t ui = 0; ui < ns; ++ui) {
            std::string label;
            for (int i : subs[si])
                label += "a" + std::to_string(i);
            std::string u = slot_name(slots[ui]);
            if (label.empty())
                label = u.empty() ? "one" : u;
            else if (!u.empty())
                label += "*" + u;
            basis.labels.push_back(label);
            basis.degrees.push_back(static_cast<long>(subs[si].size()) +
                                    slot_degree(slots[ui]));
        }

    GradedAlgebra alg(basis, 0);
    for (std::size_t si = 0; si < subs.size(); ++si)
        for (std::size_t ui = 0; ui < ns; ++ui)
            for (std::size_t sj = 0; sj < subs.size(); ++sj)
                for (std::size_t uj = 0; uj < ns; ++uj) {
                    if (slots[ui].kind != kNone && slots[uj].kind != kNone)
                        continue; // ideal kills all junk pairs
                    if (!detail::disjoint(subs[si], subs[sj]))
                        continue;
                    int sign = detail::merge_sign(subs[si], subs[sj]);
                    // (a_I ∧ u) ∧ a_J: u crosses a_J
                    if (slots[ui].kind != kNone && slot_parity(slots[ui]) &&
                        subs[sj].size() % 2)
                        sign = -sign;
                    auto mergedIJ = detail::merged(subs[si], subs[sj]);
                    auto it = std::find(subs.begin(), subs.end(), mergedIJ);
                    std::size_t slot = slots[ui].kind != kNone ? ui : uj;
                    alg.set_product(idx(si, ui), idx(sj, uj),
                                    SparseVec{{idx(static_cast<std::size_t>(
                                                       it - subs.begin()),
                                                   slot),
                                               Rational(sign)}});
                }

    auto find_slot = [&](int kind, int square) -> std::size_t {
        for (std::size_t u = 0; u < ns; ++u)
            if (slots[u].kind == kind && slots[u].square == square)
                return u;
        throw std::logic_error("slot not found");
    };

    Matrix dmat(dim, dim), Dmat(dim, dim);
    for (std::size_t si = 0; si < subs.size(); ++si) {
        const int isign = subs[si].size() % 2 ? -1 : 1; // operator crossing a_I
        for (std::size_t ui = 0; ui < ns; ++ui) {
            const Slot& s = slots[ui];
            const std::size_t from = idx(si, ui);
            if (s.kind == kW) {
                dmat(idx(si, find_slot(kV, s.square)), from) = isign;      // δw = v
                Dmat(idx(si, find_slot(kS, s.square)), from) = isign;      // Δw = s
            } else if (s.kind == kS) {
                dmat(idx(si, find_slot(kZ, s.square)), from) = isign;      // δs = z
            } else if (s.kind == kV) {
                Dmat(idx(si, find_slot(kZ, s.square)), from) = -isign;     // Δv = -z
            } else if (s.kind == kNone && subs[si].size() >= 2) {
                // Δ_CE(a_I) = Σ_{i<j in I} (-1)^{pos_i+pos_j+|I|} a_{I\{i,j}} z_1
                const auto& I = subs[si];
                for (std::size_t p = 0; p < I.size(); ++p)
                    for (std::size_t q = p + 1; q < I.size(); ++q) {
                        std::vector<int> rest;
                        for (std::size_t t = 0; t < I.size(); ++t)
                            if (t != p && t != q)
                                rest.push_back(I[t]);
                        auto it = std::find(subs.begin(), subs.end(), rest);
                        int sgn = static_cast<int>(p + q + I.size()) % 2 ? -1 : 1;
                        Dmat(idx(static_cast<std::size_t>(it - subs.begin()),
                                 find_slot(kZ, 0)),
                             from) += sgn;
                    }
            }
        }
    }

    DGBVStructure D(std::move(alg), LinearOperator{std::move(dmat), +1},
                    LinearOperator{std::move(Dmat), -1});
    Vec integral = zero_vec(dim);
    integral[idx(subs.size() - 1, 0)] = 1; // dual of a_1..a_n
    auto rep = D.validate_dgbv();
    if (!rep.all_pass())
        throw std::runtime_error("bv generator produced an invalid structure");
    return Fixture{"bv:" + std::to_string(n) + "," + std::to_string(m), std::move(D),
                   std::move(integral)};
}

/// Polynomial in x_1..x_n: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, Rational>;

inline Poly poly_monomial(int n, std::initializer_list<int> exps, Rational c = Rational(1))
{
    std::vector<int> e(exps);
    e.resize(n, 0);
    return Poly{{e, c}};
}

/// Koszul model: Λ(θ_1..θ_n) ⊗ Q[x_1..x_n]/(degree >= m), δ = Σ f_i ∂/∂θ_i,
/// Δ = 0. The truncation ideal is δ-stable (δ raises x-degree), so all
/// identities are exact. The generator checks δ² = 0 rather than assuming it.
inline Fixture koszul_model(const std::vector<Poly>& f, int m)
{
    const int n = static_cast<int>(f.size());
    if (n < 1 || n > 3)
        throw std::invalid_argument("koszul: need 1 <= n <= 3 polynomials");
    if (m < 1 || m > 5)
        throw std::invalid_argument("koszul: need 1 <= m <= 5");

    // x-monomials of total degree < m, ascending by degree then lex
    std::vector<std::vector<int>> monos;
    std::function<void(std::vector<int>&, int)> gen = [&](std::vector<int>& cur, int pos) {
        if (pos == n) {
            monos.push_back(cur);
            return;
        }
        int used = std::accumulate(cur.begin(), cur.begin() + pos, 0);
        for (int e = 0; e + used < m; ++e) {
            cur[pos] = e;
            gen(cur, pos + 1);
        }
        cur[pos] = 0;
    };
    std::vector<int> cur(n, 0);
    gen(cur, 0);
    std::sort(monos.begin(), monos.end(), [](const auto& a, const auto& b) {
        int da = std::accumulate(a.begin(), a.end(), 0);
        int db = std::accumulate(b.begin(), b.end(), 0);
        if (da != db)
            return da < db;
        return a < b;
    });

    auto subs = detail::subsets(n);
    const std::size_t nm = monos.size();
    const std::size_t dim = subs.size() * nm;
    auto idx = [&](std::size_t sub, std::size_t mono) { return sub * nm + mono; };
    auto mono_index = [&](const std::vector<int>& e) -> std::size_t {
        auto it = std::find(monos.begin(), monos.end(), e);
        return static_cast<std::size_t>(it - monos.begin());
    };

    GradedBasis basis;
    for (std::size_t si = 0; si < subs.size(); ++si)
        for (std::size_t mi = 0; mi < nm; ++mi) {
            std::string label;
            for (int i : subs[si])
                label += "th" + std::to_string(i);
            for (int v = 0; v < n; ++v)
                for (int e = 0; e < monos[mi][v]; ++e)
                    label += "x" + std::to_string(v + 1);
            basis.labels.push_back(label.empty() ? "one" : label);
            basis.degrees.push_back(static_cast<long>(subs[si].size()));
        }

    GradedAlgebra alg(basis, 0);
    for (std::size_t si = 0; si < subs.size(); ++si)
        for (std::size_t mi = 0; mi < nm; ++mi)
            for (std::size_t sj = 0; sj < subs.size(); ++sj)
                for (std::size_t mj = 0; mj < nm; ++mj) {
                    if (!detail::disjoint(subs[si], subs[sj]))
                        continue;
                    std::vector<int> esum(n);
                    int total = 0;
                    for (int v = 0; v < n; ++v)
                        total += esum[v] = monos[mi][v] + monos[mj][v];
                    if (total >= m)
                        continue;
                    auto mg = detail::merged(subs[si], subs[sj]);
                    auto it = std::find(subs.begin(), subs.end(), mg);
                    alg.set_product(
                        idx(si, mi), idx(sj, mj),
                        SparseVec{{idx(static_cast<std::size_t>(it - subs.begin()),
                                       mono_index(esum)),
                                   Rational(detail::merge_sign(subs[si], subs[sj]))}});
                }

    Matrix dmat(dim, dim);
    for (std::size_t si = 0; si < subs.size(); ++si) {
        const auto& I = subs[si];
        for (std::size_t mi = 0; mi < nm; ++mi)
            for (std::size_t p = 0; p < I.size(); ++p) {
                const int gen_index = I[p] - 1;
                std::vector<int> rest;
                for (std::size_t t = 0; t < I.size(); ++t)
                    if (t != p)
                        rest.push_back(I[t]);
                auto rit = std::find(subs.begin(), subs.end(), rest);
                const std::size_t rsub = static_cast<std::size_t>(rit - subs.begin());
                const int sgn = p % 2 ? -1 : 1; // left derivative past earlier θ's
                for (const auto& [fe, fc] : f[gen_index]) {
                    std::vector<int> esum(n);
                    int total = 0;
                    for (int v = 0; v < n; ++v)
                        total += esum[v] = monos[mi][v] + fe[v];
                    if (total >= m)
                        continue;
                    dmat(idx(rsub, mono_index(esum)), idx(si, mi)) += Rational(sgn) * fc;
                }
            }
    }

    DGBVStructure D(std::move(alg), LinearOperator{std::move(dmat), -1},
                    zero_operator(dim, -1));
    if (!D.delta.matrix.compose(D.delta.matrix).is_zero_matrix())
        throw std::runtime_error("koszul generator: delta^2 != 0 for the given polynomials");
    auto rep = D.validate_dgbv();
    if (!rep.all_pass())
        throw std::runtime_error("koszul generator produced an invalid structure");
    return Fixture{"koszul", std::move(D), zero_vec(dim)};
}

/// Contractible unital structure of dimension 2k (k even): k/2 summands of
/// the 4-dimensional atom {1, w, s, v} with δw = v, δs = 1, Δw = s, Δv = -1.
inline Fixture acyclic_model(int k)
{
    if (k < 2 || k % 2 != 0 || k > 8)
        throw std::invalid_argument("acyclic(k): need even k with 2 <= k <= 8");
    auto atom = []() {
        GradedBasis basis;
        basis.labels = {"one", "w", "s", "v"};
        basis.degrees = {0, 0, -1, 1};
        GradedAlgebra alg(basis, 0);
        for (std::size_t i = 0; i < 4; ++i) {
            alg.set_product(0, i, SparseVec{{i, Rational(1)}});
            if (i != 0)
                alg.set_product(i, 0, SparseVec{{i, Rational(1)}});
        }
        alg.set_product(2, 3, SparseVec{{1, Rational(1)}});  // s v = w
        alg.set_product(3, 2, SparseVec{{1, Rational(-1)}}); // v s = -w
        Matrix d(4, 4), D(4, 4);
        d(3, 1) = 1;  // δw = v
        d(0, 2) = 1;  // δs = 1
        D(2, 1) = 1;  // Δw = s
        D(0, 3) = -1; // Δv = -1
        return DGBVStructure(std::move(alg), LinearOperator{std::move(d), +1},
                             LinearOperator{std::move(D), -1});
    };
    DGBVStructure out = atom();
    for (int j = 1; j < k / 2; ++j)
        out = direct_sum(out, atom());
    auto rep = out.validate_dgbv();
    if (!rep.all_pass())
        throw std::runtime_error("acyclic generator produced an invalid structure");
    const std::size_t dim = out.dim();
    return Fixture{"acyclic:" + std::to_string(k), std::move(out), zero_vec(dim)};
}

/// Seeded random operator pair (δ, Δ) with δ² = Δ² = δΔ + Δδ = 0, assembled
/// from indecomposable blocks and conjugated by a random invertible matrix.
/// Blocks other than dots and full squares break the quasi-isomorphism
/// conditions.
inline std::pair<Matrix, Matrix> random_operator_pair(std::size_t dim, std::mt19937_64& rng)
{
    Matrix d(dim, dim), D(dim, dim);
    std::size_t at = 0;
    std::uniform_int_distribution<int> kind(0, 5);
    while (at < dim) {
        const std::size_t left = dim - at;
        int k = kind(rng);
        if (left < 4 && k == 3)
            k = 5;
        if (left < 3 && (k == 1 || k == 2))
            k = 5;
        if (left < 2 && k == 4)
            k = 0;
        switch (k) {
        case 0: // dot
            at += 1;
            break;
        case 4: // δ-segment or Δ-segment
            if (rng() % 2)
                d(at + 1, at) = 1;
            else
                D(at + 1, at) = 1;
            at += 2;
            break;
        case 1: // wedge: δa = u, Δa = v
            d(at + 1, at) = 1;
            D(at + 2, at) = 1;
            at += 3;
            break;
        case 2: // vee: δa = c, Δb = c
            d(at + 2, at) = 1;
            D(at + 2, at + 1) = 1;
            at += 3;
            break;
        case 3: // full square
            d(at + 1, at) = 1;
            D(at + 2, at) = 1;
            D(at + 3, at + 1) = -1;
            d(at + 3, at + 2) = 1;
            at += 4;
            break;
        default: // dot
            at += 1;
            break;
        }
    }
    // conjugate by P = unit lower triangular * unit upper triangular
    Matrix P = Matrix::identity(dim);
    std::uniform_int_distribution<int> entry(-2, 2);
    Matrix L = Matrix::identity(dim), U = Matrix::identity(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            L(i, j) = entry(rng);
            U(j, i) = entry(rng);
        }
    P = L.compose(U);
    // P^{-1} by solving P X = I column by column
    Matrix Pinv(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        auto x = solve_linear(P, unit_vec(dim, c));
        for (std::size_t r = 0; r < dim; ++r)
            Pinv(r, c) = (*x)[r];
    }
    return {P.compose(d).compose(Pinv), P.compose(D).compose(Pinv)};
}

} // namespace dgbv
