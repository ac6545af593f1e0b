#pragma once

#include "dgbv/dgbv.hpp"

namespace dgbv {

/// Tensor product with Koszul signs: (a⊗b)∧(c⊗d) = (-1)^{|b||c|}(a∧c)⊗(b∧d),
/// δ = δ_A⊗1 + 1⊗δ_B (same shift required), likewise Δ.
inline DGBVStructure tensor_product(const DGBVStructure& A, const DGBVStructure& B)
{
    if (A.delta.degree_shift != B.delta.degree_shift ||
        A.Delta.degree_shift != B.Delta.degree_shift)
        throw std::invalid_argument("tensor_product: operator degree shifts differ");
    const std::size_t na = A.dim(), nb = B.dim();
    const std::size_t n = na * nb;
    auto idx = [nb](std::size_t i, std::size_t j) { return i * nb + j; };

    GradedBasis basis;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            basis.labels.push_back(A.algebra.basis.labels[i] + "|" +
                                   B.algebra.basis.labels[j]);
            basis.degrees.push_back(A.algebra.basis.degrees[i] +
                                    B.algebra.basis.degrees[j]);
        }
    GradedAlgebra alg(basis, idx(A.algebra.unit_index, B.algebra.unit_index));

    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l) {
                    const auto& pa = A.algebra.basis_product(i, k);
                    if (pa.empty())
                        continue;
                    const auto& pb = B.algebra.basis_product(j, l);
                    if (pb.empty())
                        continue;
                    int sign = (B.algebra.basis.parity(j) * A.algebra.basis.parity(k)) % 2
                                   ? -1
                                   : 1;
                    SparseVec out;
                    for (const auto& [u, cu] : pa)
                        for (const auto& [v, cv] : pb)
                            out.emplace_back(idx(u, v), Rational(sign) * cu * cv);
                    std::sort(out.begin(), out.end(),
                              [](const auto& x, const auto& y) { return x.first < y.first; });
                    alg.set_product(idx(i, j), idx(k, l), std::move(out));
                }

    auto extend = [&](const Matrix& opa, const Matrix& opb, long shift) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb; ++j) {
                for (std::size_t k = 0; k < na; ++k)
                    if (!(opa(k, i) == 0))
                        m(idx(k, j), idx(i, j)) += opa(k, i);
                const int sign = A.algebra.basis.parity(i) ? -1 : 1;
                for (std::size_t l = 0; l < nb; ++l)
                    if (!(opb(l, j) == 0))
                        m(idx(i, l), idx(i, j)) += Rational(sign) * opb(l, j);
            }
        return LinearOperator{std::move(m), shift};
    };
    return DGBVStructure(std::move(alg),
                         extend(A.delta.matrix, B.delta.matrix, A.delta.degree_shift),
                         extend(A.Delta.matrix, B.Delta.matrix, A.Delta.degree_shift));
}

/// Direct sum with componentwise operations. The unit is 1_A + 1_B, so the
/// basis is rewritten: the slot of 1_A holds the new unit u = 1_A + 1_B and
/// products are re-expressed via 1_A = u - 1_B.
inline DGBVStructure direct_sum(const DGBVStructure& A, const DGBVStructure& B)
{
    if (A.delta.degree_shift != B.delta.degree_shift ||
        A.Delta.degree_shift != B.Delta.degree_shift)
        throw std::invalid_argument("direct_sum: operator degree shifts differ");
    const std::size_t na = A.dim(), nb = B.dim();
    const std::size_t n = na + nb;
    const std::size_t ua = A.algebra.unit_index;
    const std::size_t ub = na + B.algebra.unit_index;

    GradedBasis basis;
    for (std::size_t i = 0; i < na; ++i) {
        basis.labels.push_back(i == ua ? std::string("one")
                                       : "L." + A.algebra.basis.labels[i]);
        basis.degrees.push_back(A.algebra.basis.degrees[i]);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        basis.labels.push_back("R." + B.algebra.basis.labels[j]);
        basis.degrees.push_back(B.algebra.basis.degrees[j]);
    }

    // old coordinates -> new coordinates (1_A = u - 1_B)
    auto rewrite = [&](Vec v) {
        const Rational a = v[ua];
        v[ub] -= a;
        return v;
    };
    // new basis element as an old-coordinates vector
    auto embed = [&](std::size_t i) {
        Vec v = unit_vec(n, i);
        if (i == ua)
            v[ub] = 1; // u = 1_A + 1_B
        return v;
    };
    auto old_multiply = [&](const Vec& x, const Vec& y) {
        Vec out(n, Rational(0));
        Vec xa(x.begin(), x.begin() + na), ya(y.begin(), y.begin() + na);
        Vec xb(x.begin() + na, x.end()), yb(y.begin() + na, y.end());
        Vec pa = A.algebra.multiply(xa, ya);
        Vec pb = B.algebra.multiply(xb, yb);
        std::copy(pa.begin(), pa.end(), out.begin());
        std::copy(pb.begin(), pb.end(), out.begin() + na);
        return out;
    };

    GradedAlgebra alg(basis, ua);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            alg.set_product(i, j, to_sparse(rewrite(old_multiply(embed(i), embed(j)))));

    auto extend = [&](const Matrix& ma, const Matrix& mb, long shift) {
        Matrix m(n, n);
        for (std::size_t col = 0; col < n; ++col) {
            Vec e = embed(col);
            Vec img(n, Rational(0));
            Vec ea(e.begin(), e.begin() + na), eb(e.begin() + na, e.end());
            Vec ia = ma.apply(ea), ib = mb.apply(eb);
            std::copy(ia.begin(), ia.end(), img.begin());
            std::copy(ib.begin(), ib.end(), img.begin() + na);
            img = rewrite(img);
            for (std::size_t r = 0; r < n; ++r)
                m(r, col) = img[r];
        }
        return LinearOperator{std::move(m), shift};
    };
    return DGBVStructure(std::move(alg),
                         extend(A.delta.matrix, B.delta.matrix, A.delta.degree_shift),
                         extend(A.Delta.matrix, B.Delta.matrix, A.Delta.degree_shift));
}

/// Integral on a tensor product: I(a⊗b) = I_A(a) I_B(b).
inline Vec tensor_integral(const Vec& ia, const Vec& ib)
{
    Vec out(ia.size() * ib.size());
    for (std::size_t i = 0; i < ia.size(); ++i)
        for (std::size_t j = 0; j < ib.size(); ++j)
            out[i * ib.size() + j] = ia[i] * ib[j];
    return out;
}

/// Integral on a direct sum (values transported through the unit rewrite).
inline Vec direct_sum_integral(const DGBVStructure& A, const DGBVStructure& B,
                               const Vec& ia, const Vec& ib)
{
    const std::size_t na = ia.size();
    Vec out(na + ib.size());
    for (std::size_t i = 0; i < na; ++i)
        out[i] = ia[i];
    for (std::size_t j = 0; j < ib.size(); ++j)
        out[na + j] = ib[j];
    // value on the new unit u = 1_A + 1_B
    out[A.algebra.unit_index] = ia[A.algebra.unit_index] + ib[B.algebra.unit_index];
    return out;
}

} // namespace dgbv
