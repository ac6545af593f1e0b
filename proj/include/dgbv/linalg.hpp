#pragma once

#include "dgbv/rational.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>
#include <vector>

namespace dgbv {

using Vec = std::vector<Rational>;

inline bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline Vec zero_vec(std::size_t n) { return Vec(n, Rational(0)); }

inline Vec unit_vec(std::size_t n, std::size_t i)
{
    Vec v(n, Rational(0));
    v[i] = 1;
    return v;
}

inline Vec& add_scaled(Vec& a, const Rational& c, const Vec& b)
{
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += c * b[i];
    return a;
}

inline Vec operator+(Vec a, const Vec& b) { return add_scaled(a, Rational(1), b); }
inline Vec operator-(Vec a, const Vec& b) { return add_scaled(a, Rational(-1), b); }

inline Vec operator*(const Rational& c, Vec a)
{
    for (auto& x : a)
        x *= c;
    return a;
}

/// Dense exact matrix, row major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0))
    {
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Vec apply(const Vec& x) const
    {
        assert(x.size() == cols_);
        Vec y(rows_, Rational(0));
        for (std::size_t r = 0; r < rows_; ++r) {
            Rational acc(0);
            for (std::size_t c = 0; c < cols_; ++c)
                if (!(data_[r * cols_ + c] == 0))
                    acc += data_[r * cols_ + c] * x[c];
            y[r] = acc;
        }
        return y;
    }

    Matrix compose(const Matrix& rhs) const // (*this) ∘ rhs
    {
        assert(cols_ == rhs.rows_);
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (a == 0)
                    continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    if (!(rhs(k, j) == 0))
                        out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    Matrix operator+(const Matrix& o) const
    {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Matrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] += o.data_[i];
        return out;
    }

    Matrix operator-() const
    {
        Matrix out = *this;
        for (auto& x : out.data_)
            x = -x;
        return out;
    }

    Matrix scaled(const Rational& c) const
    {
        Matrix out = *this;
        for (auto& x : out.data_)
            x *= c;
        return out;
    }

    bool is_zero_matrix() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
    }

    Vec row(std::size_t r) const
    {
        return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }

    Vec col(std::size_t c) const
    {
        Vec v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    void set_row(std::size_t r, const Vec& v)
    {
        assert(v.size() == cols_);
        std::copy(v.begin(), v.end(), data_.begin() + r * cols_);
    }

    Matrix transposed() const
    {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out(c, r) = (*this)(r, c);
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// In-place reduced row echelon form with the leftmost-pivot rule.
/// Returns pivot column indices in row order.
inline std::vector<std::size_t> rref_in_place(Matrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == 0)
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c)
                std::swap(m(sel, c), m(row, c));
        Rational inv = Rational(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c)
            m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0)
                continue;
            Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Row space in reduced row echelon form; the canonical representation of a
/// subspace of Q^n (RREF bases are unique, so equality is matrix equality).
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    /// Builds the span of the given vectors.
    static Subspace span(std::size_t ambient, const std::vector<Vec>& gens)
    {
        Matrix m(gens.size(), ambient);
        for (std::size_t i = 0; i < gens.size(); ++i)
            m.set_row(i, gens[i]);
        auto pivots = rref_in_place(m);
        Subspace s(ambient);
        s.pivots_ = std::move(pivots);
        for (std::size_t i = 0; i < s.pivots_.size(); ++i)
            s.rows_.push_back(m.row(i));
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<Vec>& basis() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Vec& v) const { return is_zero(reduce(v)); }

    /// Residual of v after reduction against the RREF rows.
    Vec reduce(Vec v) const
    {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational& c = v[pivots_[i]];
            if (!(c == 0))
                add_scaled(v, -c, rows_[i]);
        }
        return v;
    }

    /// Coordinates of v in the RREF basis; nullopt if v is outside the span.
    std::optional<Vec> coordinates(const Vec& v) const
    {
        Vec coeff(rows_.size(), Rational(0));
        Vec r = v;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational c = r[pivots_[i]];
            if (!(c == 0)) {
                add_scaled(r, -c, rows_[i]);
                coeff[i] = c;
            }
        }
        if (!is_zero(r))
            return std::nullopt;
        return coeff;
    }

    bool operator==(const Subspace& o) const
    {
        return ambient_ == o.ambient_ && rows_ == o.rows_ && pivots_ == o.pivots_;
    }

    bool contains_subspace(const Subspace& o) const
    {
        return std::all_of(o.rows_.begin(), o.rows_.end(),
                           [&](const Vec& v) { return contains(v); });
    }

private:
    std::size_t ambient_ = 0;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

inline Subspace subspace_sum(const Subspace& a, const Subspace& b)
{
    assert(a.ambient_dim() == b.ambient_dim());
    std::vector<Vec> gens = a.basis();
    gens.insert(gens.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), gens);
}

/// Column space of m as a subspace of Q^rows.
inline Subspace image(const Matrix& m)
{
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        cols.push_back(m.col(c));
    return Subspace::span(m.rows(), cols);
}

/// Null space of m; basis produced by the deterministic free-variable rule
/// (each non-pivot column yields one generator).
inline Subspace kernel(const Matrix& m)
{
    Matrix r = m;
    auto pivots = rref_in_place(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<Vec> gens;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        Vec v(m.cols(), Rational(0));
        v[c] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -r(i, c);
        gens.push_back(std::move(v));
    }
    return Subspace::span(m.cols(), gens);
}

inline Subspace subspace_intersection(const Subspace& a, const Subspace& b)
{
    assert(a.ambient_dim() == b.ambient_dim());
    const std::size_t n = a.ambient_dim();
    const std::size_t da = a.dim(), db = b.dim();
    // x in both spans: x = sum u_i a_i = sum w_j b_j; kernel of [A^T | -B^T].
    Matrix m(n, da + db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t r = 0; r < n; ++r)
            m(r, i) = a.basis()[i][r];
    for (std::size_t j = 0; j < db; ++j)
        for (std::size_t r = 0; r < n; ++r)
            m(r, da + j) = -b.basis()[j][r];
    Subspace ker = kernel(m);
    std::vector<Vec> gens;
    for (const Vec& k : ker.basis()) {
        Vec x(n, Rational(0));
        for (std::size_t i = 0; i < da; ++i)
            if (!(k[i] == 0))
                add_scaled(x, k[i], a.basis()[i]);
        gens.push_back(std::move(x));
    }
    return Subspace::span(n, gens);
}

/// dim(V/W); requires W ⊆ V.
inline std::size_t quotient_dim(const Subspace& v, const Subspace& w)
{
    if (!v.contains_subspace(w))
        throw std::invalid_argument("quotient_dim: denominator is not contained in numerator");
    return v.dim() - w.dim();
}

/// Solves M x = b. Deterministic: leftmost pivots, free variables set to
/// zero. With restrict_to, the solution is constrained to that subspace.
/// Returns nullopt when the system is inconsistent.
inline std::optional<Vec> solve_linear(const Matrix& m, const Vec& b,
                                       const Subspace* restrict_to = nullptr)
{
    assert(b.size() == m.rows());
    if (restrict_to != nullptr) {
        assert(restrict_to->ambient_dim() == m.cols());
        const auto& sb = restrict_to->basis();
        Matrix ms(m.rows(), sb.size());
        for (std::size_t j = 0; j < sb.size(); ++j) {
            Vec col = m.apply(sb[j]);
            for (std::size_t r = 0; r < m.rows(); ++r)
                ms(r, j) = col[r];
        }
        auto c = solve_linear(ms, b);
        if (!c)
            return std::nullopt;
        Vec x(m.cols(), Rational(0));
        for (std::size_t j = 0; j < sb.size(); ++j)
            if (!((*c)[j] == 0))
                add_scaled(x, (*c)[j], sb[j]);
        return x;
    }
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    auto pivots = rref_in_place(aug);
    Vec x(m.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == m.cols())
            return std::nullopt; // pivot in the constant column
        x[pivots[i]] = aug(i, m.cols());
    }
    return x;
}

/// Rank via fraction-free (Bareiss) elimination on the cleared-denominator
/// integer matrix. Independent of rref_in_place; used as a cross-check.
inline std::size_t rank_bareiss(const Matrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        Integer lcm = 1;
        for (std::size_t c = 0; c < cols; ++c)
            lcm = boost::multiprecision::lcm(lcm, denominator(m(r, c)));
        for (std::size_t c = 0; c < cols; ++c) {
            Rational s = m(r, c) * lcm;
            a[r][c] = numerator(s);
        }
    }
    std::size_t rank = 0;
    Integer prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t sel = row;
        while (sel < rows && a[sel][col] == 0)
            ++sel;
        if (sel == rows)
            continue;
        if (sel != row)
            std::swap(a[sel], a[row]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c)
                a[r][c] = (a[r][c] * a[row][col] - a[r][col] * a[row][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[row][col];
        ++rank;
        ++row;
    }
    return rank;
}

} // namespace dgbv
