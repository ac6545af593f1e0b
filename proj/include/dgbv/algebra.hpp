#pragma once

#include "dgbv/linalg.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgbv {

/// Sparse coordinate vector: sorted (index, coefficient) pairs, no zeros.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

inline SparseVec to_sparse(const Vec& v)
{
    SparseVec s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] == 0))
            s.emplace_back(i, v[i]);
    return s;
}

inline Vec to_dense(const SparseVec& s, std::size_t n)
{
    Vec v(n, Rational(0));
    for (const auto& [i, c] : s)
        v[i] += c;
    return v;
}

struct GradedBasis {
    std::vector<std::string> labels;
    std::vector<long> degrees;

    std::size_t dim() const { return labels.size(); }
    int parity(std::size_t i) const { return parity_of_degree(degrees[i]); }

    void check() const
    {
        if (labels.empty())
            throw std::invalid_argument("basis must be nonempty");
        if (labels.size() != degrees.size())
            throw std::invalid_argument("basis labels/degrees size mismatch");
        std::map<std::string, int> seen;
        for (const auto& l : labels)
            if (++seen[l] > 1)
                throw std::invalid_argument("duplicate basis label '" + l + "'");
    }

    std::size_t index_of(const std::string& label) const
    {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label)
                return i;
        throw std::invalid_argument("unknown basis label '" + label + "'");
    }
};

/// Outcome of one structural check, with a witness when it fails.
struct AxiomResult {
    std::string name;
    bool pass = true;
    std::string witness; // empty iff pass

    explicit AxiomResult(std::string n) : name(std::move(n)) {}

    void fail(const std::string& w)
    {
        pass = false;
        if (witness.empty())
            witness = w;
    }
};

struct ValidationReport {
    std::vector<AxiomResult> axioms;
    bool all_pass() const
    {
        return std::all_of(axioms.begin(), axioms.end(),
                           [](const AxiomResult& a) { return a.pass; });
    }
    const AxiomResult* find(const std::string& name) const
    {
        for (const auto& a : axioms)
            if (a.name == name)
                return &a;
        return nullptr;
    }
};

/// Finite-dimensional graded commutative associative unital algebra over Q,
/// given by a basis and structure constants.
class GradedAlgebra {
public:
    GradedBasis basis;
    std::size_t unit_index = 0;

    GradedAlgebra() = default;
    GradedAlgebra(GradedBasis b, std::size_t unit)
        : basis(std::move(b)), unit_index(unit),
          products_(basis.dim(), std::vector<SparseVec>(basis.dim()))
    {
        basis.check();
        if (unit_index >= basis.dim())
            throw std::invalid_argument("unit index out of range");
    }

    std::size_t dim() const { return basis.dim(); }

    void set_product(std::size_t i, std::size_t j, SparseVec value)
    {
        products_.at(i).at(j) = std::move(value);
    }

    const SparseVec& basis_product(std::size_t i, std::size_t j) const
    {
        return products_[i][j];
    }

    Vec multiply(const Vec& x, const Vec& y) const
    {
        const std::size_t n = dim();
        if (x.size() != n || y.size() != n)
            throw std::invalid_argument("multiply: dimension mismatch");
        Vec out(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (y[j] == 0)
                    continue;
                const Rational c = x[i] * y[j];
                for (const auto& [k, s] : products_[i][j])
                    out[k] += c * s;
            }
        }
        return out;
    }

    Vec multiply_sparse(const SparseVec& x, const SparseVec& y) const
    {
        Vec out(dim(), Rational(0));
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) {
                const Rational c = a * b;
                for (const auto& [k, s] : products_[i][j])
                    out[k] += c * s;
            }
        return out;
    }

    Vec unit_vector() const { return unit_vec(dim(), unit_index); }

    /// Exhaustive check of degree additivity, graded commutativity,
    /// associativity and the unit laws over all basis tuples.
    ValidationReport validate() const
    {
        ValidationReport rep;
        const std::size_t n = dim();
        AxiomResult degree{"degree-additivity"};
        for (std::size_t i = 0; i < n && degree.pass; ++i)
            for (std::size_t j = 0; j < n && degree.pass; ++j)
                for (const auto& [k, c] : products_[i][j])
                    if (!(c == 0) &&
                        basis.degrees[k] != basis.degrees[i] + basis.degrees[j]) {
                        degree.fail("deg(" + basis.labels[i] + "*" + basis.labels[j] +
                                    ") term " + basis.labels[k]);
                        break;
                    }
        rep.axioms.push_back(degree);

        AxiomResult comm{"graded-commutativity"};
        for (std::size_t i = 0; i < n && comm.pass; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                int sign = (basis.parity(i) * basis.parity(j)) % 2 ? -1 : 1;
                Vec lhs = to_dense(products_[j][i], n);
                Vec rhs = Rational(sign) * to_dense(products_[i][j], n);
                if (!(lhs == rhs)) {
                    comm.fail("(" + basis.labels[i] + ", " + basis.labels[j] + ")");
                    break;
                }
            }
        rep.axioms.push_back(comm);

        AxiomResult assoc{"associativity"};
        for (std::size_t i = 0; i < n && assoc.pass; ++i)
            for (std::size_t j = 0; j < n && assoc.pass; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (products_[i][j].empty() && products_[j][k].empty())
                        continue;
                    Vec lhs = multiply_sparse(products_[i][j], SparseVec{{k, Rational(1)}});
                    Vec rhs = multiply_sparse(SparseVec{{i, Rational(1)}}, products_[j][k]);
                    if (!(lhs == rhs)) {
                        assoc.fail("(" + basis.labels[i] + ", " + basis.labels[j] + ", " +
                                   basis.labels[k] + ")");
                        break;
                    }
                }
        rep.axioms.push_back(assoc);

        AxiomResult unit{"unit"};
        if (basis.degrees[unit_index] != 0)
            unit.fail("unit has nonzero degree");
        for (std::size_t i = 0; i < n && unit.pass; ++i) {
            if (!(to_dense(products_[unit_index][i], n) == unit_vec(n, i)))
                unit.fail("1*" + basis.labels[i]);
            else if (!(to_dense(products_[i][unit_index], n) == unit_vec(n, i)))
                unit.fail(basis.labels[i] + "*1");
        }
        rep.axioms.push_back(unit);
        return rep;
    }

    std::string format_element(const Vec& v) const
    {
        if (is_zero(v))
            return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (v[i] == 0)
                continue;
            if (!first)
                os << " + ";
            os << to_string(v[i]) << " " << basis.labels[i];
            first = false;
        }
        return os.str();
    }

private:
    std::vector<std::vector<SparseVec>> products_;
};

/// Degree-homogeneous linear operator on a graded algebra's underlying space.
struct LinearOperator {
    Matrix matrix; // square, dim x dim
    long degree_shift = 0;

    Vec apply(const Vec& v) const { return matrix.apply(v); }

    bool well_formed(const GradedBasis& b, std::string* witness = nullptr) const
    {
        if (matrix.rows() != b.dim() || matrix.cols() != b.dim())
            return false;
        for (std::size_t k = 0; k < b.dim(); ++k)
            for (std::size_t i = 0; i < b.dim(); ++i)
                if (!(matrix(k, i) == 0) && b.degrees[k] != b.degrees[i] + degree_shift) {
                    if (witness)
                        *witness = b.labels[i] + " -> " + b.labels[k];
                    return false;
                }
        return true;
    }
};

inline LinearOperator zero_operator(std::size_t dim, long shift)
{
    return LinearOperator{Matrix(dim, dim), shift};
}

inline SparseVec sparse_col(const Matrix& m, std::size_t c)
{
    SparseVec s;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (!(m(r, c) == 0))
            s.emplace_back(r, m(r, c));
    return s;
}

inline Vec apply_sparse(const Matrix& m, const SparseVec& x)
{
    Vec out(m.rows(), Rational(0));
    for (const auto& [c, v] : x)
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!(m(r, c) == 0))
                out[r] += m(r, c) * v;
    return out;
}

} // namespace dgbv
