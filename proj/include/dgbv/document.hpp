#pragma once

#include "dgbv/examples.hpp"

#include <sstream>

namespace dgbv {

/// Parse failure with a 1-based location.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " +
                             std::to_string(c) + ": " + msg),
          line(l), column(c)
    {
    }
};

/// Text form of a structure: basis, unit, sparse products, sparse operator
/// columns, integral values, optional named classes and truncation order.
struct AlgebraDocument {
    struct Entry {
        std::string label;
        std::vector<std::pair<Rational, std::string>> combination;
    };
    std::vector<std::pair<std::string, long>> basis; // label, degree
    std::string unit_label;
    std::vector<std::tuple<std::string, std::string, Entry>> products; // (a, b) -> combo
    std::vector<Entry> delta_columns;
    std::vector<Entry> Delta_columns;
    std::vector<std::pair<std::string, Rational>> integral;
    std::vector<Entry> classes; // named harmonic combinations
    int truncation = 6;
};

namespace detail {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance()
    {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
};

inline void skip_space_and_comments(Cursor& c, bool stop_at_newline)
{
    while (!c.eof()) {
        char ch = c.peek();
        if (ch == '#') {
            while (!c.eof() && c.peek() != '\n')
                c.advance();
        } else if (ch == ' ' || ch == '\t' || ch == '\r' ||
                   (!stop_at_newline && ch == '\n')) {
            c.advance();
        } else {
            break;
        }
    }
}

inline std::string next_token(Cursor& c)
{
    skip_space_and_comments(c, true);
    std::string t;
    while (!c.eof()) {
        char ch = c.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '#')
            break;
        t += ch;
        c.advance();
    }
    return t;
}

inline void end_line(Cursor& c)
{
    skip_space_and_comments(c, true);
    if (!c.eof() && c.peek() != '\n')
        throw ParseError(c.line, c.col, "unexpected trailing token");
    if (!c.eof())
        c.advance();
}

inline long parse_integer(Cursor& c, const std::string& tok)
{
    try {
        std::size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(c.line, c.col, "not an integer: '" + tok + "'");
    }
}

inline Rational parse_rational_at(Cursor& c, const std::string& tok)
{
    try {
        return parse_rational(tok);
    } catch (const std::invalid_argument&) {
        throw ParseError(c.line, c.col, "not a rational literal: '" + tok + "'");
    }
}

inline AlgebraDocument::Entry parse_combination(Cursor& c, const std::string& label)
{
    AlgebraDocument::Entry e;
    e.label = label;
    while (true) {
        skip_space_and_comments(c, true);
        if (c.eof() || c.peek() == '\n')
            break;
        std::string coeff_tok = next_token(c);
        Rational coeff = parse_rational_at(c, coeff_tok);
        std::string target = next_token(c);
        if (target.empty())
            throw ParseError(c.line, c.col, "expected a basis label after coefficient");
        e.combination.emplace_back(coeff, target);
    }
    return e;
}

} // namespace detail

/// Parses the text form; throws ParseError with a location on bad input.
inline AlgebraDocument parse_document(const std::string& text)
{
    using namespace detail;
    AlgebraDocument doc;
    Cursor c{text};
    bool in_basis = false;
    while (true) {
        skip_space_and_comments(c, false);
        if (c.eof())
            break;
        const int kw_line = c.line, kw_col = c.col;
        std::string kw = next_token(c);
        if (kw.empty()) {
            end_line(c);
            continue;
        }
        if (in_basis) {
            if (kw == "end") {
                in_basis = false;
                end_line(c);
                continue;
            }
            std::string deg_tok = next_token(c);
            if (deg_tok.empty())
                throw ParseError(c.line, c.col, "basis entry needs 'label degree'");
            long deg = parse_integer(c, deg_tok);
            for (const auto& [l, d] : doc.basis)
                if (l == kw)
                    throw ParseError(kw_line, kw_col, "duplicate basis label '" + kw + "'");
            doc.basis.emplace_back(kw, deg);
            end_line(c);
            continue;
        }
        if (kw == "basis") {
            in_basis = true;
            end_line(c);
        } else if (kw == "truncation") {
            std::string t = next_token(c);
            long v = parse_integer(c, t);
            if (v < 1 || v > 12)
                throw ParseError(kw_line, kw_col, "truncation must be between 1 and 12");
            doc.truncation = static_cast<int>(v);
            end_line(c);
        } else if (kw == "unit") {
            doc.unit_label = next_token(c);
            if (doc.unit_label.empty())
                throw ParseError(c.line, c.col, "unit needs a label");
            end_line(c);
        } else if (kw == "product") {
            std::string a = next_token(c);
            std::string b = next_token(c);
            std::string eq = next_token(c);
            if (a.empty() || b.empty() || eq != "=")
                throw ParseError(kw_line, kw_col, "expected: product <a> <b> = ...");
            doc.products.emplace_back(a, b, parse_combination(c, a));
            end_line(c);
        } else if (kw == "delta" || kw == "Delta") {
            std::string a = next_token(c);
            std::string eq = next_token(c);
            if (a.empty() || eq != "=")
                throw ParseError(kw_line, kw_col, "expected: " + kw + " <a> = ...");
            auto entry = parse_combination(c, a);
            (kw == "delta" ? doc.delta_columns : doc.Delta_columns).push_back(entry);
            end_line(c);
        } else if (kw == "integral") {
            std::string a = next_token(c);
            std::string eq = next_token(c);
            std::string v = next_token(c);
            if (a.empty() || eq != "=" || v.empty())
                throw ParseError(kw_line, kw_col, "expected: integral <a> = <value>");
            doc.integral.emplace_back(a, parse_rational_at(c, v));
            end_line(c);
        } else if (kw == "class") {
            std::string name = next_token(c);
            std::string eq = next_token(c);
            if (name.empty() || eq != "=")
                throw ParseError(kw_line, kw_col, "expected: class <name> = ...");
            doc.classes.push_back(parse_combination(c, name));
            end_line(c);
        } else {
            throw ParseError(kw_line, kw_col, "unknown keyword '" + kw + "'");
        }
    }
    if (in_basis)
        throw ParseError(c.line, c.col, "basis block not closed with 'end'");
    if (doc.basis.empty())
        throw ParseError(1, 1, "basis must be nonempty");
    if (doc.unit_label.empty())
        throw ParseError(1, 1, "missing unit declaration");
    return doc;
}

/// Builds the exact structure; semantic errors carry the offending label.
struct BuiltDocument {
    DGBVStructure D;
    Vec integral;
    std::vector<std::pair<std::string, Vec>> classes;
    int truncation = 6;
};

inline BuiltDocument build_document(const AlgebraDocument& doc)
{
    GradedBasis basis;
    for (const auto& [l, d] : doc.basis) {
        basis.labels.push_back(l);
        basis.degrees.push_back(d);
    }
    basis.check();
    const std::size_t n = basis.dim();
    auto index_of = [&](const std::string& l) -> std::size_t {
        for (std::size_t i = 0; i < n; ++i)
            if (basis.labels[i] == l)
                return i;
        throw std::invalid_argument("unknown basis label '" + l + "'");
    };
    GradedAlgebra alg(basis, index_of(doc.unit_label));
    // implicit unit products
    for (std::size_t i = 0; i < n; ++i) {
        alg.set_product(alg.unit_index, i, SparseVec{{i, Rational(1)}});
        if (i != alg.unit_index)
            alg.set_product(i, alg.unit_index, SparseVec{{i, Rational(1)}});
    }
    auto combo_to_vec = [&](const AlgebraDocument::Entry& e) {
        Vec v = zero_vec(n);
        for (const auto& [coeff, label] : e.combination)
            v[index_of(label)] += coeff;
        return v;
    };
    for (const auto& [a, b, e] : doc.products)
        alg.set_product(index_of(a), index_of(b), to_sparse(combo_to_vec(e)));

    auto build_op = [&](const std::vector<AlgebraDocument::Entry>& cols) {
        Matrix m(n, n);
        for (const auto& e : cols) {
            Vec v = combo_to_vec(e);
            const std::size_t c = index_of(e.label);
            for (std::size_t r = 0; r < n; ++r)
                m(r, c) = v[r];
        }
        return m;
    };
    Matrix dmat = build_op(doc.delta_columns);
    Matrix Dmat = build_op(doc.Delta_columns);
    // degree shifts inferred from the first nonzero entry; default odd shifts
    auto infer_shift = [&](const Matrix& m, long fallback) {
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t row = 0; row < n; ++row)
                if (!(m(row, col) == 0))
                    return basis.degrees[row] - basis.degrees[col];
        return fallback;
    };
    LinearOperator delta{dmat, infer_shift(dmat, +1)};
    LinearOperator Delta{Dmat, infer_shift(Dmat, -1)};

    BuiltDocument out{DGBVStructure(std::move(alg), std::move(delta), std::move(Delta)),
                      zero_vec(n),
                      {},
                      doc.truncation};
    for (const auto& [label, value] : doc.integral)
        out.integral[index_of(label)] += value;
    for (const auto& e : doc.classes)
        out.classes.emplace_back(e.label, combo_to_vec(e));
    return out;
}

/// Canonical text form; parse(serialize(x)) rebuilds x exactly.
inline std::string serialize_document(const DGBVStructure& D, const Vec& integral,
                                      int truncation)
{
    std::ostringstream os;
    const auto& b = D.algebra.basis;
    const std::size_t n = b.dim();
    os << "truncation " << truncation << "\n";
    os << "basis\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "  " << b.labels[i] << " " << b.degrees[i] << "\n";
    os << "end\n";
    os << "unit " << b.labels[D.algebra.unit_index] << "\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == D.algebra.unit_index || j == D.algebra.unit_index)
                continue;
            const auto& p = D.algebra.basis_product(i, j);
            if (p.empty())
                continue;
            os << "product " << b.labels[i] << " " << b.labels[j] << " =";
            for (const auto& [k, coeff] : p)
                os << " " << to_string(coeff) << " " << b.labels[k];
            os << "\n";
        }
    auto dump_op = [&](const char* kw, const Matrix& m) {
        for (std::size_t col = 0; col < n; ++col) {
            SparseVec s = sparse_col(m, col);
            if (s.empty())
                continue;
            os << kw << " " << b.labels[col] << " =";
            for (const auto& [row, coeff] : s)
                os << " " << to_string(coeff) << " " << b.labels[row];
            os << "\n";
        }
    };
    dump_op("delta", D.delta.matrix);
    dump_op("Delta", D.Delta.matrix);
    for (std::size_t i = 0; i < n; ++i)
        if (!(integral[i] == 0))
            os << "integral " << b.labels[i] << " = " << to_string(integral[i]) << "\n";
    return os.str();
}

/// Named builtin fixtures reachable from the command line:
/// trivial:N | bv:N,M | koszul:N,M (with f_i = x_i^2) | acyclic:K.
inline Fixture builtin_fixture(const std::string& name)
{
    auto bad = [&] {
        throw std::invalid_argument(
            "unknown example '" + name +
            "' (expected trivial:N, bv:N,M, koszul:N,M, acyclic:K)");
    };
    auto colon = name.find(':');
    if (colon == std::string::npos)
        bad();
    std::string kind = name.substr(0, colon);
    std::string args = name.substr(colon + 1);
    auto parse_ints = [&](std::size_t want) {
        std::vector<int> out;
        std::istringstream is(args);
        std::string piece;
        while (std::getline(is, piece, ','))
            out.push_back(std::stoi(piece));
        if (out.size() != want)
            bad();
        return out;
    };
    try {
        if (kind == "trivial")
            return trivial_exterior(parse_ints(1)[0]);
        if (kind == "bv") {
            auto v = parse_ints(2);
            return bv_model(v[0], v[1]);
        }
        if (kind == "koszul") {
            auto v = parse_ints(2);
            std::vector<Poly> f;
            for (int i = 0; i < v[0]; ++i) {
                std::vector<int> e(v[0], 0);
                e[i] = 2;
                f.push_back(Poly{{e, Rational(1)}});
            }
            Fixture fx = koszul_model(f, v[1]);
            fx.name = "koszul:" + args;
            return fx;
        }
        if (kind == "acyclic")
            return acyclic_model(parse_ints(1)[0]);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        bad();
    }
    bad();
    throw std::logic_error("unreachable");
}

} // namespace dgbv
