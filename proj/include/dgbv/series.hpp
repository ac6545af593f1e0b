#pragma once

#include "dgbv/dgbv.hpp"

#include <map>
#include <memory>
#include <numeric>
#include <sstream>

namespace dgbv {

/// Parameter pack for truncated super power series.
struct ParamSpec {
    std::vector<std::string> names;
    std::vector<int> parities; // 0 even, 1 odd
    int order = 6;             // truncation: monomials of total degree > order vanish

    std::size_t count() const { return names.size(); }
    bool operator==(const ParamSpec& o) const
    {
        return names == o.names && parities == o.parities && order == o.order;
    }
};

using ParamSpecPtr = std::shared_ptr<const ParamSpec>;

inline ParamSpecPtr make_spec(std::vector<std::string> names, std::vector<int> parities,
                              int order)
{
    auto s = std::make_shared<ParamSpec>();
    s->names = std::move(names);
    s->parities = std::move(parities);
    s->order = order;
    return s;
}

inline ParamSpecPtr epsilon_spec(int order = 6)
{
    return make_spec({"eps"}, {1}, order);
}

inline ParamSpecPtr one_param_spec(int order = 6)
{
    return make_spec({"t"}, {0}, order);
}

using Mono = std::vector<int>; // exponents per parameter

inline int mono_degree(const Mono& m) { return std::accumulate(m.begin(), m.end(), 0); }

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const
    {
        const int da = mono_degree(a), db = mono_degree(b);
        if (da != db)
            return da < db;
        return a < b;
    }
};

inline int mono_parity(const Mono& m, const ParamSpec& spec)
{
    int p = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        p += m[i] * spec.parities[i];
    return p % 2;
}

/// Product of two normal-form monomials; nullopt when an odd parameter
/// squares to zero. The sign counts transpositions of odd parameters.
inline std::optional<std::pair<Mono, int>> mono_multiply(const Mono& a, const Mono& b,
                                                         const ParamSpec& spec)
{
    Mono out(a.size());
    int swaps = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (spec.parities[i] && a[i] && b[i])
            return std::nullopt;
        out[i] = a[i] + b[i];
        if (spec.parities[i] && a[i])
            for (std::size_t j = 0; j < i; ++j)
                if (spec.parities[j] && b[j])
                    ++swaps;
    }
    return std::make_pair(std::move(out), swaps % 2 ? -1 : 1);
}

namespace coeff {
inline bool is_zero_coeff(const Rational& c) { return c == 0; }
inline bool is_zero_coeff(const Vec& v) { return is_zero(v); }
inline void add_to(Rational& a, const Rational& c, const Rational& b) { a += c * b; }
inline void add_to(Vec& a, const Rational& c, const Vec& b) { add_scaled(a, c, b); }
} // namespace coeff

/// Truncated super power series with coefficients written to the left of the
/// parameter monomial (normal form: parameters in ascending index order).
template <class C>
class Series {
public:
    ParamSpecPtr spec;
    std::map<Mono, C, MonoLess> terms;

    Series() = default;
    explicit Series(ParamSpecPtr s) : spec(std::move(s)) {}

    bool is_zero_series() const { return terms.empty(); }
    int truncation() const { return spec->order; }

    void add_term(const Mono& m, const C& c, const Rational& scale = Rational(1))
    {
        if (coeff::is_zero_coeff(c) || scale == 0)
            return;
        if (mono_degree(m) > spec->order)
            return;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (spec->parities[i] && m[i] > 1)
                return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            C v = c;
            zero_out(v);
            coeff::add_to(v, scale, c);
            if (!coeff::is_zero_coeff(v))
                terms.emplace(m, std::move(v));
        } else {
            coeff::add_to(it->second, scale, c);
            if (coeff::is_zero_coeff(it->second))
                terms.erase(it);
        }
    }

    Series& operator+=(const Series& o)
    {
        check_spec(o);
        for (const auto& [m, c] : o.terms)
            add_term(m, c);
        return *this;
    }

    Series& axpy(const Rational& a, const Series& o)
    {
        check_spec(o);
        for (const auto& [m, c] : o.terms)
            add_term(m, c, a);
        return *this;
    }

    Series operator+(const Series& o) const
    {
        Series out = *this;
        out += o;
        return out;
    }

    Series operator-(const Series& o) const
    {
        Series out = *this;
        out.axpy(Rational(-1), o);
        return out;
    }

    Series scaled(const Rational& a) const
    {
        Series out(spec);
        out.axpy(a, *this);
        return out;
    }

    /// Terms of exact total degree k.
    Series order_part(int k) const
    {
        Series out(spec);
        for (const auto& [m, c] : terms)
            if (mono_degree(m) == k)
                out.add_term(m, c);
        return out;
    }

    Series truncated(int order) const
    {
        Series out(spec);
        for (const auto& [m, c] : terms)
            if (mono_degree(m) <= order)
                out.add_term(m, c);
        return out;
    }

    int max_order() const
    {
        int k = 0;
        for (const auto& [m, c] : terms)
            k = std::max(k, mono_degree(m));
        return k;
    }

    C coefficient(const Mono& m, const C& zero) const
    {
        auto it = terms.find(m);
        return it == terms.end() ? zero : it->second;
    }

    template <class C2>
    void check_spec(const Series<C2>& o) const
    {
        if (!(*spec == *o.spec))
            throw std::invalid_argument("series parameter specs differ");
    }

private:
    static void zero_out(Rational& r) { r = 0; }
    static void zero_out(Vec& v) { std::fill(v.begin(), v.end(), Rational(0)); }
};

using AlgSeries = Series<Vec>;
using ScalarSeries = Series<Rational>;

inline Mono zero_mono(const ParamSpec& spec) { return Mono(spec.count(), 0); }

inline Mono param_mono(const ParamSpec& spec, std::size_t i, int e = 1)
{
    Mono m = zero_mono(spec);
    m[i] = e;
    return m;
}

inline AlgSeries constant_series(ParamSpecPtr spec, const Vec& v)
{
    AlgSeries s(std::move(spec));
    s.add_term(zero_mono(*s.spec), v);
    return s;
}

inline ScalarSeries constant_series(ParamSpecPtr spec, const Rational& c)
{
    ScalarSeries s(std::move(spec));
    s.add_term(zero_mono(*s.spec), c);
    return s;
}

// Parity split of an algebra coefficient.
inline std::pair<Vec, Vec> parity_split(const Vec& v, const GradedBasis& b)
{
    Vec even = zero_vec(v.size()), odd = zero_vec(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0)
            continue;
        (b.parity(i) ? odd : even)[i] = v[i];
    }
    return {std::move(even), std::move(odd)};
}

/// Koszul product: (x·m)(y·m') = (-1)^{p(m)p(y)} (x∧y)·(m∧m').
inline AlgSeries series_multiply(const GradedAlgebra& A, const AlgSeries& f,
                                 const AlgSeries& g)
{
    f.check_spec(g);
    AlgSeries out(f.spec);
    for (const auto& [m1, c1] : f.terms)
        for (const auto& [m2, c2] : g.terms) {
            if (mono_degree(m1) + mono_degree(m2) > f.spec->order)
                continue;
            auto mm = mono_multiply(m1, m2, *f.spec);
            if (!mm)
                continue;
            const int pm = mono_parity(m1, *f.spec);
            auto [even, odd] = parity_split(c2, A.basis);
            Vec prod = A.multiply(c1, even);
            add_scaled(prod, Rational(pm ? -1 : 1), A.multiply(c1, odd));
            out.add_term(mm->first, prod, Rational(mm->second));
        }
    return out;
}

inline ScalarSeries series_multiply(const ScalarSeries& f, const ScalarSeries& g)
{
    f.check_spec(g);
    ScalarSeries out(f.spec);
    for (const auto& [m1, c1] : f.terms)
        for (const auto& [m2, c2] : g.terms) {
            if (mono_degree(m1) + mono_degree(m2) > f.spec->order)
                continue;
            auto mm = mono_multiply(m1, m2, *f.spec);
            if (!mm)
                continue;
            out.add_term(mm->first, c1 * c2, Rational(mm->second));
        }
    return out;
}

/// Scalar series times algebra-valued series.
inline AlgSeries series_multiply(const GradedBasis& basis, const ScalarSeries& f,
                                 const AlgSeries& g)
{
    f.check_spec(g);
    AlgSeries out(g.spec);
    for (const auto& [m1, c1] : f.terms)
        for (const auto& [m2, c2] : g.terms) {
            if (mono_degree(m1) + mono_degree(m2) > g.spec->order)
                continue;
            auto mm = mono_multiply(m1, m2, *g.spec);
            if (!mm)
                continue;
            const int pm = mono_parity(m1, *g.spec);
            auto [even, odd] = parity_split(c2, basis);
            Vec prod = c1 * even;
            add_scaled(prod, Rational(pm ? -1 : 1), c1 * odd);
            out.add_term(mm->first, prod, Rational(mm->second));
        }
    return out;
}

/// Coefficientwise operator application (coefficient-left normal form, so no
/// parameter signs appear; the Koszul commutation rules are identities the
/// tests verify rather than inputs here).
inline AlgSeries apply_operator(const LinearOperator& op, const AlgSeries& f)
{
    AlgSeries out(f.spec);
    for (const auto& [m, c] : f.terms)
        out.add_term(m, op.apply(c));
    return out;
}

/// Bracket extension: [x·m . y·m'] = (-1)^{p(m)(p(y)+1)} [x.y]·(m∧m').
inline AlgSeries bracket_series(const DGBVStructure& D, const AlgSeries& f,
                                const AlgSeries& g)
{
    f.check_spec(g);
    AlgSeries out(f.spec);
    for (const auto& [m1, c1] : f.terms)
        for (const auto& [m2, c2] : g.terms) {
            if (mono_degree(m1) + mono_degree(m2) > f.spec->order)
                continue;
            auto mm = mono_multiply(m1, m2, *f.spec);
            if (!mm)
                continue;
            const int pm = mono_parity(m1, *f.spec);
            auto [even, odd] = parity_split(c2, D.algebra.basis);
            // p(y)+1: even part of y contributes sign (-1)^{p(m)}
            Vec br = Rational(pm ? -1 : 1) * D.derived_bracket(c1, even);
            add_scaled(br, Rational(1), D.derived_bracket(c1, odd));
            out.add_term(mm->first, br, Rational(mm->second));
        }
    return out;
}

/// Left partial derivative of a scalar series.
inline ScalarSeries left_partial(const ScalarSeries& f, std::size_t alpha)
{
    ScalarSeries out(f.spec);
    for (const auto& [m, c] : f.terms) {
        if (m[alpha] == 0)
            continue;
        Mono d = m;
        d[alpha] -= 1;
        if (f.spec->parities[alpha]) {
            int crossings = 0; // odd parameters standing left of t^alpha
            for (std::size_t j = 0; j < alpha; ++j)
                if (f.spec->parities[j] && m[j])
                    ++crossings;
            out.add_term(d, c, Rational(crossings % 2 ? -1 : 1));
        } else {
            out.add_term(d, c, Rational(m[alpha]));
        }
    }
    return out;
}

/// Coefficientwise integral: algebra-valued series -> scalar series.
inline ScalarSeries integrate_series(const Vec& integral, const AlgSeries& f)
{
    ScalarSeries out(f.spec);
    for (const auto& [m, c] : f.terms) {
        Rational acc(0);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == 0))
                acc += integral[i] * c[i];
        out.add_term(m, acc);
    }
    return out;
}

inline std::string format_mono(const Mono& m, const ParamSpec& spec)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        if (!first)
            os << "*";
        os << spec.names[i];
        if (m[i] > 1)
            os << "^" << m[i];
        first = false;
    }
    return first ? "1" : os.str();
}

inline std::string format_series(const ScalarSeries& f)
{
    if (f.is_zero_series())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms) {
        if (!first)
            os << " + ";
        os << to_string(c) << " " << format_mono(m, *f.spec);
        first = false;
    }
    return os.str();
}

inline std::string format_series(const AlgSeries& f, const GradedAlgebra& A)
{
    if (f.is_zero_series())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms) {
        if (!first)
            os << " + ";
        os << "[" << A.format_element(c) << "] " << format_mono(m, *f.spec);
        first = false;
    }
    return os.str();
}

} // namespace dgbv
