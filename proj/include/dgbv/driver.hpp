#pragma once

#include "dgbv/document.hpp"
#include "dgbv/morphism.hpp"
#include "dgbv/report.hpp"

#include <cstdlib>
#include <fstream>

namespace dgbv {

/// Parsed command-line request. Exit codes of run_command: 0 all checks
/// passed, 1 checks ran and found failures, 2 invalid input or usage.
struct Options {
    std::string command;
    std::string input;          // document path or "-" for stdin
    std::string example;        // builtin fixture name
    std::string target;         // document path for two-structure commands
    std::string target_example; // builtin fixture for two-structure commands
    std::string map_file;       // morphism matrix (label = coeff label ...)
    std::string pair;           // "acyclic:K" to pair with A ⊕ acyclic(K)
    std::string class_name;     // class index or named document class
    int order = 0;              // 0: document/env/default
    int trials = 10;
    std::uint64_t seed = 1;
    std::string format = "text";
};

namespace driver_detail {

struct Loaded {
    std::string name;
    DGBVStructure D;
    Vec integral;
    std::vector<std::pair<std::string, Vec>> classes;
    int truncation = 6;
};

inline Loaded load(const std::string& path, const std::string& example,
                   std::istream& stdin_stream)
{
    if (!example.empty()) {
        Fixture fx = builtin_fixture(example);
        return Loaded{fx.name, std::move(fx.D), std::move(fx.integral), {}, 6};
    }
    if (path.empty())
        throw std::invalid_argument("no input: give a document path or --example");
    std::string text;
    if (path == "-") {
        std::ostringstream ss;
        ss << stdin_stream.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    AlgebraDocument doc = parse_document(text);
    BuiltDocument built = build_document(doc);
    return Loaded{path, std::move(built.D), std::move(built.integral),
                  std::move(built.classes), built.truncation};
}

inline int effective_order(const Options& opt, const Loaded& in)
{
    if (opt.order > 0) {
        if (opt.order > 12)
            throw std::invalid_argument("truncation order must be between 1 and 12");
        return opt.order;
    }
    if (const char* env = std::getenv("DGBV_DEFAULT_ORDER")) {
        int v = std::atoi(env);
        if (v >= 1 && v <= 12)
            return v;
    }
    return in.truncation;
}

inline ReportNode validation_node(const std::string& name, const ValidationReport& rep)
{
    ReportNode node(name);
    node.pass = rep.all_pass();
    for (const auto& ax : rep.axioms) {
        ReportNode c(ax.name);
        c.pass = ax.pass;
        if (!ax.pass)
            c.field("witness", ax.witness);
        node.child(std::move(c));
    }
    return node;
}

inline ReportNode q_node(const QConditionReport& q)
{
    ReportNode node("quasi-isomorphism-conditions");
    node.pass = q.equalities_hold && q.verdicts_match;
    node.field("equalities-hold", q.equalities_hold ? "true" : "false");
    node.field("dim Im deltaDelta", std::to_string(q.im_dD.dim()));
    node.field("dim Im Deltadelta", std::to_string(q.im_Dd.dim()));
    node.field("dim Im delta ^ Ker Delta", std::to_string(q.im_d_cap_kD.dim()));
    node.field("dim Im Delta ^ Ker delta", std::to_string(q.im_D_cap_kd.dim()));
    node.field("dim harmonic", std::to_string(q.harmonic.dim()));
    node.field("H(Ker Delta, delta)", std::to_string(q.h_sub_delta));
    node.field("H(A, delta)", std::to_string(q.h_amb_delta));
    node.field("H(Ker delta, Delta)", std::to_string(q.h_sub_Delta));
    node.field("H(A, Delta)", std::to_string(q.h_amb_Delta));
    node.field("H harmonic quotient", std::to_string(q.h_harmonic));
    node.field("inclusions-induce-isomorphisms", q.homology_iso ? "true" : "false");
    node.field("verdicts-match", q.verdicts_match ? "true" : "false");
    return node;
}

inline Vec class_vector(const Loaded& in, const CohomologyBasis& H,
                        const std::string& name)
{
    for (const auto& [label, v] : in.classes)
        if (label == name)
            return v;
    // otherwise a class index into the harmonic basis
    try {
        std::size_t idx = std::stoul(name);
        if (idx < H.rank())
            return H.reps[idx];
    } catch (...) {
    }
    throw std::invalid_argument("unknown class '" + name + "'");
}

inline MCSolution solve_for(const Options& opt, const Loaded& in,
                            const CohomologyBasis& H, int order, ReportNode& node)
{
    if (opt.class_name.empty()) {
        node.field("kind", "universal");
        return solve_mc_universal(in.D, H, order);
    }
    Vec x1 = class_vector(in, H, opt.class_name);
    bool odd = false, even = false;
    for (std::size_t i = 0; i < x1.size(); ++i)
        if (!(x1[i] == 0))
            (in.D.algebra.basis.parity(i) ? odd : even) = true;
    if (odd && even)
        throw std::invalid_argument("class '" + opt.class_name + "' is not homogeneous");
    if (odd) {
        node.field("kind", "epsilon");
        return solve_mc_epsilon_rep(in.D, x1, order);
    }
    node.field("kind", "one-parameter");
    return solve_mc_one_param_rep(in.D, x1, order);
}

struct MorphismSetup {
    Loaded source;
    Loaded target;
    Matrix map; // target-dim x source-dim

    // the morphism must be re-pointed after the struct stops moving
    DGBVMorphism morphism() const { return DGBVMorphism{&source.D, &target.D, map}; }
};

inline MorphismSetup morphism_setup(const Options& opt, std::istream& stdin_stream)
{
    MorphismSetup ms;
    ms.source = load(opt.input, opt.example, stdin_stream);
    if (!opt.pair.empty()) {
        if (opt.pair.rfind("acyclic:", 0) != 0)
            throw std::invalid_argument("--pair expects acyclic:K");
        Fixture ac = builtin_fixture(opt.pair);
        DGBVStructure sum = direct_sum(ms.source.D, ac.D);
        Vec int_sum = direct_sum_integral(ms.source.D, ac.D, ms.source.integral,
                                          zero_vec(ac.D.dim()));
        ms.target = Loaded{ms.source.name + "+" + opt.pair, std::move(sum),
                           std::move(int_sum), {}, ms.source.truncation};
        ms.map = Matrix(ms.target.D.dim(), ms.source.D.dim());
        for (std::size_t i = 0; i < ms.source.D.dim(); ++i)
            ms.map(i, i) = 1;
        return ms;
    }
    if (opt.target.empty() && opt.target_example.empty())
        throw std::invalid_argument("need --target/--target-example or --pair");
    ms.target = load(opt.target, opt.target_example, stdin_stream);
    if (opt.map_file.empty())
        throw std::invalid_argument("need --map with the morphism matrix");
    std::ifstream mf(opt.map_file);
    if (!mf)
        throw std::invalid_argument("cannot open '" + opt.map_file + "'");
    ms.map = Matrix(ms.target.D.dim(), ms.source.D.dim());
    std::string line;
    int lineno = 0;
    while (std::getline(mf, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string src, eq;
        if (!(is >> src) || src[0] == '#')
            continue;
        if (!(is >> eq) || eq != "=")
            throw std::invalid_argument("map line " + std::to_string(lineno) +
                                        ": expected '<label> = ...'");
        const std::size_t col = ms.source.D.algebra.basis.index_of(src);
        std::string coeff, tgt;
        while (is >> coeff >> tgt)
            ms.map(ms.target.D.algebra.basis.index_of(tgt), col) += parse_rational(coeff);
    }
    return ms;
}

} // namespace driver_detail

inline int run_command(const Options& opt, std::istream& stdin_stream, std::ostream& out,
                       std::ostream& err)
{
    using namespace driver_detail;
    try {
        ReportNode root("dgbv " + opt.command);
        if (opt.command == "examples") {
            Fixture fx = builtin_fixture(opt.example.empty() ? opt.input : opt.example);
            out << "# " << fx.name << "\n"
                << serialize_document(fx.D, fx.integral, 6);
            return 0;
        }
        if (opt.command == "validate") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            root.field("input", in.name);
            root.child(validation_node("structure-axioms", in.D.validate_dgbv()));
            root.child(validation_node("integral-adjointness",
                                       validate_integral(in.D, in.integral)));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "qcheck") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            root.field("input", in.name);
            root.child(q_node(in.D.check_q_condition()));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "cohomology") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            root.field("input", in.name);
            CohomologyBasis H = cohomology_basis(in.D);
            ReportNode node("harmonic-basis");
            node.field("rank", std::to_string(H.rank()));
            for (std::size_t a = 0; a < H.rank(); ++a) {
                ReportNode c("e" + std::to_string(a));
                c.field("degree", std::to_string(H.degrees[a]));
                c.field("parity", H.parity(a) ? "odd" : "even");
                c.field("representative", in.D.algebra.format_element(H.reps[a]));
                node.child(std::move(c));
            }
            root.child(std::move(node));
            emit_report(root, out, opt.format);
            return 0;
        }
        if (opt.command == "solve-mc") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            const int order = effective_order(opt, in);
            root.field("input", in.name);
            root.field("order", std::to_string(order));
            CohomologyBasis H = cohomology_basis(in.D);
            ReportNode node("maurer-cartan-solution");
            MCSolution sol = solve_for(opt, in, H, order, node);
            node.field("gamma", format_series(sol.gamma, in.D.algebra));
            node.field("preimage-B", format_series(sol.B, in.D.algebra));
            AlgSeries resid = apply_operator(in.D.delta, sol.gamma);
            resid.axpy(Rational(1, 2), bracket_series(in.D, sol.gamma, sol.gamma));
            ReportNode check("residual-zero");
            check.pass = resid.is_zero_series();
            node.child(std::move(check));
            root.child(std::move(node));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "potential" || opt.command == "wdvv") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            const int order = effective_order(opt, in);
            root.field("input", in.name);
            root.field("order", std::to_string(order));
            CohomologyBasis H = cohomology_basis(in.D);
            GramData gd = gram(in.D, in.integral, H);
            ReportNode gnode("pairing");
            gnode.pass = gd.nice && gd.supersymmetric;
            gnode.field("nice", gd.nice ? "true" : "false");
            gnode.field("supersymmetric", gd.supersymmetric ? "true" : "false");
            root.child(std::move(gnode));
            if (!gd.nice) {
                emit_report(root, out, opt.format);
                err << "pairing is degenerate; cannot continue\n";
                return 1;
            }
            MCSolution sol = solve_mc_universal(in.D, H, order);
            PotentialReport pr = potential(in.D, sol, in.integral);
            ReportNode pnode("potential");
            pnode.pass = pr.forms_agree && pr.even_parity;
            pnode.field("Phi", format_series(pr.Phi));
            pnode.field("closed-forms-agree", pr.forms_agree ? "true" : "false");
            pnode.field("even-parity", pr.even_parity ? "true" : "false");
            ScalarSeries oracle = cubic_term_oracle(in.D, H, in.integral, sol.gamma.spec);
            ReportNode cnode("cubic-term-oracle");
            cnode.pass = (pr.Phi.order_part(3) - oracle.order_part(3)).is_zero_series();
            pnode.child(std::move(cnode));
            UnitAxiomReport ua = check_unit_axiom(pr.Phi, gd);
            ReportNode unode("unit-axiom");
            unode.pass = ua.pass;
            for (const auto& w : ua.witnesses)
                unode.field("witness", w);
            pnode.child(std::move(unode));
            root.child(std::move(pnode));
            if (opt.command == "wdvv") {
                WDVVReport wr = check_wdvv(pr.Phi, gd, H);
                ReportNode wnode("wdvv");
                wnode.pass = wr.pass;
                wnode.field("quadruples", std::to_string(wr.quadruples_checked));
                for (const auto& w : wr.witnesses)
                    wnode.field("witness", w);
                root.child(std::move(wnode));
            }
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "gauge-check") {
            Loaded in = load(opt.input, opt.example, stdin_stream);
            const int order = effective_order(opt, in);
            root.field("input", in.name);
            root.field("order", std::to_string(order));
            root.field("seed", std::to_string(opt.seed));
            root.field("trials", std::to_string(opt.trials));
            CohomologyBasis H = cohomology_basis(in.D);
            MCSolution sol = solve_mc_universal(in.D, H, order);
            GramData gd = gram(in.D, in.integral, H);
            std::mt19937_64 rng(opt.seed);

            ReportNode cbh_node("cbh-vs-exp-log-oracle");
            cbh_node.pass = true;
            for (int t = 0; t < std::max(1, opt.trials / 2); ++t) {
                AlgSeries A = random_gauge_series(in.D, sol.gamma.spec, rng);
                AlgSeries B = random_gauge_series(in.D, sol.gamma.spec, rng);
                AlgSeries C = cbh(in.D, A, B);
                for (std::size_t i = 0; i < in.D.dim(); ++i) {
                    AlgSeries x = constant_series(sol.gamma.spec, unit_vec(in.D.dim(), i));
                    if (!(log_composed_exp(in.D, A, B, x) - ad_series(in.D, C, x))
                             .is_zero_series())
                        cbh_node.pass = false;
                }
            }
            root.child(std::move(cbh_node));

            AlgSeries A0 = random_gauge_series(in.D, sol.gamma.spec, rng);
            AlgSeries B0 = random_gauge_series(in.D, sol.gamma.spec, rng);
            ReportNode conj("operator-conjugation-identities");
            conj.pass = conjugation_identity_check(in.D, A0, B0).pass &&
                        differential_conjugation_check(in.D, A0).pass;
            root.child(std::move(conj));

            ReportNode act("gauge-orbit-checks");
            act.pass = true;
            for (int t = 0; t < opt.trials; ++t) {
                GaugeElement g(in.D, random_gauge_series(in.D, sol.gamma.spec, rng));
                auto rep = check_phi_gauge_invariance(in.D, sol, in.integral, g);
                if (!rep.action_preserves_mc || !rep.linearized_invariance ||
                    !rep.cubic_bracket_identity)
                    act.pass = false;
                if (gd.nice && !rep.finite_invariance)
                    act.pass = false;
            }
            root.child(std::move(act));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "functoriality") {
            MorphismSetup ms = morphism_setup(opt, stdin_stream);
            DGBVMorphism f = ms.morphism();
            const int order = effective_order(opt, ms.source);
            root.field("source", ms.source.name);
            root.field("target", ms.target.name);
            root.field("order", std::to_string(order));
            root.child(validation_node("morphism-axioms", validate_morphism(f)));
            CohomologyBasis Hs = cohomology_basis(ms.source.D);
            CohomologyBasis Ht = cohomology_basis(ms.target.D);
            std::size_t cls = 0;
            if (!opt.class_name.empty()) {
                cls = std::stoul(opt.class_name);
            } else {
                for (std::size_t a = 1; a < Hs.rank(); ++a)
                    if (Hs.parity(a) == 0)
                        cls = a;
            }
            auto rep = check_functoriality(f, Hs, Ht, cls, order);
            ReportNode fnode("functoriality");
            fnode.pass = rep.pushed_solution_normalized && rep.products_agree;
            fnode.field("class", std::to_string(cls));
            fnode.field("pushed-solution-normalized",
                        rep.pushed_solution_normalized ? "true" : "false");
            fnode.field("products-agree", rep.products_agree ? "true" : "false");
            for (const auto& w : rep.witnesses)
                fnode.field("witness", w);
            root.child(std::move(fnode));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        if (opt.command == "identify") {
            MorphismSetup ms = morphism_setup(opt, stdin_stream);
            DGBVMorphism f = ms.morphism();
            const int order = effective_order(opt, ms.source);
            root.field("source", ms.source.name);
            root.field("target", ms.target.name);
            root.field("order", std::to_string(order));
            root.child(validation_node("morphism-axioms", validate_morphism(f)));
            CohomologyBasis Hs = cohomology_basis(ms.source.D);
            CohomologyBasis Ht = cohomology_basis(ms.target.D);
            auto rep = identify_frobenius(f, Hs, Ht, ms.source.integral,
                                          ms.target.integral, order);
            ReportNode inode("frobenius-identification");
            inode.pass = rep.quasi_iso && rep.pushed_universal &&
                         (!rep.integrals_compatible ||
                          (rep.gram_matches && rep.potentials_equal));
            inode.field("quasi-isomorphism", rep.quasi_iso ? "true" : "false");
            inode.field("integrals-compatible",
                        rep.integrals_compatible ? "true" : "false");
            if (!rep.integrals_compatible)
                inode.field("note", "identification holds up to pairing rescaling");
            inode.field("pushed-solution-universal",
                        rep.pushed_universal ? "true" : "false");
            inode.field("pairings-match", rep.gram_matches ? "true" : "false");
            inode.field("potentials-equal", rep.potentials_equal ? "true" : "false");
            inode.field("phi-source", format_series(rep.phi_source));
            inode.field("phi-target", format_series(rep.phi_target));
            root.child(std::move(inode));
            emit_report(root, out, opt.format);
            return root.all_pass() ? 0 : 1;
        }
        err << "unknown command '" << opt.command << "'\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dgbv
