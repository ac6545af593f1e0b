#include "dgbv/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Exact-arithmetic engine for finite-dimensional DGBV algebras: "
                 "validation, Maurer-Cartan solving, Frobenius potentials, WDVV, "
                 "gauge transformations and morphisms"};
    app.require_subcommand(1);

    dgbv::Options opt;
    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("input", opt.input, "document file ('-' for stdin)");
        cmd->add_option("--example", opt.example,
                        "builtin fixture (trivial:N, bv:N,M, koszul:N,M, acyclic:K)");
        cmd->add_option("--order", opt.order, "truncation order (default: document or "
                                              "DGBV_DEFAULT_ORDER)");
        cmd->add_option("--format", opt.format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    for (const char* name : {"validate", "qcheck", "cohomology", "potential", "wdvv"}) {
        auto* cmd = app.add_subcommand(name);
        add_common(cmd, true);
    }
    auto* solve = app.add_subcommand("solve-mc");
    add_common(solve, true);
    solve->add_option("--class", opt.class_name,
                      "class index or named class; omitted: universal solution");

    auto* gauge = app.add_subcommand("gauge-check");
    add_common(gauge, true);
    gauge->add_option("--trials", opt.trials, "number of random trials");
    gauge->add_option("--seed", opt.seed, "random seed");

    auto* functo = app.add_subcommand("functoriality");
    add_common(functo, true);
    functo->add_option("--target", opt.target, "target document file");
    functo->add_option("--target-example", opt.target_example, "target builtin fixture");
    functo->add_option("--map", opt.map_file, "morphism file: '<src> = c <tgt> ...'");
    functo->add_option("--pair", opt.pair, "pair with a sum: acyclic:K");
    functo->add_option("--class", opt.class_name, "even class index to deform along");

    auto* ident = app.add_subcommand("identify");
    add_common(ident, true);
    ident->add_option("--target", opt.target, "target document file");
    ident->add_option("--target-example", opt.target_example, "target builtin fixture");
    ident->add_option("--map", opt.map_file, "morphism file: '<src> = c <tgt> ...'");
    ident->add_option("--pair", opt.pair, "pair with a sum: acyclic:K");

    auto* ex = app.add_subcommand("examples", "emit a builtin fixture document");
    ex->add_option("name", opt.input, "fixture name, e.g. bv:2,4")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.command = app.get_subcommands().front()->get_name();
    return dgbv::run_command(opt, std::cin, std::cout, std::cerr);
}
