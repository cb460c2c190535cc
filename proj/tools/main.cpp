// spinw1 command-line front end.
#include "spinw1/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"spinw1 — local-norm concentration bounds and the k-local W1 distance "
                 "for quantum spin systems"};
    app.require_subcommand(1);

    spinw1::RunConfig cfg;

    auto add_common = [&cfg](CLI::App* cmd, bool needs_input) {
        auto* opt = cmd->add_option("--input", cfg.input_path, "system description JSON file");
        if (needs_input) opt->required();
        cmd->add_option("--k", cfg.k, "locality of the W1 distance / bounds");
        cmd->add_option("--format", cfg.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", cfg.out_path, "output path (default: stdout)");
        cmd->add_option("--tol", cfg.tol, "verification slack");
    };

    auto* w1 = app.add_subcommand("w1", "k-local W1 distance between the two input states");
    add_common(w1, true);

    auto* cb = app.add_subcommand("conc-bound", "concentration bounds for the input system");
    add_common(cb, true);
    cb->add_option("--a-grid", cfg.a_grid, "deviation grid start:stop:steps");

    auto* cv = app.add_subcommand("conc-verify",
                                  "fuzz random instances and check every bound against the "
                                  "exact-diagonalization oracle");
    add_common(cv, false);
    cv->add_option("--a-grid", cfg.a_grid, "relative deviation grid start:stop:steps");
    cv->add_option("--instances", cfg.instances, "number of random instances");
    cv->add_option("--seed", cfg.seed, "PRNG seed");

    auto* cl = app.add_subcommand("corr-length", "correlation-length fit for the input state");
    add_common(cl, true);

    auto* en = app.add_subcommand("ensembles",
                                  "microcanonical-vs-Gibbs experiment over the family in the input");
    add_common(en, true);
    en->add_option("--beta", cfg.beta, "inverse temperature");
    en->add_option("--delta", cfg.delta, "absolute shell width (default: fraction of ||H||)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        return spinw1::run_command(cfg);
    } catch (const spinw1::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
