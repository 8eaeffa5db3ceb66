#include "fbm/app/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    fbm::CommandOptions o;
    std::uint64_t seed = 0;

    CLI::App app{"fbmlab: spectral experiments for active scalar equations with fractional dissipation"};
    app.require_subcommand(1);
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", o.configs, "run configuration (JSON); repeat for a sweep");
        if (needs_config)
            opt->required();
        sub->add_option("--out", o.out, "output root directory");
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--jobs", o.jobs, "number of configs to run concurrently")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", o.quiet, "suppress progress output");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate one configuration and persist run.json + snapshots");
    add_common(simulate, true);
    auto* selfsim = app.add_subcommand("selfsim", "self-similarity collapse experiment");
    add_common(selfsim, true);
    auto* stability = app.add_subcommand("stability", "asymptotic stability experiment on ic and ic_phi");
    add_common(stability, true);
    auto* estk = app.add_subcommand("estimate-k", "sampled bilinear constant and recommended epsilon");
    add_common(estk, true);
    estk->add_option("--trials", o.trials, "number of random pairs (overrides estimate_k.trials)");

    auto* norms = app.add_subcommand("norms", "FN norm report of an FBM1 snapshot");
    norms->add_option("--snapshot", o.snapshot, "FBM1 snapshot file")->required()->check(CLI::ExistingFile);
    std::string p = "2", q = "inf";
    norms->add_option("--p", p, "Morrey integrability p (number or inf)");
    norms->add_option("--mu", o.mu, "Morrey exponent mu");
    norms->add_option("--q", q, "block summability q (number or inf)");
    norms->add_option("--s", o.s, "regularity s (number or auto)");
    norms->add_option("--stride", o.stride, "Morrey centre stride");
    norms->add_option("--out", o.out, "output root directory");
    norms->add_flag("--quiet", o.quiet, "suppress progress output");

    auto* check = app.add_subcommand("check", "property suite: partition, FFT, paraproduct, Bernstein, Hoelder/Young");
    check->add_option("--n", o.check_dim, "dimension")->check(CLI::Range(1, 3));
    check->add_option("--N", o.check_points, "points per dimension");
    check->add_option("--seed", seed, "seed");
    check->add_option("--out", o.out, "output root directory");
    check->add_flag("--quiet", o.quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? fbm::exit_ok : fbm::exit_config_error;
    }

    auto parse_exponent = [](const std::string& v, const char* key) {
        if (v == "inf" || v == "infinity")
            return fbm::infinity;
        try {
            return std::stod(v);
        } catch (const std::exception&) {
            throw fbm::config_error(std::string(key) + " must be a number or inf (got '" + v + "')");
        }
    };
    try {
        o.p = parse_exponent(p, "norm.p");
        o.q = parse_exponent(q, "norm.q");
    } catch (const fbm::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fbm::exit_config_error;
    }

    for (auto* sub : app.get_subcommands()) {
        if (const auto* opt = sub->get_option_no_throw("--seed"); opt && opt->count() > 0)
            o.seed = seed;
        return fbm::run_command(sub->get_name(), o, std::cout, std::cerr);
    }
    return fbm::exit_config_error;
}
