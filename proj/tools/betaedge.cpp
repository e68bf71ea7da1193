// betaedge: extreme eigenvalue experiments for high-temperature Gaussian beta-ensembles.

#include "betaedge/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::string seed, replicas, n, beta_schedule, delta, window, out, threads;
    bool emit_svg = false;
    std::vector<std::string> inputs;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "flat key = value configuration file");
    sub->add_option("--seed", f.seed, "master seed (u64)");
    sub->add_option("--replicas", f.replicas, "replicas / Monte Carlo samples per group");
    sub->add_option("--n", f.n, "comma-separated matrix sizes");
    sub->add_option("--beta-schedule", f.beta_schedule, "zero | nlog2[:c] | nlog[:c] | inv[:c] | power:p | fixed:v (comma list)");
    sub->add_option("--delta", f.delta, "const:x | powlog:p | stretched:eps");
    sub->add_option("--window", f.window, "observation window lo,hi in rescaled units");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    sub->add_flag("--emit-svg", f.emit_svg, "also write SVG histograms");
}

betaedge::ExperimentConfig build_config(const std::string& command, const Flags& f) {
    betaedge::ExperimentConfig c;
    c.command = command;
    if (!f.config.empty())
        for (const auto& [k, v] : betaedge::read_config_file(f.config)) betaedge::apply_setting(c, k, v);
    auto set = [&](const char* key, const std::string& v) {
        if (!v.empty()) betaedge::apply_setting(c, key, v);
    };
    set("seed", f.seed);
    set("replicas", f.replicas);
    set("n", f.n);
    set("beta_schedule", f.beta_schedule);
    set("delta", f.delta);
    set("window", f.window);
    set("out", f.out);
    set("threads", f.threads);
    if (f.emit_svg) c.emit_svg = true;
    if (!f.inputs.empty()) c.inputs = f.inputs;
    betaedge::finalize_config(c);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme eigenvalues of high-temperature Gaussian beta-ensembles"};
    app.require_subcommand(1);
    Flags flags;
    const char* names[] = {"extremes", "lemmas", "correlation", "figure", "selftest"};
    const char* help[] = {"sample edge point processes and test the Poisson/Gumbel limits",
                          "verify the partition-function identities and bounds",
                          "correlation-function trends and bounds",
                          "render histograms from extremes runs (positional: run directories)",
                          "calibrate the statistical tests on synthetic data"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 5; ++i) {
        auto* s = app.add_subcommand(names[i], help[i]);
        add_common(s, flags);
        subs.push_back(s);
    }
    subs[3]->add_option("inputs", flags.inputs, "directories holding report.json and points.csv");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return betaedge::exit_config;
    }
    std::string command;
    for (auto* s : subs)
        if (s->parsed()) command = s->get_name();

    betaedge::ExperimentConfig cfg;
    try {
        cfg = build_config(command, flags);
    } catch (const betaedge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return betaedge::exit_config;
    }
    try {
        betaedge::RunResult r;
        if (command == "extremes") r = betaedge::run_extremes(cfg);
        else if (command == "lemmas") r = betaedge::run_lemmas(cfg);
        else if (command == "correlation") r = betaedge::run_correlation(cfg);
        else if (command == "figure") r = betaedge::emit_figure(cfg);
        else r = betaedge::run_selftest(cfg);
        for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
        for (const auto& f : r.failures) std::cout << "FAIL " << f << "\n";
        std::cout << (r.exit_code == 0 ? "PASS" : "FAIL") << "\n";
        return r.exit_code;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return betaedge::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return betaedge::exit_assertion;
    }
}
