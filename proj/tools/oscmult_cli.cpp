#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "oscmult/experiments.hpp"

namespace {

struct FlagValues {
    std::string config_path;
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    int s_min = 0, s_max = 0, windows = 0, n_lo = 0, n_hi = 0;
    std::int64_t size = 0, points = 0;
    double tau = 0.0, eps = 0.0, delta = 0.0, xi_max = 0.0;
    std::string grid, format, out, input, mode, exhaustive;
};

void add_common_options(CLI::App* sub, FlagValues& v) {
    sub->add_option("--config", v.config_path, "configuration file with key=value lines");
    sub->add_option("--seed", v.seed, "seed for randomized runs");
    sub->add_option("--trials", v.trials, "number of randomized cases");
    sub->add_option("--s-min", v.s_min, "smallest denominator exponent");
    sub->add_option("--s-max", v.s_max, "largest denominator exponent");
    sub->add_option("--grid", v.grid, "sample counts as L1xL2");
    sub->add_option("--tau", v.tau, "lacunarity factor");
    sub->add_option("--windows", v.windows, "number of lacunary windows");
    sub->add_option("--out", v.out, "report output path");
    sub->add_option("--format", v.format, "report format: csv or json");
    sub->add_option("--input", v.input, "input sequence CSV (n1,n2,re,im)");
    sub->add_option("--mode", v.mode, "growth-study set layout: axis or product");
    sub->add_option("--exhaustive", v.exhaustive, "rm-check exhaustive family: off, zero_one, pm_one");
    sub->add_option("--size", v.size, "array truncation for osc-check");
    sub->add_option("--eps", v.eps, "witness threshold");
    sub->add_option("--delta", v.delta, "decay exponent");
    sub->add_option("--n-lo", v.n_lo, "first scale exponent");
    sub->add_option("--n-hi", v.n_hi, "last scale exponent");
    sub->add_option("--points", v.points, "sweep point count");
    sub->add_option("--xi-max", v.xi_max, "sweep endpoint");
}

oscmult::ExperimentConfig collect_flags(const CLI::App* sub, const FlagValues& v) {
    oscmult::ExperimentConfig f;
    f.command = sub->get_name();
    if (sub->count("--seed")) f.seed = v.seed;
    if (sub->count("--trials")) f.trials = v.trials;
    if (sub->count("--s-min")) f.s_min = v.s_min;
    if (sub->count("--s-max")) f.s_max = v.s_max;
    if (sub->count("--grid")) f.set_grid(v.grid);
    if (sub->count("--tau")) f.tau = v.tau;
    if (sub->count("--windows")) f.windows = v.windows;
    if (sub->count("--out")) f.out = v.out;
    if (sub->count("--format")) f.format = v.format;
    if (sub->count("--input")) f.input = v.input;
    if (sub->count("--mode")) f.mode = v.mode;
    if (sub->count("--exhaustive")) f.exhaustive = v.exhaustive;
    if (sub->count("--size")) f.size = v.size;
    if (sub->count("--eps")) f.eps = v.eps;
    if (sub->count("--delta")) f.delta = v.delta;
    if (sub->count("--n-lo")) f.n_lo = v.n_lo;
    if (sub->count("--n-hi")) f.n_hi = v.n_hi;
    if (sub->count("--points")) f.points = v.points;
    if (sub->count("--xi-max")) f.xi_max = v.xi_max;
    return f;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiments for two-parameter maximal multipliers and oscillation seminorms"};
    app.require_subcommand(1);
    FlagValues v;

    const std::pair<const char*, const char*> commands[] = {
        {"rm-check", "randomized and exhaustive dyadic sum-bound checks"},
        {"growth-study", "operator-norm ratios over rational frequency sets"},
        {"fejer-check", "dual-path box-multiplier / Fejer-combination identity"},
        {"osc-check", "oscillation seminorm checks and the unbounded convergent example"},
        {"gen-set", "enumerate reduced fractions with dyadic denominator ranges"},
        {"decay-check", "kernel transform deviation sweep"}};
    for (const auto& [name, desc] : commands) add_common_options(app.add_subcommand(name, desc), v);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        oscmult::ExperimentConfig flags = collect_flags(sub, v);
        oscmult::ExperimentConfig cfg;
        if (!v.config_path.empty() && sub->count("--config"))
            cfg = oscmult::ExperimentConfig::from_file(v.config_path);
        cfg.command = flags.command;
        cfg.apply_overrides(flags);

        const oscmult::RunReport report = oscmult::run_command(cfg);
        if (cfg.format_or_csv() == "csv")
            report.to_csv(std::cout);
        else
            report.to_json(std::cout);
        report.write(cfg);
        std::cerr << cfg.command << ": exit " << report.exit_code << ", wall "
                  << report.wall_seconds << " s\n";
        return report.exit_code;
    } catch (const oscmult::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
