// spinrelax: rates, population evolution, figure output and verification for
// a spin-1/2 moment relaxing under a Lorentzian rotating field.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinrelax/spinrelax.hpp"

namespace {

enum Exit { ok = 0, usage = 1, verification = 2, io = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config_path;
    std::string particle;
    double hz_oe = 0, h1_oe = 0, delta_per_m = 0, delta_mev = 0, t_max_s = 0, t_max_relax = 0;
    std::size_t points = 0;
    std::string out_csv, out_svg;
    std::size_t grid = 200;
    std::string fault;
    unsigned threads = 0;

    CLI::Option *o_particle{}, *o_hz{}, *o_h1{}, *o_dpm{}, *o_dmev{}, *o_ts{}, *o_tr{}, *o_points{}, *o_csv{},
        *o_svg{};
};

void add_run_options(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "Run configuration file (key = value unit)")->check(CLI::ExistingFile);
    f.o_particle = cmd->add_option("--particle", f.particle, "Particle preset")->check(CLI::IsMember({"proton"}));
    f.o_hz = cmd->add_option("--hz-oe", f.hz_oe, "Static field H_z [Oe]")->check(CLI::NonNegativeNumber);
    f.o_h1 = cmd->add_option("--h1-oe", f.h1_oe, "Rotating field amplitude H_1 [Oe]")->check(CLI::NonNegativeNumber);
    f.o_dpm = cmd->add_option("--delta-per-m", f.delta_per_m, "Line half-width [1/m]")->check(CLI::PositiveNumber);
    f.o_dmev = cmd->add_option("--delta-mev", f.delta_mev, "Line half-width [MeV]")->check(CLI::PositiveNumber);
    f.o_dpm->excludes(f.o_dmev);
    f.o_ts = cmd->add_option("--t-max-s", f.t_max_s, "End of time grid [s]")->check(CLI::NonNegativeNumber);
    f.o_tr = cmd->add_option("--t-max-relax", f.t_max_relax, "End of time grid [relaxation times 1/W]")
                 ->check(CLI::NonNegativeNumber);
    f.o_ts->excludes(f.o_tr);
    f.o_points = cmd->add_option("--points", f.points, "Number of grid points (>= 2)")->check(CLI::Range(2, 100000000));
    f.o_csv = cmd->add_option("--out-csv", f.out_csv, "CSV output path");
    f.o_svg = cmd->add_option("--out-svg", f.out_svg, "SVG output path");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)");
}

spinrelax::RunConfig resolve_config(const Flags& f) {
    spinrelax::RunConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw IoError("cannot read " + f.config_path);
        cfg = spinrelax::parse_config(in, f.config_path);
    }
    if (f.o_particle->count()) {
        cfg.particle_name = f.particle;
        cfg.particle = spinrelax::particle_preset(f.particle);
    }
    if (f.o_hz->count()) cfg.hz_oe = f.hz_oe;
    if (f.o_h1->count()) cfg.h1_oe = f.h1_oe;
    if (f.o_dpm->count()) cfg.delta_value = f.delta_per_m, cfg.delta_unit = spinrelax::DeltaUnit::per_meter;
    if (f.o_dmev->count()) cfg.delta_value = f.delta_mev, cfg.delta_unit = spinrelax::DeltaUnit::mev;
    if (f.o_ts->count()) cfg.t_max_value = f.t_max_s, cfg.t_max_unit = spinrelax::TimeUnit::seconds;
    if (f.o_tr->count()) cfg.t_max_value = f.t_max_relax, cfg.t_max_unit = spinrelax::TimeUnit::relaxation_times;
    if (f.o_points->count()) cfg.points = f.points;
    if (f.o_csv->count()) cfg.out_csv = f.out_csv;
    if (f.o_svg->count()) cfg.out_svg = f.out_svg;
    cfg.validate("command line");
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path);
}

std::vector<spinrelax::EvolutionPoint> run_grid(const spinrelax::RunConfig& cfg, unsigned threads) {
    const auto p = cfg.evolution();
    const auto grid = spinrelax::uniform_grid(cfg.t_max_inverse_mev(p), cfg.points);
    return spinrelax::evolve_grid(p, grid, threads);
}

void emit_csv(const spinrelax::RunConfig& cfg, const std::vector<spinrelax::EvolutionPoint>& pts) {
    std::ostringstream csv;
    spinrelax::report::write_csv(csv, pts);
    if (cfg.out_csv.empty())
        std::cout << csv.str();
    else
        write_file(cfg.out_csv, csv.str());
}

int cmd_rates(const spinrelax::RunConfig& cfg) {
    spinrelax::report::write_rates(std::cout, spinrelax::report::compute_rates(cfg.coupling()));
    return ok;
}

int cmd_evolve(const spinrelax::RunConfig& cfg, unsigned threads) {
    emit_csv(cfg, run_grid(cfg, threads));
    return ok;
}

int cmd_fig1(spinrelax::RunConfig cfg, unsigned threads) {
    if (cfg.out_csv.empty()) cfg.out_csv = "fig1.csv";
    if (cfg.out_svg.empty()) cfg.out_svg = "fig1.svg";
    const auto pts = run_grid(cfg, threads);
    emit_csv(cfg, pts);
    const auto p = cfg.evolution();
    const auto window = spinrelax::report::oscillation_window(p);
    const auto fine = spinrelax::evolve_grid(p, window, threads);
    std::ostringstream svg;
    spinrelax::report::write_svg(svg, spinrelax::report::markovian_series(pts),
                                 spinrelax::report::non_markovian_series(fine));
    write_file(cfg.out_svg, svg.str());
    std::cout << "wrote " << cfg.out_csv << " (" << pts.size() << " rows) and " << cfg.out_svg << "\n";
    return ok;
}

int cmd_verify(const spinrelax::RunConfig& cfg, const Flags& f) {
    spinrelax::verify::VerifyOptions opts;
    opts.grid = f.grid;
    opts.threads = f.threads;
    if (f.fault == "d-poly") opts.coefficients.fault.d_poly_xi4 = 1e-3;
    const auto results = spinrelax::verify::run_all(cfg, opts);
    bool all = true;
    for (const auto& r : results) {
        std::cout << spinrelax::verify::format_line(r) << "\n";
        all = all && r.passed;
    }
    std::cout << (all ? "verify: all checks passed" : "verify: FAILED") << "\n";
    return all ? ok : verification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-1/2 relaxation under a Lorentzian rotating field"};
    app.require_subcommand(1);
    std::array<Flags, 4> flags;

    auto* rates = app.add_subcommand("rates", "Print decay width, transition rate, shifts and b");
    auto* evolve = app.add_subcommand("evolve", "Write the population evolution as CSV");
    auto* fig1 = app.add_subcommand("fig1", "Write the evolution CSV and a two-panel SVG");
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks; exit 2 on failure");
    const std::array<CLI::App*, 4> commands{rates, evolve, fig1, verify};
    for (std::size_t i = 0; i < commands.size(); ++i) add_run_options(commands[i], flags[i]);
    Flags& vf = flags[3];
    verify->add_option("--grid", vf.grid, "Comparison grid size (>= 10)")->check(CLI::Range(10, 1000000));
    verify->add_option("--inject-fault", vf.fault)->check(CLI::IsMember({"d-poly"}))->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    std::size_t active = 0;
    while (active < commands.size() && !commands[active]->parsed()) ++active;
    if (active == commands.size()) return usage;
    const Flags& f = flags[active];

    try {
        const auto cfg = resolve_config(f);
        if (*rates) return cmd_rates(cfg);
        if (*evolve) return cmd_evolve(cfg, f.threads);
        if (*fig1) return cmd_fig1(cfg, f.threads);
        if (*verify) return cmd_verify(cfg, f);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io;
    } catch (const spinrelax::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return verification;
    }
    return usage;
}
