#include "nomaqos/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nomaqos/baselines.hpp"
#include "nomaqos/experiments.hpp"
#include "nomaqos/io.hpp"

namespace nomaqos {

namespace {

struct CommonFlags {
    std::string spec_file;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> trials;
    std::vector<std::string> schemes;
    std::optional<std::size_t> devices;
    std::vector<double> radius_m;
    std::vector<double> pmax_dbm;
    std::optional<double> ee_min;
    std::optional<std::size_t> threads;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("spec", f.spec_file, "JSON sweep spec; flags override its fields");
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--delta", f.delta, "termination gap, normalized (default 1e-6)");
    cmd->add_option("--max-iter", f.max_iter, "iteration cap (default 10000)");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per point");
    cmd->add_option("--schemes", f.schemes, "comma list of proposed,noma_mt,oma")->delimiter(',');
    cmd->add_option("--devices", f.devices, "devices per scenario");
    cmd->add_option("--radius-m", f.radius_m, "cell radius in m, comma list to sweep")->delimiter(',');
    cmd->add_option("--pmax-dbm", f.pmax_dbm, "power cap in dBm, comma list to sweep")->delimiter(',');
    cmd->add_option("--ee-min", f.ee_min, "EE floor in bit/s per mW");
    cmd->add_option("--threads", f.threads, "worker threads, 0 for all cores");
    cmd->add_option("--out", f.out, "output CSV path (default stdout)");
}

SweepSpec build_spec(const CommonFlags& f, SweepSpec spec) {
    if (!f.spec_file.empty()) {
        spec = sweep_spec_from_json(load_json_file(f.spec_file), std::move(spec));
    }
    if (f.seed) spec.seed = *f.seed;
    if (f.delta) {
        spec.solver.delta = *f.delta;
        spec.solver.eps_proj = std::min(spec.solver.eps_proj, *f.delta / 10.0);
    }
    if (f.max_iter) spec.solver.max_iter = *f.max_iter;
    if (f.trials) spec.trials = *f.trials;
    if (!f.schemes.empty()) {
        spec.schemes.clear();
        for (const auto& name : f.schemes) {
            const auto s = parse_scheme(name);
            if (!s) {
                throw ValidationError("unknown scheme '" + name + "'");
            }
            spec.schemes.push_back(*s);
        }
    }
    if (f.devices) spec.num_devices = *f.devices;
    if (!f.radius_m.empty()) spec.radius_m = f.radius_m;
    if (!f.pmax_dbm.empty()) spec.p_max_dbm = f.pmax_dbm;
    if (f.ee_min) spec.ee_min = *f.ee_min;
    if (f.threads) spec.threads = *f.threads;
    spec.validate();
    return spec;
}

// Writes to the --out file, or to `out` when no path was given.
template <typename Body>
void emit(const std::string& path, std::ostream& out, Body&& body) {
    if (path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("cannot write " + path);
    }
    body(file);
}

std::string config_line(const Json& config) {
    return "# config: " + config.dump() + "\n";
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

int exit_code_for(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return kExitOk;
        case SolveStatus::infeasible: return kExitInfeasible;
        case SolveStatus::iteration_cap:
        case SolveStatus::vertex_cap: return kExitCapHit;
    }
    return kExitInvalid;
}

void print_allocation(std::ostream& out, const UplinkScenario& scenario, const Allocation& a) {
    out << "scheme " << to_string(a.scheme) << "\n";
    out << "device  p_dbm      p_mw         rate_bps     layers  psnr_db   ee_bps_per_mw\n";
    std::vector<std::size_t> order(scenario.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return scenario.original_index(x) < scenario.original_index(y); });
    for (std::size_t i : order) {
        const double p = a.powers[i];
        out << fmt("%-7.0f", static_cast<double>(scenario.original_index(i)))
            << (p > 0.0 ? fmt("%-10.4f ", mw_to_dbm(p)) : std::string("-inf       ")) << fmt("%-12.6g ", p)
            << fmt("%-12.6g ", a.rates[i]) << fmt("%-7.0f ", static_cast<double>(a.layers[i]))
            << fmt("%-9.4f ", a.qos[i]) << fmt("%.6g", a.ee[i]) << "\n";
    }
    out << "avg_psnr_db " << format_number(a.avg_qos) << "\n";
    out << "avg_ee " << format_number(a.avg_ee) << "\n";
    out << "iterations " << a.iterations << "\n";
    out << "status " << to_string(a.status) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"QoS-driven NOMA uplink power allocation"};
    app.require_subcommand(1);

    std::string scenario_file;
    std::string tables_file;
    std::string scheme_name = "proposed";
    double solve_delta = SolverConfig{}.delta;
    std::size_t solve_max_iter = SolverConfig{}.max_iter;
    auto* solve = app.add_subcommand("solve", "solve one scenario and print the allocation");
    solve->add_option("--scenario", scenario_file, "scenario JSON")->required();
    solve->add_option("--tables", tables_file, "layer tables JSON")->required();
    solve->add_option("--scheme", scheme_name, "proposed, noma_mt or oma");
    solve->add_option("--delta", solve_delta, "termination gap, normalized");
    solve->add_option("--max-iter", solve_max_iter, "iteration cap");

    CommonFlags sweep_flags;
    std::string param = "power";
    auto* sweep = app.add_subcommand("sweep", "QoS and EE over a power or coverage sweep, CSV output");
    add_common(sweep, sweep_flags);
    sweep->add_option("--param", param, "power or coverage")->check(CLI::IsMember({"power", "coverage"}));

    CommonFlags conv_flags;
    std::vector<std::size_t> device_counts;
    auto* conv = app.add_subcommand("convergence", "per-iteration bounds of the proposed solver, CSV output");
    add_common(conv, conv_flags);
    conv->add_option("--device-counts", device_counts, "comma list of device counts")->delimiter(',');

    TableProfile profile;
    std::size_t table_count = 1;
    std::string tables_out;
    auto* gen = app.add_subcommand("gen-tables", "write synthetic layer tables as JSON");
    gen->add_option("--count", table_count, "number of tables");
    gen->add_option("--a", profile.a, "quality offset in dB");
    gen->add_option("--b", profile.b, "quality slope in dB per decade");
    gen->add_option("--c", profile.c, "rate scale in 1/(bit/s)");
    gen->add_option("--base-rate", profile.base_rate_bps, "base layer rate in bit/s");
    gen->add_option("--layers", profile.num_layers, "layers per table");
    gen->add_option("--ratio", profile.rate_ratio, "rate ratio between layers");
    gen->add_option("--out", tables_out, "output path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*solve) {
            const auto scheme = parse_scheme(scheme_name);
            if (!scheme) {
                throw ValidationError("unknown scheme '" + scheme_name + "'");
            }
            const auto tables = tables_from_json(load_json_file(tables_file));
            const UplinkScenario scenario = scenario_from_json(load_json_file(scenario_file), tables);
            SolverConfig cfg;
            cfg.delta = solve_delta;
            cfg.eps_proj = std::min(cfg.eps_proj, solve_delta / 10.0);
            cfg.max_iter = solve_max_iter;
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what());
            }
            Allocation a;
            switch (*scheme) {
                case Scheme::proposed: a = solve_proposed(scenario, cfg).allocation; break;
                case Scheme::noma_mt: {
                    SweepSpec defaults;
                    defaults.solver = cfg;
                    a = solve_noma_mt(scenario, noma_mt_solver_config(defaults)).allocation;
                    break;
                }
                case Scheme::oma: a = solve_oma(scenario); break;
            }
            print_allocation(out, scenario, a);
            return exit_code_for(a.status);
        }
        if (*sweep) {
            const bool coverage = param == "coverage";
            const SweepSpec spec = build_spec(sweep_flags, coverage ? coverage_sweep_defaults() : power_sweep_defaults());
            const auto rows = coverage ? run_coverage_sweep(spec) : run_power_sweep(spec);
            Json config = to_json(spec);
            config["command"] = coverage ? "sweep coverage" : "sweep power";
            emit(sweep_flags.out, out, [&](std::ostream& os) {
                os << config_line(config);
                write_sweep_csv(os, rows);
            });
            return kExitOk;
        }
        if (*conv) {
            SweepSpec spec = build_spec(conv_flags, convergence_defaults());
            if (!device_counts.empty()) {
                spec.convergence_devices = device_counts;
                spec.validate();
            }
            const auto report = run_convergence(spec);
            Json config = to_json(spec);
            config["command"] = "convergence";
            emit(conv_flags.out, out, [&](std::ostream& os) {
                os << config_line(config);
                write_convergence_csv(os, report.rows);
            });
            return kExitOk;
        }
        if (*gen) {
            std::vector<SvcLayerTable> tables;
            try {
                for (std::size_t i = 0; i < table_count; ++i) {
                    tables.push_back(profile.build());
                }
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what());
            }
            if (tables.empty()) {
                throw ValidationError("--count must be at least 1");
            }
            emit(tables_out, out, [&](std::ostream& os) { os << tables_to_json(tables).dump(2) << "\n"; });
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}

}  // namespace nomaqos
