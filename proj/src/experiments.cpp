#include "nomaqos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace nomaqos {

namespace {

constexpr std::uint64_t kPlacementStream = 0;
constexpr std::uint64_t kFadingStream = 1;

// Runs fn(i) for i in [0, n) on a small pool. Results are written by index, so
// the output never depends on scheduling. The first exception by index wins.
template <typename Fn>
void for_each_index(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);
    std::vector<std::exception_ptr> errors(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::vector<Scheme> ordered_schemes(const std::vector<Scheme>& schemes) {
    std::vector<Scheme> out = schemes;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const SvcLayerTable& table_for(const SweepSpec& spec, const SvcLayerTable& fallback, std::size_t i) {
    if (spec.tables.empty()) {
        return fallback;
    }
    return spec.tables.size() == 1 ? spec.tables.front() : spec.tables.at(i);
}

Allocation run_scheme(Scheme scheme, const UplinkScenario& scenario, const SweepSpec& spec) {
    switch (scheme) {
        case Scheme::proposed: return solve_proposed(scenario, spec.solver).allocation;
        case Scheme::noma_mt: return solve_noma_mt(scenario, noma_mt_solver_config(spec)).allocation;
        case Scheme::oma: return solve_oma(scenario, spec.oma);
    }
    throw std::logic_error("unknown scheme");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const char* param, std::span<const double> values,
                                bool sweep_radius) {
    const auto schemes = ordered_schemes(spec.schemes);
    const std::size_t cells = values.size() * spec.trials;
    std::vector<std::vector<SweepRow>> per_cell(cells);
    if (schemes.empty()) {
        return {};
    }
    for_each_index(cells, spec.threads, [&](std::size_t cell) {
        const std::size_t v = cell / spec.trials;
        const std::size_t trial = cell % spec.trials;
        const double radius = sweep_radius ? values[v] : spec.radius_m.front();
        const double pmax = sweep_radius ? spec.p_max_dbm.front() : values[v];
        const UplinkScenario scenario = generate_scenario(spec, trial, radius, pmax, spec.num_devices);
        for (Scheme s : schemes) {
            const Allocation a = run_scheme(s, scenario, spec);
            SweepRow row;
            row.scheme = s;
            row.swept_param = param;
            row.swept_value = values[v];
            row.trial = trial;
            row.avg_psnr_db = a.avg_qos;
            row.avg_ee = a.avg_ee;
            row.iterations = a.iterations;
            row.status = a.status;
            per_cell[cell].push_back(std::move(row));
        }
    });
    std::vector<SweepRow> rows;
    rows.reserve(cells * schemes.size());
    for (auto& c : per_cell) {
        std::move(c.begin(), c.end(), std::back_inserter(rows));
    }
    return rows;
}

}  // namespace

std::string_view to_string(Placement placement) {
    switch (placement) {
        case Placement::uniform_area: return "uniform_area";
        case Placement::uniform_radius: return "uniform_radius";
    }
    return "unknown";
}

SvcLayerTable TableProfile::build() const {
    return synth_table(a, b, c, base_rate_bps, num_layers, rate_ratio);
}

void SweepSpec::validate() const {
    if (trials < 1) {
        throw ValidationError("trials must be at least 1");
    }
    if (num_devices < 1) {
        throw ValidationError("num_devices must be at least 1");
    }
    if (radius_m.empty() || p_max_dbm.empty()) {
        throw ValidationError("radius_m and p_max_dbm need at least one value");
    }
    if (!(min_distance_m > 0.0) || !std::isfinite(min_distance_m)) {
        throw ValidationError("min_distance_m must be positive");
    }
    for (double r : radius_m) {
        if (!(r > min_distance_m) || !std::isfinite(r)) {
            throw ValidationError("radius_m values must exceed min_distance_m");
        }
    }
    for (double p : p_max_dbm) {
        if (!std::isfinite(p)) {
            throw ValidationError("p_max_dbm values must be finite");
        }
    }
    if (!(ee_min >= 0.0) || !std::isfinite(ee_min)) {
        throw ValidationError("ee_min must be nonnegative");
    }
    if (!(mt_value_tol >= 0.0) || mt_max_iter < 1) {
        throw ValidationError("mt_value_tol must be nonnegative and mt_max_iter at least 1");
    }
    if (tables.size() > 1 && tables.size() != num_devices) {
        throw ValidationError("tables: expected 1 or " + std::to_string(num_devices) + " tables, got " +
                              std::to_string(tables.size()));
    }
    for (std::size_t m : convergence_devices) {
        if (m < 1) {
            throw ValidationError("convergence_devices entries must be at least 1");
        }
        if (tables.size() > 1 && tables.size() != m) {
            throw ValidationError("tables: per-device tables do not match convergence device count " +
                                  std::to_string(m));
        }
    }
    try {
        solver.validate();
        channel.validate();
        if (tables.empty()) {
            (void)table_profile.build();
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    if (!(oma.time_budget >= 0.0)) {
        throw ValidationError("oma time_budget must be nonnegative");
    }
}

SweepSpec power_sweep_defaults() {
    return SweepSpec{};
}

SweepSpec coverage_sweep_defaults() {
    SweepSpec spec;
    spec.radius_m = {600, 700, 800, 900, 1000, 1100, 1200, 1300, 1400};
    spec.p_max_dbm = {22};
    return spec;
}

SweepSpec convergence_defaults() {
    SweepSpec spec;
    spec.schemes = {Scheme::proposed};
    spec.p_max_dbm = {23};
    return spec;
}

SolverConfig noma_mt_solver_config(const SweepSpec& spec) {
    SolverConfig cfg = spec.solver;
    cfg.value_tol = std::max(cfg.value_tol, spec.mt_value_tol);
    cfg.max_iter = std::min(cfg.max_iter, spec.mt_max_iter);
    return cfg;
}

std::vector<double> sample_distances_km(const SweepSpec& spec, std::size_t trial, double radius_m,
                                        std::size_t num_devices) {
    Rng rng(derive_stream_seed(spec.seed, trial, kPlacementStream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r0 = spec.min_distance_m;
    std::vector<double> d(num_devices);
    for (double& x : d) {
        const double u = unit(rng);
        const double r = spec.placement == Placement::uniform_area
                             ? std::sqrt(u * (radius_m * radius_m - r0 * r0) + r0 * r0)
                             : r0 + u * (radius_m - r0);
        x = r / 1000.0;
    }
    return d;
}

UplinkScenario generate_scenario(const SweepSpec& spec, std::size_t trial, double radius_m, double p_max_dbm,
                                 std::size_t num_devices) {
    const auto distances = sample_distances_km(spec, trial, radius_m, num_devices);
    const auto channels =
        sample_channels(derive_stream_seed(spec.seed, trial, kFadingStream), distances, spec.channel);
    const SvcLayerTable fallback = spec.tables.empty() ? spec.table_profile.build() : SvcLayerTable{};
    const double p_max_mw = dbm_to_mw(p_max_dbm);
    std::vector<Device> devices;
    devices.reserve(num_devices);
    for (std::size_t i = 0; i < num_devices; ++i) {
        devices.push_back(Device{channels[i].gain_sq_linear, p_max_mw, spec.ee_min, table_for(spec, fallback, i)});
    }
    return UplinkScenario(std::move(devices), spec.channel.bandwidth_hz, noise_power_mw(spec.channel));
}

UplinkScenario generate_scenario(const SweepSpec& spec, std::size_t trial) {
    return generate_scenario(spec, trial, spec.radius_m.front(), spec.p_max_dbm.front(), spec.num_devices);
}

std::vector<SweepRow> run_power_sweep(const SweepSpec& spec) {
    spec.validate();
    if (spec.radius_m.size() != 1) {
        throw ValidationError("power sweep needs a single radius_m");
    }
    return run_sweep(spec, "p_max_dbm", spec.p_max_dbm, false);
}

std::vector<SweepRow> run_coverage_sweep(const SweepSpec& spec) {
    spec.validate();
    if (spec.p_max_dbm.size() != 1) {
        throw ValidationError("coverage sweep needs a single p_max_dbm");
    }
    return run_sweep(spec, "radius_m", spec.radius_m, true);
}

ConvergenceReport run_convergence(const SweepSpec& spec) {
    spec.validate();
    const std::size_t counts = spec.convergence_devices.size();
    const std::size_t cells = counts * spec.trials;
    std::vector<ConvergenceRun> runs(cells);
    std::vector<std::vector<ConvergenceRow>> traces(cells);
    for_each_index(cells, spec.threads, [&](std::size_t cell) {
        const std::size_t m = spec.convergence_devices[cell / spec.trials];
        const std::size_t trial = cell % spec.trials;
        const UplinkScenario scenario =
            generate_scenario(spec, trial, spec.radius_m.front(), spec.p_max_dbm.front(), m);
        const SchemeRun run = solve_proposed(scenario, spec.solver);
        runs[cell] = ConvergenceRun{m, trial, run.outcome.iterations, run.outcome.status};
        for (const auto& rec : run.outcome.trace) {
            traces[cell].push_back(ConvergenceRow{m, trial, rec.iteration, rec.incumbent, rec.upper_bound, rec.gap,
                                                  rec.num_vertices});
        }
    });
    ConvergenceReport report;
    report.runs = std::move(runs);
    for (auto& t : traces) {
        std::move(t.begin(), t.end(), std::back_inserter(report.rows));
    }
    return report;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "scheme,swept_param,swept_value,trial,avg_psnr_db,avg_ee,iterations,status\n";
    for (const auto& r : rows) {
        out << to_string(r.scheme) << ',' << r.swept_param << ',' << format_number(r.swept_value) << ','
            << r.trial << ',' << format_number(r.avg_psnr_db) << ',' << format_number(r.avg_ee) << ','
            << r.iterations << ',' << to_string(r.status) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
    out << "num_devices,trial,iteration,cbv_psnr_db,upper_psnr_db,gap,num_vertices\n";
    for (const auto& r : rows) {
        out << r.num_devices << ',' << r.trial << ',' << r.iteration << ',' << format_number(r.cbv_psnr_db) << ','
            << format_number(r.upper_psnr_db) << ',' << format_number(r.gap) << ',' << r.num_vertices << '\n';
    }
}

}  // namespace nomaqos
