#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomaqos/baselines.hpp"
#include "nomaqos/channel_model.hpp"
#include "nomaqos/poa_solver.hpp"
#include "nomaqos/qos_model.hpp"

namespace nomaqos {

enum class Placement { uniform_area, uniform_radius };

std::string_view to_string(Placement placement);

/// Parameters of the synthetic rate-quality curve used when no tables are
/// supplied.
struct TableProfile {
    double a = 20.0;
    double b = 10.0;
    double c = 1e-4;
    double base_rate_bps = 100e3;
    std::size_t num_layers = 6;
    double rate_ratio = 1.6;

    SvcLayerTable build() const;
};

struct SweepSpec {
    std::vector<Scheme> schemes{Scheme::proposed, Scheme::noma_mt, Scheme::oma};
    std::size_t num_devices = 3;
    std::vector<double> radius_m{1000.0};
    std::vector<double> p_max_dbm{10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    double ee_min = 1000.0;  // bit/s per mW
    std::size_t trials = 30;
    std::uint64_t seed = 1;
    SolverConfig solver;
    // The throughput baseline is run with at least this relative value
    // tolerance and at most this many iterations.
    double mt_value_tol = 1e-2;
    std::size_t mt_max_iter = 2000;
    ChannelParams channel;
    double min_distance_m = 35.0;
    Placement placement = Placement::uniform_area;
    // Empty: every device gets table_profile. One table: shared. Otherwise one
    // per device.
    std::vector<SvcLayerTable> tables;
    TableProfile table_profile;
    OmaConfig oma;
    std::size_t threads = 0;  // 0 picks the hardware concurrency
    std::vector<std::size_t> convergence_devices{2, 3, 4};

    void validate() const;
};

SweepSpec power_sweep_defaults();
SweepSpec coverage_sweep_defaults();
SweepSpec convergence_defaults();

/// Solver settings actually used for the throughput baseline.
SolverConfig noma_mt_solver_config(const SweepSpec& spec);

/// Distances (km) for one trial. The uniform draws depend only on
/// (seed, trial), so changing the radius rescales the same placement.
std::vector<double> sample_distances_km(const SweepSpec& spec, std::size_t trial, double radius_m,
                                        std::size_t num_devices);

UplinkScenario generate_scenario(const SweepSpec& spec, std::size_t trial, double radius_m, double p_max_dbm,
                                 std::size_t num_devices);
/// First radius and first power of the spec, spec.num_devices devices.
UplinkScenario generate_scenario(const SweepSpec& spec, std::size_t trial);

struct SweepRow {
    Scheme scheme = Scheme::proposed;
    std::string swept_param;
    double swept_value = 0.0;
    std::size_t trial = 0;
    double avg_psnr_db = 0.0;
    double avg_ee = 0.0;
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::infeasible;
};

/// One row per (p_max, trial, scheme) in that order. Needs a single radius.
std::vector<SweepRow> run_power_sweep(const SweepSpec& spec);
/// One row per (radius, trial, scheme) in that order. Needs a single p_max.
std::vector<SweepRow> run_coverage_sweep(const SweepSpec& spec);

struct ConvergenceRow {
    std::size_t num_devices = 0;
    std::size_t trial = 0;
    std::size_t iteration = 0;
    double cbv_psnr_db = 0.0;
    double upper_psnr_db = 0.0;
    double gap = 0.0;
    std::size_t num_vertices = 0;
};

struct ConvergenceRun {
    std::size_t num_devices = 0;
    std::size_t trial = 0;
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::infeasible;
};

struct ConvergenceReport {
    std::vector<ConvergenceRun> runs;
    std::vector<ConvergenceRow> rows;
};

/// Proposed scheme only, at the first radius and power of the spec, for every
/// device count in spec.convergence_devices.
ConvergenceReport run_convergence(const SweepSpec& spec);

/// printf("%.9g").
std::string format_number(double v);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

}  // namespace nomaqos
