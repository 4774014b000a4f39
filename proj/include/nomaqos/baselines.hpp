#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nomaqos/noma_core.hpp"
#include "nomaqos/poa_solver.hpp"

namespace nomaqos {

enum class Scheme { proposed, noma_mt, oma };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Result of one allocation scheme on one scenario. Per-device vectors follow
/// the scenario's decode order.
struct Allocation {
    Scheme scheme = Scheme::proposed;
    SolveStatus status = SolveStatus::infeasible;
    PowerVector powers;
    std::vector<double> rates;        // bit/s actually delivered
    std::vector<std::size_t> layers;  // decodable layers per device
    std::vector<double> qos;          // dB
    std::vector<double> ee;           // bit/s per mW, +inf for silent devices
    double avg_qos = 0.0;
    double avg_ee = 0.0;              // mean over devices with p > 0
    std::size_t iterations = 0;
    std::vector<double> time_share;   // OMA only: fraction of the frame per device
    bool has_solution = false;

    bool feasible() const { return has_solution && status != SolveStatus::infeasible; }
};

/// Staircase QoS maximization over G ∩ H in SINR space.
MonotoneProblem make_qos_problem(const UplinkScenario& scenario);
/// Sum throughput B * sum log2(1 + y_i) over the same feasible set.
MonotoneProblem make_throughput_problem(const UplinkScenario& scenario);

/// Fills powers, rates, QoS and EE from a NOMA operating point in SINR space.
Allocation allocation_from_sinr(const UplinkScenario& scenario, const SinrVector& y, Scheme scheme,
                                SolveStatus status, std::size_t iterations);

struct SchemeRun {
    Allocation allocation;
    SolveOutcome outcome;
};

/// Lowest SINR vector reaching the same layers as y. It lies below y, so it
/// stays in G whenever y does, and needs the least power for that QoS.
SinrVector snap_to_layer_thresholds(const UplinkScenario& scenario, std::span<const double> y);

/// The allocation is taken at the snapped solver point; outcome keeps the raw
/// solver point.
SchemeRun solve_proposed(const UplinkScenario& scenario, const SolverConfig& config,
                         const SolveObserver& observer = {});
SchemeRun solve_noma_mt(const UplinkScenario& scenario, const SolverConfig& config);

struct OmaConfig {
    double time_budget = 1.0;      // sum of time fractions available
    bool enforce_ee_floor = true;  // transmit power capped so R/p >= ee_min
};

/// Largest p <= p_max with B log2(1 + h^2 p / sigma^2) / p >= ee_min, or 0
/// when even an infinitesimal power misses the floor.
double oma_power(const Device& device, double bandwidth_hz, double noise_mw, bool enforce_ee_floor);

/// Time-division OMA with greedy marginal-utility time allocation. Each grant
/// lifts one device exactly to its next layer boundary.
Allocation solve_oma(const UplinkScenario& scenario, const OmaConfig& config = {});

/// True when the OMA delivered rates are also achievable by NOMA under the
/// same caps and floors, i.e. their SINR targets lie in G ∩ H.
bool oma_rates_noma_feasible(const UplinkScenario& scenario, const Allocation& oma);

}  // namespace nomaqos
