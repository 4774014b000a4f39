#include "nomaqos/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace nomaqos {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::proposed: return "proposed";
        case Scheme::noma_mt: return "noma_mt";
        case Scheme::oma: return "oma";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "proposed") return Scheme::proposed;
    if (name == "noma_mt") return Scheme::noma_mt;
    if (name == "oma") return Scheme::oma;
    return std::nullopt;
}

namespace {

Allocation empty_allocation(const UplinkScenario& scenario, Scheme scheme, SolveStatus status,
                            std::size_t iterations) {
    const std::size_t m = scenario.size();
    Allocation a;
    a.scheme = scheme;
    a.status = status;
    a.powers = PowerVector(m);
    a.rates.assign(m, 0.0);
    a.layers.assign(m, 0);
    a.qos.assign(m, 0.0);
    a.ee.assign(m, kInfiniteEe);
    a.iterations = iterations;
    return a;
}

double mean_active_ee(const PowerVector& powers, const std::vector<double>& ee) {
    double total = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < ee.size(); ++i) {
        if (powers[i] > 0.0) {
            total += ee[i];
            ++active;
        }
    }
    return active == 0 ? 0.0 : total / static_cast<double>(active);
}

}  // namespace

MonotoneProblem make_qos_problem(const UplinkScenario& scenario) {
    auto s = std::make_shared<const UplinkScenario>(scenario);
    return MonotoneProblem{
        [s](std::span<const double> y) { return is_in_g(*s, y); },
        s->min_sinr().values(),
        [s](std::span<const double> y) { return average_qos(*s, y); },
        s->sinr_caps().values(),
    };
}

MonotoneProblem make_throughput_problem(const UplinkScenario& scenario) {
    auto s = std::make_shared<const UplinkScenario>(scenario);
    return MonotoneProblem{
        [s](std::span<const double> y) { return is_in_g(*s, y); },
        s->min_sinr().values(),
        [s](std::span<const double> y) {
            double total = 0.0;
            for (double v : y) {
                total += shannon_rate(v, s->bandwidth_hz());
            }
            return total;
        },
        s->sinr_caps().values(),
    };
}

Allocation allocation_from_sinr(const UplinkScenario& scenario, const SinrVector& y, Scheme scheme,
                                SolveStatus status, std::size_t iterations) {
    Allocation a = empty_allocation(scenario, scheme, status, iterations);
    a.has_solution = true;
    a.powers = powers_from_sinr(scenario, y);
    a.rates = rate(scenario, y);
    for (std::size_t i = 0; i < scenario.size(); ++i) {
        a.layers[i] = scenario.layers_reached(i, y[i]);
        a.qos[i] = psnr_of_layers(a.layers[i], scenario.device(i).table);
        a.ee[i] = energy_efficiency(a.rates[i], a.powers[i]);
    }
    a.avg_qos = average_qos(scenario, y.span());
    a.avg_ee = mean_active_ee(a.powers, a.ee);
    return a;
}

namespace {

SchemeRun run_poa(const UplinkScenario& scenario, const MonotoneProblem& problem, Scheme scheme,
                  const SolverConfig& config, const SolveObserver& observer) {
    SchemeRun run;
    run.outcome = solve(problem, config, observer);
    if (run.outcome.has_point()) {
        run.allocation = allocation_from_sinr(scenario, SinrVector(run.outcome.best_point), scheme,
                                              run.outcome.status, run.outcome.iterations);
    } else {
        run.allocation = empty_allocation(scenario, scheme, run.outcome.status, run.outcome.iterations);
    }
    return run;
}

}  // namespace

SchemeRun solve_proposed(const UplinkScenario& scenario, const SolverConfig& config, const SolveObserver& observer) {
    SchemeRun run = run_poa(scenario, make_qos_problem(scenario), Scheme::proposed, config, observer);
    if (run.outcome.has_point()) {
        run.allocation = allocation_from_sinr(scenario, snap_to_layer_thresholds(scenario, run.outcome.best_point),
                                              Scheme::proposed, run.outcome.status, run.outcome.iterations);
    }
    return run;
}

SinrVector snap_to_layer_thresholds(const UplinkScenario& scenario, std::span<const double> y) {
    SinrVector out(scenario.size());
    for (std::size_t i = 0; i < scenario.size(); ++i) {
        const std::size_t l = scenario.layers_reached(i, y[i]);
        out[i] = l == 0 ? 0.0 : scenario.layer_sinr(i, l - 1);
    }
    return out;
}

SchemeRun solve_noma_mt(const UplinkScenario& scenario, const SolverConfig& config) {
    return run_poa(scenario, make_throughput_problem(scenario), Scheme::noma_mt, config, {});
}

double oma_power(const Device& device, double bandwidth_hz, double noise_mw, bool enforce_ee_floor) {
    if (!enforce_ee_floor || device.ee_min <= 0.0) {
        return device.p_max_mw;
    }
    const double snr_per_mw = device.gain_sq / noise_mw;
    auto ee = [&](double p) { return bandwidth_hz * std::log2(1.0 + snr_per_mw * p) / p; };
    if (ee(device.p_max_mw) >= device.ee_min) {
        return device.p_max_mw;
    }
    // R(p)/p decreases from B h^2 / (sigma^2 ln 2) as p grows.
    const double ee_at_zero = bandwidth_hz * snr_per_mw / std::numbers::ln2;
    if (!(ee_at_zero > device.ee_min)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = device.p_max_mw;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * device.p_max_mw; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (ee(mid) >= device.ee_min) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

Allocation solve_oma(const UplinkScenario& scenario, const OmaConfig& config) {
    if (!(config.time_budget >= 0.0)) {
        throw std::invalid_argument("OMA time budget must be nonnegative");
    }
    const std::size_t m = scenario.size();
    const double b = scenario.bandwidth_hz();

    std::vector<double> tx_power(m);
    std::vector<double> full_rate(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Device& d = scenario.device(i);
        tx_power[i] = oma_power(d, b, scenario.noise_mw(), config.enforce_ee_floor);
        full_rate[i] = tx_power[i] > 0.0 ? shannon_rate(d.gain_sq * tx_power[i] / scenario.noise_mw(), b) : 0.0;
    }

    std::vector<std::size_t> layers(m, 0);
    std::vector<double> share(m, 0.0);
    double used = 0.0;
    for (;;) {
        std::size_t pick = m;
        double pick_gradient = 0.0;
        double pick_cost = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const SvcLayerTable& table = scenario.device(i).table;
            if (full_rate[i] <= 0.0 || layers[i] == table.num_layers()) {
                continue;
            }
            const double current_rate = layers[i] == 0 ? 0.0 : table.layer(layers[i] - 1).rate_bps;
            const double cost = (table.layer(layers[i]).rate_bps - current_rate) / full_rate[i];
            if (used + cost > config.time_budget) {
                continue;
            }
            const double gain = table.layer(layers[i]).psnr_db - psnr_of_layers(layers[i], table);
            const double gradient = cost > 0.0 ? gain / cost : std::numeric_limits<double>::infinity();
            if (pick == m || gradient > pick_gradient) {  // strict: ties stay with the lower index
                pick = i;
                pick_gradient = gradient;
                pick_cost = cost;
            }
        }
        if (pick == m) {
            break;
        }
        used += pick_cost;
        ++layers[pick];
        share[pick] = scenario.device(pick).table.layer(layers[pick] - 1).rate_bps / full_rate[pick];
    }

    const bool served_any = std::any_of(layers.begin(), layers.end(), [](std::size_t l) { return l > 0; });
    Allocation a = empty_allocation(scenario, Scheme::oma,
                                    served_any ? SolveStatus::converged : SolveStatus::infeasible, 0);
    a.has_solution = true;
    a.time_share = share;
    double total_qos = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const SvcLayerTable& table = scenario.device(i).table;
        a.layers[i] = layers[i];
        a.qos[i] = psnr_of_layers(layers[i], table);
        total_qos += a.qos[i];
        if (layers[i] > 0) {
            a.powers[i] = tx_power[i];
            a.rates[i] = table.layer(layers[i] - 1).rate_bps;
            a.ee[i] = energy_efficiency(a.rates[i], share[i] * tx_power[i]);
        }
    }
    a.avg_qos = total_qos / static_cast<double>(m);
    a.avg_ee = mean_active_ee(a.powers, a.ee);
    return a;
}

bool oma_rates_noma_feasible(const UplinkScenario& scenario, const Allocation& oma) {
    if (oma.rates.size() != scenario.size()) {
        return false;
    }
    std::vector<double> y(scenario.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = min_sinr_from_rate(oma.rates[i], scenario.bandwidth_hz());
    }
    return is_in_g(scenario, y) && is_in_h(scenario, y);
}

}  // namespace nomaqos
