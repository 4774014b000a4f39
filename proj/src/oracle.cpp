#include "nomaqos/oracle.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nomaqos {

namespace {

// Advances an odometer over [lo_i, hi_i]; returns false after the last state.
bool next_tuple(std::vector<std::size_t>& tuple, const std::vector<std::size_t>& lo,
                const std::vector<std::size_t>& hi) {
    for (std::size_t i = tuple.size(); i-- > 0;) {
        if (tuple[i] < hi[i]) {
            ++tuple[i];
            return true;
        }
        tuple[i] = lo[i];
    }
    return false;
}

double total(const PowerVector& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

LayerOptimum enumerate_layer_optimum(const UplinkScenario& scenario) {
    const std::size_t m = scenario.size();
    std::vector<std::size_t> lo(m);
    std::vector<std::size_t> hi(m);
    double count = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const SvcLayerTable& table = scenario.device(i).table;
        // The base layer is mandatory whenever it costs any rate.
        lo[i] = table.base_rate() > 0.0 ? 1 : 0;
        hi[i] = table.num_layers();
        count *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    if (count > kEnumerationGuard) {
        throw std::length_error("enumerate_layer_optimum: too many layer tuples");
    }

    LayerOptimum best;
    bool found = false;
    double best_value = 0.0;
    double best_power = 0.0;
    std::vector<std::size_t> tuple = lo;
    SinrVector target(m);
    do {
        for (std::size_t i = 0; i < m; ++i) {
            target[i] = tuple[i] == 0 ? scenario.min_sinr()[i] : scenario.layer_sinr(i, tuple[i] - 1);
        }
        if (!is_in_g(scenario, target.span())) {
            continue;
        }
        const double value = average_qos(scenario, target.span());
        const double power = total(powers_from_sinr(scenario, target));
        if (!found || value > best_value || (value == best_value && power < best_power)) {
            found = true;
            best_value = value;
            best_power = power;
            best.layer_tuple = tuple;
            best.allocation = allocation_from_sinr(scenario, target, Scheme::proposed, SolveStatus::converged, 0);
        }
    } while (next_tuple(tuple, lo, hi));

    if (!found) {
        best.allocation = Allocation{};
        best.allocation.status = SolveStatus::infeasible;
        best.allocation.powers = PowerVector(m);
        best.allocation.layers.assign(m, 0);
        best.allocation.qos.assign(m, 0.0);
        best.allocation.rates.assign(m, 0.0);
        best.allocation.ee.assign(m, kInfiniteEe);
    }
    return best;
}

Allocation grid_search(const UplinkScenario& scenario, std::size_t points_per_dim) {
    const std::size_t m = scenario.size();
    if (points_per_dim < 2) {
        throw std::invalid_argument("grid_search: need at least two points per dimension");
    }
    if (std::pow(static_cast<double>(points_per_dim), static_cast<double>(m)) > kGridGuard) {
        throw std::length_error("grid_search: grid too large");
    }

    const double b = scenario.bandwidth_hz();
    std::vector<std::size_t> lo(m, 0);
    std::vector<std::size_t> hi(m, points_per_dim - 1);
    std::vector<std::size_t> idx = lo;

    Allocation best;
    best.status = SolveStatus::infeasible;
    best.powers = PowerVector(m);
    best.layers.assign(m, 0);
    best.qos.assign(m, 0.0);
    best.rates.assign(m, 0.0);
    best.ee.assign(m, kInfiniteEe);
    bool found = false;
    double best_value = 0.0;
    double best_power = 0.0;

    PowerVector p(m);
    do {
        for (std::size_t i = 0; i < m; ++i) {
            const double pmax = scenario.device(i).p_max_mw;
            p[i] = idx[i] == points_per_dim - 1
                       ? pmax
                       : pmax * static_cast<double>(idx[i]) / static_cast<double>(points_per_dim - 1);
        }
        const SinrVector y = sinr(scenario, p);
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            const Device& d = scenario.device(i);
            ok = y[i] >= scenario.min_sinr()[i] && energy_efficiency(shannon_rate(y[i], b), p[i]) >= d.ee_min;
        }
        if (!ok) {
            continue;
        }
        const double value = average_qos(scenario, y.span());
        const double power = total(p);
        if (!found || value > best_value || (value == best_value && power < best_power)) {
            found = true;
            best_value = value;
            best_power = power;
            best = allocation_from_sinr(scenario, y, Scheme::proposed, SolveStatus::converged, 0);
            best.powers = p;
        }
    } while (next_tuple(idx, lo, hi));
    return best;
}

}  // namespace nomaqos
