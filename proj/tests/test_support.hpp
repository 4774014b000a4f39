#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nomaqos/channel_model.hpp"
#include "nomaqos/noma_core.hpp"
#include "nomaqos/qos_model.hpp"

namespace nomaqos::testing {

inline SvcLayerTable small_table() {
    return SvcLayerTable({{1e5, 30.0}, {2e5, 35.0}, {4e5, 38.0}});
}

/// Devices with the given gains, one shared table, noise 1 mW.
inline UplinkScenario scenario_with_gains(const std::vector<double>& gains, double p_max_mw, double ee_min,
                                          const SvcLayerTable& table = small_table(),
                                          double bandwidth_hz = 180e3, double noise_mw = 1.0) {
    std::vector<Device> devices;
    for (double g : gains) {
        devices.push_back(Device{g, p_max_mw, ee_min, table});
    }
    return UplinkScenario(std::move(devices), bandwidth_hz, noise_mw);
}

/// Path-loss and fading drawn from the seed, synthetic tables with 2 to 4
/// layers, p_max in [10, 30] dBm, distances in [35 m, radius].
inline UplinkScenario random_scenario(std::uint64_t seed, std::size_t m, double radius_m = 1000.0,
                                      double ee_min = 1000.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p_max_dbm = 10.0 + 20.0 * u(rng);
    std::vector<double> distances;
    for (std::size_t i = 0; i < m; ++i) {
        const double r0 = 35.0;
        distances.push_back(std::sqrt(u(rng) * (radius_m * radius_m - r0 * r0) + r0 * r0) / 1000.0);
    }
    ChannelParams params;
    const auto channels = sample_channels(seed ^ 0x9e3779b97f4a7c15ULL, distances, params);
    std::vector<Device> devices;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t layers = 2 + static_cast<std::size_t>(u(rng) * 3.0);
        devices.push_back(Device{channels[i].gain_sq_linear, dbm_to_mw(p_max_dbm), ee_min,
                                 synth_table(20.0, 10.0, 1e-4, 1e5, layers, 1.6)});
    }
    return UplinkScenario(std::move(devices), params.bandwidth_hz, noise_power_mw(params));
}

}  // namespace nomaqos::testing
