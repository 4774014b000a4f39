#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nomaqos {

// Power is carried in mW (linear) everywhere inside the library. dBm only
// appears at the configuration and CLI boundary.

struct ChannelParams {
    double bandwidth_hz = 180e3;
    double noise_psd_dbm_per_hz = -174.0;
    bool fading_enabled = true;

    void validate() const;
};

struct ChannelRealization {
    double distance_km = 1.0;
    double gain_sq_linear = 0.0;  // h^2, includes path loss and |beta|^2
};

/// Log-distance macro-cell loss, 128.1 + 37.6 log10(d[km]).
/// Throws std::domain_error for d <= 0.
double path_loss_db(double distance_km);

/// Thermal noise over the band, B * N0, in mW.
double noise_power_mw(const ChannelParams& params);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Linear gain for each distance. With fading enabled each gain carries an
/// independent unit-mean exponential factor (|CN(0,1)|^2). Pure in its
/// arguments: the same seed always yields the same gains.
std::vector<ChannelRealization> sample_channels(std::uint64_t seed,
                                                std::span<const double> distances_km,
                                                const ChannelParams& params);

// Seeding helpers shared by the experiment harness.

std::uint64_t splitmix64(std::uint64_t x);

/// Independent substream seed for (base seed, trial, stream id). Trials can be
/// generated in any order or in parallel and still reproduce bit-for-bit.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

using Rng = std::mt19937_64;

}  // namespace nomaqos
