#include "nomaqos/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nomaqos {

void ChannelParams::validate() const {
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw std::invalid_argument("bandwidth_hz must be positive, got " + std::to_string(bandwidth_hz));
    }
    if (!std::isfinite(noise_psd_dbm_per_hz)) {
        throw std::invalid_argument("noise_psd_dbm_per_hz must be finite");
    }
}

double path_loss_db(double distance_km) {
    if (!(distance_km > 0.0)) {
        throw std::domain_error("path_loss_db: distance must be positive, got " + std::to_string(distance_km));
    }
    return 128.1 + 37.6 * std::log10(distance_km);
}

double noise_power_mw(const ChannelParams& params) {
    params.validate();
    return dbm_to_mw(params.noise_psd_dbm_per_hz) * params.bandwidth_hz;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
    if (!(mw > 0.0)) {
        throw std::domain_error("mw_to_dbm: power must be positive, got " + std::to_string(mw));
    }
    return 10.0 * std::log10(mw);
}

std::vector<ChannelRealization> sample_channels(std::uint64_t seed,
                                                std::span<const double> distances_km,
                                                const ChannelParams& params) {
    params.validate();
    for (double d : distances_km) {
        if (!(d > 0.0)) {
            throw std::domain_error("sample_channels: distance must be positive");
        }
    }

    Rng rng(seed);
    std::exponential_distribution<double> fading(1.0);

    std::vector<ChannelRealization> out;
    out.reserve(distances_km.size());
    for (double d : distances_km) {
        const double large_scale = std::pow(10.0, -path_loss_db(d) / 10.0);
        const double beta_sq = params.fading_enabled ? fading(rng) : 1.0;
        out.push_back({d, large_scale * beta_sq});
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * 0xd1b54a32d192ed03ULL));
}

}  // namespace nomaqos
