#include "nomaqos/noma_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nomaqos {

namespace {

void check_length(const UplinkScenario& scenario, std::size_t n, const char* what) {
    if (n != scenario.size()) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(scenario.size()) +
                                    " components, got " + std::to_string(n));
    }
}

}  // namespace

UplinkScenario::UplinkScenario(std::vector<Device> devices, double bandwidth_hz, double noise_mw)
    : bandwidth_hz_(bandwidth_hz), noise_mw_(noise_mw) {
    if (devices.empty()) {
        throw ValidationError("scenario needs at least one device");
    }
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw ValidationError("bandwidth_hz must be positive");
    }
    if (!(noise_mw > 0.0) || !std::isfinite(noise_mw)) {
        throw ValidationError("noise_mw must be positive");
    }
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto& d = devices[i];
        const std::string where = "device " + std::to_string(i) + ": ";
        if (!(d.gain_sq > 0.0) || !std::isfinite(d.gain_sq)) {
            throw ValidationError(where + "gain_sq must be positive");
        }
        if (!(d.p_max_mw > 0.0) || !std::isfinite(d.p_max_mw)) {
            throw ValidationError(where + "p_max must be positive");
        }
        if (!(d.ee_min >= 0.0) || !std::isfinite(d.ee_min)) {
            throw ValidationError(where + "ee_min must be nonnegative");
        }
        if (d.table.num_layers() == 0) {
            throw ValidationError(where + "missing layer table");
        }
    }

    original_index_.resize(devices.size());
    std::iota(original_index_.begin(), original_index_.end(), std::size_t{0});
    std::stable_sort(original_index_.begin(), original_index_.end(),
                     [&](std::size_t a, std::size_t b) { return devices[a].gain_sq > devices[b].gain_sq; });

    devices_.reserve(devices.size());
    for (std::size_t idx : original_index_) {
        devices_.push_back(devices[idx]);
    }
    // Equal gains would leave the SIC order undefined; nudge the later device
    // down by one ulp so the order is strict.
    for (std::size_t i = 1; i < devices_.size(); ++i) {
        if (devices_[i].gain_sq >= devices_[i - 1].gain_sq) {
            devices_[i].gain_sq = std::nextafter(devices_[i - 1].gain_sq, 0.0);
        }
    }

    const std::size_t m = devices_.size();
    min_sinr_ = SinrVector(m);
    sinr_caps_ = SinrVector(m);
    layer_sinr_.resize(m);
    tables_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& d = devices_[i];
        tables_.push_back(d.table);
        for (const auto& layer : d.table.layers()) {
            layer_sinr_[i].push_back(min_sinr_from_rate(layer.rate_bps, bandwidth_hz_));
        }
        min_sinr_[i] = layer_sinr_[i].front();
        sinr_caps_[i] = d.gain_sq * d.p_max_mw / noise_mw_;
    }
}

std::size_t UplinkScenario::layers_reached(std::size_t i, double sinr) const {
    const auto& thresholds = layer_sinr_[i];
    std::size_t l = 0;
    while (l < thresholds.size() && sinr >= thresholds[l]) {
        ++l;
    }
    return l;
}

SinrVector sinr(const UplinkScenario& scenario, const PowerVector& p) {
    check_length(scenario, p.size(), "sinr");
    const std::size_t m = scenario.size();
    SinrVector gamma(m);
    double interference = 0.0;  // sum over devices decoded after i
    for (std::size_t k = m; k-- > 0;) {
        if (p[k] < 0.0) {
            throw std::domain_error("sinr: negative power");
        }
        const double received = scenario.device(k).gain_sq * p[k];
        gamma[k] = received / (interference + scenario.noise_mw());
        interference += received;
    }
    return gamma;
}

double shannon_rate(double sinr, double bandwidth_hz) {
    if (sinr < 0.0 || std::isnan(sinr)) {
        throw std::domain_error("rate: SINR must be nonnegative");
    }
    return bandwidth_hz * std::log2(1.0 + sinr);
}

std::vector<double> rate(const UplinkScenario& scenario, const SinrVector& gamma) {
    check_length(scenario, gamma.size(), "rate");
    std::vector<double> r;
    r.reserve(gamma.size());
    for (double g : gamma) {
        r.push_back(shannon_rate(g, scenario.bandwidth_hz()));
    }
    return r;
}

double energy_efficiency(double rate_bps, double power_mw) {
    if (power_mw == 0.0) {
        return kInfiniteEe;
    }
    return rate_bps / power_mw;
}

PowerVector powers_from_sinr(const UplinkScenario& scenario, const SinrVector& gamma) {
    check_length(scenario, gamma.size(), "powers_from_sinr");
    const std::size_t m = scenario.size();
    PowerVector p(m);
    double interference = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        if (gamma[k] < 0.0) {
            throw std::domain_error("powers_from_sinr: negative SINR");
        }
        const double g = scenario.device(k).gain_sq;
        p[k] = gamma[k] * (interference + scenario.noise_mw()) / g;
        interference += g * p[k];
    }
    return p;
}

double min_sinr_from_rate(double rate_bps, double bandwidth_hz) {
    return std::exp2(rate_bps / bandwidth_hz) - 1.0;
}

bool is_in_g(const UplinkScenario& scenario, std::span<const double> y) {
    check_length(scenario, y.size(), "is_in_g");
    const std::size_t m = scenario.size();
    double interference = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        const Device& d = scenario.device(k);
        if (!(y[k] >= 0.0)) {
            return false;
        }
        const double p = y[k] * (interference + scenario.noise_mw()) / d.gain_sq;
        if (!(p <= d.p_max_mw)) {
            return false;
        }
        if (p > 0.0 && d.ee_min > 0.0) {
            const double ee = shannon_rate(y[k], scenario.bandwidth_hz()) / p;
            if (!(ee >= d.ee_min)) {
                return false;
            }
        }
        interference += d.gain_sq * p;
    }
    return true;
}

bool is_in_h(const UplinkScenario& scenario, std::span<const double> y) {
    check_length(scenario, y.size(), "is_in_h");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] >= scenario.min_sinr()[i])) {
            return false;
        }
    }
    return true;
}

double average_qos(const UplinkScenario& scenario, std::span<const double> y) {
    check_length(scenario, y.size(), "average_qos");
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        total += psnr_of_layers(scenario.layers_reached(i, y[i]), scenario.device(i).table);
    }
    return total / static_cast<double>(y.size());
}

}  // namespace nomaqos
