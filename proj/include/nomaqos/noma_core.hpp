#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "nomaqos/qos_model.hpp"

namespace nomaqos {

/// Fixed-length vector of nonnegative per-device quantities in decode order.
/// The tag keeps powers and SINRs from being mixed up at call sites.
template <class Tag>
class TaggedVector {
public:
    TaggedVector() = default;
    explicit TaggedVector(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit TaggedVector(std::vector<double> values) : values_(std::move(values)) {}
    TaggedVector(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }
    std::span<const double> span() const { return values_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const TaggedVector&, const TaggedVector&) = default;

private:
    std::vector<double> values_;
};

struct PowerTag {};
struct SinrTag {};
using PowerVector = TaggedVector<PowerTag>;  // mW
using SinrVector = TaggedVector<SinrTag>;    // linear

inline constexpr double kInfiniteEe = std::numeric_limits<double>::infinity();

struct Device {
    double gain_sq = 0.0;   // h^2, linear
    double p_max_mw = 0.0;
    double ee_min = 0.0;    // bit/s per mW
    SvcLayerTable table;
};

/// Immutable problem instance. Devices are stored in SIC decode order
/// (strictly descending gain); original_index() maps back to the order the
/// caller supplied.
class UplinkScenario {
public:
    UplinkScenario(std::vector<Device> devices, double bandwidth_hz, double noise_mw);

    std::size_t size() const { return devices_.size(); }
    const Device& device(std::size_t i) const { return devices_[i]; }
    std::span<const Device> devices() const { return devices_; }
    std::span<const SvcLayerTable> tables() const { return tables_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    double noise_mw() const { return noise_mw_; }
    std::size_t original_index(std::size_t i) const { return original_index_[i]; }

    /// gamma_i^min: SINR needed for each base layer.
    const SinrVector& min_sinr() const { return min_sinr_; }
    /// Interference-free SINR caps h_i^2 p_i^max / sigma^2.
    const SinrVector& sinr_caps() const { return sinr_caps_; }
    /// SINR threshold of layer l (0-based) of device i.
    double layer_sinr(std::size_t i, std::size_t l) const { return layer_sinr_[i][l]; }

    std::size_t layers_reached(std::size_t i, double sinr) const;

private:
    std::vector<Device> devices_;
    std::vector<SvcLayerTable> tables_;
    std::vector<std::size_t> original_index_;
    std::vector<std::vector<double>> layer_sinr_;
    double bandwidth_hz_;
    double noise_mw_;
    SinrVector min_sinr_;
    SinrVector sinr_caps_;
};

/// gamma_i = h_i^2 p_i / (sum_{j>i} h_j^2 p_j + sigma^2).
SinrVector sinr(const UplinkScenario& scenario, const PowerVector& p);

/// Shannon rate B log2(1 + gamma_i) per device, bit/s.
std::vector<double> rate(const UplinkScenario& scenario, const SinrVector& gamma);
double shannon_rate(double sinr, double bandwidth_hz);

/// R/p in bit/s per mW; +inf when p == 0.
double energy_efficiency(double rate_bps, double power_mw);

/// Exact inverse of sinr(): back-substitution from the last decoded device.
PowerVector powers_from_sinr(const UplinkScenario& scenario, const SinrVector& gamma);

/// 2^(R/B) - 1.
double min_sinr_from_rate(double rate_bps, double bandwidth_hz);

/// Membership in G = G1 ∩ G2: the power preimage of y respects every power cap
/// and every energy-efficiency floor.
bool is_in_g(const UplinkScenario& scenario, std::span<const double> y);
bool is_in_h(const UplinkScenario& scenario, std::span<const double> y);

double average_qos(const UplinkScenario& scenario, std::span<const double> y);

}  // namespace nomaqos
