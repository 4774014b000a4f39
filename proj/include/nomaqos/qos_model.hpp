#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomaqos {

/// Raised when user-supplied data breaks a documented invariant. The message
/// names the first violation found.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SvcLayer {
    double rate_bps = 0.0;  // cumulative rate needed to deliver layers 1..l
    double psnr_db = 0.0;   // quality with layers 1..l received
};

/// Rate-quality staircase of one scalable video stream. Rates and PSNR are
/// strictly increasing with the layer index; layer 1 is the base layer.
class SvcLayerTable {
public:
    SvcLayerTable() = default;
    explicit SvcLayerTable(std::vector<SvcLayer> layers);

    std::size_t num_layers() const { return layers_.size(); }
    const SvcLayer& layer(std::size_t l) const { return layers_.at(l); }  // 0-based
    std::span<const SvcLayer> layers() const { return layers_; }
    double base_rate() const { return layers_.front().rate_bps; }
    double top_psnr() const { return layers_.back().psnr_db; }

private:
    std::vector<SvcLayer> layers_;
};

/// Luminance plane, row-major, intensities in [0, 255].
class Frame {
public:
    Frame(std::size_t width, std::size_t height, std::vector<double> luminance);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    double at(std::size_t x, std::size_t y) const { return luma_[y * width_ + x]; }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> luma_;
};

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

double mse_between_frames(const Frame& original, const Frame& reconstructed);

/// 10 log10(255^2 / mse); +inf for a perfect reconstruction.
double psnr_from_mse(double mse);

/// Per-layer quality contributions q_l = Q_l - Q_{l-1}, with Q_0 = 0.
std::vector<double> layer_increments(const SvcLayerTable& table);

/// Number of layers decodable at rate R (the indicator R >= R_l is inclusive).
std::size_t layers_at_rate(double rate_bps, const SvcLayerTable& table);

/// PSNR delivered at rate R: 0 below the base layer, Q_L once saturated.
double qos_of_rate(double rate_bps, const SvcLayerTable& table);

/// Number of layers decodable at SINR y, comparing against the SINR
/// thresholds 2^(R_l/B) - 1 rather than the rate itself so that a point placed
/// exactly on a threshold always counts.
std::size_t layers_at_sinr(double sinr, const SvcLayerTable& table, double bandwidth_hz);

/// Quality reached with `layers` layers (0 -> 0 dB).
double psnr_of_layers(std::size_t layers, const SvcLayerTable& table);

/// Mean per-device PSNR at the SINR vector y. Nondecreasing in every y_i.
double average_qos(std::span<const double> sinr, std::span<const SvcLayerTable> tables,
                   double bandwidth_hz);

/// Synthetic staircase: rates base_rate * ratio^(l-1), quality a + b log10(1 + c R).
SvcLayerTable synth_table(double a, double b, double c, double base_rate, std::size_t num_layers,
                          double rate_ratio = 1.5);

}  // namespace nomaqos
