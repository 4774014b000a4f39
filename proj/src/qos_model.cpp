#include "nomaqos/qos_model.hpp"

#include <cmath>

#include "nomaqos/noma_core.hpp"

namespace nomaqos {

SvcLayerTable::SvcLayerTable(std::vector<SvcLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw ValidationError("layer table must contain at least one layer");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        const std::string where = "layer " + std::to_string(l + 1) + ": ";
        if (!std::isfinite(layer.rate_bps) || !std::isfinite(layer.psnr_db)) {
            throw ValidationError(where + "rate_bps and psnr_db must be finite");
        }
        if (layer.rate_bps < 0.0) {
            throw ValidationError(where + "rate_bps must be nonnegative");
        }
        if (l == 0) {
            if (layer.psnr_db <= 0.0) {
                throw ValidationError(where + "psnr_db must be positive");
            }
            continue;
        }
        if (!(layer.rate_bps > layers_[l - 1].rate_bps)) {
            throw ValidationError(where + "rate_bps not strictly increasing");
        }
        if (!(layer.psnr_db > layers_[l - 1].psnr_db)) {
            throw ValidationError(where + "psnr_db not strictly increasing");
        }
    }
}

Frame::Frame(std::size_t width, std::size_t height, std::vector<double> luminance)
    : width_(width), height_(height), luma_(std::move(luminance)) {
    if (width_ == 0 || height_ == 0) {
        throw ValidationError("frame dimensions must be at least 1x1");
    }
    if (luma_.size() != width_ * height_) {
        throw ValidationError("frame luminance size does not match width*height");
    }
    for (double v : luma_) {
        if (!(v >= 0.0 && v <= 255.0)) {
            throw ValidationError("luminance intensities must lie in [0, 255]");
        }
    }
}

double mse_between_frames(const Frame& original, const Frame& reconstructed) {
    if (original.width() != reconstructed.width() || original.height() != reconstructed.height()) {
        throw std::invalid_argument("mse_between_frames: frame dimensions differ");
    }
    double acc = 0.0;
    for (std::size_t y = 0; y < original.height(); ++y) {
        for (std::size_t x = 0; x < original.width(); ++x) {
            const double d = original.at(x, y) - reconstructed.at(x, y);
            acc += d * d;
        }
    }
    return acc / static_cast<double>(original.width() * original.height());
}

double psnr_from_mse(double mse) {
    if (mse < 0.0 || std::isnan(mse)) {
        throw std::domain_error("psnr_from_mse: mse must be nonnegative");
    }
    if (mse == 0.0) {
        return kInfinitePsnr;
    }
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<double> layer_increments(const SvcLayerTable& table) {
    std::vector<double> q;
    q.reserve(table.num_layers());
    double prev = 0.0;
    for (const auto& layer : table.layers()) {
        q.push_back(layer.psnr_db - prev);
        prev = layer.psnr_db;
    }
    return q;
}

std::size_t layers_at_rate(double rate_bps, const SvcLayerTable& table) {
    std::size_t l = 0;
    while (l < table.num_layers() && rate_bps >= table.layer(l).rate_bps) {
        ++l;
    }
    return l;
}

double psnr_of_layers(std::size_t layers, const SvcLayerTable& table) {
    return layers == 0 ? 0.0 : table.layer(layers - 1).psnr_db;
}

double qos_of_rate(double rate_bps, const SvcLayerTable& table) {
    return psnr_of_layers(layers_at_rate(rate_bps, table), table);
}

std::size_t layers_at_sinr(double sinr, const SvcLayerTable& table, double bandwidth_hz) {
    std::size_t l = 0;
    while (l < table.num_layers() && sinr >= min_sinr_from_rate(table.layer(l).rate_bps, bandwidth_hz)) {
        ++l;
    }
    return l;
}

double average_qos(std::span<const double> sinr, std::span<const SvcLayerTable> tables,
                   double bandwidth_hz) {
    if (sinr.size() != tables.size() || sinr.empty()) {
        throw std::invalid_argument("average_qos: SINR vector and table list differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < sinr.size(); ++i) {
        total += psnr_of_layers(layers_at_sinr(sinr[i], tables[i], bandwidth_hz), tables[i]);
    }
    return total / static_cast<double>(sinr.size());
}

SvcLayerTable synth_table(double a, double b, double c, double base_rate, std::size_t num_layers,
                          double rate_ratio) {
    if (num_layers == 0) {
        throw ValidationError("synth_table: num_layers must be at least 1");
    }
    if (!(base_rate > 0.0) || !(rate_ratio > 1.0)) {
        throw ValidationError("synth_table: base_rate must be positive and rate_ratio above 1");
    }
    if (!(b > 0.0) || !(c > 0.0)) {
        throw ValidationError("synth_table: b and c must be positive for PSNR to increase with rate");
    }
    std::vector<SvcLayer> layers;
    layers.reserve(num_layers);
    double rate = base_rate;
    for (std::size_t l = 0; l < num_layers; ++l) {
        layers.push_back({rate, a + b * std::log10(1.0 + c * rate)});
        rate *= rate_ratio;
    }
    // The constructor rejects parameter sets whose PSNR is not positive or
    // collapses to equal values in floating point.
    return SvcLayerTable(std::move(layers));
}

}  // namespace nomaqos
