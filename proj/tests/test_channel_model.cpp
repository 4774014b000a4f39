#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nomaqos/channel_model.hpp"

using namespace nomaqos;

TEST_CASE("path loss at reference distances") {
    CHECK(path_loss_db(1.0) == doctest::Approx(128.1).epsilon(1e-12));
    CHECK(path_loss_db(0.1) == doctest::Approx(90.5).epsilon(1e-12));
    CHECK(path_loss_db(10.0) == doctest::Approx(165.7).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(0.0), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(-1.0), std::domain_error);
}

TEST_CASE("path loss increases with distance") {
    double prev = path_loss_db(0.001);
    for (double d = 0.002; d < 20.0; d *= 1.37) {
        const double cur = path_loss_db(d);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("noise power") {
    ChannelParams p;
    const double expected_dbm = -174.0 + 10.0 * std::log10(180000.0);
    CHECK(noise_power_mw(p) == doctest::Approx(std::pow(10.0, expected_dbm / 10.0)).epsilon(1e-12));
    CHECK(noise_power_mw(p) == doctest::Approx(7.16e-13).epsilon(1e-3));
    CHECK(mw_to_dbm(noise_power_mw(p)) == doctest::Approx(-121.45).epsilon(1e-4));

    p.bandwidth_hz = 1.0;
    p.noise_psd_dbm_per_hz = 0.0;
    CHECK(noise_power_mw(p) == doctest::Approx(1.0));
    p.bandwidth_hz = 2.0;
    CHECK(noise_power_mw(p) == doctest::Approx(2.0));
}

TEST_CASE("parameter validation") {
    ChannelParams p;
    p.bandwidth_hz = 0.0;
    CHECK_THROWS(p.validate());
    p.bandwidth_hz = -5.0;
    CHECK_THROWS(p.validate());
    p.bandwidth_hz = 1.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("dBm conversions") {
    CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
    CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
    CHECK(dbm_to_mw(mw_to_dbm(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
    for (double x = -40.0; x <= 40.0; x += 3.7) {
        CHECK(mw_to_dbm(dbm_to_mw(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("sample_channels without fading is pure path loss") {
    ChannelParams p;
    p.fading_enabled = false;
    const std::vector<double> d{1.0, 0.5};
    const auto ch = sample_channels(7, d, p);
    REQUIRE(ch.size() == 2);
    CHECK(ch[0].gain_sq_linear == doctest::Approx(std::pow(10.0, -12.81)).epsilon(1e-12));
    CHECK(ch[1].gain_sq_linear == doctest::Approx(std::pow(10.0, -path_loss_db(0.5) / 10.0)).epsilon(1e-12));
    CHECK(ch[0].distance_km == 1.0);
}

TEST_CASE("sample_channels is deterministic in the seed") {
    ChannelParams p;
    const std::vector<double> d{0.2, 0.4, 0.9};
    const auto a = sample_channels(42, d, p);
    const auto b = sample_channels(42, d, p);
    const auto c = sample_channels(43, d, p);
    bool any_diff = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(a[i].gain_sq_linear == b[i].gain_sq_linear);
        any_diff = any_diff || a[i].gain_sq_linear != c[i].gain_sq_linear;
    }
    CHECK(any_diff);
}

TEST_CASE("fading has unit mean") {
    ChannelParams p;
    const std::vector<double> d(100000, 1.0);
    const auto ch = sample_channels(2024, d, p);
    const double pl = std::pow(10.0, -12.81);
    double sum = 0.0;
    double smallest = 1.0;
    for (const auto& c : ch) {
        smallest = std::min(smallest, c.gain_sq_linear);
        sum += c.gain_sq_linear / pl;
    }
    CHECK(smallest >= 0.0);
    CHECK(std::abs(sum / static_cast<double>(d.size()) - 1.0) < 0.02);
}

TEST_CASE("stream seeds differ across trial and stream") {
    CHECK(derive_stream_seed(1, 0, 0) != derive_stream_seed(1, 0, 1));
    CHECK(derive_stream_seed(1, 0, 0) != derive_stream_seed(1, 1, 0));
    CHECK(derive_stream_seed(1, 0, 0) != derive_stream_seed(2, 0, 0));
    CHECK(derive_stream_seed(5, 3, 1) == derive_stream_seed(5, 3, 1));
}
