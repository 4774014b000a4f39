#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nomaqos/noma_core.hpp"
#include "test_support.hpp"

using namespace nomaqos;
using nomaqos::testing::scenario_with_gains;

TEST_CASE("scenario sorts devices into decode order") {
    const auto s = scenario_with_gains({1.0, 4.0, 2.0}, 10.0, 0.0);
    CHECK(s.device(0).gain_sq == 4.0);
    CHECK(s.device(1).gain_sq == 2.0);
    CHECK(s.device(2).gain_sq == 1.0);
    CHECK(s.original_index(0) == 1);
    CHECK(s.original_index(1) == 2);
    CHECK(s.original_index(2) == 0);

    const auto tied = scenario_with_gains({3.0, 3.0}, 10.0, 0.0);
    CHECK(tied.device(0).gain_sq > tied.device(1).gain_sq);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(scenario_with_gains({}, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(scenario_with_gains({0.0}, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(scenario_with_gains({1.0}, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(scenario_with_gains({1.0}, 1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(scenario_with_gains({1.0}, 1.0, 0.0, testing::small_table(), 0.0), ValidationError);
}

TEST_CASE("SINR") {
    const auto one = scenario_with_gains({2.0}, 10.0, 0.0);
    CHECK(sinr(one, PowerVector{3.0})[0] == doctest::Approx(6.0));

    const auto two = scenario_with_gains({4.0, 1.0}, 10.0, 0.0);
    const auto g = sinr(two, PowerVector{1.0, 2.0});
    CHECK(g[0] == doctest::Approx(4.0 / 3.0));
    CHECK(g[1] == doctest::Approx(2.0));
    CHECK(sinr(two, PowerVector{0.0, 0.0}) == SinrVector{0.0, 0.0});
    CHECK_THROWS(sinr(two, PowerVector{1.0}));
}

TEST_CASE("rate and energy efficiency") {
    const auto s = scenario_with_gains({4.0, 1.0}, 10.0, 0.0);
    const auto r = rate(s, SinrVector{1.0, 0.0});
    CHECK(r[0] == doctest::Approx(180e3));
    CHECK(r[1] == 0.0);
    CHECK(shannon_rate(3.0, 180000.0) == doctest::Approx(360000.0));

    CHECK(energy_efficiency(1000.0, 10.0) == doctest::Approx(100.0));
    CHECK(energy_efficiency(0.0, 0.0) == kInfiniteEe);
    CHECK(energy_efficiency(360000.0, 100.0) == doctest::Approx(3600.0));
}

TEST_CASE("powers from SINR") {
    const auto one = scenario_with_gains({2.0}, 10.0, 0.0);
    CHECK(powers_from_sinr(one, SinrVector{6.0})[0] == doctest::Approx(3.0));
    CHECK(powers_from_sinr(one, SinrVector{0.0})[0] == 0.0);

    const auto two = scenario_with_gains({4.0, 1.0}, 10.0, 0.0);
    const auto p = powers_from_sinr(two, SinrVector{4.0 / 3.0, 2.0});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(2.0));
}

TEST_CASE("min SINR from rate") {
    CHECK(min_sinr_from_rate(180e3, 180e3) == doctest::Approx(1.0));
    CHECK(min_sinr_from_rate(0.0, 180e3) == 0.0);
    CHECK(min_sinr_from_rate(360e3, 180e3) == doctest::Approx(3.0));
}

TEST_CASE("SINR and power round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t m = 1 + k % 6;
        std::vector<double> gains;
        for (std::size_t i = 0; i < m; ++i) gains.push_back(std::pow(10.0, -3.0 * u(rng)));
        const auto s = scenario_with_gains(gains, 1.0, 0.0);
        SinrVector gamma(m);
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            gamma[i] = 100.0 * u(rng);
            norm = std::max(norm, gamma[i]);
        }
        const auto back = sinr(s, powers_from_sinr(s, gamma));
        double err = 0.0;
        for (std::size_t i = 0; i < m; ++i) err = std::max(err, std::abs(back[i] - gamma[i]));
        CHECK(err / (1.0 + norm) <= 1e-9);
    }
}

TEST_CASE("G membership") {
    const auto s = scenario_with_gains({4.0, 1.0}, 10.0, 1000.0);
    const std::vector<double> zero{0.0, 0.0};
    CHECK(is_in_g(s, zero));
    const std::vector<double> over{s.sinr_caps()[0] * 1.0001, 0.0};
    CHECK_FALSE(is_in_g(s, over));
    const std::vector<double> over2{0.0, s.sinr_caps()[1] * 1.0001};
    CHECK_FALSE(is_in_g(s, over2));
}

TEST_CASE("G membership flips where the power cap is crossed") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const auto s = scenario_with_gains({1.0 + u(rng), 0.5 * u(rng) + 0.1, 0.05 + 0.05 * u(rng)}, 5.0, 0.0);
        std::vector<double> y{0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
        REQUIRE(is_in_g(s, y));
        const std::size_t i = static_cast<std::size_t>(k % 3);
        double lo = y[i];
        double hi = s.sinr_caps()[i] * 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto t = y;
            t[i] = mid;
            (is_in_g(s, t) ? lo : hi) = mid;
        }
        // Oracle: at the flip, the power of some device sits on its cap.
        auto at = y;
        at[i] = lo;
        const auto p = powers_from_sinr(s, SinrVector(at));
        double worst = 0.0;
        for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, p[j] / s.device(j).p_max_mw);
        CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("G is normal and H is conormal") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto s = testing::random_scenario(static_cast<std::uint64_t>(k), 1 + k % 4);
        const std::size_t m = s.size();
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = s.sinr_caps()[i] * u(rng) * u(rng);
        if (!is_in_g(s, y)) continue;
        ++checked;
        std::vector<double> below(m);
        for (std::size_t i = 0; i < m; ++i) below[i] = y[i] * u(rng);
        CHECK(is_in_g(s, below));

        std::vector<double> h(m), above(m);
        for (std::size_t i = 0; i < m; ++i) {
            h[i] = s.min_sinr()[i] * (1.0 + u(rng));
            above[i] = h[i] + u(rng) * 10.0;
        }
        REQUIRE(is_in_h(s, h));
        CHECK(is_in_h(s, above));
    }
    CHECK(checked > 300);
}

TEST_CASE("H membership") {
    const auto s = scenario_with_gains({4.0, 1.0}, 10.0, 0.0);
    const std::vector<double> at{s.min_sinr()[0], s.min_sinr()[1]};
    CHECK(is_in_h(s, at));
    const std::vector<double> below{std::nextafter(s.min_sinr()[0], 0.0), s.min_sinr()[1]};
    CHECK_FALSE(is_in_h(s, below));

    const auto free_base = scenario_with_gains({4.0, 1.0}, 10.0, 0.0, SvcLayerTable({{0.0, 25.0}, {1e5, 30.0}}));
    const std::vector<double> zero{0.0, 0.0};
    CHECK(is_in_h(free_base, zero));
}

TEST_CASE("EE floor enters G") {
    const auto loose = scenario_with_gains({1.0}, 1000.0, 0.0);
    const auto tight = scenario_with_gains({1.0}, 1000.0, 1e5);
    const std::vector<double> y{100.0};
    CHECK(is_in_g(loose, y));
    // 180e3 * log2(101) / 100 mW is about 1.2e4, below the floor.
    CHECK_FALSE(is_in_g(tight, y));
}

TEST_CASE("average QoS of a SINR point") {
    const auto s = scenario_with_gains({4.0, 1.0}, 10.0, 0.0);
    const std::vector<double> y{s.layer_sinr(0, 0), 0.0};
    CHECK(average_qos(s, y) == doctest::Approx(15.0));
    const std::vector<double> top{1e9, 1e9};
    CHECK(average_qos(s, top) == doctest::Approx(38.0));
}
