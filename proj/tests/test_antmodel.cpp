#include <cmath>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "ifatune/antmodel.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ifatune::antmodel;
using ifatune::rfcore::is_open;
using ifatune::rfcore::open_circuit;

namespace {

constexpr double kPi = oracle::kPi;
constexpr double kDeg = kPi / 180.0;

antenna_geometry geometry(double z0, double th_open, double th_short, impedance z_end, double ff) {
    antenna_geometry g;
    g.z0 = z0;
    g.theta_open_ref = th_open;
    g.theta_short_ref = th_short;
    g.f_ref = 1e9;
    g.z_end = z_end;
    g.feed_fraction = ff;
    return g;
}

resonator_network through() {
    resonator_network n;
    n.bypass = true;
    return n;
}

// Feed-tap impedance of an open-ended arm with a through resonator, from ABCD algebra.
oracle::cplx tap_oracle(double z0, double th_open, double th_short, double ff, double f) {
    const double s = f / 1e9;
    const oracle::cplx stub = oracle::abcd_short(z0, ff * th_short * s);
    const oracle::cplx arm = oracle::abcd_line(z0, (1.0 - ff) * th_short * s, oracle::abcd_open(z0, th_open * s));
    return stub * arm / (stub + arm);
}

}  // namespace

TEST(toward_open, examples) {
    const auto g = geometry(50.0, kPi / 4, 0.3, open_circuit(), 0.5);
    const impedance z = impedance_toward_open(g, 1e9);
    EXPECT_NEAR(z.real(), 0.0, 1e-12);
    EXPECT_NEAR(z.imag(), -50.0, 1e-12);
    EXPECT_NEAR(std::abs(impedance_toward_open(g, 2e9)), 0.0, 1e-9);
}

TEST(toward_open, matched_termination_is_flat) {
    const auto g = geometry(50.0, 1.1, 0.3, {50.0, 0.0}, 0.5);
    for (double f = 1e8; f < 5e9; f += 1.37e8) {
        const impedance z = impedance_toward_open(g, f);
        ASSERT_NEAR(z.real(), 50.0, 1e-9);
        ASSERT_NEAR(z.imag(), 0.0, 1e-9);
    }
}

TEST(toward_short, examples) {
    const auto g = geometry(50.0, 1.0, kPi / 4, open_circuit(), 0.5);
    EXPECT_NEAR(impedance_toward_short(g, 1e9).imag(), 50.0, 1e-12);
    EXPECT_NEAR(std::abs(impedance_toward_short(g, 1.0)), 0.0, 1e-6);
    const auto g3 = geometry(50.0, 1.0, kPi / 3, open_circuit(), 0.5);
    EXPECT_NEAR(impedance_toward_short(g3, 1e9).imag(), 86.603, 5e-4);
}

TEST(input_impedance, feed_at_resonator_definition) {
    const auto g = geometry(120.0, 70 * kDeg, 12 * kDeg, {900.0, 30.0}, 1.0);
    const resonator_network net;
    for (double f : {4e8, 8.5e8, 1.3e9, 2.2e9}) {
        const impedance want = ifatune::rfcore::parallel(
            impedance_toward_short(g, f),
            ifatune::rfcore::resonator_impedance(net, f) + impedance_toward_open(g, f));
        EXPECT_EQ(input_impedance(g, net, f), want);
    }
}

TEST(input_impedance, through_with_feed_at_resonator_is_stub_parallel_arm) {
    const auto g = geometry(75.0, 1.2, 0.4, open_circuit(), 1.0);
    for (double f : {2e8, 7e8, 1.1e9}) {
        EXPECT_EQ(input_impedance(g, through(), f),
                  ifatune::rfcore::parallel(impedance_toward_short(g, f), impedance_toward_open(g, f)));
    }
}

TEST(input_impedance, dc_short) {
    const auto g = geometry(50.0, 60 * kDeg, 30 * kDeg, open_circuit(), 0.5);
    EXPECT_LT(std::abs(input_impedance(g, through(), 1e3)), 1e-4);
    const auto at_short = geometry(50.0, 60 * kDeg, 30 * kDeg, open_circuit(), 0.0);
    EXPECT_EQ(std::abs(input_impedance(at_short, through(), 1e9)), 0.0);
}

TEST(input_impedance, matches_tap_oracle) {
    const auto g = geometry(50.0, 60 * kDeg, 30 * kDeg, open_circuit(), 0.5);
    for (int i = 1; i < 400; ++i) {
        const double f = 2e9 * i / 400.0;
        const oracle::cplx want = tap_oracle(50.0, 60 * kDeg, 30 * kDeg, 0.5, f);
        const impedance got = input_impedance(g, through(), f);
        if (std::abs(want) > 1e6) continue;  // pole neighbourhood, clipped by design
        ASSERT_LT(std::abs(got - want), 1e-8 * (1.0 + std::abs(want))) << f;
    }
}

TEST(input_impedance, single_series_zero_below_twice_quarter_wave) {
    // 60 + 30 degrees at 1 GHz: quarter-wave frequency f_q = 1 GHz
    const double z0 = 50.0, tho = 60 * kDeg, ths = 30 * kDeg, ff = 0.5;
    const auto g = geometry(z0, tho, ths, open_circuit(), ff);
    const double f_q = 1e9;
    const int n = 200000;
    std::vector<double> oracle_zeros;
    double prev = tap_oracle(z0, tho, ths, ff, 2.0 * f_q / n).imag();
    for (int i = 2; i < n; ++i) {
        const double f = 2.0 * f_q * i / n;
        const double x = tap_oracle(z0, tho, ths, ff, f).imag();
        if (prev < 0.0 && x >= 0.0) oracle_zeros.push_back(f);
        prev = x;
    }
    ASSERT_EQ(oracle_zeros.size(), 1u);
    // open arm seen from the tap is a quarter wave at (60 + 15) degrees * f/f_ref = 90
    EXPECT_NEAR(oracle_zeros[0], 1.2e9, 2.0 * f_q / n);

    std::vector<double> zeros;
    prev = input_impedance(g, through(), 2.0 * f_q / n).imag();
    for (int i = 2; i < n; ++i) {
        const double f = 2.0 * f_q * i / n;
        const double x = input_impedance(g, through(), f).imag();
        if (prev < 0.0 && x >= 0.0) zeros.push_back(f);
        prev = x;
    }
    ASSERT_EQ(zeros.size(), 1u);
    EXPECT_EQ(zeros[0], oracle_zeros[0]);
}

TEST(input_impedance, passive_with_resistive_end) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const auto g = geometry(20.0 + 300.0 * u(rng), (10 + 160 * u(rng)) * kDeg, (5 + 85 * u(rng)) * kDeg,
                                {1e4 * u(rng), 2e3 * (u(rng) - 0.5)}, u(rng));
        resonator_network net;
        net.l1 = 1e-9 + 20e-9 * u(rng);
        net.c1 = 0.3e-12 + 3e-12 * u(rng);
        const double f = 1e8 + 3e9 * u(rng);
        const impedance z = input_impedance(g, net, f);
        ASSERT_GE(z.real(), -1e-9 * (1.0 + std::abs(z)));
        const auto rl = return_loss(z, 50.0);
        ASSERT_LE(rl.db, 0.0);
    }
}

TEST(return_loss, examples) {
    EXPECT_EQ(return_loss({50.0, 0.0}, 50.0).db, kReturnLossFloorDb);
    EXPECT_EQ(return_loss(open_circuit(), 50.0).db, 0.0);
    EXPECT_NEAR(return_loss({100.0, 0.0}, 50.0).db, -9.542, 5e-4);
    EXPECT_NEAR(return_loss({100.0, 0.0}, 50.0).db, 20.0 * std::log10(1.0 / 3.0), 1e-12);
    const auto pole = return_loss({-50.0, 0.0}, 50.0);
    EXPECT_TRUE(pole.pole);
    EXPECT_EQ(pole.db, 0.0);
    EXPECT_FALSE(return_loss({20.0, 5.0}, 50.0).pole);
    EXPECT_EQ(return_loss({0.0, 37.0}, 50.0).db, 0.0);
    EXPECT_THROW(return_loss({50.0, 0.0}, 0.0), std::domain_error);
}

TEST(sweep, shape_contract) {
    const auto& cfg = testsupport::calibrated_config();
    const auto p = sweep(cfg.geometry, cfg.resonator_at(0.0), 0.5e9, 2.5e9, 2001);
    ASSERT_EQ(p.size(), 2001u);
    EXPECT_EQ(p.z_in.size(), 2001u);
    EXPECT_EQ(p.s11_db.size(), 2001u);
    EXPECT_EQ(p.freqs.front(), 0.5e9);
    EXPECT_EQ(p.freqs.back(), 2.5e9);
    for (std::size_t i = 1; i < p.size(); ++i) ASSERT_LT(p.freqs[i - 1], p.freqs[i]);
    for (double s : p.s11_db) ASSERT_LE(s, 0.0);
}

TEST(sweep, pure) {
    const auto& cfg = testsupport::calibrated_config();
    const auto a = sweep(cfg.geometry, cfg.resonator_at(3.0), 0.4e9, 2.6e9, 777, 75.0);
    const auto b = sweep(cfg.geometry, cfg.resonator_at(3.0), 0.4e9, 2.6e9, 777, 75.0);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(0, std::memcmp(a.s11_db.data(), b.s11_db.data(), a.size() * sizeof(double)));
    EXPECT_EQ(0, std::memcmp(a.z_in.data(), b.z_in.data(), a.size() * sizeof(impedance)));
    EXPECT_EQ(a.z_ref, 75.0);
}

TEST(sweep, rejects_bad_ranges) {
    const auto& cfg = testsupport::calibrated_config();
    const auto net = cfg.resonator_at(0.0);
    EXPECT_THROW(sweep(cfg.geometry, net, 2e9, 1e9, 100), std::domain_error);
    EXPECT_THROW(sweep(cfg.geometry, net, 0.0, 1e9, 100), std::domain_error);
    EXPECT_THROW(sweep(cfg.geometry, net, 1e9, 2e9, 1), std::domain_error);
}

TEST(sweep, matched_arm_with_feed_at_resonator) {
    // z_end = z0 = 50 and a through resonator: the open side looks like 50 ohm,
    // so the feed sees only the short stub in parallel with 50 ohm.
    const auto g = geometry(50.0, 1.0, 0.4, {50.0, 0.0}, 1.0);
    const auto p = sweep(g, through(), 0.5e9, 2.5e9, 201);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const oracle::cplx stub = oracle::abcd_short(50.0, 0.4 * p.freqs[i] / 1e9);
        const oracle::cplx want = stub * 50.0 / (stub + 50.0);
        ASSERT_LT(std::abs(p.z_in[i] - want), 1e-9 * (1.0 + std::abs(want)));
        const double gamma = std::abs((want - 50.0) / (want + 50.0));
        ASSERT_NEAR(p.s11_db[i], 20.0 * std::log10(gamma), 1e-9);
    }
}

TEST(sweep, calibrated_default_has_two_dips) {
    const auto& cfg = testsupport::calibrated_config();
    const auto p = sweep(cfg.geometry, cfg.resonator_at(0.0), 0.5e9, 2.5e9, 2001);
    int dips = 0;
    for (auto i : s11_minima(p, -6.0)) {
        if (p.freqs[i] >= 0.7e9 && p.freqs[i] <= 2.3e9) ++dips;
    }
    EXPECT_EQ(dips, 2);
}

TEST(s11_minima, interior_minima_below_level) {
    frequency_profile p;
    p.s11_db = {-1, -8, -3, -2, -5, -4, -7, -9};
    for (std::size_t i = 0; i < p.s11_db.size(); ++i) {
        p.freqs.push_back(1e9 + 1e6 * i);
        p.z_in.push_back({50.0, 0.0});
    }
    const auto m = s11_minima(p, -6.0);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0], 1u);
    EXPECT_EQ(s11_minima(p, -4.5).size(), 2u);
}

TEST(linear_grid, endpoints_exact) {
    const auto g = linear_grid(0.7e9, 2.3e9, 17);
    EXPECT_EQ(g.front(), 0.7e9);
    EXPECT_EQ(g.back(), 2.3e9);
    EXPECT_EQ(g.size(), 17u);
    EXPECT_NEAR(g[8], 1.5e9, 1e-3);
}

TEST(geometry, validation) {
    auto g = geometry(50.0, 1.0, 0.3, open_circuit(), 0.5);
    EXPECT_NO_THROW(g.validate());
    g.feed_fraction = 1.5;
    EXPECT_THROW(g.validate(), std::domain_error);
    g.feed_fraction = 0.5;
    g.z0 = 0.0;
    EXPECT_THROW(g.validate(), std::domain_error);
    g.z0 = 50.0;
    g.theta_short_ref = -0.1;
    EXPECT_THROW(g.validate(), std::domain_error);
    EXPECT_TRUE(is_open(geometry(50.0, 1.0, 0.3, open_circuit(), 0.5).z_end));
}
