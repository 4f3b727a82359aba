/*
   Copyright 2026 The v2xsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "v2xsim/mac.hpp"

namespace v2x {
namespace {

/// Link matrix with every directed link at the given received power.
LinkMatrix uniform_links(std::size_t n, double rx_dbm)
{
    LinkMatrix m(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            if (t != r) {
                auto& l = m(t, r);
                l.tx_id = t;
                l.rx_id = r;
                l.rx_power = rx_dbm;
            }
        }
    }
    m.refresh_linear();
    return m;
}

MacConfig short_period_mac(std::int64_t cw)
{
    MacConfig mac;
    mac.cw = cw;
    mac.bsm_period = 200;
    return mac;
}

/// Fraction of attempts that overlap some other attempt in time.
double collision_fraction(const std::vector<TxAttempt>& attempts)
{
    if (attempts.empty()) {
        return 0.0;
    }
    std::size_t collided = 0;
    for (std::size_t i = 0; i < attempts.size(); ++i) {
        for (std::size_t j = 0; j < attempts.size(); ++j) {
            if (i != j && attempts[i].overlaps(attempts[j])) {
                ++collided;
                break;
            }
        }
    }
    return static_cast<double>(collided) / static_cast<double>(attempts.size());
}

TEST(BsmOffsets, RangeAndEmpty)
{
    Stream rng(1);
    for (auto o : schedule_bsm_offsets(3, 100, rng)) {
        EXPECT_GE(o, 0);
        EXPECT_LT(o, 100);
    }
    EXPECT_TRUE(schedule_bsm_offsets(0, 100, rng).empty());
    EXPECT_THROW(schedule_bsm_offsets(3, 0, rng), InvalidParameter);
}

TEST(BsmOffsets, UniformByChiSquare)
{
    Stream rng(2);
    const auto offsets = schedule_bsm_offsets(10000, 7692, rng);
    std::vector<std::size_t> bins(32);
    for (auto o : offsets) {
        ++bins[static_cast<std::size_t>(o * 32 / 7692)];
    }
    EXPECT_LT(testing::chi_square_uniform(bins), 44.985); // chi2(31) at 5%
}

TEST(Csma, SingleVehicleTransmitsEveryPeriod)
{
    const auto links = uniform_links(1, -60);
    MacConfig mac;
    Stream offset_rng(3);
    const auto offsets = schedule_bsm_offsets(1, mac.bsm_period, offset_rng);
    Stream backoff(4);
    const auto r = run_csma(links, offsets, mac, 10 * mac.bsm_period, backoff);
    ASSERT_EQ(r.attempts.size(), 10u);
    ASSERT_EQ(r.backoff_draws.size(), 10u);
    EXPECT_EQ(r.generated, 10u);
    EXPECT_EQ(r.expired, 0u);
    for (std::size_t k = 0; k < 10; ++k) {
        EXPECT_EQ(r.attempts[k].start, offsets[0] + static_cast<Slot>(k) * mac.bsm_period +
                                           mac.aifs + r.backoff_draws[k]);
        EXPECT_EQ(r.attempts[k].duration, mac.bsm_airtime);
    }
}

TEST(Csma, ZeroWindowForcesCollision)
{
    const auto links = uniform_links(2, -60);
    const auto mac = short_period_mac(0);
    const std::vector<Slot> offsets{0, 0};
    Stream backoff(5);
    const auto r = run_csma(links, offsets, mac, mac.bsm_period, backoff);
    ASSERT_EQ(r.attempts.size(), 2u);
    EXPECT_EQ(r.attempts[0].start, r.attempts[1].start);
}

TEST(Csma, SameSlotProbabilityForWindow31)
{
    // Enumeration: both draw uniformly from {0..31}; same start iff equal draws.
    int equal = 0;
    for (int a = 0; a <= 31; ++a) {
        for (int b = 0; b <= 31; ++b) {
            equal += a == b;
        }
    }
    const double exact = equal / 1024.0;
    EXPECT_DOUBLE_EQ(exact, 1.0 / 32.0);

    const auto links = uniform_links(2, -60);
    const auto mac = short_period_mac(31);
    const std::vector<Slot> offsets{0, 0};
    const int trials = 20000;
    int same = 0;
    for (int t = 0; t < trials; ++t) {
        Stream backoff(derive_seed(6, static_cast<std::uint64_t>(t)));
        const auto r = run_csma(links, offsets, mac, mac.bsm_period, backoff);
        ASSERT_EQ(r.attempts.size(), 2u);
        same += r.attempts[0].start == r.attempts[1].start;
    }
    EXPECT_NEAR(same / double(trials), exact, 4 * std::sqrt(exact * (1 - exact) / trials));
}

TEST(Csma, LaterNodeDefersToEarlierTransmission)
{
    const auto links = uniform_links(2, -60);
    const auto mac = short_period_mac(31);
    const std::vector<Slot> offsets{0, 0};
    Stream backoff(7);
    const auto r = run_csma(links, offsets, mac, mac.bsm_period, backoff);
    ASSERT_EQ(r.attempts.size(), 2u);
    if (r.attempts[0].start != r.attempts[1].start) {
        // The second waits for the first to end, then a full AIFS.
        EXPECT_GE(r.attempts[1].start, r.attempts[0].end() + mac.aifs);
    }
}

TEST(Csma, HiddenNodesDoNotDefer)
{
    const auto links = uniform_links(2, -120); // below the sensing threshold
    const auto mac = short_period_mac(0);
    const std::vector<Slot> offsets{0, 10};
    Stream backoff(8);
    const auto r = run_csma(links, offsets, mac, mac.bsm_period, backoff);
    ASSERT_EQ(r.attempts.size(), 2u);
    EXPECT_EQ(r.attempts[0].start, mac.aifs);
    EXPECT_EQ(r.attempts[1].start, 10 + mac.aifs);
}

TEST(Csma, ExpiredFramesAreDropped)
{
    // 30 mutually-sensing nodes cannot all fit 30 * 38 slots into a 200-slot period.
    const auto links = uniform_links(30, -60);
    const auto mac = short_period_mac(31);
    Stream offset_rng(9);
    const auto offsets = schedule_bsm_offsets(30, mac.bsm_period, offset_rng);
    Stream backoff(10);
    const auto r = run_csma(links, offsets, mac, 10 * mac.bsm_period, backoff);
    EXPECT_GT(r.expired, 0u);
    EXPECT_EQ(r.attempts.size() + r.expired, r.generated);
}

class CsmaInvariants : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CsmaInvariants, HoldOnRandomTopologies)
{
    Stream topo(GetParam());
    const std::size_t n = 25;
    LinkMatrix links(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double p = topo.uniform(-110, -60);
            links(a, b) = {a, b, 0, 0, true, false, 0, 0, p, 0};
            links(b, a) = {b, a, 0, 0, true, false, 0, 0, p, 0};
        }
    }
    links.refresh_linear();
    MacConfig mac = short_period_mac(15);
    mac.bsm_period = 400;
    Stream offset_rng(GetParam() + 1);
    const auto offsets = schedule_bsm_offsets(n, mac.bsm_period, offset_rng);
    Stream backoff(GetParam() + 2);
    const auto r = run_csma(links, offsets, mac, 20 * mac.bsm_period, backoff);

    EXPECT_LE(r.attempts.size(), r.generated);
    const double cs_mw = dbm_to_mw(mac.cs_threshold_dbm);
    for (std::size_t i = 0; i < r.attempts.size(); ++i) {
        const auto& a = r.attempts[i];
        double sensed = 0.0;
        for (std::size_t j = 0; j < r.attempts.size(); ++j) {
            const auto& o = r.attempts[j];
            if (j != i && o.tx_id != a.tx_id && o.active_at(a.start - 1)) {
                sensed += links.rx_mw(o.tx_id, a.tx_id);
            }
            if (j != i && o.tx_id == a.tx_id) {
                ASSERT_FALSE(o.overlaps(a)) << "node " << a.tx_id << " overlaps itself";
            }
        }
        ASSERT_LT(sensed, cs_mw) << "attempt " << i << " started on a busy channel";
    }
    for (auto b : r.backoff_draws) {
        ASSERT_GE(b, 0);
        ASSERT_LE(b, mac.cw);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CsmaInvariants, ::testing::Values(1u, 2u, 3u, 4u, 5u));

TEST(Csma, BackoffDrawsUniform)
{
    Stream rng(11);
    std::vector<std::size_t> bins(32);
    for (int i = 0; i < 100000; ++i) {
        ++bins[static_cast<std::size_t>(rng.uniform_int(0, 31))];
    }
    EXPECT_LT(testing::chi_square_uniform(bins), 44.985);

    // And the draws the MAC actually made.
    const auto links = uniform_links(40, -60);
    const auto mac = short_period_mac(31);
    std::vector<std::size_t> mac_bins(32);
    std::size_t draws = 0;
    for (std::uint64_t s = 0; draws < 100000; ++s) {
        Stream offset_rng(s);
        const auto offsets = schedule_bsm_offsets(40, mac.bsm_period, offset_rng);
        Stream backoff(s + 1000);
        for (auto b : run_csma(links, offsets, mac, 20 * mac.bsm_period, backoff).backoff_draws) {
            ++mac_bins[static_cast<std::size_t>(b)];
            ++draws;
        }
    }
    EXPECT_LT(testing::chi_square_uniform(mac_bins), 44.985);
}

TEST(Csma, LargerWindowCollidesLessUnderSaturation)
{
    const auto links = uniform_links(50, -60);
    double frac31 = 0.0, frac127 = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Stream offset_rng(s);
        MacConfig mac = short_period_mac(31);
        mac.bsm_period = 400;
        const auto offsets = schedule_bsm_offsets(50, mac.bsm_period, offset_rng);
        Stream b31(derive_seed(s, 31));
        frac31 += collision_fraction(run_csma(links, offsets, mac, 4000, b31).attempts);
        mac.cw = 127;
        Stream b127(derive_seed(s, 127));
        frac127 += collision_fraction(run_csma(links, offsets, mac, 4000, b127).attempts);
    }
    EXPECT_LT(frac127, frac31);
}

TEST(Csma, RejectsBadInputs)
{
    MacConfig mac;
    Stream rng(1);
    const auto links = uniform_links(2, -60);
    EXPECT_THROW(run_csma(links, std::vector<Slot>{0}, mac, mac.bsm_period, rng), InvalidInput);
    EXPECT_THROW(run_csma(links, std::vector<Slot>{0, 0}, mac, mac.bsm_period - 1, rng),
                 InvalidParameter);
    auto broken = links;
    broken(0, 1).rx_id = 0;
    EXPECT_THROW(run_csma(broken, std::vector<Slot>{0, 0}, mac, mac.bsm_period, rng), InvalidInput);
    mac.cw = -1;
    EXPECT_THROW(run_csma(links, std::vector<Slot>{0, 0}, mac, 10000, rng), InvalidParameter);
}

TEST(Receptions, LoneAttemptSinr)
{
    const auto links = uniform_links(2, -65.3);
    const std::vector<TxAttempt> attempts{{0, 100, 34}};
    const auto out = evaluate_receptions(attempts, links, RadioConfig{});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].rx_id, 1u);
    EXPECT_NEAR(out[0].sinr_min, 29.7, 1e-3); // -65.3 - (-95), noise dominates nothing else
    EXPECT_TRUE(out[0].decoded);
}

TEST(Receptions, EqualPowerCollisionFails)
{
    const auto links = uniform_links(3, -60);
    const std::vector<TxAttempt> attempts{{0, 100, 34}, {1, 100, 34}};
    const RadioConfig radio;
    const auto out = evaluate_receptions(attempts, links, radio);
    // Equal signal and interference: SINR = -10 log10(1 + N/S).
    const double noise = noise_floor_dbm(radio.bandwidth_mhz, radio.noise_figure_db);
    const double expected = -10.0 * std::log10(1.0 + std::pow(10.0, (noise + 60.0) / 10.0));
    for (const auto& o : out) {
        if (o.rx_id == 2) {
            EXPECT_NEAR(o.sinr_min, expected, 1e-12);
            EXPECT_FALSE(o.decoded);
        }
    }
}

TEST(Receptions, PartialOverlapUsesWorstSlot)
{
    const auto links = uniform_links(3, -60);
    const std::vector<TxAttempt> attempts{{0, 100, 34}, {1, 133, 34}};
    const auto out = evaluate_receptions(attempts, links, RadioConfig{});
    for (const auto& o : out) {
        if (o.rx_id == 2) {
            EXPECT_FALSE(o.decoded); // a single overlapping slot is enough
        }
    }
    const std::vector<TxAttempt> disjoint{{0, 100, 34}, {1, 134, 34}};
    for (const auto& o : evaluate_receptions(disjoint, links, RadioConfig{})) {
        EXPECT_TRUE(o.decoded);
    }
}

TEST(Receptions, HalfDuplexReceiverDecodesNothing)
{
    const auto links = uniform_links(3, -50);
    LinkMatrix m = links;
    // Weak interferer would not spoil SINR, but its node is busy transmitting.
    m(1, 0).rx_power = -150;
    m(1, 2).rx_power = -150;
    m.refresh_linear();
    const std::vector<TxAttempt> attempts{{0, 100, 34}, {1, 120, 34}};
    const auto out = evaluate_receptions(attempts, m, RadioConfig{});
    for (const auto& o : out) {
        if (o.tx_id == 0 && o.rx_id == 1) {
            EXPECT_GT(o.sinr_min, 10.0);
            EXPECT_FALSE(o.decoded);
        }
        if (o.tx_id == 0 && o.rx_id == 2) {
            EXPECT_TRUE(o.decoded);
        }
        if (o.decoded) {
            EXPECT_GE(o.sinr_min, RadioConfig{}.sinr_threshold_db);
        }
    }
}

} // namespace
} // namespace v2x
