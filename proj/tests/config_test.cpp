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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "v2xsim/config.hpp"

namespace v2x {
namespace {

TEST(ParseConfig, MinimalFileTakesDefaults)
{
    const auto cfg = parse_config_text("[scenario]\nkind = urban-grid\n[campaign]\nseed = 42\n");
    EXPECT_EQ(cfg.scenario.kind, SceneKind::urban_grid);
    EXPECT_EQ(cfg.base_seed, 42u);
    EXPECT_EQ(cfg.mac.cw, 31);
    CampaignConfig defaults;
    defaults.scenario.kind = SceneKind::urban_grid;
    defaults.base_seed = 42;
    EXPECT_EQ(cfg, defaults);
}

TEST(ParseConfig, AllSectionsAndComments)
{
    const auto cfg = parse_config_text(R"(
# sweep cell
[scenario]
kind = suburban-cloverleaf   ; inline comment
loop_radius = 60
density = 50.5
[radio]
fc_ghz = 5.9
shadowing = false
[mac]
cw = 127
cs_threshold_dbm = -82
[campaign]
snapshots = 12
fixed_n = 9
)");
    EXPECT_EQ(cfg.scenario.kind, SceneKind::suburban_cloverleaf);
    EXPECT_EQ(cfg.scenario.loop_radius, 60.0);
    EXPECT_EQ(cfg.scenario.density, 50.5);
    EXPECT_FALSE(cfg.radio.shadowing);
    EXPECT_EQ(cfg.mac.cw, 127);
    EXPECT_EQ(cfg.mac.cs_threshold_dbm, -82.0);
    EXPECT_EQ(cfg.snapshots, 12u);
    ASSERT_TRUE(cfg.fixed_n);
    EXPECT_EQ(*cfg.fixed_n, 9u);
}

TEST(ParseConfig, NegativeWindowNamesKeyAndLine)
{
    try {
        parse_config_text("[scenario]\nkind = suburban-cross\n[mac]\ncw = -1\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "cw");
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("cw"), std::string::npos);
    }
}

TEST(ParseConfig, Errors)
{
    auto key_of = [](const char* text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return e.key() + "@" + std::to_string(e.line());
        }
        return std::string("no error");
    };
    EXPECT_EQ(key_of("[mac]\nwindow = 3\n"), "window@2");
    EXPECT_EQ(key_of("[mac]\ncw = 3\ncw = 4\n"), "cw@3");
    EXPECT_EQ(key_of("cw = 3\n"), "cw@1");
    EXPECT_EQ(key_of("[physics]\n"), "@1");
    EXPECT_EQ(key_of("[radio]\nfc_ghz = 60\n"), "fc_ghz@2");
    EXPECT_EQ(key_of("[radio]\nfc_ghz = fast\n"), "fc_ghz@2");
    EXPECT_EQ(key_of("[radio]\nshadowing = maybe\n"), "shadowing@2");
    EXPECT_EQ(key_of("[scenario]\nkind = highway\n"), "kind@2");
    EXPECT_EQ(key_of("[campaign]\nsnapshots = 0\n"), "snapshots@2");
    EXPECT_EQ(key_of("[campaign]\nhorizon = 100\n"), "horizon@2");
    EXPECT_EQ(key_of("[mac]\nbsm_airtime = 8000\n"), "bsm_period@2");
    EXPECT_EQ(key_of("[scenario]\nkind = suburban-cloverleaf\nloop_radius = 300\n"), "scenario@0");
    EXPECT_EQ(key_of("[scenario\n"), "@1");
    EXPECT_EQ(key_of("[scenario]\njunk\n"), "@2");
}

TEST(ParseConfig, MissingFile)
{
    EXPECT_THROW(parse_config("/nonexistent/v2xsim.ini"), ConfigError);
}

TEST(ParseConfig, ReadsFromDisk)
{
    const auto path = std::filesystem::temp_directory_path() / "v2xsim_config_test.ini";
    {
        std::ofstream out(path);
        out << "[scenario]\nkind = urban-grid\n[campaign]\nseed = 3\n";
    }
    EXPECT_EQ(parse_config(path.string()).base_seed, 3u);
    std::filesystem::remove(path);
}

TEST(SerializeConfig, RoundTrips)
{
    Stream rng(12);
    for (int i = 0; i < 50; ++i) {
        CampaignConfig c;
        c.scenario.kind = static_cast<SceneKind>(rng.uniform_int(0, 2));
        c.scenario.arm_length = rng.uniform(400, 900);
        c.scenario.loop_radius = rng.uniform(10, 90);
        c.scenario.density = rng.uniform(0, 300);
        c.scenario.blocks_per_side = static_cast<std::size_t>(rng.uniform_int(1, 8));
        c.radio.tx_power_dbm = rng.uniform(0, 30);
        c.radio.fc_ghz = rng.uniform(0.5, 30);
        c.radio.shadowing = rng.bernoulli(0.5);
        c.mac.cw = rng.uniform_int(0, 1023);
        c.mac.cs_threshold_dbm = rng.uniform(-95, -60);
        c.base_seed = rng.next_u64();
        c.awareness_range = rng.uniform(50, 1000);
        if (rng.bernoulli(0.5)) {
            c.fixed_n = static_cast<std::size_t>(rng.uniform_int(0, 500));
        }
        const auto text = serialize_config(c);
        EXPECT_EQ(parse_config_text(text), c) << text;
        EXPECT_EQ(serialize_config(parse_config_text(text)), text);
    }
}

} // namespace
} // namespace v2x
