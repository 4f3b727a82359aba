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

#pragma once

// Campaign configuration files.
//
// A flat INI-style text document with four sections:
//
//   [scenario]  kind, arm_length, road_width, loop_radius, blocks_per_side,
//               block_size, street_width, density, speed
//   [radio]     fc_ghz, tx_power_dbm, bandwidth_mhz, noise_figure_db,
//               sinr_threshold_db, antenna_height, avg_building_height,
//               avg_street_width, shadowing
//   [mac]       cw, slot_us, aifs, bsm_period, bsm_airtime, cs_threshold_dbm
//   [campaign]  snapshots, horizon, awareness_range, seed, fixed_n
//
// Lines are `key = value`; '#' and ';' start comments. Unknown sections and
// keys are errors, missing keys keep the defaults in CampaignConfig.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "v2xsim/engine.hpp"
#include "v2xsim/errors.hpp"

namespace v2x {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string message, std::string key = {}, std::size_t line = 0)
        : std::runtime_error(format(message, key, line)), key_(std::move(key)), line_(line)
    {
    }

    const std::string& key() const { return key_; }
    std::size_t line() const { return line_; }

private:
    static std::string format(const std::string& message, const std::string& key, std::size_t line)
    {
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line) + ": ";
        }
        if (!key.empty()) {
            out += "'" + key + "': ";
        }
        return out + message;
    }

    std::string key_;
    std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, const std::string& key, std::size_t line)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("cannot parse '" + std::string(text) + "' as a number", key, line);
    }
    return value;
}

inline bool parse_bool(std::string_view text, const std::string& key, std::size_t line)
{
    if (text == "true" || text == "1" || text == "on" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "off" || text == "no") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + std::string(text) + "'", key, line);
}

inline std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Key binding: parses the text into the config and checks the per-key constraint.
using Setter = std::function<void(CampaignConfig&, std::string_view, const std::string&, std::size_t)>;

template <typename T, typename Member, typename Check>
Setter bind_number(Member member, Check check, const char* constraint)
{
    return [member, check, constraint](CampaignConfig& cfg, std::string_view text,
                                       const std::string& key, std::size_t line) {
        const T v = parse_number<T>(text, key, line);
        if (!check(v)) {
            throw ConfigError(std::string("value ") + std::string(text) + " violates " + constraint,
                              key, line);
        }
        member(cfg) = v;
    };
}

inline const std::map<std::string, std::map<std::string, Setter>>& config_schema()
{
    static const auto schema = [] {
        std::map<std::string, std::map<std::string, Setter>> s;
        const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
        const auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
        const auto finite = [](double v) { return std::isfinite(v); };

        auto& sc = s["scenario"];
        sc["kind"] = [](CampaignConfig& c, std::string_view t, const std::string& k, std::size_t l) {
            const auto kind = scene_kind_from_string(t);
            if (!kind) {
                throw ConfigError("unknown scenario kind '" + std::string(t) +
                                      "' (expected suburban-cross, suburban-cloverleaf or urban-grid)",
                                  k, l);
            }
            c.scenario.kind = *kind;
        };
        sc["arm_length"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.arm_length; }, positive, "> 0");
        sc["road_width"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.road_width; }, positive, "> 0");
        sc["loop_radius"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.loop_radius; }, positive, "> 0");
        sc["blocks_per_side"] = bind_number<std::size_t>([](CampaignConfig& c) -> std::size_t& { return c.scenario.blocks_per_side; }, [](std::size_t v) { return v >= 1; }, ">= 1");
        sc["block_size"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.block_size; }, positive, "> 0");
        sc["street_width"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.street_width; }, positive, "> 0");
        sc["density"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.density; }, non_negative, ">= 0");
        sc["speed"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.scenario.speed; }, non_negative, ">= 0");

        auto& ra = s["radio"];
        ra["fc_ghz"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.fc_ghz; }, [](double v) { return v >= 0.5 && v <= 30.0; }, "[0.5, 30]");
        ra["tx_power_dbm"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.tx_power_dbm; }, finite, "finite");
        ra["bandwidth_mhz"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.bandwidth_mhz; }, positive, "> 0");
        ra["noise_figure_db"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.noise_figure_db; }, finite, "finite");
        ra["sinr_threshold_db"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.sinr_threshold_db; }, finite, "finite");
        ra["antenna_height"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.antenna_height; }, positive, "> 0");
        ra["avg_building_height"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.avg_building_height; }, [](double v) { return v >= 5.0 && v <= 50.0; }, "[5, 50]");
        ra["avg_street_width"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.radio.avg_street_width; }, [](double v) { return v >= 5.0 && v <= 50.0; }, "[5, 50]");
        ra["shadowing"] = [](CampaignConfig& c, std::string_view t, const std::string& k, std::size_t l) {
            c.radio.shadowing = parse_bool(t, k, l);
        };

        auto& mac = s["mac"];
        mac["cw"] = bind_number<std::int64_t>([](CampaignConfig& c) -> std::int64_t& { return c.mac.cw; }, [](std::int64_t v) { return v >= 0; }, ">= 0");
        mac["slot_us"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.mac.slot_us; }, positive, "> 0");
        mac["aifs"] = bind_number<std::int64_t>([](CampaignConfig& c) -> std::int64_t& { return c.mac.aifs; }, [](std::int64_t v) { return v >= 0; }, ">= 0");
        mac["bsm_period"] = bind_number<std::int64_t>([](CampaignConfig& c) -> std::int64_t& { return c.mac.bsm_period; }, [](std::int64_t v) { return v >= 2; }, ">= 2");
        mac["bsm_airtime"] = bind_number<std::int64_t>([](CampaignConfig& c) -> std::int64_t& { return c.mac.bsm_airtime; }, [](std::int64_t v) { return v >= 1; }, ">= 1");
        mac["cs_threshold_dbm"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.mac.cs_threshold_dbm; }, finite, "finite");

        auto& ca = s["campaign"];
        ca["snapshots"] = bind_number<std::size_t>([](CampaignConfig& c) -> std::size_t& { return c.snapshots; }, [](std::size_t v) { return v >= 1; }, ">= 1");
        ca["horizon"] = bind_number<std::int64_t>([](CampaignConfig& c) -> std::int64_t& { return c.horizon; }, [](std::int64_t v) { return v >= 1; }, ">= 1");
        ca["awareness_range"] = bind_number<double>([](CampaignConfig& c) -> double& { return c.awareness_range; }, positive, "> 0");
        ca["seed"] = bind_number<std::uint64_t>([](CampaignConfig& c) -> std::uint64_t& { return c.base_seed; }, [](std::uint64_t) { return true; }, "");
        ca["fixed_n"] = [](CampaignConfig& c, std::string_view t, const std::string& k, std::size_t l) {
            c.fixed_n = parse_number<std::size_t>(t, k, l);
        };
        return s;
    }();
    return schema;
}

} // namespace detail

inline CampaignConfig parse_config_text(std::string_view text)
{
    CampaignConfig cfg;
    const auto& schema = detail::config_schema();
    std::map<std::string, std::size_t> seen; // "section.key" -> line
    const std::map<std::string, detail::Setter>* section = nullptr;
    std::string section_name;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) {
            line = line.substr(0, c);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header", {}, line_no);
            }
            section_name = std::string(detail::trim(line.substr(1, line.size() - 2)));
            const auto it = schema.find(section_name);
            if (it == schema.end()) {
                throw ConfigError("unknown section [" + section_name + "]", {}, line_no);
            }
            section = &it->second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value'", {}, line_no);
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const auto value = detail::trim(line.substr(eq + 1));
        if (section == nullptr) {
            throw ConfigError("key outside of any section", key, line_no);
        }
        const auto setter = section->find(key);
        if (setter == section->end()) {
            throw ConfigError("unknown key in [" + section_name + "]", key, line_no);
        }
        const auto full = section_name + "." + key;
        if (const auto dup = seen.find(full); dup != seen.end()) {
            throw ConfigError("duplicate key (first set on line " + std::to_string(dup->second) + ")",
                              key, line_no);
        }
        seen[full] = line_no;
        if (value.empty()) {
            throw ConfigError("missing value", key, line_no);
        }
        setter->second(cfg, value, key, line_no);
    }

    // Cross-key constraints, reported against the later of the keys involved.
    auto line_of = [&](const char* full) -> std::size_t {
        const auto it = seen.find(full);
        return it == seen.end() ? 0 : it->second;
    };
    if (!(cfg.mac.bsm_period > cfg.mac.bsm_airtime)) {
        throw ConfigError("bsm_period must exceed bsm_airtime", "bsm_period",
                          std::max(line_of("mac.bsm_period"), line_of("mac.bsm_airtime")));
    }
    if (cfg.horizon < cfg.mac.bsm_period) {
        throw ConfigError("horizon must be >= bsm_period", "horizon",
                          std::max(line_of("campaign.horizon"), line_of("mac.bsm_period")));
    }
    try {
        cfg.validate();
        build_scene(cfg.scenario);
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what(), "scenario");
    }
    return cfg;
}

inline CampaignConfig parse_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what(), e.key(), e.line());
    }
}

/// Writes every effective value; parse_config_text(serialize_config(c)) == c.
inline std::string serialize_config(const CampaignConfig& c)
{
    using detail::format_double;
    std::ostringstream o;
    o << "[scenario]\n"
      << "kind = " << to_string(c.scenario.kind) << '\n'
      << "arm_length = " << format_double(c.scenario.arm_length) << '\n'
      << "road_width = " << format_double(c.scenario.road_width) << '\n'
      << "loop_radius = " << format_double(c.scenario.loop_radius) << '\n'
      << "blocks_per_side = " << c.scenario.blocks_per_side << '\n'
      << "block_size = " << format_double(c.scenario.block_size) << '\n'
      << "street_width = " << format_double(c.scenario.street_width) << '\n'
      << "density = " << format_double(c.scenario.density) << '\n'
      << "speed = " << format_double(c.scenario.speed) << '\n'
      << "\n[radio]\n"
      << "fc_ghz = " << format_double(c.radio.fc_ghz) << '\n'
      << "tx_power_dbm = " << format_double(c.radio.tx_power_dbm) << '\n'
      << "bandwidth_mhz = " << format_double(c.radio.bandwidth_mhz) << '\n'
      << "noise_figure_db = " << format_double(c.radio.noise_figure_db) << '\n'
      << "sinr_threshold_db = " << format_double(c.radio.sinr_threshold_db) << '\n'
      << "antenna_height = " << format_double(c.radio.antenna_height) << '\n'
      << "avg_building_height = " << format_double(c.radio.avg_building_height) << '\n'
      << "avg_street_width = " << format_double(c.radio.avg_street_width) << '\n'
      << "shadowing = " << (c.radio.shadowing ? "true" : "false") << '\n'
      << "\n[mac]\n"
      << "cw = " << c.mac.cw << '\n'
      << "slot_us = " << format_double(c.mac.slot_us) << '\n'
      << "aifs = " << c.mac.aifs << '\n'
      << "bsm_period = " << c.mac.bsm_period << '\n'
      << "bsm_airtime = " << c.mac.bsm_airtime << '\n'
      << "cs_threshold_dbm = " << format_double(c.mac.cs_threshold_dbm) << '\n'
      << "\n[campaign]\n"
      << "snapshots = " << c.snapshots << '\n'
      << "horizon = " << c.horizon << '\n'
      << "awareness_range = " << format_double(c.awareness_range) << '\n'
      << "seed = " << c.base_seed << '\n';
    if (c.fixed_n) {
        o << "fixed_n = " << *c.fixed_n << '\n';
    }
    return o.str();
}

} // namespace v2x
