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

// Report and plot-data emission (CSV / JSON) and the CSV reader used by the
// plotdata verb.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "v2xsim/config.hpp"
#include "v2xsim/errors.hpp"
#include "v2xsim/metrics.hpp"

namespace v2x {

enum class ReportFormat { csv, json };

inline constexpr std::string_view kReportCsvHeader =
    "scenario,cw,density,snapshots,pdr_raw_mean,pdr_raw_ci95,blockage_rate,"
    "pdr_discounted_mean,pdr_discounted_ci95,base_seed,flags";

inline constexpr std::string_view kPlotCsvHeader = "cw,density,bar,scenario,pdr,ci95";

/// Rates are printed with six decimals everywhere.
inline std::string format_rate(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

namespace detail {

inline double rate_as_printed(double v) { return std::stod(format_rate(v)); }

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                       : next - pos));
        if (next == std::string_view::npos) {
            return out;
        }
        pos = next + 1;
    }
}

} // namespace detail

inline std::string emit_report(std::span<const PdrReport> reports, ReportFormat format)
{
    if (reports.empty()) {
        throw InvalidParameter("emit_report: no reports");
    }
    if (format == ReportFormat::csv) {
        std::string out(kReportCsvHeader);
        out += '\n';
        for (const auto& r : reports) {
            out += r.scenario + ',' + std::to_string(r.cw) + ',' + detail::format_double(r.density) +
                   ',' + std::to_string(r.snapshots) + ',' + format_rate(r.pdr_raw.mean) + ',' +
                   format_rate(r.pdr_raw.ci95) + ',' + format_rate(r.blockage_rate) + ',' +
                   format_rate(r.pdr_discounted.mean) + ',' + format_rate(r.pdr_discounted.ci95) +
                   ',' + std::to_string(r.base_seed) + ',' + r.flags + '\n';
        }
        return out;
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["scenario"] = r.scenario;
        j["cw"] = r.cw;
        j["density"] = r.density;
        j["snapshots"] = r.snapshots;
        j["pdr_raw_mean"] = detail::rate_as_printed(r.pdr_raw.mean);
        j["pdr_raw_ci95"] = detail::rate_as_printed(r.pdr_raw.ci95);
        j["blockage_rate"] = detail::rate_as_printed(r.blockage_rate);
        j["pdr_discounted_mean"] = detail::rate_as_printed(r.pdr_discounted.mean);
        j["pdr_discounted_ci95"] = detail::rate_as_printed(r.pdr_discounted.ci95);
        j["base_seed"] = r.base_seed;
        j["flags"] = r.flags;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

/// Reads rows written by emit_report(csv). Values come back at printed precision.
inline std::vector<PdrReport> parse_report_csv(std::string_view text)
{
    std::vector<PdrReport> out;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kReportCsvHeader) {
        throw InvalidInput("report CSV: unexpected header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = detail::split(line, ',');
        if (f.size() != 11) {
            throw InvalidInput("report CSV line " + std::to_string(line_no) + ": expected 11 fields");
        }
        try {
            PdrReport r;
            r.scenario = f[0];
            r.cw = std::stoll(f[1]);
            r.density = std::stod(f[2]);
            r.snapshots = std::stoull(f[3]);
            r.pdr_raw = {std::stod(f[4]), std::stod(f[5])};
            r.blockage_rate = std::stod(f[6]);
            r.pdr_discounted = {std::stod(f[7]), std::stod(f[8])};
            r.base_seed = std::stoull(f[9]);
            r.flags = f[10];
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InvalidInput("report CSV line " + std::to_string(line_no) + ": bad number");
        }
    }
    return out;
}

/// Grouped-bar data: one group per (cw, density), three bars per group
/// (suburban raw, urban raw, urban discounted). The suburban discounted bar
/// equals the raw one and is not repeated.
inline std::string emit_plot_data(std::span<const PdrReport> reports)
{
    if (reports.empty()) {
        throw InvalidParameter("emit_plot_data: no reports");
    }
    using Group = std::pair<std::int64_t, double>;
    std::set<Group> groups;
    std::map<Group, const PdrReport*> suburban;
    std::map<Group, const PdrReport*> urban;
    for (const auto& r : reports) {
        const Group g{r.cw, r.density};
        groups.insert(g);
        if (r.scenario == "urban-grid") {
            urban.try_emplace(g, &r);
        } else if (r.scenario.starts_with("suburban-")) {
            // Prefer the plain cross when both suburban layouts are present.
            auto [it, inserted] = suburban.try_emplace(g, &r);
            if (!inserted && r.scenario == "suburban-cross") {
                it->second = &r;
            }
        }
    }

    std::vector<std::string> missing;
    for (const auto& g : groups) {
        const auto cell = "/cw=" + std::to_string(g.first) + "/density=" + detail::format_double(g.second);
        if (!suburban.contains(g)) {
            missing.push_back("suburban-cross" + cell);
        }
        if (!urban.contains(g)) {
            missing.push_back("urban-grid" + cell);
        }
    }
    if (!missing.empty()) {
        std::string msg = "incomplete sweep, missing cells:";
        for (const auto& m : missing) {
            msg += " " + m;
        }
        throw IncompleteSweep(msg);
    }

    std::string out(kPlotCsvHeader);
    out += '\n';
    for (const auto& g : groups) {
        const auto prefix = std::to_string(g.first) + ',' + detail::format_double(g.second) + ',';
        const auto* s = suburban.at(g);
        const auto* u = urban.at(g);
        out += prefix + "suburban_raw," + s->scenario + ',' + format_rate(s->pdr_raw.mean) + ',' +
               format_rate(s->pdr_raw.ci95) + '\n';
        out += prefix + "urban_raw," + u->scenario + ',' + format_rate(u->pdr_raw.mean) + ',' +
               format_rate(u->pdr_raw.ci95) + '\n';
        out += prefix + "urban_discounted," + u->scenario + ',' + format_rate(u->pdr_discounted.mean) +
               ',' + format_rate(u->pdr_discounted.ci95) + '\n';
    }
    return out;
}

} // namespace v2x
