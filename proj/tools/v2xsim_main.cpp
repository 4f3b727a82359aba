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

// Command-line front end.
//
//   v2xsim run      --config <path> [--seed N] [--snapshots N] --out <dir> --format csv|json
//   v2xsim sweep    --config <path> --cw 31,127 --scenario suburban-cross,urban-grid --out <dir>
//   v2xsim plotdata --in <dir> --out <file>
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "v2xsim/config.hpp"
#include "v2xsim/engine.hpp"
#include "v2xsim/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void write_file(const fs::path& path, const std::string& bytes)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << bytes;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

v2x::ReportFormat parse_format(const std::string& s)
{
    return s == "json" ? v2x::ReportFormat::json : v2x::ReportFormat::csv;
}

std::string extension(v2x::ReportFormat f) { return f == v2x::ReportFormat::json ? ".json" : ".csv"; }

/// (scenario, cw, density) cells of a sweep, in command-line order.
struct SweepCell {
    v2x::SceneKind kind;
    std::int64_t cw;
    double density;
};

std::vector<SweepCell> sweep_cells(const std::vector<std::string>& scenarios,
                                   const std::vector<std::int64_t>& cws,
                                   const std::vector<double>& densities)
{
    std::vector<SweepCell> cells;
    std::set<std::tuple<int, std::int64_t, double>> seen;
    for (const auto& name : scenarios) {
        const auto kind = v2x::scene_kind_from_string(name);
        if (!kind) {
            throw v2x::ConfigError("unknown scenario '" + name + "'", "scenario");
        }
        for (auto cw : cws) {
            if (cw < 0) {
                throw v2x::ConfigError("value " + std::to_string(cw) + " violates >= 0", "cw");
            }
            for (auto d : densities) {
                if (!(d >= 0.0)) {
                    throw v2x::ConfigError("density must be >= 0", "density");
                }
                if (seen.insert({static_cast<int>(*kind), cw, d}).second) {
                    cells.push_back({*kind, cw, d});
                }
            }
        }
    }
    if (cells.empty()) {
        throw v2x::ConfigError("sweep has no cells");
    }
    return cells;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo V2X broadcast simulator over stochastic road geometries"};
    app.require_subcommand(1);

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--workers", workers, "Worker threads (does not change results)")
        ->check(CLI::PositiveNumber);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";

    auto* run = app.add_subcommand("run", "Run one campaign");
    std::uint64_t seed = 0;
    std::size_t snapshots = 0;
    run->add_option("--config", config_path, "Campaign config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Override [campaign] seed");
    auto* snap_opt = run->add_option("--snapshots", snapshots, "Override [campaign] snapshots")
                         ->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "Output directory")->required();
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("sweep", "Run the cross product of scenarios, CWs and densities");
    std::vector<std::int64_t> cws;
    std::vector<std::string> scenarios;
    std::vector<double> densities;
    sweep->add_option("--config", config_path, "Base campaign config file")->required();
    sweep->add_option("--cw", cws, "Contention windows")->delimiter(',')->required();
    sweep->add_option("--scenario", scenarios, "Scenario kinds")->delimiter(',')->required();
    sweep->add_option("--density", densities, "Densities (default: from config)")->delimiter(',');
    sweep->add_option("--out", out_path, "Output directory")->required();
    sweep->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    auto* plot = app.add_subcommand("plotdata", "Turn sweep reports into grouped-bar data");
    std::string in_dir;
    plot->add_option("--in", in_dir, "Directory holding report CSV files")->required();
    plot->add_option("--out", out_path, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    // Configuration stage.
    v2x::CampaignConfig base;
    std::vector<SweepCell> cells;
    try {
        if (*run || *sweep) {
            base = v2x::parse_config(config_path);
        }
        if (*run) {
            if (*seed_opt) {
                base.base_seed = seed;
            }
            if (*snap_opt) {
                base.snapshots = snapshots;
            }
        }
        if (*sweep) {
            if (densities.empty()) {
                densities.push_back(base.scenario.density);
            }
            cells = sweep_cells(scenarios, cws, densities);
        }
    } catch (const v2x::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    // Execution stage.
    try {
        const auto fmt = parse_format(format);
        if (*run) {
            const auto report = v2x::run_campaign(base, workers);
            const fs::path dir(out_path);
            write_file(dir / ("report" + extension(fmt)), v2x::emit_report({&report, 1}, fmt));
            write_file(dir / "effective_config.ini", v2x::serialize_config(base));
            std::cout << v2x::emit_report({&report, 1}, v2x::ReportFormat::csv);
        } else if (*sweep) {
            std::vector<v2x::PdrReport> reports;
            for (const auto& cell : cells) {
                auto cfg = base;
                cfg.scenario.kind = cell.kind;
                cfg.mac.cw = cell.cw;
                cfg.scenario.density = cell.density;
                cfg.validate();
                std::cerr << "running " << v2x::to_string(cell.kind) << " cw=" << cell.cw
                          << " density=" << cell.density << '\n';
                reports.push_back(v2x::run_campaign(cfg, workers));
            }
            const fs::path dir(out_path);
            write_file(dir / "sweep.csv", v2x::emit_report(reports, v2x::ReportFormat::csv));
            if (fmt == v2x::ReportFormat::json) {
                write_file(dir / "sweep.json", v2x::emit_report(reports, fmt));
            }
            write_file(dir / "effective_config.ini", v2x::serialize_config(base));
            std::cout << v2x::emit_report(reports, v2x::ReportFormat::csv);
        } else if (*plot) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(in_dir)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                    files.push_back(entry.path());
                }
            }
            std::sort(files.begin(), files.end());
            std::vector<v2x::PdrReport> reports;
            for (const auto& f : files) {
                const auto text = read_file(f);
                if (!text.starts_with(v2x::kReportCsvHeader)) {
                    continue;
                }
                auto rows = v2x::parse_report_csv(text);
                reports.insert(reports.end(), rows.begin(), rows.end());
            }
            if (reports.empty()) {
                throw std::runtime_error("no report CSV files found in '" + in_dir + "'");
            }
            write_file(out_path, v2x::emit_plot_data(reports));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
