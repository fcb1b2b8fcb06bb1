// Copyright 2026 The finres Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command-line front end. Every computation is a batch job described by a
 * JobConfig; output is CSV (17 significant digits, '.' decimal, header row)
 * or JSON. run() is the whole program and is what tests drive.
 *
 * Exit codes: 0 success, 2 usage error, 1 internal failure.
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finres/finres.hpp"

namespace finres::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Grid {
    double min = -4.0;
    double max = 4.0;
    double step = 0.05;

    /// min, min+step, ... up to max (inclusive within 1e-9 step).
    [[nodiscard]] std::vector<double> points() const {
        std::vector<double> out;
        const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            double x = min + static_cast<double>(i) * step;
            if (std::abs(x) < 1e-9 * step) {
                x = 0.0;
            }
            out.push_back(x);
        }
        return out;
    }
};

inline Grid parse_grid(const std::string &spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw UsageError("grid must be min:max:step, got '" + spec + "'");
    }
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto &p = parts[i];
        const auto res = std::from_chars(p.data(), p.data() + p.size(), v[i]);
        if (res.ec != std::errc() || res.ptr != p.data() + p.size() || p.empty()) {
            throw UsageError("malformed number '" + p + "' in grid spec");
        }
    }
    return {v[0], v[1], v[2]};
}

struct JobConfig {
    std::string command;
    double resolution = 0.6;
    Grid grid;
    std::string channel = "++";
    double sweep_from = 0.2;
    double sweep_to = 5.0;
    std::size_t sweep_points = 50;
    std::string k_mode = "closed";
    std::string sample_mode = "single";
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string output = "-";
    std::string summary;

    void validate() const {
        if (!std::isfinite(resolution) || !(resolution > 0.0)) {
            throw UsageError("--resolution must be positive");
        }
        if (!(grid.min < grid.max) || !(grid.step > 0.0)) {
            throw UsageError("grid needs min < max and step > 0");
        }
        if (format != "csv" && format != "json") {
            throw UsageError("--format must be csv or json");
        }
        if (command == "pair-dist" && channel != "++" && channel != "+-" && channel != "-+" &&
            channel != "--") {
            throw UsageError("--channel must be one of ++, +-, -+, --");
        }
        if (command == "k-sweep") {
            if (k_mode != "closed" && k_mode != "quadrature") {
                throw UsageError("--mode must be closed or quadrature");
            }
            if (!(sweep_from > 0.0) || !(sweep_to >= sweep_from) || sweep_points < 1) {
                throw UsageError("k-sweep needs 0 < from <= to and points >= 1");
            }
        }
        if (command == "sample") {
            if (sample_mode != "single" && sample_mode != "pair") {
                throw UsageError("--mode must be single or pair");
            }
            if (samples < 2) {
                throw UsageError("--samples must be at least 2");
            }
        }
    }
};

inline nlohmann::json to_json(const JobConfig &c) {
    return {{"command", c.command},
            {"resolution", c.resolution},
            {"grid", {{"min", c.grid.min}, {"max", c.grid.max}, {"step", c.grid.step}}},
            {"channel", c.channel},
            {"sweep", {{"from", c.sweep_from}, {"to", c.sweep_to}, {"points", c.sweep_points},
                       {"mode", c.k_mode}}},
            {"sample_mode", c.sample_mode},
            {"samples", c.samples},
            {"seed", c.seed},
            {"format", c.format},
            {"output", c.output},
            {"summary", c.summary}};
}

inline JobConfig from_json(const nlohmann::json &j) {
    JobConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        c.resolution = j.at("resolution").get<double>();
        c.grid = {j.at("grid").at("min").get<double>(), j.at("grid").at("max").get<double>(),
                  j.at("grid").at("step").get<double>()};
        c.channel = j.at("channel").get<std::string>();
        c.sweep_from = j.at("sweep").at("from").get<double>();
        c.sweep_to = j.at("sweep").at("to").get<double>();
        c.sweep_points = j.at("sweep").at("points").get<std::size_t>();
        c.k_mode = j.at("sweep").at("mode").get<std::string>();
        c.sample_mode = j.at("sample_mode").get<std::string>();
        c.samples = j.at("samples").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.format = j.at("format").get<std::string>();
        c.output = j.at("output").get<std::string>();
        c.summary = j.at("summary").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
    return c;
}

/// Shortest-of-17-significant-digits formatting, locale independent.
inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const Table &t, std::ostream &os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_number(row[i]);
        }
        os << '\n';
    }
}

inline nlohmann::json table_json(const Table &t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[t.columns[i]] = row[i];
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_table(const Table &t, const std::string &format, std::ostream &os) {
    if (format == "json") {
        os << table_json(t).dump(2) << '\n';
    } else {
        write_csv(t, os);
    }
}

/// Records as CSV with columns s1ma,s1mb,sigma_a,sigma_b; b fields empty for single runs.
inline void write_records_csv(std::span<const monte_carlo::SampleRecord> records, std::ostream &os) {
    os << "s1ma,s1mb,sigma_a,sigma_b\n";
    for (const auto &r : records) {
        os << format_number(r.s1ma) << ',' << (r.s1mb ? format_number(*r.s1mb) : "") << ','
           << static_cast<int>(r.sigma_a) << ','
           << (r.sigma_b ? std::to_string(static_cast<int>(*r.sigma_b)) : "") << '\n';
    }
}

inline nlohmann::json records_json(std::span<const monte_carlo::SampleRecord> records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : records) {
        nlohmann::json o{{"s1ma", r.s1ma}, {"sigma_a", static_cast<int>(r.sigma_a)}};
        o["s1mb"] = r.s1mb ? nlohmann::json(*r.s1mb) : nlohmann::json(nullptr);
        o["sigma_b"] =
            r.sigma_b ? nlohmann::json(static_cast<int>(*r.sigma_b)) : nlohmann::json(nullptr);
        arr.push_back(std::move(o));
    }
    return arr;
}

inline std::pair<Sign, Sign> parse_channel(const std::string &token) {
    if (token.size() != 2) {
        throw UsageError("unknown channel '" + token + "'");
    }
    auto one = [&](char c) {
        if (c == '+') {
            return Sign::plus;
        }
        if (c == '-') {
            return Sign::minus;
        }
        throw UsageError("unknown channel '" + token + "'");
    };
    return {one(token[0]), one(token[1])};
}

// ---------------------------------------------------------------------------
// commands

inline Table single_dist(const JobConfig &c) {
    const MeasurementKernel kernel(c.resolution);
    const PolarizationKet state = single_photon::diagonal_state();
    Table t{{"s1m", "p_plus", "p_minus"}, {}};
    for (const double s : c.grid.points()) {
        t.rows.push_back({s, single_photon::joint_density(state, kernel, s, Sign::plus),
                          single_photon::joint_density(state, kernel, s, Sign::minus)});
    }
    return t;
}

inline Table pair_dist(const JobConfig &c) {
    const MeasurementKernel kernel(c.resolution);
    const auto [sa, sb] = parse_channel(c.channel);
    const PairKet state = entangled_pair::bell_state();
    const auto pts = c.grid.points();
    Table t{{"s1ma", "s1mb", "density"}, {}};
    t.rows.reserve(pts.size() * pts.size());
    for (const double a : pts) {
        for (const double b : pts) {
            t.rows.push_back({a, b, entangled_pair::joint_density_pair(kernel, a, b, sa, sb, state)});
        }
    }
    return t;
}

inline Table quasi_table() {
    Table t{{"s1a", "s2a", "s1b", "s2b", "probability", "K"}, {}};
    const auto table = entangled_pair::quasi_table_pair();
    for (const auto &[key, p] : table.entries()) {
        const double k = entangled_pair::bell_combination(key[0], key[1], key[2], key[3]).value();
        t.rows.push_back({static_cast<double>(key[0]), static_cast<double>(key[1]),
                          static_cast<double>(key[2]), static_cast<double>(key[3]), p, k});
    }
    return t;
}

inline Table k_sweep(const JobConfig &c) {
    Table t{{"delta_s", "k_expectation"}, {}};
    const std::size_t n = c.sweep_points;
    for (std::size_t i = 0; i < n; ++i) {
        const double ds =
            n == 1 ? c.sweep_from
                   : c.sweep_from + (c.sweep_to - c.sweep_from) * static_cast<double>(i) /
                                        static_cast<double>(n - 1);
        const MeasurementKernel kernel(ds);
        const double k = c.k_mode == "closed" ? entangled_pair::k_expectation_closed_form(kernel)
                                              : entangled_pair::k_expectation_quadrature(kernel);
        t.rows.push_back({ds, k});
    }
    return t;
}

inline nlohmann::json threshold_json() {
    const double root = entangled_pair::k_threshold();
    return {{"delta_s_star", root},
            {"delta_s_star_closed_form", entangled_pair::k_threshold_closed_form()},
            {"k_at_threshold", entangled_pair::k_expectation_closed_form(MeasurementKernel(root))}};
}

struct SampleOutcome {
    std::vector<monte_carlo::SampleRecord> records;
    nlohmann::json summary;
};

inline SampleOutcome sample(const JobConfig &c, std::size_t threads) {
    const MeasurementKernel kernel(c.resolution);
    monte_carlo::SamplerOptions opts{threads};
    SampleOutcome out;
    if (c.sample_mode == "pair") {
        out.records = monte_carlo::sample_pair(kernel, c.seed, c.samples, opts);
        const auto k = monte_carlo::estimate_k(out.records);
        out.summary = {{"mode", "pair"},
                       {"resolution", c.resolution},
                       {"n", k.n},
                       {"k_estimate", k.mean},
                       {"std_error", k.std_error},
                       {"k_closed_form", entangled_pair::k_expectation_closed_form(kernel)}};
    } else {
        out.records = monte_carlo::sample_single(single_photon::diagonal_state(), kernel, c.seed,
                                                 c.samples, opts);
        const auto corr = monte_carlo::estimate_correlation_s1sq_s2(out.records);
        const auto sig = monte_carlo::estimate_sigma_mean(out.records);
        out.summary = {{"mode", "single"},
                       {"resolution", c.resolution},
                       {"n", corr.n},
                       {"c_estimate", corr.mean},
                       {"std_error", corr.std_error},
                       {"sigma_mean", sig.mean},
                       {"sigma_mean_std_error", sig.std_error}};
    }
    return out;
}

// ---------------------------------------------------------------------------
// driver

namespace detail {

inline std::string default_format(const std::string &command) {
    return command == "threshold" ? "json" : "csv";
}

/// Runs a resolved job, writing its primary output to `os`.
inline void execute(const JobConfig &c, std::size_t threads, std::ostream &os, std::ostream &err) {
    if (c.command == "single-dist") {
        write_table(single_dist(c), c.format, os);
    } else if (c.command == "pair-dist") {
        write_table(pair_dist(c), c.format, os);
    } else if (c.command == "quasi-table") {
        write_table(quasi_table(), c.format, os);
    } else if (c.command == "k-sweep") {
        write_table(k_sweep(c), c.format, os);
    } else if (c.command == "threshold") {
        const auto j = threshold_json();
        if (c.format == "json") {
            os << j.dump(2) << '\n';
        } else {
            write_table({{"delta_s_star", "delta_s_star_closed_form", "k_at_threshold"},
                         {{j["delta_s_star"].get<double>(),
                           j["delta_s_star_closed_form"].get<double>(),
                           j["k_at_threshold"].get<double>()}}},
                        "csv", os);
        }
    } else if (c.command == "sample") {
        const auto result = sample(c, threads);
        if (c.format == "json") {
            os << nlohmann::json{{"summary", result.summary},
                                 {"records", records_json(result.records)}}
                      .dump(2)
               << '\n';
        } else {
            write_records_csv(result.records, os);
            if (c.summary.empty()) {
                err << result.summary.dump(2) << '\n';
            } else {
                std::ofstream f(c.summary);
                if (!f) {
                    throw UsageError("cannot open summary file '" + c.summary + "'");
                }
                f << result.summary.dump(2) << '\n';
            }
        }
    } else {
        throw UsageError("unknown command '" + c.command + "'");
    }
}

} // namespace detail

/// Full program: parse argv, resolve the JobConfig, run it.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
    CLI::App app{"Finite-resolution polarization measurement statistics"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_path;
    bool emit_config = false;
    std::size_t threads = monte_carlo::default_thread_count();
    std::string format;
    std::string output;
    app.add_option("--config", config_path, "Load a JobConfig JSON (flags given override it)");
    app.add_flag("--emit-config", emit_config, "Print the resolved JobConfig as JSON and exit");
    app.add_option("--threads", threads, "Worker threads (default $FINRES_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "csv or json");
    app.add_option("--output,-o", output, "Output path, '-' for stdout");

    JobConfig flags;
    std::string grid_spec;

    auto *single = app.add_subcommand("single-dist", "P(s1m; s2) of the diagonal input state");
    auto *pair = app.add_subcommand("pair-dist", "Joint density of one coincidence channel");
    auto *table = app.add_subcommand("quasi-table", "36-entry signed probability table with K");
    auto *sweep = app.add_subcommand("k-sweep", "<K> as a function of the resolution");
    auto *thresh = app.add_subcommand("threshold", "Resolution at which <K> = 2");
    auto *samp = app.add_subcommand("sample", "Monte Carlo measurement records");

    std::vector<CLI::Option *> resolution_opts;
    std::vector<CLI::Option *> grid_opts;
    for (auto *sub : {single, pair, samp}) {
        resolution_opts.push_back(
            sub->add_option("--resolution", flags.resolution, "Measurement resolution delta_s"));
    }
    for (auto *sub : {single, pair}) {
        grid_opts.push_back(sub->add_option("--grid", grid_spec, "min:max:step"));
    }
    auto *channel_opt = pair->add_option("--channel", flags.channel, "++, +-, -+ or --");
    auto *from_opt = sweep->add_option("--from", flags.sweep_from, "First delta_s");
    auto *to_opt = sweep->add_option("--to", flags.sweep_to, "Last delta_s");
    auto *points_opt = sweep->add_option("--points", flags.sweep_points, "Number of rows");
    auto *kmode_opt = sweep->add_option("--mode", flags.k_mode, "closed or quadrature");
    auto *smode_opt = samp->add_option("--mode", flags.sample_mode, "single or pair");
    auto *samples_opt = samp->add_option("--samples,-n", flags.samples, "Number of records");
    auto *seed_opt = samp->add_option("--seed", flags.seed, "Master seed");
    auto *summary_opt = samp->add_option("--summary", flags.summary, "Summary JSON path");
    (void)table;
    (void)thresh;

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitUsage;
        }

        JobConfig cfg;
        bool have_command = false;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                throw UsageError("cannot open config '" + config_path + "'");
            }
            nlohmann::json j;
            try {
                f >> j;
            } catch (const nlohmann::json::exception &e) {
                throw UsageError(std::string("config is not valid JSON: ") + e.what());
            }
            cfg = from_json(j);
            have_command = true;
        }
        const auto subs = app.get_subcommands();
        if (!subs.empty()) {
            const std::string name = subs.front()->get_name();
            if (have_command && name != cfg.command) {
                throw UsageError("config is for '" + cfg.command + "', not '" + name + "'");
            }
            if (!have_command) {
                cfg.command = name;
                cfg.format = detail::default_format(name);
            }
            have_command = true;
        }
        if (!have_command) {
            throw UsageError("a command (or --config) is required; see --help");
        }

        auto given = [](const std::vector<CLI::Option *> &opts) {
            for (const auto *o : opts) {
                if (o->count() > 0) {
                    return true;
                }
            }
            return false;
        };
        if (given(resolution_opts)) {
            cfg.resolution = flags.resolution;
        }
        if (given(grid_opts)) {
            cfg.grid = parse_grid(grid_spec);
        }
        if (channel_opt->count()) {
            cfg.channel = flags.channel;
        }
        if (from_opt->count()) {
            cfg.sweep_from = flags.sweep_from;
        }
        if (to_opt->count()) {
            cfg.sweep_to = flags.sweep_to;
        }
        if (points_opt->count()) {
            cfg.sweep_points = flags.sweep_points;
        }
        if (kmode_opt->count()) {
            cfg.k_mode = flags.k_mode;
        }
        if (smode_opt->count()) {
            cfg.sample_mode = flags.sample_mode;
        }
        if (samples_opt->count()) {
            cfg.samples = flags.samples;
        }
        if (seed_opt->count()) {
            cfg.seed = flags.seed;
        }
        if (summary_opt->count()) {
            cfg.summary = flags.summary;
        }
        if (!format.empty()) {
            cfg.format = format;
        }
        if (!output.empty()) {
            cfg.output = output;
        }
        cfg.validate();

        if (emit_config) {
            out << to_json(cfg).dump(2) << '\n';
            return kExitOk;
        }

        if (cfg.output == "-") {
            detail::execute(cfg, threads, out, err);
        } else {
            std::ofstream f(cfg.output);
            if (!f) {
                throw UsageError("cannot open output '" + cfg.output + "'");
            }
            detail::execute(cfg, threads, f, err);
        }
        return kExitOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const RejectedInput &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace finres::cli
