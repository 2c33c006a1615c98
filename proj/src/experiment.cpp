// SPDX-License-Identifier: Apache-2.0
//
// rmimo - multi-cell Massive MIMO spectral efficiency under Rician fading
// Copyright (C) 2026 The rmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rmimo/experiment.hpp"

#include "rmimo/closed_form.hpp"
#include "rmimo/geometry.hpp"
#include "rmimo/monte_carlo.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace rmimo
{

namespace
{

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

struct Point
{
    std::string label;
    ExperimentConfig cfg;
};

struct Family
{
    std::string label;
    bool strip_los = false;
};

std::vector<Point> experiment_points(const ExperimentConfig &cfg, const std::string &name)
{
    std::vector<Point> points;
    if (name == "sweep-M")
    {
        for (int m = 10; m <= 100; m += 10)
        {
            ExperimentConfig c = cfg;
            c.M = m;
            points.push_back({"M=" + std::to_string(m), c});
        }
    }
    else if (name == "reuse-sweep")
    {
        for (int f : {1, 2, 4})
        {
            if (!reuse_factor_supported(f, cfg.num_cells_per_side))
                continue;
            ExperimentConfig c = with_reuse_factor(cfg, f);
            c.validate();
            points.push_back({"f=" + std::to_string(f), c});
        }
    }
    else
    {
        ExperimentConfig c = cfg;
        if (name == "uncorrelated")
            c.fading_mode = FadingMode::Uncorrelated;
        else if (name == "all-los")
            c.fading_mode = FadingMode::AllLos;
        points.push_back({"M=" + std::to_string(c.M), c});
    }
    return points;
}

std::vector<Family> experiment_families(const ExperimentConfig &cfg, const std::string &name)
{
    if (name == "reuse-sweep" || name == "validate")
        return {{std::string(to_string(cfg.fading_mode)), false}};
    if (cfg.fading_mode == FadingMode::RayleighOnly && name != "uncorrelated" && name != "all-los")
        return {{"rayleigh", true}};
    return {{"rician", false}, {"rayleigh", true}};
}

struct DropOutput
{
    std::vector<ResultRow> rows;
};

void run_drop(const ExperimentConfig &cfg, const ExperimentOptions &opts, const std::vector<Point> &points,
              int drop, std::size_t trials, unsigned mc_threads, DropOutput &out)
{
    for (std::size_t pi = 0; pi < points.size(); ++pi)
    {
        const ExperimentConfig &pc = points[pi].cfg;
        Rng rng = make_stream(cfg.seed, {static_cast<std::uint64_t>(drop)});
        const NetworkRealization net = drop_network(pc, rng);
        const std::vector<Family> families = experiment_families(pc, opts.experiment);

        for (std::size_t fi = 0; fi < families.size(); ++fi)
        {
            const Scenario sc = make_scenario(net, pc, pc.M, families[fi].strip_los);
            const std::vector<MomentTable> tables = compute_moments(sc, opts.kinds);

            std::vector<McResult> mc;
            if (trials > 0)
            {
                McOptions mo;
                mo.trials = trials;
                mo.threads = mc_threads;
                mo.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(drop), pi, fi, 0x4d43u});
                mc = mc_sinr(materialized(sc), opts.kinds, opts.directions, mo);
            }

            std::size_t mc_index = 0;
            for (std::size_t ki = 0; ki < opts.kinds.size(); ++ki)
            {
                for (Direction dir : opts.directions)
                {
                    const std::vector<SinrBreakdown> cf = sinr_closed_form(tables[ki], sc, dir);
                    const double prelog = dir == Direction::Uplink ? pc.ul_prelog() : pc.dl_prelog();
                    for (UeIndex u = 0; u < sc.num_ues(); ++u)
                    {
                        ResultRow r;
                        r.point = points[pi].label;
                        r.fading = families[fi].label;
                        r.drop = drop;
                        r.cell = net.drop_cell[u];
                        r.ue = static_cast<int>(u % static_cast<std::size_t>(pc.K));
                        r.kind = opts.kinds[ki];
                        r.direction = dir;
                        r.sinr = cf[u].defined ? cf[u].sinr : 0.0;
                        r.se = se_from_sinr(r.sinr, prelog);
                        r.mc_sinr = trials > 0 ? mc[mc_index].sinr[u].value : nan_value;
                        r.mc_stderr = trials > 0 ? mc[mc_index].sinr[u].std_error : nan_value;
                        out.rows.push_back(std::move(r));
                    }
                    ++mc_index;
                }
            }
        }
    }
}

std::string format_double(double v, int digits = 17)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_number(const std::string &s, const std::filesystem::path &file)
{
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError("malformed number '" + s + "' in " + file.string());
    return v;
}

} // namespace

bool experiment_supported(const std::string &name)
{
    return std::find(std::begin(experiment_names), std::end(experiment_names), name) != std::end(experiment_names);
}

std::string config_hash(const ExperimentConfig &cfg)
{
    const std::string text = config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg, const ExperimentOptions &opts)
{
    cfg.validate();
    if (!experiment_supported(opts.experiment))
        throw ConfigError("unsupported experiment '" + opts.experiment + "'");
    if (opts.drops < 1)
        throw ConfigError("drops must be at least 1");
    if (opts.kinds.empty() || opts.directions.empty())
        throw ConfigError("no estimators or directions selected");

    ExperimentResult result;
    result.experiment = opts.experiment;
    result.seed = cfg.seed;
    result.config_hash = config_hash(cfg);
    result.config = cfg;
    result.options = opts;

    std::size_t trials = opts.trials;
    if (opts.experiment == "validate" && trials == 0)
        trials = 50000;
    result.options.trials = trials;

    const std::vector<Point> points = experiment_points(cfg, opts.experiment);
    std::vector<DropOutput> drops(static_cast<std::size_t>(opts.drops));

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(opts.drops));
    const unsigned mc_threads = threads > 1 ? 1u : opts.threads;
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int d = next++; d < opts.drops; d = next++)
            run_drop(cfg, opts, points, d, trials, mc_threads, drops[static_cast<std::size_t>(d)]);
    };
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }

    for (DropOutput &d : drops)
        for (ResultRow &r : d.rows)
            result.rows.push_back(std::move(r));

    if (trials > 0)
    {
        ValidationSummary &v = result.validation;
        v.ran = true;
        for (const ResultRow &r : result.rows)
        {
            if (!(r.sinr > 0.0) || !(r.mc_stderr > 0.0))
                continue;
            const double diff = std::abs(r.sinr - r.mc_sinr);
            v.max_abs_sigmas = std::max(v.max_abs_sigmas, diff / r.mc_stderr);
            v.max_rel_deviation = std::max(v.max_rel_deviation, diff / r.sinr);
            ++v.compared;
        }
        v.passed = v.max_abs_sigmas <= opts.validate_sigmas;
    }
    return result;
}

void write_csv(const ExperimentResult &result, std::ostream &out)
{
    out << csv_header << '\n';
    for (const ResultRow &r : result.rows)
    {
        out << r.point << ',' << r.fading << ',' << r.drop << ',' << r.cell << ',' << r.ue << ','
            << to_string(r.kind) << ',' << to_string(r.direction) << ',' << format_double(r.sinr) << ','
            << format_double(r.se) << ',' << format_double(r.mc_sinr) << ',' << format_double(r.mc_stderr)
            << '\n';
    }
}

std::string result_metadata_json(const ExperimentResult &result)
{
    nlohmann::json doc;
    doc["experiment"] = result.experiment;
    doc["seed"] = result.seed;
    doc["config_hash"] = result.config_hash;
    doc["config"] = config_to_json(result.config);
    doc["drops"] = result.options.drops;
    doc["trials"] = result.options.trials;
    doc["closed_form"] = true;
    doc["monte_carlo"] = result.options.trials > 0;
    std::vector<std::string> kinds, dirs;
    for (EstimatorKind k : result.options.kinds)
        kinds.emplace_back(to_string(k));
    for (Direction d : result.options.directions)
        dirs.emplace_back(to_string(d));
    doc["estimators"] = kinds;
    doc["directions"] = dirs;
    doc["columns"] = csv_header;
    if (result.validation.ran)
    {
        doc["validation"] = {{"compared", result.validation.compared},
                             {"max_abs_sigmas", result.validation.max_abs_sigmas},
                             {"max_rel_deviation", result.validation.max_rel_deviation},
                             {"sigma_limit", result.options.validate_sigmas},
                             {"passed", result.validation.passed}};
    }
    return doc.dump(2);
}

double empirical_percentile(std::vector<double> values, double q)
{
    if (values.empty())
        return nan_value;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

void summarize(const std::vector<std::filesystem::path> &files, std::ostream &out)
{
    if (files.empty())
        throw ConfigError("summarize needs at least one result file");

    using Key = std::tuple<std::string, std::string, std::string, std::string>;
    struct Group
    {
        std::map<std::pair<std::size_t, int>, double> sum_per_drop;
        std::vector<double> ue_se;
    };
    std::map<Key, Group> groups;
    std::vector<Key> order;

    for (std::size_t fi = 0; fi < files.size(); ++fi)
    {
        std::ifstream in(files[fi]);
        if (!in)
            throw ConfigError("cannot read " + files[fi].string());
        std::string line;
        if (!std::getline(in, line) || line != csv_header)
            throw ConfigError("schema mismatch in " + files[fi].string());
        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const std::vector<std::string> f = split_csv_line(line);
            if (f.size() != 11)
                throw ConfigError("schema mismatch in " + files[fi].string() + " line " + std::to_string(line_no));
            const Key key{f[0], f[1], f[5], f[6]};
            auto [it, inserted] = groups.try_emplace(key);
            if (inserted)
                order.push_back(key);
            const int drop = static_cast<int>(parse_number(f[2], files[fi]));
            const double se = parse_number(f[8], files[fi]);
            it->second.sum_per_drop[{fi, drop}] += se;
            it->second.ue_se.push_back(se);
        }
    }

    out << summary_header << '\n';
    for (const Key &key : order)
    {
        const Group &g = groups.at(key);
        std::vector<double> sums;
        for (const auto &[k, v] : g.sum_per_drop)
            sums.push_back(v);
        auto mean = [](const std::vector<double> &v) {
            double s = 0.0;
            for (double x : v)
                s += x;
            return s / static_cast<double>(v.size());
        };
        out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ',' << std::get<3>(key);
        for (const std::vector<double> *v : {static_cast<const std::vector<double> *>(&sums), &g.ue_se})
        {
            out << ',' << format_double(mean(*v), 12);
            for (double q : {0.05, 0.5, 0.95})
                out << ',' << format_double(empirical_percentile(*v, q), 12);
        }
        out << '\n';
    }
}

} // namespace rmimo
