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

#include "rmimo/channel.hpp"
#include "rmimo/config.hpp"
#include "rmimo/experiment.hpp"
#include "rmimo/geometry.hpp"
#include "rmimo/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace rmimo;

namespace
{

constexpr int exit_config_error = 2;
constexpr int exit_validation_failure = 3;

std::vector<EstimatorKind> parse_kinds(const std::string &list)
{
    if (list == "all")
        return {std::begin(all_estimator_kinds), std::end(all_estimator_kinds)};
    std::vector<EstimatorKind> kinds;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            kinds.push_back(parse_estimator_kind(item));
    return kinds;
}

std::vector<Direction> parse_directions(const std::string &dir)
{
    if (dir == "both")
        return {Direction::Uplink, Direction::Downlink};
    return {parse_direction(dir)};
}

template <typename Fn> void write_output(const std::string &path, Fn &&fn)
{
    if (path.empty() || path == "-")
    {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write " + path);
    fn(out);
}

/// Optional run-level "drops" entry of a config file.
int config_drops(const std::string &path)
{
    std::ifstream in(path);
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("drops"))
        return 1;
    if (!doc["drops"].is_number_integer() || doc["drops"].get<int>() < 1)
        throw ConfigError("config field 'drops' must be a positive integer");
    return doc["drops"].get<int>();
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-cell Massive MIMO spectral efficiency under Rician fading"};
    app.require_subcommand(0, 1);

    std::string config_path, experiment = "sweep-M", out_path, estimators = "all", direction = "ul", dump_path;
    std::optional<int> drops;
    std::size_t trials = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;

    app.add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--experiment", experiment, "sweep-M | cdf | uncorrelated | all-los | reuse-sweep | validate")
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(experiment_names), std::end(experiment_names))));
    app.add_option("--drops", drops, "number of UE drops (default: the config's \"drops\" entry, else 1)")->check(CLI::PositiveNumber);
    app.add_option("--trials", trials, "Monte Carlo trials per drop (0: closed form only)");
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--out", out_path, "CSV output path ('-' for stdout); metadata goes to PATH.json");
    app.add_option("--estimators", estimators, "comma list of mmse, ewmmse, ls, mo, or all");
    app.add_option("--direction", direction, "ul | dl | both")->check(CLI::IsMember({"ul", "dl", "both"}));
    app.add_option("--threads", threads, "worker threads (0: hardware concurrency)");
    app.add_option("--dump-channels", dump_path, "write the channel statistics of drop 0 to PATH and exit");

    auto *sum = app.add_subcommand("summarize", "aggregate result CSVs into means and percentiles");
    std::vector<std::string> sum_files;
    std::string sum_out;
    sum->add_option("files", sum_files, "result CSV files")->required()->check(CLI::ExistingFile);
    sum->add_option("--out", sum_out, "summary CSV path ('-' for stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config_error;
    }

    try
    {
        if (sum->parsed())
        {
            std::vector<std::filesystem::path> files(sum_files.begin(), sum_files.end());
            write_output(sum_out, [&](std::ostream &os) { summarize(files, os); });
            return 0;
        }

        if (config_path.empty())
            throw ConfigError("--config is required");
        ExperimentConfig cfg = load_config(config_path);
        if (seed)
            cfg.seed = *seed;
        cfg.validate();

        if (!dump_path.empty())
        {
            Rng rng = make_stream(cfg.seed, {0});
            const NetworkRealization net = drop_network(cfg, rng);
            const GeneratedChannels channels(net, cfg, cfg.M);
            write_output(dump_path, [&](std::ostream &os) { dump_channels(channels, os); });
            return 0;
        }

        ExperimentOptions opts;
        opts.experiment = experiment;
        opts.drops = drops ? *drops : config_drops(config_path);
        opts.trials = trials;
        opts.kinds = parse_kinds(estimators);
        opts.directions = parse_directions(direction);
        opts.threads = threads;

        const ExperimentResult result = run_experiment(cfg, opts);
        write_output(out_path, [&](std::ostream &os) { write_csv(result, os); });
        if (!out_path.empty() && out_path != "-")
        {
            std::ofstream meta(out_path + ".json");
            meta << result_metadata_json(result) << '\n';
        }

        if (result.validation.ran)
        {
            std::cerr << "compared " << result.validation.compared << " SINRs: max deviation "
                      << result.validation.max_abs_sigmas << " std errors, max relative deviation "
                      << result.validation.max_rel_deviation << '\n';
            if (experiment == "validate" && !result.validation.passed)
            {
                std::cerr << "validation failed: deviation above " << opts.validate_sigmas << " std errors\n";
                return exit_validation_failure;
            }
        }
        return 0;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
