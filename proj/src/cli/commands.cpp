// Copyright 2026 The QSANN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qsann/cli/commands.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qsann/cli/checkpoint.hpp"
#include "qsann/errors.hpp"

namespace qsann::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct LoadedData {
    Dataset dataset;
    std::size_t samples_read = 0;
};

LoadedData load_dataset(const RunConfig &config) {
    if (config.dataset.empty()) {
        throw ConfigError("no dataset given (set data.path or pass --dataset)");
    }
    if (!fs::is_regular_file(config.dataset)) {
        throw ConfigError("dataset not found: " + config.dataset.string());
    }
    const auto samples = load_tsv(config.dataset);
    const auto ratios = config.split_ratios();
    return {build_splits(samples, ratios, config.split_seed), samples.size()};
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

void write_json(const fs::path &path, const ordered_json &doc) {
    write_text(path, doc.dump(2) + "\n");
}

ordered_json optional_number(const std::optional<double> &v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string format_level(double p) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, end);
}

double oov_fraction(const std::vector<LabeledSequence> &split) {
    std::size_t total = 0, oov = 0;
    for (const auto &s : split) {
        total += s.tokens.size();
        oov += static_cast<std::size_t>(std::ranges::count(s.tokens, kOovId));
    }
    return total == 0 ? 0.0 : static_cast<double>(oov) / static_cast<double>(total);
}

ordered_json manifest(const RunConfig &config, const LoadedData &data) {
    const auto &ds = data.dataset;
    return {
        {"schema_version", kArtifactSchemaVersion},
        {"source", fs::absolute(config.dataset).lexically_normal().string()},
        {"samples_read", data.samples_read},
        {"dropped_empty", ds.dropped_empty},
        {"split_weights", config.split},
        {"split_ratios", ds.ratios},
        {"split_seed", ds.seed},
        {"sizes", {{"train", ds.train.size()}, {"dev", ds.dev.size()}, {"test", ds.test.size()}}},
        {"vocabulary_size", ds.vocabulary.size()},
        {"vocabulary_hash", ds.vocabulary.hash()},
        {"test_oov_token_fraction", oov_fraction(ds.test)},
    };
}

ordered_json metrics_line(const EpochMetrics &m) {
    return {{"epoch", m.epoch},
            {"train_loss", m.train_loss},
            {"train_acc", m.train_acc},
            {"test_acc", optional_number(m.test_acc)},
            {"dev_loss", optional_number(m.dev_loss)},
            {"wall_time_s", optional_number(m.wall_time_s)}};
}

SeedOutcome train_one_seed(const RunConfig &config, const Dataset &data, std::uint64_t seed,
                           const fs::path &dir, std::ostream &log, std::mutex &log_mutex) {
    fs::create_directories(dir);
    std::ofstream metrics(dir / "metrics.jsonl", std::ios::binary);
    if (!metrics) {
        throw Error("cannot write " + (dir / "metrics.jsonl").string());
    }
    auto model = make_model(config, data.vocabulary.size());
    TrainConfig tc = config.train;
    tc.seed = seed;
    tc.record_wall_time = config.wall_time;

    const auto on_epoch = [&](const EpochMetrics &m) {
        metrics << metrics_line(m).dump() << "\n";
        metrics.flush();
    };

    SeedOutcome outcome;
    outcome.seed = seed;
    const Classifier *final_model = model.get();
    std::shared_ptr<const Classifier> rescued;
    try {
        const auto result = train(*model, data, tc, on_epoch);
        outcome.epochs_run = result.epochs_run;
        outcome.converged = result.converged;
        outcome.stopped_on_dev = result.stopped_on_dev;
    } catch (const TrainingAborted &e) {
        outcome.aborted = true;
        outcome.epochs_run = e.partial().epochs_run;
        rescued = e.last_good();
        final_model = rescued.get();
        const std::lock_guard lock(log_mutex);
        log << "seed " << seed << ": training aborted: " << e.what()
            << " (keeping the last finite parameters)\n";
    }

    save_checkpoint(dir / "checkpoint.json", *final_model, data.vocabulary,
                    {config, seed, outcome.epochs_run});
    outcome.train_acc = evaluate(data.train, *final_model).accuracy;
    outcome.test_acc = evaluate(data.test, *final_model).accuracy;
    if (!data.dev.empty()) {
        outcome.dev_acc = evaluate(data.dev, *final_model).accuracy;
    }
    const std::lock_guard lock(log_mutex);
    log << "seed " << seed << ": " << outcome.epochs_run << " epochs, train acc "
        << outcome.train_acc << ", test acc " << outcome.test_acc << "\n";
    return outcome;
}

std::vector<LabeledSequence> select_split(const LoadedCheckpoint &ckpt,
                                          const fs::path &dataset_override,
                                          const std::string &split) {
    RunConfig config = ckpt.info.config;
    if (!dataset_override.empty()) {
        config.dataset = dataset_override;
    }
    if (config.dataset.empty() || !fs::is_regular_file(config.dataset)) {
        throw ConfigError("dataset not found: " + config.dataset.string());
    }
    if (split == "all") {
        return encode_samples(load_tsv(config.dataset), ckpt.vocabulary);
    }
    if (split != "train" && split != "dev" && split != "test") {
        throw ConfigError("unknown split \"" + split + "\" (expected train, dev, test or all)");
    }
    auto data = load_dataset(config);
    if (data.dataset.vocabulary.hash() != ckpt.vocabulary.hash()) {
        throw ConfigError("vocabulary hash mismatch: the dataset split does not reproduce the "
                          "checkpoint vocabulary (" +
                          data.dataset.vocabulary.hash() + " vs " + ckpt.vocabulary.hash() + ")");
    }
    auto &ds = data.dataset;
    auto &chosen = split == "train" ? ds.train : split == "dev" ? ds.dev : ds.test;
    if (chosen.empty()) {
        throw ConfigError("the checkpoint's data split has no " + split + " part");
    }
    return std::move(chosen);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string csv_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

int exit_code_for(const std::exception &e) {
    if (dynamic_cast<const ConfigError *>(&e) != nullptr ||
        dynamic_cast<const ParseError *>(&e) != nullptr ||
        dynamic_cast<const IndexError *>(&e) != nullptr ||
        dynamic_cast<const EmptySequenceError *>(&e) != nullptr) {
        return kExitUsage;
    }
    return kExitFailure;
}

} // namespace

std::pair<double, double> mean_std(std::span<const double> values) {
    if (values.empty()) {
        return {0.0, 0.0};
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) {
        return {mean, 0.0};
    }
    double sq = 0.0;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(sq / (n - 1.0))};
}

TrainSummary run_training(const RunConfig &config, std::ostream &log) {
    config.validate();
    const auto data = load_dataset(config);
    const auto out = config.resolved_output_dir();
    fs::create_directories(out);
    write_text(out / "effective_config.ini", config.to_ini());
    write_json(out / "dataset_manifest.json", manifest(config, data));
    std::mutex log_mutex;
    {
        const std::lock_guard lock(log_mutex);
        log << config.name << ": " << to_string(config.model) << ", " << data.dataset.train.size()
            << " train / " << data.dataset.dev.size() << " dev / " << data.dataset.test.size()
            << " test, vocabulary " << data.dataset.vocabulary.size() << ", " << config.seeds.size()
            << " seeds\n";
    }

    TrainSummary summary;
    summary.seeds.resize(config.seeds.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(config.seeds.size());
    const auto worker = [&] {
        for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
            try {
                const auto seed = config.seeds[i];
                summary.seeds[i] = train_one_seed(config, data.dataset, seed,
                                                  out / ("seed_" + std::to_string(seed)), log,
                                                  log_mutex);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(config.jobs),
                                            config.seeds.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<double> train_accs, test_accs;
    ordered_json per_seed = ordered_json::array();
    for (const auto &s : summary.seeds) {
        train_accs.push_back(s.train_acc);
        test_accs.push_back(s.test_acc);
        if (s.aborted) {
            summary.exit_code = kExitFailure;
        }
        per_seed.push_back({{"seed", s.seed},
                            {"train_acc", s.train_acc},
                            {"dev_acc", optional_number(s.dev_acc)},
                            {"test_acc", s.test_acc},
                            {"epochs_run", s.epochs_run},
                            {"converged", s.converged},
                            {"stopped_on_dev", s.stopped_on_dev},
                            {"aborted", s.aborted}});
    }
    std::tie(summary.train_mean, summary.train_std) = mean_std(train_accs);
    std::tie(summary.test_mean, summary.test_std) = mean_std(test_accs);

    const auto model = make_model(config, data.dataset.vocabulary.size());
    const auto count = model->parameter_count();
    write_json(out / "summary.json",
               {{"schema_version", kArtifactSchemaVersion},
                {"name", config.name},
                {"model_kind", to_string(config.model)},
                {"status", summary.exit_code == kExitOk ? "ok" : "aborted"},
                {"parameter_count",
                 {{"attention", count.attention}, {"head", count.head}, {"total", count.total}}},
                {"seeds", per_seed},
                {"train_accuracy", {{"mean", summary.train_mean}, {"std", summary.train_std}}},
                {"test_accuracy", {{"mean", summary.test_mean}, {"std", summary.test_std}}}});
    log << config.name << ": test accuracy " << summary.test_mean << " +- " << summary.test_std
        << " over " << summary.seeds.size() << " seeds\n";
    return summary;
}

EvalReport run_eval(const EvalOptions &options) {
    const auto ckpt = load_checkpoint(options.checkpoint);
    const auto samples = select_split(ckpt, options.dataset, options.split);
    if (samples.empty()) {
        throw ConfigError("no samples to evaluate");
    }
    const auto e = evaluate(samples, *ckpt.model);
    EvalReport report{options.split, samples.size(), e.accuracy, e.mean_loss};
    if (!options.output.empty()) {
        write_json(options.output, {{"schema_version", kArtifactSchemaVersion},
                                    {"checkpoint", options.checkpoint.string()},
                                    {"split", report.split},
                                    {"samples", report.samples},
                                    {"accuracy", report.accuracy},
                                    {"mean_loss", report.mean_loss}});
    }
    return report;
}

std::vector<fs::path> run_attention(const AttentionOptions &options) {
    const auto ckpt = load_checkpoint(options.checkpoint);
    const auto samples = select_split(ckpt, options.dataset, options.split);
    std::vector<std::size_t> indices = options.indices;
    if (indices.empty()) {
        indices.resize(samples.size());
        std::iota(indices.begin(), indices.end(), std::size_t{0});
    }
    for (auto i : indices) {
        if (i >= samples.size()) {
            throw IndexError("sample index " + std::to_string(i) + " out of range; the " +
                             options.split + " split has " + std::to_string(samples.size()) +
                             " samples");
        }
    }
    fs::create_directories(options.output_dir);
    std::vector<fs::path> written;
    for (auto i : indices) {
        const auto &sample = samples[i];
        const auto prediction = ckpt.model->predict(sample.tokens);
        if (prediction.attention.empty()) {
            throw ConfigError("model kind \"" + std::string(ckpt.model->kind()) +
                              "\" has no attention coefficients");
        }
        std::string header;
        for (std::size_t s = 0; s < sample.words.size(); ++s) {
            header += (s == 0 ? "" : ",") + csv_field(sample.words[s]);
        }
        for (std::size_t l = 0; l < prediction.attention.size(); ++l) {
            const auto &a = prediction.attention[l];
            const std::string stem =
                "sample" + std::to_string(i) + "_layer" + std::to_string(l);

            std::string averaged = header + "\n";
            const auto means = a.column_means();
            for (std::size_t j = 0; j < means.size(); ++j) {
                averaged += (j == 0 ? "" : ",") + csv_number(means[j]);
            }
            write_text(options.output_dir / (stem + "_averaged.csv"), averaged + "\n");
            written.push_back(options.output_dir / (stem + "_averaged.csv"));

            std::string matrix = "," + header + "\n";
            for (std::size_t s = 0; s < a.size(); ++s) {
                matrix += csv_field(sample.words[s]);
                for (double v : a.row(s)) {
                    matrix += "," + csv_number(v);
                }
                matrix += "\n";
            }
            write_text(options.output_dir / (stem + "_matrix.csv"), matrix);
            written.push_back(options.output_dir / (stem + "_matrix.csv"));
        }
    }
    return written;
}

std::vector<NoiseSweepEntry> run_noise_sweep(const NoiseSweepOptions &options,
                                             std::ostream &log) {
    if (options.base.model != ModelKind::Qsann) {
        throw ConfigError("noise sweeps need the qsann model");
    }
    if (options.channels.empty() || options.levels.empty()) {
        throw ConfigError("noise sweep needs at least one channel and one level");
    }
    for (double p : options.levels) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("noise level " + format_level(p) + " outside [0, 1]");
        }
    }
    options.base.validate();
    const auto root = options.base.resolved_output_dir();

    std::vector<NoiseSweepEntry> entries;
    ordered_json runs = ordered_json::array();
    for (auto channel : options.channels) {
        for (double p : options.levels) {
            RunConfig config = options.base;
            config.simulation.noise = NoiseModel{channel, p};
            config.output_dir =
                root / (std::string(sim::to_string(channel)) + "_p" + format_level(p));
            const auto summary = run_training(config, log);
            NoiseSweepEntry entry{channel, p, {}, summary.test_mean, summary.test_std};
            for (const auto &s : summary.seeds) {
                entry.test_accuracies.push_back(s.test_acc);
            }
            runs.push_back({{"channel", sim::to_string(channel)},
                            {"p", p},
                            {"directory", config.output_dir.filename().string()},
                            {"test_accuracies", entry.test_accuracies},
                            {"mean", entry.mean},
                            {"std", entry.std}});
            entries.push_back(std::move(entry));
        }
    }
    fs::create_directories(root);
    write_json(root / "noise_sweep.json", {{"schema_version", kArtifactSchemaVersion},
                                           {"name", options.base.name},
                                           {"seeds", options.base.seeds},
                                           {"levels", options.levels},
                                           {"runs", runs}});
    return entries;
}

void write_toy_corpus(const fs::path &path, std::size_t count, std::uint64_t seed) {
    if (count < 2) {
        throw ConfigError("toy corpus needs at least two sentences");
    }
    std::ostringstream out;
    for (const auto &s : make_separable_corpus(count, seed)) {
        out << s.text << "\t" << s.label << "\n";
    }
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    write_text(path, out.str());
}

int run_cli(int argc, char **argv) {
    CLI::App app{"Quantum self-attention neural network for text classification"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string dataset, output, seeds;
    int jobs = 0;
    bool wall_time = false;
    const auto add_run_options = [&](CLI::App *cmd) {
        cmd->add_option("-c,--config", config_path, "INI run configuration");
        cmd->add_option("-s,--set", overrides, "override, e.g. train.epochs=50")
            ->take_all();
        cmd->add_option("--dataset", dataset, "TSV dataset (data.path)");
        cmd->add_option("-o,--output", output, "output directory (run.output_dir)");
        cmd->add_option("--seeds", seeds, "comma-separated seeds (run.seeds)");
        cmd->add_option("-j,--jobs", jobs, "seeds trained in parallel (run.jobs)");
        cmd->add_flag("--wall-time", wall_time, "record wall-clock time in metrics");
    };
    const auto build_config = [&] {
        auto all = overrides;
        if (!dataset.empty()) {
            all.push_back("data.path=" + dataset);
        }
        if (!output.empty()) {
            all.push_back("run.output_dir=" + output);
        }
        if (!seeds.empty()) {
            all.push_back("run.seeds=" + seeds);
        }
        if (jobs > 0) {
            all.push_back("run.jobs=" + std::to_string(jobs));
        }
        if (wall_time) {
            all.push_back("run.wall_time=true");
        }
        return load_config(config_path, all);
    };

    auto *train_cmd = app.add_subcommand("train", "train every configured seed");
    add_run_options(train_cmd);

    auto *show_cmd = app.add_subcommand("show-config", "print the effective configuration");
    add_run_options(show_cmd);

    auto *sweep_cmd = app.add_subcommand("noise-sweep", "train under each noise channel and level");
    add_run_options(sweep_cmd);
    std::vector<std::string> channels{"depolarizing", "amplitude_damping"};
    std::vector<double> levels{0.01, 0.1, 0.2};
    sweep_cmd->add_option("--channels", channels, "noise channels")->delimiter(',');
    sweep_cmd->add_option("--levels", levels, "noise levels p")->delimiter(',');

    EvalOptions eval_opts;
    auto *eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    eval_cmd->add_option("--checkpoint", eval_opts.checkpoint)->required();
    eval_cmd->add_option("--dataset", eval_opts.dataset, "defaults to the training dataset");
    eval_cmd->add_option("--split", eval_opts.split, "train, dev, test or all");
    eval_cmd->add_option("-o,--output", eval_opts.output, "also write the report here");

    AttentionOptions att_opts;
    auto *att_cmd = app.add_subcommand("attention", "export attention coefficients as CSV");
    att_cmd->add_option("--checkpoint", att_opts.checkpoint)->required();
    att_cmd->add_option("--dataset", att_opts.dataset, "defaults to the training dataset");
    att_cmd->add_option("--split", att_opts.split, "train, dev, test or all");
    att_cmd->add_option("-i,--index", att_opts.indices, "sample indices (default: all)")
        ->delimiter(',');
    att_cmd->add_option("-o,--output-dir", att_opts.output_dir);

    fs::path toy_path;
    std::size_t toy_count = 130;
    std::uint64_t toy_seed = 0;
    auto *toy_cmd = app.add_subcommand("generate-toy", "write a separable two-class corpus");
    toy_cmd->add_option("-o,--output", toy_path)->required();
    toy_cmd->add_option("--count", toy_count);
    toy_cmd->add_option("--seed", toy_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train_cmd) {
            return run_training(build_config(), std::cerr).exit_code;
        }
        if (*show_cmd) {
            std::cout << build_config().to_ini();
            return kExitOk;
        }
        if (*sweep_cmd) {
            NoiseSweepOptions opts;
            opts.base = build_config();
            opts.channels.clear();
            for (const auto &c : channels) {
                opts.channels.push_back(sim::parse_noise_kind(c));
            }
            opts.levels = levels;
            const auto entries = run_noise_sweep(opts, std::cerr);
            for (const auto &e : entries) {
                std::cout << sim::to_string(e.channel) << " p=" << format_level(e.p)
                          << ": test accuracy " << e.mean << " +- " << e.std << "\n";
            }
            return kExitOk;
        }
        if (*eval_cmd) {
            const auto r = run_eval(eval_opts);
            std::cout << ordered_json{{"split", r.split},
                                      {"samples", r.samples},
                                      {"accuracy", r.accuracy},
                                      {"mean_loss", r.mean_loss}}
                             .dump()
                      << "\n";
            return kExitOk;
        }
        if (*att_cmd) {
            for (const auto &p : run_attention(att_opts)) {
                std::cout << p.string() << "\n";
            }
            return kExitOk;
        }
        if (*toy_cmd) {
            write_toy_corpus(toy_path, toy_count, toy_seed);
            return kExitOk;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitUsage;
}

} // namespace qsann::cli
