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
#include "qsann/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "qsann/errors.hpp"

namespace qsann::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - start));
        if (!piece.empty()) {
            out.push_back(piece);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

template <class T> T parse_number(std::string_view key, std::string_view raw) {
    const auto text = trim(raw);
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
        throw ConfigError("invalid value \"" + std::string(raw) + "\" for " + std::string(key));
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view raw) {
    const auto text = trim(raw);
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError("invalid boolean \"" + std::string(raw) + "\" for " + std::string(key));
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

template <class T> std::string join(const std::vector<T> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_double(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path &p,
                              const std::filesystem::path &base_dir) {
    if (p.empty() || p.is_absolute()) {
        return p;
    }
    return std::filesystem::absolute(base_dir.empty() ? p : base_dir / p).lexically_normal();
}

using Setter = std::function<void(RunConfig &, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>> &setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"run.name", [](RunConfig &c, auto, auto v) { c.name = trim(v); }},
        {"run.model", [](RunConfig &c, auto, auto v) { c.model = parse_model_kind(trim(v)); }},
        {"run.seeds",
         [](RunConfig &c, auto k, auto v) {
             c.seeds.clear();
             for (const auto &s : split_list(v)) {
                 c.seeds.push_back(parse_number<std::uint64_t>(k, s));
             }
         }},
        {"run.jobs", [](RunConfig &c, auto k, auto v) { c.jobs = parse_number<int>(k, v); }},
        {"run.output_dir", [](RunConfig &c, auto, auto v) { c.output_dir = trim(v); }},
        {"run.wall_time", [](RunConfig &c, auto k, auto v) { c.wall_time = parse_bool(k, v); }},
        {"data.path", [](RunConfig &c, auto, auto v) { c.dataset = trim(v); }},
        {"data.split",
         [](RunConfig &c, auto k, auto v) {
             c.split.clear();
             for (const auto &s : split_list(v)) {
                 c.split.push_back(parse_number<double>(k, s));
             }
         }},
        {"data.split_seed",
         [](RunConfig &c, auto k, auto v) { c.split_seed = parse_number<std::uint64_t>(k, v); }},
        {"model.n_qubits",
         [](RunConfig &c, auto k, auto v) { c.qsann.n_qubits = parse_number<int>(k, v); }},
        {"model.enc_depth",
         [](RunConfig &c, auto k, auto v) { c.qsann.enc_depth = parse_number<int>(k, v); }},
        {"model.qkv_depth",
         [](RunConfig &c, auto k, auto v) { c.qsann.qkv_depth = parse_number<int>(k, v); }},
        {"model.layers",
         [](RunConfig &c, auto k, auto v) { c.qsann.layers = parse_number<int>(k, v); }},
        {"model.dim",
         [](RunConfig &c, auto k, auto v) {
             if (trim(v).empty()) {
                 c.dim.reset();
             } else {
                 c.dim = parse_number<std::size_t>(k, v);
             }
         }},
        {"model.lambda",
         [](RunConfig &c, auto k, auto v) {
             c.qsann.regularization.lambda = parse_number<double>(k, v);
         }},
        {"model.gamma",
         [](RunConfig &c, auto k, auto v) {
             c.qsann.regularization.gamma = parse_number<double>(k, v);
         }},
        {"train.learning_rate",
         [](RunConfig &c, auto k, auto v) { c.train.learning_rate = parse_number<double>(k, v); }},
        {"train.epochs",
         [](RunConfig &c, auto k, auto v) { c.train.epochs = parse_number<int>(k, v); }},
        {"train.batch_size",
         [](RunConfig &c, auto k, auto v) { c.train.batch_size = parse_number<int>(k, v); }},
        {"train.stop_window",
         [](RunConfig &c, auto k, auto v) { c.train.stop_window = parse_number<int>(k, v); }},
        {"train.stop_tol",
         [](RunConfig &c, auto k, auto v) { c.train.stop_tol = parse_number<double>(k, v); }},
        {"train.dev_early_stopping",
         [](RunConfig &c, auto k, auto v) { c.train.dev_early_stopping = parse_bool(k, v); }},
        {"train.shuffle",
         [](RunConfig &c, auto k, auto v) { c.train.shuffle = parse_bool(k, v); }},
        {"simulation.noise",
         [](RunConfig &c, auto, auto v) {
             const auto text = trim(v);
             if (text == "none" || text.empty()) {
                 c.simulation.noise.reset();
                 return;
             }
             const double p = c.simulation.noise ? c.simulation.noise->p : 0.0;
             c.simulation.noise = NoiseModel{sim::parse_noise_kind(text), p};
         }},
        {"simulation.noise_p",
         [](RunConfig &c, auto k, auto v) {
             const double p = parse_number<double>(k, v);
             if (c.simulation.noise) {
                 c.simulation.noise->p = p;
             } else if (p != 0.0) {
                 throw ConfigError("simulation.noise_p needs simulation.noise to be set first");
             }
         }},
        {"simulation.shots",
         [](RunConfig &c, auto k, auto v) { c.simulation.shots = parse_number<int>(k, v); }},
        {"simulation.shot_seed",
         [](RunConfig &c, auto k, auto v) {
             c.simulation.shot_seed = parse_number<std::uint64_t>(k, v);
         }},
        {"simulation.attention",
         [](RunConfig &c, auto, auto v) {
             const auto text = trim(v);
             if (text == "gaussian") {
                 c.simulation.attention = AttentionKind::GaussianProjected;
             } else if (text == "inner_product") {
                 c.simulation.attention = AttentionKind::InnerProduct;
             } else {
                 throw ConfigError("unknown attention kind \"" + text + "\"");
             }
         }},
    };
    return table;
}

} // namespace

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
    case ModelKind::Qsann: return "qsann";
    case ModelKind::Csann: return "csann";
    case ModelKind::Naive: return "naive";
    }
    return "qsann";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "qsann") {
        return ModelKind::Qsann;
    }
    if (text == "csann") {
        return ModelKind::Csann;
    }
    if (text == "naive") {
        return ModelKind::Naive;
    }
    throw ConfigError("unknown model kind \"" + std::string(text) +
                      "\" (expected qsann, csann or naive)");
}

std::size_t RunConfig::embedding_dim() const {
    if (model == ModelKind::Qsann) {
        return qsann.dim();
    }
    return dim.value_or(16);
}

std::vector<double> RunConfig::split_ratios() const {
    const double total = std::accumulate(split.begin(), split.end(), 0.0);
    std::vector<double> out;
    for (double w : split) {
        out.push_back(w / total);
    }
    return out;
}

BaselineConfig RunConfig::baseline() const {
    BaselineConfig c;
    c.dim = embedding_dim();
    c.regularization = qsann.regularization;
    return c;
}

std::filesystem::path RunConfig::resolved_output_dir() const {
    if (!output_dir.empty()) {
        return output_dir;
    }
    const char *root = std::getenv(kOutputRootEnv);
    const std::filesystem::path parent = root != nullptr && *root != '\0' ? root : "runs";
    return parent / name;
}

void RunConfig::validate() const {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("run.name must be a non-empty plain file name");
    }
    if (seeds.empty()) {
        throw ConfigError("run.seeds must list at least one seed");
    }
    if (jobs < 1) {
        throw ConfigError("run.jobs must be at least 1");
    }
    if (split.size() != 2 && split.size() != 3) {
        throw ConfigError("data.split needs two (train, test) or three (train, dev, test) weights");
    }
    if (std::ranges::any_of(split, [](double w) { return !(w > 0.0) || !std::isfinite(w); })) {
        throw ConfigError("data.split weights must be positive");
    }
    qsann.validate();
    if (model == ModelKind::Qsann) {
        if (dim && *dim != qsann.dim()) {
            throw ConfigError("model.dim = " + std::to_string(*dim) + " but n (D_enc + 2) = " +
                              std::to_string(qsann.dim()));
        }
    } else {
        if (simulation.noise || simulation.shots > 0 ||
            simulation.attention != AttentionKind::GaussianProjected) {
            throw ConfigError("simulation settings only apply to the qsann model");
        }
        baseline().validate();
    }
    simulation.validate();
    if (simulation.attention == AttentionKind::InnerProduct) {
        throw ConfigError("inner_product attention has no gradient and cannot be trained");
    }
    train.validate();
    if (train.dev_early_stopping && split.size() != 3) {
        throw ConfigError("train.dev_early_stopping needs a three-way data.split");
    }
}

std::string RunConfig::to_ini() const {
    std::ostringstream out;
    out << "[run]\n"
        << "name = " << name << "\n"
        << "model = " << to_string(model) << "\n"
        << "seeds = " << join(seeds) << "\n"
        << "jobs = " << jobs << "\n"
        << "output_dir = " << output_dir.string() << "\n"
        << "wall_time = " << (wall_time ? "true" : "false") << "\n\n"
        << "[data]\n"
        << "path = " << dataset.string() << "\n"
        << "split = " << join(split) << "\n"
        << "split_seed = " << split_seed << "\n\n"
        << "[model]\n"
        << "n_qubits = " << qsann.n_qubits << "\n"
        << "enc_depth = " << qsann.enc_depth << "\n"
        << "qkv_depth = " << qsann.qkv_depth << "\n"
        << "layers = " << qsann.layers << "\n"
        << "dim = " << (dim ? std::to_string(*dim) : std::string()) << "\n"
        << "lambda = " << format_double(qsann.regularization.lambda) << "\n"
        << "gamma = " << format_double(qsann.regularization.gamma) << "\n\n"
        << "[train]\n"
        << "learning_rate = " << format_double(train.learning_rate) << "\n"
        << "epochs = " << train.epochs << "\n"
        << "batch_size = " << train.batch_size << "\n"
        << "stop_window = " << train.stop_window << "\n"
        << "stop_tol = " << format_double(train.stop_tol) << "\n"
        << "dev_early_stopping = " << (train.dev_early_stopping ? "true" : "false") << "\n"
        << "shuffle = " << (train.shuffle ? "true" : "false") << "\n\n"
        << "[simulation]\n"
        << "noise = " << (simulation.noise ? sim::to_string(simulation.noise->kind) : "none")
        << "\n"
        << "noise_p = " << format_double(simulation.noise ? simulation.noise->p : 0.0) << "\n"
        << "shots = " << simulation.shots << "\n"
        << "shot_seed = " << simulation.shot_seed << "\n"
        << "attention = "
        << (simulation.attention == AttentionKind::InnerProduct ? "inner_product" : "gaussian")
        << "\n";
    return out.str();
}

void apply_setting(RunConfig &config, std::string_view key, std::string_view value) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw ConfigError("unknown setting \"" + std::string(key) + "\"");
    }
    it->second(config, key, value);
}

void apply_overrides(RunConfig &config, std::span<const std::string> overrides) {
    for (const auto &o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override \"" + o + "\" is not of the form section.key=value");
        }
        const auto key = trim(std::string_view(o).substr(0, eq));
        apply_setting(config, key, std::string_view(o).substr(eq + 1));
        if (key == "data.path") {
            config.dataset = resolve(config.dataset, {});
        }
    }
}

RunConfig parse_config(std::istream &in, const std::filesystem::path &base_dir) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw ParseError("config: " + e.message(), e.line());
    }
    RunConfig config;
    // The noise kind must be known before its level.
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto &[section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("setting \"" + section + "\" must be inside a [section]");
        }
        for (const auto &[key, value] : body) {
            entries.emplace_back(section + "." + key, value.data());
        }
    }
    std::ranges::stable_partition(entries,
                                  [](const auto &e) { return e.first == "simulation.noise"; });
    for (const auto &[key, value] : entries) {
        apply_setting(config, key, value);
    }
    config.dataset = resolve(config.dataset, base_dir);
    return config;
}

RunConfig load_config(const std::filesystem::path &path,
                      std::span<const std::string> overrides) {
    RunConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config file " + path.string());
        }
        config = parse_config(in, path.parent_path());
    }
    apply_overrides(config, overrides);
    config.validate();
    return config;
}

} // namespace qsann::cli
