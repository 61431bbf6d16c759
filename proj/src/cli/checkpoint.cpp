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
#include "qsann/cli/checkpoint.hpp"

#include <sodium.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qsann/baselines.hpp"
#include "qsann/errors.hpp"
#include "qsann/model.hpp"

namespace qsann::cli {

namespace {

using nlohmann::json;

constexpr const char *kFormat = "qsann-checkpoint";

json config_to_json(const RunConfig &config) {
    std::istringstream in(config.to_ini());
    boost::property_tree::ptree tree;
    boost::property_tree::read_ini(in, tree);
    json out = json::object();
    for (const auto &[section, body] : tree) {
        for (const auto &[key, value] : body) {
            out[section][key] = value.data();
        }
    }
    return out;
}

RunConfig config_from_json(const json &j) {
    RunConfig config;
    // Apply the noise kind before its level.
    if (j.contains("simulation") && j["simulation"].contains("noise")) {
        apply_setting(config, "simulation.noise", j["simulation"]["noise"].get<std::string>());
    }
    for (const auto &[section, body] : j.items()) {
        for (const auto &[key, value] : body.items()) {
            apply_setting(config, section + "." + key, value.get<std::string>());
        }
    }
    return config;
}

std::vector<std::size_t> shape_of(const json &j) { return j.get<std::vector<std::size_t>>(); }

} // namespace

std::unique_ptr<Classifier> make_model(const RunConfig &config, std::size_t vocab_size) {
    switch (config.model) {
    case ModelKind::Qsann:
        return std::make_unique<QsannModel>(config.qsann, vocab_size, config.simulation);
    case ModelKind::Csann:
        return std::make_unique<CsannModel>(config.baseline(), vocab_size);
    case ModelKind::Naive:
        return std::make_unique<NaiveModel>(config.baseline(), vocab_size);
    }
    throw ConfigError("unknown model kind");
}

std::string encode_doubles(std::span<const double> values) {
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(values[i]);
        for (std::size_t b = 0; b < 8; ++b) {
            bytes[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
        }
    }
    std::string out(sodium_base64_encoded_len(bytes.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
    sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(),
                      sodium_base64_VARIANT_ORIGINAL);
    out.resize(std::strlen(out.c_str()));
    return out;
}

std::vector<double> decode_doubles(const std::string &text) {
    std::vector<unsigned char> bytes(text.size() / 4 * 3 + 3);
    std::size_t length = 0;
    if (sodium_base642bin(bytes.data(), bytes.size(), text.data(), text.size(), nullptr, &length,
                          nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
        throw ParseError("parameter data is not valid base64");
    }
    if (length % 8 != 0) {
        throw ParseError("parameter data length is not a multiple of 8 bytes");
    }
    std::vector<double> out(length / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (std::size_t b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
        }
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

void save_checkpoint(const std::filesystem::path &path, const Classifier &model,
                     const Vocabulary &vocabulary, const CheckpointInfo &info) {
    json doc;
    doc["format"] = kFormat;
    doc["schema_version"] = kCheckpointSchemaVersion;
    doc["model_kind"] = std::string(model.kind());
    // Where and how parallel the run was does not affect the parameters.
    RunConfig portable = info.config;
    portable.output_dir.clear();
    portable.jobs = 1;
    doc["config"] = config_to_json(portable);
    doc["train_seed"] = info.train_seed;
    doc["epochs_run"] = info.epochs_run;
    const auto count = model.parameter_count();
    doc["parameter_count"] = {
        {"attention", count.attention}, {"head", count.head}, {"total", count.total}};
    if (const auto *q = dynamic_cast<const QsannModel *>(&model)) {
        doc["observables"] = q->observables().labels();
    }
    doc["vocabulary"] = {{"tokens", std::vector<std::string>(vocabulary.tokens().begin(),
                                                             vocabulary.tokens().end())},
                         {"hash", vocabulary.hash()}};
    json params = json::array();
    for (const auto &block : model.parameters()) {
        params.push_back({{"name", block.name},
                          {"shape", block.shape},
                          {"dtype", "f64le"},
                          {"data", encode_doubles(block.values)}});
    }
    doc["parameters"] = std::move(params);

    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write checkpoint " + path.string());
    }
    out << doc.dump(1) << "\n";
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open checkpoint " + path.string());
    }
    try {
        const json doc = json::parse(in);
        if (doc.at("format") != kFormat) {
            throw ParseError("not a qsann checkpoint");
        }
        if (doc.at("schema_version").get<int>() != kCheckpointSchemaVersion) {
            throw ParseError("unsupported checkpoint schema version " +
                             doc.at("schema_version").dump());
        }
        LoadedCheckpoint out;
        out.info.config = config_from_json(doc.at("config"));
        out.info.config.validate();
        out.info.train_seed = doc.at("train_seed").get<std::uint64_t>();
        out.info.epochs_run = doc.at("epochs_run").get<int>();
        if (doc.at("model_kind").get<std::string>() != to_string(out.info.config.model)) {
            throw ParseError("model kind does not match the stored configuration");
        }

        out.vocabulary =
            Vocabulary::from_tokens(doc.at("vocabulary").at("tokens").get<std::vector<std::string>>());
        if (out.vocabulary.hash() != doc.at("vocabulary").at("hash").get<std::string>()) {
            throw ParseError("vocabulary hash does not match its token list");
        }

        const auto &cfg = out.info.config;
        if (cfg.model == ModelKind::Qsann) {
            std::vector<sim::PauliString> observables;
            for (const auto &label : doc.at("observables")) {
                observables.push_back(sim::PauliString::parse(label.get<std::string>()));
            }
            out.model = std::make_unique<QsannModel>(cfg.qsann, out.vocabulary.size(),
                                                     ObservableSet(std::move(observables)),
                                                     cfg.simulation);
        } else {
            out.model = make_model(cfg, out.vocabulary.size());
        }

        auto blocks = out.model->parameters();
        const auto &stored = doc.at("parameters");
        if (stored.size() != blocks.size()) {
            throw ParseError("checkpoint has " + std::to_string(stored.size()) +
                             " parameter blocks, model expects " + std::to_string(blocks.size()));
        }
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto &entry = stored[b];
            if (entry.at("name").get<std::string>() != blocks[b].name ||
                shape_of(entry.at("shape")) != blocks[b].shape ||
                entry.at("dtype").get<std::string>() != "f64le") {
                throw ParseError("parameter block " + std::to_string(b) + " (\"" +
                                 entry.at("name").get<std::string>() +
                                 "\") does not match the model layout");
            }
            const auto values = decode_doubles(entry.at("data").get<std::string>());
            if (values.size() != blocks[b].values.size()) {
                throw ParseError("parameter block \"" + blocks[b].name + "\" has " +
                                 std::to_string(values.size()) + " values, expected " +
                                 std::to_string(blocks[b].values.size()));
            }
            std::ranges::copy(values, blocks[b].values.begin());
        }
        return out;
    } catch (const json::exception &e) {
        throw ParseError("corrupt checkpoint " + path.string() + ": " + e.what());
    } catch (const ConfigError &e) {
        throw ParseError("corrupt checkpoint " + path.string() + ": " + e.what());
    } catch (const IndexError &e) {
        throw ParseError("corrupt checkpoint " + path.string() + ": " + e.what());
    }
}

} // namespace qsann::cli
