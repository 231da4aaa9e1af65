/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "memsyn/version.hpp"

namespace memsyn {

/// Reproducibility record written at the end of every CLI run. The embedded
/// config text is the fully resolved configuration; re-loading it reproduces
/// the run.
struct RunManifest {
    std::string subcommand;
    std::string config_text;
    std::vector<std::uint64_t> seeds;
    std::string artifact_version = kArtifactVersion;
    std::vector<std::string> outputs;
    double wall_clock_s = 0.0;
};

/// Write atomically: temp file in the target directory, then rename.
inline void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["subcommand"] = manifest.subcommand;
    j["config"] = manifest.config_text;
    j["seeds"] = manifest.seeds;
    j["artifact_version"] = manifest.artifact_version;
    j["outputs"] = manifest.outputs;
    j["wall_clock_s"] = manifest.wall_clock_s;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("manifest: cannot open " + tmp);
        out << j.dump(2) << "\n";
        if (!out) throw std::runtime_error("manifest: write failure on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("manifest: rename failed for " + path);
}

inline RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config_text = j.at("config").get<std::string>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_clock_s = j.at("wall_clock_s").get<double>();
    return m;
}

}  // namespace memsyn
