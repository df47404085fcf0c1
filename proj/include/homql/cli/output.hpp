// output.hpp
// Tabular results and their CSV / JSON serializations, plus the run manifest
// recorded next to every output.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "homql/core_state.hpp"

namespace homql::cli {

inline constexpr const char* kVersion = "0.1.0";

// One distribution, tagged by the parameter values that produced it.
struct Series {
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<int> lattice;
    std::vector<double> probs;
    std::optional<std::vector<std::string>> exact;
    double mean = 0.0;
    double variance = 0.0;
};

struct Table {
    std::vector<std::string> param_names;
    std::vector<Series> series;
    bool with_moments = true;
};

Series make_series(std::vector<std::pair<std::string, std::string>> params, const DeltaDistribution& d);
// Dense over every integer in [-S, S] so lossy runs keep a fixed row set.
Series make_series(std::vector<std::pair<std::string, std::string>> params, const DeltaMarginal& m,
                   int total);

// %.17g
std::string format_double(double x);

std::string to_csv(const Table& table);

struct Manifest {
    std::string command_line;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::string numeric_mode = "float";
    std::string version = kVersion;
    std::string content_hash;
    std::string timestamp;

    nlohmann::ordered_json to_json() const;
};

std::string current_timestamp();

// 64-bit FNV-1a, hex encoded with a scheme prefix.
std::string content_hash(std::string_view payload);

nlohmann::ordered_json payload_json(const Table& table);
// {manifest, lattice, series[]}; fills manifest.content_hash from the payload.
std::string to_json(const Table& table, Manifest manifest);

}  // namespace homql::cli
