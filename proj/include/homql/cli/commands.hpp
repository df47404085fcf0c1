// commands.hpp
// The dist and sweep subcommands as plain functions: options in, table out.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "homql/channels.hpp"
#include "homql/cli/output.hpp"

namespace homql::cli {

enum class Format { Csv, Json };

Format parse_format(const std::string& text);

struct DistOptions {
    int total = 2;
    int delta = 0;
    std::string reflectivity = "0.5";
    bool exact = false;
};

Table dist_table(const DistOptions& opts);

enum class SweepParameter { Reflectivity, Distinguishability, SourceEta, DetectorEta };

SweepParameter parse_sweep_parameter(const std::string& text);
std::string sweep_parameter_name(SweepParameter p);

struct SweepOptions {
    SweepParameter parameter = SweepParameter::Reflectivity;
    std::vector<std::string> grid;
    int total = 10;
    int delta = 0;     // r, eta and eta_det sweeps
    int n = -1;        // y sweeps: photons in beam B; defaults to S/2
    std::string reflectivity = "0.5";
    std::string y = "0";
    std::string eta = "1";
    double eta_det = 1.0;
    channels::RotatedBeam rotated = channels::RotatedBeam::A;
    bool exact = false;
};

Table sweep_table(const SweepOptions& opts);

// Angles as radians or multiples of pi ("pi/6", "2pi/3", "pi"). Common angles
// carry an exact cos^2 y.
channels::DistinguishabilityAngle parse_angle(const std::string& text);

// Writes the table in the requested format to out_path (or the stream when
// empty). CSV files get a sidecar <out>.manifest.json.
void emit(const Table& table, Manifest manifest, Format format, const std::string& out_path,
          std::ostream& out);

}  // namespace homql::cli
