// figures.hpp
// Data behind each published figure, plus a matplotlib script that plots it.

#pragma once

#include <string>
#include <vector>

#include "homql/cli/output.hpp"

namespace homql::cli {

std::vector<std::string> figure_ids();

struct VisibilityMask {
    double r = 0.0;
    int max_n = 0;
    std::vector<std::vector<bool>> mask;  // row n-1, column m-1
    std::vector<std::vector<double>> value;
};

struct FigureData {
    std::string id;
    Table table;                      // distributions; empty for figS4
    std::vector<bool> lossless;       // per series: parity comb must hold
    std::vector<VisibilityMask> masks;  // figS4 only
    std::string title;
};

FigureData build_figure(const std::string& id);

// Normalization (1e-12) for every series, parity for lossless ones, and the
// 1/2 threshold for masks. Throws NormalizationError / LatticeError.
void validate_figure(const FigureData& fig);

std::string figure_csv(const FigureData& fig);
std::string plot_script(const FigureData& fig);

// Validates, then writes <dir>/<id>.csv, its manifest sidecar and
// <dir>/plot_<id>.py. Returns the written paths.
std::vector<std::string> write_figure(const FigureData& fig, const std::string& dir, Manifest manifest);

}  // namespace homql::cli
