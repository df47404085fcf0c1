#include "homql/cli/figures.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "homql/channels.hpp"
#include "homql/cli/commands.hpp"
#include "homql/cli/parallel.hpp"
#include "homql/closed_form.hpp"
#include "homql/metrics.hpp"

namespace homql::cli {

namespace {

const std::vector<std::string> kReflectivities = {"0.1", "0.2", "0.5", "0.9"};

struct Job {
    std::vector<std::pair<std::string, std::string>> params;
    std::function<Series(std::vector<std::pair<std::string, std::string>>)> run;
    bool lossless = true;
};

void run_jobs(FigureData& fig, std::vector<std::string> names, std::vector<Job> jobs) {
    fig.table.param_names = std::move(names);
    fig.table.series =
        parallel_map<Series>(jobs.size(), [&](std::size_t i) { return jobs[i].run(jobs[i].params); });
    for (const auto& j : jobs) {
        fig.lossless.push_back(j.lossless);
    }
}

// Pure inputs, exported over every integer so the comb is visible.
Job pure_job(int total, int delta, const std::string& r, bool tag_delta) {
    Job job;
    if (tag_delta) {
        job.params.emplace_back("delta", std::to_string(delta));
    }
    job.params.emplace_back("r", r);
    job.run = [=](auto params) {
        const auto d = closed_form::distribution(new_fock_pair(total, delta), BeamSplitter::parse(r));
        return make_series(std::move(params), d.to_marginal(), total);
    };
    return job;
}

Job mixed_job(int total, int delta, double eta, double loss, const std::string& r,
              std::vector<std::pair<std::string, std::string>> params) {
    Job job;
    job.params = std::move(params);
    job.lossless = eta == 1.0 && loss == 0.0;
    job.run = [=](auto p) {
        const auto pair = new_fock_pair(total, delta);
        auto joint = channels::mixed_distribution(channels::MixedFockSource(pair.mode_a(), eta),
                                                  channels::MixedFockSource(pair.mode_b(), eta),
                                                  BeamSplitter::parse(r));
        joint = channels::apply_detector_loss(joint, channels::Detector{1.0 - loss, 1});
        return make_series(std::move(p), delta_marginal(joint), total);
    };
    return job;
}

double joint_eta(int total, int delta, double purity) {
    if (purity == 1.0) {
        return 1.0;
    }
    const auto pair = new_fock_pair(total, delta);
    return channels::eta_for_joint_purity(pair.mode_a(), pair.mode_b(), purity);
}

FigureData walk_figure(const std::string& id, int total, int delta) {
    FigureData fig;
    fig.id = id;
    fig.title = "S=" + std::to_string(total) + ", Delta=" + std::to_string(delta);
    std::vector<Job> jobs;
    for (const auto& r : kReflectivities) {
        jobs.push_back(pure_job(total, delta, r, false));
    }
    run_jobs(fig, {"r"}, std::move(jobs));
    return fig;
}

FigureData purity_figure(const std::string& id, int total, const std::vector<int>& deltas, double purity) {
    FigureData fig;
    fig.id = id;
    std::ostringstream t;
    t << "S=" << total << ", purity " << purity;
    fig.title = t.str();
    std::vector<Job> jobs;
    for (int delta : deltas) {
        const double eta = joint_eta(total, delta, purity);
        for (const auto& r : kReflectivities) {
            jobs.push_back(mixed_job(total, delta, eta, 0.0, r, {{"delta", std::to_string(delta)}, {"r", r}}));
        }
    }
    run_jobs(fig, {"delta", "r"}, std::move(jobs));
    return fig;
}

FigureData decoherence_figure() {
    FigureData fig;
    fig.id = "fig3";
    fig.title = "S=50, N=25, r=1/2";
    std::vector<Job> jobs;
    for (const char* y : {"pi/24", "pi/6", "pi/3", "pi/2"}) {
        Job job;
        job.params = {{"y", y}};
        job.run = [y = std::string(y)](auto params) {
            const auto d = channels::decohere_distribution(50, 25, parse_angle(y), BeamSplitter::parse("1/2"));
            return make_series(std::move(params), d.to_marginal(), 50);
        };
        jobs.push_back(std::move(job));
    }
    run_jobs(fig, {"y"}, std::move(jobs));
    return fig;
}

FigureData loss_array_figure() {
    FigureData fig;
    fig.id = "figLossArray";
    fig.title = "S=10, purity x losses";
    std::vector<Job> jobs;
    for (int delta : {0, -4, -10}) {
        for (const char* loss : {"0", "0.1", "0.2"}) {
            for (const char* purity : {"0.21", "0.41", "0.83", "1.00"}) {
                const double eta = joint_eta(10, delta, std::stod(purity));
                for (const auto& r : kReflectivities) {
                    jobs.push_back(mixed_job(10, delta, eta, std::stod(loss), r,
                                             {{"delta", std::to_string(delta)},
                                              {"loss", loss},
                                              {"purity", purity},
                                              {"r", r}}));
                }
            }
        }
    }
    run_jobs(fig, {"delta", "loss", "purity", "r"}, std::move(jobs));
    return fig;
}

FigureData visibility_figure() {
    FigureData fig;
    fig.id = "figS4";
    fig.title = "v2 > 1/2";
    for (double r : {0.36, 0.43, 0.39, 0.45, 0.5}) {
        for (int max_n : {10, 50}) {
            if (max_n == 50 && r != 0.5) {
                continue;
            }
            VisibilityMask m;
            m.r = r;
            m.max_n = max_n;
            m.mask = metrics::nonclassical_mask(max_n, r);
            m.value.assign(max_n, std::vector<double>(max_n));
            for (int n = 1; n <= max_n; ++n) {
                for (int k = 1; k <= max_n; ++k) {
                    m.value[n - 1][k - 1] = metrics::visibility_fock(n, k, r).value;
                }
            }
            fig.masks.push_back(std::move(m));
        }
    }
    return fig;
}

std::string python_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? ", \"" : "\"") + items[i] + "\"";
    }
    return out + "]";
}

const char* kCurveScript = R"PY(#!/usr/bin/env python3
import csv
import os
from collections import OrderedDict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = "@ID@.csv"
PANEL_KEYS = @PANELS@
CURVE_KEY = "@CURVE@"
COLORS = {"0.1": "green", "0.2": "red", "0.5": "blue", "0.9": "gray"}

with open(os.path.join(HERE, DATA)) as f:
    rows = list(csv.DictReader(f))

panels = OrderedDict()
for row in rows:
    panel = tuple(row[k] for k in PANEL_KEYS)
    curve = row[CURVE_KEY]
    xs, ys = panels.setdefault(panel, OrderedDict()).setdefault(curve, ([], []))
    xs.append(int(row["delta_out"]))
    ys.append(float(row["probability"]))

ncols = min(4, len(panels))
nrows = (len(panels) + ncols - 1) // ncols
fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.4 * nrows), squeeze=False)
for ax in axes.flat[len(panels):]:
    ax.axis("off")
for ax, (panel, curves) in zip(axes.flat, panels.items()):
    for curve, (xs, ys) in curves.items():
        ax.plot(xs, ys, marker=".", lw=0.8, color=COLORS.get(curve), label=CURVE_KEY + "=" + curve)
    ax.set_title(", ".join(k + "=" + v for k, v in zip(PANEL_KEYS, panel)) or "@TITLE@", fontsize=8)
    ax.set_xlabel("delta_out")
    ax.set_ylabel("probability")
    ax.legend(fontsize=6)
if len(panels) > 1:
    fig.suptitle("@TITLE@")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "@ID@.png"), dpi=150)
)PY";

const char* kMaskScript = R"PY(#!/usr/bin/env python3
import csv
import os
from collections import OrderedDict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = "@ID@.csv"

with open(os.path.join(HERE, DATA)) as f:
    rows = list(csv.DictReader(f))

grids = OrderedDict()
for row in rows:
    key = (row["r"], int(row["max_n"]))
    n, m = int(row["n"]), int(row["m"])
    grid = grids.setdefault(key, np.zeros((key[1], key[1])))
    grid[n - 1, m - 1] = int(row["nonclassical"])

fig, axes = plt.subplots(3, 2, figsize=(6, 9), squeeze=False)
for ax in axes.flat[len(grids):]:
    ax.axis("off")
for ax, ((r, size), grid) in zip(axes.flat, grids.items()):
    ax.imshow(grid, origin="lower", extent=(0.5, size + 0.5, 0.5, size + 0.5), cmap="Greys")
    ax.set_title("r=" + r + ", n,m<=" + str(size), fontsize=8)
    ax.set_xlabel("m")
    ax.set_ylabel("n")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "@ID@.png"), dpi=150)
)PY";

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig2a", "fig2b", "fig2c", "fig3", "figS1a", "figS1b", "figS1c", "figS2", "figS3", "figS4",
            "figLossArray"};
}

FigureData build_figure(const std::string& id) {
    if (id == "fig2a") return walk_figure(id, 50, 0);
    if (id == "fig2b") return walk_figure(id, 50, -30);
    if (id == "fig2c") return walk_figure(id, 50, -50);
    if (id == "figS1a") return walk_figure(id, 10, 0);
    if (id == "figS1b") return walk_figure(id, 10, -4);
    if (id == "figS1c") return walk_figure(id, 10, -10);
    if (id == "fig3") return decoherence_figure();
    if (id == "figS2") return purity_figure(id, 10, {0, -4, -10}, 0.83);
    if (id == "figS3") return purity_figure(id, 50, {0, -30, -50}, 0.47);
    if (id == "figS4") return visibility_figure();
    if (id == "figLossArray") return loss_array_figure();
    throw DomainError("unknown figure '" + id + "'");
}

void validate_figure(const FigureData& fig) {
    for (std::size_t i = 0; i < fig.table.series.size(); ++i) {
        const auto& s = fig.table.series[i];
        long double sum = 0.0L;
        DeltaMarginal m;
        for (std::size_t k = 0; k < s.lattice.size(); ++k) {
            if (!(s.probs[k] >= 0.0)) {
                throw NormalizationError(fig.id + ": negative probability");
            }
            sum += s.probs[k];
            m[s.lattice[k]] = s.probs[k];
        }
        if (std::abs(static_cast<double>(sum) - 1.0) > 1e-12) {
            throw NormalizationError(fig.id + ": series " + std::to_string(i) + " is not normalized");
        }
        const int total = s.lattice.empty() ? 0 : s.lattice.back();
        if (fig.lossless[i] && metrics::parity_violation(m, total) > 1e-12) {
            throw LatticeError(fig.id + ": series " + std::to_string(i) + " breaks the parity comb");
        }
    }
    for (const auto& mask : fig.masks) {
        for (int n = 0; n < mask.max_n; ++n) {
            for (int m = 0; m < mask.max_n; ++m) {
                if (mask.mask[n][m] != (mask.value[n][m] > 0.5)) {
                    throw DomainError(fig.id + ": mask disagrees with the visibility threshold");
                }
            }
        }
    }
}

std::string figure_csv(const FigureData& fig) {
    if (fig.masks.empty()) {
        return to_csv(fig.table);
    }
    std::ostringstream out;
    out << "r,max_n,n,m,visibility,nonclassical\n";
    for (const auto& mask : fig.masks) {
        for (int n = 1; n <= mask.max_n; ++n) {
            for (int m = 1; m <= mask.max_n; ++m) {
                out << format_double(mask.r) << ',' << mask.max_n << ',' << n << ',' << m << ','
                    << format_double(mask.value[n - 1][m - 1]) << ',' << (mask.mask[n - 1][m - 1] ? 1 : 0)
                    << '\n';
            }
        }
    }
    return out.str();
}

std::string plot_script(const FigureData& fig) {
    std::string script;
    if (!fig.masks.empty()) {
        script = kMaskScript;
    } else {
        script = kCurveScript;
        std::vector<std::string> panels(fig.table.param_names.begin(), fig.table.param_names.end() - 1);
        replace_all(script, "@PANELS@", python_list(panels));
        replace_all(script, "@CURVE@", fig.table.param_names.back());
    }
    replace_all(script, "@ID@", fig.id);
    replace_all(script, "@TITLE@", fig.title);
    return script;
}

std::vector<std::string> write_figure(const FigureData& fig, const std::string& dir, Manifest manifest) {
    validate_figure(fig);
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    const std::string csv_path = (base / (fig.id + ".csv")).string();
    const std::string script_path = (base / ("plot_" + fig.id + ".py")).string();
    const std::string csv = figure_csv(fig);
    {
        std::ofstream f(csv_path);
        if (!f) {
            throw DomainError("cannot write '" + csv_path + "'");
        }
        f << csv;
    }
    manifest.content_hash = content_hash(csv);
    {
        std::ofstream f(csv_path + ".manifest.json");
        f << manifest.to_json().dump(2) << '\n';
    }
    {
        std::ofstream f(script_path);
        if (!f) {
            throw DomainError("cannot write '" + script_path + "'");
        }
        f << plot_script(fig);
    }
    std::filesystem::permissions(script_path, std::filesystem::perms::owner_exec, std::filesystem::perm_options::add);
    return {csv_path, csv_path + ".manifest.json", script_path};
}

}  // namespace homql::cli
