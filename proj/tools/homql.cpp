// homql: distributions, sweeps, self-checks and figure data for the
// multiphoton HOM quantum leap.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homql/cli/checks.hpp"
#include "homql/cli/commands.hpp"
#include "homql/cli/config.hpp"
#include "homql/cli/figures.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInvalid = 2;

std::string join(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) {
            out += ' ';
        }
        out += a;
    }
    return out;
}

homql::cli::Manifest manifest_for(const std::vector<std::string>& args,
                                   std::vector<std::pair<std::string, std::string>> params, bool exact) {
    homql::cli::Manifest m;
    m.command_line = join(args);
    m.parameters = std::move(params);
    m.numeric_mode = exact ? "exact" : "float";
    m.timestamp = homql::cli::current_timestamp();
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        args = homql::cli::expand_config(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }

    CLI::App app{"Multiphoton Hong-Ou-Mandel quantum leap simulator"};
    app.set_version_flag("--version", std::string(homql::cli::kVersion));
    app.require_subcommand(1);
    app.add_option("--config", "key=value file; command-line flags win");

    std::string format_text = "csv";
    std::string out_path;
    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default: stdout)");
    };

    homql::cli::DistOptions dist;
    auto* dist_cmd = app.add_subcommand("dist", "Delta_out distribution for one input pair");
    dist_cmd->add_option("--s", dist.total, "total photon number S")->required();
    dist_cmd->add_option("--delta", dist.delta, "input population difference Delta")->required();
    dist_cmd->add_option("--r", dist.reflectivity, "reflectivity, decimal or fraction")->required();
    dist_cmd->add_flag("--exact", dist.exact, "exact rational arithmetic");
    add_io(dist_cmd);

    homql::cli::SweepOptions sweep;
    std::string sweep_param = "r";
    std::string rotated = "A";
    auto* sweep_cmd = app.add_subcommand("sweep", "distributions over a parameter grid");
    sweep_cmd->add_option("--param", sweep_param, "r, y, eta or eta_det")
        ->check(CLI::IsMember({"r", "y", "eta", "eta_det"}));
    sweep_cmd->add_option("--grid", sweep.grid, "grid values (comma separated)")->delimiter(',')->required();
    sweep_cmd->add_option("--s", sweep.total, "total photon number S");
    sweep_cmd->add_option("--delta", sweep.delta, "input population difference Delta");
    sweep_cmd->add_option("--n", sweep.n, "photons in beam B for y sweeps (default S/2)");
    sweep_cmd->add_option("--r", sweep.reflectivity, "fixed reflectivity");
    sweep_cmd->add_option("--eta", sweep.eta, "source survival probability");
    sweep_cmd->add_option("--eta-det", sweep.eta_det, "detector efficiency");
    sweep_cmd->add_option("--rotated", rotated, "beam carrying the rotated polarization: A or B")
        ->check(CLI::IsMember({"A", "B"}));
    sweep_cmd->add_flag("--exact", sweep.exact, "exact rational arithmetic");
    add_io(sweep_cmd);

    std::vector<std::string> suites;
    auto* check_cmd = app.add_subcommand("check", "run verification suites; exit 1 on failure");
    check_cmd->add_option("suite", suites, "oracle, parity, moments, visibility, decoherence (default: all)")
        ->check(CLI::IsMember({"oracle", "parity", "moments", "visibility", "decoherence"}));
    check_cmd->add_option("--out", out_path, "write the JSON report here");

    std::vector<std::string> figures;
    std::string out_dir = ".";
    auto* figure_cmd = app.add_subcommand("figure", "figure data (CSV) and a plot script");
    figure_cmd->add_option("id", figures, "figure id(s), or 'all'")->required();
    figure_cmd->add_option("--out-dir", out_dir, "directory for the CSV and script");

    try {
        std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        const auto format = homql::cli::parse_format(format_text);
        if (*dist_cmd) {
            const auto table = homql::cli::dist_table(dist);
            homql::cli::emit(table,
                             manifest_for(args,
                                          {{"s", std::to_string(dist.total)},
                                           {"delta", std::to_string(dist.delta)},
                                           {"r", dist.reflectivity}},
                                          dist.exact),
                             format, out_path, std::cout);
            return kOk;
        }
        if (*sweep_cmd) {
            sweep.parameter = homql::cli::parse_sweep_parameter(sweep_param);
            sweep.rotated = rotated == "B" ? homql::channels::RotatedBeam::B : homql::channels::RotatedBeam::A;
            const auto table = homql::cli::sweep_table(sweep);
            std::ostringstream det;
            det << sweep.eta_det;
            homql::cli::emit(table,
                             manifest_for(args,
                                          {{"param", sweep_param},
                                           {"grid", join(sweep.grid)},
                                           {"s", std::to_string(sweep.total)},
                                           {"delta", std::to_string(sweep.delta)},
                                           {"n", std::to_string(sweep.n)},
                                           {"r", sweep.reflectivity},
                                           {"eta", sweep.eta},
                                           {"eta_det", det.str()},
                                           {"rotated", rotated}},
                                          sweep.exact),
                             format, out_path, std::cout);
            return kOk;
        }
        if (*check_cmd) {
            std::vector<homql::cli::Suite> run;
            for (const auto& s : suites) {
                run.push_back(homql::cli::parse_suite(s));
            }
            if (run.empty()) {
                run = homql::cli::all_suites();
            }
            nlohmann::ordered_json report;
            report["version"] = homql::cli::kVersion;
            auto arr = nlohmann::ordered_json::array();
            bool ok = true;
            for (auto s : run) {
                const auto rep = homql::cli::run_suite(s);
                ok = ok && rep.passed();
                arr.push_back(rep.to_json());
                std::cerr << (rep.passed() ? "PASS " : "FAIL ") << homql::cli::suite_name(s) << '\n';
            }
            report["passed"] = ok;
            report["suites"] = std::move(arr);
            const std::string text = report.dump(2) + "\n";
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(out_path);
                f << text;
            }
            return ok ? kOk : kCheckFailed;
        }
        if (*figure_cmd) {
            if (figures.size() == 1 && figures.front() == "all") {
                figures = homql::cli::figure_ids();
            }
            for (const auto& id : figures) {
                const auto fig = homql::cli::build_figure(id);
                for (const auto& path :
                     homql::cli::write_figure(fig, out_dir, manifest_for(args, {{"id", id}}, false))) {
                    std::cout << path << '\n';
                }
            }
            return kOk;
        }
    } catch (const homql::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid number (" << e.what() << ")\n";
        return kInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: number out of range (" << e.what() << ")\n";
        return kInvalid;
    }
    return kInvalid;
}
