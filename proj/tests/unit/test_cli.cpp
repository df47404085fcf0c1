#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "homql/cli/checks.hpp"
#include "homql/cli/commands.hpp"
#include "homql/cli/config.hpp"
#include "homql/cli/figures.hpp"
#include "homql/cli/output.hpp"
#include "homql/cli/parallel.hpp"

using namespace homql;
using namespace homql::cli;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("dist table for the HOM pair") {
    const auto csv = to_csv(dist_table({2, 0, "0.5", false}));
    CHECK(lines_of(csv) == std::vector<std::string>{"delta_out,probability", "-2,0.5", "0,0", "2,0.5"});
    CHECK_THROWS_AS(dist_table({3, 0, "0.5", false}), ParityMismatch);
    CHECK_THROWS_AS(dist_table({2, 0, "1.5", false}), RangeError);
}

TEST_CASE("exact dist carries rationals") {
    const auto table = dist_table({3, 1, "1/5", true});
    const auto lines = lines_of(to_csv(table));
    CHECK(lines.front() == "delta_out,probability,exact");
    CHECK(lines[2] == "-1,0.39199999999999996,49/125");
}

TEST_CASE("floats round-trip through the CSV") {
    const auto table = dist_table({9, 3, "0.37", false});
    const auto lines = lines_of(to_csv(table));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        CHECK(std::stod(lines[i].substr(comma + 1)) == table.series[0].probs[i - 1]);
    }
}

TEST_CASE("sweeps over each parameter") {
    SweepOptions r;
    r.parameter = SweepParameter::Reflectivity;
    r.grid = {"0.1", "0.2", "0.5", "0.9"};
    r.total = 50;
    r.delta = -30;
    const auto t = sweep_table(r);
    REQUIRE(t.series.size() == 4);
    const auto lines = lines_of(to_csv(t));
    CHECK(lines.front() == "r,delta_out,probability,mean,variance");
    CHECK(lines.size() == 1 + 4 * 51);
    CHECK(lines[1].rfind("0.1,-50,", 0) == 0);
    CHECK(t.series[1].mean == doctest::Approx(-18.0));

    SweepOptions y;
    y.parameter = SweepParameter::Distinguishability;
    y.grid = {"pi/24", "pi/6", "pi/3", "pi/2"};
    y.total = 50;
    CHECK(sweep_table(y).series.size() == 4);

    SweepOptions det;
    det.parameter = SweepParameter::DetectorEta;
    det.grid = {"1.0", "0.9", "0.8"};
    det.total = 10;
    const auto losses = sweep_table(det);
    REQUIRE(losses.series.size() == 3);
    CHECK(losses.series[0].lattice.size() == 21);
    double odd = 0.0;
    for (std::size_t i = 0; i < 21; ++i) {
        if (losses.series[2].lattice[i] % 2 != 0) {
            odd += losses.series[2].probs[i];
        }
    }
    CHECK(odd > 0.0);

    SweepOptions eta;
    eta.parameter = SweepParameter::SourceEta;
    eta.grid = {"1", "1/2"};
    eta.total = 2;
    eta.exact = true;
    const auto mixed = sweep_table(eta);
    REQUIRE(mixed.series[1].exact);
    CHECK((*mixed.series[1].exact)[1] == "1/4");  // delta_out = -1

    SweepOptions bad = r;
    bad.grid = {"0.1", "1.3"};
    CHECK_THROWS_AS(sweep_table(bad), RangeError);
    bad.grid = {};
    CHECK_THROWS_AS(sweep_table(bad), DomainError);
    CHECK_THROWS_AS(parse_sweep_parameter("theta"), DomainError);
}

TEST_CASE("sweep output is independent of the worker count") {
    SweepOptions opts;
    opts.grid = {"0.05", "0.15", "0.25", "0.35", "0.45", "0.55", "0.65", "0.75"};
    opts.total = 40;
    opts.delta = -8;
    setenv(kWorkerEnv, "1", 1);
    const auto serial = to_csv(sweep_table(opts));
    setenv(kWorkerEnv, "4", 1);
    const auto parallel = to_csv(sweep_table(opts));
    unsetenv(kWorkerEnv);
    CHECK(serial == parallel);
    CHECK(content_hash(serial) == content_hash(parallel));
}

TEST_CASE("worker pool") {
    setenv(kWorkerEnv, "3", 1);
    CHECK(worker_count(10) == 3);
    CHECK(worker_count(2) == 2);
    unsetenv(kWorkerEnv);
    const auto squares = parallel_map<int>(50, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(squares[i] == static_cast<int>(i * i));
    }
    CHECK_THROWS_AS(parallel_map<int>(5, [](std::size_t i) -> int {
                        if (i == 3) {
                            throw RangeError("boom");
                        }
                        return 0;
                    }),
                    RangeError);
}

TEST_CASE("angles") {
    CHECK(parse_angle("pi/2").exact_cos_squared() == Rational(0));
    CHECK(parse_angle("pi/6").exact_cos_squared() == Rational(3, 4));
    CHECK(parse_angle("pi/3").exact_cos_squared() == Rational(1, 4));
    CHECK(parse_angle("pi/24").radians() == doctest::Approx(std::numbers::pi / 24));
    CHECK(parse_angle("0.25").radians() == 0.25);
    CHECK_THROWS_AS(parse_angle("pi*2"), DomainError);
    CHECK_THROWS_AS(parse_angle("pi"), RangeError);
}

TEST_CASE("json envelope and manifest") {
    const auto table = dist_table({2, 0, "1/2", true});
    Manifest m;
    m.command_line = "homql dist --s 2 --delta 0 --r 1/2 --exact";
    m.parameters = {{"s", "2"}};
    m.numeric_mode = "exact";
    m.timestamp = "2000-01-01T00:00:00Z";
    const auto j = nlohmann::json::parse(to_json(table, m));
    CHECK(j["lattice"] == nlohmann::json::array({-2, 0, 2}));
    CHECK(j["series"][0]["exact"][0] == "1/2");
    CHECK(j["manifest"]["version"] == kVersion);
    CHECK(j["manifest"]["numeric_mode"] == "exact");
    CHECK(j["manifest"]["content_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);

    Manifest later = m;
    later.timestamp = "2030-06-01T12:00:00Z";
    const auto a = nlohmann::json::parse(to_json(table, m));
    const auto b = nlohmann::json::parse(to_json(table, later));
    CHECK(a["manifest"]["content_hash"] == b["manifest"]["content_hash"]);
    CHECK(a["series"] == b["series"]);
}

TEST_CASE("content hash") {
    CHECK(content_hash("") == "fnv1a64:cbf29ce484222325");
    CHECK(content_hash("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("csv files get a manifest sidecar") {
    const auto dir = std::filesystem::temp_directory_path() / "homql_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "hom.csv").string();
    std::ostringstream sink;
    emit(dist_table({2, 0, "0.5", false}), Manifest{}, Format::Csv, path, sink);
    CHECK(sink.str().empty());
    std::ifstream side(path + ".manifest.json");
    const auto j = nlohmann::json::parse(side);
    std::ifstream csv(path);
    std::stringstream body;
    body << csv.rdbuf();
    CHECK(j["content_hash"] == content_hash(body.str()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("config files") {
    std::istringstream in("# comment\n\n s = 10 \ndelta=-4\nr=1/5\n");
    const auto cfg = read_config(in);
    CHECK(cfg.at("s") == "10");
    CHECK(cfg.at("delta") == "-4");
    const auto merged = merge_config({"homql", "dist", "--s", "12"}, cfg);
    CHECK(merged == std::vector<std::string>{"homql", "dist", "--delta=-4", "--r=1/5", "--s", "12"});
    std::istringstream broken("novalue\n");
    CHECK_THROWS_AS(read_config(broken), DomainError);
    CHECK_THROWS_AS(read_config_file("/nonexistent/homql.cfg"), DomainError);

    const auto path = std::filesystem::temp_directory_path() / "homql_test.cfg";
    {
        std::ofstream f(path);
        f << "s=4\nr=0.5\n";
    }
    const auto expanded = expand_config({"homql", "dist", "--config", path.string(), "--delta", "2"});
    CHECK(expanded == std::vector<std::string>{"homql", "dist", "--r=0.5", "--s=4", "--delta", "2"});
    std::filesystem::remove(path);
}

TEST_CASE("figures build and validate") {
    for (const auto& id : figure_ids()) {
        const auto fig = build_figure(id);
        CHECK_NOTHROW(validate_figure(fig));
        const auto script = plot_script(fig);
        CHECK(script.find(id + ".csv") != std::string::npos);
        CHECK(script.find("matplotlib") != std::string::npos);
    }
    CHECK_THROWS_AS(build_figure("fig9"), DomainError);
    CHECK(build_figure("figLossArray").table.series.size() == 3 * 3 * 4 * 4);
    CHECK(build_figure("figS4").masks.size() == 6);
}

TEST_CASE("figure validation rejects broken data") {
    auto fig = build_figure("figS1a");
    fig.table.series[0].probs[0] += 1e-6;
    CHECK_THROWS_AS(validate_figure(fig), NormalizationError);

    auto comb = build_figure("figS1a");
    auto& s = comb.table.series[2];
    s.probs[1] += 1e-3;  // an odd site
    s.probs[0] -= 1e-3;
    CHECK_THROWS_AS(validate_figure(comb), LatticeError);
}

TEST_CASE("check suites report machine-readable results") {
    const auto rep = run_suite(Suite::Visibility);
    CHECK(rep.passed());
    const auto j = rep.to_json();
    CHECK(j["suite"] == "visibility");
    CHECK(j["checks"].size() == rep.results.size());
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("max_deviation"));
    }
    CHECK(parse_suite("oracle") == Suite::Oracle);
    CHECK_THROWS_AS(parse_suite("speed"), DomainError);
}
