#include "homql/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "homql/closed_form.hpp"
#include "homql/cli/parallel.hpp"

namespace homql::cli {

Format parse_format(const std::string& text) {
    if (text == "csv") {
        return Format::Csv;
    }
    if (text == "json") {
        return Format::Json;
    }
    throw DomainError("unknown format '" + text + "' (expected csv or json)");
}

Table dist_table(const DistOptions& opts) {
    const auto pair = new_fock_pair(opts.total, opts.delta);
    const auto bs = BeamSplitter::parse(opts.reflectivity);
    const auto mode = opts.exact ? NumericMode::exact() : NumericMode::floating();
    Table table;
    table.with_moments = false;
    table.series.push_back(make_series({}, closed_form::distribution(pair, bs, mode)));
    return table;
}

SweepParameter parse_sweep_parameter(const std::string& text) {
    if (text == "r") {
        return SweepParameter::Reflectivity;
    }
    if (text == "y") {
        return SweepParameter::Distinguishability;
    }
    if (text == "eta") {
        return SweepParameter::SourceEta;
    }
    if (text == "eta_det") {
        return SweepParameter::DetectorEta;
    }
    throw DomainError("unknown sweep parameter '" + text + "' (expected r, y, eta or eta_det)");
}

std::string sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::Reflectivity: return "r";
        case SweepParameter::Distinguishability: return "y";
        case SweepParameter::SourceEta: return "eta";
        case SweepParameter::DetectorEta: return "eta_det";
    }
    return "?";
}

channels::DistinguishabilityAngle parse_angle(const std::string& text) {
    const auto pos = text.find("pi");
    if (pos == std::string::npos) {
        return channels::DistinguishabilityAngle::from_radians(std::stod(text));
    }
    // [a]pi[/b]
    const std::string head = text.substr(0, pos);
    const std::string tail = text.substr(pos + 2);
    long num = head.empty() ? 1 : std::stol(head);
    long den = 1;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw DomainError("cannot parse angle '" + text + "'");
        }
        den = std::stol(tail.substr(1));
    }
    if (den <= 0 || num < 0) {
        throw DomainError("cannot parse angle '" + text + "'");
    }
    const double y = std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    // cos^2 of multiples of pi/6, pi/4 with y in [0, pi/2].
    Rational frac(num, den);
    frac.canonicalize();
    if (frac == 0) {
        return channels::DistinguishabilityAngle::from_cos_squared(1);
    }
    if (frac == Rational(1, 2)) {
        return channels::DistinguishabilityAngle::from_cos_squared(0);
    }
    if (frac == Rational(1, 6)) {
        return channels::DistinguishabilityAngle::from_cos_squared(Rational(3, 4));
    }
    if (frac == Rational(1, 4)) {
        return channels::DistinguishabilityAngle::from_cos_squared(Rational(1, 2));
    }
    if (frac == Rational(1, 3)) {
        return channels::DistinguishabilityAngle::from_cos_squared(Rational(1, 4));
    }
    return channels::DistinguishabilityAngle::from_radians(y);
}

namespace {

NumericMode mode_of(bool exact) { return exact ? NumericMode::exact() : NumericMode::floating(); }

JointCountDistribution pure_joint(const FockPair& pair, const BeamSplitter& bs) {
    const auto d = closed_form::distribution(pair, bs);
    std::map<CountPair, double> entries;
    for (int x : delta_lattice(pair.total())) {
        const int p = (pair.total() + x) / 2;
        entries[{p, pair.total() - p}] = d.at(x);
    }
    return JointCountDistribution(std::move(entries));
}

Series sweep_point(const SweepOptions& opts, const std::string& value) {
    const std::string name = sweep_parameter_name(opts.parameter);
    const auto mode = mode_of(opts.exact);
    switch (opts.parameter) {
        case SweepParameter::Reflectivity: {
            const auto pair = new_fock_pair(opts.total, opts.delta);
            return make_series({{name, value}},
                               closed_form::distribution(pair, BeamSplitter::parse(value), mode));
        }
        case SweepParameter::Distinguishability: {
            const int n = opts.n < 0 ? opts.total / 2 : opts.n;
            return make_series({{name, value}},
                               channels::decohere_distribution(opts.total, n, parse_angle(value),
                                                               BeamSplitter::parse(opts.reflectivity),
                                                               mode, opts.rotated));
        }
        case SweepParameter::SourceEta:
        case SweepParameter::DetectorEta: {
            const auto pair = new_fock_pair(opts.total, opts.delta);
            const auto bs = BeamSplitter::parse(opts.reflectivity);
            const bool sweep_source = opts.parameter == SweepParameter::SourceEta;
            const std::string eta_text = sweep_source ? value : opts.eta;
            const double det_eta = sweep_source ? opts.eta_det : std::stod(value);
            if (opts.exact && det_eta != 1.0) {
                throw ModeError("detector loss is evaluated in float mode only");
            }
            JointCountDistribution joint;
            if (opts.exact) {
                const Rational eta = parse_rational(eta_text);
                joint = channels::mixed_distribution(channels::MixedFockSource(pair.mode_a(), eta),
                                                     channels::MixedFockSource(pair.mode_b(), eta), bs,
                                                     mode);
            } else {
                const double eta = std::stod(eta_text);
                joint = eta == 1.0 ? pure_joint(pair, bs)
                                   : channels::mixed_distribution(
                                         channels::MixedFockSource(pair.mode_a(), eta),
                                         channels::MixedFockSource(pair.mode_b(), eta), bs, mode);
            }
            joint = channels::apply_detector_loss(joint, channels::Detector{det_eta, 1});
            if (joint.has_exact()) {
                Series s = make_series({{name, value}}, delta_marginal(joint), pair.total());
                const auto ex = exact_delta_marginal(joint);
                std::vector<std::string> exact;
                for (int d : s.lattice) {
                    auto it = ex.find(d);
                    exact.push_back(it == ex.end() ? "0" : it->second.get_str());
                }
                s.exact = std::move(exact);
                return s;
            }
            return make_series({{name, value}}, delta_marginal(joint), pair.total());
        }
    }
    throw DomainError("unhandled sweep parameter");
}

}  // namespace

Table sweep_table(const SweepOptions& opts) {
    if (opts.grid.empty()) {
        throw DomainError("sweep grid is empty");
    }
    Table table;
    table.param_names = {sweep_parameter_name(opts.parameter)};
    table.series = parallel_map<Series>(opts.grid.size(),
                                        [&](std::size_t i) { return sweep_point(opts, opts.grid[i]); });
    return table;
}

void emit(const Table& table, Manifest manifest, Format format, const std::string& out_path,
          std::ostream& out) {
    if (format == Format::Json) {
        const std::string text = to_json(table, std::move(manifest));
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream f(out_path);
            if (!f) {
                throw DomainError("cannot write '" + out_path + "'");
            }
            f << text;
        }
        return;
    }
    const std::string text = to_csv(table);
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) {
        throw DomainError("cannot write '" + out_path + "'");
    }
    f << text;
    manifest.content_hash = content_hash(text);
    std::ofstream side(out_path + ".manifest.json");
    side << manifest.to_json().dump(2) << '\n';
}

}  // namespace homql::cli
