#include "homql/cli/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "homql/metrics.hpp"

namespace homql::cli {

Series make_series(std::vector<std::pair<std::string, std::string>> params, const DeltaDistribution& d) {
    Series s;
    s.params = std::move(params);
    s.lattice = delta_lattice(d.total());
    s.probs = d.probs();
    if (d.has_exact()) {
        std::vector<std::string> ex;
        ex.reserve(d.exact().size());
        for (const auto& q : d.exact()) {
            ex.push_back(q.get_str());
        }
        s.exact = std::move(ex);
    }
    s.mean = metrics::mean_delta(d);
    s.variance = metrics::variance_delta(d);
    return s;
}

Series make_series(std::vector<std::pair<std::string, std::string>> params, const DeltaMarginal& m,
                   int total) {
    Series s;
    s.params = std::move(params);
    for (int d = -total; d <= total; ++d) {
        s.lattice.push_back(d);
        auto it = m.find(d);
        s.probs.push_back(it == m.end() ? 0.0 : it->second);
    }
    s.mean = metrics::mean_delta(m);
    s.variance = metrics::variance_delta(m);
    return s;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const Table& table) {
    const bool exact = !table.series.empty() && table.series.front().exact.has_value();
    std::ostringstream out;
    for (const auto& name : table.param_names) {
        out << name << ',';
    }
    out << "delta_out,probability";
    if (exact) {
        out << ",exact";
    }
    if (table.with_moments) {
        out << ",mean,variance";
    }
    out << '\n';
    for (const auto& s : table.series) {
        for (std::size_t i = 0; i < s.lattice.size(); ++i) {
            for (const auto& [name, value] : s.params) {
                out << value << ',';
            }
            out << s.lattice[i] << ',' << format_double(s.probs[i]);
            if (exact) {
                out << ',' << (*s.exact)[i];
            }
            if (table.with_moments) {
                out << ',' << format_double(s.mean) << ',' << format_double(s.variance);
            }
            out << '\n';
        }
    }
    return out.str();
}

nlohmann::ordered_json Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["command_line"] = command_line;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) {
        params[k] = v;
    }
    j["parameters"] = params;
    j["numeric_mode"] = numeric_mode;
    j["version"] = version;
    j["content_hash"] = content_hash;
    j["timestamp"] = timestamp;
    return j;
}

std::string current_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string content_hash(std::string_view payload) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::ordered_json payload_json(const Table& table) {
    nlohmann::ordered_json j;
    j["lattice"] = table.series.empty() ? std::vector<int>{} : table.series.front().lattice;
    nlohmann::ordered_json series = nlohmann::ordered_json::array();
    for (const auto& s : table.series) {
        nlohmann::ordered_json e;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.params) {
            params[k] = v;
        }
        e["params"] = params;
        if (s.lattice != j["lattice"].get<std::vector<int>>()) {
            e["lattice"] = s.lattice;
        }
        e["probabilities"] = s.probs;
        if (s.exact) {
            e["exact"] = *s.exact;
        }
        if (table.with_moments) {
            e["mean"] = s.mean;
            e["variance"] = s.variance;
        }
        series.push_back(std::move(e));
    }
    j["series"] = std::move(series);
    return j;
}

std::string to_json(const Table& table, Manifest manifest) {
    const auto payload = payload_json(table);
    manifest.content_hash = content_hash(payload.dump());
    nlohmann::ordered_json envelope;
    envelope["manifest"] = manifest.to_json();
    envelope["lattice"] = payload["lattice"];
    envelope["series"] = payload["series"];
    return envelope.dump(2) + "\n";
}

}  // namespace homql::cli
