#include "homql/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "homql/cli/parallel.hpp"
#include "homql/core_state.hpp"

namespace homql::cli {

namespace {

std::string trim(const std::string& s) {
    auto begin = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    auto end = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return begin < end ? std::string(begin, end) : std::string();
}

bool flag_present(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

}  // namespace

std::size_t worker_count(std::size_t jobs) {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv(kWorkerEnv)) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            cap = static_cast<std::size_t>(v);
        }
    }
    return std::min(cap, std::max<std::size_t>(jobs, 1));
}

ConfigMap read_config(std::istream& in) {
    ConfigMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config line " + std::to_string(lineno) + " is not key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw DomainError("config line " + std::to_string(lineno) + " has an empty key");
        }
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

ConfigMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open config file '" + path + "'");
    }
    return read_config(in);
}

std::vector<std::string> merge_config(const std::vector<std::string>& args, const ConfigMap& config) {
    std::vector<std::string> out;
    std::vector<std::string> extra;
    for (const auto& [key, value] : config) {
        if (!flag_present(args, key)) {
            extra.push_back("--" + key + "=" + value);
        }
    }
    // args[0] is the program, args[1] the subcommand.
    const std::size_t splice = std::min<std::size_t>(2, args.size());
    out.insert(out.end(), args.begin(), args.begin() + static_cast<std::ptrdiff_t>(splice));
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(splice), args.end());
    return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw DomainError("--config needs a file argument");
            }
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (path.empty()) {
        return kept;
    }
    return merge_config(kept, read_config_file(path));
}

}  // namespace homql::cli
