// config.hpp
// Flat key=value configuration files; command-line flags win.

#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace homql::cli {

using ConfigMap = std::map<std::string, std::string>;

// Blank lines and lines starting with '#' are ignored; whitespace around keys
// and values is trimmed.
ConfigMap read_config(std::istream& in);
ConfigMap read_config_file(const std::string& path);

// Removes "--config <file>" / "--config=<file>" from args and splices the file's
// keys in as "--key=value" after the subcommand, skipping keys already given.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

std::vector<std::string> merge_config(const std::vector<std::string>& args, const ConfigMap& config);

}  // namespace homql::cli
