#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

// Strict key/value configuration dialect used by the experiment runner:
//
//   # comment
//   scenario = ring-swap
//   id = my_run
//
//   [params]
//   spin = 0.5
//
//   [sweep]
//   spin = 0.5, 1.0, 1.5
//
//   [expect]
//   tolerance = 1e-8
//   total_phase = 3.141592653589793
//
// Parsing preserves order, rejects duplicate keys, and scenario validation
// rejects unknown keys by name.

namespace phaselab {

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    const std::string* find(const std::string& key) const;
};

struct ConfigFile {
    ConfigSection top;                   // entries before any [section]
    std::vector<ConfigSection> sections;

    const ConfigSection* section(const std::string& name) const;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

double config_as_double(const std::string& key, const std::string& value);
int config_as_int(const std::string& key, const std::string& value);
std::vector<double> config_as_double_list(const std::string& key,
                                          const std::string& value);

}  // namespace phaselab
