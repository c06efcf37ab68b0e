#include "phaselab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
    return find(key) != nullptr;
}

const std::string* ConfigSection::find(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

const ConfigSection* ConfigFile::section(const std::string& name) const {
    for (const ConfigSection& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

ConfigFile parse_config(const std::string& text) {
    ConfigFile file;
    ConfigSection* current = &file.top;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                std::ostringstream msg;
                msg << "config line " << line_no << ": unterminated section header";
                throw std::invalid_argument(msg.str());
            }
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name.empty()) {
                std::ostringstream msg;
                msg << "config line " << line_no << ": empty section name";
                throw std::invalid_argument(msg.str());
            }
            if (file.section(name) != nullptr) {
                std::ostringstream msg;
                msg << "config line " << line_no << ": duplicate section [" << name << "]";
                throw std::invalid_argument(msg.str());
            }
            file.sections.push_back({name, {}});
            current = &file.sections.back();
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config line " << line_no << ": expected key = value, got '"
                << stripped << "'";
            throw std::invalid_argument(msg.str());
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << "config line " << line_no << ": empty key";
            throw std::invalid_argument(msg.str());
        }
        if (current->has(key)) {
            std::ostringstream msg;
            msg << "config line " << line_no << ": duplicate key '" << key << "'";
            throw std::invalid_argument(msg.str());
        }
        current->entries.emplace_back(key, value);
    }
    return file;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

double config_as_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (trim(value.substr(used)).empty()) return parsed;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" +
                                value + "'");
}

int config_as_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (trim(value.substr(used)).empty()) return parsed;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" +
                                value + "'");
}

std::vector<double> config_as_double_list(const std::string& key,
                                          const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream stream(value);
    while (std::getline(stream, item, ',')) {
        const std::string stripped = trim(item);
        if (stripped.empty()) {
            throw std::invalid_argument("config key '" + key + "': empty list entry");
        }
        out.push_back(config_as_double(key, stripped));
    }
    if (out.empty()) {
        throw std::invalid_argument("config key '" + key + "': empty list");
    }
    return out;
}

}  // namespace phaselab
