#pragma once

#include "phaselab/anyon.hpp"
#include "phaselab/config.hpp"

#include <optional>
#include <string>
#include <vector>

// Config-driven batch runner. A scenario config names one of the six
// scenario kinds, a [params] block, optional [sweep] axes (cartesian
// product, first key outermost) and optional [expect]ations. Running yields
// one ResultRecord per sweep point, in sweep order; identical configs
// produce byte-identical emitted files.

namespace phaselab {

enum class ScenarioKind {
    RingSwap,
    SpinSwap,
    AnyonPhase,
    BerryHolonomy,
    RobustnessSweep,
    BraidCheck,
};

ScenarioKind scenario_kind_from_string(const std::string& name);
std::string to_string(ScenarioKind kind);

struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

struct Expectation {
    std::string output;
    double value = 0.0;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::RingSwap;
    std::string id;
    std::vector<std::pair<std::string, std::string>> params;  // validated per kind
    std::vector<SweepAxis> sweep;
    std::vector<Expectation> expectations;
    double expect_tolerance = 1e-8;
    std::string base_dir;  // directory data files are resolved against

    const std::string* param(const std::string& key) const;
};

/// Parses and validates a config; unknown keys, unknown sections, bad values
/// and sweep axes that do not name numeric params all fail with a message
/// naming the offender.
ScenarioConfig validate_scenario_config(const ConfigFile& file,
                                        const std::string& base_dir = "");
ScenarioConfig load_scenario_config(const std::string& path);

struct ResultRecord {
    std::string scenario;
    std::string id;
    int index = 0;
    std::vector<std::pair<std::string, double>> inputs;        // numeric echo
    std::vector<std::pair<std::string, std::string>> labels;   // non-numeric echo
    std::vector<std::pair<std::string, double>> phases;        // radians, principal
    std::vector<std::pair<std::string, double>> values;        // plain numbers
    std::optional<bool> pass;  // against [expect], when configured
    double wall_ms = 0.0;      // informational; never emitted
};

std::vector<ResultRecord> run_scenario(const ScenarioConfig& config);

enum class EmitFormat { JsonLines, Csv };

/// Serializes records: json-lines has one record per line with keys in fixed
/// order; csv flattens the numeric columns with phases at 12 significant
/// digits. Round-trips losslessly through parse_result_records.
std::string emit_results(const std::vector<ResultRecord>& records, EmitFormat format);

/// Parses emitted json-lines back into records (wall_ms is not serialized).
std::vector<ResultRecord> parse_result_records(const std::string& json_lines);

/// Writes emitted output under out_dir as <id>.jsonl or <id>.csv and returns
/// the file path. The directory is created if missing.
std::string write_results(const std::vector<ResultRecord>& records,
                          const ScenarioConfig& config, const std::string& out_dir,
                          EmitFormat format);

// Shared plain-text input formats (owned by the experiment runner).

/// One "x y" vertex per line; blank lines and '#' comments ignored.
PlanarPath load_planar_path(const std::string& path, bool closed = true);

/// Header "x0 y0 cell_size n_cols n_rows" followed by n_cols*n_rows
/// row-major samples (whitespace separated, line breaks free).
FieldMap load_field_grid(const std::string& path);

}  // namespace phaselab
