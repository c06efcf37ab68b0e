#include "phaselab/scenario.hpp"

#include "phaselab/braid.hpp"
#include "phaselab/holomorphic.hpp"
#include "phaselab/holonomy.hpp"
#include "phaselab/ring.hpp"
#include "phaselab/spin.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

using ParamMap = std::vector<std::pair<std::string, std::string>>;

const std::string* find_param(const ParamMap& params, const std::string& key) {
    for (const auto& [k, v] : params) {
        if (k == key) return &v;
    }
    return nullptr;
}

double get_double(const ParamMap& params, const std::string& key, double fallback) {
    const std::string* v = find_param(params, key);
    return v ? config_as_double(key, *v) : fallback;
}

double require_double(const ParamMap& params, const std::string& key) {
    const std::string* v = find_param(params, key);
    if (!v) throw std::invalid_argument("missing required param '" + key + "'");
    return config_as_double(key, *v);
}

int get_int(const ParamMap& params, const std::string& key, int fallback) {
    const std::string* v = find_param(params, key);
    return v ? config_as_int(key, *v) : fallback;
}

std::string get_string(const ParamMap& params, const std::string& key,
                       const std::string& fallback) {
    const std::string* v = find_param(params, key);
    return v ? *v : fallback;
}

std::vector<double> split_numbers(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) out.push_back(config_as_double(key, token));
    return out;
}

// "x y; x y; ..."
std::vector<Vec2> parse_point_list(const std::string& key, const std::string& text) {
    std::vector<Vec2> points;
    std::istringstream stream(text);
    std::string group;
    while (std::getline(stream, group, ';')) {
        if (group.find_first_not_of(" \t") == std::string::npos) continue;
        const std::vector<double> xy = split_numbers(key, group);
        if (xy.size() != 2) {
            throw std::invalid_argument("param '" + key + "': expected 'x y' pairs");
        }
        points.push_back({xy[0], xy[1]});
    }
    return points;
}

struct CircleSpec {
    double cx = 0.0, cy = 0.0, r = 1.0;
};

CircleSpec parse_circle(const std::string& key, const std::string& text) {
    const std::vector<double> v = split_numbers(key, text);
    if (v.size() != 3) {
        throw std::invalid_argument("param '" + key + "': expected 'cx cy r'");
    }
    if (v[2] <= 0.0) {
        throw std::invalid_argument("param '" + key + "': radius must be positive");
    }
    return {v[0], v[1], v[2]};
}

std::string resolve_path(const ScenarioConfig& config, const std::string& file) {
    std::filesystem::path p(file);
    if (p.is_absolute() || config.base_dir.empty()) return file;
    return (std::filesystem::path(config.base_dir) / p).string();
}

struct KindSpec {
    std::vector<std::string> allowed;
    std::set<std::string> numeric;  // sweepable keys
};

const KindSpec& kind_spec(ScenarioKind kind) {
    static const KindSpec ring{
        {"spin", "m_max", "steps", "duration", "profile", "extra_phase_delta"},
        {"spin", "m_max", "steps", "duration", "extra_phase_delta"}};
    static const KindSpec spin{{"spin", "variant", "steps", "duration"},
                               {"spin", "steps", "duration"}};
    static const KindSpec anyon{{"charge", "flux", "path_file", "path_circle",
                                 "path_segments", "others", "field_kind",
                                 "field_value", "field_rect", "field_file",
                                 "resolution"},
                                {"charge", "flux", "field_value", "resolution",
                                 "path_segments"}};
    static const KindSpec berry{{"family", "samples", "method", "fd_step",
                                 "loop_circle", "loop_file", "theta", "punctures",
                                 "puncture_orders", "modes_per_block", "degeneracy",
                                 "epsilon", "mode", "magnetic_length"},
                                {"samples", "fd_step", "theta", "modes_per_block",
                                 "degeneracy", "epsilon", "magnetic_length"}};
    static const KindSpec robustness{
        {"punctures", "puncture_orders", "modes_per_block", "degeneracy", "mode",
         "magnetic_length", "epsilons", "samples", "loop_a_circle", "loop_b_circle"},
        {"modes_per_block", "degeneracy", "samples", "magnetic_length"}};
    static const KindSpec braid{
        {"rep", "theta", "n_strands", "words", "tolerance"},
        {"theta", "n_strands", "tolerance"}};
    switch (kind) {
        case ScenarioKind::RingSwap: return ring;
        case ScenarioKind::SpinSwap: return spin;
        case ScenarioKind::AnyonPhase: return anyon;
        case ScenarioKind::BerryHolonomy: return berry;
        case ScenarioKind::RobustnessSweep: return robustness;
        case ScenarioKind::BraidCheck: return braid;
    }
    throw std::logic_error("unknown scenario kind");
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

struct ScenarioOutputs {
    std::vector<std::pair<std::string, double>> phases;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, std::string>> labels;
};

// ---------------------------------------------------------------- ring-swap

std::function<double(double)> ring_profile(const std::string& name, double t0,
                                           double duration) {
    if (name == "linear") {
        return [t0, duration](double t) { return kPi * (t - t0) / duration; };
    }
    if (name == "smoothstep") {
        return [t0, duration](double t) {
            const double u = (t - t0) / duration;
            return kPi * u * u * (3.0 - 2.0 * u);
        };
    }
    if (name == "wobble") {
        // Non-monotonic interior, exact endpoints.
        return [t0, duration](double t) {
            const double u = (t - t0) / duration;
            return kPi * u + 1.2 * std::sin(2.0 * kPi * u);
        };
    }
    throw std::invalid_argument("param 'profile': unknown profile '" + name +
                                "' (linear, smoothstep, wobble)");
}

ScenarioOutputs run_ring_swap(const ScenarioConfig& config, const ParamMap& params) {
    const double spin = require_double(params, "spin");
    const int m_max = get_int(params, "m_max", 16);
    const int steps = get_int(params, "steps", 10000);
    const double duration = get_double(params, "duration", 1.0);
    const std::string profile = get_string(params, "profile", "linear");
    const double extra_delta = get_double(params, "extra_phase_delta", 0.0);
    (void)config;

    const TimeGrid grid(0.0, duration, steps);
    SwapSchedule schedule(
        ring_profile(profile, 0.0, duration),
        [extra_delta, duration](double t) { return -extra_delta * t / duration; },
        grid);

    const RingState state = RingState::equal_weight(m_max, {0, 1});
    const RingEvolveResult single = evolve_ring_swap(state, schedule);
    const ExchangeOutcome outcome = two_particle_swap(spin, state, schedule);

    ScenarioOutputs out;
    out.phases = {{"total_phase", outcome.total_phase},
                  {"exchange_part", outcome.exchange_part},
                  {"spatial_dynamical_part", outcome.spatial_dynamical_part}};
    out.values = {{"fidelity", outcome.fidelity},
                  {"orthogonality", check_swap_orthogonality(state)},
                  {"truncation_leakage", single.truncation_leakage}};
    out.labels = {{"profile", profile}};
    return out;
}

// ---------------------------------------------------------------- spin-swap

ScenarioOutputs run_spin_swap(const ScenarioConfig& config, const ParamMap& params) {
    const double spin = require_double(params, "spin");
    const std::string variant = get_string(params, "variant", "same-rotation");
    const int steps = get_int(params, "steps", 4000);
    const double duration = get_double(params, "duration", 1.0);
    (void)config;

    const SpinSystem sys = make_spin_system(spin);
    const TimeGrid grid(0.0, duration, steps);
    const SpinState sigma = spin_coherent(sys, 0.5 * kPi, 0.0);  // up along +x

    ConditionedHamiltonian cond;
    SpinState tau;
    HamiltonianOfTime combined;  // drive for the closed sigma -> sigma loop
    if (variant == "same-rotation") {
        tau = spin_coherent(sys, 0.5 * kPi, kPi);  // down along x
        const double omega = kPi / duration;
        const ComplexMatrix h = omega * sys.sz;
        cond.h_a = [h](double) { return h; };
        cond.h_b = cond.h_a;
        combined = cond.h_a;
    } else if (variant == "reversed-conjugate") {
        const ComplexMatrix base_a = sys.sx;
        const ComplexMatrix base_b = 0.7 * sys.sz;
        auto h_a = [base_a, base_b, duration](double t) {
            return ComplexMatrix(base_a + std::cos(kPi * t / duration) * base_b);
        };
        auto h_b = [h_a, duration](double t) {
            return ComplexMatrix(-h_a(duration - t));
        };
        cond.h_a = h_a;
        cond.h_b = h_b;
        tau = timeordered_evolve(cond.h_a, grid) * sigma;
        combined = [h_a, h_b, duration](double t) {
            return t < duration ? h_a(t) : h_b(t - duration);
        };
    } else {
        throw std::invalid_argument("param 'variant': unknown variant '" + variant +
                                    "' (same-rotation, reversed-conjugate)");
    }

    const ConditionedSwapResult swap =
        conditioned_swap_evolve(sys, cond, sigma, tau, grid);
    const double phi_spin = spin_phase_sum(swap.phi_a, swap.phi_b);

    const TimeGrid loop_grid(0.0, 2.0 * duration, 2 * steps);
    const std::vector<SpinState> trajectory =
        evolve_trajectory(combined, sigma, loop_grid);
    const PhaseDecomposition decomposition =
        aa_decompose(trajectory, combined, loop_grid);

    ScenarioOutputs out;
    out.phases = {{"phi_a", principal_phase(swap.phi_a)},
                  {"phi_b", principal_phase(swap.phi_b)},
                  {"phi_spin", phi_spin},
                  {"spin_geometric", decomposition.geometric},
                  {"total_observable", total_observable_phase(spin, 0.0, phi_spin)}};
    out.values = {{"overlap_a", swap.overlap_a},
                  {"overlap_b", swap.overlap_b},
                  {"spin_dynamical", decomposition.dynamical}};
    out.labels = {{"variant", variant}};
    return out;
}

// --------------------------------------------------------------- anyon-phase

PlanarPath circle_path(const CircleSpec& spec, int segments) {
    PlanarPath path;
    path.closed = true;
    path.vertices.reserve(segments);
    for (int i = 0; i < segments; ++i) {
        const double angle = 2.0 * kPi * i / segments;
        path.vertices.push_back(
            {spec.cx + spec.r * std::cos(angle), spec.cy + spec.r * std::sin(angle)});
    }
    return path;
}

FieldMap field_from_params(const ScenarioConfig& config, const ParamMap& params) {
    const std::string kind = get_string(params, "field_kind", "none");
    if (kind == "none") return FieldMap::zero();
    if (kind == "uniform-everywhere") {
        return FieldMap::uniform_everywhere(require_double(params, "field_value"));
    }
    if (kind == "uniform-rect") {
        const std::string* rect_text = find_param(params, "field_rect");
        if (!rect_text) {
            throw std::invalid_argument("field_kind uniform-rect needs 'field_rect'");
        }
        const std::vector<double> r = split_numbers("field_rect", *rect_text);
        if (r.size() != 4) {
            throw std::invalid_argument("param 'field_rect': expected 'xmin ymin xmax ymax'");
        }
        return FieldMap::uniform_rect(require_double(params, "field_value"),
                                      {r[0], r[1], r[2], r[3]});
    }
    if (kind == "grid-file") {
        const std::string* file = find_param(params, "field_file");
        if (!file) throw std::invalid_argument("field_kind grid-file needs 'field_file'");
        return load_field_grid(resolve_path(config, *file));
    }
    throw std::invalid_argument("param 'field_kind': unknown kind '" + kind + "'");
}

ScenarioOutputs run_anyon_phase(const ScenarioConfig& config, const ParamMap& params) {
    AnyonSpecies species{get_double(params, "charge", 1.0),
                         get_double(params, "flux", 1.0)};
    const int resolution = get_int(params, "resolution", 400);

    PlanarPath path;
    if (const std::string* file = find_param(params, "path_file")) {
        path = load_planar_path(resolve_path(config, *file));
    } else if (const std::string* circle = find_param(params, "path_circle")) {
        path = circle_path(parse_circle("path_circle", *circle),
                           get_int(params, "path_segments", 64));
    } else {
        throw std::invalid_argument("anyon-phase needs 'path_file' or 'path_circle'");
    }

    std::vector<Vec2> others;
    if (const std::string* text = find_param(params, "others")) {
        others = parse_point_list("others", *text);
    }
    const FieldMap field = field_from_params(config, params);

    const AnyonPhaseReport report =
        total_anyon_phase(species, path, others, field, resolution);

    ScenarioOutputs out;
    out.phases = {{"topological", report.topological},
                  {"geometric", report.geometric},
                  {"total", report.total}};
    long long winding_sum = 0;
    for (int w : report.windings) winding_sum += w;
    out.values = {{"winding_sum", static_cast<double>(winding_sum)},
                  {"enclosed_flux", enclosed_external_flux(path, field, resolution)},
                  {"statistics_angle", species.statistics_angle()}};
    for (size_t i = 0; i < report.windings.size(); ++i) {
        out.values.emplace_back("winding_" + std::to_string(i),
                                static_cast<double>(report.windings[i]));
    }
    return out;
}

// ------------------------------------------------------------ berry-holonomy

HolomorphicFamilyConfig holomorphic_config_from_params(const ParamMap& params) {
    HolomorphicFamilyConfig cfg;
    const std::string punctures_text = get_string(params, "punctures", "1 0; -1 0");
    for (const Vec2& p : parse_point_list("punctures", punctures_text)) {
        cfg.punctures.emplace_back(p.x, p.y);
    }
    if (const std::string* orders = find_param(params, "puncture_orders")) {
        for (double v : config_as_double_list("puncture_orders", *orders)) {
            cfg.puncture_orders.push_back(static_cast<int>(std::llround(v)));
        }
    }
    cfg.modes_per_block = get_int(params, "modes_per_block", 40);
    cfg.degeneracy = get_int(params, "degeneracy", 2);
    cfg.magnetic_length = get_double(params, "magnetic_length", 1.0);
    cfg.epsilon = get_double(params, "epsilon", 0.0);
    const std::string mode = get_string(params, "mode", "antiholomorphic");
    if (mode == "antiholomorphic") {
        cfg.mode = PerturbationMode::Antiholomorphic;
    } else if (mode == "extra-parameter") {
        cfg.mode = PerturbationMode::ExtraParameter;
    } else {
        throw std::invalid_argument("param 'mode': unknown mode '" + mode + "'");
    }
    return cfg;
}

ParameterLoop loop_from_params(const ScenarioConfig& config, const ParamMap& params,
                               int samples, int extra_dims) {
    ParameterLoop loop;
    if (const std::string* file = find_param(params, "loop_file")) {
        const PlanarPath path = load_planar_path(resolve_path(config, *file));
        std::vector<RealVector> corners;
        for (const Vec2& v : path.vertices) {
            RealVector p(2);
            p << v.x, v.y;
            corners.push_back(p);
        }
        loop = ParameterLoop::polygon(corners, samples);
    } else {
        const CircleSpec spec =
            parse_circle("loop_circle", get_string(params, "loop_circle", "0 0 2"));
        loop = ParameterLoop::circle(spec.cx, spec.cy, spec.r, samples);
    }
    if (extra_dims > 0) {
        for (RealVector& p : loop.samples) {
            RealVector lifted(p.size() + extra_dims);
            lifted.setZero();
            lifted.head(p.size()) = p;
            p = lifted;
        }
    }
    return loop;
}

ScenarioOutputs run_berry_holonomy(const ScenarioConfig& config,
                                   const ParamMap& params) {
    const std::string family_name = get_string(params, "family", "");
    const std::string method = get_string(params, "method", "both");
    const double fd_step = get_double(params, "fd_step", 1e-4);
    if (method != "overlap" && method != "connection" && method != "both") {
        throw std::invalid_argument("param 'method': expected overlap, connection or both");
    }

    HamiltonianFamily family;
    ParameterLoop loop;
    double analytic_eigenphase = std::nan("");
    if (family_name == "spin-cone") {
        const double theta = require_double(params, "theta");
        const int samples = get_int(params, "samples", 2000);
        const SpinSystem half = make_spin_system(0.5);
        const ComplexMatrix sx = half.sx, sy = half.sy, sz = half.sz;
        family.param_dim = 2;
        family.dim = 2;
        family.degeneracy = 1;
        family.level_index = 0;
        family.gap_floor = 1e-3;
        family.cluster_width = 1e-6;
        family.evaluator = [sx, sy, sz, theta](const RealVector& lambda) {
            return ComplexMatrix(-(std::sin(theta) * lambda[0] * sx +
                                   std::sin(theta) * lambda[1] * sy +
                                   std::cos(theta) * sz));
        };
        loop = ParameterLoop::circle(0.0, 0.0, 1.0, samples);
        analytic_eigenphase = principal_phase(-kPi * (1.0 - std::cos(theta)));
    } else if (family_name == "holomorphic") {
        const HolomorphicFamilyConfig cfg = holomorphic_config_from_params(params);
        const HolomorphicFamily holo = make_holomorphic_family(cfg);
        family = holo.induced_family();
        const int samples = get_int(params, "samples", 600);
        loop = loop_from_params(config, params, samples,
                                family.param_dim - 2);
    } else {
        throw std::invalid_argument(
            "param 'family': expected spin-cone or holomorphic");
    }

    ScenarioOutputs out;
    out.labels = {{"family", family_name}, {"method", method}};

    HolonomyResult primary;
    if (method == "connection") {
        primary = holonomy_connection(family, loop, fd_step);
    } else {
        primary = holonomy_overlap(family, loop);
    }
    for (size_t i = 0; i < primary.eigenphases.size(); ++i) {
        out.phases.emplace_back("eigenphase_" + std::to_string(i),
                                primary.eigenphases[i]);
    }
    out.phases.emplace_back("overall_phase", principal_phase(primary.overall_phase));
    out.values.emplace_back("combined_unitarity",
                            unitarity_defect(primary.combined));
    out.values.emplace_back("min_overlap_sv", primary.min_overlap_sv);
    if (!std::isnan(analytic_eigenphase)) {
        out.values.emplace_back(
            "analytic_error",
            phase_distance(primary.eigenphases[0], analytic_eigenphase));
    }
    if (method == "both") {
        const HolonomyResult cross = holonomy_connection(family, loop, fd_step);
        out.values.emplace_back(
            "method_agreement",
            eigenphase_multiset_distance(primary.eigenphases, cross.eigenphases));
    }
    return out;
}

// ---------------------------------------------------------- robustness-sweep

std::vector<ResultRecord> run_robustness_sweep(const ScenarioConfig& config) {
    const ParamMap& params = config.params;
    const std::string* eps_text = find_param(params, "epsilons");
    if (!eps_text) throw std::invalid_argument("robustness-sweep needs 'epsilons'");
    const std::vector<double> epsilons = config_as_double_list("epsilons", *eps_text);
    const int samples = get_int(params, "samples", 600);

    const HolomorphicFamilyConfig cfg = holomorphic_config_from_params(params);
    const int extra = cfg.mode == PerturbationMode::ExtraParameter ? 1 : 0;

    const CircleSpec a =
        parse_circle("loop_a_circle", get_string(params, "loop_a_circle", "0 0 2"));
    const CircleSpec b = parse_circle("loop_b_circle",
                                      get_string(params, "loop_b_circle", "0.1 -0.1 2.3"));
    auto lift = [extra](ParameterLoop loop) {
        if (extra > 0) {
            for (RealVector& p : loop.samples) {
                RealVector q(3);
                q << p[0], p[1], 0.0;
                p = q;
            }
        }
        return loop;
    };
    std::vector<std::pair<ParameterLoop, ParameterLoop>> pairs;
    pairs.emplace_back(lift(ParameterLoop::circle(a.cx, a.cy, a.r, samples)),
                       lift(ParameterLoop::circle(b.cx, b.cy, b.r, samples)));

    const RobustnessSweepResult sweep = robustness_break_probe(cfg, pairs, epsilons);

    std::vector<ResultRecord> records;
    for (size_t i = 0; i < sweep.rows.size(); ++i) {
        const RobustnessSweepRow& row = sweep.rows[i];
        ResultRecord record;
        record.scenario = to_string(config.kind);
        record.id = config.id;
        record.index = static_cast<int>(i);
        record.inputs = {{"epsilon", row.epsilon},
                         {"degeneracy", static_cast<double>(cfg.degeneracy)},
                         {"modes_per_block", static_cast<double>(cfg.modes_per_block)},
                         {"samples", static_cast<double>(samples)}};
        record.values = {{"max_residual", row.max_residual},
                         {"trend_nondecreasing", sweep.nondecreasing ? 1.0 : 0.0}};
        for (size_t p = 0; p < row.pair_residuals.size(); ++p) {
            record.values.emplace_back("pair_residual_" + std::to_string(p),
                                       row.pair_residuals[p]);
        }
        record.labels = {{"mode", get_string(params, "mode", "antiholomorphic")}};
        records.push_back(std::move(record));
    }
    return records;
}

// ----------------------------------------------------------------- braid-check

ScenarioOutputs run_braid_check(const ScenarioConfig& config, const ParamMap& params) {
    (void)config;
    const std::string rep_name = get_string(params, "rep", "ising");
    const double tolerance = get_double(params, "tolerance", 1e-9);

    BraidRepresentation rep;
    if (rep_name == "ising") {
        rep = ising_representation();
    } else if (rep_name == "abelian") {
        rep = abelian_representation(get_int(params, "n_strands", 3),
                                     get_double(params, "theta", kPi / 4.0));
    } else {
        throw std::invalid_argument("param 'rep': expected ising or abelian");
    }

    const RelationReport relations = verify_representation(rep, tolerance);

    // Conjugating by a fixed word image must leave the relation residuals
    // unchanged.
    const BraidWord conjugator = parse_braid_word(
        rep.n_strands >= 3 ? "s1 s2" : "s1", rep.n_strands);
    const BraidRepresentation conjugated =
        conjugate_representation(rep, evaluate_word(rep, conjugator));
    const RelationReport conj_relations = verify_representation(conjugated, tolerance);

    double reduction_residual = 0.0;
    int word_count = 0;
    const std::string words_text = get_string(params, "words", "s1 s1^-1 s2 s2");
    std::istringstream words_stream(words_text);
    std::string word_text;
    while (std::getline(words_stream, word_text, ';')) {
        if (word_text.find_first_not_of(" \t") == std::string::npos) continue;
        const BraidWord word = parse_braid_word(word_text, rep.n_strands);
        const BraidWord reduced = reduce_word(word);
        reduction_residual =
            std::max(reduction_residual,
                     (evaluate_word(rep, word) - evaluate_word(rep, reduced)).norm());
        ++word_count;
    }

    ScenarioOutputs out;
    out.values = {
        {"braid_residual", relations.max_braid_residual},
        {"commutation_residual", relations.max_commutation_residual},
        {"relations_pass", relations.passed ? 1.0 : 0.0},
        {"conjugation_residual_drift",
         std::abs(relations.max_braid_residual - conj_relations.max_braid_residual)},
        {"reduction_residual", reduction_residual},
        {"word_count", static_cast<double>(word_count)},
    };
    out.labels = {{"rep", rep_name}};
    return out;
}

}  // namespace

ScenarioKind scenario_kind_from_string(const std::string& name) {
    if (name == "ring-swap") return ScenarioKind::RingSwap;
    if (name == "spin-swap") return ScenarioKind::SpinSwap;
    if (name == "anyon-phase") return ScenarioKind::AnyonPhase;
    if (name == "berry-holonomy") return ScenarioKind::BerryHolonomy;
    if (name == "robustness-sweep") return ScenarioKind::RobustnessSweep;
    if (name == "braid-check") return ScenarioKind::BraidCheck;
    throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::RingSwap: return "ring-swap";
        case ScenarioKind::SpinSwap: return "spin-swap";
        case ScenarioKind::AnyonPhase: return "anyon-phase";
        case ScenarioKind::BerryHolonomy: return "berry-holonomy";
        case ScenarioKind::RobustnessSweep: return "robustness-sweep";
        case ScenarioKind::BraidCheck: return "braid-check";
    }
    return "unknown";
}

const std::string* ScenarioConfig::param(const std::string& key) const {
    for (const auto& [k, v] : params) {
        if (k == key) return &v;
    }
    return nullptr;
}

namespace {
void apply_expectations(const ScenarioConfig& config, ResultRecord& record);
}  // namespace

ScenarioConfig validate_scenario_config(const ConfigFile& file,
                                        const std::string& base_dir) {
    ScenarioConfig config;
    config.base_dir = base_dir;

    for (const auto& [key, value] : file.top.entries) {
        if (key == "scenario") {
            config.kind = scenario_kind_from_string(value);
        } else if (key == "id") {
            config.id = value;
        } else {
            throw std::invalid_argument("unknown top-level key '" + key + "'");
        }
    }
    if (!file.top.has("scenario")) {
        throw std::invalid_argument("missing required key 'scenario'");
    }
    if (config.id.empty()) config.id = to_string(config.kind);

    const KindSpec& spec = kind_spec(config.kind);
    for (const ConfigSection& section : file.sections) {
        if (section.name == "params") {
            for (const auto& [key, value] : section.entries) {
                if (std::find(spec.allowed.begin(), spec.allowed.end(), key) ==
                    spec.allowed.end()) {
                    throw std::invalid_argument("unknown param '" + key +
                                                "' for scenario " +
                                                to_string(config.kind));
                }
                config.params.emplace_back(key, value);
            }
        } else if (section.name == "sweep") {
            for (const auto& [key, value] : section.entries) {
                if (spec.numeric.find(key) == spec.numeric.end()) {
                    throw std::invalid_argument("sweep key '" + key +
                                                "' is not a numeric param of " +
                                                to_string(config.kind));
                }
                config.sweep.push_back({key, config_as_double_list(key, value)});
            }
        } else if (section.name == "expect") {
            for (const auto& [key, value] : section.entries) {
                if (key == "tolerance") {
                    config.expect_tolerance = config_as_double(key, value);
                } else {
                    config.expectations.push_back({key, config_as_double(key, value)});
                }
            }
        } else {
            throw std::invalid_argument("unknown section [" + section.name + "]");
        }
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    const ConfigFile file = load_config(path);
    return validate_scenario_config(
        file, std::filesystem::path(path).parent_path().string());
}

std::vector<ResultRecord> run_scenario(const ScenarioConfig& config) {
    // The robustness sweep owns its own record layout (one row per epsilon).
    if (config.kind == ScenarioKind::RobustnessSweep) {
        if (!config.sweep.empty()) {
            throw std::invalid_argument(
                "robustness-sweep sweeps epsilon internally; [sweep] is not allowed");
        }
        auto records = run_robustness_sweep(config);
        for (ResultRecord& record : records) {
            apply_expectations(config, record);
        }
        return records;
    }

    // Cartesian sweep, first axis outermost.
    std::vector<size_t> counters(config.sweep.size(), 0);
    std::vector<ResultRecord> records;
    int index = 0;
    while (true) {
        ParamMap params = config.params;
        std::vector<std::pair<std::string, double>> swept;
        for (size_t axis = 0; axis < config.sweep.size(); ++axis) {
            const double value = config.sweep[axis].values[counters[axis]];
            const std::string formatted = format_double(value);
            bool replaced = false;
            for (auto& [k, v] : params) {
                if (k == config.sweep[axis].param) {
                    v = formatted;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) params.emplace_back(config.sweep[axis].param, formatted);
            swept.emplace_back(config.sweep[axis].param, value);
        }

        const auto started = std::chrono::steady_clock::now();
        ScenarioOutputs outputs;
        switch (config.kind) {
            case ScenarioKind::RingSwap:
                outputs = run_ring_swap(config, params);
                break;
            case ScenarioKind::SpinSwap:
                outputs = run_spin_swap(config, params);
                break;
            case ScenarioKind::AnyonPhase:
                outputs = run_anyon_phase(config, params);
                break;
            case ScenarioKind::BerryHolonomy:
                outputs = run_berry_holonomy(config, params);
                break;
            case ScenarioKind::BraidCheck:
                outputs = run_braid_check(config, params);
                break;
            case ScenarioKind::RobustnessSweep:
                break;  // handled above
        }
        const auto finished = std::chrono::steady_clock::now();

        ResultRecord record;
        record.scenario = to_string(config.kind);
        record.id = config.id;
        record.index = index++;
        record.inputs = std::move(swept);
        // Echo the numeric base params that were not swept.
        const KindSpec& spec = kind_spec(config.kind);
        for (const auto& [key, value] : params) {
            if (spec.numeric.find(key) == spec.numeric.end()) continue;
            bool already = false;
            for (const auto& [k, _] : record.inputs) {
                if (k == key) { already = true; break; }
            }
            if (!already) record.inputs.emplace_back(key, config_as_double(key, value));
        }
        record.labels = std::move(outputs.labels);
        record.phases = std::move(outputs.phases);
        record.values = std::move(outputs.values);
        record.wall_ms =
            std::chrono::duration<double, std::milli>(finished - started).count();
        apply_expectations(config, record);
        records.push_back(std::move(record));

        // odometer
        size_t axis = config.sweep.size();
        while (axis > 0) {
            --axis;
            if (++counters[axis] < config.sweep[axis].values.size()) break;
            counters[axis] = 0;
            if (axis == 0) return records;
        }
        if (config.sweep.empty()) break;
    }
    return records;
}

namespace {

void apply_expectations(const ScenarioConfig& config, ResultRecord& record) {
    if (config.expectations.empty()) return;
    bool all_ok = true;
    for (const Expectation& expect : config.expectations) {
        bool found = false;
        double difference = 0.0;
        for (const auto& [name, value] : record.phases) {
            if (name == expect.output) {
                difference = phase_distance(value, expect.value);
                found = true;
                break;
            }
        }
        if (!found) {
            for (const auto& [name, value] : record.values) {
                if (name == expect.output) {
                    difference = std::abs(value - expect.value);
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            throw std::invalid_argument("[expect] names unknown output '" +
                                        expect.output + "'");
        }
        if (difference > config.expect_tolerance) all_ok = false;
    }
    record.pass = all_ok;
}

}  // namespace

std::string emit_results(const std::vector<ResultRecord>& records, EmitFormat format) {
    if (records.empty()) {
        throw std::invalid_argument("emit_results: no records");
    }
    if (format == EmitFormat::JsonLines) {
        std::ostringstream out;
        for (const ResultRecord& record : records) {
            nlohmann::ordered_json line;
            line["scenario"] = record.scenario;
            line["id"] = record.id;
            line["index"] = record.index;
            nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
            for (const auto& [k, v] : record.inputs) inputs[k] = v;
            line["inputs"] = inputs;
            nlohmann::ordered_json labels = nlohmann::ordered_json::object();
            for (const auto& [k, v] : record.labels) labels[k] = v;
            line["labels"] = labels;
            nlohmann::ordered_json phases = nlohmann::ordered_json::object();
            for (const auto& [k, v] : record.phases) phases[k] = v;
            line["phases"] = phases;
            nlohmann::ordered_json values = nlohmann::ordered_json::object();
            for (const auto& [k, v] : record.values) values[k] = v;
            line["values"] = values;
            if (record.pass.has_value()) {
                line["pass"] = *record.pass;
            } else {
                line["pass"] = nullptr;
            }
            out << line.dump() << "\n";
        }
        return out.str();
    }

    // CSV: header from the first record; 12 significant digits.
    std::ostringstream out;
    const ResultRecord& first = records.front();
    out << "scenario,id,index";
    for (const auto& [k, _] : first.labels) out << "," << k;
    for (const auto& [k, _] : first.inputs) out << "," << k;
    for (const auto& [k, _] : first.phases) out << "," << k;
    for (const auto& [k, _] : first.values) out << "," << k;
    out << ",pass\n";
    char buffer[64];
    for (const ResultRecord& record : records) {
        out << record.scenario << "," << record.id << "," << record.index;
        for (const auto& [_, v] : record.labels) out << "," << v;
        auto put = [&out, &buffer](double v) {
            std::snprintf(buffer, sizeof(buffer), "%.12g", v);
            out << "," << buffer;
        };
        for (const auto& [_, v] : record.inputs) put(v);
        for (const auto& [_, v] : record.phases) put(v);
        for (const auto& [_, v] : record.values) put(v);
        out << ","
            << (record.pass.has_value() ? (*record.pass ? "true" : "false") : "")
            << "\n";
    }
    return out.str();
}

std::vector<ResultRecord> parse_result_records(const std::string& json_lines) {
    std::vector<ResultRecord> records;
    std::istringstream stream(json_lines);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        const nlohmann::ordered_json parsed = nlohmann::ordered_json::parse(line);
        ResultRecord record;
        record.scenario = parsed.at("scenario").get<std::string>();
        record.id = parsed.at("id").get<std::string>();
        record.index = parsed.at("index").get<int>();
        for (const auto& [k, v] : parsed.at("inputs").items()) {
            record.inputs.emplace_back(k, v.get<double>());
        }
        for (const auto& [k, v] : parsed.at("labels").items()) {
            record.labels.emplace_back(k, v.get<std::string>());
        }
        for (const auto& [k, v] : parsed.at("phases").items()) {
            record.phases.emplace_back(k, v.get<double>());
        }
        for (const auto& [k, v] : parsed.at("values").items()) {
            record.values.emplace_back(k, v.get<double>());
        }
        if (!parsed.at("pass").is_null()) {
            record.pass = parsed.at("pass").get<bool>();
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string write_results(const std::vector<ResultRecord>& records,
                          const ScenarioConfig& config, const std::string& out_dir,
                          EmitFormat format) {
    const std::string payload = emit_results(records, format);
    std::filesystem::create_directories(out_dir);
    const std::string extension = format == EmitFormat::JsonLines ? ".jsonl" : ".csv";
    const std::string path =
        (std::filesystem::path(out_dir) / (config.id + extension)).string();
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write results to " + path);
    }
    file << payload;
    return path;
}

PlanarPath load_planar_path(const std::string& path, bool closed) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open path file: " + path);
    PlanarPath out;
    out.closed = closed;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream fields(line);
        double x, y;
        if (!(fields >> x)) continue;  // blank or comment-only line
        if (!(fields >> y)) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected 'x y'";
            throw std::invalid_argument(msg.str());
        }
        std::string rest;
        if (fields >> rest) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": trailing content '" << rest << "'";
            throw std::invalid_argument(msg.str());
        }
        out.vertices.push_back({x, y});
    }
    out.validate();
    return out;
}

FieldMap load_field_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open field file: " + path);
    std::ostringstream cleaned;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        cleaned << line << "\n";
    }
    std::istringstream fields(cleaned.str());
    double x0, y0, h;
    int n_cols, n_rows;
    if (!(fields >> x0 >> y0 >> h >> n_cols >> n_rows)) {
        throw std::invalid_argument(path + ": expected header 'x0 y0 cell_size n_cols n_rows'");
    }
    std::vector<double> values;
    values.reserve(static_cast<size_t>(n_cols) * n_rows);
    double v;
    while (fields >> v) values.push_back(v);
    if (values.size() != static_cast<size_t>(n_cols) * n_rows) {
        std::ostringstream msg;
        msg << path << ": expected " << n_cols * n_rows << " samples, got "
            << values.size();
        throw std::invalid_argument(msg.str());
    }
    return FieldMap::grid({x0, y0}, h, n_cols, n_rows, std::move(values));
}

}  // namespace phaselab
