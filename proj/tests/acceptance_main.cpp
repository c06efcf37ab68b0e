// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: acceptance_tests <cli-binary> <scenario-dir> <work-dir>

#include "phaselab/anyon.hpp"
#include "phaselab/braid.hpp"
#include "phaselab/holomorphic.hpp"
#include "phaselab/holonomy.hpp"
#include "phaselab/ring.hpp"
#include "phaselab/scenario.hpp"
#include "phaselab/spin.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace phaselab;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

HamiltonianFamily cone_family(double theta) {
    const SpinSystem half = make_spin_system(0.5);
    const ComplexMatrix sx = half.sx, sy = half.sy, sz = half.sz;
    HamiltonianFamily family;
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
    return family;
}

PlanarPath circle_path(double cx, double cy, double r, int n, double wobble = 0.0,
                       int lobes = 3, double phase = 0.0) {
    PlanarPath path;
    path.closed = true;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * kPi * i / n;
        const double radius = r * (1.0 + wobble * std::sin(lobes * a + phase));
        path.vertices.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return path;
}

// ------------------------------------------------------------------ criteria

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const TimeGrid grid(0.0, 1.0, 10000);
    const RingState state = RingState::equal_weight(16, {0, 1});
    const ExchangeOutcome fermion =
        two_particle_swap(0.5, state, SwapSchedule::linear(grid));
    const ExchangeOutcome boson =
        two_particle_swap(1.0, state, SwapSchedule::linear(grid));
    const double elapsed = seconds_since(start);

    const double fermion_error = phase_distance(fermion.total_phase, kPi);
    const double boson_error = phase_distance(boson.total_phase, 0.0);
    std::ostringstream detail;
    detail << "fermion |phase - pi| = " << fermion_error << ", boson |phase| = "
           << boson_error << ", " << elapsed << " s";
    report(1, "fermion/boson swap phase",
           fermion_error <= 1e-8 && boson_error <= 1e-8 && elapsed < 1.0,
           detail.str());
}

void criterion_2() {
    const TimeGrid grid(0.0, 1.0, 10000);
    const RingState state = RingState::equal_weight(16, {0, 1});
    const double delta = kPi / 3.0;
    const std::vector<std::function<double(double)>> profiles = {
        [](double t) { return kPi * t; },
        [](double t) { return kPi * t * t * (3.0 - 2.0 * t); },
        [](double t) { return kPi * t + 1.2 * std::sin(2.0 * kPi * t); },
    };
    double worst_total = 0.0;
    double worst_spread = 0.0;
    std::vector<double> spatial_parts;
    for (const auto& profile : profiles) {
        SwapSchedule schedule(profile, [delta](double t) { return -delta * t; }, grid);
        const ExchangeOutcome outcome = two_particle_swap(0.5, state, schedule);
        worst_total =
            std::max(worst_total, phase_distance(outcome.total_phase, kPi + delta));
        spatial_parts.push_back(outcome.spatial_dynamical_part);
    }
    for (double part : spatial_parts) {
        worst_spread = std::max(worst_spread, phase_distance(part, spatial_parts[0]));
    }
    std::ostringstream detail;
    detail << "max |total - (pi + pi/3)| = " << worst_total
           << ", spatial spread over 3 profiles = " << worst_spread;
    report(2, "dynamical add-on and schedule independence",
           worst_total <= 1e-8 && worst_spread <= 1e-8, detail.str());
}

void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    double worst_geometric = 0.0;
    double worst_total = 0.0;
    for (double s : {0.5, 1.0, 1.5}) {
        const SpinSystem sys = make_spin_system(s);
        const double duration = 1.0;
        const TimeGrid grid(0.0, duration, 4000);
        const SpinState sigma = spin_coherent(sys, kPi / 2, 0.0);
        const SpinState tau = spin_coherent(sys, kPi / 2, kPi);
        const ComplexMatrix h = (kPi / duration) * sys.sz;
        ConditionedHamiltonian cond{[&h](double) { return h; },
                                    [&h](double) { return h; }};
        const ConditionedSwapResult swap =
            conditioned_swap_evolve(sys, cond, sigma, tau, grid);
        const double phi_spin = spin_phase_sum(swap.phi_a, swap.phi_b);

        const TimeGrid loop_grid(0.0, 2.0 * duration, 8000);
        const auto trajectory =
            evolve_trajectory([&h](double) { return h; }, sigma, loop_grid);
        const PhaseDecomposition split =
            aa_decompose(trajectory, [&h](double) { return h; }, loop_grid);
        worst_geometric =
            std::max(worst_geometric, phase_distance(split.geometric, 2.0 * kPi * s));
        worst_total = std::max(
            worst_total, phase_distance(total_observable_phase(s, 0.0, phi_spin), 0.0));
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "max |geometric - 2 pi s| = " << worst_geometric
           << ", max |total| = " << worst_total << ", " << elapsed << " s";
    report(3, "spin-geometric cancellation (s = 1/2, 1, 3/2)",
           worst_geometric <= 1e-6 && worst_total <= 1e-6 && elapsed < 5.0,
           detail.str());
}

void criterion_4() {
    std::mt19937 rng(20240809);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double s = 0.5 * (1 + trial % 3);
        const SpinSystem sys = make_spin_system(s);
        const int dim = sys.dim;
        ComplexMatrix a(dim, dim), b(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                a(r, c) = Complex(gauss(rng), gauss(rng));
                b(r, c) = Complex(gauss(rng), gauss(rng));
            }
        }
        a = 0.5 * (a + a.adjoint()).eval();
        b = 0.5 * (b + b.adjoint()).eval();
        const double duration = 1.0;
        auto h_a = [a, b](double t) {
            return ComplexMatrix(a + std::cos(2.3 * t) * b);
        };
        auto h_b = [h_a, duration](double t) {
            return ComplexMatrix(-h_a(duration - t));
        };
        const TimeGrid grid(0.0, duration, 3000);

        SpinState sigma(dim);
        for (int k = 0; k < dim; ++k) sigma[k] = Complex(gauss(rng), gauss(rng));
        sigma.normalize();
        const SpinState tau =
            std::polar(1.0, gauss(rng)) * (timeordered_evolve(h_a, grid) * sigma).eval();

        const ConditionedSwapResult swap = conditioned_swap_evolve(
            sys, ConditionedHamiltonian{h_a, h_b}, sigma, tau, grid);
        worst = std::max(
            worst, phase_distance(spin_phase_sum(swap.phi_a, swap.phi_b), 0.0));
    }
    std::ostringstream detail;
    detail << "max |phi_spin| over 10 seeded swaps = " << worst;
    report(4, "V_A = V_B^dagger phase cancellation", worst <= 1e-9, detail.str());
}

void criterion_5() {
    const AnyonSpecies species{1.0, 0.77};
    const PlanarPath base = circle_path(0, 0, 1.0, 48);
    const std::vector<Vec2> others = {{0.0, 0.0}};
    const double base_phase = mutual_braid_phase(species, base, others);
    bool ok = base_phase == principal_phase(species.pair_phase());

    int invariant = 0;
    for (int k = 0; k < 20; ++k) {
        const PlanarPath deformed =
            circle_path(0.02 * k, -0.015 * k, 1.0 + 0.02 * k, 48 + k, 0.1, 2 + k % 4,
                        0.37 * k);
        if (mutual_braid_phase(species, deformed, others) == base_phase) ++invariant;
    }
    ok = ok && invariant == 20;

    // Field region S neither crossed nor enclosed by the loop.
    const FieldMap far_region = FieldMap::uniform_rect(3.0, {4.0, 4.0, 5.0, 5.0});
    const AnyonPhaseReport report_far =
        total_anyon_phase(species, base, others, far_region);
    ok = ok && report_far.geometric == 0.0 &&
         report_far.total == report_far.topological;

    std::ostringstream detail;
    detail << "pair phase = " << base_phase << " (q Phi = " << species.pair_phase()
           << "), " << invariant << "/20 deformations exact, far-region geometric = "
           << report_far.geometric;
    report(5, "anyon mutual phase, exact homotopy invariance", ok, detail.str());
}

void criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    const AnyonSpecies species{1.3, 1.0};
    const double b = 0.11;
    const FieldMap field = FieldMap::uniform_everywhere(b);
    const PlanarPath base = circle_path(0.1, -0.05, 1.0, 96);
    const std::vector<PlanarPath> deformations = {
        circle_path(0.1, -0.05, 1.15, 96), circle_path(0.1, -0.05, 1.3, 96),
        circle_path(0.25, 0.1, 1.2, 128, 0.08, 4, 0.3)};
    const RobustnessProbeResult probe = deformation_robustness_probe(
        species, base, deformations, {}, field, 1e-6, 400);

    double worst_rel = 0.0;
    for (size_t i = 0; i < deformations.size(); ++i) {
        const double expected = std::abs(
            species.charge * b *
            (deformations[i].signed_area() - base.signed_area()));
        const double got = probe.deformations[i].geometric_drift;
        worst_rel = std::max(worst_rel, std::abs(got - expected) / expected);
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "max relative drift error vs shoelace = " << worst_rel << ", robust = "
           << (probe.all_robust ? "yes" : "no") << ", " << elapsed << " s";
    report(6, "everywhere-field geometric corruption",
           worst_rel <= 0.01 && !probe.all_robust && elapsed < 10.0, detail.str());
}

void criterion_7() {
    bool ok = true;
    std::ostringstream detail;

    double worst_analytic = 0.0;
    double worst_methods = 0.0;
    double worst_adiabatic = 0.0;
    for (double theta : {kPi / 6, kPi / 3, kPi / 2}) {
        const HamiltonianFamily family = cone_family(theta);
        const ParameterLoop loop = ParameterLoop::circle(0, 0, 1.0, 2000);
        const HolonomyResult overlap = holonomy_overlap(family, loop);
        const double analytic = principal_phase(-kPi * (1.0 - std::cos(theta)));
        worst_analytic = std::max(
            worst_analytic, phase_distance(overlap.eigenphases[0], analytic));

        const HolonomyResult connection = holonomy_connection(family, loop, 1e-4);
        worst_methods = std::max(
            worst_methods, eigenphase_multiset_distance(overlap.eigenphases,
                                                        connection.eigenphases));

        // Independent oracle: dense adiabatic drive with the dynamical phase
        // removed; the smooth O(1/T) remainder is extrapolated away by a
        // second run at 2T.
        const SpinSystem half = make_spin_system(0.5);
        RealVector base_point(2);
        base_point << 1.0, 0.0;
        const ComplexVector psi0 = frame_at(family, base_point).columns.col(0);
        auto geometric_at = [&half, &psi0, theta](double duration, int steps) {
            auto drive = [&half, theta, duration](double t) {
                const double u = t / duration;
                const double phi = 2.0 * kPi * u * u * (3.0 - 2.0 * u);
                Eigen::Vector3d n(std::sin(theta) * std::cos(phi),
                                  std::sin(theta) * std::sin(phi), std::cos(theta));
                return ComplexMatrix(-half.along(n));
            };
            const ComplexMatrix u =
                timeordered_evolve(drive, TimeGrid(0.0, duration, steps));
            const Complex amplitude = psi0.dot(u * psi0);
            return principal_phase(std::arg(amplitude) - 0.5 * duration);
        };
        const double slow = geometric_at(400.0, 100000);
        const double slower = geometric_at(800.0, 200000);
        const double extrapolated =
            principal_phase(slower + principal_phase(slower - slow));
        worst_adiabatic =
            std::max(worst_adiabatic, phase_distance(extrapolated, analytic));
    }
    ok = ok && worst_analytic <= 1e-4 && worst_methods <= 1e-3 &&
         worst_adiabatic <= 1e-3;

    // Gauge invariance of the combined spectrum under 10 random regaugings.
    const HamiltonianFamily family = cone_family(kPi / 3);
    const ParameterLoop loop = ParameterLoop::circle(0, 0, 1.0, 800);
    const TransportedFrames transported = transport_frames(family, loop);
    const HolonomyResult plain = holonomy_from_frames(transported);
    std::mt19937 rng(555);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_gauge = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ComplexMatrix> gauges;
        gauges.reserve(transported.frames.size());
        for (size_t j = 0; j < transported.frames.size(); ++j) {
            ComplexMatrix g(1, 1);
            g(0, 0) = std::polar(1.0, gauss(rng));
            gauges.push_back(g);
        }
        gauges.front()(0, 0) = 1.0;
        const HolonomyResult regauged = regauge(transported, gauges);
        worst_gauge = std::max(
            worst_gauge,
            eigenphase_multiset_distance(plain.eigenphases, regauged.eigenphases));
    }
    ok = ok && worst_gauge <= 1e-6;

    detail << "analytic err = " << worst_analytic << ", method gap = " << worst_methods
           << ", adiabatic oracle gap = " << worst_adiabatic
           << ", regauge drift = " << worst_gauge;
    report(7, "holonomy engine validation (cone loops)", ok, detail.str());
}

void criterion_8() {
    const auto start = std::chrono::steady_clock::now();
    HolomorphicFamilyConfig config;
    config.punctures = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
    config.modes_per_block = 36;
    config.degeneracy = 2;
    config.working_radius = 2.9;
    const HolomorphicFamily family = make_holomorphic_family(config);
    const HamiltonianFamily induced = family.induced_family();

    // Five equal-winding pairs with different shapes, centers and sampling.
    struct Pair {
        ParameterLoop a, b;
    };
    std::vector<Pair> pairs = {
        {ParameterLoop::circle(0, 0, 2.0, 450), ParameterLoop::circle(0.1, -0.1, 2.3, 400)},
        {ParameterLoop::circle(0, 0, 1.8, 400), ParameterLoop::circle(-0.2, 0.15, 2.1, 500)},
        {ParameterLoop::circle(1.0, 0.0, 0.5, 350), ParameterLoop::circle(1.1, 0.05, 0.7, 400)},
        {ParameterLoop::circle(-1.0, 0.0, 0.6, 350), ParameterLoop::circle(-0.9, -0.1, 0.45, 420)},
        {ParameterLoop::circle(0.05, 0.05, 2.5, 500), ParameterLoop::circle(0, 0, 1.9, 380)},
    };
    double worst = 0.0;
    bool windings_ok = true;
    for (const Pair& pair : pairs) {
        windings_ok = windings_ok &&
                      family.loop_windings(pair.a) == family.loop_windings(pair.b);
        const HolonomyResult a = holonomy_overlap(induced, pair.a);
        const HolonomyResult b = holonomy_overlap(induced, pair.b);
        worst = std::max(worst, projective_distance(a.combined, b.combined).residual);
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "max projective residual over " << pairs.size() << " pairs = " << worst
           << ", " << elapsed << " s";
    report(8, "holomorphic family topological robustness (eps = 0)",
           windings_ok && worst <= 1e-6 && elapsed < 60.0, detail.str());
}

void criterion_9() {
    HolomorphicFamilyConfig config;
    config.punctures = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
    config.modes_per_block = 36;
    config.degeneracy = 2;
    config.working_radius = 2.9;
    std::vector<std::pair<ParameterLoop, ParameterLoop>> pairs;
    pairs.emplace_back(ParameterLoop::circle(0, 0, 2.0, 400),
                       ParameterLoop::circle(0.1, -0.1, 2.3, 400));
    pairs.emplace_back(ParameterLoop::circle(0, 0, 1.8, 380),
                       ParameterLoop::circle(-0.15, 0.1, 2.2, 420));

    const RobustnessSweepResult sweep =
        robustness_break_probe(config, pairs, {0.0, 0.01, 0.05, 0.1});
    bool ok = sweep.rows[0].max_residual <= 1e-6;
    for (size_t i = 1; i < sweep.rows.size(); ++i) {
        ok = ok && sweep.rows[i].max_residual > 1e-6 &&
             sweep.rows[i].max_residual >= sweep.rows[i - 1].max_residual;
    }
    std::ostringstream detail;
    detail << "residuals:";
    for (const auto& row : sweep.rows) detail << " " << row.max_residual;
    report(9, "antiholomorphic robustness breaking (eps sweep)",
           ok && sweep.nondecreasing, detail.str());
}

void criterion_10() {
    bool ok = true;
    std::ostringstream detail;

    const BraidRepresentation ising = ising_representation();
    const BraidRepresentation abelian = abelian_representation(5, 0.91);
    const RelationReport ising_report = verify_representation(ising, 1e-9);
    const RelationReport abelian_report = verify_representation(abelian, 1e-9);
    ok = ok && ising_report.passed && abelian_report.passed;

    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix seed(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) seed(r, c) = Complex(gauss(rng), gauss(rng));
    const BraidRepresentation conjugated =
        conjugate_representation(ising, unitarize(seed));
    const RelationReport conj_report = verify_representation(conjugated, 1e-9);
    const double residual_drift =
        std::abs(conj_report.max_braid_residual - ising_report.max_braid_residual);
    ok = ok && conj_report.passed && residual_drift <= 1e-9;

    std::uniform_int_distribution<int> pick_index(1, 2);
    std::uniform_int_distribution<int> pick_sign(0, 1);
    double worst_hom = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        BraidWord w1, w2;
        w1.n_strands = w2.n_strands = 3;
        for (int i = 0; i < 8; ++i) {
            w1.letters.push_back({pick_index(rng), pick_sign(rng) ? 1 : -1});
            w2.letters.push_back({pick_index(rng), pick_sign(rng) ? 1 : -1});
        }
        const ComplexMatrix joint = evaluate_word(ising, w1.concat(w2));
        const ComplexMatrix composed =
            evaluate_word(ising, w2) * evaluate_word(ising, w1);
        worst_hom = std::max(worst_hom, (joint - composed).cwiseAbs().maxCoeff());
    }
    ok = ok && worst_hom <= 1e-9;

    detail << "relation residual = " << ising_report.max_braid_residual
           << ", conjugation drift = " << residual_drift
           << ", homomorphism worst = " << worst_hom;
    report(10, "braid representation suite", ok, detail.str());
}

void criterion_11(const std::string& cli, const std::string& scenario_dir,
                  const std::string& work_dir) {
    namespace fs = std::filesystem;
    bool ok = true;
    std::ostringstream detail;
    int configs = 0;

    std::vector<fs::path> config_files;
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
        if (entry.path().extension() == ".cfg") config_files.push_back(entry.path());
    }
    std::sort(config_files.begin(), config_files.end());

    auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };

    for (const fs::path& config_path : config_files) {
        ++configs;
        std::string reference;
        for (int run = 0; run < 3 && ok; ++run) {
            const fs::path out_dir =
                fs::path(work_dir) / ("run" + std::to_string(run));
            fs::create_directories(out_dir);
            std::ostringstream command;
            command << '"' << cli << '"' << " run \"" << config_path.string()
                    << "\" --out \"" << out_dir.string() << "\" --quiet";
            const int rc = std::system(command.str().c_str());
            if (rc != 0) {
                ok = false;
                detail << config_path.filename().string() << " exited " << rc << "; ";
                break;
            }
            const ScenarioConfig config =
                load_scenario_config(config_path.string());
            const std::string payload =
                read_file(out_dir / (config.id + ".jsonl"));
            if (payload.empty()) {
                ok = false;
                detail << config_path.filename().string() << " empty output; ";
            } else if (run == 0) {
                reference = payload;
            } else if (payload != reference) {
                ok = false;
                detail << config_path.filename().string() << " bytes differ; ";
            }
        }
        if (!ok) break;
    }
    detail << configs << " config(s), 3 runs each";
    report(11, "CLI determinism over shipped configs", ok && configs > 0,
           detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr,
                     "usage: acceptance_tests <cli-binary> <scenario-dir> <work-dir>\n");
        return 2;
    }

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(argv[1], argv[2], argv[3]);

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criterion(s) FAILED\n", failures);
    return 1;
}
