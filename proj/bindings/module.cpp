// Python bindings for the main operations: ring exchange, spin swaps,
// anyon phases, holonomies and braid words.

#include "phaselab/anyon.hpp"
#include "phaselab/braid.hpp"
#include "phaselab/holomorphic.hpp"
#include "phaselab/holonomy.hpp"
#include "phaselab/ring.hpp"
#include "phaselab/spin.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace phaselab;

namespace {

SwapSchedule make_schedule(std::function<double(double)> phi,
                           std::function<double(double)> extra, double t_start,
                           double t_end, int steps) {
    const TimeGrid grid(t_start, t_end, steps);
    if (extra) return SwapSchedule(std::move(phi), std::move(extra), grid);
    return SwapSchedule(std::move(phi), grid);
}

HamiltonianFamily make_family(int param_dim, int dim,
                              std::function<ComplexMatrix(const RealVector&)> evaluator,
                              int level_index, int degeneracy, double gap_floor,
                              double cluster_width) {
    HamiltonianFamily family;
    family.param_dim = param_dim;
    family.dim = dim;
    family.evaluator = std::move(evaluator);
    family.level_index = level_index;
    family.degeneracy = degeneracy;
    family.gap_floor = gap_floor;
    family.cluster_width = cluster_width;
    return family;
}

std::vector<Vec2> to_points(const std::vector<std::pair<double, double>>& raw) {
    std::vector<Vec2> points;
    points.reserve(raw.size());
    for (const auto& [x, y] : raw) points.push_back({x, y});
    return points;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "phaselab: exchange, geometric and topological phase experiments";

    // ----- linalg
    m.def("principal_phase", &principal_phase, py::arg("phase"));
    m.def("phase_distance", &phase_distance, py::arg("a"), py::arg("b"));
    m.def("matexp_unitary", &matexp_unitary, py::arg("h"), py::arg("dt"));
    m.def("unitarize", &unitarize, py::arg("m"));
    m.def("hermiticity_defect", &hermiticity_defect, py::arg("m"));
    m.def("unitarity_defect", &unitarity_defect, py::arg("u"));
    m.def(
        "timeordered_evolve",
        [](const std::function<ComplexMatrix(double)>& family, double t_start,
           double t_end, int steps) {
            return timeordered_evolve(family, TimeGrid(t_start, t_end, steps));
        },
        py::arg("family"), py::arg("t_start"), py::arg("t_end"), py::arg("steps"));

    // ----- ring exchange
    py::class_<RingState>(m, "RingState")
        .def(py::init<int, ComplexVector>(), py::arg("m_max"), py::arg("amplitudes"))
        .def_static("equal_weight", &RingState::equal_weight, py::arg("m_max"),
                    py::arg("ms"))
        .def_property_readonly("m_max", &RingState::m_max)
        .def_property_readonly("amplitudes", &RingState::amplitudes)
        .def("amplitude", &RingState::amplitude, py::arg("m"))
        .def("overlap", &RingState::overlap, py::arg("other"));

    py::class_<RingEvolveResult>(m, "RingEvolveResult")
        .def_readonly("state", &RingEvolveResult::state)
        .def_readonly("accumulated_phase", &RingEvolveResult::accumulated_phase)
        .def_readonly("truncation_leakage", &RingEvolveResult::truncation_leakage);

    py::class_<ExchangeOutcome>(m, "ExchangeOutcome")
        .def_readonly("total_phase", &ExchangeOutcome::total_phase)
        .def_readonly("exchange_part", &ExchangeOutcome::exchange_part)
        .def_readonly("spatial_dynamical_part",
                      &ExchangeOutcome::spatial_dynamical_part)
        .def_readonly("fidelity", &ExchangeOutcome::fidelity);

    m.def("rotate_ring", &rotate_ring, py::arg("state"), py::arg("theta"));
    m.def("check_swap_orthogonality", &check_swap_orthogonality, py::arg("state"));
    m.def(
        "evolve_ring_swap",
        [](const RingState& state, std::function<double(double)> phi,
           std::function<double(double)> extra, double duration, int steps) {
            return evolve_ring_swap(
                state, make_schedule(std::move(phi), std::move(extra), 0.0, duration,
                                     steps));
        },
        py::arg("state"), py::arg("phi"), py::arg("extra_phase") = nullptr,
        py::arg("duration") = 1.0, py::arg("steps") = 10000);
    m.def(
        "two_particle_swap",
        [](double spin_s, const RingState& state, std::function<double(double)> phi,
           std::function<double(double)> extra, double duration, int steps) {
            return two_particle_swap(
                spin_s, state,
                make_schedule(std::move(phi), std::move(extra), 0.0, duration, steps));
        },
        py::arg("spin"), py::arg("state"), py::arg("phi"),
        py::arg("extra_phase") = nullptr, py::arg("duration") = 1.0,
        py::arg("steps") = 10000);
    m.def(
        "linear_swap_phi",
        [](double duration) {
            return std::function<double(double)>(
                [duration](double t) { return kPi * t / duration; });
        },
        py::arg("duration") = 1.0);

    // ----- spin
    py::class_<SpinSystem>(m, "SpinSystem")
        .def_readonly("s", &SpinSystem::s)
        .def_readonly("dim", &SpinSystem::dim)
        .def_readonly("sx", &SpinSystem::sx)
        .def_readonly("sy", &SpinSystem::sy)
        .def_readonly("sz", &SpinSystem::sz);

    py::class_<PhaseDecomposition>(m, "PhaseDecomposition")
        .def_readonly("total", &PhaseDecomposition::total)
        .def_readonly("dynamical", &PhaseDecomposition::dynamical)
        .def_readonly("geometric", &PhaseDecomposition::geometric);

    py::class_<ConditionedSwapResult>(m, "ConditionedSwapResult")
        .def_readonly("v_a", &ConditionedSwapResult::v_a)
        .def_readonly("v_b", &ConditionedSwapResult::v_b)
        .def_readonly("phi_a", &ConditionedSwapResult::phi_a)
        .def_readonly("phi_b", &ConditionedSwapResult::phi_b)
        .def_readonly("overlap_a", &ConditionedSwapResult::overlap_a)
        .def_readonly("overlap_b", &ConditionedSwapResult::overlap_b);

    m.def("make_spin_system", &make_spin_system, py::arg("s"));
    m.def(
        "rotation_unitary",
        [](const SpinSystem& sys, double nx, double ny, double nz, double angle) {
            return rotation_unitary(sys, Eigen::Vector3d(nx, ny, nz), angle);
        },
        py::arg("sys"), py::arg("nx"), py::arg("ny"), py::arg("nz"), py::arg("angle"));
    m.def("spin_coherent", &spin_coherent, py::arg("sys"), py::arg("theta"),
          py::arg("phi"));
    m.def(
        "conditioned_swap_evolve",
        [](const SpinSystem& sys, std::function<ComplexMatrix(double)> h_a,
           std::function<ComplexMatrix(double)> h_b, const SpinState& sigma,
           const SpinState& tau, double duration, int steps) {
            return conditioned_swap_evolve(sys,
                                           ConditionedHamiltonian{std::move(h_a),
                                                                  std::move(h_b)},
                                           sigma, tau, TimeGrid(0.0, duration, steps));
        },
        py::arg("sys"), py::arg("h_a"), py::arg("h_b"), py::arg("sigma"),
        py::arg("tau"), py::arg("duration") = 1.0, py::arg("steps") = 4000);
    m.def("two_track_unitary", &two_track_unitary, py::arg("v_a"), py::arg("v_b"));
    m.def("spin_phase_sum", &spin_phase_sum, py::arg("phi_a"), py::arg("phi_b"));
    m.def(
        "aa_decompose",
        [](const std::vector<SpinState>& trajectory,
           std::function<ComplexMatrix(double)> h, double duration, double tol) {
            const int steps = static_cast<int>(trajectory.size()) - 1;
            return aa_decompose(trajectory, h, TimeGrid(0.0, duration, steps), tol);
        },
        py::arg("trajectory"), py::arg("h"), py::arg("duration") = 1.0,
        py::arg("closure_tol") = 1e-6);
    m.def(
        "evolve_trajectory",
        [](std::function<ComplexMatrix(double)> h, const SpinState& psi0,
           double duration, int steps) {
            return evolve_trajectory(h, psi0, TimeGrid(0.0, duration, steps));
        },
        py::arg("h"), py::arg("psi0"), py::arg("duration") = 1.0,
        py::arg("steps") = 4000);
    m.def("total_observable_phase", &total_observable_phase, py::arg("spin"),
          py::arg("phi_spatial"), py::arg("phi_spin"));

    // ----- anyons
    py::class_<AnyonSpecies>(m, "AnyonSpecies")
        .def(py::init<double, double>(), py::arg("charge"), py::arg("flux"))
        .def_readonly("charge", &AnyonSpecies::charge)
        .def_readonly("flux", &AnyonSpecies::flux)
        .def_property_readonly("statistics_angle", &AnyonSpecies::statistics_angle)
        .def_property_readonly("pair_phase", &AnyonSpecies::pair_phase);

    py::class_<PlanarPath>(m, "PlanarPath")
        .def(py::init([](const std::vector<std::pair<double, double>>& vertices,
                         bool closed) {
                 PlanarPath path{to_points(vertices), closed};
                 path.validate();
                 return path;
             }),
             py::arg("vertices"), py::arg("closed") = true)
        .def_property_readonly("vertices",
                               [](const PlanarPath& path) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Vec2& v : path.vertices) {
                                       out.emplace_back(v.x, v.y);
                                   }
                                   return out;
                               })
        .def("signed_area", &PlanarPath::signed_area);

    py::class_<FieldMap>(m, "FieldMap")
        .def_static("zero", &FieldMap::zero)
        .def_static(
            "uniform_rect",
            [](double value, double xmin, double ymin, double xmax, double ymax) {
                return FieldMap::uniform_rect(value, {xmin, ymin, xmax, ymax});
            },
            py::arg("value"), py::arg("xmin"), py::arg("ymin"), py::arg("xmax"),
            py::arg("ymax"))
        .def_static("uniform_everywhere", &FieldMap::uniform_everywhere,
                    py::arg("value"))
        .def_static(
            "grid",
            [](std::pair<double, double> origin, double cell_size, int n_cols,
               int n_rows, std::vector<double> values) {
                return FieldMap::grid({origin.first, origin.second}, cell_size,
                                      n_cols, n_rows, std::move(values));
            },
            py::arg("origin"), py::arg("cell_size"), py::arg("n_cols"),
            py::arg("n_rows"), py::arg("values"));

    py::class_<AnyonPhaseReport>(m, "AnyonPhaseReport")
        .def_readonly("topological", &AnyonPhaseReport::topological)
        .def_readonly("geometric", &AnyonPhaseReport::geometric)
        .def_readonly("total", &AnyonPhaseReport::total)
        .def_readonly("windings", &AnyonPhaseReport::windings);

    m.def(
        "winding_number",
        [](const PlanarPath& path, std::pair<double, double> point) {
            return winding_number(path, {point.first, point.second});
        },
        py::arg("path"), py::arg("point"));
    m.def(
        "mutual_braid_phase",
        [](const AnyonSpecies& species, const PlanarPath& path,
           const std::vector<std::pair<double, double>>& others) {
            return mutual_braid_phase(species, path, to_points(others));
        },
        py::arg("species"), py::arg("path"), py::arg("others"));
    m.def("enclosed_external_flux", &enclosed_external_flux, py::arg("path"),
          py::arg("field"), py::arg("resolution") = 400);
    m.def(
        "total_anyon_phase",
        [](const AnyonSpecies& species, const PlanarPath& path,
           const std::vector<std::pair<double, double>>& others, const FieldMap& field,
           int resolution) {
            return total_anyon_phase(species, path, to_points(others), field,
                                     resolution);
        },
        py::arg("species"), py::arg("path"), py::arg("others"), py::arg("field"),
        py::arg("resolution") = 400);

    // ----- holonomy
    py::class_<HamiltonianFamily>(m, "HamiltonianFamily")
        .def(py::init(&make_family), py::arg("param_dim"), py::arg("dim"),
             py::arg("evaluator"), py::arg("level_index") = 0,
             py::arg("degeneracy") = 1, py::arg("gap_floor") = 1e-6,
             py::arg("cluster_width") = 1e-8)
        .def_readonly("param_dim", &HamiltonianFamily::param_dim)
        .def_readonly("dim", &HamiltonianFamily::dim)
        .def_readonly("degeneracy", &HamiltonianFamily::degeneracy);

    py::class_<ParameterLoop>(m, "ParameterLoop")
        .def(py::init([](const std::vector<RealVector>& samples) {
                 ParameterLoop loop;
                 loop.samples = samples;
                 return loop;
             }),
             py::arg("samples"))
        .def_static("circle", &ParameterLoop::circle, py::arg("cx"), py::arg("cy"),
                    py::arg("r"), py::arg("n_samples"))
        .def_property_readonly(
            "samples", [](const ParameterLoop& loop) { return loop.samples; })
        .def("refined", &ParameterLoop::refined);

    py::class_<Frame>(m, "Frame")
        .def_readonly("columns", &Frame::columns)
        .def("orthonormality_defect", &Frame::orthonormality_defect);

    py::class_<HolonomyResult>(m, "HolonomyResult")
        .def_readonly("u_l", &HolonomyResult::u_l)
        .def_readonly("end_alignment", &HolonomyResult::end_alignment)
        .def_readonly("combined", &HolonomyResult::combined)
        .def_readonly("eigenphases", &HolonomyResult::eigenphases)
        .def_readonly("overall_phase", &HolonomyResult::overall_phase)
        .def_readonly("projective_part", &HolonomyResult::projective_part)
        .def_readonly("min_overlap_sv", &HolonomyResult::min_overlap_sv);

    py::class_<ProjectiveDistance>(m, "ProjectiveDistance")
        .def_readonly("phase", &ProjectiveDistance::phase)
        .def_readonly("residual", &ProjectiveDistance::residual)
        .def_readonly("phase_defined", &ProjectiveDistance::phase_defined);

    m.def(
        "frame_at",
        [](const HamiltonianFamily& family, const RealVector& lambda,
           const Frame* previous) { return frame_at(family, lambda, previous); },
        py::arg("family"), py::arg("lambda"), py::arg("previous") = nullptr);
    m.def("holonomy_overlap", &holonomy_overlap, py::arg("family"), py::arg("loop"),
          py::arg("min_overlap") = 0.9);
    m.def("holonomy_connection", &holonomy_connection, py::arg("family"),
          py::arg("loop"), py::arg("fd_step") = 1e-4);
    m.def("projective_distance", &projective_distance, py::arg("u1"), py::arg("u2"));
    m.def("eigenphase_multiset_distance", &eigenphase_multiset_distance, py::arg("a"),
          py::arg("b"));

    // ----- holomorphic family
    py::enum_<PerturbationMode>(m, "PerturbationMode")
        .value("ANTIHOLOMORPHIC", PerturbationMode::Antiholomorphic)
        .value("EXTRA_PARAMETER", PerturbationMode::ExtraParameter);

    py::class_<HolomorphicFamily>(m, "HolomorphicFamily")
        .def_property_readonly("hilbert_dim", &HolomorphicFamily::hilbert_dim)
        .def_property_readonly("param_dim", &HolomorphicFamily::param_dim)
        .def("generator", &HolomorphicFamily::generator, py::arg("lambda"))
        .def("cauchy_riemann_residual", &HolomorphicFamily::cauchy_riemann_residual,
             py::arg("lambda"), py::arg("fd_step") = 1e-5)
        .def("induced_family", &HolomorphicFamily::induced_family)
        .def("loop_windings", &HolomorphicFamily::loop_windings, py::arg("loop"))
        .def("generator_monodromy", &HolomorphicFamily::generator_monodromy,
             py::arg("loop"));

    m.def(
        "make_holomorphic_family",
        [](const std::vector<Complex>& punctures, std::vector<int> orders,
           double magnetic_length, int modes_per_block, int degeneracy,
           double working_radius, double epsilon, PerturbationMode mode) {
            HolomorphicFamilyConfig config;
            config.punctures = punctures;
            config.puncture_orders = std::move(orders);
            config.magnetic_length = magnetic_length;
            config.modes_per_block = modes_per_block;
            config.degeneracy = degeneracy;
            config.working_radius = working_radius;
            config.epsilon = epsilon;
            config.mode = mode;
            return make_holomorphic_family(std::move(config));
        },
        py::arg("punctures"), py::arg("orders") = std::vector<int>{},
        py::arg("magnetic_length") = 1.0, py::arg("modes_per_block") = 40,
        py::arg("degeneracy") = 2, py::arg("working_radius") = 3.0,
        py::arg("epsilon") = 0.0,
        py::arg("mode") = PerturbationMode::Antiholomorphic);

    // ----- braids
    py::class_<BraidWord>(m, "BraidWord")
        .def_property_readonly("n_strands",
                               [](const BraidWord& w) { return w.n_strands; })
        .def("inverse", &BraidWord::inverse)
        .def("concat", &BraidWord::concat)
        .def("__str__", &format_braid_word);

    py::class_<BraidRepresentation>(m, "BraidRepresentation")
        .def_readonly("n_strands", &BraidRepresentation::n_strands)
        .def_readonly("dimension", &BraidRepresentation::dimension)
        .def("image",
             [](const BraidRepresentation& rep, int index) {
                 return rep.generator_images.at(index);
             },
             py::arg("index"));

    py::class_<RelationReport>(m, "RelationReport")
        .def_readonly("max_braid_residual", &RelationReport::max_braid_residual)
        .def_readonly("max_commutation_residual",
                      &RelationReport::max_commutation_residual)
        .def_readonly("passed", &RelationReport::passed);

    m.def("parse_braid_word", &parse_braid_word, py::arg("text"), py::arg("n_strands"));
    m.def("format_braid_word", &format_braid_word, py::arg("word"));
    m.def("reduce_word", &reduce_word, py::arg("word"));
    m.def("verify_representation", &verify_representation, py::arg("rep"),
          py::arg("tol"));
    m.def("evaluate_word", &evaluate_word, py::arg("rep"), py::arg("word"));
    m.def("conjugate_representation", &conjugate_representation, py::arg("rep"),
          py::arg("v"));
    m.def("abelian_representation", &abelian_representation, py::arg("n_strands"),
          py::arg("theta"));
    m.def("ising_representation", &ising_representation);
    m.def("compare_braid_to_holonomy", &compare_braid_to_holonomy, py::arg("rep"),
          py::arg("word"), py::arg("holonomy"));

    m.attr("PI") = kPi;
}
