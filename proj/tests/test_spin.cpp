#include "phaselab/spin.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace phaselab;
using namespace phaselab::testing;

TEST_CASE("make_spin_system: ladder-operator oracle") {
    for (double s : {0.5, 1.0, 1.5, 2.5}) {
        const SpinSystem sys = make_spin_system(s);
        const int dim = sys.dim;
        CHECK(dim == static_cast<int>(2 * s + 1));

        // Independent oracle: rebuild S+ from <m'|S+|m> = sqrt(s(s+1) - m(m+1)).
        ComplexMatrix s_plus = ComplexMatrix::Zero(dim, dim);
        for (int col = 0; col < dim; ++col) {
            const double m = s - col;
            if (col > 0) s_plus(col - 1, col) = std::sqrt(s * (s + 1) - m * (m + 1));
        }
        const ComplexMatrix sx = 0.5 * (s_plus + s_plus.adjoint());
        const ComplexMatrix sy = Complex(0, -0.5) * (s_plus - s_plus.adjoint());
        CHECK((sys.sx - sx).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((sys.sy - sy).cwiseAbs().maxCoeff() < 1e-14);

        // Invariants: commutator, spectrum, Casimir.
        const ComplexMatrix comm = sys.sx * sys.sy - sys.sy * sys.sx;
        CHECK((comm - Complex(0, 1) * sys.sz).cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 0; i < dim; ++i) {
            CHECK(std::real(sys.sz(i, i)) == doctest::Approx(s - i));
        }
        const ComplexMatrix casimir =
            sys.sx * sys.sx + sys.sy * sys.sy + sys.sz * sys.sz;
        const ComplexMatrix expected =
            s * (s + 1) * ComplexMatrix::Identity(dim, dim);
        CHECK((casimir - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("make_spin_system: spin-1/2 is the half-Pauli pattern") {
    const SpinSystem sys = make_spin_system(0.5);
    CHECK(sys.sz(0, 0) == Complex(0.5, 0.0));
    CHECK(sys.sz(1, 1) == Complex(-0.5, 0.0));
    CHECK(sys.sx(0, 1) == Complex(0.5, 0.0));
    CHECK(sys.sy(0, 1) == Complex(0.0, -0.5));
}

TEST_CASE("make_spin_system rejects non-half-integers") {
    CHECK_THROWS_AS(make_spin_system(0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_spin_system(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_spin_system(-1.0), std::invalid_argument);
}

TEST_CASE("rotation_unitary: identity, 2pi sign by spin, zero axis rejected") {
    const Eigen::Vector3d z(0.0, 0.0, 1.0);
    const SpinSystem half = make_spin_system(0.5);
    CHECK((rotation_unitary(half, z, 0.0) - ComplexMatrix::Identity(2, 2)).norm() <
          1e-14);
    const ComplexMatrix full_half = rotation_unitary(half, z, 2.0 * kPi);
    CHECK((full_half + ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

    const SpinSystem one = make_spin_system(1.0);
    const ComplexMatrix full_one = rotation_unitary(one, z, 2.0 * kPi);
    CHECK((full_one - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);

    CHECK_THROWS_AS(rotation_unitary(half, Eigen::Vector3d::Zero(), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(rotation_unitary(half, Eigen::Vector3d(0, 0, 2), 1.0),
                    std::invalid_argument);
}

TEST_CASE("conditioned_swap_evolve: common z rotation swaps x-polarized spins") {
    const SpinSystem sys = make_spin_system(0.5);
    const SpinState sigma = spin_coherent(sys, kPi / 2, 0.0);
    const SpinState tau = spin_coherent(sys, kPi / 2, kPi);
    const TimeGrid grid(0.0, 1.0, 2000);
    const ComplexMatrix h = kPi * sys.sz;  // half rotation over the window
    ConditionedHamiltonian cond{[&h](double) { return h; }, [&h](double) { return h; }};

    const ConditionedSwapResult result =
        conditioned_swap_evolve(sys, cond, sigma, tau, grid);
    CHECK(result.overlap_a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.overlap_b == doctest::Approx(1.0).epsilon(1e-9));
    // V_B V_A is the full 2pi rotation: phase sum pi for s = 1/2.
    CHECK(phase_distance(spin_phase_sum(result.phi_a, result.phi_b), kPi) < 1e-9);
}

TEST_CASE("conditioned_swap_evolve: reversed conjugate schedule cancels") {
    const SpinSystem sys = make_spin_system(1.5);
    const TimeGrid grid(0.0, 1.0, 1500);
    const ComplexMatrix a = sys.sx;
    const ComplexMatrix b = 0.6 * sys.sz;
    auto h_a = [&](double t) { return ComplexMatrix(a + std::cos(2.0 * t) * b); };
    auto h_b = [&, duration = 1.0](double t) {
        return ComplexMatrix(-h_a(duration - t));
    };
    const SpinState sigma = spin_coherent(sys, 0.3, 0.7);
    const SpinState tau = timeordered_evolve(h_a, grid) * sigma;

    const ConditionedSwapResult result =
        conditioned_swap_evolve(sys, ConditionedHamiltonian{h_a, h_b}, sigma, tau, grid);
    CHECK((result.v_b - result.v_a.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(phase_distance(spin_phase_sum(result.phi_a, result.phi_b), 0.0) < 1e-10);
}

TEST_CASE("conditioned_swap_evolve: degenerate no-swap case and rejection") {
    const SpinSystem sys = make_spin_system(0.5);
    const SpinState sigma = spin_coherent(sys, 0.4, 0.0);
    const TimeGrid grid(0.0, 1.0, 50);
    auto zero = [&sys](double) { return ComplexMatrix(ComplexMatrix::Zero(2, 2)); };
    const ConditionedSwapResult still =
        conditioned_swap_evolve(sys, {zero, zero}, sigma, sigma, grid);
    CHECK((still.v_a - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(still.phi_a == doctest::Approx(0.0));
    CHECK(still.phi_b == doctest::Approx(0.0));

    // A z rotation does not map sigma to an orthogonal-ish target: reject.
    const SpinState tau = spin_coherent(sys, kPi - 0.4, 0.0);
    auto drive = [&sys](double) { return ComplexMatrix(kPi * sys.sz); };
    CHECK_THROWS_WITH_AS(conditioned_swap_evolve(sys, {drive, drive}, sigma, tau, grid),
                         doctest::Contains("not a spin swap"), std::invalid_argument);
}

TEST_CASE("two-track conditioned evolution never mixes the tracks") {
    const SpinSystem sys = make_spin_system(1.0);
    std::mt19937 rng(41);
    const ComplexMatrix ha = random_hermitian(3, rng);
    const ComplexMatrix hb = random_hermitian(3, rng);
    ConditionedHamiltonian cond{[&ha](double) { return ha; },
                                [&hb](double) { return hb; }};
    const ComplexMatrix joint = cond.joint(0.0);
    CHECK(joint.topRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(joint.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);

    const TimeGrid grid(0.0, 1.0, 200);
    const ComplexMatrix va = timeordered_evolve(cond.h_a, grid);
    const ComplexMatrix vb = timeordered_evolve(cond.h_b, grid);
    const ComplexMatrix u = two_track_unitary(va, vb);
    CHECK(u.topRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);  // exact zeros
    CHECK(u.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(unitarity_defect(u) < 1e-10);
}

TEST_CASE("spin_phase_sum: addition, cancellation, product oracle") {
    CHECK(spin_phase_sum(0.3, 0.4) == doctest::Approx(0.7));
    CHECK(spin_phase_sum(1.234, -1.234) == doctest::Approx(0.0));

    // Random valid swap pair: sum equals arg<sigma|V_B V_A|sigma>.
    const SpinSystem sys = make_spin_system(1.0);
    std::mt19937 rng(42);
    const TimeGrid grid(0.0, 1.0, 800);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix g = random_hermitian(3, rng);
        auto h_a = [&g](double t) { return ComplexMatrix((1.0 + 0.3 * t) * g); };
        SpinState sigma = SpinState::Zero(3);
        sigma << Complex(0.6, 0.1), Complex(0.0, 0.5), Complex(0.62, 0.0);
        sigma.normalize();
        const ComplexMatrix v_a = timeordered_evolve(h_a, grid);
        const SpinState tau = v_a * sigma;
        auto h_b = [&g](double t) { return ComplexMatrix(-(1.0 + 0.3 * (1.0 - t)) * g); };
        const ConditionedSwapResult result = conditioned_swap_evolve(
            sys, ConditionedHamiltonian{h_a, h_b}, sigma, tau, grid);
        const Complex product_amp = sigma.dot(result.v_b * result.v_a * sigma);
        CHECK(phase_distance(spin_phase_sum(result.phi_a, result.phi_b),
                             std::arg(product_amp)) < 1e-9);
        // Eq.-(20)-style symmetry: the tau route gives the same sum.
        const Complex tau_amp = tau.dot(result.v_a * result.v_b * tau);
        CHECK(phase_distance(std::arg(product_amp), std::arg(tau_amp)) < 1e-9);
    }
}

TEST_CASE("aa_decompose: stationary state is purely dynamical") {
    const SpinSystem sys = make_spin_system(0.5);
    const ComplexMatrix h = 0.8 * sys.sz;
    const TimeGrid grid(0.0, 3.0, 600);
    SpinState up = SpinState::Zero(2);
    up[0] = 1.0;  // eigenstate, E = 0.4
    const auto trajectory =
        evolve_trajectory([&h](double) { return h; }, up, grid);
    const PhaseDecomposition split =
        aa_decompose(trajectory, [&h](double) { return h; }, grid);
    CHECK(split.total == doctest::Approx(principal_phase(-0.4 * 3.0)).epsilon(1e-9));
    CHECK(split.dynamical == doctest::Approx(-0.4 * 3.0).epsilon(1e-9));
    CHECK(phase_distance(split.geometric, 0.0) < 1e-9);
}

TEST_CASE("aa_decompose: equatorial loop geometric phase is 2 pi s") {
    for (double s : {0.5, 1.0, 1.5}) {
        const SpinSystem sys = make_spin_system(s);
        const double duration = 1.0;
        const double omega = 2.0 * kPi / duration;
        const ComplexMatrix h = omega * sys.sz;
        const TimeGrid grid(0.0, duration, 2000);
        const SpinState start = spin_coherent(sys, kPi / 2, 0.0);
        const auto trajectory =
            evolve_trajectory([&h](double) { return h; }, start, grid);
        const PhaseDecomposition split =
            aa_decompose(trajectory, [&h](double) { return h; }, grid);
        CHECK(std::abs(split.dynamical) < 1e-9);  // <Sz> = 0 on the equator
        CHECK(phase_distance(split.geometric, 2.0 * kPi * s) < 1e-6);
    }
}

TEST_CASE("aa_decompose: reparameterization moves dynamical, not geometric") {
    const SpinSystem sys = make_spin_system(0.5);
    const Eigen::Vector3d axis(0.0, std::sin(0.3), std::cos(0.3));
    const ComplexMatrix generator = sys.along(axis);
    const SpinState start = spin_coherent(sys, kPi / 2 + 0.3, kPi / 2);

    auto run = [&](double duration, double scale, int steps) {
        const ComplexMatrix h = scale * generator;
        const TimeGrid grid(0.0, duration, steps);
        const auto trajectory =
            evolve_trajectory([&h](double) { return h; }, start, grid);
        return aa_decompose(trajectory, [&h](double) { return h; }, grid);
    };
    const PhaseDecomposition fast = run(1.0, 2.0 * kPi, 4000);
    const PhaseDecomposition slow = run(2.0, kPi, 8000);  // half speed, same loop
    CHECK(phase_distance(fast.geometric, slow.geometric) < 1e-6);
    CHECK(slow.dynamical == doctest::Approx(2.0 * fast.dynamical).epsilon(1e-6));
}

TEST_CASE("aa_decompose rejects open trajectories naming the defect") {
    const SpinSystem sys = make_spin_system(0.5);
    const ComplexMatrix h = kPi * sys.sx;  // half turn: not a closed ray loop
    const TimeGrid grid(0.0, 0.5, 100);
    const auto trajectory = evolve_trajectory([&h](double) { return h; },
                                              spin_coherent(sys, 0.0, 0.0), grid);
    CHECK_THROWS_WITH_AS(aa_decompose(trajectory, [&h](double) { return h; }, grid),
                         doctest::Contains("closed"), std::invalid_argument);
}

TEST_CASE("total_observable_phase: paper scenarios") {
    CHECK(phase_distance(total_observable_phase(0.5, 0.0, 0.0), kPi) < 1e-12);
    CHECK(phase_distance(total_observable_phase(0.5, 0.0, kPi), 0.0) < 1e-12);
    CHECK(phase_distance(total_observable_phase(1.0, kPi / 2, kPi / 2), kPi) < 1e-12);
}
