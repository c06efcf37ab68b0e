#pragma once

#include "phaselab/linalg.hpp"

#include <vector>

// Spin-degree swapping with spatially conditioned Hamiltonians. The two
// spatial tracks A and B stay exactly orthogonal, so the conditioned
// evolution factors into two independent spin-space evolutions; the joint
// two-track operator is assembled block-diagonally from them.

namespace phaselab {

using SpinState = ComplexVector;

/// Spin-s operators built by the ladder construction. Basis ordering is
/// m = s, s-1, ..., -s, so Sz = diag(s, ..., -s).
struct SpinSystem {
    double s = 0.5;
    int dim = 2;
    ComplexMatrix sx, sy, sz;

    /// n . S for a unit 3-vector n.
    ComplexMatrix along(const Eigen::Vector3d& axis) const;
};

/// Validates that 2s is a positive integer and builds the operators.
SpinSystem make_spin_system(double s);

/// exp(-i angle (axis . S)); axis must be a unit vector.
ComplexMatrix rotation_unitary(const SpinSystem& sys, const Eigen::Vector3d& axis,
                               double angle);

/// Spin coherent state pointing along (theta, phi) on the sphere: the
/// highest-weight |m = s> rotated from +z.
SpinState spin_coherent(const SpinSystem& sys, double theta, double phi);

/// Track-conditioned spin Hamiltonians: H(t) = |A><A| ox H_A(t) + |B><B| ox H_B(t).
struct ConditionedHamiltonian {
    HamiltonianOfTime h_a;
    HamiltonianOfTime h_b;

    /// Joint two-track operator at time t, block-diagonal by construction:
    /// the off-track blocks are exact zeros.
    ComplexMatrix joint(double t) const;
};

struct ConditionedSwapResult {
    ComplexMatrix v_a;  // timeordered evolution of H_A
    ComplexMatrix v_b;  // timeordered evolution of H_B
    double phi_a = 0.0; // arg <tau|V_A|sigma>
    double phi_b = 0.0; // arg <sigma|V_B|tau>
    double overlap_a = 0.0;
    double overlap_b = 0.0;
};

/// Evolves both track Hamiltonians and checks that V_A swaps sigma -> tau and
/// V_B swaps tau -> sigma up to phase (|overlap| >= 1 - 1e-8 each, otherwise
/// a "not a spin swap" rejection quoting the achieved overlap).
ConditionedSwapResult conditioned_swap_evolve(const SpinSystem& sys,
                                              const ConditionedHamiltonian& cond,
                                              const SpinState& sigma,
                                              const SpinState& tau,
                                              const TimeGrid& grid);

/// Block-diagonal two-track unitary diag(V_A, V_B); off-track blocks are
/// exact zeros.
ComplexMatrix two_track_unitary(const ComplexMatrix& v_a, const ComplexMatrix& v_b);

/// phi_A + phi_B mod 2pi; equals arg <sigma|V_B V_A|sigma> for valid swaps.
double spin_phase_sum(double phi_a, double phi_b);

/// Total phase split for a closed ray-space loop, Anandan-Aharonov style:
/// total = dynamical + geometric (mod 2pi) by construction. total and
/// geometric are principal values; dynamical is kept unwrapped because it
/// scales with traversal time.
struct PhaseDecomposition {
    double total = 0.0;
    double dynamical = 0.0;
    double geometric = 0.0;
};

/// Splits the phase of a sampled closed-loop trajectory into the dynamical
/// part -integral <psi|H|psi> dt (trapezoidal on the grid) and the geometric
/// remainder. The trajectory must return to the initial ray within the
/// closure tolerance.
PhaseDecomposition aa_decompose(const std::vector<SpinState>& trajectory,
                                const HamiltonianOfTime& h, const TimeGrid& grid,
                                double closure_tol = 1e-6);

/// Convenience: trajectory of psi0 under per-step midpoint evolution,
/// sampled at all grid points (n_steps + 1 states).
std::vector<SpinState> evolve_trajectory(const HamiltonianOfTime& h,
                                         const SpinState& psi0,
                                         const TimeGrid& grid);

/// 2 s pi + phi_spatial + phi_spin, mod 2pi.
double total_observable_phase(double spin_s, double phi_spatial, double phi_spin);

}  // namespace phaselab
