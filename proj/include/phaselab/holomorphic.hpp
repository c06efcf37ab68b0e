#pragma once

#include "phaselab/holonomy.hpp"

#include <complex>
#include <memory>
#include <vector>

// Toy lowest-Landau-level-like family for the topological-robustness
// experiments. Each of the D frame vectors lives in its own orthogonal
// block and is a truncated coherent expansion in the mobile coordinate
// eta = (x + i y) / l_B:
//
//   psi_a(eta)_k = exp(-|alpha_a|^2 / 2) * h_a(eta) * alpha_a^k / sqrt(k!)
//
// with alpha_a = eta / sqrt(2) at epsilon = 0 and h_a a rational function
// with integer-order zeros or poles at the punctures. The amplitudes are
// then holomorphic in eta up to the Gaussian factor, the induced projector
// family is smooth and exactly D-fold degenerate, and the holonomy of any
// loop is the enclosed-area phase times a matrix that is trivial in the
// unperturbed family. Two error mechanisms are modeled:
//
//   antiholomorphic: alpha_a = (eta + eps * kappa_a * conj(eta)) / sqrt(2),
//     a block-dependent conjugate admixture;
//   extra-parameter: the family gains a third coordinate zeta with
//     alpha_a = (eta + eps * kappa_a * zeta) / sqrt(2), unperturbed on the
//     zeta = 0 slice.

namespace phaselab {

enum class PerturbationMode { Antiholomorphic, ExtraParameter };

struct HolomorphicFamilyConfig {
    std::vector<Complex> punctures;       // in units of l_B, pairwise distinct
    std::vector<int> puncture_orders;     // zero/pole order per puncture (default 1)
    double magnetic_length = 1.0;
    int modes_per_block = 40;             // coherent truncation K per block
    int degeneracy = 2;                   // D
    double working_radius = 3.0;          // |eta| reach the truncation must cover
    double epsilon = 0.0;
    PerturbationMode mode = PerturbationMode::Antiholomorphic;
};

class HolomorphicFamily {
public:
    explicit HolomorphicFamily(HolomorphicFamilyConfig config);

    const HolomorphicFamilyConfig& config() const { return config_; }
    int hilbert_dim() const;
    int param_dim() const;  // 2, or 3 in extra-parameter mode

    /// Mobile coordinate for a parameter point (x, y[, zeta]).
    Complex eta(const RealVector& lambda) const;

    /// Per-block coherent parameter alpha_a at a parameter point.
    Complex coherent_parameter(int block, const RealVector& lambda) const;

    /// Unnormalized frame generator: hilbert_dim x D columns of the block
    /// amplitudes described above (Gaussian factor included). Rejects points
    /// at or numerically on a puncture.
    ComplexMatrix generator(const RealVector& lambda) const;

    /// Max |d amplitude / d eta*| over the generator columns at lambda after
    /// factoring out the Gaussian, by central differences. Zero (to finite-
    /// difference accuracy) iff the amplitudes are holomorphic in eta.
    double cauchy_riemann_residual(const RealVector& lambda,
                                   double fd_step = 1e-5) const;

    /// The induced Hamiltonian family H(lambda) = I - P(lambda) with P the
    /// projector onto the frame span: the selected cluster is the exact
    /// D-fold eigenvalue 0 with gap 1.
    HamiltonianFamily induced_family() const;

    /// Winding numbers of a parameter loop around each puncture (x,y
    /// projection of the loop).
    std::vector<int> loop_windings(const ParameterLoop& loop) const;

    /// Monodromy of the frame generator continued once around the loop:
    /// diag over blocks of the accumulated branch phases of h_a. With
    /// integer puncture orders this is the identity; it is exposed to make
    /// the analytic-continuation convention testable.
    ComplexMatrix generator_monodromy(const ParameterLoop& loop) const;

private:
    HolomorphicFamilyConfig config_;
    std::vector<double> kappa_;  // per-block perturbation weights
};

HolomorphicFamily make_holomorphic_family(HolomorphicFamilyConfig config);

struct RobustnessSweepRow {
    double epsilon = 0.0;
    std::vector<double> pair_residuals;  // projective residuals per loop pair
    double max_residual = 0.0;
};

struct RobustnessSweepResult {
    std::vector<RobustnessSweepRow> rows;  // in epsilon input order
    bool nondecreasing = true;             // max residual trend over the sweep
};

/// For each epsilon, rebuilds the family and compares U_L * B between the
/// two loops of every pair; loop pairs must be homotopic (equal windings
/// around all punctures).
RobustnessSweepResult robustness_break_probe(
    const HolomorphicFamilyConfig& base_config,
    const std::vector<std::pair<ParameterLoop, ParameterLoop>>& loop_pairs,
    const std::vector<double>& epsilon_sweep);

}  // namespace phaselab
