#pragma once

#include "phaselab/linalg.hpp"

#include <optional>
#include <vector>

// Non-abelian Berry connections and path-ordered holonomies over a
// parameterized Hermitian family. The reference implementation is the
// discrete Wilson line (ordered product of successive frame overlaps); the
// finite-difference connection integral is the independent cross-check.

namespace phaselab {

/// Parameterized Hermitian family with a selected degenerate eigenvalue
/// cluster. level_index is the index (ascending eigenvalue order) of the
/// first eigenvalue of the cluster; the cluster holds `degeneracy`
/// consecutive eigenvalues. The evaluator must be pure.
struct HamiltonianFamily {
    int param_dim = 1;
    int dim = 2;
    std::function<ComplexMatrix(const RealVector&)> evaluator;
    int level_index = 0;
    int degeneracy = 1;
    double gap_floor = 1e-6;       // minimum gap between cluster and the rest
    double cluster_width = 1e-8;   // maximum eigenvalue spread inside the cluster
};

/// Closed loop in parameter space; samples.front() must equal samples.back().
struct ParameterLoop {
    std::vector<RealVector> samples;
    int refinement_level = 0;

    void validate(int param_dim) const;
    /// Midpoint-inserted refinement (doubles the segment count).
    ParameterLoop refined() const;

    /// Circle of radius r about (cx, cy) with n segments (k = 2 loops).
    static ParameterLoop circle(double cx, double cy, double r, int n_samples);
    /// Closed polyline through the given 2D points, resampled to about
    /// n_samples roughly equidistant points.
    static ParameterLoop polygon(const std::vector<RealVector>& corners,
                                 int n_samples);
};

/// N x D matrix with orthonormal columns spanning the selected subspace.
struct Frame {
    ComplexMatrix columns;

    int dim() const { return static_cast<int>(columns.rows()); }
    int degeneracy() const { return static_cast<int>(columns.cols()); }
    double orthonormality_defect() const;
};

/// Eigen-frame of the selected cluster at lambda. If `previous` is given the
/// frame is gauge-aligned to it (polar factor of previous^dagger * new
/// applied), which makes frames continuous along paths. Rejects gap
/// collapse, naming lambda and the offending gap.
Frame frame_at(const HamiltonianFamily& family, const RealVector& lambda,
               const Frame* previous = nullptr);

/// Berry-matrix samples (A_i)_ab = i <phi_a | d/d lambda_i phi_b> from
/// central differences in the gauge anchored to `reference` (all frames
/// aligned to that one fixed frame). The Hermitian part is kept; the
/// anti-Hermitian finite-difference residual is reported, with `warning`
/// set instead of failing. Note: anchoring at lambda itself yields the
/// geodesic gauge in which the connection vanishes at the anchor point, so
/// loop integration must anchor elsewhere (e.g. the loop base frame).
struct BerryConnectionSample {
    std::vector<ComplexMatrix> components;  // one D x D matrix per direction
    double antihermitian_residual = 0.0;
    bool warning = false;
};

BerryConnectionSample berry_connection_fd(const HamiltonianFamily& family,
                                          const RealVector& lambda, double step,
                                          const Frame& reference,
                                          double residual_tol = 1e-3);

struct HolonomyResult {
    ComplexMatrix u_l;             // loop transport in the initial-frame convention
    ComplexMatrix end_alignment;   // B, mapping the transported final frame back
    ComplexMatrix combined;        // U_L * B, the gauge-invariant holonomy
    std::vector<double> eigenphases;  // of combined, sorted ascending
    double overall_phase = 0.0;       // arg det(combined) / D
    ComplexMatrix projective_part;    // combined with the overall phase removed
    double min_overlap_sv = 1.0;      // smallest singular value seen in overlaps
    int refinement_level = 0;
};

/// Frames transported around the loop (sequentially aligned), including the
/// closing frame at the repeated base point.
struct TransportedFrames {
    std::vector<Frame> frames;  // loop.samples.size() entries
    ParameterLoop loop;
    double min_overlap_sv = 1.0;
};

TransportedFrames transport_frames(const HamiltonianFamily& family,
                                   const ParameterLoop& loop,
                                   double min_overlap = 0.9);

/// Discrete Wilson line over precomputed frames.
HolonomyResult holonomy_from_frames(const TransportedFrames& transported);

/// Overlap-product holonomy. If any successive overlap falls below
/// min_overlap the loop is refined once; a second failure is an error.
HolonomyResult holonomy_overlap(const HamiltonianFamily& family,
                                const ParameterLoop& loop,
                                double min_overlap = 0.9);

/// Path-ordered product of exp(i sum_i A_i dlambda_i) with A sampled by
/// central differences at segment midpoints in the loop-base anchored gauge.
HolonomyResult holonomy_connection(const HamiltonianFamily& family,
                                   const ParameterLoop& loop, double fd_step = 1e-4);

/// Recomputes the Wilson line with per-sample regauged frames F_j -> F_j G_j.
/// The spectrum of U_L * B is invariant; U_L alone generally is not.
HolonomyResult regauge(const TransportedFrames& transported,
                       const std::vector<ComplexMatrix>& gauges);

struct ProjectiveDistance {
    double phase = 0.0;     // arg tr(U1^dagger U2)
    double residual = 0.0;  // ||U2 - exp(i phase) U1||_F
    bool phase_defined = true;  // false when tr(U1^dagger U2) ~ 0
};

ProjectiveDistance projective_distance(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2);

/// Largest circular mismatch between two eigenphase multisets under optimal
/// (sorted, rotation-matched) pairing.
double eigenphase_multiset_distance(std::vector<double> a, std::vector<double> b);

}  // namespace phaselab
