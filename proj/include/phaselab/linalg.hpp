#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

// Dense complex linear algebra and unitary time evolution shared by the
// physics modules. All values are immutable after construction and every
// function here is pure, so concurrent use needs no synchronization.
// Units: hbar = 1 throughout, phases in radians.

namespace phaselab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Wraps an angle to the principal interval (-pi, pi].
double principal_phase(double phase);

/// Circular distance |a - b| mod 2*pi, in [0, pi].
double phase_distance(double a, double b);

/// max_ij |M - M^dagger|
double hermiticity_defect(const ComplexMatrix& m);

/// max_ij |U^dagger U - I|
double unitarity_defect(const ComplexMatrix& u);

/// Throws std::invalid_argument naming the worst asymmetry if M is not
/// Hermitian within tol.
void require_hermitian(const ComplexMatrix& m, double tol = 1e-12,
                       const char* context = "matrix");

/// Uniform time grid over [t_start, t_end] with n_steps steps.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double start, double end, int steps);

    double dt() const { return (t_end - t_start) / n_steps; }
    double duration() const { return t_end - t_start; }
    double point(int i) const { return t_start + i * dt(); }
    double midpoint(int i) const { return t_start + (i + 0.5) * dt(); }
};

/// exp(-i H dt) for Hermitian H, evaluated by eigendecomposition so the
/// result is unitary to machine precision.
ComplexMatrix matexp_unitary(const ComplexMatrix& h, double dt);

/// Unitary polar factor of a full-rank square matrix (the W maximizing
/// Re tr(W^dagger M)). Rejects inputs whose smallest singular value is
/// below 1e-12, naming the offending value.
ComplexMatrix unitarize(const ComplexMatrix& m);

using HamiltonianOfTime = std::function<ComplexMatrix(double)>;

/// Ordered product of per-step midpoint exponentials, latest step leftmost:
///   U = exp(-i H(t_{n-1/2}) dt) ... exp(-i H(t_{1/2}) dt).
/// Second order in dt; exactly unitary per step.
ComplexMatrix timeordered_evolve(const HamiltonianOfTime& family,
                                 const TimeGrid& grid);

}  // namespace phaselab
