#include "phaselab/spin.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phaselab {

SpinSystem make_spin_system(double s) {
    const double two_s = 2.0 * s;
    const double rounded = std::round(two_s);
    if (std::abs(two_s - rounded) > 1e-12 || rounded < 1.0) {
        std::ostringstream msg;
        msg << "make_spin_system: s must be a positive half-integer, got " << s;
        throw std::invalid_argument(msg.str());
    }
    const int dim = static_cast<int>(rounded) + 1;

    SpinSystem sys;
    sys.s = s;
    sys.dim = dim;
    sys.sz = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix s_plus = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = s - i;
        sys.sz(i, i) = m;
        // <m+1|S+|m> = sqrt(s(s+1) - m(m+1)); row i-1 holds m+1.
        if (i > 0) {
            s_plus(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
        }
    }
    const ComplexMatrix s_minus = s_plus.adjoint();
    sys.sx = 0.5 * (s_plus + s_minus);
    sys.sy = Complex(0.0, -0.5) * (s_plus - s_minus);
    return sys;
}

ComplexMatrix SpinSystem::along(const Eigen::Vector3d& axis) const {
    return axis.x() * sx + axis.y() * sy + axis.z() * sz;
}

ComplexMatrix rotation_unitary(const SpinSystem& sys, const Eigen::Vector3d& axis,
                               double angle) {
    const double n = axis.norm();
    if (n < 1e-12) {
        throw std::invalid_argument("rotation_unitary: zero rotation axis");
    }
    if (std::abs(n - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "rotation_unitary: axis must be a unit vector, |axis| = " << n;
        throw std::invalid_argument(msg.str());
    }
    return matexp_unitary(sys.along(axis), angle);
}

SpinState spin_coherent(const SpinSystem& sys, double theta, double phi) {
    SpinState highest = SpinState::Zero(sys.dim);
    highest[0] = 1.0;
    // Rotate +z to (theta, phi): angle theta about the axis (-sin phi, cos phi, 0).
    if (std::abs(theta) < 1e-15) return highest;
    const Eigen::Vector3d axis(-std::sin(phi), std::cos(phi), 0.0);
    return rotation_unitary(sys, axis, theta) * highest;
}

ComplexMatrix ConditionedHamiltonian::joint(double t) const {
    const ComplexMatrix ha = h_a(t);
    const ComplexMatrix hb = h_b(t);
    if (ha.rows() != hb.rows() || ha.cols() != hb.cols()) {
        throw std::invalid_argument("ConditionedHamiltonian: track dimensions differ");
    }
    const Eigen::Index d = ha.rows();
    ComplexMatrix h = ComplexMatrix::Zero(2 * d, 2 * d);
    h.topLeftCorner(d, d) = ha;
    h.bottomRightCorner(d, d) = hb;
    return h;
}

ComplexMatrix two_track_unitary(const ComplexMatrix& v_a, const ComplexMatrix& v_b) {
    const Eigen::Index d = v_a.rows();
    ComplexMatrix u = ComplexMatrix::Zero(2 * d, 2 * d);
    u.topLeftCorner(d, d) = v_a;
    u.bottomRightCorner(d, d) = v_b;
    return u;
}

ConditionedSwapResult conditioned_swap_evolve(const SpinSystem& sys,
                                              const ConditionedHamiltonian& cond,
                                              const SpinState& sigma,
                                              const SpinState& tau,
                                              const TimeGrid& grid) {
    if (sigma.size() != sys.dim || tau.size() != sys.dim) {
        throw std::invalid_argument("conditioned_swap_evolve: state dimension mismatch");
    }
    ConditionedSwapResult result;
    result.v_a = timeordered_evolve(cond.h_a, grid);
    result.v_b = timeordered_evolve(cond.h_b, grid);

    const Complex amp_a = tau.dot(result.v_a * sigma);
    const Complex amp_b = sigma.dot(result.v_b * tau);
    result.overlap_a = std::abs(amp_a);
    result.overlap_b = std::abs(amp_b);
    if (result.overlap_a < 1.0 - 1e-8 || result.overlap_b < 1.0 - 1e-8) {
        std::ostringstream msg;
        msg << "conditioned_swap_evolve: not a spin swap, |<tau|V_A|sigma>| = "
            << result.overlap_a << ", |<sigma|V_B|tau>| = " << result.overlap_b
            << " (need >= 1 - 1e-8)";
        throw std::invalid_argument(msg.str());
    }
    result.phi_a = std::arg(amp_a);
    result.phi_b = std::arg(amp_b);
    return result;
}

double spin_phase_sum(double phi_a, double phi_b) {
    return principal_phase(phi_a + phi_b);
}

std::vector<SpinState> evolve_trajectory(const HamiltonianOfTime& h,
                                         const SpinState& psi0,
                                         const TimeGrid& grid) {
    std::vector<SpinState> states;
    states.reserve(grid.n_steps + 1);
    states.push_back(psi0);
    SpinState psi = psi0;
    for (int i = 0; i < grid.n_steps; ++i) {
        psi = matexp_unitary(h(grid.midpoint(i)), grid.dt()) * psi;
        states.push_back(psi);
    }
    return states;
}

PhaseDecomposition aa_decompose(const std::vector<SpinState>& trajectory,
                                const HamiltonianOfTime& h, const TimeGrid& grid,
                                double closure_tol) {
    if (trajectory.size() != static_cast<size_t>(grid.n_steps) + 1) {
        std::ostringstream msg;
        msg << "aa_decompose: expected " << grid.n_steps + 1
            << " trajectory samples, got " << trajectory.size();
        throw std::invalid_argument(msg.str());
    }
    const Complex closure = trajectory.front().dot(trajectory.back());
    const double closure_defect = 1.0 - std::abs(closure);
    if (closure_defect > closure_tol) {
        std::ostringstream msg;
        msg << "aa_decompose: trajectory is not a closed ray-space loop, "
            << "1 - |<psi(0)|psi(T)>| = " << closure_defect << " > " << closure_tol;
        throw std::invalid_argument(msg.str());
    }

    // Trapezoidal quadrature of the energy expectation along the path.
    double energy_integral = 0.0;
    double e_prev = std::real(
        Complex(trajectory.front().dot(h(grid.point(0)) * trajectory.front())));
    for (int i = 1; i <= grid.n_steps; ++i) {
        const double e_now = std::real(
            Complex(trajectory[i].dot(h(grid.point(i)) * trajectory[i])));
        energy_integral += 0.5 * (e_prev + e_now) * grid.dt();
        e_prev = e_now;
    }

    PhaseDecomposition out;
    out.total = principal_phase(std::arg(closure));
    // The dynamical part is kept unwrapped (it scales with duration); only
    // the geometric remainder is circle-valued.
    out.dynamical = -energy_integral;
    out.geometric = principal_phase(out.total - out.dynamical);
    return out;
}

double total_observable_phase(double spin_s, double phi_spatial, double phi_spin) {
    const double two_s = 2.0 * spin_s;
    if (spin_s <= 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12) {
        throw std::invalid_argument("total_observable_phase: s must be a positive half-integer");
    }
    return principal_phase(two_s * kPi + phi_spatial + phi_spin);
}

}  // namespace phaselab
