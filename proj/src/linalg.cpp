#include "phaselab/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phaselab {

double principal_phase(double phase) {
    double p = std::remainder(phase, 2.0 * kPi);  // in [-pi, pi]
    if (p <= -kPi) p += 2.0 * kPi;
    return p;
}

double phase_distance(double a, double b) {
    return std::abs(principal_phase(a - b));
}

double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
    ComplexMatrix g = u.adjoint() * u;
    g -= ComplexMatrix::Identity(u.cols(), u.cols());
    return g.cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* context) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << context << " must be square, got " << m.rows() << "x" << m.cols();
        throw std::invalid_argument(msg.str());
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
        std::ostringstream msg;
        msg << context << " is not Hermitian: max |M - M^dagger| = " << defect
            << " exceeds tolerance " << tol;
        throw std::invalid_argument(msg.str());
    }
}

TimeGrid::TimeGrid(double start, double end, int steps)
    : t_start(start), t_end(end), n_steps(steps) {
    if (steps <= 0) throw std::invalid_argument("TimeGrid: n_steps must be positive");
    if (!(end > start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
}

ComplexMatrix matexp_unitary(const ComplexMatrix& h, double dt) {
    require_hermitian(h, 1e-12, "matexp_unitary input");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("matexp_unitary: eigendecomposition failed");
    }
    const auto& evals = solver.eigenvalues();
    ComplexVector phases(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
        phases[k] = std::polar(1.0, -evals[k] * dt);
    }
    return solver.eigenvectors() * phases.asDiagonal() *
           solver.eigenvectors().adjoint();
}

ComplexMatrix unitarize(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("unitarize: matrix must be square");
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smallest = svd.singularValues().minCoeff();
    if (smallest <= 1e-12) {
        std::ostringstream msg;
        msg << "unitarize: input is rank deficient, smallest singular value "
            << smallest << " <= 1e-12";
        throw std::invalid_argument(msg.str());
    }
    return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix timeordered_evolve(const HamiltonianOfTime& family,
                                 const TimeGrid& grid) {
    ComplexMatrix h0 = family(grid.midpoint(0));
    const Eigen::Index dim = h0.rows();
    ComplexMatrix u = matexp_unitary(h0, grid.dt());
    for (int i = 1; i < grid.n_steps; ++i) {
        ComplexMatrix h = family(grid.midpoint(i));
        if (h.rows() != dim || h.cols() != dim) {
            std::ostringstream msg;
            msg << "timeordered_evolve: dimension changed from " << dim << " to "
                << h.rows() << "x" << h.cols() << " at step " << i;
            throw std::invalid_argument(msg.str());
        }
        u = matexp_unitary(h, grid.dt()) * u;  // latest step leftmost
    }
    return u;
}

}  // namespace phaselab
