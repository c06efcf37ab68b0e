#include "phaselab/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

std::string format_lambda(const RealVector& lambda) {
    std::ostringstream out;
    out << "(";
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (i) out << ", ";
        out << lambda[i];
    }
    out << ")";
    return out.str();
}

double smallest_singular_value(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

std::vector<double> unitary_eigenphases(const ComplexMatrix& u) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(u);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenphases: eigensolver failed");
    }
    std::vector<double> phases(u.rows());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        phases[i] = std::arg(solver.eigenvalues()[i]);
    }
    std::sort(phases.begin(), phases.end());
    return phases;
}

}  // namespace

void ParameterLoop::validate(int param_dim) const {
    if (samples.size() < 3) {
        throw std::invalid_argument("ParameterLoop: need at least 3 samples");
    }
    for (const RealVector& s : samples) {
        if (s.size() != param_dim) {
            throw std::invalid_argument("ParameterLoop: sample dimension mismatch");
        }
    }
    if ((samples.front() - samples.back()).norm() > 1e-12) {
        throw std::invalid_argument("ParameterLoop: loop is not closed (first != last)");
    }
}

ParameterLoop ParameterLoop::refined() const {
    ParameterLoop fine;
    fine.refinement_level = refinement_level + 1;
    fine.samples.reserve(2 * samples.size() - 1);
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        fine.samples.push_back(samples[i]);
        fine.samples.push_back(0.5 * (samples[i] + samples[i + 1]));
    }
    fine.samples.push_back(samples.back());
    return fine;
}

ParameterLoop ParameterLoop::circle(double cx, double cy, double r, int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("ParameterLoop::circle: n_samples < 3");
    ParameterLoop loop;
    loop.samples.reserve(n_samples + 1);
    for (int i = 0; i < n_samples; ++i) {
        const double angle = 2.0 * kPi * i / n_samples;
        RealVector p(2);
        p << cx + r * std::cos(angle), cy + r * std::sin(angle);
        loop.samples.push_back(p);
    }
    loop.samples.push_back(loop.samples.front());
    return loop;
}

ParameterLoop ParameterLoop::polygon(const std::vector<RealVector>& corners,
                                     int n_samples) {
    if (corners.size() < 3) {
        throw std::invalid_argument("ParameterLoop::polygon: need at least 3 corners");
    }
    double perimeter = 0.0;
    for (size_t i = 0; i < corners.size(); ++i) {
        perimeter += (corners[(i + 1) % corners.size()] - corners[i]).norm();
    }
    ParameterLoop loop;
    for (size_t i = 0; i < corners.size(); ++i) {
        const RealVector& a = corners[i];
        const RealVector& b = corners[(i + 1) % corners.size()];
        const double len = (b - a).norm();
        const int steps = std::max(1, static_cast<int>(std::round(n_samples * len / perimeter)));
        for (int k = 0; k < steps; ++k) {
            loop.samples.push_back(a + (static_cast<double>(k) / steps) * (b - a));
        }
    }
    loop.samples.push_back(loop.samples.front());
    return loop;
}

double Frame::orthonormality_defect() const {
    ComplexMatrix g = columns.adjoint() * columns;
    g -= ComplexMatrix::Identity(columns.cols(), columns.cols());
    return g.cwiseAbs().maxCoeff();
}

Frame frame_at(const HamiltonianFamily& family, const RealVector& lambda,
               const Frame* previous) {
    const ComplexMatrix h = family.evaluator(lambda);
    require_hermitian(h, 1e-10, "HamiltonianFamily evaluator output");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("frame_at: eigendecomposition failed");
    }
    const auto& evals = solver.eigenvalues();
    const int n = static_cast<int>(evals.size());
    const int first = family.level_index;
    const int d = family.degeneracy;
    if (first < 0 || first + d > n) {
        throw std::invalid_argument("frame_at: selected cluster outside the spectrum");
    }

    const double spread = evals[first + d - 1] - evals[first];
    if (spread > family.cluster_width) {
        std::ostringstream msg;
        msg << "frame_at: cluster spread " << spread << " exceeds cluster_width "
            << family.cluster_width << " at lambda = " << format_lambda(lambda);
        throw std::runtime_error(msg.str());
    }
    double gap = std::numeric_limits<double>::infinity();
    if (first > 0) gap = std::min(gap, evals[first] - evals[first - 1]);
    if (first + d < n) gap = std::min(gap, evals[first + d] - evals[first + d - 1]);
    if (gap < family.gap_floor) {
        std::ostringstream msg;
        msg << "frame_at: gap " << gap << " below gap_floor " << family.gap_floor
            << " at lambda = " << format_lambda(lambda);
        throw std::runtime_error(msg.str());
    }

    Frame frame;
    frame.columns = solver.eigenvectors().middleCols(first, d);
    if (previous != nullptr) {
        if (previous->columns.rows() != frame.columns.rows() ||
            previous->columns.cols() != frame.columns.cols()) {
            throw std::invalid_argument("frame_at: previous frame shape mismatch");
        }
        const ComplexMatrix overlap = previous->columns.adjoint() * frame.columns;
        // Apply the inverse of the unitary polar factor: the aligned frame
        // maximizes Re tr(previous^dagger * frame).
        frame.columns = frame.columns * unitarize(overlap).adjoint();
    }
    return frame;
}

BerryConnectionSample berry_connection_fd(const HamiltonianFamily& family,
                                          const RealVector& lambda, double step,
                                          const Frame& reference,
                                          double residual_tol) {
    if (step <= 0.0) throw std::invalid_argument("berry_connection_fd: step must be positive");
    BerryConnectionSample sample;
    sample.components.reserve(family.param_dim);
    const Frame center = frame_at(family, lambda, &reference);
    for (int i = 0; i < family.param_dim; ++i) {
        RealVector lp = lambda, lm = lambda;
        lp[i] += step;
        lm[i] -= step;
        const Frame fp = frame_at(family, lp, &reference);
        const Frame fm = frame_at(family, lm, &reference);
        const ComplexMatrix derivative = (fp.columns - fm.columns) / (2.0 * step);
        const ComplexMatrix a = Complex(0.0, 1.0) * (center.columns.adjoint() * derivative);
        const double residual = 0.5 * (a - a.adjoint()).cwiseAbs().maxCoeff();
        sample.antihermitian_residual = std::max(sample.antihermitian_residual, residual);
        sample.components.push_back(0.5 * (a + a.adjoint()));
    }
    sample.warning = sample.antihermitian_residual > residual_tol;
    return sample;
}

TransportedFrames transport_frames(const HamiltonianFamily& family,
                                   const ParameterLoop& loop,
                                   double min_overlap) {
    loop.validate(family.param_dim);
    TransportedFrames out;
    out.loop = loop;
    out.frames.reserve(loop.samples.size());
    out.frames.push_back(frame_at(family, loop.samples.front()));
    for (size_t j = 1; j < loop.samples.size(); ++j) {
        Frame next = frame_at(family, loop.samples[j], &out.frames.back());
        const double sv = smallest_singular_value(out.frames.back().columns.adjoint() *
                                                  next.columns);
        out.min_overlap_sv = std::min(out.min_overlap_sv, sv);
        if (sv < min_overlap) {
            std::ostringstream msg;
            msg << "transport_frames: overlap singular value " << sv << " below "
                << min_overlap << " at segment " << j - 1;
            throw std::runtime_error(msg.str());
        }
        out.frames.push_back(std::move(next));
    }
    return out;
}

HolonomyResult holonomy_from_frames(const TransportedFrames& transported) {
    const auto& frames = transported.frames;
    if (frames.size() < 2) {
        throw std::invalid_argument("holonomy_from_frames: need at least 2 frames");
    }
    const int d = frames.front().degeneracy();

    // Wilson line W = M_{n-1} ... M_0 with M_j = F_{j+1}^dagger F_j maps
    // initial-frame coordinates to final-frame coordinates.
    ComplexMatrix w = ComplexMatrix::Identity(d, d);
    for (size_t j = 0; j + 1 < frames.size(); ++j) {
        w = (frames[j + 1].columns.adjoint() * frames[j].columns) * w;
    }
    const ComplexMatrix w_u = unitarize(w);
    const ComplexMatrix b_raw = frames.front().columns.adjoint() * frames.back().columns;
    const ComplexMatrix b = unitarize(b_raw);

    HolonomyResult result;
    result.end_alignment = b;
    // Expressing the transport in the initial-frame convention makes the
    // spec product literal: combined = U_L * B = B * W_u.
    result.u_l = b * w_u * b.adjoint();
    result.combined = b * w_u;
    result.eigenphases = unitary_eigenphases(result.combined);
    result.overall_phase =
        std::arg(result.combined.determinant()) / static_cast<double>(d);
    result.projective_part =
        std::polar(1.0, -result.overall_phase) * result.combined;
    result.min_overlap_sv = transported.min_overlap_sv;
    result.refinement_level = transported.loop.refinement_level;
    return result;
}

HolonomyResult holonomy_overlap(const HamiltonianFamily& family,
                                const ParameterLoop& loop, double min_overlap) {
    try {
        return holonomy_from_frames(transport_frames(family, loop, min_overlap));
    } catch (const std::runtime_error&) {
        // One automatic refinement; a second failure propagates.
        return holonomy_from_frames(transport_frames(family, loop.refined(), min_overlap));
    }
}

HolonomyResult holonomy_connection(const HamiltonianFamily& family,
                                   const ParameterLoop& loop, double fd_step) {
    loop.validate(family.param_dim);
    const int d = family.degeneracy;
    const Frame base = frame_at(family, loop.samples.front());

    // The finite-difference gauge is anchored at the loop base and
    // re-anchored to the current transported frame whenever the subspace
    // drifts too far from the anchor. Re-anchoring keeps the gauge
    // continuous (the new anchor is the old gauge's frame at the seam), so
    // no transition factors are needed; only the final alignment back to
    // the base convention remains.
    Frame anchor = base;
    double min_sv = 1.0;
    ComplexMatrix transport = ComplexMatrix::Identity(d, d);
    for (size_t j = 0; j + 1 < loop.samples.size(); ++j) {
        const Frame here = frame_at(family, loop.samples[j], &anchor);
        const double sv =
            smallest_singular_value(anchor.columns.adjoint() * here.columns);
        min_sv = std::min(min_sv, sv);
        if (sv < 0.8) anchor = here;

        const RealVector mid = 0.5 * (loop.samples[j] + loop.samples[j + 1]);
        const RealVector dl = loop.samples[j + 1] - loop.samples[j];
        const BerryConnectionSample sample =
            berry_connection_fd(family, mid, fd_step, anchor);
        ComplexMatrix exponent = ComplexMatrix::Zero(d, d);
        for (int i = 0; i < family.param_dim; ++i) {
            exponent += sample.components[i] * dl[i];
        }
        transport = matexp_unitary(exponent, -1.0) * transport;  // exp(+i sum A_i dl_i)
    }

    const Frame closing = frame_at(family, loop.samples.back(), &anchor);
    const ComplexMatrix b = unitarize(base.columns.adjoint() * closing.columns);

    HolonomyResult result;
    result.end_alignment = b;
    result.u_l = b * transport * b.adjoint();
    result.combined = b * transport;
    result.eigenphases = unitary_eigenphases(result.combined);
    result.overall_phase =
        std::arg(result.combined.determinant()) / static_cast<double>(d);
    result.projective_part =
        std::polar(1.0, -result.overall_phase) * result.combined;
    result.min_overlap_sv = min_sv;
    result.refinement_level = loop.refinement_level;
    return result;
}

HolonomyResult regauge(const TransportedFrames& transported,
                       const std::vector<ComplexMatrix>& gauges) {
    if (gauges.size() != transported.frames.size()) {
        std::ostringstream msg;
        msg << "regauge: got " << gauges.size() << " gauges for "
            << transported.frames.size() << " frames";
        throw std::invalid_argument(msg.str());
    }
    TransportedFrames regauged;
    regauged.loop = transported.loop;
    regauged.min_overlap_sv = transported.min_overlap_sv;
    regauged.frames.reserve(transported.frames.size());
    for (size_t j = 0; j < gauges.size(); ++j) {
        const double defect = unitarity_defect(gauges[j]);
        if (defect > 1e-10) {
            std::ostringstream msg;
            msg << "regauge: gauge " << j << " is not unitary, defect " << defect;
            throw std::invalid_argument(msg.str());
        }
        Frame f;
        f.columns = transported.frames[j].columns * gauges[j];
        regauged.frames.push_back(std::move(f));
    }
    return holonomy_from_frames(regauged);
}

ProjectiveDistance projective_distance(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2) {
    if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
        throw std::invalid_argument("projective_distance: dimension mismatch");
    }
    const Complex trace = (u1.adjoint() * u2).trace();
    ProjectiveDistance out;
    if (std::abs(trace) < 1e-12 * u1.rows()) {
        out.phase_defined = false;
        out.phase = 0.0;
    } else {
        out.phase = std::arg(trace);
    }
    out.residual = (u2 - std::polar(1.0, out.phase) * u1).norm();
    return out;
}

double eigenphase_multiset_distance(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("eigenphase_multiset_distance: size mismatch");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const size_t n = a.size();
    double best = std::numeric_limits<double>::infinity();
    // Sorted circular matching: try every cyclic offset of b against a.
    for (size_t shift = 0; shift < n; ++shift) {
        double worst = 0.0;
        for (size_t i = 0; i < n; ++i) {
            worst = std::max(worst, phase_distance(a[i], b[(i + shift) % n]));
        }
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace phaselab
