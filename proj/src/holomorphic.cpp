#include "phaselab/holomorphic.hpp"

#include "phaselab/anyon.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

// Regularized upper tail of the Poisson(mean) distribution beyond k terms,
// i.e. the squared-norm fraction a truncated coherent expansion misses.
double coherent_tail(double mean, int k) {
    double term = std::exp(-mean);
    double below = 0.0;
    for (int j = 0; j < k; ++j) {
        below += term;
        term *= mean / (j + 1);
    }
    return std::max(0.0, 1.0 - below);
}

}  // namespace

HolomorphicFamily::HolomorphicFamily(HolomorphicFamilyConfig config)
    : config_(std::move(config)) {
    if (config_.punctures.empty()) {
        throw std::invalid_argument("HolomorphicFamily: need at least one puncture");
    }
    for (size_t i = 0; i < config_.punctures.size(); ++i) {
        for (size_t j = i + 1; j < config_.punctures.size(); ++j) {
            if (std::abs(config_.punctures[i] - config_.punctures[j]) < 1e-9) {
                std::ostringstream msg;
                msg << "HolomorphicFamily: punctures " << i << " and " << j
                    << " collide";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    if (config_.puncture_orders.empty()) {
        config_.puncture_orders.assign(config_.punctures.size(), 1);
    }
    if (config_.puncture_orders.size() != config_.punctures.size()) {
        throw std::invalid_argument(
            "HolomorphicFamily: one order per puncture required");
    }
    if (config_.degeneracy < 1) {
        throw std::invalid_argument("HolomorphicFamily: degeneracy must be >= 1");
    }
    if (config_.modes_per_block < 4) {
        throw std::invalid_argument("HolomorphicFamily: modes_per_block too small");
    }
    if (config_.magnetic_length <= 0.0) {
        throw std::invalid_argument("HolomorphicFamily: magnetic_length must be positive");
    }

    // Truncation must hold the Gaussian tail below 1e-10 over the working disk
    // even with the perturbation stretching the coherent parameter.
    const double reach = config_.working_radius * (1.0 + std::abs(config_.epsilon));
    const double mean = 0.5 * reach * reach;
    const double tail = coherent_tail(mean, config_.modes_per_block);
    if (tail > 1e-10) {
        std::ostringstream msg;
        msg << "HolomorphicFamily: truncation K = " << config_.modes_per_block
            << " leaves a coherent tail " << tail << " > 1e-10 over the working disk"
            << " (radius " << config_.working_radius << "); increase modes_per_block";
        throw std::invalid_argument(msg.str());
    }

    kappa_.resize(config_.degeneracy);
    for (int a = 0; a < config_.degeneracy; ++a) {
        kappa_[a] = (config_.degeneracy == 1)
                        ? 1.0
                        : static_cast<double>(a) / (config_.degeneracy - 1);
    }
}

int HolomorphicFamily::hilbert_dim() const {
    return config_.modes_per_block * config_.degeneracy;
}

int HolomorphicFamily::param_dim() const {
    return config_.mode == PerturbationMode::ExtraParameter ? 3 : 2;
}

Complex HolomorphicFamily::eta(const RealVector& lambda) const {
    if (lambda.size() < 2) {
        throw std::invalid_argument("HolomorphicFamily: parameter needs (x, y)");
    }
    return Complex(lambda[0], lambda[1]) / config_.magnetic_length;
}

Complex HolomorphicFamily::coherent_parameter(int block,
                                              const RealVector& lambda) const {
    const Complex e = eta(lambda);
    Complex shifted = e;
    if (config_.epsilon != 0.0) {
        if (config_.mode == PerturbationMode::Antiholomorphic) {
            shifted += config_.epsilon * kappa_[block] * std::conj(e);
        } else {
            const double zeta = lambda.size() > 2 ? lambda[2] : 0.0;
            shifted += config_.epsilon * kappa_[block] * zeta;
        }
    }
    return shifted / std::sqrt(2.0);
}

ComplexMatrix HolomorphicFamily::generator(const RealVector& lambda) const {
    const Complex e = eta(lambda);
    Complex h = 1.0;
    for (size_t p = 0; p < config_.punctures.size(); ++p) {
        const Complex diff = e - config_.punctures[p];
        if (std::abs(diff) < 1e-9) {
            std::ostringstream msg;
            msg << "HolomorphicFamily: parameter point sits on puncture " << p;
            throw std::invalid_argument(msg.str());
        }
        const int order = config_.puncture_orders[p];
        for (int k = 0; k < std::abs(order); ++k) h = (order > 0) ? h * diff : h / diff;
    }

    const int k_modes = config_.modes_per_block;
    const int d = config_.degeneracy;
    ComplexMatrix columns = ComplexMatrix::Zero(hilbert_dim(), d);
    for (int a = 0; a < d; ++a) {
        const Complex alpha = coherent_parameter(a, lambda);
        const double gaussian = std::exp(-0.5 * std::norm(alpha));
        Complex amp = gaussian * h;  // k = 0 term
        for (int k = 0; k < k_modes; ++k) {
            columns(a * k_modes + k, a) = amp;
            amp *= alpha / std::sqrt(static_cast<double>(k + 1));
        }
    }
    return columns;
}

double HolomorphicFamily::cauchy_riemann_residual(const RealVector& lambda,
                                                  double fd_step) const {
    // d/d eta* = (l_B / 2)(d/dx + i d/dy) on the Gaussian-stripped amplitudes.
    const double h = fd_step * config_.magnetic_length;
    auto stripped = [this](const RealVector& point) -> ComplexMatrix {
        ComplexMatrix g = generator(point);
        for (int a = 0; a < config_.degeneracy; ++a) {
            const double gaussian =
                std::exp(-0.5 * std::norm(coherent_parameter(a, point)));
            g.col(a) /= gaussian;
        }
        return g;
    };
    RealVector xp = lambda, xm = lambda, yp = lambda, ym = lambda;
    xp[0] += h;
    xm[0] -= h;
    yp[1] += h;
    ym[1] -= h;
    const ComplexMatrix dx = (stripped(xp) - stripped(xm)) / (2.0 * h);
    const ComplexMatrix dy = (stripped(yp) - stripped(ym)) / (2.0 * h);
    const ComplexMatrix dbar =
        0.5 * config_.magnetic_length * (dx + Complex(0.0, 1.0) * dy);
    // Scale out the amplitude magnitude so the residual is relative.
    const double scale = std::max(stripped(lambda).cwiseAbs().maxCoeff(), 1e-300);
    return dbar.cwiseAbs().maxCoeff() / scale;
}

HamiltonianFamily HolomorphicFamily::induced_family() const {
    HamiltonianFamily family;
    family.param_dim = param_dim();
    family.dim = hilbert_dim();
    family.level_index = 0;
    family.degeneracy = config_.degeneracy;
    family.gap_floor = 0.5;
    family.cluster_width = 1e-9;
    // The evaluator owns a copy of the family state; it must stay pure.
    auto self = std::make_shared<HolomorphicFamily>(*this);
    family.evaluator = [self](const RealVector& lambda) -> ComplexMatrix {
        const int n = self->hilbert_dim();
        ComplexMatrix h = ComplexMatrix::Identity(n, n);
        const ComplexMatrix g = self->generator(lambda);
        for (int a = 0; a < self->config_.degeneracy; ++a) {
            const ComplexVector col = g.col(a);
            const double norm2 = col.squaredNorm();
            if (norm2 < 1e-280) {
                throw std::runtime_error(
                    "HolomorphicFamily: frame vector vanishes (parameter on a zero)");
            }
            h -= (col * col.adjoint()) / norm2;
        }
        return h;
    };
    return family;
}

std::vector<int> HolomorphicFamily::loop_windings(const ParameterLoop& loop) const {
    PlanarPath path;
    path.closed = true;
    path.vertices.reserve(loop.samples.size());
    for (size_t j = 0; j + 1 < loop.samples.size(); ++j) {
        path.vertices.push_back({loop.samples[j][0], loop.samples[j][1]});
    }
    std::vector<int> windings;
    windings.reserve(config_.punctures.size());
    for (const Complex& w : config_.punctures) {
        const Complex z = w * config_.magnetic_length;
        windings.push_back(winding_number(path, {z.real(), z.imag()}));
    }
    return windings;
}

ComplexMatrix HolomorphicFamily::generator_monodromy(const ParameterLoop& loop) const {
    // Continue arg(eta - w_p) along the loop; each block picks up
    // exp(i * order_p * delta_arg) per puncture. Integer orders close to the
    // identity; the value is the analytic-continuation basis change.
    const int d = config_.degeneracy;
    double total_arg = 0.0;
    for (size_t p = 0; p < config_.punctures.size(); ++p) {
        double accumulated = 0.0;
        Complex prev = eta(loop.samples.front()) - config_.punctures[p];
        for (size_t j = 1; j < loop.samples.size(); ++j) {
            const Complex now = eta(loop.samples[j]) - config_.punctures[p];
            accumulated += std::arg(now / prev);
            prev = now;
        }
        total_arg += config_.puncture_orders[p] * accumulated;
    }
    return std::polar(1.0, total_arg) * ComplexMatrix::Identity(d, d);
}

HolomorphicFamily make_holomorphic_family(HolomorphicFamilyConfig config) {
    return HolomorphicFamily(std::move(config));
}

RobustnessSweepResult robustness_break_probe(
    const HolomorphicFamilyConfig& base_config,
    const std::vector<std::pair<ParameterLoop, ParameterLoop>>& loop_pairs,
    const std::vector<double>& epsilon_sweep) {
    if (loop_pairs.empty()) {
        throw std::invalid_argument("robustness_break_probe: no loop pairs");
    }

    {
        // Homotopy precondition: equal windings around every puncture.
        const HolomorphicFamily probe(base_config);
        for (size_t i = 0; i < loop_pairs.size(); ++i) {
            const auto wa = probe.loop_windings(loop_pairs[i].first);
            const auto wb = probe.loop_windings(loop_pairs[i].second);
            if (wa != wb) {
                std::ostringstream msg;
                msg << "robustness_break_probe: loop pair " << i
                    << " is not homotopic (winding numbers differ)";
                throw std::invalid_argument(msg.str());
            }
        }
    }

    RobustnessSweepResult result;
    result.rows.reserve(epsilon_sweep.size());
    double previous_max = -1.0;
    for (double eps : epsilon_sweep) {
        HolomorphicFamilyConfig cfg = base_config;
        cfg.epsilon = eps;
        const HolomorphicFamily family(cfg);
        const HamiltonianFamily induced = family.induced_family();

        RobustnessSweepRow row;
        row.epsilon = eps;
        row.pair_residuals.reserve(loop_pairs.size());
        for (const auto& [loop_a, loop_b] : loop_pairs) {
            const HolonomyResult hol_a = holonomy_overlap(induced, loop_a);
            const HolonomyResult hol_b = holonomy_overlap(induced, loop_b);
            const ProjectiveDistance dist =
                projective_distance(hol_a.combined, hol_b.combined);
            row.pair_residuals.push_back(dist.residual);
            row.max_residual = std::max(row.max_residual, dist.residual);
        }
        if (previous_max >= 0.0 && row.max_residual + 1e-9 < previous_max) {
            result.nondecreasing = false;
        }
        previous_max = row.max_residual;
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace phaselab
