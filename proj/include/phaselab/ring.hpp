#pragma once

#include "phaselab/linalg.hpp"

#include <functional>
#include <vector>

// Physical exchange of two identical particles trapped on a ring, driven by
// a rotation Hamiltonian phidot(t) * L_z plus an optional identity term.
// The angular-momentum basis |m>, m in [-m_max, m_max], makes the drive
// diagonal, so per-step evolution is exact and truncation cannot leak.

namespace phaselab {

/// Single-particle state on the ring in the truncated L_z eigenbasis.
/// Amplitudes are stored for m = -m_max .. +m_max and normalized on
/// construction.
class RingState {
public:
    RingState(int m_max, ComplexVector amplitudes);

    int m_max() const { return m_max_; }
    int dim() const { return 2 * m_max_ + 1; }
    const ComplexVector& amplitudes() const { return amps_; }

    /// Amplitude c_m for angular momentum m.
    Complex amplitude(int m) const { return amps_[m + m_max_]; }

    double norm() const { return amps_.norm(); }

    /// Overlap <this|other>.
    Complex overlap(const RingState& other) const;

    /// Equal-weight superposition of a set of m values (the canonical
    /// swap-compatible example being {0, 1}).
    static RingState equal_weight(int m_max, const std::vector<int>& ms);

private:
    int m_max_;
    ComplexVector amps_;
};

/// Drive schedule for one swap: phi(0) = 0, phi(T) = pi, both exact, plus an
/// optional identity-term phase profile (zero by construction outside the
/// swap window). extra_phase defaults to identically zero.
struct SwapSchedule {
    std::function<double(double)> phi;
    std::function<double(double)> extra_phase;
    TimeGrid grid;

    SwapSchedule(std::function<double(double)> phi_fn, TimeGrid g);
    SwapSchedule(std::function<double(double)> phi_fn,
                 std::function<double(double)> extra_fn, TimeGrid g);

    /// Linear ramp phi(t) = pi * (t - t0)/T with zero extra term.
    static SwapSchedule linear(TimeGrid g);

    void validate() const;
};

struct RingEvolveResult {
    RingState state;
    double accumulated_phase = 0.0;   // extra_phase(0) - extra_phase(T), mod 2pi
    double truncation_leakage = 0.0;  // |1 - final norm^2|; zero up to roundoff
};

/// Observable outcome of physically swapping the two-particle state.
struct ExchangeOutcome {
    double total_phase = 0.0;             // arg <unswapped reference|final>
    double exchange_part = 0.0;           // 2 s pi mod 2pi
    double spatial_dynamical_part = 0.0;  // extra_phase(0) - extra_phase(T)
    double fidelity = 0.0;                // |<reference|final>|
};

/// c_m -> exp(-i m theta) c_m. Norm is preserved exactly.
RingState rotate_ring(const RingState& state, double theta);

/// |sum_m |c_m|^2 exp(i m pi)|. Zero means the pi-rotated state stays
/// orthogonal to the original at all times, the condition for a clean swap.
double check_swap_orthogonality(const RingState& state);

/// Steps the single-particle state through the schedule. The final state
/// equals rotate_ring(state, pi) times the returned global phase
/// exp(i * accumulated_phase). Rejects states that fail the orthogonality
/// condition.
RingEvolveResult evolve_ring_swap(const RingState& state,
                                  const SwapSchedule& schedule);

/// Builds the symmetrized two-particle amplitude tensor from state_A and its
/// pi-rotated partner, applies the swap evolution to both factors and the
/// identity-term phase to the pair, and reports the observable phase
/// relative to the unswapped, unevolved state.
ExchangeOutcome two_particle_swap(double spin_s, const RingState& state_a,
                                  const SwapSchedule& schedule);

/// Symmetrized pair tensor psi(m1, m2) = (a_m1 b_m2 + (-1)^{2s} b_m1 a_m2)/sqrt(2)
/// with b = rotate_ring(a, pi). Exposed for the label-swap identity checks.
ComplexMatrix symmetrized_pair_tensor(double spin_s, const RingState& state_a);

/// Validates that 2s is a positive integer; returns the exchange sign (-1)^{2s}.
int exchange_sign(double spin_s);

}  // namespace phaselab
