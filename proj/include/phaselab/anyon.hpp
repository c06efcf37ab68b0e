#pragma once

#include "phaselab/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

// Abelian flux-charge anyons in the plane: winding-number topological
// phases, Aharonov-Bohm contributions from an external field, and a
// deformation probe that separates the two.

namespace phaselab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Flux-charge composite. Charge and flux are folded into dimensionless
/// phase units so that q * flux is directly a phase in radians.
struct AnyonSpecies {
    double charge = 1.0;
    double flux = 1.0;

    /// Exchange (half-encirclement) statistics angle q*Phi/2.
    double statistics_angle() const { return 0.5 * charge * flux; }
    /// Pair phase for one full mutual encirclement.
    double pair_phase() const { return charge * flux; }
};

/// Polyline trajectory. Closed paths do not repeat the first vertex; the
/// closing segment back to vertices.front() is implicit.
struct PlanarPath {
    std::vector<Vec2> vertices;
    bool closed = true;

    void validate() const;
    double bounding_radius() const;
    /// Shoelace signed area (closed paths).
    double signed_area() const;
};

struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diameter() const;
};

/// External out-of-plane field B_z: uniform over a rectangle, uniform over
/// the whole plane, or a finite grid of cell samples (flux per unit area in
/// the same dimensionless units as AnyonSpecies).
class FieldMap {
public:
    static FieldMap zero();
    static FieldMap uniform_rect(double value, const Rect& region);
    static FieldMap uniform_everywhere(double value);
    /// Grid of samples; values are row-major, row r / column c sampled at the
    /// cell center (x0 + (c + 0.5) h, y0 + (r + 0.5) h).
    static FieldMap grid(Vec2 origin, double cell_size, int n_cols, int n_rows,
                         std::vector<double> values);

    enum class Kind { Zero, UniformRect, UniformEverywhere, Grid };
    Kind kind() const { return kind_; }
    double uniform_value() const { return value_; }
    const Rect& region() const { return region_; }
    Vec2 grid_origin() const { return origin_; }
    double cell_size() const { return cell_size_; }
    int n_cols() const { return n_cols_; }
    int n_rows() const { return n_rows_; }
    const std::vector<double>& values() const { return values_; }

private:
    Kind kind_ = Kind::Zero;
    double value_ = 0.0;
    Rect region_{};
    Vec2 origin_{};
    double cell_size_ = 0.0;
    int n_cols_ = 0;
    int n_rows_ = 0;
    std::vector<double> values_;
};

/// Signed winding of a closed path around a point, by summed subtended
/// angles. The residual after rounding must stay below 1e-6 turns; points on
/// (or numerically touching) the path are rejected.
int winding_number(const PlanarPath& path, Vec2 point);

/// sum_j winding_j * q*Phi mod 2pi over the other anyons' positions.
double mutual_braid_phase(const AnyonSpecies& species, const PlanarPath& path,
                          const std::vector<Vec2>& others);

/// Winding-weighted cell quadrature of the external flux enclosed by the
/// path (handles self-overlapping loops via the winding multiplicity).
/// resolution = number of cells across the longer side of the quadrature
/// domain; ignored for grid fields, which integrate over their own cells.
/// A cell center that lands on the path is shifted by half a cell in x and y
/// (deterministic).
double enclosed_external_flux(const PlanarPath& path, const FieldMap& field,
                              int resolution = 400);

struct AnyonPhaseReport {
    double topological = 0.0;  // mutual braid phase
    double geometric = 0.0;    // q * enclosed external flux
    double total = 0.0;        // sum mod 2pi
    std::vector<int> windings; // one per other anyon, input order
};

AnyonPhaseReport total_anyon_phase(const AnyonSpecies& species,
                                   const PlanarPath& path,
                                   const std::vector<Vec2>& others,
                                   const FieldMap& field, int resolution = 400);

struct DeformationVerdict {
    AnyonPhaseReport report;
    bool topology_changed = false;  // windings differ from the base path
    double geometric_drift = 0.0;   // |geometric - base geometric| (circular)
    bool robust = false;
};

struct RobustnessProbeResult {
    AnyonPhaseReport base;
    std::vector<DeformationVerdict> deformations;  // input order
    bool all_robust = false;
    double max_drift = 0.0;
    double threshold = 0.0;
};

/// Evaluates every deformation against the base path: winding changes are
/// flagged (not rejected), geometric drift is reported, and a deformation is
/// robust iff its drift stays within the threshold.
RobustnessProbeResult deformation_robustness_probe(
    const AnyonSpecies& species, const PlanarPath& base_path,
    const std::vector<PlanarPath>& deformations, const std::vector<Vec2>& others,
    const FieldMap& field, double drift_threshold = 1e-6, int resolution = 400);

}  // namespace phaselab
