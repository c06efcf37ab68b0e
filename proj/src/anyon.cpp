#include "phaselab/anyon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    const double ex = p.x - (a.x + t * dx);
    const double ey = p.y - (a.y + t * dy);
    return std::hypot(ex, ey);
}

Rect path_bounds(const PlanarPath& path) {
    Rect r;
    r.xmin = r.xmax = path.vertices.front().x;
    r.ymin = r.ymax = path.vertices.front().y;
    for (const Vec2& v : path.vertices) {
        r.xmin = std::min(r.xmin, v.x);
        r.xmax = std::max(r.xmax, v.x);
        r.ymin = std::min(r.ymin, v.y);
        r.ymax = std::max(r.ymax, v.y);
    }
    return r;
}

}  // namespace

double Rect::diameter() const { return std::hypot(width(), height()); }

void PlanarPath::validate() const {
    if (closed && vertices.size() < 3) {
        throw std::invalid_argument("PlanarPath: a closed path needs at least 3 vertices");
    }
    if (!closed && vertices.size() < 2) {
        throw std::invalid_argument("PlanarPath: a path needs at least 2 vertices");
    }
    const size_t n = vertices.size();
    const size_t last = closed ? n : n - 1;
    for (size_t i = 0; i < last; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) {
            std::ostringstream msg;
            msg << "PlanarPath: consecutive vertices " << i << " and " << (i + 1) % n
                << " coincide";
            throw std::invalid_argument(msg.str());
        }
    }
}

double PlanarPath::bounding_radius() const {
    double r = 0.0;
    for (const Vec2& v : vertices) r = std::max(r, std::hypot(v.x, v.y));
    return r;
}

double PlanarPath::signed_area() const {
    validate();
    double twice = 0.0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

FieldMap FieldMap::zero() { return FieldMap(); }

FieldMap FieldMap::uniform_rect(double value, const Rect& region) {
    if (!(region.xmax > region.xmin) || !(region.ymax > region.ymin)) {
        throw std::invalid_argument("FieldMap: degenerate rectangle");
    }
    FieldMap f;
    f.kind_ = Kind::UniformRect;
    f.value_ = value;
    f.region_ = region;
    return f;
}

FieldMap FieldMap::uniform_everywhere(double value) {
    FieldMap f;
    f.kind_ = Kind::UniformEverywhere;
    f.value_ = value;
    return f;
}

FieldMap FieldMap::grid(Vec2 origin, double cell_size, int n_cols, int n_rows,
                        std::vector<double> values) {
    if (cell_size <= 0.0) throw std::invalid_argument("FieldMap: cell size must be positive");
    if (n_cols <= 0 || n_rows <= 0) throw std::invalid_argument("FieldMap: empty grid");
    if (values.size() != static_cast<size_t>(n_cols) * n_rows) {
        std::ostringstream msg;
        msg << "FieldMap: expected " << n_cols * n_rows << " samples, got "
            << values.size();
        throw std::invalid_argument(msg.str());
    }
    FieldMap f;
    f.kind_ = Kind::Grid;
    f.origin_ = origin;
    f.cell_size_ = cell_size;
    f.n_cols_ = n_cols;
    f.n_rows_ = n_rows;
    f.values_ = std::move(values);
    return f;
}

int winding_number(const PlanarPath& path, Vec2 point) {
    path.validate();
    if (!path.closed) {
        throw std::invalid_argument("winding_number: path must be closed");
    }
    const double scale = std::max(path.bounding_radius(), 1.0);
    const double on_path_tol = 1e-9 * scale;

    double total_angle = 0.0;
    const size_t n = path.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = path.vertices[i];
        const Vec2& b = path.vertices[(i + 1) % n];
        if (point_segment_distance(point, a, b) <= on_path_tol) {
            std::ostringstream msg;
            msg << "winding_number: point (" << point.x << ", " << point.y
                << ") lies on path segment " << i;
            throw std::invalid_argument(msg.str());
        }
        const double ax = a.x - point.x, ay = a.y - point.y;
        const double bx = b.x - point.x, by = b.y - point.y;
        total_angle += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    const double turns = total_angle / (2.0 * kPi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) {
        std::ostringstream msg;
        msg << "winding_number: non-integer winding " << turns
            << " (point too close to the path?)";
        throw std::runtime_error(msg.str());
    }
    return static_cast<int>(rounded);
}

double mutual_braid_phase(const AnyonSpecies& species, const PlanarPath& path,
                          const std::vector<Vec2>& others) {
    long long total_winding = 0;
    for (const Vec2& other : others) {
        total_winding += winding_number(path, other);
    }
    return principal_phase(static_cast<double>(total_winding) * species.pair_phase());
}

double enclosed_external_flux(const PlanarPath& path, const FieldMap& field,
                              int resolution) {
    path.validate();
    if (!path.closed) {
        throw std::invalid_argument("enclosed_external_flux: path must be closed");
    }
    if (field.kind() == FieldMap::Kind::Zero) return 0.0;
    if (resolution < 2) {
        throw std::invalid_argument("enclosed_external_flux: resolution must be >= 2");
    }

    // Quadrature cells: the field's own cells for grid maps, otherwise a
    // lattice over the relevant domain. The lattice origin carries a fixed
    // irrational sub-cell offset so straight axis-aligned edges cannot sit
    // systematically between sample rows.
    Vec2 origin;
    double h = 0.0;
    int n_cols = 0, n_rows = 0;
    if (field.kind() == FieldMap::Kind::Grid) {
        origin = field.grid_origin();
        h = field.cell_size();
        n_cols = field.n_cols();
        n_rows = field.n_rows();
    } else {
        Rect domain;
        if (field.kind() == FieldMap::Kind::UniformRect) {
            domain = field.region();
        } else {
            domain = path_bounds(path);
        }
        const double side = std::max(domain.width(), domain.height());
        h = side / resolution;
        const double offset = (0.5 + 0.28867513459481287) * h;  // h*(0.5 + 1/(2 sqrt 3))
        origin = {domain.xmin - offset, domain.ymin - offset};
        n_cols = static_cast<int>(std::ceil((domain.xmax - origin.x) / h)) + 1;
        n_rows = static_cast<int>(std::ceil((domain.ymax - origin.y) / h)) + 1;
    }

    double flux = 0.0;
    const double cell_area = h * h;
    for (int r = 0; r < n_rows; ++r) {
        for (int c = 0; c < n_cols; ++c) {
            Vec2 center{origin.x + (c + 0.5) * h, origin.y + (r + 0.5) * h};
            double value;
            if (field.kind() == FieldMap::Kind::Grid) {
                value = field.values()[static_cast<size_t>(r) * field.n_cols() + c];
            } else if (field.kind() == FieldMap::Kind::UniformRect) {
                const Rect& s = field.region();
                const bool inside = center.x > s.xmin && center.x < s.xmax &&
                                    center.y > s.ymin && center.y < s.ymax;
                value = inside ? field.uniform_value() : 0.0;
            } else {
                value = field.uniform_value();
            }
            if (value == 0.0) continue;
            int w;
            try {
                w = winding_number(path, center);
            } catch (const std::invalid_argument&) {
                // Sampling point on the path: documented deterministic
                // half-cell perturbation.
                w = winding_number(path, Vec2{center.x + 0.5 * h, center.y + 0.5 * h});
            }
            if (w != 0) flux += w * value * cell_area;
        }
    }
    return flux;
}

AnyonPhaseReport total_anyon_phase(const AnyonSpecies& species,
                                   const PlanarPath& path,
                                   const std::vector<Vec2>& others,
                                   const FieldMap& field, int resolution) {
    AnyonPhaseReport report;
    report.windings.reserve(others.size());
    for (const Vec2& other : others) {
        report.windings.push_back(winding_number(path, other));
    }
    long long total_winding = 0;
    for (int w : report.windings) total_winding += w;
    report.topological =
        principal_phase(static_cast<double>(total_winding) * species.pair_phase());
    report.geometric = principal_phase(
        species.charge * enclosed_external_flux(path, field, resolution));
    report.total = principal_phase(report.topological + report.geometric);
    return report;
}

RobustnessProbeResult deformation_robustness_probe(
    const AnyonSpecies& species, const PlanarPath& base_path,
    const std::vector<PlanarPath>& deformations, const std::vector<Vec2>& others,
    const FieldMap& field, double drift_threshold, int resolution) {
    RobustnessProbeResult result;
    result.threshold = drift_threshold;
    result.base = total_anyon_phase(species, base_path, others, field, resolution);
    result.all_robust = true;
    result.deformations.reserve(deformations.size());
    for (const PlanarPath& deformed : deformations) {
        DeformationVerdict verdict;
        verdict.report = total_anyon_phase(species, deformed, others, field, resolution);
        verdict.topology_changed = verdict.report.windings != result.base.windings;
        verdict.geometric_drift =
            phase_distance(verdict.report.geometric, result.base.geometric);
        verdict.robust =
            !verdict.topology_changed && verdict.geometric_drift <= drift_threshold;
        result.max_drift = std::max(result.max_drift, verdict.geometric_drift);
        if (!verdict.robust) result.all_robust = false;
        result.deformations.push_back(std::move(verdict));
    }
    return result;
}

}  // namespace phaselab
