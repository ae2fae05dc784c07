#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rz/meanfield.hpp"
#include "rz/model.hpp"
#include "rz/observables.hpp"

namespace rz {

enum class Axis { G1, J1OverJ2, Theta };

const char* to_string(Axis axis);
Axis axis_from_string(const std::string& s);

/// Apply one axis value to a parameter template.
ModelParams with_axis(const ModelParams& base, Axis axis, double value);

struct GridSpec {
    Axis axis1 = Axis::J1OverJ2;
    double a1_min = 0.0, a1_max = 0.3;
    int a1_points = 61;
    Axis axis2 = Axis::G1;
    double a2_min = 0.4, a2_max = 0.6;
    int a2_points = 61;
    ModelParams base;

    void validate() const;
    double axis1_value(int i) const;
    double axis2_value(int i) const;
    ModelParams params_at(double v1, double v2) const;
};

struct CellResult {
    double axis1 = 0.0, axis2 = 0.0;
    Phase label = Phase::Unclassified;
    double e_g = 0.0;
    double max_alpha_sq = 0.0;
    CurrentReport currents;
    double min_eps = 0.0;
    std::string error;  ///< empty on success; errors never abort the scan
};

struct BoundaryPoint {
    double axis1 = 0.0, axis2 = 0.0;
    std::string order;  ///< "first" | "second" | "ambiguous"
    double jump_rel = 0.0;
    // raw endpoint metrics across the final bisection interval, kept so the
    // first/second threshold can be re-applied offline
    double alpha_lo = 0.0, alpha_hi = 0.0;
    double ic_lo = 0.0, ic_hi = 0.0;
};

struct BoundarySegment {
    Phase a = Phase::NP, b = Phase::NP;
    std::vector<BoundaryPoint> points;
};

struct SpecialPoints {
    std::optional<double> triple_point;
    std::optional<double> theta_c1;
    std::optional<double> theta_c2;
};

struct PhaseDiagram {
    GridSpec spec;
    std::vector<CellResult> cells;  ///< row-major: index = i1 * a2_points + i2
    std::vector<BoundarySegment> boundaries;
    SpecialPoints special;

    const CellResult& at(int i1, int i2) const { return cells[i1 * spec.a2_points + i2]; }
};

struct ScanOptions {
    int workers = 1;
    bool refine_boundaries = true;
    MinimizeOptions minimize;
};

/// minimize + classify + currents on every grid point. Cells seed from the
/// already-computed left (and, single-worker, lower) neighbour in addition to
/// the standard list. Single-worker re-runs are bit-identical.
PhaseDiagram scan(const GridSpec& spec, const ScanOptions& opts = {});

/// Bisection along the segment between two differently-labelled grid points
/// (>= 12 steps, interval <= 1e-6). Tagged first-order when max|alpha| or I_C
/// jumps by more than 10% of the larger side across the final interval.
/// Throws BisectionAmbiguous when a third label shows up inside the bracket.
BoundaryPoint refine_boundary(const GridSpec& spec, const CellResult& c1,
                              const CellResult& c2, const ScanOptions& opts = {});

/// Ratio J1/J2 where the k=0 and k=+-pi/3-type normal-phase critical lines
/// cross at theta = pi/2, found by bisection on which momentum closes first.
/// Throws NoIntersection if the predicate does not change over the range.
double locate_triple_point(const ModelParams& tmpl, double ratio_lo = 1e-3,
                           double ratio_hi = 0.5);

}  // namespace rz
