#include "rz/scan.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "rz/bogoliubov.hpp"
#include "rz/criticality.hpp"

namespace rz {

namespace {

constexpr double kPi = std::numbers::pi;

struct CellState {
    CellResult result;
    Displacements minimizer;
    bool ok = false;
};

struct PipelineOut {
    Phase label;
    double e_g, max_alpha_sq, min_eps;
    CurrentReport cur;
    Displacements d;
};

PipelineOut evaluate_point(const ModelParams& p, const MinimizeOptions& opts) {
    PipelineOut out;
    const MeanFieldSolution sol = minimize(p, opts);
    out.d = sol.displacements;
    out.e_g = sol.energy;
    out.max_alpha_sq = sol.displacements.max_photon_number();
    out.cur = currents(sol.displacements);
    out.label = classify(p, sol.displacements, out.cur).phase;
    const Spectrum spec = diagonalize(sr_form(p, sol.displacements).form);
    out.min_eps = spec.stable ? spec.lowest() : std::numeric_limits<double>::quiet_NaN();
    return out;
}

CellState evaluate_cell(const GridSpec& spec, int i1, int i2, const ScanOptions& opts,
                        const std::vector<const Displacements*>& warm) {
    CellState cell;
    cell.result.axis1 = spec.axis1_value(i1);
    cell.result.axis2 = spec.axis2_value(i2);
    const ModelParams p = spec.params_at(cell.result.axis1, cell.result.axis2);
    MinimizeOptions mopts = opts.minimize;
    for (const Displacements* w : warm)
        if (w) mopts.extra_seeds.push_back({"warm-neighbour", *w});
    try {
        PipelineOut out = evaluate_point(p, mopts);
        cell.result.label = out.label;
        cell.result.e_g = out.e_g;
        cell.result.max_alpha_sq = out.max_alpha_sq;
        cell.result.currents = out.cur;
        cell.result.min_eps = out.min_eps;
        cell.minimizer = std::move(out.d);
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.result.error = e.what();
        cell.result.label = Phase::Unclassified;
        cell.result.e_g = std::numeric_limits<double>::quiet_NaN();
        cell.result.max_alpha_sq = std::numeric_limits<double>::quiet_NaN();
        cell.result.min_eps = std::numeric_limits<double>::quiet_NaN();
    }
    return cell;
}

struct RefineOutcome {
    BoundaryPoint point;
    bool ambiguous = false;
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

RefineOutcome refine_impl(const GridSpec& spec, const CellResult& c1, const CellResult& c2,
                          const ScanOptions& opts) {
    const Phase la = c1.label, lb = c2.label;
    if (la == lb) throw DomainError("refine_boundary: cells carry the same label");

    auto params_at_t = [&](double t) {
        return spec.params_at(c1.axis1 + t * (c2.axis1 - c1.axis1),
                              c1.axis2 + t * (c2.axis2 - c1.axis2));
    };
    auto eval = [&](double t) { return evaluate_point(params_at_t(t), opts.minimize); };

    const double seg_len =
        std::max(std::abs(c2.axis1 - c1.axis1), std::abs(c2.axis2 - c1.axis2));

    RefineOutcome out;
    double lo = 0.0, hi = 1.0;
    PipelineOut plo = eval(lo), phi = eval(hi);
    if (plo.label != la || phi.label != lb) {
        out.ambiguous = true;  // endpoints do not reproduce the cell labels
        out.bracket_lo = lo;
        out.bracket_hi = hi;
        return out;
    }
    int steps = 0;
    while (steps < 12 || seg_len * (hi - lo) > 1e-6) {
        if (steps > 60) break;
        const double mid = 0.5 * (lo + hi);
        PipelineOut pm = eval(mid);
        if (pm.label == la) {
            lo = mid;
            plo = std::move(pm);
        } else if (pm.label == lb) {
            hi = mid;
            phi = std::move(pm);
        } else {
            out.ambiguous = true;
            out.bracket_lo = lo;
            out.bracket_hi = hi;
            return out;
        }
        ++steps;
    }

    BoundaryPoint& bp = out.point;
    const double tm = 0.5 * (lo + hi);
    bp.axis1 = c1.axis1 + tm * (c2.axis1 - c1.axis1);
    bp.axis2 = c1.axis2 + tm * (c2.axis2 - c1.axis2);
    bp.alpha_lo = std::sqrt(plo.max_alpha_sq);
    bp.alpha_hi = std::sqrt(phi.max_alpha_sq);
    bp.ic_lo = plo.cur.i_chiral;
    bp.ic_hi = phi.cur.i_chiral;

    // Jump across the final interval, relative to the larger of the two cell
    // values; a second-order onset grows only ~sqrt(1e-6) there while a
    // first-order boundary jumps by the full order-parameter difference.
    const double cell_alpha =
        std::max(std::sqrt(std::max(c1.max_alpha_sq, 0.0)),
                 std::sqrt(std::max(c2.max_alpha_sq, 0.0)));
    const double cell_ic = std::max(std::abs(c1.currents.i_chiral),
                                    std::abs(c2.currents.i_chiral));
    double jump = 0.0;
    if (cell_alpha > 0.0)
        jump = std::max(jump, std::abs(bp.alpha_hi - bp.alpha_lo) / cell_alpha);
    if (cell_ic > 0.0) jump = std::max(jump, std::abs(bp.ic_hi - bp.ic_lo) / cell_ic);
    bp.jump_rel = jump;
    bp.order = jump > 0.10 ? "first" : "second";
    return out;
}

int pair_key(Phase a, Phase b) {
    int x = static_cast<int>(a), y = static_cast<int>(b);
    if (x > y) std::swap(x, y);
    return x * 64 + y;
}

// Numerical critical coupling of a single momentum block at fixed parameters,
// by bisection on the dynamical stability of M(k)*Lambda.
double momentum_g1c(const ModelParams& tmpl, double k) {
    ModelParams p = tmpl;
    double lo = 1e-4, hi = 0.9999;
    p.g1 = lo;
    if (!diagonalize(momentum_form(p, k)).stable)
        throw DomainError("momentum_g1c: unstable at the lower bracket");
    p.g1 = hi;
    if (diagonalize(momentum_form(p, k)).stable)
        throw DomainError("momentum_g1c: stable at the upper bracket");
    for (int i = 0; i < 80 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        p.g1 = mid;
        (diagonalize(momentum_form(p, k)).stable ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::G1: return "g1";
        case Axis::J1OverJ2: return "j1_over_j2";
        case Axis::Theta: return "theta";
    }
    return "g1";
}

Axis axis_from_string(const std::string& s) {
    if (s == "g1") return Axis::G1;
    if (s == "j1_over_j2") return Axis::J1OverJ2;
    if (s == "theta") return Axis::Theta;
    throw DomainError("unknown axis name: " + s +
                      " (expected g1, j1_over_j2 or theta)");
}

ModelParams with_axis(const ModelParams& base, Axis axis, double value) {
    ModelParams p = base;
    switch (axis) {
        case Axis::G1: p.g1 = value; break;
        case Axis::J1OverJ2: p.j1 = value * p.j2; break;
        case Axis::Theta: p.theta = value; break;
    }
    return p;
}

void GridSpec::validate() const {
    if (a1_points < 2 || a2_points < 2)
        throw DomainError("grid axes need at least 2 points");
    if (!std::isfinite(a1_min) || !std::isfinite(a1_max) || !std::isfinite(a2_min) ||
        !std::isfinite(a2_max))
        throw DomainError("grid ranges must be finite");
    if (axis1 == axis2) throw DomainError("grid axes must differ");
    base.validate();
}

double GridSpec::axis1_value(int i) const {
    return a1_min + (a1_max - a1_min) * i / (a1_points - 1);
}

double GridSpec::axis2_value(int i) const {
    return a2_min + (a2_max - a2_min) * i / (a2_points - 1);
}

ModelParams GridSpec::params_at(double v1, double v2) const {
    return with_axis(with_axis(base, axis1, v1), axis2, v2);
}

PhaseDiagram scan(const GridSpec& spec, const ScanOptions& opts) {
    spec.validate();
    const int n1 = spec.a1_points, n2 = spec.a2_points;
    std::vector<CellState> cells(static_cast<size_t>(n1) * n2);
    auto idx = [n2](int i1, int i2) { return static_cast<size_t>(i1) * n2 + i2; };

    if (opts.workers <= 1) {
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                std::vector<const Displacements*> warm;
                if (i2 > 0 && cells[idx(i1, i2 - 1)].ok)
                    warm.push_back(&cells[idx(i1, i2 - 1)].minimizer);
                if (i1 > 0 && cells[idx(i1 - 1, i2)].ok)
                    warm.push_back(&cells[idx(i1 - 1, i2)].minimizer);
                cells[idx(i1, i2)] = evaluate_cell(spec, i1, i2, opts, warm);
            }
    } else {
        // rows are independent work items; warm starts stay within a row so
        // results do not depend on scheduling
        std::atomic<int> next_row{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < opts.workers; ++w)
            pool.emplace_back([&] {
                for (int i1 = next_row.fetch_add(1); i1 < n1; i1 = next_row.fetch_add(1))
                    for (int i2 = 0; i2 < n2; ++i2) {
                        std::vector<const Displacements*> warm;
                        if (i2 > 0 && cells[idx(i1, i2 - 1)].ok)
                            warm.push_back(&cells[idx(i1, i2 - 1)].minimizer);
                        cells[idx(i1, i2)] = evaluate_cell(spec, i1, i2, opts, warm);
                    }
            });
        for (auto& t : pool) t.join();
    }

    PhaseDiagram diagram;
    diagram.spec = spec;
    diagram.cells.reserve(cells.size());
    for (const CellState& c : cells) diagram.cells.push_back(c.result);

    if (opts.refine_boundaries) {
        std::vector<std::pair<int, BoundaryPoint>> points;
        std::vector<std::pair<int, std::pair<Phase, Phase>>> keys;
        auto consider = [&](const CellResult& a, const CellResult& b) {
            if (!a.error.empty() || !b.error.empty() || a.label == b.label) return;
            RefineOutcome out = refine_impl(spec, a, b, opts);
            if (out.ambiguous) {
                BoundaryPoint bp;
                bp.axis1 = 0.5 * (a.axis1 + b.axis1);
                bp.axis2 = 0.5 * (a.axis2 + b.axis2);
                bp.order = "ambiguous";
                points.emplace_back(pair_key(a.label, b.label), bp);
            } else {
                points.emplace_back(pair_key(a.label, b.label), out.point);
            }
            keys.emplace_back(pair_key(a.label, b.label),
                              std::make_pair(std::min(a.label, b.label),
                                             std::max(a.label, b.label)));
        };
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                if (i1 + 1 < n1) consider(diagram.at(i1, i2), diagram.at(i1 + 1, i2));
                if (i2 + 1 < n2) consider(diagram.at(i1, i2), diagram.at(i1, i2 + 1));
            }
        for (size_t i = 0; i < points.size(); ++i) {
            BoundarySegment* seg = nullptr;
            for (auto& s : diagram.boundaries)
                if (pair_key(s.a, s.b) == points[i].first) seg = &s;
            if (!seg) {
                diagram.boundaries.push_back({keys[i].second.first, keys[i].second.second, {}});
                seg = &diagram.boundaries.back();
            }
            seg->points.push_back(points[i].second);
        }
    }

    // special points computable from this plane
    const bool ratio_g1_plane =
        (spec.axis1 == Axis::J1OverJ2 && spec.axis2 == Axis::G1) ||
        (spec.axis1 == Axis::G1 && spec.axis2 == Axis::J1OverJ2);
    if (ratio_g1_plane && std::abs(spec.base.theta - kPi / 2) < 1e-9) {
        try {
            const bool ratio_first = spec.axis1 == Axis::J1OverJ2;
            const double lo = std::max(ratio_first ? spec.a1_min : spec.a2_min, 1e-3);
            const double hi = ratio_first ? spec.a1_max : spec.a2_max;
            diagram.special.triple_point = locate_triple_point(spec.base, lo, hi);
        } catch (const std::exception&) {
        }
    }
    auto theta_boundary = [&](Phase a, Phase b) -> std::optional<double> {
        for (const auto& seg : diagram.boundaries)
            if ((seg.a == a && seg.b == b) || (seg.a == b && seg.b == a)) {
                if (seg.points.empty()) return std::nullopt;
                const BoundaryPoint& bp = seg.points.front();
                return spec.axis1 == Axis::Theta ? bp.axis1 : bp.axis2;
            }
        return std::nullopt;
    };
    const bool theta_sweep = (spec.axis1 == Axis::Theta && spec.a2_points >= 1) ||
                             (spec.axis2 == Axis::Theta && spec.a1_points >= 1);
    if (theta_sweep) {
        diagram.special.theta_c1 = theta_boundary(Phase::OCSR, Phase::MSR);
        diagram.special.theta_c2 = theta_boundary(Phase::MSR, Phase::ECSR);
    }
    return diagram;
}

BoundaryPoint refine_boundary(const GridSpec& spec, const CellResult& c1,
                              const CellResult& c2, const ScanOptions& opts) {
    RefineOutcome out = refine_impl(spec, c1, c2, opts);
    if (out.ambiguous)
        throw BisectionAmbiguous("labels flicker inside bracket [" +
                                 std::to_string(out.bracket_lo) + ", " +
                                 std::to_string(out.bracket_hi) + "]");
    return out.point;
}

double locate_triple_point(const ModelParams& tmpl, double ratio_lo, double ratio_hi) {
    tmpl.validate();
    if (std::abs(tmpl.theta - kPi / 2) > 1e-9)
        throw DomainError("triple point location requires a theta = pi/2 template");
    if (!(tmpl.j2 > 0.0)) throw DomainError("triple point requires j2 > 0");

    const MomentumGrid grid = MomentumGrid::reduced_bz(tmpl.n_cavities);
    double k_msr = 0.0;
    for (double k : grid.k)
        if (k > 1e-12 && k < kPi / 2 - 1e-12 && (k_msr == 0.0 || k < k_msr)) k_msr = k;
    if (k_msr == 0.0) throw DomainError("no interior momentum available");

    auto fsr_first = [&](double ratio) {
        ModelParams p = tmpl;
        p.j1 = ratio * p.j2;
        return momentum_g1c(p, 0.0) < momentum_g1c(p, k_msr);
    };
    bool at_lo = fsr_first(ratio_lo), at_hi = fsr_first(ratio_hi);
    if (at_lo == at_hi)
        throw NoIntersection("critical lines do not cross in the given ratio range");
    double lo = ratio_lo, hi = ratio_hi;
    for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (fsr_first(mid) == at_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rz
