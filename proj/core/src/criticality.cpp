#include "rz/criticality.hpp"

#include <algorithm>
#include <cmath>

namespace rz {

namespace {

bool np_form_unstable(const ModelParams& p) {
    return !diagonalize(realspace_np_form(p)).stable;
}

}  // namespace

SrForm sr_form(const ModelParams& p, const Displacements& d) {
    p.validate();
    const int n = p.n_cavities;
    if (d.size() != n) throw DomainError("displacements length must equal n_cavities");
    const double g = p.g();

    SrForm sr;
    sr.delta_prime.resize(n);
    sr.lambda.resize(n);

    // Start from the NP form (same hopping structure) and replace the
    // per-cavity squeezing coefficient -omega g1^2 by -lambda_n^2 / Delta'_n.
    ModelParams np = p;
    np.g1 = 0.0;
    sr.form = realspace_np_form(np);
    for (int j = 0; j < n; ++j) {
        sr.delta_prime[j] = std::sqrt(p.delta * p.delta + 16.0 * g * g * d.a[j] * d.a[j]);
        sr.lambda[j] = g * p.delta / sr.delta_prime[j];
        const double c = sr.lambda[j] * sr.lambda[j] / sr.delta_prime[j];
        sr.form.matrix(j, j) -= 2.0 * c;
        sr.form.matrix(n + j, n + j) -= 2.0 * c;
        sr.form.matrix(j, n + j) = -2.0 * c;
        sr.form.matrix(n + j, j) = -2.0 * c;
    }
    sr.form.offset = energy(p, d) - 0.5 * n * p.omega;
    return sr;
}

Spectrum spectrum_at(const ModelParams& p, const MinimizeOptions& opts) {
    const MeanFieldSolution sol = minimize(p, opts);
    return diagonalize(sr_form(p, sol.displacements).form);
}

double locate_gap_closure(const ModelParams& p, double g1_lo, double g1_hi, double tol) {
    ModelParams q = p;
    q.g1 = g1_lo;
    if (np_form_unstable(q)) throw DomainError("gap closure: lower bracket already unstable");
    q.g1 = g1_hi;
    if (!np_form_unstable(q)) throw DomainError("gap closure: upper bracket still stable");
    while (g1_hi - g1_lo > tol) {
        const double mid = 0.5 * (g1_lo + g1_hi);
        if (mid <= g1_lo || mid >= g1_hi) break;  // double-precision floor
        q.g1 = mid;
        (np_form_unstable(q) ? g1_hi : g1_lo) = mid;
    }
    return 0.5 * (g1_lo + g1_hi);
}

ExponentFit fit_exponent(const ModelParams& p, FitSide side, int mode_index,
                         const FitOptions& opts) {
    p.validate();
    if (opts.n_points < 12) throw FitError("fit needs at least 12 window points");

    ExponentFit fit;
    fit.side = side;
    fit.mode_index = mode_index;
    fit.window_min = opts.window_min;
    fit.window_max = opts.window_max;
    fit.g1c_est = locate_gap_closure(p);

    const double floor_eps = 1e-12 * p.delta;
    std::vector<double> log_delta, log_eps;
    MinimizeOptions mopts = opts.minimize;
    for (int i = 0; i < opts.n_points; ++i) {
        // walk inward from the window edge, warm-starting from the neighbour
        const double t = static_cast<double>(i) / (opts.n_points - 1);
        const double dg = opts.window_max *
                          std::pow(opts.window_min / opts.window_max, t);
        ModelParams q = p;
        q.g1 = side == FitSide::Below ? fit.g1c_est - dg : fit.g1c_est + dg;
        const MeanFieldSolution sol = minimize(q, mopts);
        mopts.extra_seeds = {{"warm", sol.displacements}};
        const Spectrum spec = diagonalize(sr_form(q, sol.displacements).form);
        const int m = static_cast<int>(spec.epsilons.size());
        if (mode_index >= m) throw FitError("mode index beyond spectrum size");
        const double eps = spec.epsilons[m - 1 - mode_index];
        if (!spec.stable || eps < floor_eps) continue;
        log_delta.push_back(std::log(dg));
        log_eps.push_back(std::log(eps));
    }

    fit.n_points = static_cast<int>(log_delta.size());
    if (fit.n_points < 8)
        throw FitError("fewer than 8 points above the numerical floor");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < fit.n_points; ++i) {
        sx += log_delta[i];
        sy += log_eps[i];
        sxx += log_delta[i] * log_delta[i];
        sxy += log_delta[i] * log_eps[i];
    }
    const double denom = fit.n_points * sxx - sx * sx;
    fit.gamma = (fit.n_points * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.gamma * sx) / fit.n_points;
    fit.residual = 0.0;
    for (int i = 0; i < fit.n_points; ++i)
        fit.residual = std::max(
            fit.residual, std::abs(log_eps[i] - (intercept + fit.gamma * log_delta[i])));
    return fit;
}

}  // namespace rz
