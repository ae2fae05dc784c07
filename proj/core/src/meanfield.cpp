#include "rz/meanfield.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace rz {

namespace {

double alternating_sign(int j) { return (j % 2 == 0) ? -1.0 : 1.0; }

Eigen::VectorXd pack(const Displacements& d) {
    const int n = d.size();
    Eigen::VectorXd x(2 * n);
    for (int j = 0; j < n; ++j) {
        x[j] = d.a[j];
        x[n + j] = d.b[j];
    }
    return x;
}

Displacements unpack(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size()) / 2;
    Displacements d(n);
    for (int j = 0; j < n; ++j) {
        d.a[j] = x[j];
        d.b[j] = x[n + j];
    }
    return d;
}

struct DescentResult {
    Eigen::VectorXd x;
    double energy = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
};

class Objective {
  public:
    explicit Objective(const ModelParams& p) : p_(p) {}

    double value(const Eigen::VectorXd& x) const { return energy(p_, unpack(x)); }
    Eigen::VectorXd grad(const Eigen::VectorXd& x) const { return gradient(p_, unpack(x)); }
    Eigen::MatrixXd hess(const Eigen::VectorXd& x) const { return hessian(p_, unpack(x)); }

  private:
    ModelParams p_;
};

// Backtracking line search on the Armijo condition; returns the accepted step
// or 0 when no decrease was found.
double backtrack(const Objective& f, const Eigen::VectorXd& x, double fx,
                 const Eigen::VectorXd& g, const Eigen::VectorXd& dir) {
    const double slope = g.dot(dir);
    if (!(slope < 0.0)) return 0.0;
    double t = 1.0;
    for (int i = 0; i < 60; ++i) {
        if (f.value(x + t * dir) <= fx + 1e-4 * t * slope) return t;
        t *= 0.5;
    }
    return 0.0;
}

DescentResult descend(const Objective& f, Eigen::VectorXd x, double tol_grad,
                      int max_iterations) {
    const int dim = static_cast<int>(x.size());
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd g = f.grad(x);
    double fx = f.value(x);
    // keep the quasi-Newton stage's exit above the polish target so the exact
    // Hessian finishes the job
    const double qn_tol = std::max(tol_grad, 1e-8);

    int it = 0;
    for (; it < max_iterations && g.norm() > qn_tol; ++it) {
        Eigen::VectorXd dir = -hinv * g;
        if (!(g.dot(dir) < 0.0)) {
            hinv.setIdentity();
            dir = -g;
        }
        double t = backtrack(f, x, fx, g, dir);
        if (t == 0.0) {
            // fall back to plain gradient descent with a shrinking step
            dir = -g;
            t = backtrack(f, x, fx, g, dir);
            if (t == 0.0) break;
        }
        const Eigen::VectorXd s = t * dir;
        const Eigen::VectorXd x_new = x + s;
        const Eigen::VectorXd g_new = f.grad(x_new);
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const Eigen::VectorXd hy = hinv * y;
            const double yhy = y.dot(hy);
            hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
                    (hy * s.transpose() + s * hy.transpose()) / sy;
        }
        x = x_new;
        g = g_new;
        fx = f.value(x);
    }

    // Newton polish with Levenberg damping; the Hessian is exact and cheap.
    for (int polish = 0; polish < 60 && g.norm() > tol_grad; ++polish) {
        Eigen::MatrixXd h = f.hess(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        double mu = lmin > 1e-10 * lmax ? 0.0 : (1e-8 * lmax - std::min(lmin, 0.0));
        bool stepped = false;
        for (int tries = 0; tries < 20; ++tries) {
            Eigen::VectorXd dir = (h + mu * Eigen::MatrixXd::Identity(h.rows(), h.cols()))
                                      .ldlt()
                                      .solve(-g);
            const double t = backtrack(f, x, fx, g, dir);
            if (t > 0.0) {
                x += t * dir;
                g = f.grad(x);
                fx = f.value(x);
                stepped = true;
                break;
            }
            mu = std::max(mu * 10.0, 1e-8 * lmax);
        }
        if (!stepped) break;
    }

    DescentResult r;
    r.x = std::move(x);
    r.energy = fx;
    r.grad_norm = g.norm();
    r.converged = r.grad_norm <= tol_grad;
    return r;
}

}  // namespace

double Displacements::max_photon_number() const {
    double m = 0.0;
    for (int j = 0; j < size(); ++j) m = std::max(m, photon_number(j));
    return m;
}

double energy(const ModelParams& p, const Displacements& d) {
    const int n = p.n_cavities;
    if (d.size() != n) throw DomainError("displacements length must equal n_cavities");
    const double g = p.g();
    const double g16 = 16.0 * g * g;
    const double ct = std::cos(p.theta), st = std::sin(p.theta);

    double e = 0.0;
    for (int j = 0; j < n; ++j) {
        e += p.omega * (d.a[j] * d.a[j] + d.b[j] * d.b[j]) -
             0.5 * std::sqrt(p.delta * p.delta + g16 * d.a[j] * d.a[j]);
        const int nn = (j + 1) % n;
        e += -2.0 * p.j1 * (d.a[j] * d.a[nn] + d.b[j] * d.b[nn]);
        const int nnn = (j + 2) % n;
        e += -2.0 * p.j2 * alternating_sign(j) *
             (ct * (d.a[j] * d.a[nnn] + d.b[j] * d.b[nnn]) +
              st * (d.b[j] * d.a[nnn] - d.b[nnn] * d.a[j]));
    }
    return e;
}

Eigen::VectorXd gradient(const ModelParams& p, const Displacements& d) {
    const int n = p.n_cavities;
    if (d.size() != n) throw DomainError("displacements length must equal n_cavities");
    const double g = p.g();
    const double g16 = 16.0 * g * g;
    const double ct = std::cos(p.theta), st = std::sin(p.theta);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * n);
    for (int j = 0; j < n; ++j) {
        const int up1 = (j + 1) % n, dn1 = (j + n - 1) % n;
        const int up2 = (j + 2) % n, dn2 = (j + n - 2) % n;
        const double sgn = alternating_sign(j);
        const double dprime = std::sqrt(p.delta * p.delta + g16 * d.a[j] * d.a[j]);
        grad[j] = 2.0 * p.omega * d.a[j] - 8.0 * g * g * d.a[j] / dprime -
                  2.0 * p.j1 * (d.a[up1] + d.a[dn1]) -
                  2.0 * p.j2 * sgn *
                      (ct * (d.a[up2] + d.a[dn2]) + st * (d.b[dn2] - d.b[up2]));
        grad[n + j] = 2.0 * p.omega * d.b[j] - 2.0 * p.j1 * (d.b[up1] + d.b[dn1]) -
                      2.0 * p.j2 * sgn *
                          (ct * (d.b[up2] + d.b[dn2]) + st * (d.a[up2] - d.a[dn2]));
    }
    return grad;
}

Eigen::MatrixXd hessian(const ModelParams& p, const Displacements& d) {
    const int n = p.n_cavities;
    if (d.size() != n) throw DomainError("displacements length must equal n_cavities");
    const double g = p.g();
    const double g16 = 16.0 * g * g;
    const double ct = std::cos(p.theta), st = std::sin(p.theta);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        const int up1 = (j + 1) % n, up2 = (j + 2) % n;
        const double sgn = alternating_sign(j);
        const double dprime2 = p.delta * p.delta + g16 * d.a[j] * d.a[j];
        const double dprime = std::sqrt(dprime2);
        h(j, j) = 2.0 * p.omega - 8.0 * g * g * p.delta * p.delta / (dprime2 * dprime);
        h(n + j, n + j) = 2.0 * p.omega;

        h(j, up1) += -2.0 * p.j1;
        h(up1, j) += -2.0 * p.j1;
        h(n + j, n + up1) += -2.0 * p.j1;
        h(n + up1, n + j) += -2.0 * p.j1;

        const double cj = -2.0 * p.j2 * sgn * ct;
        h(j, up2) += cj;
        h(up2, j) += cj;
        h(n + j, n + up2) += cj;
        h(n + up2, n + j) += cj;

        // DM-like term: couples A_n with B_{n+-2}
        const double sj = 2.0 * p.j2 * sgn * st;
        h(j, n + up2) += sj;
        h(n + up2, j) += sj;
        h(n + j, up2) += -sj;
        h(up2, n + j) += -sj;
    }
    return h;
}

double decoupled_amplitude(const ModelParams& p) {
    if (p.g1 <= 0.5) return 0.0;
    const double g1sq = p.g1 * p.g1;
    return std::sqrt(p.delta * (16.0 * g1sq * g1sq - 1.0) / (16.0 * g1sq * p.omega));
}

std::vector<Seed> ansatz_seeds(const ModelParams& p, const MinimizeOptions& opts) {
    p.validate();
    const int n = p.n_cavities;
    std::vector<Seed> seeds;
    seeds.push_back({"zero", Displacements(n)});

    const double astar = decoupled_amplitude(p);
    if (astar > 0.0) {
        for (double sign : {1.0, -1.0}) {
            Seed s{sign > 0 ? "uniform+" : "uniform-", Displacements(n)};
            for (int j = 0; j < n; ++j) s.d.a[j] = sign * astar;
            seeds.push_back(std::move(s));
        }

        const MomentumGrid grid = MomentumGrid::reduced_bz(n);
        std::vector<double> ks;
        for (double k : grid.k) {
            ks.push_back(k);
            if (std::abs(k) > 1e-12) ks.push_back(-k);
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                 ks.end());
        for (double k : ks) {
            for (int mode = 0; mode < 3; ++mode) {  // 0 joint, 1 odd-only, 2 even-only
                Seed s;
                s.id = (mode == 0 ? "pw" : mode == 1 ? "pw-odd" : "pw-even");
                s.id += "(k=" + std::to_string(k) + ")";
                s.d = Displacements(n);
                for (int j = 0; j < n; ++j) {
                    const bool odd_cavity = (j % 2 == 0);  // cavity number j+1
                    if (mode == 1 && !odd_cavity) continue;
                    if (mode == 2 && odd_cavity) continue;
                    s.d.a[j] = astar * std::cos(k * (j + 1));
                    s.d.b[j] = astar * std::sin(k * (j + 1));
                }
                seeds.push_back(std::move(s));
            }
        }

        for (int mode = 0; mode < 3; ++mode) {  // staggered: 0 odd, 1 even, 2 both
            Seed s{mode == 0 ? "stagger-odd" : mode == 1 ? "stagger-even" : "stagger-both",
                   Displacements(n)};
            int rank_odd = 0, rank_even = 0;
            for (int j = 0; j < n; ++j) {
                const bool odd_cavity = (j % 2 == 0);
                int& rank = odd_cavity ? rank_odd : rank_even;
                const bool stagger = (mode == 2) || (mode == 0 && odd_cavity) ||
                                     (mode == 1 && !odd_cavity);
                s.d.a[j] = (stagger && rank % 2 == 1) ? -astar : astar;
                ++rank;
            }
            seeds.push_back(std::move(s));
        }
    }

    // Random seeds need a floor on their radius: above a critical line with
    // g1 <= 1/2 the decoupled amplitude is zero yet the minimizer must still
    // reach the symmetry-broken minimum.
    const double radius = std::max(2.0 * astar, 0.5 * std::sqrt(p.delta / p.omega));
    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < opts.n_random_seeds; ++i) {
        Seed s{"random#" + std::to_string(i), Displacements(n)};
        for (int j = 0; j < n; ++j) {
            const double r = radius * std::sqrt(unit(rng));
            const double phi = 2.0 * M_PI * unit(rng);
            s.d.a[j] = r * std::cos(phi);
            s.d.b[j] = r * std::sin(phi);
        }
        seeds.push_back(std::move(s));
    }
    return seeds;
}

MeanFieldSolution minimize(const ModelParams& p, const MinimizeOptions& opts) {
    p.validate();
    std::vector<Seed> seeds = ansatz_seeds(p, opts);
    seeds.insert(seeds.end(), opts.extra_seeds.begin(), opts.extra_seeds.end());

    const Objective f(p);
    const double tol = opts.tol_grad(p);

    bool have_best = false;
    MeanFieldSolution best;
    double best_grad = std::numeric_limits<double>::infinity();
    for (const Seed& seed : seeds) {
        DescentResult r = descend(f, pack(seed.d), tol, opts.max_iterations);
        best_grad = std::min(best_grad, r.grad_norm);
        if (!r.converged) continue;
        const double sum_a = r.x.head(p.n_cavities).sum();
        bool take = !have_best;
        if (have_best) {
            if (r.energy < best.energy - 1e-9 * p.delta) {
                take = true;
            } else if (std::abs(r.energy - best.energy) <= 1e-9 * p.delta) {
                const double best_sum_a =
                    pack(best.displacements).head(p.n_cavities).sum();
                take = sum_a > best_sum_a + 1e-12;
            }
        }
        if (take) {
            best.displacements = unpack(r.x);
            best.energy = r.energy;
            best.grad_norm = r.grad_norm;
            best.seed_id = seed.id;
            have_best = true;
        }
    }
    best.n_restarts = static_cast<int>(seeds.size());
    if (!have_best)
        throw ConvergenceFailure("no start converged; best |grad| = " +
                                 std::to_string(best_grad));
    return best;
}

}  // namespace rz
