#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rz/model.hpp"

namespace rz {

/// Per-cavity mean-field amplitudes alpha_n = A_n + i B_n, the order-parameter
/// field of the superradiant phases. Indexed 0..N-1 (cavity n = index + 1).
struct Displacements {
    std::vector<double> a;
    std::vector<double> b;

    Displacements() = default;
    explicit Displacements(int n) : a(n, 0.0), b(n, 0.0) {}

    int size() const { return static_cast<int>(a.size()); }
    Complex alpha(int j) const { return {a[j], b[j]}; }
    double photon_number(int j) const { return a[j] * a[j] + b[j] * b[j]; }
    double phase(int j) const { return std::atan2(b[j], a[j]); }
    double max_photon_number() const;
};

struct Seed {
    std::string id;
    Displacements d;
};

struct MinimizeOptions {
    double tol_grad_scale = 1e-10;  ///< converged when |grad| <= scale * delta
    int max_iterations = 10000;     ///< per start
    int n_random_seeds = 20;
    std::uint64_t rng_seed = 20240917ULL;
    std::vector<Seed> extra_seeds;  ///< warm starts, tried after the standard list

    double tol_grad(const ModelParams& p) const { return tol_grad_scale * p.delta; }
};

struct MeanFieldSolution {
    Displacements displacements;
    double energy = 0.0;
    double grad_norm = 0.0;
    std::string seed_id;
    int n_restarts = 0;
};

/// Ground-state energy functional over the displacements:
/// sum_n [w(A^2+B^2) - sqrt(Delta^2 + 16 g^2 A^2)/2] + NN + NNN hopping energies,
/// periodic indices, all N cavities.
double energy(const ModelParams& p, const Displacements& d);

/// Exact partials (dE/dA_1..N, dE/dB_1..N) as one vector of length 2N.
Eigen::VectorXd gradient(const ModelParams& p, const Displacements& d);

/// Exact Hessian in the same [A; B] layout. The hopping part is constant;
/// only the per-cavity atomic term depends on the configuration.
Eigen::MatrixXd hessian(const ModelParams& p, const Displacements& d);

/// Single-cavity stationary amplitude sqrt(Delta (16 g1^4 - 1) / (16 g1^2 w)),
/// zero when g1 <= 1/2.
double decoupled_amplitude(const ModelParams& p);

/// Deterministic multi-start seed list: zero seed first, then uniform +-A*,
/// plane waves over the momentum grid (per species and joint), species-staggered
/// real seeds, and `n_random_seeds` uniform random draws.
std::vector<Seed> ansatz_seeds(const ModelParams& p, const MinimizeOptions& opts = {});

/// Quasi-Newton descent with analytic gradient from every seed, followed by a
/// damped-Newton polish; returns the lowest-energy converged start. Ties within
/// 1e-9*Delta are broken toward the largest sum of A_n, then by seed order.
/// Throws ConvergenceFailure when no start converges.
MeanFieldSolution minimize(const ModelParams& p, const MinimizeOptions& opts = {});

}  // namespace rz
