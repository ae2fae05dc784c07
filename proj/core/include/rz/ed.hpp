#pragma once

#include <Eigen/SparseCore>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rz/model.hpp"

namespace rz {

/// Truncated Fock-space setup for exact diagonalization of the full chain
/// (spins included, no projection). Basis ordering is cavity-major with the
/// spin as the fastest (least significant) sub-index and cavity 1 in the
/// lowest digit: state = sum_j (spin_j + 2 m_j) * (2(n_max+1))^j.
struct FockConfig {
    int n_max = 2;          ///< photon cutoff per cavity, >= 0
    int n_cavities = 0;     ///< 0 = take from ModelParams; 1 = calibration mode
    enum class Solver { Auto, Dense, Iterative };
    Solver solver = Solver::Auto;
    double tol = 1e-9;      ///< eigensolver residual tolerance
    std::int64_t dim_cap = 500000;

    int chain_length(const ModelParams& p) const {
        return n_cavities > 0 ? n_cavities : p.n_cavities;
    }
    std::int64_t dimension(const ModelParams& p) const;
};

struct EdStateObservables {
    double energy = 0.0;
    std::vector<double> photon_numbers;          ///< <a^dag a> per cavity
    std::vector<double> nn_bond_currents;        ///< -2 Im <a_n^dag a_{n+1}>
    std::vector<Complex> alpha;                  ///< <a_n>
    double i_odd = 0.0, i_even = 0.0, i_total = 0.0;
};

struct EdReport {
    EdStateObservables ground;
    EdStateObservables first_excited;
    bool quasi_degenerate = false;    ///< E1 - E0 below the degeneracy tolerance
    /// currents of (|0> + |1>)/sqrt(2), filled when quasi_degenerate
    double sym_i_odd = 0.0, sym_i_even = 0.0, sym_i_total = 0.0;
    int n_max = 0;
    std::int64_t dimension = 0;
    double convergence_delta = 0.0;   ///< |E0(n_max) - E0(n_max - 1)|
};

struct CutoffRow {
    int n_max = 0;
    double energy = 0.0;
    double delta_prev = 0.0;   ///< energy(n_max) - energy(previous row)
    double max_photon = 0.0;
    bool converged_flag = false;
};

/// Assemble the full chain Hamiltonian on the truncated Fock space.
/// Hermitian by construction; throws DimensionCap above the configured cap.
Eigen::SparseMatrix<Complex> build_hamiltonian(const ModelParams& p, const FockConfig& cfg);

/// Lowest two eigenpairs and their observables, plus the cutoff-convergence
/// delta against n_max - 1.
EdReport ground_state(const ModelParams& p, const FockConfig& cfg);

/// Ground energy and observables against a list of cutoffs; flags rows whose
/// successive delta is below cfg.tol scaled by the energy.
std::vector<CutoffRow> cutoff_sweep(const ModelParams& p, const FockConfig& cfg,
                                    const std::vector<int>& n_max_list);

/// Binary dump of an ED eigenvector: 16-byte header (magic "RZGV", u32
/// version, u32 N, u32 n_max) followed by little-endian complex doubles.
void dump_ground_vector(const std::string& path, const Eigen::VectorXcd& vec, int n,
                        int n_max);

}  // namespace rz
