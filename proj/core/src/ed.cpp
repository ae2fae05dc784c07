#include "rz/ed.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

namespace rz {

namespace {

double alternating_sign(int j) { return (j % 2 == 0) ? -1.0 : 1.0; }

void validate_ed(const ModelParams& p, const FockConfig& cfg) {
    if (cfg.n_max < 0) throw DomainError("n_max must be >= 0");
    const int n = cfg.chain_length(p);
    if (n != 1) {
        ModelParams q = p;
        q.n_cavities = n;
        q.validate();
    } else {
        if (!(p.omega > 0.0) || !(p.delta > 0.0)) throw DomainError("bad parameters");
    }
}

struct Basis {
    int n = 0;        // cavities
    int site_dim = 0; // 2 * (n_max + 1)
    int n_max = 0;
    std::int64_t dim = 0;
    std::vector<std::int64_t> stride;

    Basis(int n_cav, int nmax) : n(n_cav), site_dim(2 * (nmax + 1)), n_max(nmax) {
        stride.resize(n);
        dim = 1;
        for (int j = 0; j < n; ++j) {
            stride[j] = dim;
            dim *= site_dim;
        }
    }
    int spin(std::int64_t state, int j) const {
        return static_cast<int>((state / stride[j]) % site_dim) & 1;
    }
    int photons(std::int64_t state, int j) const {
        return static_cast<int>((state / stride[j]) % site_dim) >> 1;
    }
    std::int64_t with_site(std::int64_t state, int j, int m, int s) const {
        const std::int64_t old = (state / stride[j]) % site_dim;
        return state + ((static_cast<std::int64_t>(2 * m + s)) - old) * stride[j];
    }
};

struct LanczosOut {
    double eval = 0.0;
    Eigen::VectorXcd evec;
};

// Plain Lanczos with full reorthogonalization and locked restarts; optional
// deflation against an already-converged eigenvector.
LanczosOut lanczos_lowest(const Eigen::SparseMatrix<Complex>& h,
                          const Eigen::VectorXcd* deflate, double tol,
                          std::uint64_t seed) {
    const std::int64_t dim = h.rows();
    const int m_max = static_cast<int>(std::min<std::int64_t>(dim, 120));

    Eigen::VectorXcd v0(dim);
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::int64_t i = 0; i < dim; ++i) v0[i] = Complex(u(rng), u(rng));
    }

    auto project_out = [&](Eigen::VectorXcd& w, const Eigen::MatrixXcd& v, int cols) {
        for (int pass = 0; pass < 2; ++pass)
            for (int c = 0; c < cols; ++c) w -= v.col(c).dot(w) * v.col(c);
        if (deflate)
            for (int pass = 0; pass < 2; ++pass) w -= deflate->dot(w) * (*deflate);
    };

    for (int round = 0; round < 16; ++round) {
        Eigen::MatrixXcd v(dim, m_max + 1);
        if (deflate)
            for (int pass = 0; pass < 2; ++pass) v0 -= deflate->dot(v0) * (*deflate);
        v0.normalize();
        v.col(0) = v0;

        std::vector<double> alpha, beta;
        Eigen::VectorXd ritz_y;
        for (int it = 0; it < m_max; ++it) {
            Eigen::VectorXcd w = h * v.col(it);
            alpha.push_back(v.col(it).dot(w).real());
            w -= alpha[it] * v.col(it);
            if (it > 0) w -= beta[it - 1] * v.col(it - 1);
            project_out(w, v, it + 1);
            const double b = w.norm();

            // Ritz estimate from the tridiagonal section
            const int k = it + 1;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
            for (int i = 0; i < k; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            const double theta = es.eigenvalues()(0);
            const Eigen::VectorXd y = es.eigenvectors().col(0);
            const double resid = b * std::abs(y(k - 1));
            if (resid <= tol * (1.0 + std::abs(theta)) || b <= 1e-14 || it == m_max - 1) {
                if (resid <= tol * (1.0 + std::abs(theta)) || b <= 1e-14) {
                    LanczosOut out;
                    out.eval = theta;
                    out.evec = v.leftCols(k) * y.cast<Complex>();
                    out.evec.normalize();
                    return out;
                }
                v0 = v.leftCols(k) * y.cast<Complex>();  // restart from the Ritz vector
                break;
            }
            beta.push_back(b);
            v.col(it + 1) = w / b;
        }
    }
    throw NoConvergence("Lanczos did not converge within the restart budget");
}

// <a_j^dag a_l> for j != l.
Complex hopping_correlation(const Basis& basis, const Eigen::VectorXcd& psi, int j, int l) {
    Complex acc = 0.0;
    for (std::int64_t s = 0; s < basis.dim; ++s) {
        if (psi[s] == Complex(0.0)) continue;
        const int ml = basis.photons(s, l);
        const int mj = basis.photons(s, j);
        if (ml < 1 || mj >= basis.n_max) continue;
        std::int64_t target = basis.with_site(s, l, ml - 1, basis.spin(s, l));
        target = basis.with_site(target, j, mj + 1, basis.spin(target, j));
        acc += std::conj(psi[target]) * std::sqrt(double(ml) * double(mj + 1)) * psi[s];
    }
    return acc;
}

EdStateObservables observables_of(const Basis& basis, const Eigen::VectorXcd& psi,
                                  double energy) {
    const int n = basis.n;
    EdStateObservables obs;
    obs.energy = energy;
    obs.photon_numbers.assign(n, 0.0);
    obs.alpha.assign(n, Complex(0.0));
    for (std::int64_t s = 0; s < basis.dim; ++s) {
        const double w = std::norm(psi[s]);
        if (w == 0.0) continue;
        for (int j = 0; j < n; ++j) obs.photon_numbers[j] += w * basis.photons(s, j);
    }
    for (int j = 0; j < n; ++j) {
        Complex a = 0.0;
        for (std::int64_t s = 0; s < basis.dim; ++s) {
            const int m = basis.photons(s, j);
            if (m < 1 || psi[s] == Complex(0.0)) continue;
            const std::int64_t target = basis.with_site(s, j, m - 1, basis.spin(s, j));
            a += std::conj(psi[target]) * std::sqrt(double(m)) * psi[s];
        }
        obs.alpha[j] = a;
    }
    if (n > 1) {
        obs.nn_bond_currents.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const Complex c = hopping_correlation(basis, psi, j, (j + 1) % n);
            obs.nn_bond_currents[j] = -2.0 * c.imag();
            obs.i_total += obs.nn_bond_currents[j];
            const Complex c2 = hopping_correlation(basis, psi, j, (j + 2) % n);
            const double bond = -2.0 * c2.imag();
            if (j % 2 == 0)
                obs.i_odd += bond;  // cavity number j+1 is odd
            else
                obs.i_even += bond;
        }
    }
    return obs;
}

// Deterministic gauge: largest-magnitude component made real positive.
void fix_gauge(Eigen::VectorXcd& psi) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < psi.size(); ++i)
        if (std::abs(psi[i]) > best) {
            best = std::abs(psi[i]);
            arg = i;
        }
    if (best > 0.0) psi *= std::conj(psi[arg]) / best;
}

struct EigenPair {
    double e0 = 0.0, e1 = 0.0;
    Eigen::VectorXcd v0, v1;
};

EigenPair lowest_two(const Eigen::SparseMatrix<Complex>& h, const FockConfig& cfg) {
    EigenPair pair;
    const std::int64_t dim = h.rows();
    const bool dense = cfg.solver == FockConfig::Solver::Dense ||
                       (cfg.solver == FockConfig::Solver::Auto && dim <= 2048);
    if (dense) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h));
        pair.e0 = es.eigenvalues()(0);
        pair.e1 = es.eigenvalues()(1);
        pair.v0 = es.eigenvectors().col(0);
        pair.v1 = es.eigenvectors().col(1);
    } else {
        LanczosOut g = lanczos_lowest(h, nullptr, cfg.tol, 0x5eedULL);
        LanczosOut x = lanczos_lowest(h, &g.evec, cfg.tol, 0x5eedULL + 1);
        pair.e0 = g.eval;
        pair.e1 = x.eval;
        pair.v0 = std::move(g.evec);
        pair.v1 = std::move(x.evec);
    }
    fix_gauge(pair.v0);
    fix_gauge(pair.v1);
    return pair;
}

}  // namespace

std::int64_t FockConfig::dimension(const ModelParams& p) const {
    const int n = chain_length(p);
    const std::int64_t d = 2 * (static_cast<std::int64_t>(n_max) + 1);
    std::int64_t dim = 1;
    for (int j = 0; j < n; ++j) {
        if (dim > (std::int64_t(1) << 58) / d) return std::int64_t(1) << 60;
        dim *= d;
    }
    return dim;
}

Eigen::SparseMatrix<Complex> build_hamiltonian(const ModelParams& p, const FockConfig& cfg) {
    validate_ed(p, cfg);
    const std::int64_t dim = cfg.dimension(p);
    if (dim > cfg.dim_cap)
        throw DimensionCap("Fock dimension " + std::to_string(dim) + " exceeds cap " +
                           std::to_string(cfg.dim_cap));
    const int n = cfg.chain_length(p);
    const Basis basis(n, cfg.n_max);
    const double g = p.g();
    const Complex phase(std::cos(p.theta), std::sin(p.theta));

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(dim) * (1 + 2 * n + (n > 1 ? 4 * n : 0)));

    for (std::int64_t s = 0; s < basis.dim; ++s) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j)
            diag += 0.5 * p.delta * (basis.spin(s, j) == 1 ? 1.0 : -1.0) +
                    p.omega * basis.photons(s, j);
        trip.emplace_back(s, s, diag);

        for (int j = 0; j < n; ++j) {
            const int m = basis.photons(s, j), sp = basis.spin(s, j);
            if (m < cfg.n_max) {
                const std::int64_t t = basis.with_site(s, j, m + 1, 1 - sp);
                trip.emplace_back(t, s, g * std::sqrt(double(m + 1)));
            }
            if (m > 0) {
                const std::int64_t t = basis.with_site(s, j, m - 1, 1 - sp);
                trip.emplace_back(t, s, g * std::sqrt(double(m)));
            }
        }

        if (n > 1) {
            for (int j = 0; j < n; ++j) {
                // -J1 a_j^dag a_{j+1} + h.c.
                const int nn = (j + 1) % n;
                const int mj = basis.photons(s, j), mn = basis.photons(s, nn);
                if (mn > 0 && mj < cfg.n_max) {
                    std::int64_t t = basis.with_site(s, nn, mn - 1, basis.spin(s, nn));
                    t = basis.with_site(t, j, mj + 1, basis.spin(t, j));
                    const double amp = std::sqrt(double(mn) * double(mj + 1));
                    trip.emplace_back(t, s, -p.j1 * amp);
                    trip.emplace_back(s, t, -p.j1 * amp);
                }
                // -J2 (-1)^n e^{i theta} a_j^dag a_{j+2} + h.c.
                const int nnn = (j + 2) % n;
                const int m2 = basis.photons(s, nnn);
                if (m2 > 0 && mj < cfg.n_max) {
                    std::int64_t t = basis.with_site(s, nnn, m2 - 1, basis.spin(s, nnn));
                    t = basis.with_site(t, j, mj + 1, basis.spin(t, j));
                    const Complex amp = -p.j2 * alternating_sign(j) * phase *
                                        std::sqrt(double(m2) * double(mj + 1));
                    trip.emplace_back(t, s, amp);
                    trip.emplace_back(s, t, std::conj(amp));
                }
            }
        }
    }

    Eigen::SparseMatrix<Complex> h(dim, dim);
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

EdReport ground_state(const ModelParams& p, const FockConfig& cfg) {
    const Eigen::SparseMatrix<Complex> h = build_hamiltonian(p, cfg);
    const int n = cfg.chain_length(p);
    const Basis basis(n, cfg.n_max);

    EigenPair pair = lowest_two(h, cfg);
    EdReport report;
    report.n_max = cfg.n_max;
    report.dimension = basis.dim;
    report.ground = observables_of(basis, pair.v0, pair.e0);
    report.first_excited = observables_of(basis, pair.v1, pair.e1);
    report.quasi_degenerate =
        (pair.e1 - pair.e0) <= 1e-6 * std::max(1.0, std::abs(pair.e0));
    if (report.quasi_degenerate) {
        Eigen::VectorXcd sym = (pair.v0 + pair.v1) / std::sqrt(2.0);
        sym.normalize();
        const EdStateObservables s = observables_of(basis, sym, 0.5 * (pair.e0 + pair.e1));
        report.sym_i_odd = s.i_odd;
        report.sym_i_even = s.i_even;
        report.sym_i_total = s.i_total;
    }

    if (cfg.n_max >= 1) {
        FockConfig prev = cfg;
        prev.n_max = cfg.n_max - 1;
        const Eigen::SparseMatrix<Complex> h_prev = build_hamiltonian(p, prev);
        const EigenPair pp = lowest_two(h_prev, prev);
        report.convergence_delta = std::abs(pair.e0 - pp.e0);
    }
    return report;
}

std::vector<CutoffRow> cutoff_sweep(const ModelParams& p, const FockConfig& cfg,
                                    const std::vector<int>& n_max_list) {
    std::vector<CutoffRow> rows;
    for (size_t i = 0; i < n_max_list.size(); ++i) {
        FockConfig c = cfg;
        c.n_max = n_max_list[i];
        const Eigen::SparseMatrix<Complex> h = build_hamiltonian(p, c);
        const Basis basis(c.chain_length(p), c.n_max);
        const EigenPair pair = lowest_two(h, c);
        CutoffRow row;
        row.n_max = c.n_max;
        row.energy = pair.e0;
        const EdStateObservables obs = observables_of(basis, pair.v0, pair.e0);
        row.max_photon =
            *std::max_element(obs.photon_numbers.begin(), obs.photon_numbers.end());
        if (i > 0) {
            row.delta_prev = row.energy - rows.back().energy;
            row.converged_flag =
                std::abs(row.delta_prev) <= cfg.tol * std::max(1.0, std::abs(row.energy));
        }
        rows.push_back(row);
    }
    return rows;
}

void dump_ground_vector(const std::string& path, const Eigen::VectorXcd& vec, int n,
                        int n_max) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    const char magic[4] = {'R', 'Z', 'G', 'V'};
    const std::uint32_t version = 1, un = n, unm = n_max;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&un), 4);
    out.write(reinterpret_cast<const char*>(&unm), 4);
    out.write(reinterpret_cast<const char*>(vec.data()),
              static_cast<std::streamsize>(vec.size() * sizeof(Complex)));
}

}  // namespace rz
