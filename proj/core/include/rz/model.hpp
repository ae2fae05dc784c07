#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "rz/errors.hpp"

namespace rz {

using Complex = std::complex<double>;

/// Physical parameters of the Rabi zigzag chain.
///
/// Cavities are numbered 1..N with periodic boundaries; cavity 1 is odd.
/// Even-numbered cavities form the upper chain, odd-numbered the lower one.
/// `g1` is the dimensionless coupling g/sqrt(delta*omega); the bare coupling
/// is recovered by g().
struct ModelParams {
    double omega = 1.0;   ///< cavity frequency, sets the energy scale
    double delta = 50.0;  ///< qubit splitting
    double g1 = 0.0;      ///< scaled light-matter coupling
    double j1 = 0.0;      ///< interspecies nearest-neighbour hopping
    double j2 = 0.05;     ///< intraspecies next-nearest-neighbour hopping
    double theta = 0.0;   ///< staggered flux, radians in (-pi, pi]
    int n_cavities = 6;   ///< even, >= 6

    double g() const;

    /// Throws DomainError on any invariant violation (omega/delta positive,
    /// hoppings non-negative, theta in range, N even and >= 6).
    void validate() const;
};

/// Momenta 2*pi*m/N restricted to the reduced Brillouin zone (-pi/2, pi/2],
/// the zone edge +pi/2 counted once. Exactly N/2 points, each carrying two
/// bands, so the mode count over the grid is N.
struct MomentumGrid {
    std::vector<double> k;
    double dk = 0.0;

    static MomentumGrid reduced_bz(int n_cavities);
};

/// Coefficient matrix of a bilinear bosonic Hamiltonian,
///   H = 1/2 psi^dag M psi + offset,  psi = [a_1..a_m, a_1^dag..a_m^dag].
///
/// M is Hermitian with the particle-hole block layout [[A, B], [conj B, conj A]]
/// (A Hermitian, B symmetric). Momentum-space blocks pair (k, -k) and are
/// exempt from the element-wise conj-A check away from theta = pi/2; see
/// is_valid_bdg().
struct QuadraticForm {
    int m = 0;
    Eigen::MatrixXcd matrix;  // 2m x 2m
    double offset = 0.0;

    Eigen::MatrixXcd normal_block() const { return matrix.topLeftCorner(m, m); }
    Eigen::MatrixXcd anomalous_block() const { return matrix.topRightCorner(m, m); }

    /// Hermiticity of M, Hermiticity of A and symmetry of B, all element-wise
    /// to `tol` relative. `strict_ph` additionally requires the lower-right
    /// block to equal conj(A).
    bool is_valid_bdg(double tol = 1e-12, bool strict_ph = true) const;
};

/// Normal-phase dispersion omega_{k,+-} = omega(1 - 2 g1^2) +- 2 J2 cos(theta - 2k).
/// branch is +1 or -1.
double dispersion(const ModelParams& p, double k, int branch);

/// 4x4 momentum-space block over psi = [a_k, b_k, a_{-k}^dag, b_{-k}^dag]:
/// diagonal (w_{k+}, w_{k-}, w_{-k,+}, w_{-k,-}), normal coupling -2 J1 cos k,
/// anomalous -2 omega g1^2. Offsets over the grid sum to the real-space one.
QuadraticForm momentum_form(const ModelParams& p, double k);

/// N-mode real-space normal-phase form: per cavity omega a^dag a minus
/// omega g1^2 (a^dag + a)^2, NN hopping -J1, NNN hopping -J2 (-1)^n e^{i theta}
/// with periodic boundaries.
QuadraticForm realspace_np_form(const ModelParams& p);

struct Bands {
    double eps_plus = 0.0;
    double eps_minus = 0.0;
};

/// Closed-form bands at theta = pi/2 (the printed formula exists only there).
/// Note the returned values are half the corresponding M(k)*Lambda eigenvalues;
/// cross-checks against bogoliubov output carry that factor.
/// Throws DomainError if theta != pi/2, EvanescentMode on a negative radicand.
Bands analytic_bands(const ModelParams& p, double k);

/// g_1c(k) = sqrt[(w^2 - 4(J1^2 cos^2 k + J2^2 sin^2 k)) / (4 w (w + 2 J1 cos k))].
/// Throws DomainError when the radicand is non-positive.
double critical_coupling(const ModelParams& p, double k);

/// Hopping ratio where the k=0 and k=pi/3 critical lines meet:
/// [sqrt(w^2 + 12 J2^2) - w] / (2 J2).
double triple_point_ratio(const ModelParams& p);

}  // namespace rz
