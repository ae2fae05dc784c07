#include "rz/model.hpp"

#include <cmath>
#include <numbers>

namespace rz {

namespace {

constexpr double kPi = std::numbers::pi;

// (-1)^n for the paper's 1-based cavity number n; j is the 0-based index.
double alternating_sign(int j) { return (j % 2 == 0) ? -1.0 : 1.0; }

}  // namespace

double ModelParams::g() const { return g1 * std::sqrt(delta * omega); }

void ModelParams::validate() const {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (!(j1 >= 0.0)) throw DomainError("j1 must be non-negative");
    if (!(j2 >= 0.0)) throw DomainError("j2 must be non-negative");
    if (!(theta > -kPi - 1e-12 && theta <= kPi + 1e-12))
        throw DomainError("theta must lie in (-pi, pi]");
    if (n_cavities % 2 != 0)
        throw DomainError("n_cavities must be even (two-species bipartition)");
    if (n_cavities == 4)
        throw DomainError("n_cavities = 4 double-counts every NNN bond and is rejected");
    if (n_cavities < 6) throw DomainError("n_cavities must be >= 6");
    if (!std::isfinite(g1)) throw DomainError("g1 must be finite");
}

MomentumGrid MomentumGrid::reduced_bz(int n_cavities) {
    if (n_cavities < 6 || n_cavities % 2 != 0)
        throw DomainError("reduced_bz requires even n_cavities >= 6");
    MomentumGrid grid;
    grid.dk = 2.0 * kPi / n_cavities;
    // k = 2 pi m / N in (-pi/2, pi/2]: integers m with -N/4 < m <= N/4.
    for (int m = -(n_cavities / 2); m <= n_cavities / 2; ++m) {
        double k = grid.dk * m;
        if (k > -kPi / 2 + 1e-14 && k <= kPi / 2 + 1e-14) grid.k.push_back(k);
    }
    return grid;
}

bool QuadraticForm::is_valid_bdg(double tol, bool strict_ph) const {
    if (matrix.rows() != 2 * m || matrix.cols() != 2 * m) return false;
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    auto near = [&](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        return (x - y).cwiseAbs().maxCoeff() <= tol * scale;
    };
    if (!near(matrix, matrix.adjoint())) return false;
    const Eigen::MatrixXcd a = matrix.topLeftCorner(m, m);
    const Eigen::MatrixXcd b = matrix.topRightCorner(m, m);
    if (!near(a, a.adjoint())) return false;
    if (!near(b, b.transpose())) return false;
    if (strict_ph) {
        if (!near(matrix.bottomLeftCorner(m, m), b.conjugate())) return false;
        if (!near(matrix.bottomRightCorner(m, m), a.conjugate())) return false;
    }
    return true;
}

double dispersion(const ModelParams& p, double k, int branch) {
    if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
    return p.omega * (1.0 - 2.0 * p.g1 * p.g1) +
           branch * 2.0 * p.j2 * std::cos(p.theta - 2.0 * k);
}

QuadraticForm momentum_form(const ModelParams& p, double k) {
    p.validate();
    QuadraticForm f;
    f.m = 2;
    f.matrix = Eigen::MatrixXcd::Zero(4, 4);
    const double anomalous = -2.0 * p.omega * p.g1 * p.g1;
    const double hop = -2.0 * p.j1 * std::cos(k);
    f.matrix(0, 0) = dispersion(p, k, +1);
    f.matrix(1, 1) = dispersion(p, k, -1);
    f.matrix(2, 2) = dispersion(p, -k, +1);
    f.matrix(3, 3) = dispersion(p, -k, -1);
    f.matrix(0, 1) = f.matrix(1, 0) = hop;
    f.matrix(2, 3) = f.matrix(3, 2) = hop;
    f.matrix(0, 2) = f.matrix(2, 0) = anomalous;
    f.matrix(1, 3) = f.matrix(3, 1) = anomalous;
    f.offset = -p.omega;
    return f;
}

QuadraticForm realspace_np_form(const ModelParams& p) {
    p.validate();
    const int n = p.n_cavities;
    QuadraticForm f;
    f.m = n;
    f.matrix = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    auto a = f.matrix.topLeftCorner(n, n);

    const double diag = p.omega * (1.0 - 2.0 * p.g1 * p.g1);
    const double anomalous = -2.0 * p.omega * p.g1 * p.g1;
    const Complex phase(std::cos(p.theta), std::sin(p.theta));

    for (int j = 0; j < n; ++j) {
        a(j, j) = diag;
        const int nn = (j + 1) % n;
        a(j, nn) += -p.j1;
        a(nn, j) += -p.j1;
        const int nnn = (j + 2) % n;
        const Complex c = -p.j2 * alternating_sign(j) * phase;
        a(j, nnn) += c;
        a(nnn, j) += std::conj(c);
        f.matrix(j, n + j) = anomalous;
        f.matrix(n + j, j) = anomalous;
    }
    f.matrix.bottomRightCorner(n, n) = a.conjugate();
    f.offset = -0.5 * n * p.omega;
    return f;
}

Bands analytic_bands(const ModelParams& p, double k) {
    p.validate();
    if (std::abs(p.theta - kPi / 2) > 1e-12)
        throw DomainError("analytic bands are defined only at theta = pi/2");
    const double w = p.omega, g1sq = p.g1 * p.g1;
    const double c2 = std::cos(k) * std::cos(k), s2 = std::sin(k) * std::sin(k);
    const double inner = p.j1 * p.j1 * (1.0 - 2.0 * g1sq) * (1.0 - 2.0 * g1sq) * c2 +
                         p.j2 * p.j2 * (1.0 - 4.0 * g1sq) * s2;
    if (inner < 0.0)
        throw EvanescentMode("negative inner radicand: coupling above critical");
    const double base = w * w * (1.0 - 4.0 * g1sq) + 4.0 * p.j1 * p.j1 * c2 +
                        4.0 * p.j2 * p.j2 * s2;
    const double split = 4.0 * w * std::sqrt(inner);
    const double plus = base + split;
    double minus = base - split;
    if (plus < 0.0 || minus < -1e-14 * std::max(1.0, std::abs(base)))
        throw EvanescentMode("negative band radicand: coupling above critical");
    if (minus < 0.0) minus = 0.0;
    return {std::sqrt(plus) / 2.0, std::sqrt(minus) / 2.0};
}

double critical_coupling(const ModelParams& p, double k) {
    const double w = p.omega;
    const double c = std::cos(k), s = std::sin(k);
    const double num = w * w - 4.0 * (p.j1 * p.j1 * c * c + p.j2 * p.j2 * s * s);
    const double den = 4.0 * w * (w + 2.0 * p.j1 * c);
    if (!(num > 0.0) || !(den > 0.0))
        throw DomainError("critical coupling undefined: non-positive radicand");
    return std::sqrt(num / den);
}

double triple_point_ratio(const ModelParams& p) {
    if (!(p.omega > 0.0) || !(p.j2 > 0.0))
        throw DomainError("triple point requires omega > 0 and j2 > 0");
    return (std::sqrt(p.omega * p.omega + 12.0 * p.j2 * p.j2) - p.omega) / (2.0 * p.j2);
}

}  // namespace rz
