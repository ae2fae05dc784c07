#include "rz/bogoliubov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rz {

namespace {

Eigen::MatrixXcd dynamical_matrix(const QuadraticForm& form) {
    Eigen::MatrixXcd ml = form.matrix;
    ml.rightCols(form.m) *= -1.0;  // M * Lambda scales the creation columns
    return ml;
}

}  // namespace

std::vector<Complex> dynamical_eigenvalues(const QuadraticForm& form) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dynamical_matrix(form),
                                                       /*computeEigenvectors=*/false);
    const auto& vals = solver.eigenvalues();
    return {vals.data(), vals.data() + vals.size()};
}

Spectrum diagonalize(const QuadraticForm& form, double tol_imag) {
    const int m = form.m;
    if (m <= 0 || form.matrix.rows() != 2 * m || form.matrix.cols() != 2 * m)
        throw DomainError("diagonalize: malformed quadratic form dimensions");
    if (!form.is_valid_bdg(1e-10, /*strict_ph=*/false))
        throw DomainError("diagonalize: matrix is not Hermitian with BdG blocks");
    if (tol_imag < 0.0) tol_imag = 1e-9 * form.matrix.norm();

    const std::vector<Complex> vals = dynamical_eigenvalues(form);

    Spectrum spec;
    spec.max_imag = 0.0;
    for (const Complex& v : vals) spec.max_imag = std::max(spec.max_imag, std::abs(v.imag()));
    spec.stable = spec.max_imag <= tol_imag;

    // Sort by real part and match the most-negative with the most-positive.
    std::vector<double> re(vals.size());
    std::transform(vals.begin(), vals.end(), re.begin(),
                   [](const Complex& v) { return v.real(); });
    std::sort(re.begin(), re.end());

    const double pair_tol = 1e-8;
    spec.epsilons.reserve(m);
    for (int i = 0; i < m; ++i) {
        const double lo = re[i], hi = re[2 * m - 1 - i];
        const double mismatch = std::abs(lo + hi);
        if (spec.stable && mismatch > pair_tol * std::max(1.0, std::abs(hi)))
            throw PairingFailure("eigenvalues of M*Lambda do not pair as +/-");
        spec.epsilons.push_back(0.5 * (hi - lo));
    }
    std::sort(spec.epsilons.begin(), spec.epsilons.end(), std::greater<>());
    return spec;
}

double zero_point_offset(const QuadraticForm& form, const Spectrum& spectrum) {
    if (!spectrum.stable)
        throw InstabilityError("zero-point offset requires a stable spectrum");
    double sum_eps = 0.0;
    for (double e : spectrum.epsilons) sum_eps += e;
    const double tr_a = form.normal_block().trace().real();
    return 0.5 * (sum_eps - tr_a);
}

}  // namespace rz
