#pragma once

#include <vector>

#include "rz/model.hpp"

namespace rz {

/// Excitation spectrum of a bosonic quadratic form, from the eigenvalues of
/// M*Lambda with Lambda = diag(+1 x m, -1 x m). When stable, those eigenvalues
/// are real and come in +/- pairs; `epsilons` holds the m non-negative pair
/// representatives sorted non-increasing.
struct Spectrum {
    std::vector<double> epsilons;
    bool stable = false;
    double max_imag = 0.0;

    double lowest() const { return epsilons.back(); }
};

/// Raw eigenvalues of M*Lambda, unsorted. Useful for multiset comparisons
/// between differently-factored forms of the same Hamiltonian.
std::vector<Complex> dynamical_eigenvalues(const QuadraticForm& form);

/// Diagonalize a bosonic quadratic form.
///
/// tol_imag < 0 selects the default 1e-9 times the norm of M. An unstable
/// spectrum (some |Im| above tol_imag) is reported via stable = false, not an
/// error; epsilons are then best-effort real parts. Throws PairingFailure when
/// a stable spectrum cannot be matched into +/- pairs (malformed form).
Spectrum diagonalize(const QuadraticForm& form, double tol_imag = -1.0);

/// Constant produced by normal-ordering after diagonalization:
/// (sum of epsilons - trace of the normal block) / 2. Requires a stable
/// spectrum (throws InstabilityError otherwise).
double zero_point_offset(const QuadraticForm& form, const Spectrum& spectrum);

}  // namespace rz
