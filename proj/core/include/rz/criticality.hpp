#pragma once

#include <vector>

#include "rz/bogoliubov.hpp"
#include "rz/meanfield.hpp"
#include "rz/model.hpp"

namespace rz {

/// Quadratic expansion around a mean-field minimizer: per-cavity renormalized
/// qubit frequency Delta'_n = sqrt(Delta^2 + 16 g^2 A_n^2), effective coupling
/// lambda_n = g Delta / Delta'_n, squeezing coefficient -lambda_n^2 / Delta'_n
/// on (a^dag + a)^2 plus the unchanged hopping terms. At zero displacements the
/// matrix coincides element-wise with the normal-phase form.
struct SrForm {
    std::vector<double> delta_prime;
    std::vector<double> lambda;
    QuadraticForm form;
};

SrForm sr_form(const ModelParams& p, const Displacements& d);

/// minimize -> sr_form -> diagonalize. In the normal regime (zero minimizer)
/// this reproduces the momentum-space bands.
Spectrum spectrum_at(const ModelParams& p, const MinimizeOptions& opts = {});

/// Smallest g1 in (g1_lo, g1_hi) where the normal-phase form turns dynamically
/// unstable, located by bisection to `tol`. Throws DomainError when the
/// bracket does not straddle the transition.
double locate_gap_closure(const ModelParams& p, double g1_lo = 1e-3,
                          double g1_hi = 0.999, double tol = 1e-10);

enum class FitSide { Below, Above };

struct ExponentFit {
    double g1c_est = 0.0;
    double gamma = 0.0;
    FitSide side = FitSide::Below;
    double window_min = 0.0;
    double window_max = 0.0;
    double residual = 0.0;  ///< max |log eps - fit| over the window
    int mode_index = 0;     ///< 0 is the lowest mode
    int n_points = 0;
};

struct FitOptions {
    double window_min = 1e-4;
    double window_max = 1e-2;
    int n_points = 12;
    MinimizeOptions minimize;
};

/// Least-squares slope of log eps vs log |g1 - g1c| for the mode_index-th
/// lowest excitation, after locating g1c by gap-closure bisection. Points with
/// eps below the 1e-12*Delta numerical floor are dropped; fewer than 8 usable
/// points raises FitError.
ExponentFit fit_exponent(const ModelParams& p, FitSide side, int mode_index = 0,
                         const FitOptions& opts = {});

}  // namespace rz
