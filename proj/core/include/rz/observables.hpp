#pragma once

#include <string>
#include <vector>

#include "rz/meanfield.hpp"
#include "rz/model.hpp"

namespace rz {

/// Photon currents of a mean-field configuration. The species currents run
/// over NNN bonds within the odd (lower) and even (upper) cavities; the total
/// current runs over the N nearest-neighbour bonds of the chain.
struct CurrentReport {
    double i_odd = 0.0;
    double i_even = 0.0;
    double i_chiral = 0.0;  ///< i_odd - i_even, exact by construction
    double i_total = 0.0;
};

enum class Phase { NP, FSR, MSR, OCSR, ECSR, OAFSR, EAFSR, Unclassified };

const char* to_string(Phase phase);
Phase phase_from_string(const std::string& s);

/// Classification outcome together with the thresholds that produced it.
struct PhaseLabel {
    Phase phase = Phase::Unclassified;
    double n_tol = 0.0;
    double c_tol = 0.0;
    double collinear_tol = 0.0;
};

/// I_nu = sum_{n in nu} -2 (A_n B_{n+2} - B_n A_{n+2}) per species and
/// I_T = sum_n -2 (A_n B_{n+1} - B_n A_{n+1}) over the N NN bonds.
CurrentReport currents(const Displacements& d);

/// |alpha_n|^2 per cavity.
std::vector<double> photon_numbers(const Displacements& d);

/// Decision tree over photon numbers, collinearity, and the current pattern:
/// NP, FSR, MSR, OCSR, ECSR, OAFSR, EAFSR, else Unclassified (never forced).
PhaseLabel classify(const ModelParams& p, const Displacements& d, const CurrentReport& c);

}  // namespace rz
