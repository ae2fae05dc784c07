#include "rz/observables.hpp"

#include <algorithm>
#include <cmath>

namespace rz {

namespace {

bool is_odd_cavity(int j) { return j % 2 == 0; }  // cavity number j+1

// Indices of one species in chain order.
std::vector<int> species_indices(int n, bool odd) {
    std::vector<int> idx;
    for (int j = odd ? 0 : 1; j < n; j += 2) idx.push_back(j);
    return idx;
}

// All-real species amplitudes with cyclically alternating signs.
bool alternating_real(const Displacements& d, const std::vector<int>& idx,
                      double angle_tol, double n_tol) {
    const int m = static_cast<int>(idx.size());
    if (m % 2 != 0) return false;  // odd rings cannot alternate
    for (int r = 0; r < m; ++r) {
        const int j = idx[r];
        const double mag = std::abs(d.alpha(j));
        if (mag * mag < n_tol) return false;
        if (std::abs(d.b[j]) > std::tan(angle_tol) * std::abs(d.a[j])) return false;
        const int jn = idx[(r + 1) % m];
        if (!(d.a[j] * d.a[jn] < 0.0)) return false;
    }
    return true;
}

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::NP: return "NP";
        case Phase::FSR: return "FSR";
        case Phase::MSR: return "MSR";
        case Phase::OCSR: return "OCSR";
        case Phase::ECSR: return "ECSR";
        case Phase::OAFSR: return "OAFSR";
        case Phase::EAFSR: return "EAFSR";
        case Phase::Unclassified: return "UNCLASSIFIED";
    }
    return "UNCLASSIFIED";
}

Phase phase_from_string(const std::string& s) {
    for (Phase p : {Phase::NP, Phase::FSR, Phase::MSR, Phase::OCSR, Phase::ECSR,
                    Phase::OAFSR, Phase::EAFSR, Phase::Unclassified})
        if (s == to_string(p)) return p;
    throw DomainError("unknown phase label: " + s);
}

CurrentReport currents(const Displacements& d) {
    const int n = d.size();
    CurrentReport c;
    for (int j = 0; j < n; ++j) {
        const int nnn = (j + 2) % n;
        const double bond = -2.0 * (d.a[j] * d.b[nnn] - d.b[j] * d.a[nnn]);
        (is_odd_cavity(j) ? c.i_odd : c.i_even) += bond;
        const int nn = (j + 1) % n;
        c.i_total += -2.0 * (d.a[j] * d.b[nn] - d.b[j] * d.a[nn]);
    }
    c.i_chiral = c.i_odd - c.i_even;
    return c;
}

std::vector<double> photon_numbers(const Displacements& d) {
    std::vector<double> out(d.size());
    for (int j = 0; j < d.size(); ++j) out[j] = d.photon_number(j);
    return out;
}

PhaseLabel classify(const ModelParams& p, const Displacements& d, const CurrentReport& c) {
    if (d.size() != p.n_cavities)
        throw DomainError("displacements length must equal n_cavities");

    PhaseLabel label;
    label.n_tol = 1e-8;
    label.collinear_tol = 1e-6;
    const double max_current =
        std::max({std::abs(c.i_odd), std::abs(c.i_even), std::abs(c.i_total)});
    label.c_tol = 1e-6 * std::max(1.0, max_current);

    if (d.max_photon_number() < label.n_tol) {
        label.phase = Phase::NP;
        return label;
    }

    // FSR: all alpha_n parallel with a common sign plus no chiral current.
    int ref = 0;
    for (int j = 1; j < d.size(); ++j)
        if (d.photon_number(j) > d.photon_number(ref)) ref = j;
    bool collinear = true;
    for (int j = 0; j < d.size(); ++j) {
        const double dot = d.a[ref] * d.a[j] + d.b[ref] * d.b[j];
        const double cross = d.a[ref] * d.b[j] - d.b[ref] * d.a[j];
        if (!(dot > 0.0) || std::abs(std::atan2(cross, dot)) > label.collinear_tol) {
            collinear = false;
            break;
        }
    }
    if (collinear && std::abs(c.i_chiral) < label.c_tol) {
        label.phase = Phase::FSR;
        return label;
    }

    if (c.i_even * c.i_odd < 0.0 && std::abs(c.i_total) < label.c_tol) {
        label.phase = Phase::MSR;
        return label;
    }
    if (std::abs(c.i_odd) >= label.c_tol && std::abs(c.i_even) < label.c_tol) {
        label.phase = Phase::OCSR;
        return label;
    }
    if (std::abs(c.i_even) >= label.c_tol && std::abs(c.i_odd) < label.c_tol) {
        label.phase = Phase::ECSR;
        return label;
    }

    if (std::abs(c.i_odd) < label.c_tol && std::abs(c.i_even) < label.c_tol &&
        std::abs(c.i_total) < label.c_tol) {
        const bool odd_af = alternating_real(d, species_indices(d.size(), true),
                                             label.collinear_tol, label.n_tol);
        const bool even_af = alternating_real(d, species_indices(d.size(), false),
                                              label.collinear_tol, label.n_tol);
        if (odd_af != even_af) {
            label.phase = odd_af ? Phase::OAFSR : Phase::EAFSR;
            return label;
        }
    }

    label.phase = Phase::Unclassified;
    return label;
}

}  // namespace rz
