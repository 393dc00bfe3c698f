#ifndef RYDGATE_FORCES_HPP
#define RYDGATE_FORCES_HPP

#include <vector>

#include "rydgate/spectrum.hpp"

namespace rydgate {

// Separation where hbar Omega_eff = C6 R^-6. Requires C6 > 0, Omega_eff > 0.
double blockade_radius(double c6, double rabi_eff);

struct PairPotentialPoint {
    double r = 0;
    double v = 0;            // C6 / r^6
    double kappa = 0;        // entangling energy at this separation
    double p11 = 0, pb = 0, prr = 0;
    bool flagged = false;    // anti-blockade / branch-degeneracy flag
};

// kappa(R), the R-dependent part of the adiabatic pair potential of the
// dressed |1~,1~> state, on a sorted positive grid.
std::vector<PairPotentialPoint> adiabatic_pair_potential(const std::vector<double>& r_grid,
                                                         double rabi_eff, double detuning,
                                                         double c6, Branch branch);

struct DressedForce {
    double finite_difference = 0;       // -hbar d(kappa)/dR, Richardson-refined
    double eigenstate_expectation = 0;  // 6 C6 |c_rr|^2 / R^7
    double kappa = 0;
};

// Both force routes; throws std::runtime_error when they disagree beyond
// rel_tol (a branch-tracking failure, not a numerical detail).
DressedForce dressed_force(double r, double rabi_eff, double detuning, double c6,
                           Branch branch, double rel_tol = 1e-2);

}  // namespace rydgate

#endif
