#include "rydgate/forces.hpp"

#include <algorithm>
#include <cmath>

namespace rydgate {

namespace {

double kappa_at(double r, double rabi_eff, double detuning, double c6, Branch branch) {
    EffectiveParams p;
    p.rabi = rabi_eff;
    p.detuning = detuning;
    return entangling_energy(p, InteractionSpec::from_c6(c6, r), branch).kappa;
}

}  // namespace

double blockade_radius(double c6, double rabi_eff) {
    if (!(c6 > 0) || !(rabi_eff > 0)) {
        throw std::domain_error("blockade radius needs C6 > 0 and Omega_eff > 0");
    }
    return std::pow(c6 / rabi_eff, 1.0 / 6.0);
}

std::vector<PairPotentialPoint> adiabatic_pair_potential(const std::vector<double>& r_grid,
                                                         double rabi_eff, double detuning,
                                                         double c6, Branch branch) {
    if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
        throw std::invalid_argument("separation grid must be sorted");
    }
    EffectiveParams p;
    p.rabi = rabi_eff;
    p.detuning = detuning;
    std::vector<PairPotentialPoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        const InteractionSpec v = InteractionSpec::from_c6(c6, r);
        const EntanglingEnergyResult e = entangling_energy(p, v, branch);
        PairPotentialPoint pt;
        pt.r = r;
        pt.v = v.v;
        pt.kappa = e.kappa;
        pt.p11 = e.p11;
        pt.pb = e.pb;
        pt.prr = e.prr;
        pt.flagged = e.degenerate;
        out.push_back(pt);
    }
    return out;
}

DressedForce dressed_force(double r, double rabi_eff, double detuning, double c6,
                           Branch branch, double rel_tol) {
    if (!(r > 0)) throw std::invalid_argument("separation must be positive");

    EffectiveParams p;
    p.rabi = rabi_eff;
    p.detuning = detuning;
    const EntanglingEnergyResult here =
        entangling_energy(p, InteractionSpec::from_c6(c6, r), branch);
    if (here.degenerate) {
        throw std::runtime_error("dressed force undefined near a branch degeneracy");
    }

    auto central = [&](double h) {
        return (kappa_at(r + h, rabi_eff, detuning, c6, branch) -
                kappa_at(r - h, rabi_eff, detuning, c6, branch)) /
               (2.0 * h);
    };
    const double h = 1e-4 * r;
    const double d_h = central(h);
    const double d_h2 = central(0.5 * h);
    const double slope = (4.0 * d_h2 - d_h) / 3.0;  // Richardson refinement

    DressedForce f;
    f.kappa = here.kappa;
    f.finite_difference = -slope;
    f.eigenstate_expectation = 6.0 * c6 * here.prr / std::pow(r, 7);

    const double scale = std::max({std::abs(f.finite_difference),
                                   std::abs(f.eigenstate_expectation),
                                   1e-9 * rabi_eff / r});
    if (std::abs(f.finite_difference - f.eigenstate_expectation) > rel_tol * scale) {
        throw std::runtime_error("force routes disagree: finite difference " +
                                 std::to_string(f.finite_difference) +
                                 " vs eigenstate expectation " +
                                 std::to_string(f.eigenstate_expectation));
    }
    return f;
}

}  // namespace rydgate
