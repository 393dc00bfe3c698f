#ifndef RYDGATE_DYNAMICS_HPP
#define RYDGATE_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "rydgate/model.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate {

// Time-dependent (possibly non-Hermitian) generator H_eff(t), written into a
// caller-owned matrix so tight propagation loops stay allocation-free.
using MatrixGenerator = std::function<void(double t, Eigen::MatrixXcd& h)>;

struct StiffnessError : std::runtime_error {
    explicit StiffnessError(double t_fail)
        : std::runtime_error("step size underflow at t = " + std::to_string(t_fail)),
          t(t_fail) {}
    double t;
};

// Dense output of a propagation: the state at every requested sample time.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    std::vector<double> norms;
    std::vector<double> rydberg_1;   // filled for 9-dim two-atom states
    std::vector<double> rydberg_2;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

// Solves i dpsi/dt = H_eff(t) psi with an embedded Dormand-Prince 5(4) pair;
// local error per unit time is kept at or below tol, and steps land exactly
// on the requested sample times. Throws StiffnessError on step underflow.
Trajectory propagate(const MatrixGenerator& generator, const Eigen::VectorXcd& psi0,
                     double t_begin, double t_end, double tol,
                     const std::vector<double>& sample_times);

// Uniform-sampling convenience overload.
Trajectory propagate(const MatrixGenerator& generator, const Eigen::VectorXcd& psi0,
                     double t_begin, double t_end, double tol, int samples);

// Two-atom overload in the full product basis; fills per-atom Rydberg
// populations.
Trajectory propagate(const EffectiveDrive& drive, const InteractionSpec& v,
                     const TwoAtomState& psi0, double tol, int samples);

std::vector<double> uniform_samples(double a, double b, int n);

// 9x9 H_eff(t) for an effective drive, including the non-Hermitian decay
// part when the drive carries it.
MatrixGenerator two_atom_generator(const EffectiveDrive& drive, const InteractionSpec& v);

// Symmetry-sector generators; the two-atom problem factorizes into the
// symmetric {|1,1>,|b>,|r,r>} sector, two copies of the single-excitation
// {|1>,|r>} sector, the dark state and the inert |0,0>.
MatrixGenerator symmetric_sector_generator(const EffectiveDrive& drive,
                                           const InteractionSpec& v);
MatrixGenerator single_sector_generator(const EffectiveDrive& drive);
MatrixGenerator dark_sector_generator(const EffectiveDrive& drive);

// Composite-Simpson quadrature over sampled values (uniform panels),
// trapezoid fallback on irregular ones.
double integrate_samples(const std::vector<double>& t, const std::vector<double>& f);

// Integral of P_r^(1)(t) + P_r^(2)(t) over the samples.
double integrated_rydberg_population(const Trajectory& traj);

// Same, but re-propagates at doubled sampling and fails loudly if the
// quadrature is not converged to rel_tol.
double integrated_rydberg_population_checked(const EffectiveDrive& drive,
                                             const InteractionSpec& v,
                                             const TwoAtomState& psi0, double tol,
                                             int samples, double rel_tol = 1e-2);

// Overlap of the propagated state with the continuously-tracked
// instantaneous eigenbranch seeded from the initial state.
struct AdiabaticityReport {
    double score = 0;                  // min overlap along the trajectory
    std::vector<double> overlaps;
};

AdiabaticityReport adiabaticity_monitor(const Trajectory& traj,
                                        const MatrixGenerator& hamiltonian);

}  // namespace rydgate

#endif
