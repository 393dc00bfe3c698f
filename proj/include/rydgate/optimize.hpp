#ifndef RYDGATE_OPTIMIZE_HPP
#define RYDGATE_OPTIMIZE_HPP

#include <string>

#include "rydgate/gate.hpp"

namespace rydgate {

// ---------------------------------------------------------------------------
// Deterministic bound-projected Nelder-Mead simplex (maximization).
// ---------------------------------------------------------------------------

struct ObjectiveSample {
    Eigen::VectorXd x;
    double value = 0;
};

struct SimplexOptions {
    int max_evaluations = 200;
    double f_tol = 1e-12;         // stop when the simplex value spread drops below
    double initial_step = 0.15;   // first simplex size, fraction of the box
};

struct SimplexResult {
    Eigen::VectorXd best_x;
    double best_value = -std::numeric_limits<double>::infinity();
    int evaluations = 0;
    std::vector<ObjectiveSample> log;
};

// Candidate points are clipped into [lo, hi] before evaluation; every seed
// becomes a simplex vertex of its own restart, so the result is never worse
// than the best seed.
SimplexResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                   const std::vector<Eigen::VectorXd>& seeds,
                                   const SimplexOptions& opt);

// ---------------------------------------------------------------------------
// Gate-fidelity optimization over ramp parameters.
// ---------------------------------------------------------------------------

enum class RampFamily { one_photon, two_photon };

// Free parameters:
//   one_photon:  x = [t_w, plateau, detuning_min, detuning_max, duration]
//   two_photon:  x = [t_stop, t_w, delta_1a]   (Delta_ar = -Delta_1a)
// Peak Rabi frequencies are held fixed; they set the resource scale.
struct GateProblem {
    RampFamily family = RampFamily::one_photon;
    double rabi_max = 1.0;        // one-photon Omega_max
    double rabi_1a_max = 1.0;     // two-photon Omega_1a^max
    double upper_ratio = 1.1;     // Omega_ar / Omega_1a^max
    double decay_a = 0;
    double decay_r = 0;
    bool decay_on = false;
    InteractionSpec interaction{};

    double tol = 1e-8;            // propagation tolerance for the objective
    int samples = 257;

    double boundary_cap = 1e-4;       // max residual dressing at the ramp ends
    double anti_blockade_margin = 0;  // min |V - 2 hbar Delta_eff(t)|; 0 = off
    double max_prr_cap = 0;           // max |r,r> population; 0 = off

    Eigen::VectorXd lo, hi;
    std::vector<Eigen::VectorXd> seeds;
    int budget = 200;
};

GateSequence build_sequence(const GateProblem& p, const Eigen::VectorXd& x);

// Raw fidelity at the problem tolerance, or a negative penalty value for
// infeasible parameters (constraint violations never beat a feasible point).
double gate_objective(const GateProblem& p, const Eigen::VectorXd& x);

struct GateOptimum {
    Eigen::VectorXd x;
    GateSequence sequence;
    GateReport report;        // re-evaluated with t_r bookkeeping
    double objective = 0;     // value seen by the optimizer at x
    int evaluations = 0;
    std::vector<ObjectiveSample> log;
    bool constraints_ok = false;
};

// Requires budget >= 50 evaluations. Deterministic for fixed seeds.
GateOptimum optimize_ramp(const GateProblem& p);

// Verify the accepted optimum against the problem constraints.
bool verify_constraints(const GateProblem& p, const GateSequence& seq,
                        const GateReport& rep);

// Minimum of |V - 2 hbar Delta_eff(t)| over the ramp support.
double anti_blockade_clearance(const GateSequence& seq, const InteractionSpec& v,
                               int samples = 129);

// ---------------------------------------------------------------------------
// Parameter scans.
// ---------------------------------------------------------------------------

// Fig.-3-style landscape: two-photon gate fidelity over the intermediate
// decay rate and available power, inner-optimized over Delta_1a and the
// ramp shape at fixed ratios.
struct FidelityScanSpec {
    std::vector<double> gamma_ratios;  // Gamma_a / Gamma_r
    std::vector<double> powers;        // Omega_1a^max / (2 pi Gamma_r)
    double upper_ratio = 1.1;
    double blockade_factor = 10.0;     // |V| / (hbar Omega_eff^max at reference detuning)
    double reference_delta = 5.05;     // Delta_1a / Omega_1a^max setting the V scale
    int budget = 120;
    double tol = 1e-8;
};

struct FidelityScanPoint {
    int index = 0;
    double gamma_ratio = 0;
    double power = 0;
    bool ok = false;
    std::string error;
    double fidelity = 0;
    double log10_infidelity = 0;
    double delta_1a = 0;     // optimized intermediate detuning
    double t_stop = 0;
    double t_w = 0;
    double t_r = 0;
    double closed_fidelity = 0;  // same ramp without decay
};

FidelityScanPoint fidelity_scan_point(const FidelityScanSpec& spec, double gamma_ratio,
                                      double power);

// Fig.-7-style scan: integrated Rydberg population of optimized
// perfect-entangler passages against hbar Omega_eff^max / |V|.
struct TrScanSpec {
    RampFamily family = RampFamily::one_photon;
    std::vector<double> ratios;   // hbar Omega_eff^max / |V|
    double prr_cap = 0.05;
    int budget = 160;
    double tol = 1e-8;
};

struct TrScanPoint {
    int index = 0;
    double ratio = 0;
    bool ok = false;
    std::string error;
    double fidelity = 0;
    double t_r = 0;                    // reference units (Omega_eff^max = 1)
    double t_r_over_rabi_period = 0;   // t_r * Omega_eff^max / 2 pi
    double t_r_times_v = 0;            // t_r |V| / hbar
    double max_prr = 0;
};

TrScanPoint tr_scan_point(const TrScanSpec& spec, double ratio);

// Analytic bound F < 1 - 4 pi hbar / (|V| tau_r).
double fidelity_bound(const InteractionSpec& v, double tau_r);

}  // namespace rydgate

#endif
