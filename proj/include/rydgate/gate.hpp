#ifndef RYDGATE_GATE_HPP
#define RYDGATE_GATE_HPP

#include <optional>

#include "rydgate/dynamics.hpp"
#include "rydgate/pulses.hpp"
#include "rydgate/spectrum.hpp"

namespace rydgate {

using Matrix4cd = Eigen::Matrix4cd;

// Diagonal two-qubit phase map accumulated by one adiabatic ramp:
// exp(-i phi2 (sz/2 x sz/2)) exp(-i phi1 (1 x sz/2 + sz/2 x 1)),
// with the convention sz|0> = +|0>.
Matrix4cd u_kappa(double phi1, double phi2);

// Molmer-Sorensen target exp(-i pi/4 sy x sy).
Matrix4cd ms_target();

// Hilbert-Schmidt fidelity |tr(U_MS^dag M)|^2 / 16; M may be sub-unitary.
double ms_fidelity(const Matrix4cd& m);

// pi/2 and pi pulses act on the qubit subspace of each atom; |r> is a
// spectator.
Matrix4cd rotation_x_pair(double angle);
Matrix9cd rotation_x_pair9(double angle);

// Wootters concurrence of a pure two-qubit state.
double concurrence(const Eigen::Vector4cd& psi);

struct PhaseExtraction {
    bool ok = false;
    double phi1 = 0;     // single-atom phase, reduced to (-pi, pi]
    double phi2 = 0;     // entangling phase, reduced to (-pi, pi]
    double leakage = 0;  // 1 - min column norm^2
};

// Phases of a diagonal-dominant computational map; refused (ok = false)
// when the column-norm deficit exceeds leak_threshold.
PhaseExtraction extract_phases(const Matrix4cd& m, double leak_threshold = 1e-3);

struct RampPropagationOptions {
    double tol = 1e-9;
    int samples = 513;   // trajectory resolution for t_r and |r,r> tracking
};

// One adiabatic ramp, propagated per symmetry sector and reassembled.
struct RampPropagation {
    Matrix9cd u = Matrix9cd::Identity();
    double tr_from_11 = 0;     // integrated Rydberg population, |1,1> input
    double tr_from_01 = 0;     // |0,1> (or |1,0>) input
    double max_prr_from_11 = 0;
    double boundary_dressing = 0;  // Rabi fraction left at the ramp ends
    long steps_accepted = 0;
};

RampPropagation ramp_propagation(const EffectiveDrive& drive, const InteractionSpec& v,
                                 const RampPropagationOptions& opt = {});

// Computational-subspace map of one ramp plus its decoherence bookkeeping.
struct RampUnitary {
    Matrix4cd map = Matrix4cd::Identity();
    double tr_sum = 0;              // summed over the four basis inputs
    std::array<double, 4> tr_by_input{};  // order |00>, |01>, |10>, |11>
    double max_prr_from_11 = 0;
    double leakage = 0;
    bool boundary_ok = true;        // Omega at ramp ends <= 1e-4 Omega_max
};

RampUnitary ramp_unitary(const RampSchedule& ramp, const ExcitationScheme& scheme,
                         const InteractionSpec& v, double tol, bool decay_on = false,
                         int samples = 513);

// pi/2 - ramp A - pi - ramp B - pi/2 spin-echo sequence (Hermitian or decaying).
struct GateSequence {
    RampSchedule ramp_a;
    RampSchedule ramp_b;   // usually identical to ramp_a
    ExcitationScheme scheme;
    bool decay_on = false;

    static GateSequence symmetric(const RampSchedule& ramp, const ExcitationScheme& scheme,
                                  bool decay_on = false);
};

struct GateOptions {
    double tol = 1e-9;
    int samples = 513;
    double leak_threshold = 1e-3;
    bool compute_tr = true;  // propagate |1,1> through the sequence for t_r
};

struct GateReport {
    Matrix4cd map = Matrix4cd::Identity();
    double fidelity = 0;
    double phi1 = 0;
    double phi2 = 0;             // per ramp; the sequence uses two ramps
    bool phases_valid = false;
    double t_r = 0;              // full sequence, initial state |1,1>
    double leakage = 0;
    double max_prr_from_11 = 0;  // along one ramp applied to bare |1,1>
    bool boundary_ok = true;
};

GateReport spin_echo_gate(const GateSequence& seq, const InteractionSpec& v,
                          const GateOptions& opt = {});

// Echo composite built from ideal ramp maps, for calibration and tests.
Matrix4cd spin_echo_composite(const Matrix4cd& ramp_map_a, const Matrix4cd& ramp_map_b);

}  // namespace rydgate

#endif
