#ifndef RYDGATE_PULSES_HPP
#define RYDGATE_PULSES_HPP

#include <functional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rydgate/model.hpp"

namespace rydgate {

// One-photon double ramp: Gaussian intensity rise completing at t2, plateau
// on [t2, t3], mirrored fall from t3; |detuning| interpolates linearly
// detuning_max -> detuning_min on [t1, t2], holds, and returns on [t3, t4].
// The detuning sign is constant along the ramp.
struct OnePhotonRamp {
    double rabi_min = 0;
    double rabi_max = 0;
    double detuning_min = 0;   // magnitude at peak dressing
    double detuning_max = 0;   // magnitude at the ends
    double detuning_sign = -1;
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    double t_w = 0;            // Gaussian edge width

    void validate() const;
    // Rabi amplitude relative to rabi_max at the support boundary.
    double boundary_dressing() const;

    friend bool operator==(const OnePhotonRamp&, const OnePhotonRamp&) = default;
};

// Two-photon amplitude-only ramp: plateau at rabi_1a_max on
// [-t_stop, t_stop] with Gaussian shoulders of width t_w, truncated to
// [-duration/2, duration/2].
struct TwoPhotonRamp {
    double rabi_1a_max = 0;
    double t_stop = 0;
    double t_w = 0;
    double duration = 0;

    void validate() const;
    double boundary_dressing() const;

    friend bool operator==(const TwoPhotonRamp&, const TwoPhotonRamp&) = default;
};

using RampSchedule = std::variant<OnePhotonRamp, TwoPhotonRamp>;

struct DrivePoint {
    double rabi = 0;
    double detuning = 0;
};

// Instantaneous (Omega_1r, Delta_1r); clamps to boundary values outside
// [t1, t4].
DrivePoint evaluate_one_photon(const OnePhotonRamp& r, double t);

// Instantaneous Omega_1a; pure formula, no clamping.
double evaluate_two_photon(const TwoPhotonRamp& r, double t);

std::pair<double, double> support(const RampSchedule& r);

// Effective (Omega_eff(t), Delta_eff(t)) for a two-photon ramp with all
// other scheme parameters fixed: pointwise adiabatic elimination, so
// Delta_eff varies solely through the |1> light shift.
EffectiveParams effective_at(const TwoPhotonRamp& r, const TwoPhotonScheme& s, double t);

struct EffectiveSweepSample {
    double t = 0;
    EffectiveParams params;
};

std::vector<EffectiveSweepSample> effective_sweep(const TwoPhotonRamp& r,
                                                  const TwoPhotonScheme& s, int samples);

// Time-dependent effective drive seen by the two-atom system: the common
// currency between schedules, propagation and gate assembly.
struct EffectiveDrive {
    std::function<EffectiveParams(double)> at;
    double t_begin = 0;
    double t_end = 0;
    bool decay_on = false;
};

EffectiveDrive make_drive(const RampSchedule& ramp, const ExcitationScheme& scheme,
                          bool decay_on);

// JSON <-> schedule; the serialized field order is the optimizer's
// parameter-vector ordering contract (see docs/formats.md).
void to_json(nlohmann::json& j, const OnePhotonRamp& r);
void from_json(const nlohmann::json& j, OnePhotonRamp& r);
void to_json(nlohmann::json& j, const TwoPhotonRamp& r);
void from_json(const nlohmann::json& j, TwoPhotonRamp& r);

nlohmann::json ramp_to_json(const RampSchedule& r);
RampSchedule ramp_from_json(const nlohmann::json& j);

}  // namespace rydgate

#endif
