#include "rydgate/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace rydgate {

namespace {

double gaussian_edge(double t, double center, double width) {
    const double u = (t - center) / width;
    return std::exp(-0.5 * u * u);
}

}  // namespace

void OnePhotonRamp::validate() const {
    if (!(t1 < t2 && t2 <= t3 && t3 < t4)) {
        throw std::invalid_argument("ramp times must satisfy t1 < t2 <= t3 < t4");
    }
    if (!(t_w > 0)) {
        throw std::invalid_argument("t_w must be positive");
    }
    if (!(rabi_max >= rabi_min && rabi_min >= 0)) {
        throw std::invalid_argument("need rabi_max >= rabi_min >= 0");
    }
    if (!(detuning_max >= detuning_min && detuning_min >= 0)) {
        throw std::invalid_argument("need detuning_max >= detuning_min >= 0");
    }
    if (detuning_sign != 1 && detuning_sign != -1) {
        throw std::invalid_argument("detuning_sign must be +-1");
    }
}

double OnePhotonRamp::boundary_dressing() const {
    if (rabi_max <= 0) return 0;
    const DrivePoint p = evaluate_one_photon(*this, t1);
    return p.rabi / rabi_max;
}

void TwoPhotonRamp::validate() const {
    if (!(t_w > 0) || !(t_stop >= 0)) {
        throw std::invalid_argument("need t_w > 0 and t_stop >= 0");
    }
    if (!(rabi_1a_max >= 0)) {
        throw std::invalid_argument("rabi_1a_max must be nonnegative");
    }
    if (!(duration > 2 * t_stop)) {
        throw std::invalid_argument("duration must exceed the plateau");
    }
}

double TwoPhotonRamp::boundary_dressing() const {
    if (rabi_1a_max <= 0) return 0;
    return evaluate_two_photon(*this, 0.5 * duration) / rabi_1a_max;
}

DrivePoint evaluate_one_photon(const OnePhotonRamp& r, double t) {
    const double tc = std::clamp(t, r.t1, r.t4);
    DrivePoint p;
    if (tc < r.t2) {
        p.rabi = r.rabi_min + (r.rabi_max - r.rabi_min) * gaussian_edge(tc, r.t2, r.t_w);
        p.detuning = r.detuning_max +
                     (r.detuning_min - r.detuning_max) * (tc - r.t1) / (r.t2 - r.t1);
    } else if (tc <= r.t3) {
        p.rabi = r.rabi_max;
        p.detuning = r.detuning_min;
    } else {
        p.rabi = r.rabi_min + (r.rabi_max - r.rabi_min) * gaussian_edge(tc, r.t3, r.t_w);
        p.detuning = r.detuning_min +
                     (r.detuning_max - r.detuning_min) * (tc - r.t3) / (r.t4 - r.t3);
    }
    p.detuning *= r.detuning_sign;
    return p;
}

double evaluate_two_photon(const TwoPhotonRamp& r, double t) {
    const double ts = std::abs(r.t_stop);
    if (std::abs(t) <= ts) return r.rabi_1a_max;
    // Shoulders attach continuously at +-t_stop on both sides.
    const double center = t > 0 ? ts : -ts;
    return r.rabi_1a_max * gaussian_edge(t, center, r.t_w);
}

std::pair<double, double> support(const RampSchedule& r) {
    if (const auto* one = std::get_if<OnePhotonRamp>(&r)) {
        return {one->t1, one->t4};
    }
    const auto& two = std::get<TwoPhotonRamp>(r);
    return {-0.5 * two.duration, 0.5 * two.duration};
}

EffectiveParams effective_at(const TwoPhotonRamp& r, const TwoPhotonScheme& s, double t) {
    TwoPhotonScheme inst = s;
    inst.rabi_1a = evaluate_two_photon(r, t);
    return adiabatic_elimination(inst);
}

std::vector<EffectiveSweepSample> effective_sweep(const TwoPhotonRamp& r,
                                                  const TwoPhotonScheme& s, int samples) {
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    std::vector<EffectiveSweepSample> out;
    out.reserve(static_cast<size_t>(samples));
    const double a = -0.5 * r.duration;
    const double b = 0.5 * r.duration;
    for (int k = 0; k < samples; ++k) {
        EffectiveSweepSample smp;
        smp.t = a + (b - a) * static_cast<double>(k) / (samples - 1);
        smp.params = effective_at(r, s, smp.t);
        out.push_back(smp);
    }
    return out;
}

EffectiveDrive make_drive(const RampSchedule& ramp, const ExcitationScheme& scheme,
                          bool decay_on) {
    EffectiveDrive drive;
    std::tie(drive.t_begin, drive.t_end) = support(ramp);
    drive.decay_on = decay_on;
    if (const auto* one = std::get_if<OnePhotonRamp>(&ramp)) {
        const auto& s = std::get<OnePhotonScheme>(scheme);
        const OnePhotonRamp r = *one;
        const double gamma_r = decay_on ? s.decay_r : 0.0;
        drive.at = [r, gamma_r](double t) {
            const DrivePoint dp = evaluate_one_photon(r, t);
            EffectiveParams p;
            p.rabi = dp.rabi;
            p.detuning = dp.detuning;
            p.decay_r = gamma_r;
            return p;
        };
        return drive;
    }
    const auto& r = std::get<TwoPhotonRamp>(ramp);
    TwoPhotonScheme s = std::get<TwoPhotonScheme>(scheme);
    if (!decay_on) {
        s.decay_a = 0;
        s.decay_r = 0;
    }
    drive.at = [r, s](double t) { return effective_at(r, s, t); };
    return drive;
}

void to_json(nlohmann::json& j, const OnePhotonRamp& r) {
    j = nlohmann::json{{"variant", "one_photon"},
                       {"rabi_min", r.rabi_min},
                       {"rabi_max", r.rabi_max},
                       {"detuning_min", r.detuning_min},
                       {"detuning_max", r.detuning_max},
                       {"detuning_sign", r.detuning_sign},
                       {"t1", r.t1},
                       {"t2", r.t2},
                       {"t3", r.t3},
                       {"t4", r.t4},
                       {"t_w", r.t_w}};
}

void from_json(const nlohmann::json& j, OnePhotonRamp& r) {
    j.at("rabi_min").get_to(r.rabi_min);
    j.at("rabi_max").get_to(r.rabi_max);
    j.at("detuning_min").get_to(r.detuning_min);
    j.at("detuning_max").get_to(r.detuning_max);
    r.detuning_sign = j.value("detuning_sign", -1.0);
    j.at("t1").get_to(r.t1);
    j.at("t2").get_to(r.t2);
    j.at("t3").get_to(r.t3);
    j.at("t4").get_to(r.t4);
    j.at("t_w").get_to(r.t_w);
    r.validate();
}

void to_json(nlohmann::json& j, const TwoPhotonRamp& r) {
    j = nlohmann::json{{"variant", "two_photon"},
                       {"rabi_1a_max", r.rabi_1a_max},
                       {"t_stop", r.t_stop},
                       {"t_w", r.t_w},
                       {"duration", r.duration}};
}

void from_json(const nlohmann::json& j, TwoPhotonRamp& r) {
    j.at("rabi_1a_max").get_to(r.rabi_1a_max);
    j.at("t_stop").get_to(r.t_stop);
    j.at("t_w").get_to(r.t_w);
    j.at("duration").get_to(r.duration);
    r.validate();
}

nlohmann::json ramp_to_json(const RampSchedule& r) {
    nlohmann::json j;
    std::visit([&j](const auto& ramp) { to_json(j, ramp); }, r);
    return j;
}

RampSchedule ramp_from_json(const nlohmann::json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "one_photon") {
        OnePhotonRamp r;
        from_json(j, r);
        return r;
    }
    if (variant == "two_photon") {
        TwoPhotonRamp r;
        from_json(j, r);
        return r;
    }
    throw std::invalid_argument("unknown ramp variant: " + variant);
}

}  // namespace rydgate
