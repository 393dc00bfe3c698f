#include "rydgate/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rydgate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

SimplexResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                   const std::vector<Eigen::VectorXd>& seeds,
                                   const SimplexOptions& opt) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw std::invalid_argument("bad bounds");
    }
    if ((hi - lo).minCoeff() <= 0 || !hi.allFinite() || !lo.allFinite()) {
        throw std::invalid_argument("bounds must be finite with hi > lo");
    }
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");

    const int n = static_cast<int>(lo.size());
    SimplexResult res;

    auto evaluate = [&](const Eigen::VectorXd& x) {
        const double v = f(x);
        ++res.evaluations;
        res.log.push_back({x, v});
        if (v > res.best_value) {
            res.best_value = v;
            res.best_x = x;
        }
        return v;
    };

    const int per_start = std::max(opt.max_evaluations / static_cast<int>(seeds.size()),
                                   n + 2);
    for (const Eigen::VectorXd& seed : seeds) {
        if (seed.size() != n) throw std::invalid_argument("seed dimension mismatch");
        const int start_budget = res.evaluations + per_start;

        // Initial simplex: the seed plus one displaced vertex per axis.
        std::vector<Eigen::VectorXd> xs;
        std::vector<double> fs;
        xs.push_back(clip(seed, lo, hi));
        fs.push_back(evaluate(xs[0]));
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd v = xs[0];
            double step = opt.initial_step * (hi(i) - lo(i));
            if (v(i) + step > hi(i)) step = -step;
            v(i) += step;
            xs.push_back(clip(v, lo, hi));
            fs.push_back(evaluate(xs.back()));
        }

        auto order = [&] {
            std::vector<int> idx(xs.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return fs[a] > fs[b]; });
            std::vector<Eigen::VectorXd> x2;
            std::vector<double> f2;
            for (int k : idx) {
                x2.push_back(xs[k]);
                f2.push_back(fs[k]);
            }
            xs.swap(x2);
            fs.swap(f2);
        };

        while (res.evaluations < start_budget && res.evaluations < opt.max_evaluations) {
            order();
            if (fs.front() - fs.back() < opt.f_tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (int k = 0; k < n; ++k) centroid += xs[static_cast<size_t>(k)];
            centroid /= n;

            const Eigen::VectorXd& worst = xs.back();
            const Eigen::VectorXd xr = clip(centroid + (centroid - worst), lo, hi);
            const double fr = evaluate(xr);

            if (fr > fs.front()) {
                const Eigen::VectorXd xe = clip(centroid + 2.0 * (xr - centroid), lo, hi);
                const double fe = evaluate(xe);
                if (fe > fr) {
                    xs.back() = xe;
                    fs.back() = fe;
                } else {
                    xs.back() = xr;
                    fs.back() = fr;
                }
            } else if (fr > fs[fs.size() - 2]) {
                xs.back() = xr;
                fs.back() = fr;
            } else {
                const bool outside = fr > fs.back();
                const Eigen::VectorXd base = outside ? xr : worst;
                const Eigen::VectorXd xc = clip(centroid + 0.5 * (base - centroid), lo, hi);
                const double fc = evaluate(xc);
                if (fc > (outside ? fr : fs.back())) {
                    xs.back() = xc;
                    fs.back() = fc;
                } else {
                    // Shrink toward the best vertex.
                    for (size_t k = 1; k < xs.size(); ++k) {
                        xs[k] = clip(xs[0] + 0.5 * (xs[k] - xs[0]), lo, hi);
                        fs[k] = evaluate(xs[k]);
                        if (res.evaluations >= opt.max_evaluations) break;
                    }
                }
            }
        }
        if (res.evaluations >= opt.max_evaluations) break;
    }
    return res;
}

GateSequence build_sequence(const GateProblem& p, const Eigen::VectorXd& x) {
    if (p.family == RampFamily::one_photon) {
        if (x.size() != 5) throw std::invalid_argument("one-photon family needs 5 parameters");
        OnePhotonRamp r;
        r.rabi_min = 0;
        r.rabi_max = p.rabi_max;
        r.t_w = x(0);
        const double plateau = x(1);
        r.detuning_min = x(2);
        r.detuning_max = x(3);
        const double duration = x(4);
        const double rise = 0.5 * (duration - plateau);
        r.t1 = 0;
        r.t2 = rise;
        r.t3 = rise + plateau;
        r.t4 = duration;
        r.detuning_sign = -1;
        OnePhotonScheme s;
        s.rabi = p.rabi_max;  // static record; the ramp supplies Omega(t)
        s.decay_r = p.decay_r;
        return GateSequence::symmetric(r, s, p.decay_on);
    }
    if (x.size() != 3) throw std::invalid_argument("two-photon family needs 3 parameters");
    TwoPhotonRamp r;
    r.rabi_1a_max = p.rabi_1a_max;
    r.t_stop = x(0);
    r.t_w = x(1);
    r.duration = 2.0 * (r.t_stop + 4.5 * r.t_w);
    TwoPhotonScheme s;
    s.rabi_1a = p.rabi_1a_max;
    s.rabi_ar = p.upper_ratio * p.rabi_1a_max;
    s.delta_1a = x(2);
    s.delta_ar = -x(2);
    s.decay_a = p.decay_a;
    s.decay_r = p.decay_r;
    return GateSequence::symmetric(r, s, p.decay_on);
}

double anti_blockade_clearance(const GateSequence& seq, const InteractionSpec& v,
                               int samples) {
    const EffectiveDrive drive = make_drive(seq.ramp_a, seq.scheme, false);
    double clearance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double t = drive.t_begin +
                         (drive.t_end - drive.t_begin) * static_cast<double>(k) / (samples - 1);
        const EffectiveParams p = drive.at(t);
        clearance = std::min(clearance, std::abs(v.v - 2.0 * p.detuning));
    }
    return clearance;
}

double gate_objective(const GateProblem& p, const Eigen::VectorXd& x) {
    GateSequence seq;
    try {
        seq = build_sequence(p, x);
        std::visit([](const auto& r) { r.validate(); }, seq.ramp_a);
    } catch (const std::exception&) {
        return -2.0;
    }

    double penalty = 0;
    const double boundary =
        std::visit([](const auto& r) { return r.boundary_dressing(); }, seq.ramp_a);
    if (boundary > p.boundary_cap) {
        penalty += 1.0 + std::min(boundary / p.boundary_cap, 1e3);
    }
    if (p.anti_blockade_margin > 0) {
        const double clearance = anti_blockade_clearance(seq, p.interaction);
        if (clearance < p.anti_blockade_margin) {
            penalty += 1.0 + (p.anti_blockade_margin - clearance) / p.anti_blockade_margin;
        }
    }
    if (penalty > 0) return -penalty;

    GateOptions opt;
    opt.tol = p.tol;
    opt.samples = p.samples;
    opt.compute_tr = false;
    GateReport rep;
    try {
        rep = spin_echo_gate(seq, p.interaction, opt);
    } catch (const std::exception&) {
        return -4.0;
    }
    if (p.max_prr_cap > 0 && rep.max_prr_from_11 > p.max_prr_cap) {
        return -(1.0 + (rep.max_prr_from_11 - p.max_prr_cap) / p.max_prr_cap);
    }
    return rep.fidelity;
}

GateOptimum optimize_ramp(const GateProblem& p) {
    if (p.budget < 50) {
        throw std::invalid_argument("optimization budget must be at least 50 evaluations");
    }
    if (p.seeds.empty()) throw std::invalid_argument("need seed points");

    SimplexOptions sopt;
    sopt.max_evaluations = p.budget;
    auto objective = [&p](const Eigen::VectorXd& x) { return gate_objective(p, x); };
    const SimplexResult sr = nelder_mead_maximize(objective, p.lo, p.hi, p.seeds, sopt);
    if (!(sr.best_value > -1.0)) {
        throw std::runtime_error("all optimizer evaluations were infeasible or failed");
    }

    GateOptimum out;
    out.x = sr.best_x;
    out.objective = sr.best_value;
    out.evaluations = sr.evaluations;
    out.log = sr.log;
    out.sequence = build_sequence(p, sr.best_x);
    GateOptions opt;
    opt.tol = p.tol;
    opt.samples = 1025;
    opt.compute_tr = true;
    out.report = spin_echo_gate(out.sequence, p.interaction, opt);
    out.constraints_ok = verify_constraints(p, out.sequence, out.report);
    return out;
}

bool verify_constraints(const GateProblem& p, const GateSequence& seq,
                        const GateReport& rep) {
    const double boundary =
        std::visit([](const auto& r) { return r.boundary_dressing(); }, seq.ramp_a);
    if (boundary > p.boundary_cap) return false;
    if (p.anti_blockade_margin > 0 &&
        anti_blockade_clearance(seq, p.interaction) < p.anti_blockade_margin) {
        return false;
    }
    if (p.max_prr_cap > 0 && rep.max_prr_from_11 > p.max_prr_cap) return false;
    return true;
}

FidelityScanPoint fidelity_scan_point(const FidelityScanSpec& spec, double gamma_ratio,
                                      double power) {
    FidelityScanPoint pt;
    pt.gamma_ratio = gamma_ratio;
    pt.power = power;
    try {
        GateProblem p;
        p.family = RampFamily::two_photon;
        p.rabi_1a_max = 1.0;
        p.upper_ratio = spec.upper_ratio;
        p.decay_r = 1.0 / (kTwoPi * power);
        p.decay_a = gamma_ratio * p.decay_r;
        p.decay_on = true;
        const double rabi_eff_ref = spec.upper_ratio / (2.0 * spec.reference_delta);
        p.interaction = InteractionSpec::from_energy(spec.blockade_factor * rabi_eff_ref);
        p.tol = spec.tol;
        p.budget = spec.budget;
        p.anti_blockade_margin = 0.05 * std::abs(p.interaction.v);

        // x = [t_stop, t_w, delta_1a]; time scales follow the effective Rabi
        // frequency at the reference detuning.
        const double t_unit = 1.0 / rabi_eff_ref;
        p.lo = Eigen::Vector3d(0.02 * t_unit, 0.25 * t_unit, 3.0);
        p.hi = Eigen::Vector3d(6.0 * t_unit, 3.0 * t_unit, 12.0);
        p.seeds = {Eigen::Vector3d(2.4 * t_unit, 1.0 * t_unit, spec.reference_delta),
                   Eigen::Vector3d(1.2 * t_unit, 1.5 * t_unit, 1.25 * spec.reference_delta)};

        GateOptimum best = optimize_ramp(p);
        pt.fidelity = best.report.fidelity;
        pt.log10_infidelity = std::log10(std::max(1.0 - pt.fidelity, 1e-16));
        pt.t_stop = best.x(0);
        pt.t_w = best.x(1);
        pt.delta_1a = best.x(2);
        pt.t_r = best.report.t_r;

        GateSequence closed = best.sequence;
        closed.decay_on = false;
        GateOptions opt;
        opt.tol = spec.tol;
        opt.compute_tr = false;
        pt.closed_fidelity = spin_echo_gate(closed, p.interaction, opt).fidelity;
        pt.ok = true;
    } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
    }
    return pt;
}

TrScanPoint tr_scan_point(const TrScanSpec& spec, double ratio) {
    TrScanPoint pt;
    pt.ratio = ratio;
    try {
        GateProblem p;
        p.decay_on = false;
        p.tol = spec.tol;
        p.budget = spec.budget;
        p.max_prr_cap = spec.prr_cap;
        p.family = spec.family;

        // kappa available under the double-excitation cap limits how fast the
        // entangling phase can accumulate; scale the ramp-duration box by it.
        const double kappa_cap = std::min(0.30, spec.prr_cap / ratio);
        const double plateau_scale = 0.5 * kPi / kappa_cap;

        if (spec.family == RampFamily::one_photon) {
            p.rabi_max = 1.0;
            p.interaction = InteractionSpec::from_energy(1.0 / ratio);
            p.anti_blockade_margin = 0.02 * std::max(1.0, std::abs(p.interaction.v));
            // x = [t_w, plateau, detuning_min, detuning_max, duration]
            const double dmin_hi = ratio <= 1.0 ? 1.0 : 1.6;
            p.lo.resize(5);
            p.hi.resize(5);
            p.lo << 1.0, 0.25 * plateau_scale, 0.0, 2.5, 0.0;
            p.hi << 8.0, 2.5 * plateau_scale, dmin_hi, 6.0, 5.0 * plateau_scale + 80.0;
            auto seed = [&](double tw, double plat, double dmin, double dmax) {
                Eigen::VectorXd s(5);
                s << tw, plat, dmin, dmax, plat + 2.0 * 4.6 * tw;
                return s;
            };
            p.seeds = {seed(2.5, plateau_scale, ratio <= 1.0 ? 0.05 : 0.7, 4.0),
                       seed(4.0, 1.4 * plateau_scale, ratio <= 1.0 ? 0.25 : 1.0, 3.2)};
        } else {
            p.rabi_1a_max = 1.0;
            p.upper_ratio = 1.1;
            const double delta_ref = 5.05;
            const double rabi_eff = p.upper_ratio / (2.0 * delta_ref);
            p.interaction = InteractionSpec::from_energy(rabi_eff / ratio);
            p.anti_blockade_margin = 0.02 * std::max(rabi_eff, std::abs(p.interaction.v));
            const double t_unit = 1.0 / rabi_eff;
            p.lo = Eigen::Vector3d(0.02 * t_unit, 0.25 * t_unit, 3.0);
            p.hi = Eigen::Vector3d(2.0 * plateau_scale * t_unit, 3.0 * t_unit, 12.0);
            p.seeds = {Eigen::Vector3d(0.35 * plateau_scale * t_unit, 1.0 * t_unit, delta_ref),
                       Eigen::Vector3d(0.6 * plateau_scale * t_unit, 1.4 * t_unit, delta_ref)};
        }

        GateOptimum best = optimize_ramp(p);
        const double rabi_eff_max = effective_rabi_scale(best.sequence.scheme);
        pt.fidelity = best.report.fidelity;
        pt.t_r = best.report.t_r;
        pt.max_prr = best.report.max_prr_from_11;
        pt.t_r_over_rabi_period = pt.t_r * rabi_eff_max / kTwoPi;
        pt.t_r_times_v = pt.t_r * std::abs(p.interaction.v);
        pt.ok = true;
    } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
    }
    return pt;
}

double fidelity_bound(const InteractionSpec& v, double tau_r) {
    if (!(tau_r > 0)) throw std::invalid_argument("tau_r must be positive");
    if (v.v == 0) throw std::invalid_argument("interaction energy must be nonzero");
    return 1.0 - 4.0 * kPi / (std::abs(v.v) * tau_r);
}

}  // namespace rydgate
