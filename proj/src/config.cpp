#include "rydgate/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "rydgate/dynamics.hpp"
#include "rydgate/forces.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/optimize.hpp"
#include "rydgate/spectrum.hpp"
#include "rydgate/sweep.hpp"

namespace rydgate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_object(const json& j, const std::string& path,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& key : required) {
        if (!j.contains(key)) throw ConfigError(path + ": missing required field '" + key + "'");
    }
    std::set<std::string> allowed(required.begin(), required.end());
    allowed.insert(optional.begin(), optional.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(path + ": unknown field '" + key + "'");
        }
    }
}

double number_at(const json& j, const std::string& path, const std::string& key) {
    if (!j.at(key).is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

const std::vector<std::string> kTasks = {"spectrum", "ramp", "gate",
                                         "optimize", "sweep", "forces"};

void validate_scheme(const json& j, const std::string& path) {
    check_object(j, path, {"variant"}, {"rabi", "detuning", "decay_r", "rabi_1a", "rabi_ar",
                                        "delta_1a", "delta_ar", "decay_a",
                                        "elimination_threshold"});
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "one_photon") {
        check_object(j, path, {"variant", "rabi", "detuning"}, {"decay_r"});
    } else if (variant == "two_photon") {
        check_object(j, path, {"variant", "rabi_1a", "rabi_ar", "delta_1a", "delta_ar"},
                     {"decay_a", "decay_r", "elimination_threshold"});
    } else {
        throw ConfigError(path + ".variant: must be one_photon or two_photon");
    }
}

void validate_interaction(const json& j, const std::string& path) {
    if (j.contains("v")) {
        check_object(j, path, {"v"}, {});
    } else {
        check_object(j, path, {"c6", "r"}, {});
    }
}

void validate_grid(const json& j, const std::string& path) {
    if (j.is_array()) return;
    check_object(j, path, {"start", "stop", "count"}, {"log"});
    if (j.at("count").get<int>() < 1) throw ConfigError(path + ".count: must be >= 1");
}

void validate_ramp(const json& j, const std::string& path) {
    check_object(j, path, {"variant"},
                 {"rabi_min", "rabi_max", "detuning_min", "detuning_max", "detuning_sign",
                  "t1", "t2", "t3", "t4", "t_w", "rabi_1a_max", "t_stop", "duration"});
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "one_photon") {
        check_object(j, path,
                     {"variant", "rabi_min", "rabi_max", "detuning_min", "detuning_max",
                      "t1", "t2", "t3", "t4", "t_w"},
                     {"detuning_sign"});
    } else if (variant == "two_photon") {
        check_object(j, path, {"variant", "rabi_1a_max", "t_stop", "t_w", "duration"}, {});
    } else {
        throw ConfigError(path + ".variant: must be one_photon or two_photon");
    }
}

std::vector<double> seeds_row(const json& j) { return j.get<std::vector<double>>(); }

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
    return x;
}

json effective_json(const EffectiveParams& p) {
    return json{{"rabi", p.rabi},
                {"detuning", p.detuning},
                {"shift_1", p.shift_1},
                {"shift_r", p.shift_r},
                {"decay_1", p.decay_1},
                {"decay_r", p.decay_r},
                {"decay_1r", p.decay_1r},
                {"elimination_ok", p.elimination_ok}};
}

struct TaskContext {
    json config;
    fs::path out;
    int workers = 1;
    bool resume = false;
    double tolerance = 1e-9;
};

int run_spectrum(const TaskContext& ctx) {
    const json& spec = ctx.config.at("spectrum");
    const double rabi = number_or(spec, "rabi", 1.0);
    const Branch branch = branch_from_name(spec.value("branch", std::string("minus")));
    const std::vector<double> ratios = grid_from_json(spec.at("rabi_over_v"));
    const std::vector<double> detunings = grid_from_json(spec.at("detuning_over_rabi"));

    const int n = static_cast<int>(ratios.size() * detunings.size());
    auto point = [&](int k) {
        const double ratio = ratios[static_cast<size_t>(k) / detunings.size()];
        const double dor = detunings[static_cast<size_t>(k) % detunings.size()];
        EffectiveParams p;
        p.rabi = rabi;
        p.detuning = dor * rabi;
        const InteractionSpec v = InteractionSpec::from_energy(rabi / ratio);
        const DressedSpectrum ds = dressed_spectrum(p, v);
        const EntanglingEnergyResult ee = entangling_energy(p, v, branch);
        const RegimeReport regime = classify_regime(p, v);
        json row;
        row["ok"] = true;
        row["rabi_over_v"] = ratio;
        row["v"] = v.v;
        row["detuning_over_rabi"] = dor;
        row["detuning"] = p.detuning;
        for (int i = 0; i < 3; ++i) {
            row["e_sym_" + std::to_string(i)] = ds.blocks[3].eigenvalues(i);
        }
        for (int i = 0; i < 2; ++i) {
            row["e_single_" + std::to_string(i)] = ds.blocks[1].eigenvalues(i);
        }
        row["e_dark"] = ds.blocks[4].eigenvalues(0);
        row["kappa"] = ee.kappa;
        row["kappa_pb"] = kappa_perfect_blockade(p, branch);
        row["p11"] = ee.p11;
        row["pb"] = ee.pb;
        row["prr"] = ee.prr;
        row["branch"] = branch_name(branch);
        row["regime"] = regime_name(regime.regime);
        row["degenerate"] = ee.degenerate;
        return row;
    };

    SweepStore store(ctx.out);
    int failures = 0;
    const auto rows = run_sweep(n, point, ctx.workers, &store, ctx.resume, &failures);
    write_csv(ctx.out / "spectrum.csv",
              {"index", "rabi_over_v", "v", "detuning_over_rabi", "detuning", "e_sym_0",
               "e_sym_1", "e_sym_2", "e_single_0", "e_single_1", "e_dark", "kappa",
               "kappa_pb", "p11", "pb", "prr", "branch", "regime", "degenerate", "ok",
               "error"},
              rows);
    write_manifest(ctx.out, ctx.config, {ctx.out / "spectrum.csv"});
    if (n == 0) return 0;
    return failures == 0 ? 0 : (failures == n ? 3 : 2);
}

int run_forces(const TaskContext& ctx) {
    const json& spec = ctx.config.at("forces");
    const double rabi = number_or(spec, "rabi", 1.0);
    const double detuning = number_or(spec, "detuning", 0.0);
    const double c6 = number_at(spec, "forces", "c6");
    const Branch branch = branch_from_name(spec.value("branch", std::string("minus")));
    const std::vector<double> grid = grid_from_json(spec.at("r_over_rblock"));
    const double rb = blockade_radius(c6, std::abs(rabi));

    const int n = static_cast<int>(grid.size());
    auto point = [&](int k) {
        const double x = grid[static_cast<size_t>(k)];
        const double r = x * rb;
        json row;
        row["r_over_rblock"] = x;
        row["r"] = r;
        row["v_over_rabi"] = c6 / std::pow(r, 6) / rabi;
        const auto pts = adiabatic_pair_potential({r}, rabi, detuning, c6, branch);
        row["kappa_over_rabi"] = pts[0].kappa / rabi;
        row["p11"] = pts[0].p11;
        row["pb"] = pts[0].pb;
        row["prr"] = pts[0].prr;
        row["flagged"] = pts[0].flagged;
        try {
            const DressedForce f = dressed_force(r, rabi, detuning, c6, branch);
            // Gradient in Omega_eff / R_block units.
            row["grad_kappa"] = -f.finite_difference / rabi * rb;
            row["force_fd"] = f.finite_difference;
            row["force_hf"] = f.eigenstate_expectation;
            row["ok"] = true;
        } catch (const std::exception& e) {
            row["ok"] = false;
            row["error"] = e.what();
        }
        return row;
    };

    SweepStore store(ctx.out);
    int failures = 0;
    const auto rows = run_sweep(n, point, ctx.workers, &store, ctx.resume, &failures);
    write_csv(ctx.out / "forces.csv",
              {"index", "r_over_rblock", "r", "v_over_rabi", "kappa_over_rabi", "grad_kappa",
               "force_fd", "force_hf", "p11", "pb", "prr", "flagged", "ok", "error"},
              rows);
    write_manifest(ctx.out, ctx.config, {ctx.out / "forces.csv"});
    if (n == 0) return 0;
    return failures == 0 ? 0 : (failures == n ? 3 : 2);
}

int run_ramp(const TaskContext& ctx) {
    const json& spec = ctx.config.at("ramp_task");
    const ExcitationScheme scheme = scheme_from_json(spec.at("scheme"));
    const RampSchedule ramp = ramp_from_json(spec.at("ramp"));
    const int samples = spec.value("samples", 501);
    const bool decay_on = spec.value("decay", false);

    const auto [t0, t1] = support(ramp);
    const EffectiveDrive drive = make_drive(ramp, scheme, decay_on);

    std::vector<json> rows;
    for (int k = 0; k < samples; ++k) {
        const double t = t0 + (t1 - t0) * static_cast<double>(k) / (samples - 1);
        json row;
        row["index"] = k;
        row["t"] = t;
        if (const auto* one = std::get_if<OnePhotonRamp>(&ramp)) {
            const DrivePoint dp = evaluate_one_photon(*one, t);
            row["rabi"] = dp.rabi;
            row["detuning"] = dp.detuning;
        } else {
            row["rabi"] = evaluate_two_photon(std::get<TwoPhotonRamp>(ramp), t);
        }
        const EffectiveParams p = drive.at(t);
        row["rabi_eff"] = p.rabi;
        row["detuning_eff"] = p.detuning;
        rows.push_back(row);
    }
    write_csv(ctx.out / "ramp.csv",
              {"index", "t", "rabi", "detuning", "rabi_eff", "detuning_eff"}, rows);
    std::vector<fs::path> files = {ctx.out / "ramp.csv"};

    if (spec.contains("interaction") && spec.contains("initial_state")) {
        const InteractionSpec v = interaction_from_json(spec.at("interaction"));
        const std::string init = spec.at("initial_state").get<std::string>();
        TwoAtomState psi0;
        if (init == "b") {
            psi0 = TwoAtomState::bright();
        } else if (init == "d") {
            psi0 = TwoAtomState::dark();
        } else if (init.size() == 2 && (init[0] == '0' || init[0] == '1') &&
                   (init[1] == '0' || init[1] == '1')) {
            psi0 = TwoAtomState::computational(init[0] - '0', init[1] - '0');
        } else {
            throw ConfigError("ramp_task.initial_state: expected 00/01/10/11/b/d");
        }
        const Trajectory traj = propagate(drive, v, psi0, ctx.tolerance, samples);
        std::vector<json> trows;
        for (size_t k = 0; k < traj.times.size(); ++k) {
            json row;
            row["index"] = static_cast<int>(k);
            row["t"] = traj.times[k];
            row["norm"] = traj.norms[k];
            row["p_r1"] = traj.rydberg_1[k];
            row["p_r2"] = traj.rydberg_2[k];
            const auto& y = traj.states[k];
            row["p11"] = std::norm(y(kIdx11));
            row["pb"] = std::norm(bright_state().dot(y));
            row["prr"] = std::norm(y(kIdxRR));
            for (int i = 0; i < kPairDim; ++i) {
                row["re_" + std::to_string(i)] = y(i).real();
                row["im_" + std::to_string(i)] = y(i).imag();
            }
            trows.push_back(row);
        }
        std::vector<std::string> cols = {"index", "t", "norm", "p_r1", "p_r2",
                                         "p11",   "pb", "prr"};
        for (int i = 0; i < kPairDim; ++i) {
            cols.push_back("re_" + std::to_string(i));
            cols.push_back("im_" + std::to_string(i));
        }
        write_csv(ctx.out / "trajectory.csv", cols, trows);
        files.push_back(ctx.out / "trajectory.csv");
        const double tr = integrated_rydberg_population(traj);
        write_text(ctx.out / "summary.json",
                   json{{"integrated_rydberg_population", tr}}.dump(2) + "\n");
        files.push_back(ctx.out / "summary.json");
    }
    write_manifest(ctx.out, ctx.config, files);
    return 0;
}

int run_gate(const TaskContext& ctx) {
    const json& spec = ctx.config.at("gate");
    GateSequence seq;
    seq.scheme = scheme_from_json(spec.at("scheme"));
    seq.ramp_a = ramp_from_json(spec.at("ramp"));
    seq.ramp_b = spec.contains("ramp_b") ? ramp_from_json(spec.at("ramp_b")) : seq.ramp_a;
    seq.decay_on = spec.value("decay", false);
    const InteractionSpec v = interaction_from_json(spec.at("interaction"));

    GateOptions opt;
    opt.tol = ctx.tolerance;
    opt.samples = spec.value("samples", 1025);
    opt.leak_threshold = spec.value("leak_threshold", 1e-3);
    const GateReport rep = spin_echo_gate(seq, v, opt);

    json out = gate_report_json(rep);
    out["config"] = ctx.config;
    write_text(ctx.out / "gate_report.json", out.dump(2) + "\n");
    write_manifest(ctx.out, ctx.config, {ctx.out / "gate_report.json"});
    return 0;
}

int run_optimize(const TaskContext& ctx) {
    const json& spec = ctx.config.at("optimize");
    GateProblem p;
    const std::string family = spec.at("family").get<std::string>();
    p.family = family == "one_photon" ? RampFamily::one_photon : RampFamily::two_photon;
    p.interaction = interaction_from_json(spec.at("interaction"));
    p.rabi_max = number_or(spec, "rabi_max", 1.0);
    p.rabi_1a_max = number_or(spec, "rabi_1a_max", 1.0);
    p.upper_ratio = number_or(spec, "upper_ratio", 1.1);
    p.decay_on = spec.value("decay", false);
    p.decay_a = number_or(spec, "decay_a", 0.0);
    p.decay_r = number_or(spec, "decay_r", 0.0);
    p.budget = spec.value("budget", 200);
    p.tol = spec.value("search_tolerance", 1e-8);
    p.anti_blockade_margin = number_or(spec, "anti_blockade_margin", 0.0);
    p.max_prr_cap = number_or(spec, "max_prr_cap", 0.0);
    p.lo = to_vector(seeds_row(spec.at("bounds").at("lo")));
    p.hi = to_vector(seeds_row(spec.at("bounds").at("hi")));
    for (const auto& s : spec.at("seeds")) p.seeds.push_back(to_vector(seeds_row(s)));

    const GateOptimum best = optimize_ramp(p);

    json out;
    out["objective"] = best.objective;
    out["evaluations"] = best.evaluations;
    out["constraints_ok"] = best.constraints_ok;
    out["parameters"] = std::vector<double>(best.x.data(), best.x.data() + best.x.size());
    out["ramp"] = ramp_to_json(best.sequence.ramp_a);
    out["report"] = gate_report_json(best.report);
    out["config"] = ctx.config;
    write_text(ctx.out / "optimum.json", out.dump(2) + "\n");

    std::vector<json> rows;
    std::vector<std::string> cols = {"eval"};
    for (Eigen::Index i = 0; i < p.lo.size(); ++i) cols.push_back("x" + std::to_string(i));
    cols.push_back("value");
    for (size_t k = 0; k < best.log.size(); ++k) {
        json row;
        row["eval"] = static_cast<int>(k);
        for (Eigen::Index i = 0; i < best.log[k].x.size(); ++i) {
            row["x" + std::to_string(i)] = best.log[k].x(i);
        }
        row["value"] = best.log[k].value;
        rows.push_back(row);
    }
    write_csv(ctx.out / "eval_log.csv", cols, rows);
    write_manifest(ctx.out, ctx.config, {ctx.out / "optimum.json", ctx.out / "eval_log.csv"});
    return 0;
}

int run_sweep_task(const TaskContext& ctx) {
    const json& spec = ctx.config.at("sweep");
    const std::string kind = spec.at("kind").get<std::string>();
    SweepStore store(ctx.out);
    int failures = 0;

    if (kind == "fidelity_landscape") {
        FidelityScanSpec fs_spec;
        fs_spec.gamma_ratios = grid_from_json(spec.at("gamma_ratios"));
        fs_spec.powers = grid_from_json(spec.at("powers"));
        fs_spec.upper_ratio = number_or(spec, "upper_ratio", 1.1);
        fs_spec.blockade_factor = number_or(spec, "blockade_factor", 10.0);
        fs_spec.budget = spec.value("budget", 120);
        fs_spec.tol = spec.value("search_tolerance", 1e-8);
        const int n = static_cast<int>(fs_spec.gamma_ratios.size() * fs_spec.powers.size());
        auto point = [&](int k) {
            const size_t np = fs_spec.powers.size();
            const double ratio = fs_spec.gamma_ratios[static_cast<size_t>(k) / np];
            const double power = fs_spec.powers[static_cast<size_t>(k) % np];
            const FidelityScanPoint pt = fidelity_scan_point(fs_spec, ratio, power);
            json row;
            row["ok"] = pt.ok;
            row["error"] = pt.error;
            row["gamma_ratio"] = pt.gamma_ratio;
            row["power"] = pt.power;
            row["fidelity"] = pt.fidelity;
            row["log10_infidelity"] = pt.log10_infidelity;
            row["delta_1a"] = pt.delta_1a;
            row["t_stop"] = pt.t_stop;
            row["t_w"] = pt.t_w;
            row["t_r"] = pt.t_r;
            row["closed_fidelity"] = pt.closed_fidelity;
            return row;
        };
        const auto rows = run_sweep(n, point, ctx.workers, &store, ctx.resume, &failures);
        write_csv(ctx.out / "results.csv",
                  {"index", "gamma_ratio", "power", "fidelity", "log10_infidelity",
                   "delta_1a", "t_stop", "t_w", "t_r", "closed_fidelity", "ok", "error"},
                  rows);
        write_manifest(ctx.out, ctx.config, {ctx.out / "results.csv"});
        if (n == 0) return 0;
        return failures == 0 ? 0 : (failures == n ? 3 : 2);
    }

    if (kind == "tr_vs_blockade") {
        TrScanSpec tr_spec;
        tr_spec.family = spec.value("family", std::string("one_photon")) == "one_photon"
                             ? RampFamily::one_photon
                             : RampFamily::two_photon;
        tr_spec.ratios = grid_from_json(spec.at("ratios"));
        tr_spec.prr_cap = number_or(spec, "prr_cap", 0.05);
        tr_spec.budget = spec.value("budget", 160);
        tr_spec.tol = spec.value("search_tolerance", 1e-8);
        const int n = static_cast<int>(tr_spec.ratios.size());
        auto point = [&](int k) {
            const TrScanPoint pt = tr_scan_point(tr_spec, tr_spec.ratios[static_cast<size_t>(k)]);
            json row;
            row["ok"] = pt.ok;
            row["error"] = pt.error;
            row["ratio"] = pt.ratio;
            row["fidelity"] = pt.fidelity;
            row["t_r"] = pt.t_r;
            row["t_r_over_rabi_period"] = pt.t_r_over_rabi_period;
            row["t_r_times_v"] = pt.t_r_times_v;
            row["max_prr"] = pt.max_prr;
            return row;
        };
        const auto rows = run_sweep(n, point, ctx.workers, &store, ctx.resume, &failures);
        write_csv(ctx.out / "results.csv",
                  {"index", "ratio", "fidelity", "t_r", "t_r_over_rabi_period",
                   "t_r_times_v", "max_prr", "ok", "error"},
                  rows);
        write_manifest(ctx.out, ctx.config, {ctx.out / "results.csv"});
        if (n == 0) return 0;
        return failures == 0 ? 0 : (failures == n ? 3 : 2);
    }
    throw ConfigError("sweep.kind: unknown kind '" + kind + "'");
}

}  // namespace

ExcitationScheme scheme_from_json(const json& j) {
    validate_scheme(j, "scheme");
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "one_photon") {
        OnePhotonScheme s;
        s.rabi = j.at("rabi").get<double>();
        s.detuning = j.at("detuning").get<double>();
        s.decay_r = j.value("decay_r", 0.0);
        return s;
    }
    TwoPhotonScheme s;
    s.rabi_1a = j.at("rabi_1a").get<double>();
    s.rabi_ar = j.at("rabi_ar").get<double>();
    s.delta_1a = j.at("delta_1a").get<double>();
    s.delta_ar = j.at("delta_ar").get<double>();
    s.decay_a = j.value("decay_a", 0.0);
    s.decay_r = j.value("decay_r", 0.0);
    s.elimination_threshold = j.value("elimination_threshold", 0.2);
    return s;
}

InteractionSpec interaction_from_json(const json& j) {
    validate_interaction(j, "interaction");
    if (j.contains("v")) return InteractionSpec::from_energy(j.at("v").get<double>());
    return InteractionSpec::from_c6(j.at("c6").get<double>(), j.at("r").get<double>());
}

std::vector<double> grid_from_json(const json& j) {
    validate_grid(j, "grid");
    if (j.is_array()) return j.get<std::vector<double>>();
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const int count = j.at("count").get<int>();
    const bool log = j.value("log", false);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (int k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / (count - 1);
        if (log) {
            if (!(start > 0 && stop > 0)) throw ConfigError("grid: log spacing needs positive bounds");
            out.push_back(start * std::pow(stop / start, f));
        } else {
            out.push_back(start + (stop - start) * f);
        }
    }
    return out;
}

json gate_report_json(const GateReport& rep) {
    json map_re = json::array(), map_im = json::array();
    for (int i = 0; i < 4; ++i) {
        json row_re = json::array(), row_im = json::array();
        for (int j = 0; j < 4; ++j) {
            row_re.push_back(rep.map(i, j).real());
            row_im.push_back(rep.map(i, j).imag());
        }
        map_re.push_back(row_re);
        map_im.push_back(row_im);
    }
    return json{{"fidelity", rep.fidelity},
                {"phi1", rep.phi1},
                {"phi2", rep.phi2},
                {"phases_valid", rep.phases_valid},
                {"t_r", rep.t_r},
                {"leakage", rep.leakage},
                {"max_prr_from_11", rep.max_prr_from_11},
                {"boundary_ok", rep.boundary_ok},
                {"map_re", map_re},
                {"map_im", map_im}};
}

void validate_config(const json& config) {
    check_object(config, "config",
                 {"task", "out"},
                 {"workers", "resume", "tolerance", "reference_unit", "spectrum", "ramp_task",
                  "gate", "optimize", "sweep", "forces"});
    const std::string task = config.at("task").get<std::string>();
    if (std::find(kTasks.begin(), kTasks.end(), task) == kTasks.end()) {
        throw ConfigError("config.task: unknown task '" + task + "'");
    }
    const std::string section = task == "ramp" ? "ramp_task" : task;
    if (!config.contains(section)) {
        throw ConfigError("config: task '" + task + "' needs a '" + section + "' section");
    }

    if (task == "spectrum") {
        check_object(config.at("spectrum"), "spectrum", {"rabi_over_v", "detuning_over_rabi"},
                     {"rabi", "branch"});
        validate_grid(config.at("spectrum").at("rabi_over_v"), "spectrum.rabi_over_v");
        validate_grid(config.at("spectrum").at("detuning_over_rabi"),
                      "spectrum.detuning_over_rabi");
    } else if (task == "forces") {
        check_object(config.at("forces"), "forces", {"c6", "r_over_rblock"},
                     {"rabi", "detuning", "branch"});
        validate_grid(config.at("forces").at("r_over_rblock"), "forces.r_over_rblock");
    } else if (task == "ramp") {
        check_object(config.at("ramp_task"), "ramp_task", {"scheme", "ramp"},
                     {"samples", "decay", "interaction", "initial_state"});
        validate_scheme(config.at("ramp_task").at("scheme"), "ramp_task.scheme");
        validate_ramp(config.at("ramp_task").at("ramp"), "ramp_task.ramp");
        if (config.at("ramp_task").contains("interaction")) {
            validate_interaction(config.at("ramp_task").at("interaction"),
                                 "ramp_task.interaction");
        }
    } else if (task == "gate") {
        check_object(config.at("gate"), "gate", {"scheme", "ramp", "interaction"},
                     {"ramp_b", "decay", "samples", "leak_threshold"});
        validate_scheme(config.at("gate").at("scheme"), "gate.scheme");
        validate_ramp(config.at("gate").at("ramp"), "gate.ramp");
        if (config.at("gate").contains("ramp_b")) {
            validate_ramp(config.at("gate").at("ramp_b"), "gate.ramp_b");
        }
        validate_interaction(config.at("gate").at("interaction"), "gate.interaction");
    } else if (task == "optimize") {
        check_object(config.at("optimize"), "optimize",
                     {"family", "interaction", "bounds", "seeds"},
                     {"rabi_max", "rabi_1a_max", "upper_ratio", "decay", "decay_a", "decay_r",
                      "budget", "search_tolerance", "anti_blockade_margin", "max_prr_cap"});
        check_object(config.at("optimize").at("bounds"), "optimize.bounds", {"lo", "hi"}, {});
        validate_interaction(config.at("optimize").at("interaction"), "optimize.interaction");
        const std::string family = config.at("optimize").at("family").get<std::string>();
        if (family != "one_photon" && family != "two_photon") {
            throw ConfigError("optimize.family: must be one_photon or two_photon");
        }
    } else if (task == "sweep") {
        check_object(config.at("sweep"), "sweep", {"kind"},
                     {"gamma_ratios", "powers", "upper_ratio", "blockade_factor", "budget",
                      "search_tolerance", "family", "ratios", "prr_cap"});
        const std::string kind = config.at("sweep").at("kind").get<std::string>();
        if (kind == "fidelity_landscape") {
            if (!config.at("sweep").contains("gamma_ratios") ||
                !config.at("sweep").contains("powers")) {
                throw ConfigError("sweep: fidelity_landscape needs gamma_ratios and powers");
            }
        } else if (kind == "tr_vs_blockade") {
            if (!config.at("sweep").contains("ratios")) {
                throw ConfigError("sweep: tr_vs_blockade needs ratios");
            }
        } else {
            throw ConfigError("sweep.kind: unknown kind '" + kind + "'");
        }
    }
}

int run_task(const json& config, const RunOverrides& overrides) {
    validate_config(config);

    TaskContext ctx;
    ctx.config = config;
    ctx.out = overrides.out ? fs::path(*overrides.out)
                            : fs::path(config.at("out").get<std::string>());
    ctx.workers = overrides.workers
                      ? *overrides.workers
                      : config.value("workers", []() {
                            const char* env = std::getenv("RYDGATE_WORKERS");
                            if (env) return std::atoi(env);
                            const unsigned hc = std::thread::hardware_concurrency();
                            return hc ? static_cast<int>(hc) : 1;
                        }());
    if (ctx.workers < 1) throw ConfigError("workers must be >= 1");
    ctx.resume = overrides.resume || config.value("resume", false);
    ctx.tolerance = config.value("tolerance", 1e-9);
    if (!(ctx.tolerance > 0)) throw ConfigError("tolerance must be positive");
    fs::create_directories(ctx.out);

    const std::string task = config.at("task").get<std::string>();
    if (task == "spectrum") return run_spectrum(ctx);
    if (task == "forces") return run_forces(ctx);
    if (task == "ramp") return run_ramp(ctx);
    if (task == "gate") return run_gate(ctx);
    if (task == "optimize") return run_optimize(ctx);
    if (task == "sweep") return run_sweep_task(ctx);
    throw ConfigError("unhandled task");
}

}  // namespace rydgate
