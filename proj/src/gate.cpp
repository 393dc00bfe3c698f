#include "rydgate/gate.hpp"

#include <cmath>

namespace rydgate {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_phase(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

// Computational product-basis indices |00>, |01>, |10>, |11>.
constexpr int kComp[4] = {kIdx00, kIdx01, kIdx10, kIdx11};

Matrix4cd project_computational(const Matrix9cd& u) {
    Matrix4cd m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = u(kComp[i], kComp[j]);
    }
    return m;
}

Eigen::Matrix3cd atom_rotation_x(double angle) {
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    const double c = std::cos(0.5 * angle);
    const cdouble s = cdouble(0, -std::sin(0.5 * angle));
    u(kLevel0, kLevel0) = c;
    u(kLevel1, kLevel1) = c;
    u(kLevel0, kLevel1) = s;
    u(kLevel1, kLevel0) = s;
    return u;
}

// Sector views of a two-atom state: amplitudes in the bases used by the
// block propagators.
struct SectorDecomposition {
    cdouble c00;
    Eigen::Vector2cd atom2;  // {|01>, |0r>}
    Eigen::Vector2cd atom1;  // {|10>, |r0>}
    Eigen::Vector3cd sym;    // {|11>, |b>, |rr>}
    cdouble dark;
};

SectorDecomposition decompose(const Vector9cd& psi) {
    const double s2 = std::sqrt(2.0);
    SectorDecomposition d;
    d.c00 = psi(kIdx00);
    d.atom2 << psi(kIdx01), psi(kIdx0R);
    d.atom1 << psi(kIdx10), psi(kIdxR0);
    d.sym << psi(kIdx11), (psi(kIdx1R) + psi(kIdxR1)) / s2, psi(kIdxRR);
    d.dark = (psi(kIdx1R) - psi(kIdxR1)) / s2;
    return d;
}

// Integrated Rydberg population of one sector vector over one ramp. The
// sectors are orthogonal, so contributions add exactly.
double sector_tr(const MatrixGenerator& gen, const Eigen::VectorXcd& psi0,
                 const EffectiveDrive& drive, double tol, int samples,
                 int rydberg_weight_index) {
    if (psi0.norm() < 1e-14) return 0.0;
    const Trajectory traj = propagate(gen, psi0, drive.t_begin, drive.t_end, tol, samples);
    std::vector<double> f(traj.times.size());
    for (size_t k = 0; k < f.size(); ++k) {
        const auto& y = traj.states[k];
        switch (rydberg_weight_index) {
            case 2:  // single-excitation sector, one Rydberg amplitude
                f[k] = std::norm(y(1));
                break;
            case 3:  // symmetric sector
                f[k] = std::norm(y(1)) + 2.0 * std::norm(y(2));
                break;
            default:  // dark state
                f[k] = std::norm(y(0));
        }
    }
    return integrate_samples(traj.times, f);
}

double ramp_tr_of_state(const Vector9cd& psi, const EffectiveDrive& drive,
                        const InteractionSpec& v, double tol, int samples) {
    const SectorDecomposition d = decompose(psi);
    const auto gen3 = symmetric_sector_generator(drive, v);
    const auto gen2 = single_sector_generator(drive);
    const auto gen1 = dark_sector_generator(drive);
    double tr = 0;
    tr += sector_tr(gen2, d.atom2, drive, tol, samples, 2);
    tr += sector_tr(gen2, d.atom1, drive, tol, samples, 2);
    tr += sector_tr(gen3, d.sym, drive, tol, samples, 3);
    Eigen::VectorXcd dvec(1);
    dvec(0) = d.dark;
    tr += sector_tr(gen1, dvec, drive, tol, samples, 1);
    return tr;
}

}  // namespace

Matrix4cd u_kappa(double phi1, double phi2) {
    Matrix4cd u = Matrix4cd::Zero();
    const cdouble i(0, 1);
    u(0, 0) = std::exp(-i * (0.25 * phi2 + phi1));
    u(1, 1) = std::exp(i * 0.25 * phi2);
    u(2, 2) = std::exp(i * 0.25 * phi2);
    u(3, 3) = std::exp(-i * (0.25 * phi2 - phi1));
    return u;
}

Matrix4cd ms_target() {
    Matrix4cd yy = Matrix4cd::Zero();
    yy(0, 3) = -1;
    yy(3, 0) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    const double c = std::cos(0.25 * kPi);
    const double s = std::sin(0.25 * kPi);
    return c * Matrix4cd::Identity() - cdouble(0, s) * yy;
}

double ms_fidelity(const Matrix4cd& m) {
    const cdouble tr = (ms_target().adjoint() * m).trace();
    return std::norm(tr) / 16.0;
}

Matrix4cd rotation_x_pair(double angle) {
    Eigen::Matrix2cd u;
    const double c = std::cos(0.5 * angle);
    const cdouble s = cdouble(0, -std::sin(0.5 * angle));
    u << c, s, s, c;
    Matrix4cd out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = u(i, j) * u;
    }
    return out;
}

Matrix9cd rotation_x_pair9(double angle) {
    const Eigen::Matrix3cd u = atom_rotation_x(angle);
    Matrix9cd out;
    for (int i = 0; i < kAtomDim; ++i) {
        for (int j = 0; j < kAtomDim; ++j) {
            out.block<3, 3>(kAtomDim * i, kAtomDim * j) = u(i, j) * u;
        }
    }
    return out;
}

double concurrence(const Eigen::Vector4cd& psi) {
    return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

PhaseExtraction extract_phases(const Matrix4cd& m, double leak_threshold) {
    PhaseExtraction out;
    double min_col = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) min_col = std::min(min_col, m.col(j).squaredNorm());
    out.leakage = 1.0 - min_col;

    const cdouble d0 = m(0, 0), d1 = m(1, 1), d2 = m(2, 2), d3 = m(3, 3);
    out.phi2 = wrap_phase(-std::arg((d0 * d3) / (d1 * d2)));
    out.phi1 = wrap_phase(-std::arg(d0 / d1) - 0.5 * out.phi2);
    out.ok = out.leakage <= leak_threshold;
    return out;
}

RampPropagation ramp_propagation(const EffectiveDrive& drive, const InteractionSpec& v,
                                 const RampPropagationOptions& opt) {
    RampPropagation out;
    const auto gen3 = symmetric_sector_generator(drive, v);
    const auto gen2 = single_sector_generator(drive);
    const auto gen1 = dark_sector_generator(drive);

    Eigen::Matrix3cd u3;
    for (int j = 0; j < 3; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(3);
        e(j) = 1.0;
        const int samples = j == 0 ? opt.samples : 2;
        const Trajectory traj =
            propagate(gen3, e, drive.t_begin, drive.t_end, opt.tol, samples);
        u3.col(j) = traj.states.back();
        out.steps_accepted += traj.steps_accepted;
        if (j == 0) {
            std::vector<double> f(traj.times.size());
            for (size_t k = 0; k < f.size(); ++k) {
                const auto& y = traj.states[k];
                f[k] = std::norm(y(1)) + 2.0 * std::norm(y(2));
                out.max_prr_from_11 = std::max(out.max_prr_from_11, std::norm(y(2)));
            }
            out.tr_from_11 = integrate_samples(traj.times, f);
        }
    }

    Eigen::Matrix2cd u2;
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2);
        e(j) = 1.0;
        const int samples = j == 0 ? opt.samples : 2;
        const Trajectory traj =
            propagate(gen2, e, drive.t_begin, drive.t_end, opt.tol, samples);
        u2.col(j) = traj.states.back();
        out.steps_accepted += traj.steps_accepted;
        if (j == 0) {
            std::vector<double> f(traj.times.size());
            for (size_t k = 0; k < f.size(); ++k) f[k] = std::norm(traj.states[k](1));
            out.tr_from_01 = integrate_samples(traj.times, f);
        }
    }

    Eigen::VectorXcd dvec(1);
    dvec(0) = 1.0;
    const Trajectory dtraj =
        propagate(gen1, dvec, drive.t_begin, drive.t_end, opt.tol, 2);
    const cdouble ud = dtraj.states.back()(0);
    out.steps_accepted += dtraj.steps_accepted;

    // Reassemble on the product basis. |0,0> is exactly inert.
    out.u = Matrix9cd::Zero();
    out.u(kIdx00, kIdx00) = 1.0;
    const int a2[2] = {kIdx01, kIdx0R};
    const int a1[2] = {kIdx10, kIdxR0};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.u(a2[i], a2[j]) = u2(i, j);
            out.u(a1[i], a1[j]) = u2(i, j);
        }
    }
    Eigen::Matrix<cdouble, 9, 4> basis = Eigen::Matrix<cdouble, 9, 4>::Zero();
    basis(kIdx11, 0) = 1.0;
    basis.col(1) = bright_state();
    basis(kIdxRR, 2) = 1.0;
    basis.col(3) = dark_state();
    Eigen::Matrix4cd usub = Eigen::Matrix4cd::Zero();
    usub.topLeftCorner<3, 3>() = u3;
    usub(3, 3) = ud;
    out.u += basis * usub * basis.adjoint();

    const double rabi_edge = std::abs(drive.at(drive.t_begin).rabi);
    const double rabi_mid = std::abs(drive.at(0.5 * (drive.t_begin + drive.t_end)).rabi);
    out.boundary_dressing = rabi_mid > 0 ? rabi_edge / rabi_mid : 0.0;
    return out;
}

RampUnitary ramp_unitary(const RampSchedule& ramp, const ExcitationScheme& scheme,
                         const InteractionSpec& v, double tol, bool decay_on, int samples) {
    std::visit([](const auto& r) { r.validate(); }, ramp);
    const EffectiveDrive drive = make_drive(ramp, scheme, decay_on);
    RampPropagationOptions opt;
    opt.tol = tol;
    opt.samples = samples;
    const RampPropagation prop = ramp_propagation(drive, v, opt);

    RampUnitary out;
    out.map = project_computational(prop.u);
    out.tr_by_input = {0.0, prop.tr_from_01, prop.tr_from_01, prop.tr_from_11};
    out.tr_sum = prop.tr_from_11 + 2.0 * prop.tr_from_01;
    out.max_prr_from_11 = prop.max_prr_from_11;
    out.boundary_ok = prop.boundary_dressing <= 1e-4;
    double min_col = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) min_col = std::min(min_col, out.map.col(j).squaredNorm());
    out.leakage = 1.0 - min_col;
    return out;
}

GateSequence GateSequence::symmetric(const RampSchedule& ramp, const ExcitationScheme& scheme,
                                     bool decay_on) {
    GateSequence seq;
    seq.ramp_a = ramp;
    seq.ramp_b = ramp;
    seq.scheme = scheme;
    seq.decay_on = decay_on;
    return seq;
}

Matrix4cd spin_echo_composite(const Matrix4cd& ramp_map_a, const Matrix4cd& ramp_map_b) {
    const Matrix4cd half = rotation_x_pair(0.5 * kPi);
    const Matrix4cd full = rotation_x_pair(kPi);
    return half * ramp_map_b * full * ramp_map_a * half;
}

GateReport spin_echo_gate(const GateSequence& seq, const InteractionSpec& v,
                          const GateOptions& opt) {
    std::visit([](const auto& r) { r.validate(); }, seq.ramp_a);
    std::visit([](const auto& r) { r.validate(); }, seq.ramp_b);

    const EffectiveDrive drive_a = make_drive(seq.ramp_a, seq.scheme, seq.decay_on);
    RampPropagationOptions po;
    po.tol = opt.tol;
    po.samples = opt.samples;
    const RampPropagation prop_a = ramp_propagation(drive_a, v, po);

    const bool same_ramp = seq.ramp_b == seq.ramp_a;
    const EffectiveDrive drive_b =
        same_ramp ? drive_a : make_drive(seq.ramp_b, seq.scheme, seq.decay_on);
    const RampPropagation prop_b = same_ramp ? prop_a : ramp_propagation(drive_b, v, po);

    const Matrix9cd half = rotation_x_pair9(0.5 * kPi);
    const Matrix9cd full = rotation_x_pair9(kPi);
    const Matrix9cd useq = half * prop_b.u * full * prop_a.u * half;

    GateReport rep;
    rep.map = project_computational(useq);
    rep.fidelity = ms_fidelity(rep.map);
    rep.leakage = 1.0 - [&] {
        double min_col = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 4; ++j) min_col = std::min(min_col, rep.map.col(j).squaredNorm());
        return min_col;
    }();
    const PhaseExtraction ph =
        extract_phases(project_computational(prop_a.u), opt.leak_threshold);
    rep.phi1 = ph.phi1;
    rep.phi2 = ph.phi2;
    rep.phases_valid = ph.ok;
    rep.max_prr_from_11 = std::max(prop_a.max_prr_from_11, prop_b.max_prr_from_11);
    rep.boundary_ok = prop_a.boundary_dressing <= 1e-4 && prop_b.boundary_dressing <= 1e-4;

    if (opt.compute_tr) {
        const Vector9cd psi0 = TwoAtomState::computational(1, 1).amplitudes;
        const Vector9cd psi1 = half * psi0;
        rep.t_r = ramp_tr_of_state(psi1, drive_a, v, opt.tol, opt.samples);
        const Vector9cd psi3 = full * (prop_a.u * psi1);
        rep.t_r += ramp_tr_of_state(psi3, drive_b, v, opt.tol, opt.samples);
    }
    return rep;
}

}  // namespace rydgate
