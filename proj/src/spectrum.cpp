#include "rydgate/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace rydgate {

namespace {

Eigen::MatrixXcd block_basis(const std::vector<Vector9cd>& cols) {
    Eigen::MatrixXcd b(kPairDim, static_cast<int>(cols.size()));
    for (int j = 0; j < b.cols(); ++j) b.col(j) = cols[static_cast<size_t>(j)];
    return b;
}

BlockSpectrum solve_block(std::string name, std::vector<int> labels,
                          const Eigen::MatrixXcd& basis, const Matrix9cd& h) {
    BlockSpectrum out;
    out.name = std::move(name);
    out.basis_indices = std::move(labels);
    out.basis = basis;
    const Eigen::MatrixXcd hb = basis.adjoint() * h * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb);
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
}

// Continuation state for the |1,1>-branch tracking through the symmetric
// sector at fixed interaction energy.
struct TrackPoint {
    Eigen::Vector3cd vec;
    double value = 0;
    double gap = 0;
};

TrackPoint pick_by_overlap(const Eigen::Matrix3cd& h, const Eigen::Vector3cd& ref) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
    int best = 0;
    double best_ov = -1;
    for (int k = 0; k < 3; ++k) {
        const double ov = std::norm(ref.dot(es.eigenvectors().col(k)));
        if (ov > best_ov) {
            best_ov = ov;
            best = k;
        }
    }
    TrackPoint tp;
    tp.vec = es.eigenvectors().col(best);
    tp.value = es.eigenvalues()(best);
    tp.gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (k != best) tp.gap = std::min(tp.gap, std::abs(es.eigenvalues()(k) - tp.value));
    }
    return tp;
}

double step_overlap(const TrackPoint& a, const TrackPoint& b) {
    return std::norm(a.vec.dot(b.vec));
}

struct Tracker {
    EffectiveParams params;  // detuning replaced along the path
    double v = 0;
    ContinuationOptions opt;
    double min_gap = std::numeric_limits<double>::infinity();
    bool ambiguous = false;

    Eigen::Matrix3cd h_at(double delta) const {
        EffectiveParams p = params;
        p.detuning = delta;
        return symmetric_block_hamiltonian(p, InteractionSpec{v});
    }

    // Advance from (d0, tp0) to d1, refining recursively when the
    // eigenvector rotates too fast for one step.
    TrackPoint advance(double d0, const TrackPoint& tp0, double d1, int depth) {
        TrackPoint tp1 = pick_by_overlap(h_at(d1), tp0.vec);
        if (step_overlap(tp0, tp1) >= opt.refine_overlap || depth >= opt.max_refine_depth) {
            if (step_overlap(tp0, tp1) < opt.refine_overlap) ambiguous = true;
            min_gap = std::min(min_gap, tp1.gap);
            return tp1;
        }
        const double mid = 0.5 * (d0 + d1);
        const TrackPoint tpm = advance(d0, tp0, mid, depth + 1);
        return advance(mid, tpm, d1, depth + 1);
    }
};

}  // namespace

Eigen::VectorXd DressedSpectrum::all_eigenvalues() const {
    Eigen::VectorXd out(kPairDim);
    int at = 0;
    for (const auto& b : blocks) {
        out.segment(at, b.eigenvalues.size()) = b.eigenvalues;
        at += static_cast<int>(b.eigenvalues.size());
    }
    return out;
}

Eigen::Matrix3cd symmetric_block_hamiltonian(const EffectiveParams& p, const InteractionSpec& v) {
    const double c = 0.5 * std::sqrt(2.0) * p.rabi;
    Eigen::Matrix3cd h;
    h << 0, c, 0,
         c, -p.detuning, c,
         0, c, -2.0 * p.detuning + v.v;
    return h;
}

Eigen::Matrix2cd single_excitation_hamiltonian(const EffectiveParams& p) {
    Eigen::Matrix2cd h;
    h << 0, 0.5 * p.rabi,
         0.5 * p.rabi, -p.detuning;
    return h;
}

DressedSpectrum dressed_spectrum(const EffectiveParams& p, const InteractionSpec& v) {
    const Matrix9cd h = two_atom_hamiltonian(p, v) ;

    auto unit = [](int i) {
        Vector9cd e = Vector9cd::Zero();
        e(i) = 1.0;
        return e;
    };

    DressedSpectrum out;
    out.blocks[0] = solve_block("ground", {kIdx00}, block_basis({unit(kIdx00)}), h);
    out.blocks[1] = solve_block("atom2_excited", {kIdx01, kIdx0R},
                                block_basis({unit(kIdx01), unit(kIdx0R)}), h);
    out.blocks[2] = solve_block("atom1_excited", {kIdx10, kIdxR0},
                                block_basis({unit(kIdx10), unit(kIdxR0)}), h);
    out.blocks[3] = solve_block("symmetric", {kIdx11, kIdx1R, kIdxRR},
                                block_basis({unit(kIdx11), bright_state(), unit(kIdxRR)}), h);
    out.blocks[4] = solve_block("dark", {kIdx1R}, block_basis({dark_state()}), h);
    return out;
}

EntanglingEnergyResult entangling_energy(const EffectiveParams& p, const InteractionSpec& v,
                                         Branch branch, const ContinuationOptions& opt) {
    const int sign = branch_sign(branch);

    // One-atom shift: the {|1>,|r>} problem has no crossings, so the branch
    // is simply the upper (plus) or lower (minus) eigenvalue.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> one(single_excitation_hamiltonian(p));
    const double e_one = branch == Branch::plus ? one.eigenvalues()(1) : one.eigenvalues()(0);

    const double scale = std::max({std::abs(p.rabi), std::abs(p.detuning), 1e-300});
    const double target = p.detuning;

    // Start the continuation far out on the branch side, below a sharp
    // anti-blockade crossing when one separates the start from the target.
    double start = sign * std::max(8.0 * std::abs(p.rabi), 1.2 * std::abs(target));
    if (start == 0.0) start = sign * 8.0 * scale;
    const double crossing = 0.5 * v.v;
    const bool sharp = v.v != 0 && std::abs(p.rabi) < opt.sharp_ratio * std::abs(v.v);
    bool jump_window = false;
    double wlo = 0, whi = 0;
    if (sharp && crossing * sign > 0 && std::abs(target) < std::abs(crossing)) {
        if (std::abs(start) > 0.7 * std::abs(crossing)) start = sign * 0.7 * std::abs(crossing);
    } else if (sharp) {
        const double lo = std::min(start, target), hi = std::max(start, target);
        if (crossing > lo && crossing < hi) {
            // The path must pass the narrow crossing; hop straight over it so
            // overlap tracking continues on the diabatic |1,1>-like branch.
            const double gap = 2.0 * p.rabi * p.rabi / std::abs(v.v);
            const double w = std::max(25.0 * gap, 1e-9 * scale);
            wlo = crossing - w;
            whi = crossing + w;
            jump_window = wlo > lo && whi < hi;
        }
    }

    Tracker tracker;
    tracker.params = p;
    tracker.v = v.v;
    tracker.opt = opt;

    // Seed with the |1,1>-dominant eigenvector at the start detuning.
    Eigen::Vector3cd seed;
    seed << 1.0, 0.0, 0.0;
    TrackPoint tp = pick_by_overlap(tracker.h_at(start), seed);

    const int n = std::max(2, opt.coarse_steps);
    double d_prev = start;
    auto inside = [&](double d) { return (d - wlo) * (d - whi) < 0; };
    auto beyond = [&](double d) {
        return (d_prev <= wlo && d >= whi) || (d_prev >= whi && d <= wlo);
    };
    for (int k = 1; k <= n; ++k) {
        const double d_next = start + (target - start) * static_cast<double>(k) / n;
        if (jump_window && (inside(d_next) || beyond(d_next))) {
            if (!inside(d_prev)) {
                // Walk up to the window edge, then hop it in one diabatic
                // step so the narrow anti-blockade crossing is not resolved.
                const double entry = std::abs(d_prev - wlo) < std::abs(d_prev - whi) ? wlo : whi;
                const double exit = entry == wlo ? whi : wlo;
                tp = tracker.advance(d_prev, tp, entry, 0);
                tp = pick_by_overlap(tracker.h_at(exit), tp.vec);
                d_prev = exit;
            }
            if (inside(d_next)) continue;
        }
        tp = tracker.advance(d_prev, tp, d_next, 0);
        d_prev = d_next;
    }

    EntanglingEnergyResult out;
    out.branch = branch;
    out.e_two_atom = tp.value;
    out.e_one_atom = e_one;
    out.kappa = tp.value - 2.0 * e_one;
    out.p11 = std::norm(tp.vec(0));
    out.pb = std::norm(tp.vec(1));
    out.prr = std::norm(tp.vec(2));
    out.min_gap = tp.gap;
    out.degenerate = tracker.ambiguous || tp.gap < opt.degenerate_gap ||
                     std::abs(v.v - 2.0 * target) < opt.degenerate_gap;
    return out;
}

double kappa_perfect_blockade(const EffectiveParams& p, Branch branch) {
    const double o2 = p.rabi * p.rabi;
    const double d2 = p.detuning * p.detuning;
    const double inner = std::sqrt(2.0 * o2 + d2) - 2.0 * std::sqrt(o2 + d2);
    return 0.5 * p.detuning + 0.5 * branch_sign(branch) * inner;
}

double kappa_weak_asymptote(double theta, const InteractionSpec& v, Branch branch) {
    const double c = 0.5 * (1.0 + branch_sign(branch) * std::cos(theta));
    return c * c * v.v;
}

double mixing_angle(const EffectiveParams& p) {
    return std::atan2(std::abs(p.rabi), -p.detuning);
}

double collective_mixing_angle(const EffectiveParams& p) {
    return std::atan2(std::sqrt(2.0) * std::abs(p.rabi), -p.detuning);
}

TableOracleReport table_oracles(const EffectiveParams& p, const InteractionSpec& v) {
    TableOracleReport rep;
    const double omega = std::abs(p.rabi);
    const double delta = p.detuning;
    const double theta = mixing_angle(p);
    const double root = std::sqrt(omega * omega + delta * delta);

    // Drive part on the {|1>,|r>}^x2 pseudo-spin space (4x4), eigenvalues
    // -Delta, -Delta +- root with theta-rotated product eigenvectors.
    Eigen::Matrix2cd sz, sx;
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
    auto kron2 = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Eigen::Matrix4cd k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return k;
    };
    const Eigen::Matrix4cd big_sz = 0.5 * (kron2(sz, id2) + kron2(id2, sz));
    const Eigen::Matrix4cd big_sx = 0.5 * (kron2(sx, id2) + kron2(id2, sx));
    const Eigen::Matrix4cd h_drive = -delta * Eigen::Matrix4cd::Identity() -
                                     delta * big_sz + omega * big_sx;

    // Basis order {|r>, |1>} for the pseudo-spin up/down convention.
    Eigen::Vector2cd up_theta, dn_theta;
    up_theta << std::cos(0.5 * theta), std::sin(0.5 * theta);
    dn_theta << -std::sin(0.5 * theta), std::cos(0.5 * theta);

    auto kron_vec = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
        Eigen::Vector4cd k;
        k << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        return k;
    };

    const Eigen::Vector4cd upup = kron_vec(up_theta, up_theta);
    const Eigen::Vector4cd dndn = kron_vec(dn_theta, dn_theta);
    const Eigen::Vector4cd mixed =
        (kron_vec(up_theta, dn_theta) + kron_vec(dn_theta, up_theta)) / std::sqrt(2.0);

    auto residual = [&](const Eigen::Matrix4cd& h, const Eigen::Vector4cd& vec, double value) {
        return (h * vec - value * vec).norm();
    };
    rep.drive_deviation = std::max({residual(h_drive, upup, -delta + root),
                                    residual(h_drive, dndn, -delta - root),
                                    residual(h_drive, mixed, -delta)});

    // Interaction spectrum {V, 0, 0} in the symmetric subspace.
    Eigen::Matrix3cd h_int = Eigen::Matrix3cd::Zero();
    h_int(2, 2) = v.v;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es_int(h_int);
    Eigen::Vector3d expected_int(0, 0, v.v);
    std::sort(expected_int.data(), expected_int.data() + 3);
    rep.interaction_deviation = (es_int.eigenvalues() - expected_int).cwiseAbs().maxCoeff();

    // S_theta projected into the interaction zero-eigenvalue subspace
    // {|1,1>, |b>}: 2x2 with eigenpairs set by Theta.
    Eigen::Matrix2cd proj;  // basis order {|b>, |1,1>}
    proj << 0, std::sin(theta) / std::sqrt(2.0),
            std::sin(theta) / std::sqrt(2.0), -std::cos(theta);
    const double croot = 0.5 * std::sqrt(std::cos(theta) * std::cos(theta) +
                                         2.0 * std::sin(theta) * std::sin(theta));
    const double big_theta = std::atan2(std::sqrt(2.0) * omega, -delta);
    Eigen::Vector2cd upper, lower;
    upper << std::cos(0.5 * big_theta), std::sin(0.5 * big_theta);
    lower << -std::sin(0.5 * big_theta), std::cos(0.5 * big_theta);
    auto residual2 = [&](const Eigen::Vector2cd& vec, double value) {
        return (proj * vec - value * vec).norm();
    };
    rep.projected_deviation = std::max(residual2(upper, -0.5 * std::cos(theta) + croot),
                                       residual2(lower, -0.5 * std::cos(theta) - croot));

    rep.max_deviation = std::max({rep.drive_deviation, rep.interaction_deviation,
                                  rep.projected_deviation});
    return rep;
}

RegimeReport classify_regime(const EffectiveParams& p, const InteractionSpec& v, double rho) {
    RegimeReport rep;
    const double omega = std::abs(p.rabi);
    if (v.v == 0) {
        rep.regime = BlockadeRegime::weak;
        rep.v_is_zero = true;
        rep.ratio = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.ratio = omega / std::abs(v.v);
    if (rep.ratio <= rho) {
        rep.regime = BlockadeRegime::strong;
    } else if (rep.ratio >= 1.0 / rho) {
        rep.regime = BlockadeRegime::weak;
    } else {
        rep.regime = BlockadeRegime::intermediate;
    }
    return rep;
}

const char* regime_name(BlockadeRegime r) {
    switch (r) {
        case BlockadeRegime::strong: return "strong";
        case BlockadeRegime::intermediate: return "intermediate";
        case BlockadeRegime::weak: return "weak";
    }
    return "unknown";
}

const char* branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

Branch branch_from_name(const std::string& name) {
    if (name == "plus" || name == "+") return Branch::plus;
    if (name == "minus" || name == "-") return Branch::minus;
    throw std::invalid_argument("unknown branch name: " + name);
}

}  // namespace rydgate
