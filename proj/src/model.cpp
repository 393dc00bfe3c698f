#include "rydgate/model.hpp"

#include <cmath>

namespace rydgate {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

}  // namespace

InteractionSpec InteractionSpec::from_energy(double v) {
    require_finite(v, "interaction energy");
    return InteractionSpec{v};
}

InteractionSpec InteractionSpec::from_c6(double c6, double r) {
    require_finite(c6, "C6");
    if (!(r > 0)) {
        throw std::invalid_argument("separation must be positive");
    }
    return InteractionSpec{c6 / std::pow(r, 6)};
}

std::pair<double, double> TwoAtomState::rydberg_populations() const {
    double p1 = 0, p2 = 0;
    for (int b = 0; b < kAtomDim; ++b) {
        p1 += std::norm(amplitudes(pair_index(kLevelR, b)));
        p2 += std::norm(amplitudes(pair_index(b, kLevelR)));
    }
    return {p1, p2};
}

TwoAtomState TwoAtomState::basis(int index) {
    TwoAtomState s;
    s.amplitudes(index) = 1.0;
    return s;
}

TwoAtomState TwoAtomState::computational(int q1, int q2) {
    return basis(pair_index(q1, q2));
}

TwoAtomState TwoAtomState::bright() {
    TwoAtomState s;
    s.amplitudes = bright_state();
    return s;
}

TwoAtomState TwoAtomState::dark() {
    TwoAtomState s;
    s.amplitudes = dark_state();
    return s;
}

Vector9cd bright_state() {
    Vector9cd v = Vector9cd::Zero();
    v(kIdx1R) = 1.0 / std::sqrt(2.0);
    v(kIdxR1) = 1.0 / std::sqrt(2.0);
    return v;
}

Vector9cd dark_state() {
    Vector9cd v = Vector9cd::Zero();
    v(kIdx1R) = 1.0 / std::sqrt(2.0);
    v(kIdxR1) = -1.0 / std::sqrt(2.0);
    return v;
}

Eigen::Matrix3cd single_atom_hamiltonian(const EffectiveParams& p) {
    require_finite(p.rabi, "rabi");
    require_finite(p.detuning, "detuning");
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(kLevelR, kLevelR) = -p.detuning;
    h(kLevelR, kLevel1) = 0.5 * p.rabi;
    h(kLevel1, kLevelR) = 0.5 * p.rabi;
    return h;
}

Matrix9cd two_atom_hamiltonian(const EffectiveParams& p, const InteractionSpec& v) {
    require_finite(v.v, "interaction energy");
    const Eigen::Matrix3cd h1 = single_atom_hamiltonian(p);
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    Matrix9cd h = Matrix9cd::Zero();
    // H_1 acts on each atom regardless of the partner level; combined with
    // the projector decomposition of Eq-style H this is
    // H1 x 1 + 1 x H1 + V|rr><rr| because |0> and |1> rows of H1 are zero.
    for (int a = 0; a < kAtomDim; ++a) {
        for (int b = 0; b < kAtomDim; ++b) {
            for (int c = 0; c < kAtomDim; ++c) {
                h(pair_index(a, b), pair_index(c, b)) += h1(a, c);
                h(pair_index(b, a), pair_index(b, c)) += h1(a, c);
            }
        }
    }
    h(kIdxRR, kIdxRR) += v.v;
    return h;
}

Eigen::Matrix2cd perfect_blockade_hamiltonian(const EffectiveParams& p) {
    Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
    h(1, 1) = -p.detuning;
    h(0, 1) = 0.5 * std::sqrt(2.0) * p.rabi;
    h(1, 0) = 0.5 * std::sqrt(2.0) * p.rabi;
    return h;
}

EffectiveParams adiabatic_elimination(const TwoPhotonScheme& s) {
    require_finite(s.rabi_1a, "rabi_1a");
    require_finite(s.rabi_ar, "rabi_ar");
    require_finite(s.delta_1a, "delta_1a");
    require_finite(s.delta_ar, "delta_ar");
    if (s.decay_a < 0 || s.decay_r < 0) {
        throw std::invalid_argument("decay rates must be nonnegative");
    }
    if (s.delta_1a == 0 || s.delta_ar == 0) {
        throw std::domain_error("adiabatic elimination requires nonzero detunings");
    }

    EffectiveParams p;
    p.rabi = s.rabi_1a * s.rabi_ar / (2.0 * s.delta_1a);
    p.shift_1 = s.rabi_1a * s.rabi_1a / (4.0 * s.delta_1a);
    p.shift_r = -s.rabi_ar * s.rabi_ar / (4.0 * s.delta_ar);
    // Second-order shifts move |1> by +shift_1 and |r> by +shift_r, so the
    // effective detuning gains shift_1 - shift_r (not their sum).
    p.detuning = s.delta_1a + s.delta_ar + p.shift_1 - p.shift_r;
    p.decay_1 = s.rabi_1a * s.rabi_1a / (4.0 * s.delta_1a * s.delta_1a) * s.decay_a;
    p.decay_r = s.rabi_ar * s.rabi_ar / (4.0 * s.delta_ar * s.delta_ar) * s.decay_a + s.decay_r;
    p.decay_1r = s.rabi_ar * s.rabi_1a / (4.0 * s.delta_1a * s.delta_1a) * s.decay_a;
    p.elimination_ratio = std::abs(s.rabi_1a) / std::abs(s.delta_1a);
    p.elimination_ok = p.elimination_ratio <= s.elimination_threshold;
    return p;
}

EffectiveParams effective_params(const ExcitationScheme& s) {
    if (const auto* one = std::get_if<OnePhotonScheme>(&s)) {
        if (one->decay_r < 0) {
            throw std::invalid_argument("decay rates must be nonnegative");
        }
        EffectiveParams p;
        p.rabi = one->rabi;
        p.detuning = one->detuning;
        p.decay_r = one->decay_r;
        return p;
    }
    return adiabatic_elimination(std::get<TwoPhotonScheme>(s));
}

Eigen::Matrix3cd atom_scattering_matrix(const EffectiveParams& p) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(kLevel1, kLevel1) = p.decay_1;
    m(kLevelR, kLevelR) = p.decay_r;
    m(kLevel1, kLevelR) = p.decay_1r;
    m(kLevelR, kLevel1) = p.decay_1r;
    return m;
}

Matrix9cd decay_generator(const EffectiveParams& p) {
    const Eigen::Matrix3cd d = atom_scattering_matrix(p);
    Matrix9cd sum = Matrix9cd::Zero();
    for (int a = 0; a < kAtomDim; ++a) {
        for (int b = 0; b < kAtomDim; ++b) {
            for (int c = 0; c < kAtomDim; ++c) {
                sum(pair_index(a, b), pair_index(c, b)) += d(a, c);
                sum(pair_index(b, a), pair_index(b, c)) += d(a, c);
            }
        }
    }
    return cdouble(0, -0.5) * sum;
}

Matrix9cd decay_generator(const ExcitationScheme& s) {
    return decay_generator(effective_params(s));
}

Eigen::Matrix3cd symmetric_block_scattering(const EffectiveParams& p) {
    const double s2 = std::sqrt(2.0);
    Eigen::Matrix3cd m;
    m << 2.0 * p.decay_1, s2 * p.decay_1r, 0,
         s2 * p.decay_1r, p.decay_1 + p.decay_r, s2 * p.decay_1r,
         0, s2 * p.decay_1r, 2.0 * p.decay_r;
    return m;
}

Eigen::Matrix2cd single_excitation_scattering(const EffectiveParams& p) {
    Eigen::Matrix2cd m;
    m << p.decay_1, p.decay_1r,
         p.decay_1r, p.decay_r;
    return m;
}

Matrix9cd swap_operator() {
    Matrix9cd s = Matrix9cd::Zero();
    for (int a = 0; a < kAtomDim; ++a) {
        for (int b = 0; b < kAtomDim; ++b) {
            s(pair_index(b, a), pair_index(a, b)) = 1.0;
        }
    }
    return s;
}

double effective_rabi_scale(const ExcitationScheme& s) {
    return std::abs(effective_params(s).rabi);
}

}  // namespace rydgate
