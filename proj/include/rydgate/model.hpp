#ifndef RYDGATE_MODEL_HPP
#define RYDGATE_MODEL_HPP

#include <complex>
#include <stdexcept>
#include <variant>

#include <Eigen/Dense>

// Two interacting three-level atoms {|0>, |1>, |r>} driven symmetrically on
// the |1> <-> |r> leg. Everything is expressed in reference units: hbar = 1,
// energies are angular frequencies relative to a caller-chosen scale
// (conventionally the peak effective Rabi frequency), times are inverse
// angular frequencies.

namespace rydgate {

using cdouble = std::complex<double>;
using Matrix9cd = Eigen::Matrix<cdouble, 9, 9>;
using Vector9cd = Eigen::Matrix<cdouble, 9, 1>;

// Single-atom level indices and the lexicographic two-atom product order.
// Index of |a,b> is 3*a + b; this ordering is part of the file-format
// contract and must not change.
enum Level : int { kLevel0 = 0, kLevel1 = 1, kLevelR = 2 };

constexpr int kAtomDim = 3;
constexpr int kPairDim = 9;

constexpr int pair_index(int a, int b) { return kAtomDim * a + b; }

constexpr int kIdx00 = pair_index(kLevel0, kLevel0);
constexpr int kIdx01 = pair_index(kLevel0, kLevel1);
constexpr int kIdx0R = pair_index(kLevel0, kLevelR);
constexpr int kIdx10 = pair_index(kLevel1, kLevel0);
constexpr int kIdx11 = pair_index(kLevel1, kLevel1);
constexpr int kIdx1R = pair_index(kLevel1, kLevelR);
constexpr int kIdxR0 = pair_index(kLevelR, kLevel0);
constexpr int kIdxR1 = pair_index(kLevelR, kLevel1);
constexpr int kIdxRR = pair_index(kLevelR, kLevelR);

// One-photon |1> <-> |r> coupling; the effective drive is the bare drive.
struct OnePhotonScheme {
    double rabi = 0;       // Omega_1r
    double detuning = 0;   // Delta_1r
    double decay_r = 0;    // Gamma_r
};

// Two-photon |1> <-> |a> <-> |r| ladder, used only through adiabatic
// elimination of |a>.
struct TwoPhotonScheme {
    double rabi_1a = 0;    // Omega_1a
    double rabi_ar = 0;    // Omega_ar
    double delta_1a = 0;   // Delta_1a
    double delta_ar = 0;   // Delta_ar
    double decay_a = 0;    // Gamma_a
    double decay_r = 0;    // Gamma_r
    double elimination_threshold = 0.2;  // max Omega_1a/|Delta_1a|
};

using ExcitationScheme = std::variant<OnePhotonScheme, TwoPhotonScheme>;

// Effective two-level drive parameters plus the scattering rates feeding the
// non-Hermitian decay model.
struct EffectiveParams {
    double rabi = 0;         // Omega_eff
    double detuning = 0;     // Delta_eff
    double shift_1 = 0;      // delta_1, light shift of |1>
    double shift_r = 0;      // delta_r, light shift of |r>
    double decay_1 = 0;      // gamma_1
    double decay_r = 0;      // gamma_r
    double decay_1r = 0;     // gamma_1r coherence coupling
    bool elimination_ok = true;
    double elimination_ratio = 0;  // Omega_1a/|Delta_1a| for two-photon input
};

// Pair interaction energy V (hbar * angular frequency). Sign free.
struct InteractionSpec {
    double v = 0;

    static InteractionSpec from_energy(double v);
    // Van der Waals pair energy V = C6 / R^6 at separation R.
    static InteractionSpec from_c6(double c6, double r);
};

// Complex amplitudes over the ordered product basis; norm <= 1 under decay.
struct TwoAtomState {
    Vector9cd amplitudes = Vector9cd::Zero();
    double time = 0;

    double norm() const { return amplitudes.norm(); }
    // Per-atom Rydberg populations (P_r^(1), P_r^(2)).
    std::pair<double, double> rydberg_populations() const;

    static TwoAtomState basis(int index);
    // Computational state |q1,q2> with q in {0,1}.
    static TwoAtomState computational(int q1, int q2);
    static TwoAtomState bright();
    static TwoAtomState dark();
};

Vector9cd bright_state();
Vector9cd dark_state();

// H_1 on {|0>,|1>,|r>}: -Delta_eff |r><r| + Omega_eff/2 (|r><1| + |1><r|),
// |0> inert.
Eigen::Matrix3cd single_atom_hamiltonian(const EffectiveParams& p);

// H = H_1 x |0><0| + |0><0| x H_1 + H_11 with V on |r,r><r,r|.
Matrix9cd two_atom_hamiltonian(const EffectiveParams& p, const InteractionSpec& v);

// Perfect-blockade reduction on {|1,1>, |b>}.
Eigen::Matrix2cd perfect_blockade_hamiltonian(const EffectiveParams& p);

// Effective parameters for the two-photon ladder. Throws std::domain_error
// on zero intermediate/upper detuning. Sets elimination_ok = false (warn,
// not error) when Omega_1a/|Delta_1a| exceeds the scheme threshold.
EffectiveParams adiabatic_elimination(const TwoPhotonScheme& s);

// Effective parameters for either excitation variant.
EffectiveParams effective_params(const ExcitationScheme& s);

// Per-atom sum_mu L_mu^dag L_mu on {|0>,|1>,|r>}; positive semidefinite.
Eigen::Matrix3cd atom_scattering_matrix(const EffectiveParams& p);

// -(i/2) sum_mu L_mu^dag L_mu over both atoms (anti-Hermitian part of H_eff).
Matrix9cd decay_generator(const EffectiveParams& p);
Matrix9cd decay_generator(const ExcitationScheme& s);

// sum L^dag L restricted to the symmetric sector {|1,1>, |b>, |r,r>}.
Eigen::Matrix3cd symmetric_block_scattering(const EffectiveParams& p);

// sum L^dag L restricted to a single-excitation sector {|1>, |r>}; also the
// decay seen by the dark state through its diagonal.
Eigen::Matrix2cd single_excitation_scattering(const EffectiveParams& p);

// Atom-exchange swap on the product basis.
Matrix9cd swap_operator();

// Peak effective Rabi frequency of a scheme (two-photon: at rabi_1a).
double effective_rabi_scale(const ExcitationScheme& s);

}  // namespace rydgate

#endif
