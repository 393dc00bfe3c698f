#ifndef RYDGATE_SPECTRUM_HPP
#define RYDGATE_SPECTRUM_HPP

#include <array>
#include <string>
#include <vector>

#include "rydgate/model.hpp"

namespace rydgate {

// Dressed-state branch label. "plus" is the branch adiabatically connected
// to |1,1> (resp. |1>) from large positive detuning, "minus" from large
// negative detuning; in the perfect-blockade closed form these are the +/-
// roots. The sign convention is fixed by the |1,1>-continuous branch.
enum class Branch { plus, minus };

inline int branch_sign(Branch b) { return b == Branch::plus ? +1 : -1; }

// Symmetry-resolved eigendecomposition of the two-atom Hamiltonian. Blocks:
//   0: {|0,0>}
//   1: {|0,1>, |0,r>}
//   2: {|1,0>, |r,0>}
//   3: {|1,1>, |b>, |r,r>}   (symmetric one/two-excitation sector)
//   4: {|d>}
struct BlockSpectrum {
    std::string name;
    std::vector<int> basis_indices;     // product-basis composition labels
    Eigen::VectorXd eigenvalues;        // ascending within the block
    Eigen::MatrixXcd eigenvectors;      // columns, block-local coordinates
    Eigen::MatrixXcd basis;             // 9 x dim embedding of the block basis
};

struct DressedSpectrum {
    std::array<BlockSpectrum, 5> blocks;

    Eigen::VectorXd all_eigenvalues() const;  // concatenated block order
};

DressedSpectrum dressed_spectrum(const EffectiveParams& p, const InteractionSpec& v);

// Symmetric-sector Hamiltonian on {|1,1>, |b>, |r,r>}.
Eigen::Matrix3cd symmetric_block_hamiltonian(const EffectiveParams& p, const InteractionSpec& v);

// Single-excitation Hamiltonian on {|1>, |r>} (equals the {|0,1>,|0,r>} block).
Eigen::Matrix2cd single_excitation_hamiltonian(const EffectiveParams& p);

struct ContinuationOptions {
    int coarse_steps = 400;           // detuning path resolution
    double refine_overlap = 0.5;      // refine a step below this |<v|v'>|^2
    int max_refine_depth = 24;
    double sharp_ratio = 0.35;        // hbar*Omega/|V| below which the
                                      // anti-blockade crossing is jumped
    double degenerate_gap = 1e-6;     // flag threshold, reference units
};

struct EntanglingEnergyResult {
    double kappa = 0;            // (E_LS(2) - 2 E_LS(1)) / hbar
    Branch branch = Branch::minus;
    double p11 = 0, pb = 0, prr = 0;  // dressed |1~,1~> populations
    double e_two_atom = 0;       // E_LS(2)
    double e_one_atom = 0;       // E_LS(1)
    double min_gap = 0;          // gap to nearest branch at the target point
    bool degenerate = false;     // anti-blockade / gap-collapse flag
};

// Exact entangling energy from the symmetric-sector eigenproblem, branch
// selected by detuning continuation of the |1,1>-dominant eigenvector.
EntanglingEnergyResult entangling_energy(const EffectiveParams& p, const InteractionSpec& v,
                                         Branch branch,
                                         const ContinuationOptions& opt = {});

// Perfect-blockade closed form
//   kappa = Delta/2 +- (sqrt(2 Omega^2 + Delta^2) - 2 sqrt(Omega^2 + Delta^2))/2.
double kappa_perfect_blockade(const EffectiveParams& p, Branch branch);

// Weak-blockade asymptote hbar*kappa = ((1 +- cos(theta))/2)^2 V.
double kappa_weak_asymptote(double theta, const InteractionSpec& v, Branch branch);

// Mixing angle theta in [0, pi] with tan(theta) = |Omega|/(-Delta).
double mixing_angle(const EffectiveParams& p);

// Collective angle with tan(Theta) = sqrt(2)|Omega|/(-Delta).
double collective_mixing_angle(const EffectiveParams& p);

// Numerical check of the closed-form eigensystems: single-atom drive
// eigenpairs, interaction spectrum {V, 0, 0}, and the drive operator
// projected into the interaction zero-eigenvalue subspace.
struct TableOracleReport {
    double drive_deviation = 0;       // atom-light eigensystem
    double interaction_deviation = 0; // V|rr><rr| spectrum
    double projected_deviation = 0;   // projected S_theta eigensystem
    double max_deviation = 0;
};

TableOracleReport table_oracles(const EffectiveParams& p, const InteractionSpec& v);

enum class BlockadeRegime { strong, intermediate, weak };

struct RegimeReport {
    BlockadeRegime regime = BlockadeRegime::weak;
    double ratio = 0;       // hbar*Omega_eff / |V|
    bool v_is_zero = false; // weak by convention
};

RegimeReport classify_regime(const EffectiveParams& p, const InteractionSpec& v,
                             double rho = 0.2);

const char* regime_name(BlockadeRegime r);
const char* branch_name(Branch b);
Branch branch_from_name(const std::string& name);

}  // namespace rydgate

#endif
