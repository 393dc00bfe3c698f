#include "rydgate/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rydgate/spectrum.hpp"

namespace rydgate {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

struct Stepper {
    const MatrixGenerator& generator;
    Eigen::MatrixXcd h;
    Eigen::VectorXcd k1, k2, k3, k4, k5, k6, k7, tmp, err;

    explicit Stepper(const MatrixGenerator& gen, Eigen::Index dim) : generator(gen) {
        h.resize(dim, dim);
        for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp, &err}) v->resize(dim);
    }

    void rhs(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        generator(t, h);
        dy.noalias() = h * y;
        dy *= cdouble(0, -1);
    }

    // One DP5(4) attempt from (t, y) with step dt; y5 receives the
    // fifth-order result, returns the embedded error norm. k1 must hold
    // rhs(t, y) on entry (FSAL).
    double attempt(double t, const Eigen::VectorXcd& y, double dt, Eigen::VectorXcd& y5) {
        tmp = y + dt * kA21 * k1;
        rhs(t + kC2 * dt, tmp, k2);
        tmp = y + dt * (kA31 * k1 + kA32 * k2);
        rhs(t + kC3 * dt, tmp, k3);
        tmp = y + dt * (kA41 * k1 + kA42 * k2 + kA43 * k3);
        rhs(t + kC4 * dt, tmp, k4);
        tmp = y + dt * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
        rhs(t + kC5 * dt, tmp, k5);
        tmp = y + dt * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
        rhs(t + dt, tmp, k6);
        y5 = y + dt * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
        rhs(t + dt, y5, k7);
        err = dt * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
        return err.norm();
    }
};

void record_sample(Trajectory& traj, double t, const Eigen::VectorXcd& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.norms.push_back(y.norm());
    if (y.size() == kPairDim) {
        TwoAtomState s;
        s.amplitudes = y;
        const auto [p1, p2] = s.rydberg_populations();
        traj.rydberg_1.push_back(p1);
        traj.rydberg_2.push_back(p2);
    }
}

}  // namespace

std::vector<double> uniform_samples(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("need at least two samples");
    std::vector<double> t(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        t[static_cast<size_t>(k)] = a + (b - a) * static_cast<double>(k) / (n - 1);
    }
    t.back() = b;
    return t;
}

Trajectory propagate(const MatrixGenerator& generator, const Eigen::VectorXcd& psi0,
                     double t_begin, double t_end, double tol,
                     const std::vector<double>& sample_times) {
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    if (!(t_end > t_begin)) throw std::invalid_argument("need t_end > t_begin");
    for (double ts : sample_times) {
        if (ts < t_begin || ts > t_end) {
            throw std::invalid_argument("sample time outside propagation window");
        }
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw std::invalid_argument("sample times must be sorted");
    }

    Trajectory traj;
    Stepper st(generator, psi0.size());
    Eigen::VectorXcd y = psi0;
    Eigen::VectorXcd y_next(psi0.size());

    const double span = t_end - t_begin;
    const double t_eps = 1e-14 * std::max(std::abs(t_begin), std::abs(t_end)) + 1e-300;
    double t = t_begin;
    size_t next_sample = 0;
    while (next_sample < sample_times.size() &&
           sample_times[next_sample] <= t_begin + t_eps) {
        record_sample(traj, t_begin, y);
        ++next_sample;
    }

    st.rhs(t, y, st.k1);
    double dt = std::min(span, 1e-2 * span);
    const double rate = st.k1.norm();
    if (rate > 0) dt = std::min(dt, 0.1 / rate);

    const double dt_min = 1e-14 * span;
    while (t < t_end - t_eps) {
        double target = t_end;
        if (next_sample < sample_times.size()) target = sample_times[next_sample];
        bool hits_target = false;
        if (t + dt >= target - t_eps) {
            dt = target - t;
            hits_target = true;
        }
        const double err = st.attempt(t, y, dt, y_next);
        const double budget = tol * dt;
        if (err <= budget) {
            t = hits_target ? target : t + dt;
            y.swap(y_next);
            st.k1.swap(st.k7);  // FSAL
            ++traj.steps_accepted;
            while (next_sample < sample_times.size() &&
                   std::abs(t - sample_times[next_sample]) <= t_eps) {
                record_sample(traj, t, y);
                ++next_sample;
            }
        } else {
            ++traj.steps_rejected;  // k1 still holds rhs(t, y)
        }
        const double grow = err > 0 ? 0.9 * std::pow(budget / err, 0.25) : 5.0;
        dt *= std::clamp(grow, 0.2, 5.0);
        if (dt < dt_min) throw StiffnessError(t);
    }
    return traj;
}

Trajectory propagate(const MatrixGenerator& generator, const Eigen::VectorXcd& psi0,
                     double t_begin, double t_end, double tol, int samples) {
    return propagate(generator, psi0, t_begin, t_end, tol,
                     uniform_samples(t_begin, t_end, samples));
}

Trajectory propagate(const EffectiveDrive& drive, const InteractionSpec& v,
                     const TwoAtomState& psi0, double tol, int samples) {
    return propagate(two_atom_generator(drive, v), psi0.amplitudes, drive.t_begin,
                     drive.t_end, tol, samples);
}

MatrixGenerator two_atom_generator(const EffectiveDrive& drive, const InteractionSpec& v) {
    const bool decay_on = drive.decay_on;
    auto at = drive.at;
    return [at, v, decay_on](double t, Eigen::MatrixXcd& h) {
        const EffectiveParams p = at(t);
        h = two_atom_hamiltonian(p, v);
        if (decay_on) h += decay_generator(p);
    };
}

MatrixGenerator symmetric_sector_generator(const EffectiveDrive& drive,
                                           const InteractionSpec& v) {
    const bool decay_on = drive.decay_on;
    auto at = drive.at;
    return [at, v, decay_on](double t, Eigen::MatrixXcd& h) {
        const EffectiveParams p = at(t);
        h = symmetric_block_hamiltonian(p, v);
        if (decay_on) h += cdouble(0, -0.5) * symmetric_block_scattering(p);
    };
}

MatrixGenerator single_sector_generator(const EffectiveDrive& drive) {
    const bool decay_on = drive.decay_on;
    auto at = drive.at;
    return [at, decay_on](double t, Eigen::MatrixXcd& h) {
        const EffectiveParams p = at(t);
        h = single_excitation_hamiltonian(p);
        if (decay_on) h += cdouble(0, -0.5) * single_excitation_scattering(p);
    };
}

MatrixGenerator dark_sector_generator(const EffectiveDrive& drive) {
    const bool decay_on = drive.decay_on;
    auto at = drive.at;
    return [at, decay_on](double t, Eigen::MatrixXcd& h) {
        const EffectiveParams p = at(t);
        h.resize(1, 1);
        h(0, 0) = -p.detuning;
        if (decay_on) h(0, 0) += cdouble(0, -0.5) * (p.decay_1 + p.decay_r);
    };
}

double integrate_samples(const std::vector<double>& t, const std::vector<double>& f) {
    const size_t n = t.size();
    if (n != f.size() || n < 2) throw std::invalid_argument("bad quadrature samples");
    double total = 0;
    size_t k = 0;
    // Composite Simpson over uniform pairs, trapezoid for a leftover panel.
    while (k + 2 < n) {
        const double h1 = t[k + 1] - t[k];
        const double h2 = t[k + 2] - t[k + 1];
        if (std::abs(h1 - h2) < 1e-9 * (h1 + h2)) {
            total += (h1 + h2) / 6.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
            k += 2;
        } else {
            total += 0.5 * h1 * (f[k] + f[k + 1]);
            k += 1;
        }
    }
    while (k + 1 < n) {
        total += 0.5 * (t[k + 1] - t[k]) * (f[k] + f[k + 1]);
        k += 1;
    }
    return total;
}

double integrated_rydberg_population(const Trajectory& traj) {
    const size_t n = traj.times.size();
    if (n < 2) throw std::invalid_argument("trajectory has too few samples");
    if (traj.rydberg_1.size() != n) {
        throw std::invalid_argument("trajectory lacks Rydberg populations");
    }
    std::vector<double> f(n);
    for (size_t k = 0; k < n; ++k) f[k] = traj.rydberg_1[k] + traj.rydberg_2[k];
    return integrate_samples(traj.times, f);
}

double integrated_rydberg_population_checked(const EffectiveDrive& drive,
                                             const InteractionSpec& v,
                                             const TwoAtomState& psi0, double tol,
                                             int samples, double rel_tol) {
    const Trajectory coarse = propagate(drive, v, psi0, tol, samples);
    const Trajectory fine = propagate(drive, v, psi0, tol, 2 * samples - 1);
    const double a = integrated_rydberg_population(coarse);
    const double b = integrated_rydberg_population(fine);
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    if (std::abs(a - b) > rel_tol * scale) {
        throw std::runtime_error("Rydberg-population quadrature not converged");
    }
    return b;
}

AdiabaticityReport adiabaticity_monitor(const Trajectory& traj,
                                        const MatrixGenerator& hamiltonian) {
    AdiabaticityReport rep;
    if (traj.states.empty()) return rep;
    const Eigen::Index dim = traj.states.front().size();
    Eigen::MatrixXcd h(dim, dim);
    Eigen::VectorXcd branch;
    rep.overlaps.reserve(traj.states.size());
    rep.score = 1.0;
    for (size_t k = 0; k < traj.states.size(); ++k) {
        hamiltonian(traj.times[k], h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        const Eigen::VectorXcd& ref =
            k == 0 ? traj.states.front() : branch;
        int best = 0;
        double best_ov = -1;
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double ov = std::norm(ref.dot(es.eigenvectors().col(j))) /
                              std::max(ref.squaredNorm(), 1e-300);
            if (ov > best_ov) {
                best_ov = ov;
                best = static_cast<int>(j);
            }
        }
        branch = es.eigenvectors().col(best);
        const double n2 = traj.states[k].squaredNorm();
        const double overlap = std::norm(branch.dot(traj.states[k])) / std::max(n2, 1e-300);
        rep.overlaps.push_back(overlap);
        rep.score = std::min(rep.score, overlap);
    }
    return rep;
}

}  // namespace rydgate
