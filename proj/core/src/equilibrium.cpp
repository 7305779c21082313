#include "sisopt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sisopt {

namespace {

void check_state(const SisModel& model, const Strategy& eta, std::span<const double> g) {
    const std::size_t n = model.size();
    if (eta.size() != n || g.size() != n)
        throw DimensionMismatch("state/strategy size does not match the model");
    for (std::size_t i = 0; i < n; ++i)
        if (!(g[i] >= -1e-12 && g[i] <= 1.0 + 1e-12))
            throw OutOfRangeState("state entry outside [0,1]: " + std::to_string(g[i]));
}

// T_i = sum_j k_ij eta_j g_j mu_j
void infection_pressure(const SisModel& model, const Strategy& eta,
                        std::span<const double> g, std::vector<double>& T) {
    const std::size_t n = model.size();
    const auto& mu = model.space.weights;
    std::vector<double> scaled(n);
    for (std::size_t j = 0; j < n; ++j)
        scaled[j] = eta[j] * g[j] * mu[j];
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = model.transmission.entries.data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += row[j] * scaled[j];
        T[i] = acc;
    }
}

double fraction_of(const SisModel& model, const Strategy& eta,
                   const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i)
        s += g[i] * eta[i] * model.space.weights[i];
    return s;
}

// rho of the operator with kernel kk_ij eta_j (1-g_j): the maximality
// criterion R_e[kk eta](1 - g) <= 1
double maximality_rho(const SisModel& model, const Strategy& eta,
                      const std::vector<double>& g, const PerronOptions& popts) {
    Strategy damped = eta;
    for (std::size_t j = 0; j < model.size(); ++j)
        damped[j] = eta[j] * (1.0 - g[j]);
    return spectral_radius(model.next_gen, damped, popts);
}

} // namespace

std::vector<double> vector_field(const SisModel& model, const Strategy& eta,
                                 std::span<const double> g) {
    check_state(model, eta, g);
    const std::size_t n = model.size();
    std::vector<double> T(n), F(n);
    infection_pressure(model, eta, g, T);
    for (std::size_t i = 0; i < n; ++i)
        F[i] = (1.0 - g[i]) * T[i] - model.gamma[i] * g[i];
    return F;
}

Trajectory integrate_sis(const SisModel& model, const Strategy& eta,
                         std::span<const double> u0, double t_end, double dt,
                         std::size_t max_samples) {
    check_state(model, eta, u0);
    if (t_end < 0.0)
        throw ValidationError("t_end must be >= 0");
    const std::size_t n = model.size();
    const auto& mu = model.space.weights;
    if (dt <= 0.0) {
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                row += model.transmission(i, j) * mu[j];
            scale = std::max(scale, model.gamma[i] + row);
        }
        dt = scale > 0.0 ? 0.05 / scale : 0.05;
    }
    std::size_t steps = t_end > 0.0 ? static_cast<std::size_t>(std::ceil(t_end / dt)) : 0;
    if (steps > 0)
        dt = t_end / static_cast<double>(steps);

    std::vector<double> u(u0.begin(), u0.end());
    std::vector<double> T(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto deriv = [&](const std::vector<double>& state, std::vector<double>& out) {
        infection_pressure(model, eta, state, T);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = (1.0 - state[i]) * T[i] - model.gamma[i] * state[i];
    };

    Trajectory traj;
    traj.dt = dt;
    const std::size_t stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, max_samples - 1));
    traj.times.push_back(0.0);
    traj.states.push_back(u);

    for (std::size_t s = 1; s <= steps; ++s) {
        deriv(u, k1);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + 0.5 * dt * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + 0.5 * dt * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + dt * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            double next = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            double clamped = std::clamp(next, 0.0, 1.0);
            traj.max_clamp = std::max(traj.max_clamp, std::abs(next - clamped));
            u[i] = clamped;
        }
        if (traj.max_clamp > 1e-10)
            throw StepTooLarge("clamping distance " + std::to_string(traj.max_clamp) +
                               " exceeds 1e-10; reduce dt");
        if (s % stride == 0 || s == steps) {
            traj.times.push_back(static_cast<double>(s) * dt);
            traj.states.push_back(u);
        }
    }
    return traj;
}

Equilibrium solve_equilibrium(const SisModel& model, const Strategy& eta,
                              const EquilibriumOptions& opts) {
    eta.validate();
    const std::size_t n = model.size();
    if (eta.size() != n)
        throw DimensionMismatch("strategy size does not match the model");
    const auto& gamma = model.gamma;

    Equilibrium eq;
    eq.g.assign(n, 1.0);
    std::vector<double> T(n), gn(n);
    bool done = false;
    bool supercritical_known = false;
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        // near the threshold the iteration slows down to O(1/k); a stalled
        // run is decided through the characterization g = 0 iff R_e <= 1
        if (it == 2000 && !supercritical_known) {
            const double rho = spectral_radius(model.next_gen, eta, opts.perron);
            if (rho <= 1.0 + 1e-12) {
                eq.g.assign(n, 0.0);
                eq.iterations = it;
                eq.residual = 0.0;
                done = true;
                break;
            }
            supercritical_known = true;
        }
        infection_pressure(model, eta, eq.g, T);

        // Collatz-Wielandt bound: if T_i <= theta gamma_i g_i with theta < 1
        // for every site, the iterates are dominated by theta^m g and the
        // limit is the disease-free state
        double theta = 0.0;
        bool theta_valid = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (eq.g[i] > 0.0)
                theta = std::max(theta, T[i] / (gamma[i] * eq.g[i]));
            else if (T[i] > 0.0)
                theta_valid = false;
        }
        if (theta_valid && theta < 1.0 - 1e-12) {
            eq.g.assign(n, 0.0);
            eq.iterations = it;
            eq.residual = 0.0;
            done = true;
            break;
        }

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gn[i] = T[i] / (gamma[i] + T[i]);
            if (gn[i] > eq.g[i] + 1e-13)
                throw MonotonicityViolation("fixed-point iterate increased at site " +
                                            std::to_string(i));
            change = std::max(change, std::abs(gn[i] - eq.g[i]));
        }
        eq.g = gn;
        eq.iterations = it;
        if (change < opts.tol_fix) {
            infection_pressure(model, eta, eq.g, T);
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                res = std::max(res, std::abs((1.0 - eq.g[i]) * T[i] - gamma[i] * eq.g[i]));
            eq.residual = res;
            if (res <= opts.tol_fix) {
                done = true;
                break;
            }
        }
    }
    eq.converged = done;
    eq.infected_fraction = fraction_of(model, eta, eq.g);
    if (opts.certify && done) {
        eq.maximality_certificate = maximality_rho(model, eta, eq.g, opts.perron);
        if (eq.maximality_certificate > 1.0 + opts.certificate_tol)
            throw MaximalityUncertified("maximality certificate " +
                                        std::to_string(eq.maximality_certificate) +
                                        " exceeds 1");
    }
    return eq;
}

Equilibrium maximal_equilibrium(const SisModel& model, const Strategy& eta,
                                const EquilibriumOptions& opts) {
    Equilibrium eq = solve_equilibrium(model, eta, opts);
    if (!eq.converged)
        throw EquilibriumNoConvergence(
            "fixed-point iteration hit the cap of " + std::to_string(opts.max_iter) +
                " iterations (residual " + std::to_string(eq.residual) + ")",
            eq);
    return eq;
}

double infected_fraction(const SisModel& model, const Strategy& eta,
                         const EquilibriumOptions& opts) {
    return maximal_equilibrium(model, eta, opts).infected_fraction;
}

Strategy equilibrium_strategy(const SisModel& model, const EquilibriumOptions& opts) {
    Equilibrium eq = maximal_equilibrium(model, Strategy::ones(model.size()), opts);
    Strategy s = Strategy::zeros(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
        s[i] = 1.0 - eq.g[i];
    return s;
}

StabilityResult linear_stability(const SisModel& model, const Strategy& eta,
                                 std::span<const double> h, const PerronOptions& opts) {
    check_state(model, eta, h);
    std::vector<double> F = vector_field(model, eta, h);
    double res = 0.0;
    for (double f : F)
        res = std::max(res, std::abs(f));
    if (res > 1e-8)
        throw NotAnEquilibrium("||F_eta(h)|| = " + std::to_string(res) + " exceeds 1e-8");

    // linearization kernel (1-h(x)) k(x,y) eta(y) (1-h(y)) / gamma(y)
    const std::size_t n = model.size();
    Kernel lin = model.next_gen;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lin.at(i, j) *= (1.0 - h[i]) * (1.0 - h[j]);
    StabilityResult result;
    result.certificate = spectral_radius(lin, eta, opts);
    result.verdict = result.certificate <= 1.0 + 1e-8 ? StabilityVerdict::Stable
                                                      : StabilityVerdict::Unstable;
    return result;
}

} // namespace sisopt
