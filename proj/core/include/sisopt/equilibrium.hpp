#ifndef SISOPT_EQUILIBRIUM_HPP
#define SISOPT_EQUILIBRIUM_HPP

#include <span>
#include <vector>

#include "sisopt/model.hpp"
#include "sisopt/spectral.hpp"

namespace sisopt {

struct EquilibriumOptions {
    double tol_fix = 1e-12;
    std::size_t max_iter = 1000000;
    double certificate_tol = 1e-8;
    bool certify = true; // compute and check the maximality certificate
    PerronOptions perron{};
};

struct Equilibrium {
    std::vector<double> g;          // per-site prevalence among non-vaccinated
    double infected_fraction = 0.0; // sum_i g_i eta_i mu_i
    double residual = 0.0;          // ||F_eta(g)||_inf
    std::size_t iterations = 0;
    double maximality_certificate = 0.0; // R_e[kk eta](1 - g), <= 1 certifies
    bool converged = true;
};

/// Iteration cap reached; the last (still monotone) iterate rides along.
class EquilibriumNoConvergence : public NoConvergence {
public:
    EquilibriumNoConvergence(const std::string& what, Equilibrium partial_)
        : NoConvergence(what), partial(std::move(partial_)) {}
    Equilibrium partial;
};

/// F_eta(g)_i = (1 - g_i) sum_j k_ij eta_j g_j mu_j - gamma_i g_i.
std::vector<double> vector_field(const SisModel& model, const Strategy& eta,
                                 std::span<const double> g);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states; // aligned with times, includes final
    double max_clamp = 0.0;                  // worst per-step clamping distance
    double dt = 0.0;
};

/// Fixed-step RK4 on the SIS vector field, states clamped to [0,1] after
/// each step. dt = 0 picks 0.05 / max_i(gamma_i + weighted row sum of k).
/// Throws StepTooLarge when clamping exceeds 1e-10.
Trajectory integrate_sis(const SisModel& model, const Strategy& eta,
                         std::span<const double> u0, double t_end,
                         double dt = 0.0, std::size_t max_samples = 129);

/// Maximal endemic equilibrium by the monotone fixed-point map
/// g <- T / (gamma + T), T_i = sum_j k_ij eta_j g_j mu_j, started from 1.
/// Iterates are non-increasing; a Collatz-Wielandt bound certifies the
/// subcritical limit 0 early. Maximality is certified through
/// R_e[kk eta](1 - g) <= 1.
Equilibrium maximal_equilibrium(const SisModel& model, const Strategy& eta,
                                const EquilibriumOptions& opts = {});

/// Like maximal_equilibrium but never throws on the iteration cap: the
/// partial state comes back with converged = false. Certificate failures
/// still throw.
Equilibrium solve_equilibrium(const SisModel& model, const Strategy& eta,
                              const EquilibriumOptions& opts = {});

/// I(eta) = sum_i g_i eta_i mu_i at the maximal equilibrium.
double infected_fraction(const SisModel& model, const Strategy& eta,
                         const EquilibriumOptions& opts = {});

/// eta_equi = 1 - g with g the maximal equilibrium of the unvaccinated model;
/// critical (R_e = 1) whenever R_0 > 1.
Strategy equilibrium_strategy(const SisModel& model,
                              const EquilibriumOptions& opts = {});

enum class StabilityVerdict { Stable, Unstable };

struct StabilityResult {
    StabilityVerdict verdict = StabilityVerdict::Stable;
    double certificate = 0.0; // rho of the linearization kernel
};

/// Linear stability of an equilibrium candidate h of the vaccinated model:
/// Stable iff rho of the kernel (1-h(x)) k(x,y) eta(y) (1-h(y)) / gamma(y)
/// is <= 1 + 1e-8. Throws NotAnEquilibrium unless ||F_eta(h)||_inf <= 1e-8.
StabilityResult linear_stability(const SisModel& model, const Strategy& eta,
                                 std::span<const double> h,
                                 const PerronOptions& opts = {});

} // namespace sisopt

#endif
