#ifndef SISOPT_PARETO_HPP
#define SISOPT_PARETO_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sisopt/equilibrium.hpp"
#include "sisopt/model.hpp"
#include "sisopt/spectral.hpp"

namespace sisopt {

enum class LossKind { Re, InfectedFraction };

const char* to_string(LossKind kind);

/// Uniform cost (overall vaccinated proportion) or affine cost with a
/// strictly positive per-site density.
class CostFunction {
public:
    static CostFunction uniform();
    static CostFunction affine(std::vector<double> density);

    bool is_uniform() const { return density_.empty(); }
    const std::vector<double>& density() const { return density_; }

    /// cost(eta) = sum_i (1 - eta_i) w_i with w_i = mu_i (uniform) or
    /// c_d(i) mu_i (affine).
    double value(const FeatureSpace& space, const Strategy& eta) const;

    /// Cost of vaccinating everyone, cost(0).
    double c_max(const FeatureSpace& space) const;

    /// Per-site budget weights w_i.
    std::vector<double> site_weights(const FeatureSpace& space) const;

private:
    CostFunction() = default;
    std::vector<double> density_; // empty = uniform
};

enum class SolverStatus { Converged, MultiStartBest, Oracle };

const char* to_string(SolverStatus status);

struct FrontierPoint {
    double cost = 0.0;
    double loss = 0.0;
    Strategy strategy;
    SolverStatus status = SolverStatus::Converged;
    bool flagged = false; // monotonicity repair did not fully resolve
};

enum class Orientation { Pareto, AntiPareto };

struct Frontier {
    std::vector<FrontierPoint> points; // ordered by cost
    LossKind loss_kind = LossKind::Re;
    Orientation orientation = Orientation::Pareto;
    bool reducible_warning = false; // anti-Pareto on a reducible kernel
};

struct OptimizerOptions {
    int multi_starts = 8;        // random starts, in addition to 2 deterministic ones
    std::size_t max_iter = 5000; // projected-gradient iterations per start
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double pg_tol = 1e-9;        // projected-gradient norm stop
    double fd_step = 1e-5;       // finite-difference step for loss = I
    double tol_c = 1e-6;         // cost bisection bracket width
    // feasibility slack on loss targets; must dominate the optimizer's
    // terminal accuracy or bisection brackets drift upward
    double loss_slack = 1e-7;
    std::uint64_t seed = 0xC0FFEE;
    int threads = 1;             // frontier grid workers; 0 = hardware
    double monotone_tol = 1e-6;  // frontier repair trigger
    PerronOptions perron{};
    EquilibriumOptions equilibrium{};
};

double loss_value(const SisModel& model, LossKind kind, const Strategy& eta,
                  const OptimizerOptions& opts = {});

/// Problem: minimize loss subject to cost(eta) <= c. Projected-gradient
/// descent with multi-start; the returned point has binding cost whenever
/// the loss is positive.
FrontierPoint minimize_loss_at_cost(const SisModel& model, LossKind loss,
                                    const CostFunction& costfn, double c,
                                    const OptimizerOptions& opts = {});

/// Problem: maximize loss subject to cost(eta) >= c (anti-Pareto side).
FrontierPoint maximize_loss_at_cost(const SisModel& model, LossKind loss,
                                    const CostFunction& costfn, double c,
                                    const OptimizerOptions& opts = {});

/// Problem: minimize cost subject to loss(eta) <= ell, by bisection on the
/// cost budget. The returned cost is the feasible (upper) end of the final
/// bracket, so it overestimates the true value by at most tol_c.
FrontierPoint min_cost_at_loss(const SisModel& model, LossKind loss,
                               const CostFunction& costfn, double ell,
                               const OptimizerOptions& opts = {});

/// Sweeps minimize_loss_at_cost over a uniform cost grid on [0, c_erad],
/// where c_erad is the minimal cost with R_e <= 1 (equivalently I = 0).
/// Grid points are independent tasks evaluated with per-index seeds.
Frontier pareto_frontier(const SisModel& model, LossKind loss,
                         const CostFunction& costfn, std::size_t grid_size,
                         const OptimizerOptions& opts = {});

/// Sweeps maximize_loss_at_cost over [C^sup(ell_max), c_max]. On kernels that
/// are not quasi-irreducible the result carries reducible_warning.
Frontier anti_pareto_frontier(const SisModel& model, LossKind loss,
                              const CostFunction& costfn, std::size_t grid_size,
                              const OptimizerOptions& opts = {});

struct OracleResult {
    Frontier pareto;
    Frontier anti;
    std::vector<std::pair<double, double>> feasible; // every lattice (cost, loss)
};

/// Exhaustive lattice enumeration {0, 1/m, ..., 1}^n for n <= 3; reference
/// envelopes for the optimizer.
OracleResult grid_oracle(const SisModel& model, LossKind loss,
                         const CostFunction& costfn, std::size_t resolution,
                         const OptimizerOptions& opts = {});

/// Lower staircase value: min loss among points with cost <= c.
double staircase_min_loss(const Frontier& pareto, double c);
/// Upper staircase value: max loss among points with cost >= c.
double staircase_max_loss(const Frontier& anti, double c);

/// (cost, loss) of seeded random strategies plus the scaled families
/// lambda*eta and (1-lambda) + lambda*eta and the uniform path eta = lambda.
std::vector<std::pair<double, double>> feasible_region_sample(
    const SisModel& model, LossKind loss, const CostFunction& costfn,
    std::size_t samples, std::uint64_t seed, const OptimizerOptions& opts = {});

struct EradicationCost {
    double cost = 0.0;        // C*_{Re}(1)
    double cost_via_I = 0.0;  // C*_I(0), must agree within 2 tol_c
    double upper_bound = 0.0; // min(cost of uniform critical, cost of 1 - g)
    bool certified = false;
};

/// Minimal cost that brings R_e down to 1; 0 when R_0 <= 1.
EradicationCost eradication_cost(const SisModel& model, const CostFunction& costfn,
                                 const OptimizerOptions& opts = {});

struct ChordReport {
    double max_chord_violation = 0.0;
    bool chord_ok = true;
    bool empirically_convex = true; // informational only
    std::size_t pairs_checked = 0;
};

/// Chord inequality L*(theta c + (1-theta) c_max) <= theta L*(c) over all
/// frontier grid pairs, for affine (incl. uniform) costs.
ChordReport chord_and_convexity_report(const Frontier& frontier, double c_max,
                                       double slack = 1e-6);

/// CSV schema: header "cost,loss,status", one row per point, shortest
/// round-trip decimal doubles, LF line endings.
void write_frontier_csv(const Frontier& frontier, std::ostream& out);

/// Sidecar JSON array of strategies aligned with the CSV rows.
void write_strategies_json(const Frontier& frontier, std::ostream& out);

void write_samples_csv(const std::vector<std::pair<double, double>>& samples,
                       std::ostream& out);

} // namespace sisopt

#endif
