#include "sisopt/pareto.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "sisopt/rng.hpp"

namespace sisopt {

const char* to_string(LossKind kind) {
    return kind == LossKind::Re ? "re" : "i";
}

const char* to_string(SolverStatus status) {
    switch (status) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::MultiStartBest: return "multi-start-best";
        case SolverStatus::Oracle: return "oracle";
    }
    return "?";
}

CostFunction CostFunction::uniform() {
    return CostFunction();
}

CostFunction CostFunction::affine(std::vector<double> density) {
    for (std::size_t i = 0; i < density.size(); ++i)
        if (!(density[i] > 0.0) || !std::isfinite(density[i]))
            throw ValidationError("affine cost density must be strictly positive");
    CostFunction c;
    c.density_ = std::move(density);
    return c;
}

std::vector<double> CostFunction::site_weights(const FeatureSpace& space) const {
    std::vector<double> w = space.weights;
    if (!density_.empty()) {
        if (density_.size() != w.size())
            throw DimensionMismatch("cost density size does not match the feature space");
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] *= density_[i];
    }
    return w;
}

double CostFunction::value(const FeatureSpace& space, const Strategy& eta) const {
    if (eta.size() != space.size())
        throw DimensionMismatch("strategy size does not match the feature space");
    const std::vector<double> w = site_weights(space);
    double c = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        c += (1.0 - eta[i]) * w[i];
    return c;
}

double CostFunction::c_max(const FeatureSpace& space) const {
    const std::vector<double> w = site_weights(space);
    return std::accumulate(w.begin(), w.end(), 0.0);
}

namespace {

// ---------------------------------------------------------------- evaluation

EquilibriumOptions inner_equilibrium(const OptimizerOptions& opts) {
    EquilibriumOptions eopts = opts.equilibrium;
    eopts.certify = false;
    // the monotone iterate is an upper bound on the equilibrium, so a capped
    // run still gives a usable (conservative) loss value inside the optimizer
    eopts.max_iter = std::min<std::size_t>(eopts.max_iter, 20000);
    return eopts;
}

double eval_loss(const SisModel& model, LossKind kind, const Strategy& eta,
                 const OptimizerOptions& opts) {
    if (kind == LossKind::Re) {
        try {
            return spectral_radius(model.next_gen, eta, opts.perron);
        } catch (const PerronNoConvergence& e) {
            return e.partial.rho;
        }
    }
    return solve_equilibrium(model, eta, inner_equilibrium(opts)).infected_fraction;
}

// central differences, one-sided at the box boundary
std::vector<double> fd_gradient(const SisModel& model, LossKind kind, const Strategy& eta,
                                const OptimizerOptions& opts) {
    const std::size_t n = eta.size();
    std::vector<double> g(n, 0.0);
    Strategy probe = eta;
    for (std::size_t j = 0; j < n; ++j) {
        const double up = std::min(opts.fd_step, 1.0 - eta[j]);
        const double down = std::min(opts.fd_step, eta[j]);
        if (up + down == 0.0)
            continue;
        probe[j] = eta[j] + up;
        const double fu = eval_loss(model, kind, probe, opts);
        probe[j] = eta[j] - down;
        const double fd = eval_loss(model, kind, probe, opts);
        probe[j] = eta[j];
        g[j] = (fu - fd) / (up + down);
    }
    return g;
}

std::vector<double> loss_gradient(const SisModel& model, LossKind kind, const Strategy& eta,
                                  const OptimizerOptions& opts) {
    if (kind == LossKind::Re) {
        try {
            return gradient_Re(model, eta, opts.perron);
        } catch (const DegenerateEigenpair&) {
            // non-simple Perron root; fall back to finite differences
        } catch (const PerronNoConvergence&) {
        }
    }
    return fd_gradient(model, kind, eta, opts);
}

// ---------------------------------------------------------------- projection

// feasible set {eta in [0,1]^n : a.eta >= b} (Pareto side) or
// {eta in [0,1]^n : a.eta <= b} (anti-Pareto side)
struct BudgetSet {
    std::vector<double> a;
    double b = 0.0;
    bool lower = true; // true: a.eta >= b
};

Strategy project(const std::vector<double>& z, const BudgetSet& set) {
    const std::size_t n = z.size();
    Strategy y = Strategy::zeros(n);
    auto clamp_shift = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = std::clamp(z[i] + lam * set.a[i], 0.0, 1.0);
            s += set.a[i] * y[i];
        }
        return s;
    };
    double s0 = clamp_shift(0.0);
    if ((set.lower && s0 >= set.b) || (!set.lower && s0 <= set.b))
        return y;
    // dual multiplier bisection; a.y(lam) is monotone in lam
    double sign = set.lower ? 1.0 : -1.0;
    double lo = 0.0, hi = 1.0;
    for (int grow = 0; grow < 200; ++grow) {
        double s = clamp_shift(sign * hi);
        if ((set.lower && s >= set.b) || (!set.lower && s <= set.b))
            break;
        hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = clamp_shift(sign * mid);
        bool sat = set.lower ? s >= set.b : s <= set.b;
        if (sat)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-15 || std::abs(s - set.b) < 1e-12)
            break;
    }
    clamp_shift(sign * hi);
    return y;
}

// ------------------------------------------------------- projected gradient

struct SolveResult {
    Strategy eta;
    double loss = 0.0;
    bool converged = false;
};

SolveResult projected_gradient(const SisModel& model, LossKind kind, bool maximize,
                               const BudgetSet& set, const Strategy& start,
                               const OptimizerOptions& opts) {
    const std::size_t n = start.size();
    SolveResult res;
    res.eta = project(start.eta, set);
    res.loss = eval_loss(model, kind, res.eta, opts);
    double step = 1.0;
    const double dir = maximize ? -1.0 : 1.0; // descend on dir * loss
    int stagnant = 0;

    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        std::vector<double> grad = loss_gradient(model, kind, res.eta, opts);
        if (maximize)
            for (auto& g : grad)
                g = -g;

        // projected-gradient stationarity measure at unit step
        std::vector<double> probe(n);
        for (std::size_t i = 0; i < n; ++i)
            probe[i] = res.eta[i] - grad[i];
        Strategy ref = project(probe, set);
        double pg = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            pg += (res.eta[i] - ref[i]) * (res.eta[i] - ref[i]);
        pg = std::sqrt(pg);
        if (pg < opts.pg_tol) {
            res.converged = true;
            break;
        }

        double alpha = step;
        bool accepted = false;
        const double f_before = res.loss;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < n; ++i)
                probe[i] = res.eta[i] - alpha * grad[i];
            Strategy cand = project(probe, set);
            double gd = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                gd += grad[i] * (cand[i] - res.eta[i]);
            double fc = dir * eval_loss(model, kind, cand, opts);
            double fcur = dir * res.loss;
            if (fc <= fcur + opts.armijo_c * gd) {
                res.eta = std::move(cand);
                res.loss = dir * fc;
                accepted = true;
                break;
            }
            alpha *= opts.backtrack;
        }
        if (!accepted)
            break; // line search stagnated; leave convergence flag unset
        // noisy gradients (finite differences of iterative solves) can keep
        // accepting zero-progress steps; bail out once improvement dies
        if (std::abs(f_before - res.loss) <= 1e-14 * std::max(1.0, std::abs(res.loss))) {
            if (++stagnant >= 3) {
                res.converged = pg < 10.0 * opts.pg_tol || res.loss == 0.0;
                break;
            }
        } else {
            stagnant = 0;
        }
        step = std::min(alpha / opts.backtrack, 1e6);
    }
    return res;
}

// ----------------------------------------------------------- start builders

std::vector<Strategy> build_starts(const SisModel& model, const std::vector<double>& w,
                                   double budget_cost, bool maximize,
                                   const OptimizerOptions& opts) {
    const std::size_t n = model.size();
    const double W = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<Strategy> starts;

    // uniform profile with the budget exactly spent
    double lam = W > 0.0 ? std::clamp(1.0 - budget_cost / W, 0.0, 1.0) : 1.0;
    starts.push_back(Strategy::constant(n, lam));

    // greedy fill ranked by loss sensitivity per unit cost
    std::vector<double> score(n, 0.0);
    try {
        score = gradient_Re(model, Strategy::ones(n), opts.perron);
    } catch (const Error&) {
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                col += model.next_gen(i, j) * model.space.weights[i];
            score[j] = col * model.space.weights[j];
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double sa = score[a] / w[a], sb = score[b] / w[b];
        return maximize ? sa < sb : sa > sb; // cheapest harm first when maximizing
    });
    Strategy greedy = Strategy::ones(n);
    double left = budget_cost;
    for (std::size_t j : order) {
        if (left <= 0.0)
            break;
        double spend = std::min(w[j], left);
        greedy[j] = 1.0 - spend / w[j];
        left -= spend;
    }
    starts.push_back(greedy);

    Rng rng(opts.seed);
    for (int s = 0; s < opts.multi_starts; ++s) {
        Strategy r = Strategy::zeros(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = rng.uniform();
        starts.push_back(r);
    }
    return starts;
}

FrontierPoint solve_budget_problem(const SisModel& model, LossKind kind,
                                   const CostFunction& costfn, double c, bool maximize,
                                   const OptimizerOptions& opts) {
    const std::size_t n = model.size();
    const std::vector<double> w = costfn.site_weights(model.space);
    const double W = std::accumulate(w.begin(), w.end(), 0.0);
    if (c < -1e-12 || c > W + 1e-9)
        throw BudgetOutOfRange("budget " + std::to_string(c) + " outside [0, " +
                               std::to_string(W) + "]");
    c = std::clamp(c, 0.0, W);

    BudgetSet set;
    set.a = w;
    set.b = W - c;          // cost(eta) <= c  <=>  a.eta >= W - c
    set.lower = !maximize;  // anti side flips to cost(eta) >= c

    SolveResult best;
    bool have = false;
    for (const Strategy& start : build_starts(model, w, c, maximize, opts)) {
        SolveResult r = projected_gradient(model, kind, maximize, set, start, opts);
        bool better = !have || (maximize ? r.loss > best.loss : r.loss < best.loss);
        if (better) {
            best = std::move(r);
            have = true;
        }
    }

    // bind the cost constraint; monotonicity of the loss makes this free
    double spent = costfn.value(model.space, best.eta);
    if (!maximize && best.loss > 1e-12 && spent < c - 1e-12) {
        double scur = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scur += w[i] * best.eta[i];
        if (scur > 0.0) {
            double scale = (W - c) / scur;
            if (scale < 1.0) {
                for (std::size_t i = 0; i < n; ++i)
                    best.eta[i] *= scale;
                best.loss = eval_loss(model, kind, best.eta, opts);
            }
        }
    } else if (maximize && spent > c + 1e-12) {
        double scur = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scur += w[i] * best.eta[i];
        if (W - scur > 1e-15) {
            double t = std::clamp(((W - c) - scur) / (W - scur), 0.0, 1.0);
            for (std::size_t i = 0; i < n; ++i)
                best.eta[i] += t * (1.0 - best.eta[i]);
            best.loss = eval_loss(model, kind, best.eta, opts);
        }
    }

    FrontierPoint pt;
    pt.strategy = best.eta;
    pt.cost = costfn.value(model.space, best.eta);
    pt.loss = best.loss;
    pt.status = best.converged ? SolverStatus::Converged : SolverStatus::MultiStartBest;
    return pt;
}

struct Bisection {
    FrontierPoint point; // solution at the feasible end of the bracket
    double c_hi = 0.0;   // feasible budget; overestimates the value by <= tol_c
};

Bisection bisect_cost(const SisModel& model, LossKind kind, const CostFunction& costfn,
                      double ell, const OptimizerOptions& opts) {
    const double W = costfn.c_max(model.space);
    Bisection out;
    double lo = 0.0, hi = W;
    FrontierPoint at_hi = solve_budget_problem(model, kind, costfn, hi, false, opts);
    while (hi - lo > opts.tol_c) {
        double mid = 0.5 * (lo + hi);
        FrontierPoint pt = solve_budget_problem(model, kind, costfn, mid, false, opts);
        if (pt.loss <= ell + opts.loss_slack) {
            hi = mid;
            at_hi = std::move(pt);
        } else {
            lo = mid;
        }
    }
    out.point = std::move(at_hi);
    out.c_hi = hi;
    return out;
}

} // namespace

double loss_value(const SisModel& model, LossKind kind, const Strategy& eta,
                  const OptimizerOptions& opts) {
    return eval_loss(model, kind, eta, opts);
}

FrontierPoint minimize_loss_at_cost(const SisModel& model, LossKind loss,
                                    const CostFunction& costfn, double c,
                                    const OptimizerOptions& opts) {
    return solve_budget_problem(model, loss, costfn, c, false, opts);
}

FrontierPoint maximize_loss_at_cost(const SisModel& model, LossKind loss,
                                    const CostFunction& costfn, double c,
                                    const OptimizerOptions& opts) {
    return solve_budget_problem(model, loss, costfn, c, true, opts);
}

FrontierPoint min_cost_at_loss(const SisModel& model, LossKind loss,
                               const CostFunction& costfn, double ell,
                               const OptimizerOptions& opts) {
    const double ell_max = eval_loss(model, loss, Strategy::ones(model.size()), opts);
    if (ell < -opts.loss_slack)
        throw LossOutOfRange("loss target " + std::to_string(ell) + " is negative");
    if (ell > ell_max + opts.loss_slack)
        throw LossOutOfRange("loss target " + std::to_string(ell) + " exceeds the no-vaccination loss " +
                             std::to_string(ell_max));
    if (ell >= ell_max - opts.loss_slack) {
        FrontierPoint pt;
        pt.strategy = Strategy::ones(model.size());
        pt.cost = 0.0;
        pt.loss = ell_max;
        pt.status = SolverStatus::Converged;
        return pt;
    }
    return bisect_cost(model, loss, costfn, ell, opts).point;
}

namespace {

// grid worker pool; results land by index so output is thread-count invariant
void run_grid(std::size_t count, int threads,
              const std::function<void(std::size_t)>& task) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

double eradication_budget(const SisModel& model, LossKind loss, const CostFunction& costfn,
                          const OptimizerOptions& opts) {
    const double r0 = eval_loss(model, LossKind::Re, Strategy::ones(model.size()), opts);
    if (r0 <= 1.0 + 1e-9)
        return 0.0;
    const double target = loss == LossKind::Re ? 1.0 : 0.0;
    return bisect_cost(model, loss, costfn, target, opts).c_hi;
}

void repair_monotone(std::vector<FrontierPoint>& pts, const SisModel& model, LossKind loss,
                     const CostFunction& costfn, bool maximize, const OptimizerOptions& opts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        bool violated = pts[i].loss > pts[i - 1].loss + opts.monotone_tol;
        if (!violated)
            continue;
        // losses must be non-increasing in cost on both frontiers; re-solve
        // the under-optimized side once with doubled multi-starts
        std::size_t target = maximize ? i - 1 : i;
        OptimizerOptions retry = opts;
        retry.multi_starts = opts.multi_starts * 2;
        retry.seed = Rng::mix(opts.seed, 0x9e1dull + target);
        FrontierPoint fresh =
            solve_budget_problem(model, loss, costfn, pts[target].cost, maximize, retry);
        bool improved = maximize ? fresh.loss > pts[target].loss : fresh.loss < pts[target].loss;
        if (improved)
            pts[target] = std::move(fresh);
        if (pts[i].loss > pts[i - 1].loss + opts.monotone_tol)
            pts[target].flagged = true;
    }
}

} // namespace

Frontier pareto_frontier(const SisModel& model, LossKind loss, const CostFunction& costfn,
                         std::size_t grid_size, const OptimizerOptions& opts) {
    if (grid_size < 2)
        throw ValidationError("frontier grid needs at least 2 points");
    const double ell_max = eval_loss(model, loss, Strategy::ones(model.size()), opts);
    if (ell_max <= 1e-12)
        throw DegenerateLoss("maximal loss is zero; nothing to optimize");

    const double c_erad = eradication_budget(model, loss, costfn, opts);
    Frontier frontier;
    frontier.loss_kind = loss;
    frontier.orientation = Orientation::Pareto;

    if (c_erad <= 0.0) {
        frontier.points.push_back(minimize_loss_at_cost(model, loss, costfn, 0.0, opts));
        return frontier;
    }

    frontier.points.resize(grid_size);
    run_grid(grid_size, opts.threads, [&](std::size_t i) {
        OptimizerOptions point_opts = opts;
        point_opts.seed = Rng::mix(opts.seed, i);
        const double c = c_erad * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        frontier.points[i] = minimize_loss_at_cost(model, loss, costfn, c, point_opts);
    });
    repair_monotone(frontier.points, model, loss, costfn, false, opts);
    return frontier;
}

Frontier anti_pareto_frontier(const SisModel& model, LossKind loss, const CostFunction& costfn,
                              std::size_t grid_size, const OptimizerOptions& opts) {
    if (grid_size < 2)
        throw ValidationError("frontier grid needs at least 2 points");
    const double ell_max = eval_loss(model, loss, Strategy::ones(model.size()), opts);
    if (ell_max <= 1e-12)
        throw DegenerateLoss("maximal loss is zero; nothing to optimize");

    Frontier frontier;
    frontier.loss_kind = loss;
    frontier.orientation = Orientation::AntiPareto;

    const IrreducibilityClass klass = irreducibility_class(model.next_gen);
    frontier.reducible_warning = klass.tag == IrreducibilityTag::Reducible;
    // C^sup(ell_max) is the cost of vaccinating exactly the zero-mass sites
    const std::vector<double> w = costfn.site_weights(model.space);
    double c_lo = 0.0;
    for (std::size_t z : klass.zero_set)
        c_lo += w[z];
    const double W = costfn.c_max(model.space);

    frontier.points.resize(grid_size);
    run_grid(grid_size, opts.threads, [&](std::size_t i) {
        OptimizerOptions point_opts = opts;
        point_opts.seed = Rng::mix(opts.seed, 0xA271ull + i);
        const double c =
            c_lo + (W - c_lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        frontier.points[i] = maximize_loss_at_cost(model, loss, costfn, c, point_opts);
    });
    repair_monotone(frontier.points, model, loss, costfn, true, opts);
    return frontier;
}

OracleResult grid_oracle(const SisModel& model, LossKind loss, const CostFunction& costfn,
                         std::size_t resolution, const OptimizerOptions& opts) {
    const std::size_t n = model.size();
    if (n > 3)
        throw TooManySites("grid oracle enumerates (m+1)^n strategies; n must be <= 3");
    if (resolution < 1)
        throw ValidationError("oracle resolution must be >= 1");
    const std::size_t m = resolution;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= (m + 1);

    struct Entry {
        double cost;
        double loss;
        std::uint32_t index;
    };
    std::vector<Entry> entries(total);
    std::vector<double> levels(m + 1);
    for (std::size_t l = 0; l <= m; ++l)
        levels[l] = static_cast<double>(l) / static_cast<double>(m);

    auto eta_of = [&](std::size_t flat) {
        Strategy eta = Strategy::zeros(n);
        for (std::size_t d = 0; d < n; ++d) {
            eta[d] = levels[flat % (m + 1)];
            flat /= (m + 1);
        }
        return eta;
    };

    run_grid(total, opts.threads, [&](std::size_t flat) {
        Strategy eta = eta_of(flat);
        entries[flat] = {costfn.value(model.space, eta), eval_loss(model, loss, eta, opts),
                         static_cast<std::uint32_t>(flat)};
    });

    OracleResult out;
    out.feasible.reserve(total);
    for (const Entry& e : entries)
        out.feasible.push_back({e.cost, e.loss});

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.cost != b.cost)
            return a.cost < b.cost;
        return a.loss < b.loss;
    });

    out.pareto.loss_kind = loss;
    out.pareto.orientation = Orientation::Pareto;
    double best = std::numeric_limits<double>::infinity();
    for (const Entry& e : entries) {
        if (e.loss < best) {
            best = e.loss;
            FrontierPoint pt;
            pt.cost = e.cost;
            pt.loss = e.loss;
            pt.strategy = eta_of(e.index);
            pt.status = SolverStatus::Oracle;
            out.pareto.points.push_back(std::move(pt));
        }
    }

    out.anti.loss_kind = loss;
    out.anti.orientation = Orientation::AntiPareto;
    best = -std::numeric_limits<double>::infinity();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->loss > best) {
            best = it->loss;
            FrontierPoint pt;
            pt.cost = it->cost;
            pt.loss = it->loss;
            pt.strategy = eta_of(it->index);
            pt.status = SolverStatus::Oracle;
            out.anti.points.push_back(std::move(pt));
        }
    }
    std::reverse(out.anti.points.begin(), out.anti.points.end());
    return out;
}

double staircase_min_loss(const Frontier& pareto, double c) {
    double best = std::numeric_limits<double>::infinity();
    for (const FrontierPoint& p : pareto.points) {
        if (p.cost <= c + 1e-12)
            best = std::min(best, p.loss);
        else
            break;
    }
    return best;
}

double staircase_max_loss(const Frontier& anti, double c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const FrontierPoint& p : anti.points)
        if (p.cost >= c - 1e-12)
            best = std::max(best, p.loss);
    return best;
}

std::vector<std::pair<double, double>> feasible_region_sample(
    const SisModel& model, LossKind loss, const CostFunction& costfn, std::size_t samples,
    std::uint64_t seed, const OptimizerOptions& opts) {
    const std::size_t n = model.size();
    std::vector<std::pair<double, double>> out;
    auto emit = [&](const Strategy& eta) {
        out.push_back({costfn.value(model.space, eta), eval_loss(model, loss, eta, opts)});
    };
    // the uniform path traces (c, (1-c) R_0) under the uniform cost
    for (int l = 0; l <= 21; ++l)
        emit(Strategy::constant(n, static_cast<double>(l) / 21.0));
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        Strategy eta = Strategy::zeros(n);
        for (std::size_t i = 0; i < n; ++i)
            eta[i] = rng.uniform();
        emit(eta);
        const double lam = rng.uniform();
        Strategy scaled = eta;
        for (std::size_t i = 0; i < n; ++i)
            scaled[i] = lam * eta[i];
        emit(scaled);
        for (std::size_t i = 0; i < n; ++i)
            scaled[i] = (1.0 - lam) + lam * eta[i];
        emit(scaled);
    }
    return out;
}

EradicationCost eradication_cost(const SisModel& model, const CostFunction& costfn,
                                 const OptimizerOptions& opts) {
    EradicationCost out;
    const double r0 = eval_loss(model, LossKind::Re, Strategy::ones(model.size()), opts);
    if (r0 <= 1.0 + 1e-9) {
        out.certified = true;
        return out;
    }
    FrontierPoint via_re = min_cost_at_loss(model, LossKind::Re, costfn, 1.0, opts);
    FrontierPoint via_i = min_cost_at_loss(model, LossKind::InfectedFraction, costfn, 0.0, opts);
    out.cost = via_re.cost;
    out.cost_via_I = via_i.cost;

    Equilibrium eq = maximal_equilibrium(model, Strategy::ones(model.size()), opts.equilibrium);
    Strategy equi = Strategy::zeros(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
        equi[i] = 1.0 - eq.g[i];
    const double bound_uniform = (1.0 - 1.0 / r0) * costfn.c_max(model.space);
    const double bound_equi = costfn.value(model.space, equi);
    out.upper_bound = std::min(bound_uniform, bound_equi);
    out.certified = out.cost <= out.upper_bound + opts.tol_c &&
                    std::abs(out.cost - out.cost_via_I) <= 2.0 * opts.tol_c;
    return out;
}

ChordReport chord_and_convexity_report(const Frontier& frontier, double c_max, double slack) {
    ChordReport report;
    const auto& pts = frontier.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
            if (pts[j].cost < pts[i].cost || c_max - pts[i].cost <= 1e-15)
                continue;
            const double theta = (c_max - pts[j].cost) / (c_max - pts[i].cost);
            if (theta < -1e-12 || theta > 1.0 + 1e-12)
                continue;
            // L*(theta c_i + (1-theta) c_max) <= theta L*(c_i)
            const double violation = pts[j].loss - theta * pts[i].loss;
            report.max_chord_violation = std::max(report.max_chord_violation, violation);
            ++report.pairs_checked;
        }
    }
    report.chord_ok = report.max_chord_violation <= slack;
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
        const double span = pts[i + 2].cost - pts[i].cost;
        if (span <= 1e-15)
            continue;
        const double t = (pts[i + 1].cost - pts[i].cost) / span;
        const double chord = (1.0 - t) * pts[i].loss + t * pts[i + 2].loss;
        if (pts[i + 1].loss > chord + 1e-9)
            report.empirically_convex = false;
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

void write_frontier_csv(const Frontier& frontier, std::ostream& out) {
    out << "cost,loss,status\n";
    for (const FrontierPoint& p : frontier.points)
        out << format_double(p.cost) << ',' << format_double(p.loss) << ','
            << to_string(p.status) << '\n';
}

void write_strategies_json(const Frontier& frontier, std::ostream& out) {
    out << "[";
    for (std::size_t i = 0; i < frontier.points.size(); ++i) {
        out << (i == 0 ? "" : ",") << "\n  [";
        const auto& eta = frontier.points[i].strategy.eta;
        for (std::size_t j = 0; j < eta.size(); ++j)
            out << (j == 0 ? "" : ", ") << format_double(eta[j]);
        out << "]";
    }
    out << "\n]\n";
}

void write_samples_csv(const std::vector<std::pair<double, double>>& samples,
                       std::ostream& out) {
    out << "cost,loss\n";
    for (const auto& [c, l] : samples)
        out << format_double(c) << ',' << format_double(l) << '\n';
}

} // namespace sisopt
