#include "sisopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace sisopt {

namespace {

std::string site_msg(const char* what, std::size_t i, double v) {
    return std::string(what) + " at site " + std::to_string(i) + ": " + std::to_string(v);
}

} // namespace

void FeatureSpace::validate() const {
    if (weights.empty())
        throw ValidationError("feature space has no sites");
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw NonPositiveWeight(site_msg("non-positive weight", i, weights[i]));
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("weights sum to " + std::to_string(total) + ", expected 1");
    if (!labels.empty()) {
        if (labels.size() != weights.size())
            throw ValidationError("label count does not match site count");
        double cursor = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto& iv = labels[i];
            if (std::abs(iv.lo - cursor) > 1e-12)
                throw ValidationError("label intervals are not ordered and contiguous");
            if (std::abs(iv.length() - weights[i]) > 1e-12)
                throw ValidationError(site_msg("label length differs from weight", i, iv.length()));
            cursor = iv.hi;
        }
        if (std::abs(cursor - 1.0) > 1e-12)
            throw ValidationError("label intervals do not cover [0,1)");
    }
}

bool same_space(const FeatureSpace& a, const FeatureSpace& b, double tol) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.weights[i] - b.weights[i]) > tol)
            return false;
    return true;
}

void Kernel::validate() const {
    space.validate();
    const std::size_t n = space.size();
    if (entries.size() != n * n)
        throw DimensionMismatch("kernel has " + std::to_string(entries.size()) +
                                " entries, expected " + std::to_string(n * n));
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        if (!std::isfinite(entries[idx]) || entries[idx] < 0.0)
            throw NegativeKernelEntry("invalid kernel entry at (" + std::to_string(idx / n) +
                                      ", " + std::to_string(idx % n) + "): " +
                                      std::to_string(entries[idx]));
    }
}

Strategy Strategy::constant(std::size_t n, double value) {
    Strategy s;
    s.eta.assign(n, value);
    return s;
}

void Strategy::validate() const {
    for (std::size_t i = 0; i < eta.size(); ++i)
        if (!(eta[i] >= 0.0 && eta[i] <= 1.0))
            throw OutOfRangeState(site_msg("strategy value outside [0,1]", i, eta[i]));
}

SisModel::SisModel(FeatureSpace space_, std::vector<double> kernel_entries,
                   std::vector<double> gamma_)
    : space(std::move(space_)),
      transmission{space, std::move(kernel_entries)},
      gamma(std::move(gamma_)),
      next_gen{space, {}} {
    const std::size_t n = space.size();
    if (gamma.size() != n)
        throw DimensionMismatch("gamma has " + std::to_string(gamma.size()) +
                                " entries, expected " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i]))
            throw NonPositiveGamma(site_msg("non-positive recovery rate", i, gamma[i]));
    validate();
    // next-generation kernel: columns of k divided by the recovery rate of
    // the source feature
    next_gen.entries.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            next_gen.at(i, j) = transmission(i, j) / gamma[j];
}

void SisModel::validate() const {
    transmission.validate();
    const std::size_t n = space.size();
    if (gamma.size() != n)
        throw DimensionMismatch("gamma size mismatch");
}

const char* to_string(IrreducibilityTag tag) {
    switch (tag) {
        case IrreducibilityTag::Irreducible: return "irreducible";
        case IrreducibilityTag::QuasiIrreducible: return "quasi-irreducible";
        case IrreducibilityTag::Reducible: return "reducible";
    }
    return "?";
}

SisModel build_block_model(const std::vector<double>& block_weights,
                           const std::vector<std::vector<double>>& block_kernel,
                           const std::vector<double>& block_gamma) {
    const std::size_t n = block_weights.size();
    if (block_kernel.size() != n || block_gamma.size() != n)
        throw DimensionMismatch("block model arrays disagree on the block count");
    FeatureSpace space;
    space.weights = block_weights;
    double cursor = 0.0;
    space.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        space.labels.push_back({cursor, cursor + block_weights[i]});
        cursor += block_weights[i];
    }
    if (!space.labels.empty())
        space.labels.back().hi = 1.0; // absorb rounding in the last interval
    std::vector<double> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (block_kernel[i].size() != n)
            throw DimensionMismatch("block kernel row " + std::to_string(i) + " has wrong size");
        for (std::size_t j = 0; j < n; ++j)
            entries[i * n + j] = block_kernel[i][j];
    }
    return SisModel(std::move(space), std::move(entries), block_gamma);
}

SisModel build_homogeneous(double kappa, double gamma) {
    return build_block_model({1.0}, {{kappa}}, {gamma});
}

SisModel build_multipartite(int groups, double kappa) {
    return build_perturbed_multipartite(groups, kappa, 0.0);
}

SisModel build_perturbed_multipartite(int groups, double kappa, double eps) {
    if (groups < 2)
        throw InvalidGroupCount("multipartite model needs at least 2 groups, got " +
                                std::to_string(groups));
    if (eps < 0.0)
        throw NegativeEpsilon("diagonal perturbation must be >= 0, got " + std::to_string(eps));
    if (kappa < 0.0)
        throw NegativeKernelEntry("kappa must be >= 0, got " + std::to_string(kappa));
    // groups 1..N of mass 2^-n plus one remainder site with the tail mass 2^-N
    const std::size_t n = static_cast<std::size_t>(groups) + 1;
    std::vector<double> weights(n);
    for (int g = 1; g <= groups; ++g)
        weights[static_cast<std::size_t>(g - 1)] = std::ldexp(1.0, -g);
    weights[n - 1] = std::ldexp(1.0, -groups);
    FeatureSpace space;
    space.weights = weights;
    double cursor = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        space.labels.push_back({cursor, cursor + weights[i]});
        cursor += weights[i];
    }
    space.labels.back().hi = 1.0;
    std::vector<double> entries(n * n, kappa);
    for (std::size_t i = 0; i < n; ++i)
        entries[i * n + i] = eps;
    return SisModel(std::move(space), std::move(entries), std::vector<double>(n, 1.0));
}

double double_norm(const Kernel& kernel, double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw InvalidExponent("double norm needs p in (1, inf), got " + std::to_string(p));
    const double q = p / (p - 1.0);
    const std::size_t n = kernel.size();
    const auto& mu = kernel.space.weights;
    double outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            inner += std::pow(std::abs(kernel(i, j)), q) * mu[j];
        outer += std::pow(inner, p / q) * mu[i];
    }
    return std::pow(outer, 1.0 / p);
}

namespace {

// Kosaraju SCC count on the support graph (edge j -> i whenever k_ij > 0)
// restricted to `alive` sites.
std::size_t scc_count(const Kernel& kernel, const std::vector<bool>& alive) {
    const std::size_t n = kernel.size();
    std::vector<std::vector<std::size_t>> out(n), in(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i])
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alive[j] && kernel(i, j) > 0.0) {
                out[j].push_back(i); // mass flows from j to i
                in[i].push_back(j);
            }
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> seen(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (!alive[s] || seen[s])
            continue;
        seen[s] = true;
        stack.push_back({s, 0});
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < out[v].size()) {
                std::size_t w = out[v][next++];
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back({w, 0});
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::fill(seen.begin(), seen.end(), false);
    std::size_t components = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (seen[*it])
            continue;
        ++components;
        std::vector<std::size_t> dfs{*it};
        seen[*it] = true;
        while (!dfs.empty()) {
            std::size_t v = dfs.back();
            dfs.pop_back();
            for (std::size_t w : in[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    dfs.push_back(w);
                }
            }
        }
    }
    return components;
}

} // namespace

IrreducibilityClass irreducibility_class(const Kernel& kernel) {
    const std::size_t n = kernel.size();
    IrreducibilityClass result;
    std::vector<bool> alive(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            mass += kernel(i, j) + kernel(j, i);
        if (mass == 0.0) {
            alive[i] = false;
            result.zero_set.push_back(i);
        }
    }
    const std::size_t live = n - result.zero_set.size();
    if (live == 0) {
        result.tag = IrreducibilityTag::Reducible;
        return result;
    }
    const std::size_t components = scc_count(kernel, alive);
    if (components == 1)
        result.tag = result.zero_set.empty() ? IrreducibilityTag::Irreducible
                                             : IrreducibilityTag::QuasiIrreducible;
    else
        result.tag = IrreducibilityTag::Reducible;
    return result;
}

Kernel next_gen_kernel(const SisModel& model) {
    return model.next_gen;
}

} // namespace sisopt
