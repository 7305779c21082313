#include "sisopt/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sisopt/equilibrium.hpp"
#include "sisopt/pareto.hpp"
#include "sisopt/rng.hpp"
#include "sisopt/spectral.hpp"

namespace sisopt {

namespace {

constexpr double kMergeTol = 1e-12; // exact-equality tolerance; no approximate lumping

} // namespace

void SiteMapping::validate() const {
    const std::size_t m = coarse_weights.size();
    if (fine_to_coarse.size() != fine_weights.size())
        throw MappingInconsistent("mapping arrays disagree on the fine site count");
    std::vector<double> sums(m, 0.0);
    std::vector<bool> hit(m, false);
    for (std::size_t i = 0; i < fine_to_coarse.size(); ++i) {
        const std::size_t c = fine_to_coarse[i];
        if (c >= m)
            throw MappingInconsistent("fine site " + std::to_string(i) +
                                      " maps to class " + std::to_string(c) +
                                      " out of " + std::to_string(m));
        sums[c] += fine_weights[i];
        hit[c] = true;
    }
    for (std::size_t c = 0; c < m; ++c) {
        if (!hit[c])
            throw MappingInconsistent("class " + std::to_string(c) + " has no fine site");
        if (std::abs(sums[c] - coarse_weights[c]) > 1e-12)
            throw MappingInconsistent("class " + std::to_string(c) +
                                      " weight differs from the summed fine weights");
    }
}

std::pair<SisModel, SiteMapping> reduce(const SisModel& model) {
    const std::size_t n = model.size();
    // sites with identical gamma, kernel row and kernel column collapse; this
    // is already the coarsest partition on which the kernel is block-constant
    std::vector<std::size_t> klass(n, 0);
    std::vector<std::size_t> reps;
    auto mergeable = [&](std::size_t i, std::size_t r) {
        if (std::abs(model.gamma[i] - model.gamma[r]) > kMergeTol)
            return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(model.transmission(i, j) - model.transmission(r, j)) > kMergeTol)
                return false;
            if (std::abs(model.transmission(j, i) - model.transmission(j, r)) > kMergeTol)
                return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t c = 0; c < reps.size() && !placed; ++c) {
            if (mergeable(i, reps[c])) {
                klass[i] = c;
                placed = true;
            }
        }
        if (!placed) {
            klass[i] = reps.size();
            reps.push_back(i);
        }
    }

    const std::size_t m = reps.size();
    SiteMapping mapping;
    mapping.fine_to_coarse = klass;
    mapping.fine_weights = model.space.weights;
    mapping.coarse_weights.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        mapping.coarse_weights[klass[i]] += model.space.weights[i];

    FeatureSpace space;
    space.weights = mapping.coarse_weights;
    std::vector<double> entries(m * m), gamma(m);
    for (std::size_t a = 0; a < m; ++a) {
        gamma[a] = model.gamma[reps[a]];
        for (std::size_t b = 0; b < m; ++b)
            entries[a * m + b] = model.transmission(reps[a], reps[b]);
    }
    return {SisModel(std::move(space), std::move(entries), std::move(gamma)),
            std::move(mapping)};
}

std::pair<SisModel, SiteMapping> blow_up(const SisModel& model,
                                         const std::vector<std::vector<double>>& sub_weights) {
    const std::size_t n = model.size();
    if (sub_weights.size() != n)
        throw DimensionMismatch("sub-weight list size does not match the model");
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sub_weights[i].empty())
            throw WeightMismatch("site " + std::to_string(i) + " has no parts");
        double sum = 0.0;
        for (double wpart : sub_weights[i]) {
            if (!(wpart > 0.0))
                throw WeightMismatch("sub-weights must be strictly positive");
            sum += wpart;
        }
        if (std::abs(sum - model.space.weights[i]) > 1e-12)
            throw WeightMismatch("sub-weights of site " + std::to_string(i) +
                                 " sum to " + std::to_string(sum) + ", expected " +
                                 std::to_string(model.space.weights[i]));
        total += sub_weights[i].size();
    }

    SiteMapping mapping;
    mapping.coarse_weights = model.space.weights;
    FeatureSpace space;
    space.weights.reserve(total);
    const bool with_labels = model.space.has_labels();
    double cursor = 0.0;
    std::vector<double> gamma;
    gamma.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = with_labels ? model.space.labels[i].lo : cursor;
        double sub_cursor = lo;
        for (double wpart : sub_weights[i]) {
            space.weights.push_back(wpart);
            if (with_labels)
                space.labels.push_back({sub_cursor, sub_cursor + wpart});
            sub_cursor += wpart;
            gamma.push_back(model.gamma[i]);
            mapping.fine_to_coarse.push_back(i);
            mapping.fine_weights.push_back(wpart);
        }
        if (with_labels && !space.labels.empty())
            space.labels.back().hi = model.space.labels[i].hi;
        cursor += model.space.weights[i];
    }

    std::vector<double> entries(total * total);
    for (std::size_t a = 0; a < total; ++a)
        for (std::size_t b = 0; b < total; ++b)
            entries[a * total + b] =
                model.transmission(mapping.fine_to_coarse[a], mapping.fine_to_coarse[b]);
    return {SisModel(std::move(space), std::move(entries), std::move(gamma)),
            std::move(mapping)};
}

std::pair<SisModel, SiteMapping> blow_up(const SisModel& model, const std::vector<int>& parts) {
    if (parts.size() != model.size())
        throw DimensionMismatch("parts list size does not match the model");
    std::vector<std::vector<double>> sub(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (parts[i] < 1)
            throw WeightMismatch("part counts must be >= 1");
        sub[i].assign(static_cast<std::size_t>(parts[i]),
                      model.space.weights[i] / static_cast<double>(parts[i]));
        // make the parts sum exactly to the site weight
        double sum = 0.0;
        for (std::size_t p = 0; p + 1 < sub[i].size(); ++p)
            sum += sub[i][p];
        sub[i].back() = model.space.weights[i] - sum;
    }
    return blow_up(model, sub);
}

Strategy project_strategy(const Strategy& fine_eta, const SiteMapping& mapping) {
    mapping.validate();
    if (fine_eta.size() != mapping.fine_size())
        throw DimensionMismatch("fine strategy size does not match the mapping");
    Strategy coarse = Strategy::zeros(mapping.coarse_size());
    for (std::size_t i = 0; i < fine_eta.size(); ++i)
        coarse[mapping.fine_to_coarse[i]] += fine_eta[i] * mapping.fine_weights[i];
    for (std::size_t c = 0; c < coarse.size(); ++c)
        coarse[c] /= mapping.coarse_weights[c];
    return coarse;
}

Strategy lift_strategy(const Strategy& coarse_eta, const SiteMapping& mapping) {
    mapping.validate();
    if (coarse_eta.size() != mapping.coarse_size())
        throw DimensionMismatch("coarse strategy size does not match the mapping");
    Strategy fine = Strategy::zeros(mapping.fine_size());
    for (std::size_t i = 0; i < fine.size(); ++i)
        fine[i] = coarse_eta[mapping.fine_to_coarse[i]];
    return fine;
}

EquivalenceReport verify_equivalence(const SisModel& fine, const SisModel& coarse,
                                     const SiteMapping& mapping, std::size_t samples,
                                     std::uint64_t seed) {
    mapping.validate();
    if (mapping.fine_size() != fine.size() || mapping.coarse_size() != coarse.size())
        throw MappingInconsistent("mapping does not match the two models");
    for (std::size_t i = 0; i < fine.size(); ++i) {
        if (std::abs(mapping.fine_weights[i] - fine.space.weights[i]) > 1e-12)
            throw MappingInconsistent("mapping fine weights differ from the fine model");
        const std::size_t ci = mapping.fine_to_coarse[i];
        if (std::abs(fine.gamma[i] - coarse.gamma[ci]) > 1e-12)
            throw MappingInconsistent("gamma is not constant on class " + std::to_string(ci));
        for (std::size_t j = 0; j < fine.size(); ++j) {
            const std::size_t cj = mapping.fine_to_coarse[j];
            if (std::abs(fine.transmission(i, j) - coarse.transmission(ci, cj)) > 1e-12)
                throw MappingInconsistent("kernel is not block-constant on classes " +
                                          std::to_string(ci) + "x" + std::to_string(cj));
        }
    }
    for (std::size_t c = 0; c < coarse.size(); ++c)
        if (std::abs(mapping.coarse_weights[c] - coarse.space.weights[c]) > 1e-12)
            throw MappingInconsistent("mapping coarse weights differ from the coarse model");

    EquivalenceReport report;
    const CostFunction cost = CostFunction::uniform();
    const std::size_t m = coarse.size();
    Rng rng(seed);

    std::vector<Strategy> probes;
    probes.push_back(Strategy::zeros(m));
    probes.push_back(Strategy::ones(m));
    probes.push_back(Strategy::constant(m, 0.5));
    for (std::size_t s = 0; s < samples; ++s) {
        Strategy eta = Strategy::zeros(m);
        for (std::size_t c = 0; c < m; ++c)
            eta[c] = rng.uniform();
        probes.push_back(eta);
    }

    for (const Strategy& eta : probes) {
        const Strategy lifted = lift_strategy(eta, mapping);
        report.max_re_gap = std::max(
            report.max_re_gap, std::abs(effective_R(fine, lifted) - effective_R(coarse, eta)));
        const double i_fine = solve_equilibrium(fine, lifted).infected_fraction;
        const double i_coarse = solve_equilibrium(coarse, eta).infected_fraction;
        report.max_i_gap = std::max(report.max_i_gap, std::abs(i_fine - i_coarse));
        report.max_cost_gap =
            std::max(report.max_cost_gap, std::abs(cost.value(fine.space, lifted) -
                                                   cost.value(coarse.space, eta)));
    }
    report.checks.push_back({"re_gap", report.max_re_gap, 1e-8, report.max_re_gap <= 1e-8});
    report.checks.push_back({"i_gap", report.max_i_gap, 1e-8, report.max_i_gap <= 1e-8});
    report.checks.push_back(
        {"cost_gap", report.max_cost_gap, 1e-8, report.max_cost_gap <= 1e-8});

    const double r0_gap = std::abs(basic_R(fine) - basic_R(coarse));
    report.checks.push_back({"r0_gap", r0_gap, 1e-8, r0_gap <= 1e-8});

    const double erad_fine = eradication_cost(fine, cost).cost;
    const double erad_coarse = eradication_cost(coarse, cost).cost;
    const double erad_gap = std::abs(erad_fine - erad_coarse);
    report.checks.push_back({"eradication_cost_gap", erad_gap, 1e-5, erad_gap <= 1e-5});

    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const EquivalenceCheck& c) { return c.pass; });
    return report;
}

} // namespace sisopt
