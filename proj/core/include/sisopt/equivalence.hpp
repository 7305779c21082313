#ifndef SISOPT_EQUIVALENCE_HPP
#define SISOPT_EQUIVALENCE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sisopt/model.hpp"

namespace sisopt {

/// Surjective map from fine sites onto coarse classes.
struct SiteMapping {
    std::vector<std::size_t> fine_to_coarse;
    std::vector<double> fine_weights;
    std::vector<double> coarse_weights;

    std::size_t fine_size() const { return fine_to_coarse.size(); }
    std::size_t coarse_size() const { return coarse_weights.size(); }

    /// Throws MappingInconsistent unless the map is onto 0..m-1 and coarse
    /// weights equal the summed fine weights.
    void validate() const;
};

/// Coarsest merge of sites with identical behavior: gamma equal and kernel
/// rows/columns equal entry-wise (tolerance 1e-12). Identity mapping when
/// nothing merges. Interval labels are dropped on the reduced model.
std::pair<SisModel, SiteMapping> reduce(const SisModel& model);

/// Splits each site i into parts carrying sub_weights[i] (positive, summing
/// to the site weight); kernel and gamma are copied block-constant and labels
/// are subdivided proportionally.
std::pair<SisModel, SiteMapping> blow_up(const SisModel& model,
                                         const std::vector<std::vector<double>>& sub_weights);

/// Equal-mass split of site i into parts[i] pieces.
std::pair<SisModel, SiteMapping> blow_up(const SisModel& model,
                                         const std::vector<int>& parts);

/// Conditional expectation: coarse value = weight-averaged fine values.
Strategy project_strategy(const Strategy& fine_eta, const SiteMapping& mapping);

/// Class-constant lift; preserves cost and loss exactly.
Strategy lift_strategy(const Strategy& coarse_eta, const SiteMapping& mapping);

struct EquivalenceCheck {
    std::string name;
    double gap = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct EquivalenceReport {
    std::vector<EquivalenceCheck> checks;
    bool all_pass = false;
    double max_re_gap = 0.0;
    double max_i_gap = 0.0;
    double max_cost_gap = 0.0;
};

/// Checks that fine and coarse models agree through the mapping: for
/// `samples` seeded coarse strategies and their lifts, R_e, I and uniform
/// cost gaps stay below 1e-8; R_0 matches and eradication costs agree within
/// 1e-5. Structural inconsistencies throw MappingInconsistent.
EquivalenceReport verify_equivalence(const SisModel& fine, const SisModel& coarse,
                                     const SiteMapping& mapping,
                                     std::size_t samples, std::uint64_t seed);

} // namespace sisopt

#endif
