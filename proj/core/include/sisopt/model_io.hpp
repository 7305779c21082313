#ifndef SISOPT_MODEL_IO_HPP
#define SISOPT_MODEL_IO_HPP

#include <iosfwd>
#include <string>

#include "sisopt/equivalence.hpp"
#include "sisopt/model.hpp"

namespace sisopt {

/// Model file schema:
///   { "weights": [...], "kernel": [[...]], "gamma": [...],
///     "labels": [[a, b], ...] }   (labels optional)
SisModel load_model(std::istream& in);
SisModel load_model_file(const std::string& path);
void save_model(const SisModel& model, std::ostream& out);
void save_model_file(const SisModel& model, const std::string& path);

/// Strategy file: bare JSON array of per-site values.
Strategy load_strategy(std::istream& in);
Strategy load_strategy_file(const std::string& path);
void save_strategy(const Strategy& eta, std::ostream& out);

/// Mapping file schema: { "fine_to_coarse": [...] }. Weights are filled in
/// from the two models on load.
SiteMapping load_mapping(std::istream& in, const FeatureSpace& fine,
                         const FeatureSpace& coarse);
SiteMapping load_mapping_file(const std::string& path, const FeatureSpace& fine,
                              const FeatureSpace& coarse);
void save_mapping(const SiteMapping& mapping, std::ostream& out);
void save_mapping_file(const SiteMapping& mapping, const std::string& path);

} // namespace sisopt

#endif
