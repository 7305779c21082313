#ifndef SISOPT_MODEL_HPP
#define SISOPT_MODEL_HPP

#include <cstddef>
#include <vector>

#include "sisopt/errors.hpp"

namespace sisopt {

/// Half-open sub-interval [lo, hi) of [0, 1), recording where a site sits
/// when the model was discretized from a step kernel on the unit interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Finite weighted site set standing in for a probability space: site i
/// carries mass weights[i]. Labels are optional interval provenance.
struct FeatureSpace {
    std::vector<double> weights;
    std::vector<Interval> labels; // empty when absent

    std::size_t size() const { return weights.size(); }
    bool has_labels() const { return !labels.empty(); }

    /// Throws unless weights are strictly positive, sum to 1 within 1e-12,
    /// and labels (when present) tile [0,1) in order with lengths equal to
    /// the weights.
    void validate() const;
};

bool same_space(const FeatureSpace& a, const FeatureSpace& b, double tol = 1e-12);

/// Dense non-negative kernel k(x_i, x_j) over a feature space.
struct Kernel {
    FeatureSpace space;
    std::vector<double> entries; // row-major, size n*n

    std::size_t size() const { return space.size(); }
    double operator()(std::size_t i, std::size_t j) const {
        return entries[i * space.size() + j];
    }
    double& at(std::size_t i, std::size_t j) { return entries[i * space.size() + j]; }

    /// Throws unless all entries are finite and non-negative and the shape
    /// matches the space.
    void validate() const;
};

/// Per-site proportion of NON-vaccinated individuals, values in [0, 1].
struct Strategy {
    std::vector<double> eta;

    std::size_t size() const { return eta.size(); }
    double operator[](std::size_t i) const { return eta[i]; }
    double& operator[](std::size_t i) { return eta[i]; }

    static Strategy constant(std::size_t n, double value);
    static Strategy ones(std::size_t n) { return constant(n, 1.0); }
    static Strategy zeros(std::size_t n) { return constant(n, 0.0); }

    void validate() const;
};

/// SIS model: transmission kernel k (rates), recovery rates gamma, and the
/// derived next-generation kernel k(x,y)/gamma(y) computed at construction.
struct SisModel {
    FeatureSpace space;
    Kernel transmission;        // k
    std::vector<double> gamma;  // per-site recovery rates, > 0
    Kernel next_gen;            // k_ij / gamma_j

    SisModel(FeatureSpace space_, std::vector<double> kernel_entries,
             std::vector<double> gamma_);

    std::size_t size() const { return space.size(); }

    void validate() const;
};

enum class IrreducibilityTag { Irreducible, QuasiIrreducible, Reducible };

struct IrreducibilityClass {
    IrreducibilityTag tag = IrreducibilityTag::Reducible;
    std::vector<std::size_t> zero_set; // sites with zero row and column mass
};

const char* to_string(IrreducibilityTag tag);

/// One site per block; labels assigned as consecutive intervals of [0,1).
SisModel build_block_model(const std::vector<double>& block_weights,
                           const std::vector<std::vector<double>>& block_kernel,
                           const std::vector<double>& block_gamma);

/// Single-site model with kernel [[kappa]].
SisModel build_homogeneous(double kappa, double gamma = 1.0);

/// Truncation of the infinite multipartite kernel: groups n = 1..N of mass
/// 2^-n plus one remainder site of mass 2^-N carrying the tail, kernel equal
/// to kappa off the diagonal and 0 on it, gamma = 1.
SisModel build_multipartite(int groups, double kappa);

/// Same as build_multipartite but with the diagonal blocks set to eps.
SisModel build_perturbed_multipartite(int groups, double kappa, double eps);

/// Mixed (p, q) double norm of the kernel, 1/p + 1/q = 1, p in (1, inf).
double double_norm(const Kernel& kernel, double p);

/// Classifies the kernel support graph: irreducible, irreducible outside the
/// zero-mass sites, or neither.
IrreducibilityClass irreducibility_class(const Kernel& kernel);

/// k_ij / gamma_j; same as model.next_gen.
Kernel next_gen_kernel(const SisModel& model);

} // namespace sisopt

#endif
