#ifndef SISOPT_SPECTRAL_HPP
#define SISOPT_SPECTRAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sisopt/model.hpp"

namespace sisopt {

struct PerronOptions {
    double tol_rel = 1e-12;      // stop when the Rayleigh quotient settles
    std::size_t max_iter = 100000;
    double tol_residual = 1e-9;  // accepted residual at the iteration cap
};

/// Spectral radius with right/left Perron vectors of the discretized
/// operator (T v)_i = sum_j kk_ij eta_j v_j mu_j. v_right has unit weighted
/// 2-norm; v_left is rescaled so <v_left, v_right>_mu = 1 when possible.
struct PerronTriple {
    double rho = 0.0;
    std::vector<double> v_right;
    std::vector<double> v_left;
    std::size_t iterations = 0;
    double residual = 0.0;       // worst relative sup-norm residual of the pair
    bool left_normalized = false;
};

/// Iteration cap reached; the best triple found so far rides along.
class PerronNoConvergence : public NoConvergence {
public:
    PerronNoConvergence(const std::string& what, PerronTriple partial_)
        : NoConvergence(what), partial(std::move(partial_)) {}
    PerronTriple partial;
};

/// w_i = sum_j kk_ij eta_j v_j mu_j.
std::vector<double> apply_T(const Kernel& kernel, const Strategy& eta,
                            std::span<const double> v);

/// Adjoint in the mu-weighted inner product: w_j = eta_j sum_i kk_ij v_i mu_i.
std::vector<double> apply_T_adjoint(const Kernel& kernel, const Strategy& eta,
                                    std::span<const double> v);

/// Power iteration on the shifted operator v -> Tv + delta v with
/// delta = 1e-2 * max weighted row sum; the shift separates the Perron root
/// from peripheral eigenvalues of equal modulus (bipartite-type kernels).
PerronTriple perron_triple(const Kernel& kernel, const Strategy& eta,
                           const PerronOptions& opts = {});

/// Right-vector-only fast path returning just the spectral radius.
double spectral_radius(const Kernel& kernel, const Strategy& eta,
                       const PerronOptions& opts = {});

/// R_e(eta) = rho(T_{kk eta}) for the model's next-generation kernel.
double effective_R(const SisModel& model, const Strategy& eta,
                   const PerronOptions& opts = {});

/// R_0 = R_e(1).
double basic_R(const SisModel& model, const PerronOptions& opts = {});

/// First-order sensitivity d R_e / d eta_j = (sum_i v_g(i) kk_ij mu_i) v_d(j) mu_j
/// with (v_g, v_d) the normalized Perron pair of T_{kk eta}. Entries are
/// non-negative. Throws DegenerateEigenpair when the pair is not trustworthy
/// (reducible support or residuals above tolerance); returns the zero vector
/// when rho = 0.
std::vector<double> gradient_Re(const SisModel& model, const Strategy& eta,
                                const PerronOptions& opts = {});

/// Monte-Carlo lower bound on sup_eta |R_e[a](eta) - R_e[b](eta)|: the max
/// over `samples` seeded random strategies plus {0, 1, 1/2}.
double re_stability_gap(const SisModel& model_a, const SisModel& model_b,
                        std::size_t samples, std::uint64_t seed,
                        const PerronOptions& opts = {});

} // namespace sisopt

#endif
