#include "sisopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sisopt/rng.hpp"

namespace sisopt {

namespace {

void check_dims(const Kernel& kernel, const Strategy& eta, std::size_t vlen) {
    const std::size_t n = kernel.size();
    if (eta.size() != n)
        throw DimensionMismatch("strategy has " + std::to_string(eta.size()) +
                                " sites, kernel has " + std::to_string(n));
    if (vlen != n)
        throw DimensionMismatch("vector has " + std::to_string(vlen) +
                                " entries, kernel has " + std::to_string(n));
}

double weighted_norm(const std::vector<double>& v, const std::vector<double>& mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += v[i] * v[i] * mu[i];
    return std::sqrt(s);
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i] * mu[i];
    return s;
}

// shift that moves the Perron root strictly ahead of any other peripheral
// eigenvalue; eigenvalues of T + delta I are exactly those of T plus delta
double spectral_shift(const Kernel& kernel, const Strategy& eta) {
    const std::size_t n = kernel.size();
    const auto& mu = kernel.space.weights;
    double max_row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            row += kernel(i, j) * eta[j] * mu[j];
        max_row = std::max(max_row, row);
    }
    return 1e-2 * max_row;
}

struct PowerResult {
    double rho = 0.0;
    std::vector<double> v;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

template <class Apply>
PowerResult power_iterate(Apply&& apply, const std::vector<double>& mu, double delta,
                          const PerronOptions& opts) {
    const std::size_t n = mu.size();
    std::vector<double> v(n, 1.0);
    double nv = weighted_norm(v, mu);
    for (auto& x : v)
        x /= nv;
    double lam = 0.0, lam_prev = 0.0;
    std::size_t it = 0;
    std::size_t since_settled = 0;
    bool settled = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        std::vector<double> w = apply(v);
        for (std::size_t i = 0; i < n; ++i)
            w[i] += delta * v[i];
        lam = weighted_dot(v, w, mu); // ||v||_mu = 1
        // w - lam v equals T v - rho v for rho = lam - delta
        double vmax = 0.0, rmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            vmax = std::max(vmax, std::abs(v[i]));
            rmax = std::max(rmax, std::abs(w[i] - lam * v[i]));
        }
        const double rel = vmax > 0.0 ? rmax / vmax : 0.0;
        double nw = weighted_norm(w, mu);
        if (nw == 0.0) {
            lam = 0.0;
            settled = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / nw;
        // the quotient settles before the vector does; keep sweeping until
        // the residual follows, with a cap for defective roots whose vector
        // only converges algebraically
        if (it >= 2 && std::abs(lam - lam_prev) <= opts.tol_rel * std::max(1.0, std::abs(lam)))
            ++since_settled;
        else
            since_settled = 0;
        if (since_settled > 0) {
            const double rho_now = std::max(lam - delta, 0.0);
            if (rel <= opts.tol_residual * std::max(rho_now, 1.0) || since_settled >= 200) {
                settled = true;
                break;
            }
        }
        lam_prev = lam;
    }
    PowerResult res;
    res.rho = std::max(lam - delta, 0.0);
    res.v = std::move(v);
    res.iterations = std::min(it, opts.max_iter);
    // relative sup-norm residual of the unshifted operator
    std::vector<double> tv = apply(res.v);
    double vmax = 0.0, rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        vmax = std::max(vmax, std::abs(res.v[i]));
        rmax = std::max(rmax, std::abs(tv[i] - res.rho * res.v[i]));
    }
    res.residual = vmax > 0.0 ? rmax / vmax : 0.0;
    res.converged = settled || res.residual <= opts.tol_residual * std::max(res.rho, 1.0);
    return res;
}

} // namespace

std::vector<double> apply_T(const Kernel& kernel, const Strategy& eta,
                            std::span<const double> v) {
    check_dims(kernel, eta, v.size());
    const std::size_t n = kernel.size();
    const auto& mu = kernel.space.weights;
    std::vector<double> scaled(n), w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        scaled[j] = eta[j] * v[j] * mu[j];
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = kernel.entries.data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += row[j] * scaled[j];
        w[i] = acc;
    }
    return w;
}

std::vector<double> apply_T_adjoint(const Kernel& kernel, const Strategy& eta,
                                    std::span<const double> v) {
    check_dims(kernel, eta, v.size());
    const std::size_t n = kernel.size();
    const auto& mu = kernel.space.weights;
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = kernel.entries.data() + i * n;
        const double vi = v[i] * mu[i];
        for (std::size_t j = 0; j < n; ++j)
            w[j] += row[j] * vi;
    }
    for (std::size_t j = 0; j < n; ++j)
        w[j] *= eta[j];
    return w;
}

PerronTriple perron_triple(const Kernel& kernel, const Strategy& eta,
                           const PerronOptions& opts) {
    check_dims(kernel, eta, eta.size());
    const auto& mu = kernel.space.weights;
    const double delta = spectral_shift(kernel, eta);

    PowerResult right = power_iterate(
        [&](const std::vector<double>& v) { return apply_T(kernel, eta, v); }, mu, delta, opts);
    PowerResult left = power_iterate(
        [&](const std::vector<double>& v) { return apply_T_adjoint(kernel, eta, v); }, mu, delta,
        opts);

    PerronTriple triple;
    triple.rho = right.rho;
    triple.v_right = std::move(right.v);
    triple.v_left = std::move(left.v);
    triple.iterations = right.iterations + left.iterations;
    triple.residual = std::max(right.residual, left.residual);

    if (triple.rho > 0.0) {
        const double s = weighted_dot(triple.v_left, triple.v_right, mu);
        if (s > 1e-12) {
            for (auto& x : triple.v_left)
                x /= s;
            triple.left_normalized = true;
        }
    }
    if (!right.converged || !left.converged)
        throw PerronNoConvergence("power iteration hit the iteration cap (residual " +
                                      std::to_string(triple.residual) + ")",
                                  triple);
    return triple;
}

double spectral_radius(const Kernel& kernel, const Strategy& eta,
                       const PerronOptions& opts) {
    check_dims(kernel, eta, eta.size());
    const auto& mu = kernel.space.weights;
    const double delta = spectral_shift(kernel, eta);
    PowerResult right = power_iterate(
        [&](const std::vector<double>& v) { return apply_T(kernel, eta, v); }, mu, delta, opts);
    if (!right.converged) {
        PerronTriple partial;
        partial.rho = right.rho;
        partial.v_right = std::move(right.v);
        partial.iterations = right.iterations;
        partial.residual = right.residual;
        throw PerronNoConvergence("power iteration hit the iteration cap (residual " +
                                      std::to_string(partial.residual) + ")",
                                  partial);
    }
    return right.rho;
}

double effective_R(const SisModel& model, const Strategy& eta, const PerronOptions& opts) {
    return spectral_radius(model.next_gen, eta, opts);
}

double basic_R(const SisModel& model, const PerronOptions& opts) {
    return effective_R(model, Strategy::ones(model.size()), opts);
}

std::vector<double> gradient_Re(const SisModel& model, const Strategy& eta,
                                const PerronOptions& opts) {
    const Kernel& kernel = model.next_gen;
    const std::size_t n = kernel.size();
    check_dims(kernel, eta, eta.size());

    PerronTriple triple = perron_triple(kernel, eta, opts);
    if (triple.rho == 0.0)
        return std::vector<double>(n, 0.0);

    // a simple Perron root needs a (quasi-)irreducible operator; refuse
    // rather than return one branch of a non-smooth point
    Kernel supported = kernel;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            supported.at(i, j) *= eta[j];
    if (irreducibility_class(supported).tag == IrreducibilityTag::Reducible)
        throw DegenerateEigenpair("kernel restricted to the strategy support is reducible");
    if (!triple.left_normalized)
        throw DegenerateEigenpair("left/right Perron vectors have vanishing overlap");
    if (triple.residual > 1e-7 * std::max(1.0, triple.rho))
        throw DegenerateEigenpair("Perron residual too large: " + std::to_string(triple.residual));

    const auto& mu = kernel.space.weights;
    std::vector<double> g(n, 0.0);
    // column sums of v_g against the kernel, then scale by v_d(j) mu_j
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = kernel.entries.data() + i * n;
        const double vi = triple.v_left[i] * mu[i];
        for (std::size_t j = 0; j < n; ++j)
            g[j] += row[j] * vi;
    }
    for (std::size_t j = 0; j < n; ++j)
        g[j] = std::max(g[j] * triple.v_right[j] * mu[j], 0.0);
    return g;
}

double re_stability_gap(const SisModel& model_a, const SisModel& model_b,
                        std::size_t samples, std::uint64_t seed,
                        const PerronOptions& opts) {
    if (!same_space(model_a.space, model_b.space))
        throw SpaceMismatch("stability gap needs models on the same feature space");
    const std::size_t n = model_a.size();
    double gap = 0.0;
    auto probe = [&](const Strategy& eta) {
        const double ra = effective_R(model_a, eta, opts);
        const double rb = effective_R(model_b, eta, opts);
        gap = std::max(gap, std::abs(ra - rb));
    };
    probe(Strategy::zeros(n));
    probe(Strategy::ones(n));
    probe(Strategy::constant(n, 0.5));
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        Strategy eta = Strategy::zeros(n);
        for (std::size_t i = 0; i < n; ++i)
            eta[i] = rng.uniform();
        probe(eta);
    }
    return gap;
}

} // namespace sisopt
