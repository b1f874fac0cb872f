#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Adaptive Gauss-Kronrod (G7/K15) integration. Integrands are evaluated in
// batches of nodes so implementations can vectorize; panels can be pre-split
// at known kinks or boundary layers before refinement starts.

namespace uavsec::quad {

/// Fills y[i] = f(x[i]) for i in [0, n).
using BatchIntegrand = std::function<void(const double* x, double* y, std::size_t n)>;

struct Options {
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
    std::size_t max_panels = 4000;
    bool throw_on_failure = true;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Integrates over [edges.front(), edges.back()] with initial panels between
/// consecutive edges, then refines the worst panel until the summed error
/// estimate satisfies err < max(abs_tol, rel_tol * |value|).
/// Throws NumericToleranceError on failure when opts.throw_on_failure.
Result integrate(const BatchIntegrand& f, std::span<const double> edges, const Options& opts);

/// Convenience wrapper for a single interval and a scalar integrand.
double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const Options& opts);

/// G7/K15 nodes on [-1, 1] (15 abscissae) and weights, exposed for reuse.
std::span<const double> kronrod_nodes();
std::span<const double> kronrod_weights();
std::span<const double> gauss_weights();  ///< zero entries at Kronrod-only nodes

} // namespace uavsec::quad
