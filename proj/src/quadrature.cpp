#include "uavsec/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "uavsec/errors.hpp"

namespace uavsec::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr std::array<double, 15> kXgk = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr std::array<double, 15> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr std::array<double, 15> kWg = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0};

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

Panel evaluate_panel(const BatchIntegrand& f, double a, double b, double* xs, double* ys) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < 15; ++i) xs[i] = mid + half * kXgk[i];
    f(xs, ys, 15);
    double k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 15; ++i) {
        k15 += kWgk[i] * ys[i];
        g7 += kWg[i] * ys[i];
    }
    k15 *= half;
    g7 *= half;
    // QUADPACK-style error estimate, sharper than |k15 - g7| alone.
    double resabs = 0.0;
    for (int i = 0; i < 15; ++i) resabs += kWgk[i] * std::abs(ys[i]);
    resabs *= std::abs(half);
    double err = std::abs(k15 - g7);
    if (resabs > 0.0 && err > 0.0) {
        const double scale = std::pow(200.0 * err / resabs, 1.5);
        if (scale < 1.0) err = resabs * scale;
    }
    return Panel{a, b, k15, err};
}

} // namespace

std::span<const double> kronrod_nodes() { return kXgk; }
std::span<const double> kronrod_weights() { return kWgk; }
std::span<const double> gauss_weights() { return kWg; }

Result integrate(const BatchIntegrand& f, std::span<const double> edges, const Options& opts) {
    Result res;
    if (edges.size() < 2) return res;

    double xs[15], ys[15];
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    double total = 0.0, total_err = 0.0;
    std::size_t evals = 0;

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        Panel p = evaluate_panel(f, edges[i], edges[i + 1], xs, ys);
        evals += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (total_err > tolerance() && !heap.empty() && heap.size() < opts.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval no longer splittable at double precision.
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid, xs, ys);
        Panel right = evaluate_panel(f, mid, worst.b, xs, ys);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    res.value = total;
    res.error = total_err;
    res.evaluations = evals;
    res.converged = total_err <= tolerance();
    if (!res.converged && opts.throw_on_failure) {
        throw NumericToleranceError("quadrature did not reach the requested tolerance",
                                    res.value, res.error);
    }
    return res;
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const Options& opts) {
    const double edges[2] = {a, b};
    auto batch = [&f](const double* x, double* y, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) y[i] = f(x[i]);
    };
    return integrate(batch, edges, opts).value;
}

} // namespace uavsec::quad
