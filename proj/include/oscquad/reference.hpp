#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscquad/bernstein.hpp"
#include "oscquad/gauss_legendre.hpp"
#include "oscquad/product_rule.hpp"
#include "oscquad/summation.hpp"

namespace oscquad {

/// Controls for the independent reference integrator. The panel count starts
/// at refinement * N (N from the oscillation-aware partition) and doubles
/// until two levels agree.
struct ReferenceConfig {
    int refinement = 8;
    int points_per_panel = 32;
    double target_tol = 1e-13;
    int max_doublings = 12;
};

struct ReferenceResult {
    double value = 0.0;
    double achieved_tol = std::numeric_limits<double>::infinity();
    bool converged = false;
    int doublings = 0;
};

namespace detail {

/// Composite Gauss-Legendre on [-a, a] with `panels` equal panels. Panel
/// sums are reduced pairwise; evaluation points are clamped into [-a, a] so
/// integrands defined only there (the basis) stay in domain.
template <typename F>
double composite_gl(F&& f, const OscillatoryKernel& kernel, double a, double y, long long panels,
                    const GaussRule& gl) {
    const double width = 2.0 * a / static_cast<double>(panels);
    std::vector<double> panel_sums(static_cast<std::size_t>(panels));
    for (long long p = 0; p < panels; ++p) {
        const double left = -a + static_cast<double>(p) * width;
        double s = 0.0;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            double x = left + 0.5 * width * (gl.nodes[k] + 1.0);
            x = x < -a ? -a : (x > a ? a : x);
            s += gl.weights[k] * (f(x) * kernel_eval(kernel, y - x));
        }
        panel_sums[static_cast<std::size_t>(p)] = s;
    }
    return 0.5 * width * pairwise_sum(panel_sums);
}

inline void check_reference_config(const ReferenceConfig& cfg) {
    if (cfg.refinement < 1)
        throw std::invalid_argument("reference: refinement factor must be >= 1");
    if (cfg.points_per_panel < 2)
        throw std::invalid_argument("reference: need at least 2 points per panel");
    if (!(cfg.target_tol > 0.0))
        throw std::invalid_argument("reference: target tolerance must be positive");
    if (cfg.max_doublings < 0)
        throw std::invalid_argument("reference: doubling cap must be >= 0");
}

} // namespace detail

/// Ground-truth integral of f(x) * kappa(omega(y-x)) over [-a, a], computed
/// without any code path of the product rule: composite Gauss-Legendre over
/// refinement*N equal panels, doubled until two successive levels agree
/// within target_tol. Returns the finer value; achieved_tol is the last
/// interlevel difference, and converged reports whether the target was met
/// (it is never silently ignored).
template <typename F>
ReferenceResult reference_integral(F&& f, const OscillatoryKernel& kernel, double a, double y,
                                   const ReferenceConfig& cfg = {}) {
    detail::check_reference_config(cfg);
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("reference: half-width must be positive and finite");
    const Partition part = make_partition(a, kernel);
    const auto gl = cached_gl_rule(cfg.points_per_panel);

    long long panels = static_cast<long long>(cfg.refinement) * part.count;
    ReferenceResult result;
    result.value = detail::composite_gl(f, kernel, a, y, panels, *gl);
    for (int d = 1; d <= cfg.max_doublings; ++d) {
        panels *= 2;
        const double finer = detail::composite_gl(f, kernel, a, y, panels, *gl);
        result.achieved_tol = std::abs(finer - result.value);
        result.value = finer;
        result.doublings = d;
        if (result.achieved_tol <= cfg.target_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

/// Reference value for the moment q_i(y): reference_integral with the basis
/// polynomial as integrand (basis_eval is the one shared dependency).
inline ReferenceResult reference_q(int i, int m, double a, const OscillatoryKernel& kernel,
                                   double y, const ReferenceConfig& cfg = {}) {
    if (m < 1) throw std::invalid_argument("reference_q: degree must be positive");
    if (i < 0 || i > m) throw std::domain_error("reference_q: basis index outside 0..m");
    return reference_integral([m, a, i](double x) { return basis_eval(m, a, i, x); }, kernel, a, y,
                              cfg);
}

} // namespace oscquad
