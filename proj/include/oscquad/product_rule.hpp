#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscquad/bernstein.hpp"
#include "oscquad/gauss_legendre.hpp"
#include "oscquad/grid.hpp"
#include "oscquad/summation.hpp"

namespace oscquad {

enum class KernelVariant { sin, cos };

/// The oscillatory factor kappa(omega * u) with kappa in {sin, cos}.
/// omega is a magnitude; negative frequencies are rejected, callers fold the
/// sign into the function (sin is odd, cos is even).
struct OscillatoryKernel {
    KernelVariant variant = KernelVariant::sin;
    double omega = 0.0;
};

inline OscillatoryKernel make_kernel(KernelVariant variant, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("make_kernel: frequency must be finite and >= 0");
    return {variant, omega};
}

inline double kernel_eval(const OscillatoryKernel& kernel, double u) {
    const double phase = kernel.omega * u;
    return kernel.variant == KernelVariant::sin ? std::sin(phase) : std::cos(phase);
}

/// Equal subdivision of [-a, a] into N = floor(omega*a/pi) + 1 pieces, so
/// each subinterval sees a bounded slice of kernel phase no matter how large
/// omega grows.
struct Partition {
    int count = 0;            // N
    double half_width = 0.0;  // a
    double step = 0.0;        // eta = 2a/N
    std::vector<double> breakpoints;
};

inline Partition make_partition(double a, const OscillatoryKernel& kernel) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("make_partition: half-width must be positive and finite");
    if (!(kernel.omega >= 0.0) || !std::isfinite(kernel.omega))
        throw std::invalid_argument("make_partition: frequency must be finite and >= 0");
    const double raw = std::floor(kernel.omega * a / std::numbers::pi) + 1.0;
    if (!(raw < 1e9)) throw std::invalid_argument("make_partition: frequency too large");
    Partition part;
    part.count = static_cast<int>(raw);
    part.half_width = a;
    part.step = 2.0 * a / part.count;
    part.breakpoints.resize(static_cast<std::size_t>(part.count) + 1);
    for (int h = 0; h <= part.count; ++h)
        part.breakpoints[static_cast<std::size_t>(h)] = -a + h * part.step;
    part.breakpoints.front() = -a;
    part.breakpoints.back() = a;
    return part;
}

namespace detail {

/// Pullback of the Gauss node z in [-1,1] to the h-th subinterval (0-based):
/// x_h + eta*(z+1)/2, clamped so accumulated rounding can never push the
/// point outside [-a, a].
inline double subinterval_point(const Partition& part, int h, double z) {
    const double x = part.breakpoints[static_cast<std::size_t>(h)] + 0.5 * part.step * (z + 1.0);
    const double a = part.half_width;
    return x < -a ? -a : (x > a ? a : x);
}

inline void check_moment_domain(int m, double a, double y) {
    if (m < 1) throw std::invalid_argument("moment: degree must be positive");
    if (!(y >= -a && y <= a)) throw std::domain_error("moment: y outside [-a, a]");
}

} // namespace detail

/// The number of Gauss points per subinterval when the caller does not pick
/// one: the basis degree, floored at two.
inline int default_gl_points(int m) { return m < 2 ? 2 : m; }

inline int resolve_gl_points(int m, int requested) {
    if (requested < 0) throw std::invalid_argument("gl point count must be >= 0 (0 = default)");
    return requested == 0 ? default_gl_points(m) : requested;
}

/// The modified moment q_i(y) = integral of p_{m,i}(x) * kappa(omega(y-x))
/// over [-a, a], approximated subinterval by subinterval with the supplied
/// Gauss rule:
///
///   (a/N) * sum_h sum_k lambda_k * p_{m,i}(x_{h,k}) * kappa(omega(y - x_{h,k}))
///
/// Terms are reduced by a fixed pairwise tree shaped by the partition —
/// pairwise over k within each subinterval, then pairwise over the N
/// subinterval partials — so the result is independent of any internal
/// parallelism and bit-identical with the batched table below.
inline double moment(int i, double y, const OscillatoryKernel& kernel, const Partition& part,
                     int m, const GaussRule& gl) {
    detail::check_moment_domain(m, part.half_width, y);
    if (i < 0 || i > m) throw std::domain_error("moment: basis index outside 0..m");
    if (gl.points < 1) throw std::invalid_argument("moment: empty Gauss rule");
    const int n = gl.points;
    std::vector<double> terms(static_cast<std::size_t>(n));
    std::vector<double> partials(static_cast<std::size_t>(part.count));
    for (int h = 0; h < part.count; ++h) {
        for (int k = 0; k < n; ++k) {
            const double x = detail::subinterval_point(part, h, gl.nodes[static_cast<std::size_t>(k)]);
            terms[static_cast<std::size_t>(k)] =
                gl.weights[static_cast<std::size_t>(k)] *
                (basis_eval(m, part.half_width, i, x) * kernel_eval(kernel, y - x));
        }
        partials[static_cast<std::size_t>(h)] = pairwise_sum(terms);
    }
    return (part.half_width / part.count) * pairwise_sum(partials);
}

/// All m+1 moments at one evaluation point.
struct MomentTable {
    double y = 0.0;
    OscillatoryKernel kernel;
    int degree = 0;
    double half_width = 0.0;
    int gl_points = 0;
    std::vector<double> q;
};

/// Builds the full moment vector, sharing the kernel value and the batched
/// basis row across all m+1 indices at each partition point (one
/// basis_eval_all per point instead of m+1 scalar evaluations). Each q[i]
/// reproduces moment(i, ...) bit for bit: same terms, same tree.
inline MomentTable make_moment_table(int m, double a, const OscillatoryKernel& kernel, double y,
                                     int gl_points = 0) {
    detail::check_moment_domain(m, a, y);
    const Partition part = make_partition(a, kernel);
    const int n = resolve_gl_points(m, gl_points);
    const auto gl = cached_gl_rule(n);
    const std::size_t rows = static_cast<std::size_t>(m) + 1;

    std::vector<double> basis_row(rows);
    // terms[i*n + k]: contributions of subinterval h for moment i, refilled
    // per subinterval; partials[i*N + h]: its pairwise sum.
    std::vector<double> terms(rows * static_cast<std::size_t>(n));
    std::vector<double> partials(rows * static_cast<std::size_t>(part.count));
    for (int h = 0; h < part.count; ++h) {
        for (int k = 0; k < n; ++k) {
            const double x = detail::subinterval_point(part, h, gl->nodes[static_cast<std::size_t>(k)]);
            const double kap = kernel_eval(kernel, y - x);
            const double lam = gl->weights[static_cast<std::size_t>(k)];
            basis_eval_all(m, a, x, basis_row);
            for (std::size_t i = 0; i < rows; ++i)
                terms[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
                    lam * (basis_row[i] * kap);
        }
        for (std::size_t i = 0; i < rows; ++i)
            partials[i * static_cast<std::size_t>(part.count) + static_cast<std::size_t>(h)] =
                pairwise_sum(std::span<const double>(terms).subspan(i * static_cast<std::size_t>(n),
                                                                    static_cast<std::size_t>(n)));
    }

    MomentTable table;
    table.y = y;
    table.kernel = kernel;
    table.degree = m;
    table.half_width = a;
    table.gl_points = n;
    table.q.resize(rows);
    const double scale = part.half_width / part.count;
    for (std::size_t i = 0; i < rows; ++i)
        table.q[i] = scale * pairwise_sum(std::span<const double>(partials).subspan(
                                 i * static_cast<std::size_t>(part.count),
                                 static_cast<std::size_t>(part.count)));
    return table;
}

/// Per-sample quadrature weights w[j] = sum_i c_{ij} q_i(y): the moment
/// vector pushed through the transposed Boolean-sum matrix.
struct RuleWeights {
    double y = 0.0;
    OscillatoryKernel kernel;
    int degree = 0;
    double half_width = 0.0;
    int ell = 0;
    std::vector<double> weights;
};

inline RuleWeights compute_weights(int m, double a, int ell, const OscillatoryKernel& kernel,
                                   double y, int gl_points = 0) {
    const auto C = cached_boolean_sum(m, a, ell);
    const MomentTable table = make_moment_table(m, a, kernel, y, gl_points);
    RuleWeights rw;
    rw.y = y;
    rw.kernel = kernel;
    rw.degree = m;
    rw.half_width = a;
    rw.ell = ell;
    rw.weights = C->entries().apply_transposed(table.q);
    return rw;
}

/// The product rule itself: samples dotted with the weights, ascending j.
inline double integrate(const GridFunction& fs, const OscillatoryKernel& kernel, int ell, double y,
                        int gl_points = 0) {
    const RuleWeights rw =
        compute_weights(fs.grid.degree, fs.grid.half_width, ell, kernel, y, gl_points);
    double s = 0.0;
    for (std::size_t j = 0; j < rw.weights.size(); ++j) s += fs.values[j] * rw.weights[j];
    return s;
}

/// Elementwise integrate over a list of evaluation points; the Boolean-sum
/// matrix is shared through the cache, moments are per point.
inline std::vector<double> integrate_many(const GridFunction& fs, const OscillatoryKernel& kernel,
                                          int ell, std::span<const double> ys, int gl_points = 0) {
    std::vector<double> out;
    out.reserve(ys.size());
    for (double y : ys) out.push_back(integrate(fs, kernel, ell, y, gl_points));
    return out;
}

} // namespace oscquad
