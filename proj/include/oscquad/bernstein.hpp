#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscquad/grid.hpp"
#include "oscquad/matrix.hpp"

namespace oscquad {

namespace detail {

/// log C(m,k) for k = 0..m, kept in extended precision. The basis is
/// evaluated as exp of a sum whose terms reach the thousands for m near
/// 512 while the result is O(1); the extra mantissa bits keep that
/// cancellation from eating the double-precision budget.
inline const std::vector<long double>& log_binomial_row(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const std::vector<long double>>> cache;
    std::scoped_lock lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) {
        auto row = std::make_unique<std::vector<long double>>(static_cast<std::size_t>(m) + 1);
        const long double lg_m1 = std::lgamma(static_cast<long double>(m) + 1.0L);
        for (int k = 0; k <= m; ++k)
            (*row)[static_cast<std::size_t>(k)] =
                lg_m1 - std::lgamma(static_cast<long double>(k) + 1.0L) -
                std::lgamma(static_cast<long double>(m - k) + 1.0L);
        it = cache.emplace(m, std::move(row)).first;
    }
    return *it->second;
}

/// Shared per-x state for log-space basis evaluation: log((a+x)/2a) and
/// log((a-x)/2a), both formed in extended precision.
struct BasisLogs {
    long double log_plus;
    long double log_minus;
};

inline BasisLogs basis_logs(double a, double x) {
    const long double al = a;
    const long double xl = x;
    return {std::log((al + xl) / (2.0L * al)), std::log((al - xl) / (2.0L * al))};
}

inline double basis_term(int m, int k, const BasisLogs& logs, const std::vector<long double>& lb) {
    const long double t = lb[static_cast<std::size_t>(k)] +
                          static_cast<long double>(k) * logs.log_plus +
                          static_cast<long double>(m - k) * logs.log_minus;
    return std::exp(static_cast<double>(t));
}

inline void check_basis_domain(int m, double a, double x) {
    if (m < 1) throw std::invalid_argument("bernstein: degree must be positive");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("bernstein: half-width must be positive and finite");
    if (!(x >= -a && x <= a))
        throw std::domain_error("bernstein: evaluation point outside [-a, a]");
}

} // namespace detail

/// Bernstein basis polynomial of degree m on [-a, a] at x, for index k.
/// Evaluated in log space so no intermediate overflows for m up to 1024;
/// the endpoint cases x = +-a are returned directly.
inline double basis_eval(int m, double a, int k, double x) {
    detail::check_basis_domain(m, a, x);
    if (k < 0 || k > m) throw std::domain_error("basis_eval: index outside 0..m");
    if (x == -a) return k == 0 ? 1.0 : 0.0;
    if (x == a) return k == m ? 1.0 : 0.0;
    return detail::basis_term(m, k, detail::basis_logs(a, x), detail::log_binomial_row(m));
}

/// All m+1 basis values at x. Component k matches basis_eval(m, a, k, x)
/// bit for bit; the per-x logs are computed once.
inline void basis_eval_all(int m, double a, double x, std::span<double> out) {
    detail::check_basis_domain(m, a, x);
    if (out.size() != static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("basis_eval_all: output span has wrong length");
    if (x == -a) {
        for (auto& v : out) v = 0.0;
        out[0] = 1.0;
        return;
    }
    if (x == a) {
        for (auto& v : out) v = 0.0;
        out[static_cast<std::size_t>(m)] = 1.0;
        return;
    }
    const auto logs = detail::basis_logs(a, x);
    const auto& lb = detail::log_binomial_row(m);
    for (int k = 0; k <= m; ++k)
        out[static_cast<std::size_t>(k)] = detail::basis_term(m, k, logs, lb);
}

inline std::vector<double> basis_eval_all(int m, double a, double x) {
    std::vector<double> out(static_cast<std::size_t>(m) + 1);
    basis_eval_all(m, a, x, out);
    return out;
}

/// The collocation matrix A with (A)_{ij} = p_{m,j}(t_i); row-stochastic.
inline DenseMatrix build_A(int m, double a) {
    const EquispacedGrid grid = make_grid(m, a);
    const std::size_t n = grid.nodes.size();
    DenseMatrix A(n, n);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        basis_eval_all(m, a, grid.nodes[i], row);
        for (std::size_t j = 0; j < n; ++j) A(i, j) = row[j];
    }
    return A;
}

/// The iterated-Boolean-sum matrix C = I + (I-A) + ... + (I-A)^{l-1}.
/// Rows sum to one in exact arithmetic; the infinity norm is bounded by
/// 2^l - 1.
class BooleanSumMatrix {
public:
    BooleanSumMatrix(int degree, double half_width, int ell, DenseMatrix entries)
        : degree_(degree), half_width_(half_width), ell_(ell), entries_(std::move(entries)) {}

    int degree() const { return degree_; }
    double half_width() const { return half_width_; }
    int ell() const { return ell_; }
    const DenseMatrix& entries() const { return entries_; }

private:
    int degree_;
    double half_width_;
    int ell_;
    DenseMatrix entries_;
};

/// Builds C for the given degree and iteration count. Powers of two use the
/// doubling recurrence C_{2p} = C_p + (I-A)^p C_p with the running power
/// maintained by repeated squaring; other counts fall back to Horner on the
/// geometric sum.
inline BooleanSumMatrix build_C(int m, double a, int ell) {
    if (ell < 1) throw std::invalid_argument("build_C: iteration count must be >= 1");
    const std::size_t n = static_cast<std::size_t>(m) + 1;
    DenseMatrix C = DenseMatrix::identity(n);
    if (ell > 1) {
        const DenseMatrix R = DenseMatrix::identity(n) - build_A(m, a);
        const bool power_of_two = (ell & (ell - 1)) == 0;
        if (power_of_two) {
            DenseMatrix P = R;
            int doublings = 0;
            for (int e = ell; e > 1; e >>= 1) ++doublings;
            for (int p = 1; p <= doublings; ++p) {
                C += P * C;
                if (p < doublings) P = P * P;
            }
        } else {
            const DenseMatrix I = DenseMatrix::identity(n);
            for (int q = 1; q < ell; ++q) C = I + R * C;
        }
    }
    return BooleanSumMatrix(m, a, ell, std::move(C));
}

/// Process-wide cache of Boolean-sum matrices keyed by (m, a, l); the
/// product rule asks for the same matrix once per evaluation point.
inline std::shared_ptr<const BooleanSumMatrix> cached_boolean_sum(int m, double a, int ell) {
    static std::mutex mutex;
    static std::map<std::tuple<int, double, int>, std::shared_ptr<const BooleanSumMatrix>> cache;
    const auto key = std::make_tuple(m, a, ell);
    {
        std::scoped_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const BooleanSumMatrix>(build_C(m, a, ell));
    std::scoped_lock lock(mutex);
    return cache.emplace(key, std::move(built)).first->second;
}

/// Evaluates the generalized Bernstein polynomial at x from samples on the
/// grid: (basis row at x) . (C values), with the inner contraction formed
/// once per basis index.
inline double gb_eval(const BooleanSumMatrix& C, const GridFunction& f, double x) {
    if (f.grid.degree != C.degree())
        throw std::invalid_argument("gb_eval: operator and samples disagree on degree");
    if (f.grid.half_width != C.half_width())
        throw std::invalid_argument("gb_eval: operator and samples disagree on interval");
    const double a = C.half_width();
    if (!(x >= -a && x <= a)) throw std::domain_error("gb_eval: x outside [-a, a]");
    const std::vector<double> mixed = C.entries().apply(f.values);
    const std::vector<double> basis = basis_eval_all(C.degree(), a, x);
    double s = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) s += basis[i] * mixed[i];
    return s;
}

} // namespace oscquad
