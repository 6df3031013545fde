#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oscquad {

/// An n-point Gauss-Legendre rule on [-1, 1]: nodes ascending, weights
/// positive, node/weight pairs symmetric about the origin.
struct GaussRule {
    int points = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// P_n and P_{n-1} at z via the three-term recurrence.
struct LegendrePair {
    double p;      // P_n(z)
    double p_prev; // P_{n-1}(z)
};

inline LegendrePair legendre_pair(int n, double z) {
    double p = 1.0;
    double p_prev = 0.0;
    for (int j = 0; j < n; ++j) {
        const double p_next = ((2.0 * j + 1.0) * z * p - j * p_prev) / (j + 1.0);
        p_prev = p;
        p = p_next;
    }
    return {p, p_prev};
}

inline double legendre_derivative(int n, double z, const LegendrePair& pr) {
    return static_cast<double>(n) * (z * pr.p - pr.p_prev) / (z * z - 1.0);
}

} // namespace detail

/// Computes the n-point rule by Newton iteration on P_n from the classical
/// cosine initial guesses. Each root is polished until the Newton step drops
/// below 1e-15; the upper half of the rule is mirrored from the lower half so
/// symmetry holds exactly, and for odd n the middle node is pinned at zero.
inline GaussRule gl_rule(int n) {
    if (n < 1) throw std::invalid_argument("gl_rule: point count must be positive");
    if (n > 1024) throw std::invalid_argument("gl_rule: point count above supported limit 1024");
    GaussRule rule;
    rule.points = n;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        const bool middle = (n % 2 == 1) && (2 * i + 1 == n);
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        if (middle) {
            z = 0.0;
        } else {
            bool converged = false;
            for (int iter = 0; iter < 100; ++iter) {
                const auto pr = detail::legendre_pair(n, z);
                const double dz = pr.p / detail::legendre_derivative(n, z, pr);
                z -= dz;
                if (std::abs(dz) <= 1e-15) {
                    converged = true;
                    break;
                }
            }
            if (!converged) throw std::runtime_error("gl_rule: Newton iteration stalled");
        }
        const auto pr = detail::legendre_pair(n, z);
        const double dp = detail::legendre_derivative(n, z, pr);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // The guesses start near +1, so root i belongs in slot n-1-i; the
        // mirrored slot i gets the negated node and the same weight.
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

/// Process-wide rule cache; the moment table re-uses one rule across all
/// subintervals and evaluation points.
inline std::shared_ptr<const GaussRule> cached_gl_rule(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussRule>> cache;
    std::scoped_lock lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_shared<const GaussRule>(gl_rule(n))).first;
    }
    return it->second;
}

} // namespace oscquad
