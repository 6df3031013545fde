#pragma once

#include <cstddef>
#include <span>

namespace oscquad {

/// Pairwise (tree) summation with a fixed split, so the result is a pure
/// function of the input values and independent of how callers chunk work.
inline double pairwise_sum(std::span<const double> terms) {
    const std::size_t n = terms.size();
    if (n <= 16) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

} // namespace oscquad
