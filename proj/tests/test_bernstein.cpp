#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oscquad/bernstein.hpp"
#include "oscquad/grid.hpp"
#include "oscquad/matrix.hpp"

using oscquad::basis_eval;
using oscquad::basis_eval_all;
using oscquad::build_A;
using oscquad::build_C;
using oscquad::DenseMatrix;

namespace {

/// Naive geometric sum I + R + ... + R^{ell-1} with R = I - A, accumulated
/// power by power; deliberately independent of the doubling construction.
DenseMatrix naive_boolean_sum(int m, double a, int ell) {
    const std::size_t n = static_cast<std::size_t>(m) + 1;
    const DenseMatrix R = DenseMatrix::identity(n) - build_A(m, a);
    DenseMatrix sum = DenseMatrix::identity(n);
    DenseMatrix power = DenseMatrix::identity(n);
    for (int q = 1; q < ell; ++q) {
        power = power * R;
        sum += power;
    }
    return sum;
}

double max_entry_diff(const DenseMatrix& lhs, const DenseMatrix& rhs) {
    REQUIRE(lhs.rows() == rhs.rows());
    REQUIRE(lhs.cols() == rhs.cols());
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j)
            worst = std::max(worst, std::abs(lhs(i, j) - rhs(i, j)));
    return worst;
}

} // namespace

TEST_CASE("basis endpoint values are exact", "[bernstein]") {
    CHECK(basis_eval(512, 1.0, 0, -1.0) == 1.0);
    CHECK(basis_eval(512, 1.0, 511, -1.0) == 0.0);
    CHECK(basis_eval(512, 1.0, 512, 1.0) == 1.0);
    const auto row = basis_eval_all(3, 1.0, 1.0);
    CHECK(row == std::vector<double>{0.0, 0.0, 0.0, 1.0});
}

TEST_CASE("basis midpoint values match closed forms", "[bernstein]") {
    CHECK(basis_eval(4, 1.0, 2, 0.0) == Catch::Approx(0.375).epsilon(1e-15));
    const auto row = basis_eval_all(2, 1.0, 0.0);
    CHECK(row[0] == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(row[1] == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(row[2] == Catch::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("high-degree basis value matches 60-digit evaluation", "[bernstein]") {
    // p_{512,256}(0.3) on [-2,2], frozen from an arbitrary-precision run of
    // the closed form.
    const double golden = 1.0398845761078787e-04;
    CHECK(basis_eval(512, 2.0, 256, 0.3) == Catch::Approx(golden).epsilon(1e-13));
}

TEST_CASE("basis_eval_all matches basis_eval bit for bit", "[bernstein]") {
    for (double x : {-1.7, -0.3, 0.0, 1.1, 1.99}) {
        const auto row = basis_eval_all(64, 2.0, x);
        for (int k = 0; k <= 64; ++k)
            CHECK(row[static_cast<std::size_t>(k)] == basis_eval(64, 2.0, k, x));
    }
}

TEST_CASE("basis rejects out-of-domain arguments", "[bernstein]") {
    CHECK_THROWS_AS(basis_eval(8, 1.0, 3, 1.0000001), std::domain_error);
    CHECK_THROWS_AS(basis_eval(8, 1.0, 3, -2.0), std::domain_error);
    CHECK_THROWS_AS(basis_eval(8, 1.0, 9, 0.0), std::domain_error);
    CHECK_THROWS_AS(basis_eval(8, 1.0, -1, 0.0), std::domain_error);
    CHECK_THROWS_AS(basis_eval_all(8, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(basis_eval(0, 1.0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("partition of unity and nonnegativity", "[bernstein]") {
    std::mt19937 rng(61034);
    for (int m : {4, 64, 512}) {
        const double a = 1.25;
        std::uniform_real_distribution<double> dist(-a, a);
        std::vector<double> row(static_cast<std::size_t>(m) + 1);
        for (int trial = 0; trial < 100; ++trial) {
            const double x = dist(rng);
            basis_eval_all(m, a, x, row);
            double sum = 0.0;
            for (double v : row) {
                CHECK(v >= 0.0);
                sum += v;
            }
            CHECK(sum == Catch::Approx(1.0).margin(1e-13));
        }
    }
}

TEST_CASE("collocation matrix is row-stochastic", "[bernstein]") {
    for (int m : {4, 16, 64}) {
        const auto A = build_A(m, 1.5);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < A.cols(); ++j) {
                CHECK(A(i, j) >= 0.0);
                sum += A(i, j);
            }
            CHECK(sum == Catch::Approx(1.0).margin(1e-13));
        }
    }
}

TEST_CASE("collocation matrix at degree one is the identity", "[bernstein]") {
    const auto A = build_A(1, 1.0);
    CHECK(A(0, 0) == 1.0);
    CHECK(A(0, 1) == 0.0);
    CHECK(A(1, 0) == 0.0);
    CHECK(A(1, 1) == 1.0);
}

TEST_CASE("collocation matrix reproduces linear data at the nodes", "[bernstein]") {
    const auto grid = oscquad::make_grid(4, 1.0);
    const auto A = build_A(4, 1.0);
    const auto at = A.apply(grid.nodes);
    for (std::size_t i = 0; i < at.size(); ++i)
        CHECK(at[i] == Catch::Approx(grid.nodes[i]).margin(1e-13));
}

TEST_CASE("build_C base cases", "[bernstein]") {
    const auto C1 = build_C(8, 1.0, 1);
    CHECK(max_entry_diff(C1.entries(), DenseMatrix::identity(9)) == 0.0);
    CHECK(C1.ell() == 1);
    CHECK(C1.degree() == 8);
    CHECK(C1.half_width() == 1.0);

    const auto C2 = build_C(8, 1.0, 2);
    const DenseMatrix direct = DenseMatrix::identity(9) + (DenseMatrix::identity(9) - build_A(8, 1.0));
    CHECK(max_entry_diff(C2.entries(), direct) < 1e-14);

    CHECK_THROWS_AS(build_C(8, 1.0, 0), std::invalid_argument);
}

TEST_CASE("build_C matches the naive geometric sum", "[bernstein]") {
    // ell=5 exercises the Horner branch, ell=8 the doubling branch.
    CHECK(max_entry_diff(build_C(6, 1.0, 5).entries(), naive_boolean_sum(6, 1.0, 5)) < 1e-12);
    CHECK(max_entry_diff(build_C(6, 1.0, 8).entries(), naive_boolean_sum(6, 1.0, 8)) < 1e-12);
    CHECK(max_entry_diff(build_C(12, 2.0, 4).entries(), naive_boolean_sum(12, 2.0, 4)) < 1e-12);
}

TEST_CASE("Boolean-sum rows sum to one", "[bernstein]") {
    for (int m : {4, 16, 64}) {
        for (int ell : {1, 2, 16, 256}) {
            const auto C = build_C(m, 1.0, ell);
            for (std::size_t i = 0; i < C.entries().rows(); ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < C.entries().cols(); ++j) sum += C.entries()(i, j);
                CHECK(sum == Catch::Approx(1.0).margin(1e-8));
            }
        }
    }
}

TEST_CASE("Boolean-sum infinity norm stays under the geometric bound", "[bernstein]") {
    for (int m : {4, 8, 16})
        for (int ell : {1, 2, 3, 4}) {
            const auto C = build_C(m, 1.0, ell);
            CHECK(C.entries().inf_norm() <= std::pow(2.0, ell) - 1.0);
        }
}

TEST_CASE("doubling recurrence is consistent with direct construction", "[bernstein]") {
    for (int m : {8, 16})
        for (int ell : {1, 2, 4}) {
            const std::size_t n = static_cast<std::size_t>(m) + 1;
            const auto C_ell = build_C(m, 1.0, ell);
            const auto C_2ell = build_C(m, 1.0, 2 * ell);
            const DenseMatrix R = DenseMatrix::identity(n) - build_A(m, 1.0);
            DenseMatrix Rp = DenseMatrix::identity(n);
            for (int q = 0; q < ell; ++q) Rp = Rp * R;
            const DenseMatrix recombined = C_ell.entries() + Rp * C_ell.entries();
            CHECK(max_entry_diff(C_2ell.entries(), recombined) < 1e-10);
        }
}

TEST_CASE("node-level operator doubling identity", "[bernstein]") {
    // With V_ell = A * C_ell mapping samples to operator values at the
    // nodes, the iteration count doubles via V_{2ell} = 2 V_ell - V_ell^2.
    for (int ell : {1, 2, 4}) {
        const int m = 8;
        const auto A = build_A(m, 1.0);
        const DenseMatrix V = A * build_C(m, 1.0, ell).entries();
        const DenseMatrix V2 = A * build_C(m, 1.0, 2 * ell).entries();
        const DenseMatrix predicted = V + V - V * V;
        CHECK(max_entry_diff(V2, predicted) < 1e-10);
    }
}

TEST_CASE("gb_eval reproduces constants and linear functions", "[bernstein]") {
    const auto C = build_C(16, 1.0, 4);
    const auto grid = oscquad::make_grid(16, 1.0);
    const auto ones = oscquad::sample(grid, [](double) { return 1.0; });
    const auto lin = oscquad::sample(grid, [](double t) { return t; });
    CHECK(oscquad::gb_eval(C, ones, 0.77) == Catch::Approx(1.0).margin(1e-10));
    CHECK(oscquad::gb_eval(C, lin, 0.3) == Catch::Approx(0.3).margin(1e-10));

    std::mt19937 rng(75021);
    std::uniform_real_distribution<double> coef(-10.0, 10.0);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = coef(rng);
        const double beta = coef(rng);
        const double x = xs(rng);
        const auto f = oscquad::sample(grid, [=](double t) { return alpha * t + beta; });
        CHECK(oscquad::gb_eval(C, f, x) == Catch::Approx(alpha * x + beta).margin(1e-10));
    }
}

TEST_CASE("gb_eval matches the operator definition on a quadratic", "[bernstein]") {
    // Independent oracle built from the definition: the twice-iterated
    // operator is 2 B_m - B_m(B_m .), assembled here from raw basis rows.
    const int m = 8;
    const double a = 1.0;
    const double x = 0.5;
    const auto grid = oscquad::make_grid(m, a);
    const auto f = oscquad::sample(grid, [](double t) { return t * t; });

    auto bernstein_at = [&](const std::vector<double>& values, double where) {
        const auto row = basis_eval_all(m, a, where);
        double s = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * values[k];
        return s;
    };
    std::vector<double> b_at_nodes(grid.nodes.size());
    for (std::size_t k = 0; k < grid.nodes.size(); ++k)
        b_at_nodes[k] = bernstein_at(f.values, grid.nodes[k]);
    const double oracle = 2.0 * bernstein_at(f.values, x) - bernstein_at(b_at_nodes, x);

    const auto C = build_C(m, a, 2);
    CHECK(oscquad::gb_eval(C, f, x) == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("gb_eval validates dimensions and domain", "[bernstein]") {
    const auto C = build_C(8, 1.0, 2);
    const auto wrong_m = oscquad::sample(oscquad::make_grid(6, 1.0), [](double t) { return t; });
    CHECK_THROWS_AS(oscquad::gb_eval(C, wrong_m, 0.0), std::invalid_argument);
    const auto wrong_a = oscquad::sample(oscquad::make_grid(8, 2.0), [](double t) { return t; });
    CHECK_THROWS_AS(oscquad::gb_eval(C, wrong_a, 0.0), std::invalid_argument);
    const auto ok = oscquad::sample(oscquad::make_grid(8, 1.0), [](double t) { return t; });
    CHECK_THROWS_AS(oscquad::gb_eval(C, ok, 1.5), std::domain_error);
}

TEST_CASE("iterating the operator accelerates convergence on a kink", "[bernstein]") {
    // f has four and a half derivatives at -2; the twice-iterated operator
    // should beat the plain one at every degree and improve with m.
    const double a = 2.0;
    auto f = [](double t) { return std::pow(std::abs(t + 1.0), 4.5); };
    double prev_err2 = std::numeric_limits<double>::infinity();
    for (int m : {16, 32, 64, 128, 256}) {
        const auto grid = oscquad::make_grid(m, a);
        const auto fs = oscquad::sample(grid, f);
        const auto A = build_A(m, a);
        auto node_error = [&](int ell) {
            const auto vals = A.apply(build_C(m, a, ell).entries().apply(fs.values));
            double worst = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i)
                worst = std::max(worst, std::abs(vals[i] - fs.values[i]));
            return worst;
        };
        const double err1 = node_error(1);
        const double err2 = node_error(2);
        CHECK(err2 < err1);
        CHECK(err2 < prev_err2);
        prev_err2 = err2;
    }
}

TEST_CASE("cached_boolean_sum shares one matrix per configuration", "[bernstein]") {
    const auto a = oscquad::cached_boolean_sum(8, 1.0, 16);
    const auto b = oscquad::cached_boolean_sum(8, 1.0, 16);
    CHECK(a.get() == b.get());
    const auto c = oscquad::cached_boolean_sum(8, 2.0, 16);
    CHECK(a.get() != c.get());
}
