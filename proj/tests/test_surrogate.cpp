#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kipt/greedy_select.hpp"
#include "kipt/sampler.hpp"
#include "kipt/surrogate.hpp"
#include "kipt/test_functions.hpp"
#include "oracles.hpp"

using namespace kipt;

namespace {

PointSet greedy_centers(const KernelSpec& spec, const Box& box, int m, int n, Mode mode,
                        std::uint64_t seed) {
    const PointSet cloud = random_box(m, box, seed);
    const SelectionResult sel = greedy_select(spec, cloud, n, mode);
    REQUIRE_FALSE(sel.terminated_early);
    return cloud.subset(sel.indices);
}

}  // namespace

TEST_CASE("lagrange fit basics") {
    KernelSpec spec(Family::Gaussian, 2.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);

    Eigen::MatrixXd one(2, 1);
    one << 0.4, 0.6;
    Eigen::VectorXd u1(1);
    u1 << 3.5;
    const Surrogate s1 = fit_lagrange(spec, PointSet(one, box), u1);
    CHECK(s1.coeffs[0] == 3.5);

    const PointSet pts = random_box(12, box, 7);
    const Surrogate s0 = fit_lagrange(spec, pts, Eigen::VectorXd::Zero(12));
    CHECK(s0.coeffs.cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd bad(11);
    bad.setZero();
    CHECK_THROWS_AS(fit_lagrange(spec, pts, bad), UsageError);

    // duplicated center: the factorization error names the offending index
    Eigen::MatrixXd dup(2, 3);
    dup << 0.1, 0.5, 0.5, 0.1, 0.5, 0.5;
    try {
        fit_lagrange(spec, PointSet(dup, box), Eigen::VectorXd::Ones(3));
        FAIL("expected SingularExtension");
    } catch (const SingularExtension& e) {
        CHECK(e.block_index == 2);
    }
}

TEST_CASE("franke interpolation on greedy centers") {
    KernelSpec spec(Family::Gaussian, 3.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = greedy_centers(spec, box, 2000, 40, Mode::Lagrange, 11);
    Eigen::VectorXd values(40);
    for (int i = 0; i < 40; ++i) values[i] = franke(centers.point(i));
    const Surrogate s = fit_lagrange(spec, centers, values);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i)
        worst = std::max(worst, std::abs(evaluate(s, centers.point(i)) - values[i]));
    CHECK(worst <= 1e-6);
}

TEST_CASE("hermite fit reproduces a representable expansion") {
    KernelSpec spec(Family::Gaussian, 2.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = random_box(6, box, 23);
    const Eigen::VectorXd anchor = centers.point(0);

    // u(z) = Phi(eps ||z - z1||) with its analytic gradient
    Eigen::VectorXd values(6);
    Eigen::MatrixXd grads(6, 2);
    for (int i = 0; i < 6; ++i) {
        values[i] = kernel_eval(spec, centers.point(i), anchor);
        for (int m = 0; m < 2; ++m)
            grads(i, m) = kernel_grad1(spec, centers.point(i), anchor, m);
    }
    const Surrogate s = fit_hermite(spec, centers, values, grads);
    const PointSet queries = random_box(20, box, 29);
    for (int q = 0; q < queries.size(); ++q) {
        const Eigen::VectorXd z = queries.point(q);
        CHECK(std::abs(evaluate(s, z) - kernel_eval(spec, z, anchor)) < 1e-8);
        for (int m = 0; m < 2; ++m)
            CHECK(std::abs(evaluate_partial(s, z, m) - kernel_grad1(spec, z, anchor, m)) < 1e-8);
    }

    const Surrogate zero =
        fit_hermite(spec, centers, Eigen::VectorXd::Zero(6), Eigen::MatrixXd::Zero(6, 2));
    CHECK(zero.coeffs.cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXd z0 = centers.point(1);
    CHECK(evaluate_partial(zero, z0, 0) == 0.0);
}

TEST_CASE("hermite corner peak residuals") {
    KernelSpec spec(Family::IMQ, 3.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = greedy_centers(spec, box, 2000, 30, Mode::Hermite, 13);
    const Eigen::VectorXd w = corner_peak_weights(2);

    Eigen::VectorXd values(30);
    Eigen::MatrixXd grads(30, 2);
    for (int i = 0; i < 30; ++i) {
        Eigen::VectorXd g;
        values[i] = corner_peak(centers.point(i), w, &g);
        grads.row(i) = g.transpose();
    }
    const Surrogate s = fit_hermite(spec, centers, values, grads);
    const double cond = condition_number(assemble_hermite(spec, centers, Ordering::PointMajor));
    const double tol = 1e-6 * std::max(1.0, cond * 1e-10);

    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
        worst = std::max(worst, std::abs(evaluate(s, centers.point(i)) - values[i]));
        for (int m = 0; m < 2; ++m)
            worst = std::max(worst,
                             std::abs(evaluate_partial(s, centers.point(i), m) - grads(i, m)));
    }
    CHECK(worst <= tol);
}

TEST_CASE("evaluation against a naive summation oracle") {
    KernelSpec spec(Family::IMQ, 3.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = random_box(15, box, 41);
    SplitMix64 rng(6);
    Eigen::VectorXd values(15);
    for (int i = 0; i < 15; ++i) values[i] = rng.next_double() - 0.5;
    const Surrogate s = fit_lagrange(spec, centers, values);

    const PointSet queries = random_box(25, box, 43);
    for (int q = 0; q < queries.size(); ++q) {
        const Eigen::VectorXd z = queries.point(q);
        long double naive = 0.0L;
        for (int j = 0; j < 15; ++j) {
            long double ssum = 0.0L;
            for (int r = 0; r < 2; ++r) {
                const long double d = static_cast<long double>(z[r]) - centers.point(j)[r];
                ssum += d * d;
            }
            naive += static_cast<long double>(s.coeffs[j]) *
                     profile_eval(spec, static_cast<double>(ssum), 0);
        }
        CHECK(std::abs(evaluate(s, z) - static_cast<double>(naive)) <= 1e-12);
    }
}

TEST_CASE("gaussian surrogate decays far from its data") {
    KernelSpec spec(Family::Gaussian, 2.0, 2);
    const Box wide = Box::cube(-100.0, 100.0, 2);
    Eigen::MatrixXd pts(2, 5);
    pts << 0.0, 0.1, 0.2, 0.3, 0.4,
           0.0, 0.1, 0.2, 0.3, 0.4;
    const PointSet centers(pts, wide);
    Eigen::VectorXd values(5);
    values << 1.0, -2.0, 0.5, 3.0, -1.0;
    const Surrogate s = fit_lagrange(spec, centers, values);
    Eigen::VectorXd far(2);
    far << 50.0, 50.0;
    CHECK(std::abs(evaluate(s, far)) <= 1e-10 * s.coeffs.cwiseAbs().sum());
}

TEST_CASE("partial derivatives match finite differences") {
    for (Mode mode : {Mode::Lagrange, Mode::Hermite}) {
        KernelSpec spec(Family::Gaussian, 2.0, 2);
        const Box box = Box::cube(0.0, 1.0, 2);
        const PointSet centers = random_box(8, box, 51);
        SplitMix64 rng(8);
        Eigen::VectorXd values(8);
        for (int i = 0; i < 8; ++i) values[i] = rng.next_double();
        Surrogate s = mode == Mode::Lagrange
                          ? fit_lagrange(spec, centers, values)
                          : [&] {
                                Eigen::MatrixXd grads(8, 2);
                                for (int i = 0; i < 8; ++i)
                                    for (int m = 0; m < 2; ++m)
                                        grads(i, m) = rng.next_double() - 0.5;
                                return fit_hermite(spec, centers, values, grads);
                            }();
        const PointSet queries = random_box(20, box, 53);
        const auto fd_at = [&](const Eigen::VectorXd& z, int m, double h) {
            Eigen::VectorXd hi = z, lo = z;
            hi[m] += h;
            lo[m] -= h;
            return (evaluate(s, hi) - evaluate(s, lo)) / (2.0 * h);
        };
        for (int q = 0; q < queries.size(); ++q)
            for (int m = 0; m < 2; ++m) {
                const Eigen::VectorXd z = queries.point(q);
                const double fd = (4.0 * fd_at(z, m, 5e-5) - fd_at(z, m, 1e-4)) / 3.0;
                CHECK(oracles::rel_err(evaluate_partial(s, z, m), fd) < 1e-6);
            }
        CHECK_THROWS_AS(evaluate_partial(s, queries.point(0), 2), UsageError);
    }
}

TEST_CASE("hermite fit at centers returns the gradient data") {
    KernelSpec spec(Family::Gaussian, 2.0, 2);
    const PointSet centers = random_box(7, Box::cube(0.0, 1.0, 2), 61);
    SplitMix64 rng(10);
    Eigen::VectorXd values(7);
    Eigen::MatrixXd grads(7, 2);
    for (int i = 0; i < 7; ++i) {
        values[i] = rng.next_double();
        for (int m = 0; m < 2; ++m) grads(i, m) = rng.next_double() - 0.5;
    }
    const Surrogate s = fit_hermite(spec, centers, values, grads);
    for (int i = 0; i < 7; ++i) {
        CHECK(std::abs(evaluate(s, centers.point(i)) - values[i]) < 1e-8);
        for (int m = 0; m < 2; ++m)
            CHECK(std::abs(evaluate_partial(s, centers.point(i), m) - grads(i, m)) < 1e-8);
    }
}

TEST_CASE("rippa identity") {
    KernelSpec spec(Family::Gaussian, 2.0, 2);
    const PointSet centers = random_box(20, Box::cube(0.0, 1.0, 2), 71);
    SplitMix64 rng(12);
    Eigen::VectorXd values(20);
    for (int i = 0; i < 20; ++i) values[i] = std::sin(6.0 * rng.next_double());

    const Eigen::VectorXd closed = loocv_error_vector(spec, centers, values);
    for (int i = 0; i < 20; ++i) {
        const double brute = oracles::brute_loocv_residual(spec, centers, values, i);
        CHECK(std::abs(closed[i] - brute) <= 1e-8 * std::max(1.0, std::abs(brute)));
    }
    CHECK(loocv_error_norm(spec, centers, values) ==
          doctest::Approx(closed.norm()).epsilon(1e-15));

    Eigen::MatrixXd one(2, 1);
    one << 0.5, 0.5;
    Eigen::VectorXd u1(1);
    u1 << 2.25;
    CHECK(loocv_error_vector(spec, PointSet(one, Box::cube(0.0, 1.0, 2)), u1)[0] == 2.25);
    CHECK(loocv_error_norm(spec, centers, Eigen::VectorXd::Zero(20)) == 0.0);
}

TEST_CASE("epsilon selection") {
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers =
        greedy_centers(KernelSpec(Family::Gaussian, 3.0, 2), box, 4000, 100, Mode::Lagrange, 81);
    Eigen::VectorXd values(100);
    for (int i = 0; i < 100; ++i) values[i] = franke(centers.point(i));

    SUBCASE("single viable epsilon") {
        const LoocvReport r = select_epsilon(Family::Gaussian, centers, values, {3.0});
        CHECK(r.best_eps == 3.0);
        CHECK(r.best_norm == r.norms[0]);
    }

    SUBCASE("best_norm is the minimum of the finite norms") {
        const LoocvReport r =
            select_epsilon(Family::Gaussian, centers, values, eps_log_grid(0.1, 10.0, 25));
        double best = std::numeric_limits<double>::infinity();
        for (double x : r.norms) best = std::min(best, x);
        CHECK(r.best_norm == best);
        CHECK(std::isfinite(r.best_norm));
    }

    SUBCASE("loocv pick is near-optimal for test error") {
        const std::vector<double> grid = eps_log_grid(0.1, 10.0, 25);
        const LoocvReport r = select_epsilon(Family::Gaussian, centers, values, grid);
        const PointSet test = random_box(1000, box, 91);

        const auto rmse_for = [&](double eps) {
            const KernelSpec spec(Family::Gaussian, eps, 2);
            double sq = 0.0;
            try {
                const Surrogate s = fit_lagrange(spec, centers, values);
                for (int q = 0; q < test.size(); ++q) {
                    const double diff = evaluate(s, test.point(q)) - franke(test.point(q));
                    sq += diff * diff;
                }
            } catch (const SingularExtension&) {
                return std::numeric_limits<double>::infinity();
            }
            return std::sqrt(sq / test.size());
        };
        double best_rmse = std::numeric_limits<double>::infinity();
        for (double eps : grid) best_rmse = std::min(best_rmse, rmse_for(eps));
        CHECK(rmse_for(r.best_eps) <= 2.0 * best_rmse);
    }

    SUBCASE("grid validation") {
        CHECK_THROWS_AS(select_epsilon(Family::Gaussian, centers, values, {}), UsageError);
        CHECK_THROWS_AS(select_epsilon(Family::Gaussian, centers, values, {2.0, 1.0}),
                        UsageError);
    }
}

TEST_CASE("kriging weights reproduce the interpolant") {
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = random_box(30, box, 101);
    SplitMix64 rng(14);
    Eigen::VectorXd values(30);
    for (int i = 0; i < 30; ++i) values[i] = rng.next_double() * 4.0 - 2.0;

    for (Family fam : {Family::Gaussian, Family::IMQ, Family::WendlandCS}) {
        KernelSpec spec(fam, 3.0, 2);
        const Surrogate s = fit_lagrange(spec, centers, values);
        const PointSet queries = random_box(100, box, 103);
        for (int q = 0; q < queries.size(); ++q)
            CHECK(std::abs(kriging_predict(spec, centers, values, queries.point(q)) -
                           evaluate(s, queries.point(q))) <= 1e-10);
        const double cond = condition_number(assemble_lagrange(spec, centers));
        const double tol = 1e-13 * cond * values.cwiseAbs().maxCoeff() + 1e-10;
        CHECK(std::abs(kriging_predict(spec, centers, values, centers.point(4)) - values[4]) <
              tol);
    }

    // constant data: the prediction equals the weight sum, identical along both paths
    KernelSpec g(Family::Gaussian, 3.0, 2);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(30);
    const Surrogate s1 = fit_lagrange(g, centers, ones);
    Eigen::VectorXd z(2);
    z << 0.37, 0.81;
    CHECK(std::abs(kriging_predict(g, centers, ones, z) - evaluate(s1, z)) <= 1e-10);
}

TEST_CASE("hermite degenerates to the lagrange solution on representable data") {
    KernelSpec spec(Family::IMQ, 2.0, 2);
    const Box box = Box::cube(0.0, 1.0, 2);
    const PointSet centers = random_box(5, box, 111);

    // target representable in the Lagrange trial space: u = sum a_j Phi(.- z_j)
    Eigen::VectorXd a(5);
    a << 1.0, -0.5, 0.25, 2.0, -1.5;
    const auto target = [&](const Eigen::VectorXd& z) {
        double acc = 0.0;
        for (int j = 0; j < 5; ++j) acc += a[j] * kernel_eval(spec, z, centers.point(j));
        return acc;
    };
    Eigen::VectorXd values(5);
    Eigen::MatrixXd grads(5, 2);
    for (int i = 0; i < 5; ++i) {
        values[i] = target(centers.point(i));
        for (int m = 0; m < 2; ++m) {
            double acc = 0.0;
            for (int j = 0; j < 5; ++j)
                acc += a[j] * kernel_grad1(spec, centers.point(i), centers.point(j), m);
            grads(i, m) = acc;
        }
    }
    const Surrogate s = fit_hermite(spec, centers, values, grads);
    const PointSet queries = random_box(25, box, 113);
    for (int q = 0; q < queries.size(); ++q)
        CHECK(std::abs(evaluate(s, queries.point(q)) - target(queries.point(q))) < 1e-8);
}
