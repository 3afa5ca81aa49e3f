#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "kipt/sampler.hpp"

using namespace kipt;

namespace {

// Mean nearest-neighbor distance variance; a crude uniformity proxy.
double nn_variance(const PointSet& pts) {
    const int m = pts.size();
    std::vector<double> nn(m, std::numeric_limits<double>::infinity());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            nn[i] = std::min(nn[i], (pts.point(i) - pts.point(j)).norm());
        }
    double mean = 0.0;
    for (double x : nn) mean += x;
    mean /= m;
    double var = 0.0;
    for (double x : nn) var += (x - mean) * (x - mean);
    return var / m;
}

}  // namespace

TEST_CASE("random_box determinism and containment") {
    const Box box = Box::cube(-2.0, 5.0, 3);
    const PointSet a = random_box(500, box, 1234);
    const PointSet b = random_box(500, box, 1234);
    CHECK(a.points() == b.points());
    const PointSet c = random_box(500, box, 1235);
    CHECK(a.points() != c.points());
    for (int i = 0; i < a.size(); ++i) CHECK(box.contains(a.point(i)));

    // prefix property of the point-major fill
    const PointSet head = random_box(100, box, 1234);
    CHECK(head.points() == a.points().leftCols(100));
}

TEST_CASE("random_box empirical mean") {
    const PointSet pts = random_box(10000, Box::cube(0.0, 1.0, 2), 77);
    for (int r = 0; r < 2; ++r) {
        const double mean = pts.points().row(r).mean();
        CHECK(std::abs(mean - 0.5) < 0.02);
    }
}

TEST_CASE("halton reference values") {
    const Box unit1 = Box::cube(0.0, 1.0, 1);
    const PointSet h1 = halton(3, unit1);
    CHECK(h1.points()(0, 0) == 0.5);
    CHECK(h1.points()(0, 1) == 0.25);
    CHECK(h1.points()(0, 2) == 0.75);

    const PointSet h2 = halton(1, Box::cube(0.0, 1.0, 2));
    CHECK(h2.points()(0, 0) == 0.5);
    CHECK(h2.points()(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const PointSet big = halton(50, unit1);
    CHECK(big.points().leftCols(3) == h1.points());

    CHECK_THROWS_AS(halton(10, Box::cube(0.0, 1.0, 26)), UsageError);
}

TEST_CASE("sobol reference values") {
    const PointSet s1 = sobol(1, Box::cube(0.0, 1.0, 1));
    CHECK(s1.points()(0, 0) == 0.5);

    const PointSet s2 = sobol(4, Box::cube(0.0, 1.0, 2));
    CHECK(s2.points()(0, 0) == 0.5);
    CHECK(s2.points()(1, 0) == 0.5);
    CHECK(s2.points()(0, 1) == 0.25);
    CHECK(s2.points()(1, 1) == 0.75);
    CHECK(s2.points()(0, 2) == 0.75);
    CHECK(s2.points()(1, 2) == 0.25);
    CHECK(s2.points()(0, 3) == 0.125);
    CHECK(s2.points()(1, 3) == 0.625);

    // dyadic rationals before box mapping
    const PointSet s3 = sobol(64, Box::cube(0.0, 1.0, 5));
    for (int c = 0; c < s3.size(); ++c)
        for (int r = 0; r < 5; ++r) {
            const double scaled = s3.points()(r, c) * 4294967296.0;  // 2^32
            CHECK(scaled == std::floor(scaled));
        }

    const PointSet s4 = sobol(16, Box::cube(0.0, 1.0, 2));
    CHECK(s4.points().leftCols(4) == s2.points());

    CHECK_THROWS_AS(sobol(10, Box::cube(0.0, 1.0, 22)), UsageError);
}

TEST_CASE("tensor grid") {
    const PointSet g1 = grid_points(2, Box::cube(0.0, 1.0, 1));
    CHECK(g1.size() == 2);
    CHECK(g1.points()(0, 0) == 0.0);
    CHECK(g1.points()(0, 1) == 1.0);

    const PointSet g2 = grid_points(3, Box::cube(0.0, 1.0, 2));
    CHECK(g2.size() == 9);
    bool has_center = false;
    for (int c = 0; c < 9; ++c)
        if (g2.points()(0, c) == 0.5 && g2.points()(1, c) == 0.5) has_center = true;
    CHECK(has_center);
    for (int c = 0; c < 9; ++c) CHECK(g2.box().contains(g2.point(c)));

    CHECK_THROWS_AS(grid_points(1, Box::cube(0.0, 1.0, 1)), UsageError);
    CHECK_THROWS_AS(grid_points(1000, Box::cube(0.0, 1.0, 4)), UsageError);
}

TEST_CASE("low-discrepancy smoke check") {
    const Box box = Box::cube(0.0, 1.0, 2);
    std::vector<double> random_vars;
    for (int s = 0; s < 20; ++s) random_vars.push_back(nn_variance(random_box(512, box, 100 + s)));
    std::sort(random_vars.begin(), random_vars.end());
    const double median = 0.5 * (random_vars[9] + random_vars[10]);
    CHECK(nn_variance(sobol(512, box)) < median);
    CHECK(nn_variance(halton(512, box)) < median);
}
