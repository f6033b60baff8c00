#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glab/bodies.hpp"
#include "glab/constants.hpp"

using namespace glab;

namespace {

Zonotope cube3() { return Zonotope{Eigen::MatrixXd::Identity(3, 3)}; }

Zonotope segment3() {
    Eigen::MatrixXd g(3, 1);
    g << 1, 0, 0;
    return Zonotope{g};
}

Zonotope random_zonotope(int d, int n, std::uint64_t seed) {
    RngStream rng(seed);
    Eigen::MatrixXd g(d, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < d; ++r) g(r, c) = rng.gaussian();
    return Zonotope{g};
}

// Exact volume of box + t * unit ball in R^3 for a box with half-sides h.
double box_ball_volume(const Eigen::Vector3d& h, double t) {
    double a = 2 * h(0), b = 2 * h(1), c = 2 * h(2);
    return a * b * c + 2 * t * (a * b + b * c + c * a) + M_PI * t * t * (a + b + c) +
           4.0 / 3.0 * M_PI * t * t * t;
}

}  // namespace

TEST_CASE("support function examples") {
    Body cube = cube3();
    Eigen::Vector3d e1(1, 0, 0);
    CHECK(support(cube, e1) == doctest::Approx(1.0));
    CHECK(support(Body{make_ball(3, 1.0)}, e1) == doctest::Approx(1.0));
    Eigen::MatrixXd g(3, 2);
    g << 1, 0, 0, 1, 0, 0;
    Eigen::Vector3d diag = Eigen::Vector3d(1, 1, 0) / std::sqrt(2.0);
    CHECK(support(Body{Zonotope{g}}, diag) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("projection function examples") {
    Body cube = cube3();
    Subspace plane = Subspace::coordinate(3, 2);
    CHECK(projection_function(cube, plane) == doctest::Approx(4.0));

    RngStream rng(3);
    Subspace line = haar_subspace(3, 1, rng);
    CHECK(projection_function(Body{make_ball(3, 1.0)}, line) == doctest::Approx(2.0));

    Body seg = segment3();
    const long n = 100000;
    double sum = 0, sumsq = 0;
    for (long i = 0; i < n; ++i) {
        double v = projection_function(seg, haar_subspace(3, 1, rng.substream(static_cast<std::uint64_t>(i))));
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n, se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3 * se);
}

TEST_CASE("projection function homogeneity and monotonicity") {
    RngStream rng(5);
    Zonotope z = random_zonotope(4, 6, 77);
    for (double alpha : {0.5, 2.0}) {
        Zonotope scaled{alpha * z.generators};
        for (int j : {1, 2, 3}) {
            Subspace L = haar_subspace(4, j, rng);
            double base = projection_function(Body{z}, L);
            CHECK(projection_function(Body{scaled}, L) ==
                  doctest::Approx(std::pow(alpha, j) * base).epsilon(1e-10));
        }
    }
    // Appending a generator never decreases a shadow.
    for (int trial = 0; trial < 20; ++trial) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(trial));
        Eigen::MatrixXd wider(4, z.count() + 1);
        wider.leftCols(z.count()) = z.generators;
        for (int r = 0; r < 4; ++r) wider(r, z.count()) = sub.gaussian();
        Subspace L = haar_subspace(4, 2, sub);
        CHECK(projection_function(Body{Zonotope{wider}}, L) >= projection_function(Body{z}, L) - 1e-12);
    }
}

TEST_CASE("zonotope area measure: cube atoms and circles") {
    AreaMeasure m2 = area_measure_zonotope(cube3(), 2);
    REQUIRE(m2.components.empty());
    CHECK(m2.atoms.size() == 6);
    for (const auto& a : m2.atoms) {
        CHECK(a.weight == doctest::Approx(2.0));
        CHECK(a.direction.cwiseAbs().maxCoeff() == doctest::Approx(1.0));  // +-coordinate direction
    }
    CHECK(m2.total() == doctest::Approx(12.0));

    AreaMeasure m1 = area_measure_zonotope(cube3(), 1);
    REQUIRE(m1.atoms.empty());
    CHECK(m1.components.size() == 3);
    for (const auto& c : m1.components) {
        CHECK(c.weight == doctest::Approx(2.0));
        CHECK(c.sphere_span.sub_dim() == 2);
    }
    CHECK(m1.total() == doctest::Approx(6.0));
}

TEST_CASE("segment in the plane: two atoms") {
    Eigen::MatrixXd g(2, 1);
    g << 1, 0;
    AreaMeasure m = area_measure_zonotope(Zonotope{g}, 1);
    REQUIRE(m.atoms.size() == 2);
    CHECK(m.atoms[0].weight == doctest::Approx(1.0));
    CHECK(m.total() == doctest::Approx(2.0));
    CHECK(std::abs(m.atoms[0].direction(1)) == doctest::Approx(1.0));
}

TEST_CASE("area measure mass equals the Steiner-fitted intrinsic volumes") {
    // Box with half-sides (1, 0.7, 0.4): fit the cubic volume expansion at
    // four offsets and compare V_1, V_2 against the measure masses.
    Eigen::Vector3d h(1.0, 0.7, 0.4);
    Eigen::MatrixXd gens = h.asDiagonal();
    Zonotope box{gens};
    Eigen::Matrix4d vand;
    Eigen::Vector4d rhs;
    for (int i = 0; i < 4; ++i) {
        double t = 0.1 * i;
        vand.row(i) << 1.0, t, t * t, t * t * t;
        rhs(i) = box_ball_volume(h, t);
    }
    Eigen::Vector4d coef = vand.colPivHouseholderQr().solve(rhs);
    double v1 = coef(2) / M_PI;  // t^2 kappa_2 V_1
    double v2 = coef(1) / 2.0;   // t   kappa_1 V_2
    CHECK(area_measure_zonotope(box, 1).total() == doctest::Approx(v1).epsilon(1e-9));
    CHECK(area_measure_zonotope(box, 2).total() == doctest::Approx(v2).epsilon(1e-9));
}

TEST_CASE("rank-deficient zonotope: empty measure above the rank") {
    AreaMeasure m = area_measure_zonotope(segment3(), 2);
    CHECK(m.total() == doctest::Approx(0.0));
}

TEST_CASE("ball area measures") {
    Ball b = make_ball(3, 1.0);
    CHECK(area_measure_ball(b, 2).total() == doctest::Approx(2 * M_PI));
    CHECK(area_measure_ball(b, 1).total() == doctest::Approx(4.0));
    Ball b2 = make_ball(3, 2.0);
    CHECK(area_measure_ball(b2, 1).total() == doctest::Approx(8.0));       // r^1 scaling
    CHECK(area_measure_ball(b2, 2).total() == doctest::Approx(8 * M_PI));  // r^2 scaling
}

TEST_CASE("Kubota consistency: Haar shadow mean vs area measure mass") {
    Zonotope z = random_zonotope(4, 6, 2024);
    for (int j : {1, 2, 3}) {
        RngStream rng(900 + static_cast<std::uint64_t>(j));
        const long n = 20000;
        double sum = 0, sumsq = 0;
        for (long i = 0; i < n; ++i) {
            double v =
                projection_function(Body{z}, haar_subspace(4, j, rng.substream(static_cast<std::uint64_t>(i))));
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n, se = std::sqrt((sumsq / n - mean * mean) / n);
        double expect = DimConstants::c(j, 4 - j, 4, 0) * area_measure_zonotope(z, j).total();
        CHECK(std::abs(mean - expect) < 3 * se);
    }
}

TEST_CASE("top area measure in a subspace") {
    Subspace plane = Subspace::coordinate(3, 2);

    AreaMeasure seg = top_area_measure_in_subspace(Body{segment3()}, plane);
    REQUIRE(seg.atoms.size() == 2);
    CHECK(seg.atoms[0].weight == doctest::Approx(1.0));
    CHECK(seg.total() == doctest::Approx(2.0));
    for (const auto& a : seg.atoms) CHECK(std::abs(a.direction(1)) == doctest::Approx(1.0));

    AreaMeasure ball = top_area_measure_in_subspace(Body{make_ball(3, 1.0)}, plane);
    REQUIRE(ball.components.size() == 1);
    CHECK(ball.total() == doctest::Approx(M_PI));

    // The projected cube is the square [-1,1]^2: V_1 = 4, one unit atom at
    // each of the four outward edge normals.
    AreaMeasure cube = top_area_measure_in_subspace(Body{cube3()}, plane);
    REQUIRE(cube.atoms.size() == 4);
    for (const auto& a : cube.atoms) CHECK(a.weight == doctest::Approx(1.0));
    CHECK(cube.total() == doctest::Approx(4.0));
}

TEST_CASE("top area measure mass equals the shadow formula, random subspaces") {
    RngStream rng(48);
    Zonotope z = random_zonotope(4, 7, 4711);
    for (int j : {1, 2}) {
        for (int trial = 0; trial < 20; ++trial) {
            Subspace L = haar_subspace(4, j + 1, rng);
            AreaMeasure am = top_area_measure_in_subspace(Body{z}, L);
            CHECK(am.total() == doctest::Approx(intrinsic_volume_of_projection(Body{z}, L, j)).epsilon(1e-10));
        }
    }
}

TEST_CASE("polytope functionals in dimension <= 3") {
    // The cube as a polytope: hull route must agree with the zonotope route.
    Eigen::MatrixXd verts(3, 8);
    int c = 0;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) verts.col(c++) << sx, sy, sz;
    Polytope cubep = make_polytope(verts);

    RngStream rng(7);
    Subspace L3 = haar_subspace(3, 3, rng);
    CHECK(intrinsic_volume_of_projection(Body{cubep}, L3, 3) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(intrinsic_volume_of_projection(Body{cubep}, L3, 2) == doctest::Approx(12.0).epsilon(1e-9));

    AreaMeasure am = area_measure(Body{cubep}, 2);
    CHECK(am.total() == doctest::Approx(12.0).epsilon(1e-9));

    Subspace plane = Subspace::coordinate(3, 2);
    CHECK(projection_function(Body{cubep}, plane) == doctest::Approx(4.0).epsilon(1e-9));
    AreaMeasure top = top_area_measure_in_subspace(Body{cubep}, plane);
    CHECK(top.total() == doctest::Approx(4.0).epsilon(1e-9));

    // Flat square polytope in 3-space: both sides reported.
    Eigen::MatrixXd flat(3, 4);
    flat << 1, -1, 1, -1, 1, 1, -1, -1, 0, 0, 0, 0;
    AreaMeasure flat_top = top_area_measure_in_subspace(Body{make_polytope(flat)}, Subspace::full(3));
    CHECK(flat_top.total() == doctest::Approx(4.0).epsilon(1e-9));  // V_2 of the square
}

TEST_CASE("polytope limits throw") {
    Eigen::MatrixXd verts = Eigen::MatrixXd::Identity(4, 4);
    Polytope p = make_polytope(verts);
    Subspace big = Subspace::full(4);
    CHECK_THROWS_AS(intrinsic_volume_of_projection(Body{p}, big, 4), Unsupported);
    CHECK_THROWS_AS(area_measure(Body{p}, 3), Unsupported);
}

TEST_CASE("constructors validate") {
    CHECK_THROWS_AS(make_ball(3, 0.0), InvalidDimension);
    CHECK_THROWS_AS(make_zonotope(Eigen::MatrixXd::Random(3, 15)), Unsupported);
    Eigen::MatrixXd dup(2, 3);
    dup << 1, 1, 0, 2, 2, 0;
    CHECK(make_polytope(dup).vertices.cols() == 2);
    CHECK(body_rank(Body{segment3()}) == 1);
    CHECK(body_rank(Body{cube3()}) == 3);
}
