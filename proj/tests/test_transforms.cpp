#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glab/descriptors.hpp"
#include "glab/transforms.hpp"

using namespace glab;

TEST_CASE("cosine transform of constants") {
    GrassmannFunction one = constant_function(3, 1, 1.0);
    GrassmannFunction zero = constant_function(3, 1, 0.0);
    RngStream rng(1);
    for (int t = 0; t < 3; ++t) {
        Subspace L = haar_subspace(3, 1, rng);
        ValueSE v = cosine_fn(one, L, 50000, rng.substream(static_cast<std::uint64_t>(t)));
        CHECK(std::abs(v.value - 0.5) < 3 * v.se);
        CHECK(cosine_fn(zero, L, 100, rng.substream(99)).value == 0.0);
    }
}

TEST_CASE("cosine transform of a bracket probe is rotation invariant") {
    RngStream rng(2);
    Subspace m0 = haar_subspace(3, 1, rng);
    GrassmannFunction f = bracket_function(3, 1, m0);
    double lo = 1e300, hi = -1e300, se_max = 0;
    for (int t = 0; t < 10; ++t) {
        Subspace L = haar_subspace(3, 1, rng);
        GrassmannFunction fl = bracket_function(3, 1, L);
        ValueSE v = cosine_fn(fl, L, 40000, rng.substream(static_cast<std::uint64_t>(t)));
        lo = std::min(lo, v.value);
        hi = std::max(hi, v.value);
        se_max = std::max(se_max, v.se);
        CHECK(v.value > 0);
    }
    CHECK(hi - lo <= 6 * se_max);  // constant across L within noise
}

TEST_CASE("cosine_measure: atoms and the projection generating measure") {
    Subspace m = Subspace::coordinate(3, 1);
    EmpiricalMeasure delta(Carrier::grassmann(3, 1));
    delta.append_grassmann(m, 1.0, 0);
    RngStream rng(3);
    Subspace L = haar_subspace(3, 1, rng);
    CHECK(cosine_measure(delta, L) == doctest::Approx(bracket(L, m)).epsilon(1e-14));

    // One-generator zonotope: its Grassmann generating measure has a single
    // atom of weight 2 and reproduces the shadow length.
    Eigen::MatrixXd g(3, 1);
    g << 1, 0, 0;
    EmpiricalMeasure rho = projection_generating_measure(Zonotope{g}, 1);
    REQUIRE(rho.size() == 1);
    CHECK(rho.weight(0) == doctest::Approx(2.0));
    CHECK(cosine_measure(rho, L) == doctest::Approx(projection_function(Body{Zonotope{g}}, L)).epsilon(1e-12));

    EmpiricalMeasure rho2 = projection_generating_measure(Zonotope{Eigen::MatrixXd::Identity(3, 3)}, 2);
    REQUIRE(rho2.size() == 3);
    CHECK(cosine_measure(rho2, Subspace::coordinate(3, 2)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("radon transform of functions") {
    GrassmannFunction one = constant_function(3, 2, 1.0);
    Subspace e1 = Subspace::coordinate(3, 1);
    RngStream rng(4);
    ValueSE v = radon_fn(one, e1, 500, rng);
    CHECK(v.value == doctest::Approx(1.0));
    CHECK(v.se == doctest::Approx(0.0));

    GrassmannFunction same_dim = constant_function(3, 1, 1.0);
    CHECK_THROWS_AS(radon_fn(same_dim, e1, 10, rng), InvalidDimension);

    // Rejection oracle: Haar planes conditioned to (almost) contain e1.
    Subspace m0 = Subspace::from_span((Eigen::MatrixXd(3, 2) << 1, 0, 0, 1, 0, 0).finished());
    GrassmannFunction f = bracket_function(3, 2, m0);
    ValueSE direct = radon_fn(f, e1, 40000, rng.substream(1));
    Eigen::VectorXd e1v = Eigen::VectorXd::Unit(3, 0);
    double sum = 0, sumsq = 0;
    long kept = 0;
    std::uint64_t i = 0;
    RngStream rej(5);
    while (kept < 4000) {
        Subspace L = haar_subspace(3, 2, rej.substream(i++));
        if (L.project(e1v).norm() > 1.0 - 2e-4) {
            double t = f(L);
            sum += t;
            sumsq += t * t;
            ++kept;
        }
    }
    double mean = sum / kept, se = std::sqrt((sumsq / kept - mean * mean) / kept);
    CHECK(std::abs(direct.value - mean) < 3 * std::sqrt(direct.se * direct.se + se * se) + 2e-3);

    // Rotation covariance.
    RngStream rng2(6);
    Eigen::MatrixXd rot = random_rotation(3, rng2);
    Subspace e1r(3, rot * e1.frame());
    GrassmannFunction f_rot{"rot", 3, 2, [&](const Subspace& L) {
                                return f(Subspace(3, (rot.transpose() * L.frame()).eval()));
                            }};
    ValueSE a = radon_fn(f, e1, 40000, rng2.substream(1));
    ValueSE b = radon_fn(f_rot, e1r, 40000, rng2.substream(2));
    CHECK(std::abs(a.value - b.value) < 3 * std::sqrt(a.se * a.se + b.se * b.se));
}

TEST_CASE("radon transform of measures: mass, duality, invariance") {
    RngStream rng(7);
    EmpiricalMeasure rho(Carrier::grassmann(3, 1));
    for (long i = 0; i < 3000; ++i)
        rho.append_grassmann(haar_subspace(3, 1, rng.substream(static_cast<std::uint64_t>(i))),
                             rng.uniform() / 1000.0, i);
    EmpiricalMeasure pushed = radon_measure(rho, 2, 4, rng.substream(900001));
    CHECK(pushed.total_mass() == doctest::Approx(rho.total_mass()).epsilon(1e-14));

    // Duality against 20 random probe pairs.
    for (int t = 0; t < 20; ++t) {
        RngStream sub = rng.substream(777000 + static_cast<std::uint64_t>(t));
        Subspace m0 = haar_subspace(3, 2, sub);
        GrassmannFunction f = bracket_function(3, 2, m0);
        ValueSE lhs = integrate_grassmann(pushed, f.f);
        ValueSE rhs = integrate(rho, [&](long i) {
            return radon_fn(f, rho.subspace(i), 64, sub.substream(static_cast<std::uint64_t>(i))).value;
        });
        CHECK(std::abs(lhs.value - rhs.value) <
              3 * std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se) + 5e-3);
    }

    // Haar in, Haar out.
    EmpiricalMeasure haar2(Carrier::grassmann(3, 2));
    for (long i = 0; i < 3000; ++i)
        haar2.append_grassmann(haar_subspace(3, 2, rng.substream(880000 + static_cast<std::uint64_t>(i))),
                               rho.total_mass() / 3000.0, i);
    ProbeBattery battery = ProbeBattery::default_battery(Carrier::grassmann(3, 2), 5, 41);
    ComparisonReport rep = compare(pushed, haar2, battery, 3.0);
    CHECK(rep.match);
    CHECK(rep.fitted == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("spherical radon transform of functions keeps the one-half convention") {
    GrassmannFunction one = constant_function(3, 2, 1.0);
    GrassmannFunction two = constant_function(3, 2, 2.0);
    Eigen::VectorXd u = Eigen::VectorXd::Unit(3, 2);
    RngStream rng(8);
    CHECK(sphere_radon_fn(one, u, 200, rng).value == doctest::Approx(0.5));
    CHECK(sphere_radon_fn(two, u, 200, rng).value == doctest::Approx(1.0));

    // Planes through e3 are orthogonal to span{e1,e2} in the bracket sense.
    GrassmannFunction f = bracket_function(3, 2, Subspace::coordinate(3, 2));
    ValueSE v = sphere_radon_fn(f, u, 20000, rng);
    CHECK(v.value == doctest::Approx(0.0).epsilon(1e-12));

    // Oblique direction against the rejection oracle.
    Eigen::VectorXd w = Eigen::Vector3d(1, 0, 1).normalized();
    ValueSE direct = sphere_radon_fn(f, w, 40000, rng.substream(1));
    double sum = 0, sumsq = 0;
    long kept = 0;
    std::uint64_t i = 0;
    RngStream rej(9);
    while (kept < 4000) {
        Subspace L = haar_subspace(3, 2, rej.substream(i++));
        if (L.project(w).norm() > 1.0 - 2e-4) {
            double t = 0.5 * f(L);
            sum += t;
            sumsq += t * t;
            ++kept;
        }
    }
    double mean = sum / kept, se = std::sqrt((sumsq / kept - mean * mean) / kept);
    CHECK(std::abs(direct.value - mean) < 3 * std::sqrt(direct.se * direct.se + se * se) + 2e-3);
}

TEST_CASE("spherical radon transform of measures: equator, mass, uniformity") {
    EmpiricalMeasure delta(Carrier::grassmann(3, 2));
    delta.append_grassmann(Subspace::coordinate(3, 2), 1.0, 0);
    RngStream rng(10);
    EmpiricalMeasure eq = sphere_radon_measure(delta, 2000, rng);
    CHECK(eq.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    // Even by construction and supported on the equator.
    ValueSE odd = integrate_sphere(eq, [](const Eigen::VectorXd& u) { return u(0); });
    CHECK(odd.value == doctest::Approx(0.0).epsilon(1e-12));
    for (long i = 0; i < eq.size(); ++i) CHECK(std::abs(eq.direction(i)(2)) < 1e-12);

    EmpiricalMeasure haar2(Carrier::grassmann(3, 2));
    for (long i = 0; i < 4000; ++i)
        haar2.append_grassmann(haar_subspace(3, 2, rng.substream(static_cast<std::uint64_t>(i))), 1.0 / 4000, i);
    EmpiricalMeasure sph = sphere_radon_measure(haar2, 2, rng.substream(999));
    EmpiricalMeasure uniform(Carrier::sphere(3));
    for (long i = 0; i < 4000; ++i)
        uniform.append_sphere(uniform_unit_in(Subspace::full(3), rng.substream(50000 + static_cast<std::uint64_t>(i))),
                              1.0 / 4000, i);
    ProbeBattery battery = ProbeBattery::default_battery(Carrier::sphere(3), 5, 43);
    ComparisonReport rep = compare(sph, uniform, battery, 3.0);
    CHECK(rep.match);
}

TEST_CASE("projected-span desk oracle: masses pi/4 versus 1/2") {
    // For the line M = span{e1} in R^3: the mean projection weight over
    // invariant planes is pi/4, while the bracket mean over invariant lines
    // is 1/2. The two sides of the claimed change-of-variables differ.
    RngStream rng(11);
    Subspace m0 = Subspace::coordinate(3, 1);
    const long n = 60000;
    double s1 = 0, q1 = 0, s2 = 0, q2 = 0;
    for (long i = 0; i < n; ++i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Subspace L = haar_subspace(3, 2, sub);
        bool ok = true;
        Subspace ml = project_subspace(m0, L, &ok);
        double v1 = ok ? bracket(m0, ml) : 0.0;
        double v2 = bracket(m0, haar_subspace(3, 1, sub));
        s1 += v1;
        q1 += v1 * v1;
        s2 += v2;
        q2 += v2 * v2;
    }
    double m1 = s1 / n, se1 = std::sqrt((q1 / n - m1 * m1) / n);
    double m2 = s2 / n, se2 = std::sqrt((q2 / n - m2 * m2) / n);
    CHECK(std::abs(m1 - M_PI / 4) < 3 * se1);
    CHECK(std::abs(m2 - 0.5) < 3 * se2);
}

TEST_CASE("project_subspace flags rank loss") {
    Subspace m = Subspace::coordinate(3, 1);
    Subspace orth = Subspace::coordinate(3, 2);  // spans e1,e2; fine
    bool ok = true;
    project_subspace(m, orth, &ok);
    CHECK(ok);
    Eigen::MatrixXd yz(3, 2);
    yz << 0, 0, 1, 0, 0, 1;
    project_subspace(m, Subspace(3, yz), &ok);  // e1 projects to zero
    CHECK(!ok);
}
