#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "glab/descriptors.hpp"
#include "glab/measures.hpp"

using namespace glab;

namespace {
Eigen::VectorXd unit(int d, int i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v(i) = 1.0;
    return v;
}
}  // namespace

TEST_CASE("integrate: atoms, exact mass, Haar bracket mean") {
    EmpiricalMeasure atom(Carrier::sphere(3));
    atom.append_sphere(unit(3, 0), 3.0, 0);
    ValueSE v = integrate_sphere(atom, [&](const Eigen::VectorXd& u) { return std::abs(u(0)); });
    CHECK(v.value == doctest::Approx(3.0));
    CHECK(v.se == 0.0);

    EmpiricalMeasure empty(Carrier::sphere(3));
    ValueSE z = integrate(empty, [](long) { return 1.0; });
    CHECK(z.value == 0.0);
    CHECK(z.se == 0.0);

    EmpiricalMeasure haar(Carrier::grassmann(3, 1));
    RngStream rng(1);
    const long n = 100000;
    haar.reserve(n);
    for (long i = 0; i < n; ++i)
        haar.append_grassmann(haar_subspace(3, 1, rng.substream(static_cast<std::uint64_t>(i))), 1.0 / n, i);
    Subspace probe = Subspace::coordinate(3, 1);
    ValueSE m = integrate_grassmann(haar, [&](const Subspace& L) { return bracket(L, probe); });
    CHECK(std::abs(m.value - 0.5) < 3 * m.se);
    ValueSE mass = integrate(haar, [](long) { return 1.0; });
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate is additive over concatenated samples") {
    RngStream rng(2);
    EmpiricalMeasure a(Carrier::sphere(3)), b(Carrier::sphere(3)), ab(Carrier::sphere(3));
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd u = uniform_unit_in(Subspace::full(3), rng);
        double w = rng.uniform();
        if (i % 2 == 0)
            a.append_sphere(u, w, i);
        else
            b.append_sphere(u, w, i);
        ab.append_sphere(u, w, i);
    }
    auto f = [](const Eigen::VectorXd& u) { return u(2) * u(2); };
    CHECK(integrate_sphere(ab, f).value ==
          doctest::Approx(integrate_sphere(a, f).value + integrate_sphere(b, f).value).epsilon(1e-15));
}

TEST_CASE("push_forward preserves mass bitwise and checks the target carrier") {
    RngStream rng(3);
    DescriptorConfig cfg{3, 1, 500, 1, 42, ""};
    EmpiricalMeasure flags = flag_measure(Body{make_ball(3, 1.0)}, cfg);
    flags.validate();

    EmpiricalMeasure dirs = push_forward(flags, Carrier::sphere(3),
                                         [](const EmpiricalMeasure& m, long i, Eigen::VectorXd& out) {
                                             out = m.direction(i);
                                         });
    CHECK(dirs.total_mass() == flags.total_mass());  // weights untouched
    dirs.validate();

    // Identity map: equal integrals for every probe.
    EmpiricalMeasure same = push_forward(dirs, Carrier::sphere(3),
                                         [](const EmpiricalMeasure& m, long i, Eigen::VectorXd& out) {
                                             out = m.direction(i);
                                         });
    ProbeBattery battery = ProbeBattery::default_battery(Carrier::sphere(3), 4, 99);
    for (int p = 0; p < battery.size(); ++p)
        CHECK(battery.integrate(p, dirs).value == doctest::Approx(battery.integrate(p, same).value).epsilon(1e-15));

    // A violating map names the sample index.
    CHECK_THROWS_AS(push_forward(dirs, Carrier::sphere(3),
                                 [](const EmpiricalMeasure&, long, Eigen::VectorXd& out) {
                                     out.setZero();
                                     out(0) = 2.0;  // not unit
                                 })
                        .validate(),
                    CarrierViolation);
}

TEST_CASE("flag pushforwards: direction and slice keep the flag structure") {
    DescriptorConfig cfg{3, 1, 300, 1, 7, ""};
    EmpiricalMeasure flags = flag_measure(Body{Zonotope{Eigen::MatrixXd::Identity(3, 3)}}, cfg);
    EmpiricalMeasure sliced = push_forward(flags, Carrier::grassmann(3, 1),
                                           [](const EmpiricalMeasure& m, long i, Eigen::VectorXd& out) {
                                               Subspace s = slice(m.direction(i), m.subspace(i));
                                               out = Eigen::Map<const Eigen::VectorXd>(s.frame().data(),
                                                                                       s.frame().size());
                                           });
    CHECK(sliced.total_mass() == flags.total_mass());
    sliced.validate();
}

TEST_CASE("compare: identical, doubled, reciprocal, no-fit") {
    RngStream rng(5);
    EmpiricalMeasure mu(Carrier::grassmann(3, 1));
    for (long i = 0; i < 2000; ++i)
        mu.append_grassmann(haar_subspace(3, 1, rng.substream(static_cast<std::uint64_t>(i))), 1.0 / 2000, i);
    EmpiricalMeasure twice = scale_weights(mu, 2.0);

    ProbeBattery battery = ProbeBattery::default_battery(Carrier::grassmann(3, 1), 5, 11);
    ComparisonReport same = compare(mu, mu, battery, 3.0);
    CHECK(same.fitted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same.max_abs_z() == doctest::Approx(0.0));
    CHECK(same.match);

    ComparisonReport doubled = compare(twice, mu, battery, 3.0);
    CHECK(doubled.fitted == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(doubled.max_abs_z() == doctest::Approx(0.0).epsilon(1e-9));

    ComparisonReport forward = compare(twice, mu, battery, 3.0);
    ComparisonReport backward = compare(mu, twice, battery, 3.0);
    CHECK(forward.fitted * backward.fitted == doctest::Approx(1.0).epsilon(1e-6));

    EmpiricalMeasure zero(Carrier::grassmann(3, 1));
    zero.append_grassmann(Subspace::coordinate(3, 1), 0.0, 0);
    CHECK_THROWS_AS(compare(mu, zero, battery, 3.0), NoFit);
}

TEST_CASE("default battery probes are bounded by one") {
    RngStream rng(6);
    for (Carrier c : {Carrier::grassmann(4, 2), Carrier::sphere(4), Carrier::flag(4, 2)}) {
        ProbeBattery b = ProbeBattery::default_battery(c, 6, 17);
        EmpiricalMeasure m(c);
        for (int i = 0; i < 200; ++i) {
            Subspace L = haar_subspace(4, c.kind == CarrierKind::Sphere ? 1 : c.k, rng);
            if (c.kind == CarrierKind::Sphere)
                m.append_sphere(L.frame().col(0), 1.0, i);
            else if (c.kind == CarrierKind::Grassmann)
                m.append_grassmann(L, 1.0, i);
            else
                m.append_flag(uniform_unit_in(L, rng), L, 1.0, i);
        }
        for (int p = 0; p < b.size(); ++p)
            for (long i = 0; i < m.size(); ++i) CHECK(std::abs(b.eval(p, m, i)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("csv round trip preserves weights, points, and integrals") {
    DescriptorConfig cfg{3, 1, 200, 1, 13, ""};
    EmpiricalMeasure gamma = grassmann_measure(Body{make_ball(3, 1.0)}, cfg);
    std::stringstream ss;
    write_csv(gamma, ss);
    std::string text = ss.str();
    CHECK(text.substr(0, 8) == "carrier:");
    CHECK(text.find("\r") == std::string::npos);  // LF endings

    std::stringstream in(text);
    EmpiricalMeasure back = read_csv(in);
    REQUIRE(back.size() == gamma.size());
    CHECK(back.total_mass() == doctest::Approx(gamma.total_mass()).epsilon(1e-15));
    ProbeBattery battery = ProbeBattery::default_battery(Carrier::grassmann(3, 1), 3, 23);
    for (int p = 0; p < battery.size(); ++p)
        CHECK(battery.integrate(p, back).value ==
              doctest::Approx(battery.integrate(p, gamma).value).epsilon(1e-14));
}

TEST_CASE("battery separates the cube from the stretched box") {
    Eigen::MatrixXd box_g = Eigen::MatrixXd::Identity(3, 3);
    box_g(0, 0) = 2.0;
    DescriptorConfig ca{3, 1, 100000, 1, 31, ""};
    DescriptorConfig cb = ca;
    cb.seed = 32;
    EmpiricalMeasure a = grassmann_measure(Body{Zonotope{Eigen::MatrixXd::Identity(3, 3)}}, ca);
    EmpiricalMeasure b = grassmann_measure(Body{Zonotope{box_g}}, cb);
    ProbeBattery battery = ProbeBattery::default_battery(Carrier::grassmann(3, 1), 10, 37);
    double maxz = 0;
    for (int p = 0; p < battery.size(); ++p) {
        ValueSE va = battery.integrate(p, a);
        ValueSE vb = battery.integrate(p, b);
        double denom = std::sqrt(va.se * va.se + vb.se * vb.se);
        if (denom > 0) maxz = std::max(maxz, std::abs(va.value - vb.value) / denom);
    }
    CHECK(maxz > 5.0);
}
