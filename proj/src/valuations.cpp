#include "glab/valuations.hpp"

#include <cmath>

namespace glab {

namespace {

double ellipsoid_volume_of_double_projection(const Ball& b, const Subspace& outer, const Subspace& inner) {
    // (B|outer)|inner is an ellipsoid: kappa_j r^j times the volume scaling
    // of the composed projection restricted to outer.
    Eigen::MatrixXd a = inner.frame().transpose() * outer.frame();  // j x k
    Eigen::MatrixXd gram = a * a.transpose();
    double det = gram.determinant();
    double scale = det > 0 ? std::sqrt(det) : 0.0;
    return unit_ball_volume(static_cast<int>(inner.sub_dim())) *
           std::pow(b.radius, static_cast<double>(inner.sub_dim())) * scale;
}

Body project_body(const Body& body, const Subspace& L) {
    if (const auto* z = std::get_if<Zonotope>(&body)) {
        Eigen::MatrixXd pg = L.frame() * (L.frame().transpose() * z->generators);
        return Zonotope{std::move(pg)};
    }
    if (const auto* p = std::get_if<Polytope>(&body)) {
        Eigen::MatrixXd pv = L.frame() * (L.frame().transpose() * p->vertices);
        return Polytope{std::move(pv)};
    }
    throw Unsupported("project_body: balls are projected analytically");
}

}  // namespace

Valuation intrinsic_valuation(int d, int j) {
    if (j < 1 || j > d - 1) throw InvalidDimension("intrinsic_valuation: need 1 <= j <= d-1");
    Valuation v;
    v.label = "V_" + std::to_string(j);
    v.degree = j;
    v.eval = [j](const Body& k) -> ValueSE { return {area_measure(k, j).total(), 0.0}; };
    v.eval_on_projection = [j](const Body& k, const Subspace& L) -> ValueSE {
        return {intrinsic_volume_of_projection(k, L, j), 0.0};
    };
    return v;
}

Valuation crofton_valuation(const GrassmannFunction& f, long n_mc, std::uint64_t seed) {
    Valuation v;
    v.label = "crofton[" + f.label + "]";
    v.degree = f.k;
    const int d = f.d;
    const int j = f.k;
    v.eval = [f, n_mc, seed, d, j](const Body& k) -> ValueSE {
        RngStream rng{seed};
        double sum = 0.0, sumsq = 0.0;
        for (long i = 0; i < n_mc; ++i) {
            RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
            Subspace m = haar_subspace(d, j, sub);
            double t = f(m) * intrinsic_volume_of_projection(k, m, j);
            sum += t;
            sumsq += t * t;
        }
        double mean = sum / static_cast<double>(n_mc);
        double var = n_mc > 1 ? (sumsq - sum * mean) / static_cast<double>(n_mc - 1) : 0.0;
        return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n_mc))};
    };
    v.eval_on_projection = [f, n_mc, seed, d, j](const Body& k, const Subspace& L) -> ValueSE {
        RngStream rng{seed};
        double sum = 0.0, sumsq = 0.0;
        for (long i = 0; i < n_mc; ++i) {
            RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
            Subspace m = haar_subspace(d, j, sub);
            double vj;
            if (const auto* b = std::get_if<Ball>(&k)) {
                vj = ellipsoid_volume_of_double_projection(*b, L, m);
            } else {
                vj = intrinsic_volume_of_projection(project_body(k, L), m, j);
            }
            double t = f(m) * vj;
            sum += t;
            sumsq += t * t;
        }
        double mean = sum / static_cast<double>(n_mc);
        double var = n_mc > 1 ? (sumsq - sum * mean) / static_cast<double>(n_mc - 1) : 0.0;
        return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n_mc))};
    };
    return v;
}

Valuation gamma_valuation(const GrassmannFunction& f, const DescriptorConfig& cfg) {
    Valuation v;
    v.label = "gamma[" + f.label + "]";
    v.degree = cfg.j;
    v.eval = [f, cfg](const Body& k) -> ValueSE {
        EmpiricalMeasure gamma = grassmann_measure(k, cfg);
        return integrate_grassmann(gamma, f.f);
    };
    return v;
}

ValueSE klain(const Valuation& phi, const Subspace& L, KlainBody mode) {
    if (!phi.eval) throw Unsupported("klain: valuation has no evaluator");
    const int j = static_cast<int>(L.sub_dim());
    if (j != phi.degree) throw InvalidDimension("klain: sub_dim(L) must equal the valuation degree");
    Eigen::MatrixXd gens = 0.5 * L.frame();  // segments [-f_c/2, f_c/2]: j-volume 1
    if (mode == KlainBody::StretchedBox) {
        // Equal-volume box with side ratios 2: still V_j = 1.
        double logside = 0.0;
        for (int c = 0; c < j; ++c) logside += c;
        double norm = std::pow(2.0, logside / j);
        for (int c = 0; c < j; ++c) gens.col(c) *= std::pow(2.0, c) / norm;
    }
    return phi.eval(Body{Zonotope{gens}});
}

ComparisonReport verify_klain_cosine(const GrassmannFunction& f, const KlainCosineConfig& cfg) {
    const int d = cfg.descriptor.d;
    const int j = cfg.descriptor.j;
    RngStream probe_rng{cfg.probe_seed};
    std::vector<ProbeRow> rows;
    double mass_mu = 0.0, mass_nu = 0.0;
    for (int p = 0; p < cfg.probes; ++p) {
        RngStream sub = probe_rng.substream(static_cast<std::uint64_t>(p));
        Subspace lp = haar_subspace(d, j, sub);
        DescriptorConfig dc = cfg.descriptor;
        dc.seed = RngStream(cfg.descriptor.seed).substream(static_cast<std::uint64_t>(p)).next_u64();
        Valuation gv = gamma_valuation(f, dc);
        ValueSE lhs = klain(gv, lp);
        ValueSE rhs = cosine_fn(f, lp, cfg.n_cosine, sub.substream(7));
        ProbeRow r;
        r.name = "L'" + std::to_string(p);
        r.mu = lhs.value;
        r.mu_se = lhs.se;
        r.nu = rhs.value;
        r.nu_se = rhs.se;
        rows.push_back(std::move(r));
        mass_mu += lhs.value;
        mass_nu += rhs.value;
    }
    return compare_rows(std::move(rows), cfg.z_threshold, mass_mu, mass_nu);
}

Theorem31Result verify_theorem_3_1(const Valuation& phi, const Body& body, const DescriptorConfig& cfg) {
    if (!phi.eval_on_projection)
        throw Unsupported("verify_theorem_3_1: valuation lacks projection support");
    Theorem31Result res;

    EmpiricalMeasure gamma = grassmann_measure(body, cfg);
    res.lhs = integrate(gamma, [&](long i) { return klain(phi, gamma.subspace(i)).value; });

    // Haar average of phi(K|L) over G(d, j+1); the valuation's own SE is
    // folded into the spread of the draws.
    RngStream rng{RngStream(cfg.seed).substream(0xabcd).next_u64()};
    long n = cfg.n_outer;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Subspace L = haar_subspace(cfg.d, cfg.j + 1, sub);
        double t = phi.eval_on_projection(body, L).value;
        sum += t;
        sumsq += t * t;
    }
    double mean = sum / static_cast<double>(n);
    double var = n > 1 ? (sumsq - sum * mean) / static_cast<double>(n - 1) : 0.0;
    res.rhs = {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};

    ProbeRow row;
    row.name = phi.label;
    row.mu = res.lhs.value;
    row.mu_se = res.lhs.se;
    row.nu = res.rhs.value;
    row.nu_se = res.rhs.se;
    res.report = compare_rows({row}, 3.0, res.lhs.value, res.rhs.value);
    res.fitted = res.rhs.value != 0.0 ? res.lhs.value / res.rhs.value : 0.0;
    return res;
}

}  // namespace glab
