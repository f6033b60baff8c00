#include "glab/transforms.hpp"

#include <cmath>

namespace glab {

GrassmannFunction constant_function(int d, int k, double value) {
    return {"const:" + std::to_string(value), d, k, [value](const Subspace&) { return value; }};
}

GrassmannFunction bracket_function(int d, int k, const Subspace& reference) {
    return {"bracket(.,M0)", d, k, [reference](const Subspace& L) { return bracket(L, reference); }};
}

namespace {

ValueSE mc_mean(long n, const std::function<double(long)>& term) {
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        double t = term(i);
        sum += t;
        sumsq += t * t;
    }
    double mean = sum / static_cast<double>(n);
    if (n <= 1) return {mean, 0.0};
    double var = (sumsq - sum * mean) / static_cast<double>(n - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

}  // namespace

ValueSE cosine_fn(const GrassmannFunction& f, const Subspace& L, long n, RngStream rng) {
    if (L.sub_dim() != f.k) throw InvalidDimension("cosine_fn: sub_dim(L) must match the function domain");
    return mc_mean(n, [&](long i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Subspace m = haar_subspace(f.d, f.k, sub);
        return f(m) * bracket(L, m);
    });
}

double cosine_measure(const EmpiricalMeasure& mu, const Subspace& L) {
    if (mu.carrier().kind != CarrierKind::Grassmann || mu.carrier().k != L.sub_dim() ||
        mu.carrier().d != L.ambient_dim())
        throw InvalidDimension("cosine_measure: carrier mismatch");
    double sum = 0.0;
    for (long i = 0; i < mu.size(); ++i) sum += mu.weight(i) * bracket(mu.subspace(i), L);
    return sum;
}

ValueSE radon_fn(const GrassmannFunction& f, const Subspace& E, long n, RngStream rng) {
    const int j = f.k;
    const int k = static_cast<int>(E.sub_dim());
    const int d = static_cast<int>(E.ambient_dim());
    if (j == k) throw InvalidDimension("radon_fn: j = k is not a Radon transform");
    if (j < 1 || j > d - 1 || k < 1 || k > d - 1) throw InvalidDimension("radon_fn: need 1 <= j,k <= d-1");
    return mc_mean(n, [&](long i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Subspace m = j > k ? extend_uniform(E, j, sub) : haar_inside(E, j, sub);
        return f(m);
    });
}

EmpiricalMeasure radon_measure(const EmpiricalMeasure& rho, int k, int per_atom, RngStream rng) {
    if (rho.carrier().kind != CarrierKind::Grassmann) throw InvalidDimension("radon_measure: Grassmann carrier required");
    const int d = rho.carrier().d;
    const int j = rho.carrier().k;
    if (j == k) throw InvalidDimension("radon_measure: j = k is not a Radon transform");
    if (k < 1 || k > d - 1) throw InvalidDimension("radon_measure: need 1 <= k <= d-1");
    EmpiricalMeasure out(Carrier::grassmann(d, k));
    out.reserve(rho.size() * per_atom);
    out.meta() = rho.meta();
    for (long i = 0; i < rho.size(); ++i) {
        Subspace base = rho.subspace(i);
        double w = rho.weight(i) / per_atom;
        RngStream atom_stream = rng.substream(static_cast<std::uint64_t>(i));
        for (int t = 0; t < per_atom; ++t) {
            RngStream sub = atom_stream.substream(static_cast<std::uint64_t>(t));
            Subspace m = k > j ? extend_uniform(base, k, sub) : haar_inside(base, k, sub);
            out.append_grassmann(m, w, rho.group(i));
        }
    }
    return out;
}

ValueSE sphere_radon_fn(const GrassmannFunction& f, const Eigen::VectorXd& u, long n, RngStream rng) {
    const int k = f.k;
    const int d = f.d;
    if (k < 2 || k > d - 1) throw InvalidDimension("sphere_radon_fn: need 2 <= k <= d-1");
    Subspace line = Subspace::from_span(u);
    ValueSE mean = mc_mean(n, [&](long i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        return f(extend_uniform(line, k, sub));
    });
    return {0.5 * mean.value, 0.5 * mean.se};
}

EmpiricalMeasure sphere_radon_measure(const EmpiricalMeasure& rho, int per_atom, RngStream rng) {
    if (rho.carrier().kind != CarrierKind::Grassmann)
        throw InvalidDimension("sphere_radon_measure: Grassmann carrier required");
    const int d = rho.carrier().d;
    const int k = rho.carrier().k;
    if (k < 1 || k > d - 1) throw InvalidDimension("sphere_radon_measure: need 1 <= k <= d-1");
    EmpiricalMeasure out(Carrier::sphere(d));
    out.reserve(rho.size() * per_atom * 2);
    out.meta() = rho.meta();
    for (long i = 0; i < rho.size(); ++i) {
        Subspace base = rho.subspace(i);
        double w = rho.weight(i) / (2.0 * per_atom);
        RngStream atom_stream = rng.substream(static_cast<std::uint64_t>(i));
        for (int t = 0; t < per_atom; ++t) {
            RngStream sub = atom_stream.substream(static_cast<std::uint64_t>(t));
            Eigen::VectorXd u = uniform_unit_in(base, sub);
            out.append_sphere(u, w, rho.group(i));
            out.append_sphere(-u, w, rho.group(i));
        }
    }
    return out;
}

}  // namespace glab
