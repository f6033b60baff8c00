#pragma once

#include <functional>
#include <string>

#include "glab/core.hpp"
#include "glab/measures.hpp"

namespace glab {

/// Scalar function on a Grassmannian G(d,k), bounded on its domain.
struct GrassmannFunction {
    std::string label;
    int d = 0;
    int k = 0;
    std::function<double(const Subspace&)> f;

    double operator()(const Subspace& L) const { return f(L); }
};

GrassmannFunction constant_function(int d, int k, double value);
GrassmannFunction bracket_function(int d, int k, const Subspace& reference);

/// Cosine transform C_j f(L) = int f(M) <L,M> nu_j(dM), Monte Carlo over N
/// invariant draws.
ValueSE cosine_fn(const GrassmannFunction& f, const Subspace& L, long n, RngStream rng);

/// Exact cosine transform of an empirical Grassmann measure:
/// sum_i w_i <L, M_i>. Linear in the measure.
double cosine_measure(const EmpiricalMeasure& mu, const Subspace& L);

/// Grassmann Radon transform R_{jk} f(E) for f on G(d,j), E in G(d,k):
/// the mean of f over j-spaces containing E (j > k) or contained in E (j < k).
ValueSE radon_fn(const GrassmannFunction& f, const Subspace& E, long n, RngStream rng);

/// Measure-level Radon transform by duality: every atom is replaced by
/// per_atom invariant samples of its containment fibre. Mass preserved.
EmpiricalMeasure radon_measure(const EmpiricalMeasure& rho, int k, int per_atom, RngStream rng);

/// Spherical Radon transform R_{k,1} f(u) = (1/2) int f over k-spaces
/// containing u. The one half follows the function-level convention; the
/// measure-level extension below is mass preserving instead (the two differ
/// by the even-function double cover, and every identity that mixes them is
/// reported with a fitted constant rather than a hard-coded choice).
ValueSE sphere_radon_fn(const GrassmannFunction& f, const Eigen::VectorXd& u, long n, RngStream rng);

/// Mass-preserving measure-level transform: each atom (L_i, w_i) becomes
/// per_atom uniform unit vectors of S^{d-1} cap L_i, symmetrized over +-u.
EmpiricalMeasure sphere_radon_measure(const EmpiricalMeasure& rho, int per_atom, RngStream rng);

}  // namespace glab
