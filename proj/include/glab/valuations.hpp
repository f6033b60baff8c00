#pragma once

#include <functional>
#include <string>

#include "glab/bodies.hpp"
#include "glab/descriptors.hpp"
#include "glab/measures.hpp"
#include "glab/transforms.hpp"

namespace glab {

/// Even translation-invariant valuation as a callable, possibly Monte Carlo
/// (evaluations carry standard errors). eval_on_projection computes
/// phi(K|L) for sub_dim(L) > degree, where supported.
struct Valuation {
    std::string label;
    int degree = 0;
    bool even = true;
    std::function<ValueSE(const Body&)> eval;
    std::function<ValueSE(const Body&, const Subspace&)> eval_on_projection;
};

/// V_j as a valuation; exact on zonotopes and balls.
Valuation intrinsic_valuation(int d, int j);

/// phi(K) = int f(L) V_j(K|L) nu_j(dL), Monte Carlo with a fixed quadrature
/// seed so that evaluations are linear in f with shared draws.
Valuation crofton_valuation(const GrassmannFunction& f, long n_mc, std::uint64_t seed);

/// phi(K) = int f dgamma_j(K).
Valuation gamma_valuation(const GrassmannFunction& f, const DescriptorConfig& cfg);

enum class KlainBody { UnitCube, StretchedBox };

/// Klain function evaluation: phi applied to a unit-j-volume box spanned by
/// the frame of L (a cube by default; a stretched box of equal volume for
/// cross-checks).
ValueSE klain(const Valuation& phi, const Subspace& L, KlainBody mode = KlainBody::UnitCube);

struct KlainCosineConfig {
    DescriptorConfig descriptor;  // gamma budget per probe evaluation
    int probes = 10;
    long n_cosine = 200000;
    double z_threshold = 3.0;
    std::uint64_t probe_seed = 991;
};

/// Klain function of the gamma-integral valuation of f against the cosine
/// transform of f over a probe grid; the report fits the proportionality
/// constant instead of asserting a normalization.
ComparisonReport verify_klain_cosine(const GrassmannFunction& f, const KlainCosineConfig& cfg);

/// Both sides of the Klain/projection identity:
/// int K_j(phi) dgamma_j(K) vs the Haar mean of phi(K|L) over G(d,j+1).
struct Theorem31Result {
    ValueSE lhs, rhs;
    double fitted = 0.0;
    ComparisonReport report;  // single-row report, candidate constant 1
};
Theorem31Result verify_theorem_3_1(const Valuation& phi, const Body& body, const DescriptorConfig& cfg);

}  // namespace glab
