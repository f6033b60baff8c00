#pragma once

#include <cstdint>
#include <string>

#include "glab/bodies.hpp"
#include "glab/measures.hpp"

namespace glab {

struct DescriptorConfig {
    int d = 3;
    int j = 1;              // homogeneity degree, 1 <= j <= d-1
    long n_outer = 100000;  // invariant draws of the outer subspace
    int inner_samples = 1;  // samples per continuous inner component
    std::uint64_t seed = 12345;
    std::string label;
};

/// Flag measure on F(d, j+1): for every invariant draw E in G(d,j+1) the
/// exact atomic top-order area measure of K|E inside E, flags (u, E),
/// weights divided by the draw count. Balls contribute their uniform inner
/// measure through inner_samples draws per E. Outer draws are independent
/// tasks on per-draw substreams; assembly preserves draw order.
EmpiricalMeasure flag_measure(const Body& body, const DescriptorConfig& cfg);

/// Grassmann measure on G(d,j): pushforward of the flag measure under
/// (u,L) -> u^perp cap L. Mass preserved exactly. j = d-1 lands on
/// G(d,d-1), the subspace identification of the symmetrized area measure.
EmpiricalMeasure grassmann_measure(const Body& body, const DescriptorConfig& cfg);

/// Pushforward of the flag measure under (u,L) -> L, a measure on G(d,j+1).
EmpiricalMeasure tilde_gamma(const Body& body, const DescriptorConfig& cfg);

/// Projection generating measure: exact atoms 2^j |det_j(g_S)| at lin(g_S)
/// over j-subsets of the generators. Its cosine transform reproduces the
/// projection function exactly.
EmpiricalMeasure projection_generating_measure(const Zonotope& z, int j);

/// Direction measure on G(d, d-j-1): invariant draws L in G(d,j+1) with
/// weight 2 V_j(K|L) placed at L^perp.
EmpiricalMeasure direction_measure(const Body& body, const DescriptorConfig& cfg);

/// Projection average of area measures: int Psi_j(K|L, .) nu_k(dL) as a
/// sphere measure, k > j. Zonotopes use the embedded subset mixture per
/// draw; balls are exact by rotational symmetry; polytopes support
/// j = k-1 <= 2 via hull facets with hemisphere normal cones.
EmpiricalMeasure projection_average_measure(const Body& body, int k, const DescriptorConfig& cfg);

/// Sphere measure sampled from an exact area measure (atoms kept exact,
/// subsphere components sampled per_component times).
EmpiricalMeasure sample_area_measure(const AreaMeasure& am, int per_component, std::uint64_t seed);

/// Copy with all weights multiplied by c >= 0.
EmpiricalMeasure scale_weights(const EmpiricalMeasure& mu, double c);

/// Pushforward through the orthogonality map L -> L^perp.
EmpiricalMeasure complement_measure(const EmpiricalMeasure& mu);

}  // namespace glab
