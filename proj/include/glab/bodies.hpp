#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "glab/constants.hpp"
#include "glab/core.hpp"
#include "glab/errors.hpp"

namespace glab {

/// Centered zonotope: Minkowski sum of the segments [-g_i, g_i].
/// Centering removes all translation bookkeeping; every descriptor in this
/// library is translation invariant.
struct Zonotope {
    Eigen::MatrixXd generators;  // d x n, one generator per column

    Eigen::Index dim() const { return generators.rows(); }
    Eigen::Index count() const { return generators.cols(); }
};

struct Ball {
    int dim = 0;
    double radius = 1.0;
};

struct Polytope {
    Eigen::MatrixXd vertices;  // d x m, deduplicated within 1e-10

    Eigen::Index dim() const { return vertices.rows(); }
};

using Body = std::variant<Zonotope, Ball, Polytope>;

// Subset enumeration stays tractable below this generator count.
inline constexpr int kMaxGenerators = 14;

Zonotope make_zonotope(Eigen::MatrixXd generators, int max_generators = kMaxGenerators);
Ball make_ball(int dim, double radius);
Polytope make_polytope(Eigen::MatrixXd vertices);

int ambient_dim(const Body& body);

/// Numerical rank of the generator/vertex span (singular values below
/// 1e-10 x largest count as zero).
int body_rank(const Body& body);

/// Support function h(K,u) = max_{x in K} <x,u>.
double support(const Body& body, const Eigen::VectorXd& u);

/// Area measure on the unit sphere: atoms plus subsphere-uniform components.
/// A component (W, w) means w times the uniform probability measure on
/// S^{d-1} cap W. Total mass of the j-th measure equals V_j of the body.
struct AreaMeasure {
    int ambient = 0;

    struct Atom {
        Eigen::VectorXd direction;
        double weight;
    };
    struct Component {
        Subspace sphere_span;  // W; the component is uniform on S^{d-1} cap W
        double weight;
    };

    std::vector<Atom> atoms;
    std::vector<Component> components;

    double total() const;
};

/// V_j(K|L) for sub_dim(L) = j: the j-volume of the orthogonal shadow.
/// Zonotope: shadow formula 2^j sum over j-subsets of |det_j|; ball:
/// kappa_j r^j; polytope: hull volume, supported for j <= 3.
double projection_function(const Body& body, const Subspace& L);

/// V_j of the shadow K|L for general j <= sub_dim(L) = k.
/// Zonotopes use the subset formula at every k; balls use the intrinsic
/// volume of B^k; polytopes support j = k (volume) and j = k-1 (half
/// boundary measure) for k <= 3.
double intrinsic_volume_of_projection(const Body& body, const Subspace& L, int j);

/// Exact j-th area measure of a zonotope, valid for any rank: the normal
/// cones of the faces parallel to lin(g_S) tile lin(g_S)^perp, so each
/// j-subset S contributes 2^j |det_j(g_S)| uniformly on the subsphere
/// S^{d-1} cap lin(g_S)^perp. Rank below j yields the empty measure.
AreaMeasure area_measure_zonotope(const Zonotope& z, int j);

/// Uniform measure with total V_j(B) = binom(d,j) kappa_d / kappa_{d-j} r^j.
AreaMeasure area_measure_ball(const Ball& b, int j);

/// Dispatcher; polytopes are limited to the top order j = d-1 with d <= 3.
AreaMeasure area_measure(const Body& body, int j);

/// Top-order area measure of K|L computed inside L (sub_dim(L) = j+1),
/// expressed in ambient coordinates. Fully atomic for zonotopes and
/// polytopes; balls return the subsphere component S^{d-1} cap L.
AreaMeasure top_area_measure_in_subspace(const Body& body, const Subspace& L);

/// Ambient j-th area measure of the flat body K|L for K a zonotope or ball
/// (subsphere components live in lin(P_L g_S)^perp taken inside R^d);
/// polytopes are supported for j = sub_dim(L) - 1 <= 2 via hull facets,
/// whose ambient normal cones are hemispheres of span{n} + L^perp.
struct HemisphereComponent {
    Subspace sphere_span;       // span{n} + L^perp
    Eigen::VectorXd pole;       // facet normal; samples keep <u,pole> >= 0
    double weight;
};
struct EmbeddedAreaMeasure {
    int ambient = 0;
    std::vector<AreaMeasure::Atom> atoms;
    std::vector<AreaMeasure::Component> components;
    std::vector<HemisphereComponent> hemispheres;
    double total() const;
};
EmbeddedAreaMeasure embedded_area_measure_of_projection(const Body& body, const Subspace& L, int j);

}  // namespace glab
