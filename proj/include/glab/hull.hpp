#pragma once

#include <Eigen/Dense>
#include <vector>

namespace glab {

/// Facet of a convex hull in its coordinate space: outward unit normal,
/// facet measure (length in 2D, area in 3D) and one incident point.
struct HullFacet {
    Eigen::VectorXd normal;
    double measure = 0.0;
    Eigen::VectorXd point;
};

struct Hull2D {
    std::vector<int> ring;          // CCW vertex indices; size <= 2 when degenerate
    double area = 0.0;
    std::vector<HullFacet> edges;   // outward normals; a segment reports both sides
};

struct Hull3D {
    double volume = 0.0;
    double surface = 0.0;
    std::vector<HullFacet> facets;  // triangles; a flat hull reports both sides
    bool flat = false;
};

/// Monotone-chain hull of 2 x m points. Collinear input degenerates to a
/// segment whose two sides are reported as edges.
Hull2D convex_hull_2d(const Eigen::Matrix2Xd& pts);

/// Incremental hull of 3 x m points. Rank-deficient input falls back to the
/// planar hull embedded in 3-space (volume 0, both facet sides reported).
Hull3D convex_hull_3d(const Eigen::Matrix3Xd& pts);

}  // namespace glab
