#include "glab/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace glab {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

Hull2D convex_hull_2d(const Eigen::Matrix2Xd& pts) {
    Hull2D out;
    const int m = static_cast<int>(pts.cols());
    if (m == 0) return out;
    double scale = pts.cwiseAbs().maxCoeff();
    double eps = 1e-12 * std::max(1.0, scale);

    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (pts(0, a) != pts(0, b)) return pts(0, a) < pts(0, b);
        return pts(1, a) < pts(1, b);
    });
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](int a, int b) { return (pts.col(a) - pts.col(b)).norm() <= eps; }),
              idx.end());
    const int n = static_cast<int>(idx.size());
    if (n == 1) {
        out.ring = {idx[0]};
        return out;
    }

    std::vector<int> ring(2 * static_cast<std::size_t>(n));
    int k = 0;
    for (int i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross2(pts.col(ring[static_cast<std::size_t>(k - 2)]),
                                pts.col(ring[static_cast<std::size_t>(k - 1)]), pts.col(idx[static_cast<std::size_t>(i)])) <= eps)
            --k;
        ring[static_cast<std::size_t>(k++)] = idx[static_cast<std::size_t>(i)];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {  // upper chain
        while (k >= lower && cross2(pts.col(ring[static_cast<std::size_t>(k - 2)]),
                                    pts.col(ring[static_cast<std::size_t>(k - 1)]), pts.col(idx[static_cast<std::size_t>(i)])) <= eps)
            --k;
        ring[static_cast<std::size_t>(k++)] = idx[static_cast<std::size_t>(i)];
    }
    ring.resize(static_cast<std::size_t>(k - 1));
    out.ring = ring;

    if (out.ring.size() <= 2) {  // segment (or point)
        Eigen::Vector2d a = pts.col(idx.front());
        Eigen::Vector2d b = pts.col(idx.back());
        double len = (b - a).norm();
        if (out.ring.size() == 2 && len > eps) {
            Eigen::Vector2d dir = (b - a) / len;
            Eigen::Vector2d nrm(dir.y(), -dir.x());
            for (int s : {1, -1}) {
                HullFacet f;
                f.normal = s * nrm;
                f.measure = len;
                f.point = a;
                out.edges.push_back(f);
            }
        }
        return out;
    }

    double a2 = 0.0;
    const int r = static_cast<int>(out.ring.size());
    for (int i = 0; i < r; ++i) {
        Eigen::Vector2d p = pts.col(out.ring[static_cast<std::size_t>(i)]);
        Eigen::Vector2d q = pts.col(out.ring[static_cast<std::size_t>((i + 1) % r)]);
        a2 += p.x() * q.y() - q.x() * p.y();
        double len = (q - p).norm();
        if (len > eps) {
            HullFacet f;
            Eigen::Vector2d dir = (q - p) / len;
            f.normal = Eigen::Vector2d(dir.y(), -dir.x());  // outward for a CCW ring
            f.measure = len;
            f.point = p;
            out.edges.push_back(f);
        }
    }
    out.area = 0.5 * std::abs(a2);
    return out;
}

namespace {

struct Tri {
    int a, b, c;
    Eigen::Vector3d n;  // outward unit normal
    double area;
    bool alive = true;
};

Tri make_tri(const Eigen::Matrix3Xd& p, int a, int b, int c, const Eigen::Vector3d& inner) {
    Tri t{a, b, c, Eigen::Vector3d::Zero(), 0.0, true};
    Eigen::Vector3d u = p.col(b) - p.col(a);
    Eigen::Vector3d v = p.col(c) - p.col(a);
    Eigen::Vector3d n = u.cross(v);
    double nn = n.norm();
    t.area = 0.5 * nn;
    if (nn > 0) n /= nn;
    if (n.dot(p.col(a) - inner) < 0) {
        std::swap(t.b, t.c);
        n = -n;
    }
    t.n = n;
    return t;
}

}  // namespace

Hull3D convex_hull_3d(const Eigen::Matrix3Xd& pts) {
    Hull3D out;
    const int m = static_cast<int>(pts.cols());
    if (m == 0) return out;
    double scale = std::max(1.0, pts.cwiseAbs().maxCoeff());
    double eps = 1e-10 * scale;

    // Rank detection on centered points.
    Eigen::Vector3d mean = pts.rowwise().mean();
    Eigen::Matrix3Xd centered = pts.colwise() - mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
    int rank = 0;
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(smax, 1.0)) ++rank;

    if (rank <= 1) return out;  // point or segment: no 2-faces
    if (rank == 2) {
        // Flat: planar hull in the singular basis, both sides reported.
        out.flat = true;
        Eigen::MatrixXd basis = svd.matrixU().leftCols(2);
        Eigen::Matrix2Xd planar = (basis.transpose() * centered);
        Hull2D h2 = convex_hull_2d(planar);
        Eigen::Vector3d b0 = basis.col(0);
        Eigen::Vector3d b1 = basis.col(1);
        Eigen::Vector3d nrm = b0.cross(b1).normalized();
        out.surface = 2.0 * h2.area;
        for (int s : {1, -1}) {
            HullFacet f;
            f.normal = s * nrm;
            f.measure = h2.area;
            f.point = mean;
            out.facets.push_back(f);
        }
        return out;
    }

    // Seed tetrahedron: spread extreme points.
    int i0 = 0, i1 = 1;
    double best = -1;
    for (int i = 1; i < m; ++i)
        if ((pts.col(i) - pts.col(0)).norm() > best) {
            best = (pts.col(i) - pts.col(0)).norm();
            i1 = i;
        }
    int i2 = -1;
    best = -1;
    for (int i = 0; i < m; ++i) {
        double a = (pts.col(i1) - pts.col(i0)).cross(pts.col(i) - pts.col(i0)).norm();
        if (a > best) {
            best = a;
            i2 = i;
        }
    }
    int i3 = -1;
    best = -1;
    Eigen::Vector3d n0 = (pts.col(i1) - pts.col(i0)).cross(pts.col(i2) - pts.col(i0));
    for (int i = 0; i < m; ++i) {
        double v = std::abs(n0.dot(pts.col(i) - pts.col(i0)));
        if (v > best) {
            best = v;
            i3 = i;
        }
    }
    Eigen::Vector3d inner = 0.25 * (pts.col(i0) + pts.col(i1) + pts.col(i2) + pts.col(i3));

    std::vector<Tri> tris;
    tris.push_back(make_tri(pts, i0, i1, i2, inner));
    tris.push_back(make_tri(pts, i0, i1, i3, inner));
    tris.push_back(make_tri(pts, i0, i2, i3, inner));
    tris.push_back(make_tri(pts, i1, i2, i3, inner));

    for (int i = 0; i < m; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        // Collect faces visible from point i.
        std::vector<int> visible;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            const Tri& tr = tris[static_cast<std::size_t>(t)];
            if (tr.alive && tr.n.dot(pts.col(i) - pts.col(tr.a)) > eps) visible.push_back(t);
        }
        if (visible.empty()) continue;
        // Horizon: edges of visible faces shared with a hidden face.
        std::vector<std::array<int, 2>> horizon;
        auto edge_hidden = [&](int a, int b, int self) {
            for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
                if (t == self || !tris[static_cast<std::size_t>(t)].alive) continue;
                const Tri& tr = tris[static_cast<std::size_t>(t)];
                int hits = (tr.a == a || tr.b == a || tr.c == a) + (tr.a == b || tr.b == b || tr.c == b);
                if (hits == 2) {
                    bool vis = std::find(visible.begin(), visible.end(), t) != visible.end();
                    return !vis;
                }
            }
            return false;
        };
        for (int t : visible) {
            const Tri& tr = tris[static_cast<std::size_t>(t)];
            const std::array<std::array<int, 2>, 3> edges = {{{tr.a, tr.b}, {tr.b, tr.c}, {tr.c, tr.a}}};
            for (const auto& e : edges)
                if (edge_hidden(e[0], e[1], t)) horizon.push_back(e);
        }
        for (int t : visible) tris[static_cast<std::size_t>(t)].alive = false;
        for (const auto& e : horizon) tris.push_back(make_tri(pts, e[0], e[1], i, inner));
    }

    for (const Tri& t : tris) {
        if (!t.alive || t.area <= 0) continue;
        HullFacet f;
        f.normal = t.n;
        f.measure = t.area;
        f.point = pts.col(t.a);
        out.facets.push_back(f);
        out.surface += t.area;
        out.volume += t.n.dot(pts.col(t.a) - inner) * t.area / 3.0;
    }
    return out;
}

}  // namespace glab
