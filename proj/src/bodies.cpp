#include "glab/bodies.hpp"

#include <algorithm>
#include <cmath>

#include "glab/hull.hpp"

namespace glab {

namespace {

// Lexicographic j-subset iteration over {0,...,n-1}.
bool next_subset(std::vector<int>& idx, int n) {
    int j = static_cast<int>(idx.size());
    for (int i = j - 1; i >= 0; --i) {
        if (idx[static_cast<std::size_t>(i)] < n - (j - i)) {
            ++idx[static_cast<std::size_t>(i)];
            for (int t = i + 1; t < j; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> first_subset(int j) {
    std::vector<int> idx(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

int matrix_rank(const Eigen::MatrixXd& m) {
    if (m.cols() == 0 || m.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double smax = svd.singularValues()(0);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(smax, 1e-300)) ++r;
    return r;
}

// Orthonormal basis of the span of selected coordinate columns, paired with
// the subset determinant. Returns false when the subset is degenerate.
bool subset_span(const Eigen::MatrixXd& coords, const std::vector<int>& idx, Eigen::MatrixXd& basis,
                 double& det) {
    const Eigen::Index j = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sel(coords.rows(), j);
    double scale = 1.0;
    for (Eigen::Index c = 0; c < j; ++c) {
        sel.col(c) = coords.col(idx[static_cast<std::size_t>(c)]);
        scale *= std::max(sel.col(c).norm(), 1e-300);
    }
    det = det_j(sel);
    if (det <= 1e-12 * scale) return false;
    basis = detail::qr_nonneg(sel);
    return true;
}

}  // namespace

Zonotope make_zonotope(Eigen::MatrixXd generators, int max_generators) {
    if (generators.cols() < 1) throw InvalidDimension("zonotope: need at least one generator");
    if (generators.rows() < 1) throw InvalidDimension("zonotope: ambient dimension must be positive");
    if (generators.cols() > max_generators)
        throw Unsupported("zonotope: generator count exceeds the subset-enumeration limit");
    return Zonotope{std::move(generators)};
}

Ball make_ball(int dim, double radius) {
    if (dim < 1) throw InvalidDimension("ball: ambient dimension must be positive");
    if (!(radius > 0)) throw InvalidDimension("ball: radius must be positive");
    return Ball{dim, radius};
}

Polytope make_polytope(Eigen::MatrixXd vertices) {
    if (vertices.cols() < 1) throw InvalidDimension("polytope: need at least one vertex");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < vertices.cols(); ++i) {
        bool dup = false;
        for (Eigen::Index k : keep)
            if ((vertices.col(i) - vertices.col(k)).norm() <= 1e-10) {
                dup = true;
                break;
            }
        if (!dup) keep.push_back(i);
    }
    Eigen::MatrixXd dedup(vertices.rows(), static_cast<Eigen::Index>(keep.size()));
    for (Eigen::Index i = 0; i < dedup.cols(); ++i) dedup.col(i) = vertices.col(keep[static_cast<std::size_t>(i)]);
    return Polytope{std::move(dedup)};
}

int ambient_dim(const Body& body) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return b.dim;
            else
                return static_cast<int>(b.dim());
        },
        body);
}

int body_rank(const Body& body) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Zonotope>) return matrix_rank(b.generators);
            if constexpr (std::is_same_v<T, Ball>) return b.dim;
            if constexpr (std::is_same_v<T, Polytope>) {
                Eigen::MatrixXd centered = b.vertices.colwise() - b.vertices.rowwise().mean().eval();
                return matrix_rank(centered);
            }
        },
        body);
}

double support(const Body& body, const Eigen::VectorXd& u) {
    if (u.size() != ambient_dim(body)) throw InvalidDimension("support: direction dimension mismatch");
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Zonotope>) return (b.generators.transpose() * u).cwiseAbs().sum();
            if constexpr (std::is_same_v<T, Ball>) return b.radius * u.norm();
            if constexpr (std::is_same_v<T, Polytope>) return (b.vertices.transpose() * u).maxCoeff();
        },
        body);
}

double AreaMeasure::total() const {
    double t = 0.0;
    for (const auto& a : atoms) t += a.weight;
    for (const auto& c : components) t += c.weight;
    return t;
}

double EmbeddedAreaMeasure::total() const {
    double t = 0.0;
    for (const auto& a : atoms) t += a.weight;
    for (const auto& c : components) t += c.weight;
    for (const auto& h : hemispheres) t += h.weight;
    return t;
}

namespace {

double zonotope_projected_vj(const Zonotope& z, const Subspace& L, int j) {
    Eigen::MatrixXd coords = L.frame().transpose() * z.generators;  // k x n
    const int n = static_cast<int>(coords.cols());
    if (j > n) return 0.0;
    double sum = 0.0;
    std::vector<int> idx = first_subset(j);
    Eigen::MatrixXd sel(coords.rows(), j);
    do {
        for (int c = 0; c < j; ++c) sel.col(c) = coords.col(idx[static_cast<std::size_t>(c)]);
        sum += det_j(sel);
    } while (next_subset(idx, n));
    return std::ldexp(sum, j);  // 2^j * sum
}

double polytope_projected_vj(const Polytope& p, const Subspace& L, int j) {
    const int k = static_cast<int>(L.sub_dim());
    Eigen::MatrixXd coords = L.frame().transpose() * p.vertices;  // k x m
    if (j == k) {
        if (k == 1) {
            return coords.row(0).maxCoeff() - coords.row(0).minCoeff();
        }
        if (k == 2) return convex_hull_2d(coords).area;
        if (k == 3) return convex_hull_3d(coords).volume;
        throw Unsupported("polytope projection: hulls supported up to dimension 3");
    }
    if (j == k - 1) {
        // Half boundary measure: V_{k-1} of a k-dimensional convex body.
        if (k == 2) {
            Hull2D h = convex_hull_2d(coords);
            double per = 0.0;
            for (const auto& e : h.edges) per += e.measure;
            return 0.5 * per;
        }
        if (k == 3) {
            Hull3D h = convex_hull_3d(coords);
            return 0.5 * h.surface;
        }
        throw Unsupported("polytope projection: hulls supported up to dimension 3");
    }
    throw Unsupported("polytope projection: intrinsic volume order not supported");
}

}  // namespace

double intrinsic_volume_of_projection(const Body& body, const Subspace& L, int j) {
    const int k = static_cast<int>(L.sub_dim());
    if (L.ambient_dim() != ambient_dim(body))
        throw InvalidDimension("projection: subspace ambient dimension mismatch");
    if (j < 0 || j > k) throw InvalidDimension("projection: need 0 <= j <= sub_dim(L)");
    if (j == 0) return 1.0;
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Zonotope>) return zonotope_projected_vj(b, L, j);
            if constexpr (std::is_same_v<T, Ball>) return ball_intrinsic_volume(k, j, b.radius);
            if constexpr (std::is_same_v<T, Polytope>) return polytope_projected_vj(b, L, j);
        },
        body);
}

double projection_function(const Body& body, const Subspace& L) {
    const int j = static_cast<int>(L.sub_dim());
    const int d = ambient_dim(body);
    if (j < 1 || j > d - 1) throw InvalidDimension("projection_function: need 1 <= sub_dim(L) <= d-1");
    return intrinsic_volume_of_projection(body, L, j);
}

AreaMeasure area_measure_zonotope(const Zonotope& z, int j) {
    const int d = static_cast<int>(z.dim());
    if (j < 1 || j > d - 1) throw InvalidDimension("area_measure_zonotope: need 1 <= j <= d-1");
    AreaMeasure out;
    out.ambient = d;
    const int n = static_cast<int>(z.count());
    if (j > n) return out;
    std::vector<int> idx = first_subset(j);
    do {
        Eigen::MatrixXd basis;
        double det;
        if (subset_span(z.generators, idx, basis, det)) {
            double w = std::ldexp(det, j);
            Subspace span(d, basis);
            Subspace normal_space = complement(span);
            if (normal_space.sub_dim() == 1) {
                Eigen::VectorXd nrm = normal_space.frame().col(0);
                out.atoms.push_back({nrm, 0.5 * w});
                out.atoms.push_back({-nrm, 0.5 * w});
            } else {
                out.components.push_back({normal_space, w});
            }
        }
    } while (next_subset(idx, n));
    return out;
}

AreaMeasure area_measure_ball(const Ball& b, int j) {
    if (j < 1 || j > b.dim - 1) throw InvalidDimension("area_measure_ball: need 1 <= j <= d-1");
    AreaMeasure out;
    out.ambient = b.dim;
    out.components.push_back({Subspace::full(b.dim), ball_intrinsic_volume(b.dim, j, b.radius)});
    return out;
}

AreaMeasure area_measure(const Body& body, int j) {
    return std::visit(
        [&](const auto& b) -> AreaMeasure {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Zonotope>) return area_measure_zonotope(b, j);
            if constexpr (std::is_same_v<T, Ball>) return area_measure_ball(b, j);
            if constexpr (std::is_same_v<T, Polytope>) {
                const int d = static_cast<int>(b.dim());
                if (j != d - 1 || d > 3)
                    throw Unsupported("area_measure: polytopes support only top order in dimension <= 3");
                AreaMeasure out;
                out.ambient = d;
                if (d == 2) {
                    Hull2D h = convex_hull_2d(b.vertices);
                    for (const auto& e : h.edges) out.atoms.push_back({e.normal, 0.5 * e.measure});
                } else {
                    Hull3D h = convex_hull_3d(b.vertices);
                    for (const auto& f : h.facets) out.atoms.push_back({f.normal, 0.5 * f.measure});
                }
                return out;
            }
        },
        body);
}

AreaMeasure top_area_measure_in_subspace(const Body& body, const Subspace& L) {
    const int d = ambient_dim(body);
    const int k = static_cast<int>(L.sub_dim());
    const int j = k - 1;
    if (L.ambient_dim() != d) throw InvalidDimension("top_area_measure_in_subspace: ambient mismatch");
    if (j < 1) throw InvalidDimension("top_area_measure_in_subspace: need sub_dim(L) >= 2");
    AreaMeasure out;
    out.ambient = d;

    if (const auto* z = std::get_if<Zonotope>(&body)) {
        Eigen::MatrixXd coords = L.frame().transpose() * z->generators;  // k x n
        const int n = static_cast<int>(coords.cols());
        if (j > n) return out;
        std::vector<int> idx = first_subset(j);
        do {
            Eigen::MatrixXd basis;
            double det;
            if (subset_span(coords, idx, basis, det)) {
                // In-subspace normal of the facet pair spanned by this subset.
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
                Eigen::MatrixXd qfull = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
                Eigen::VectorXd nc = qfull.col(k - 1);
                Eigen::VectorXd nrm = L.frame() * nc;
                double w = std::ldexp(det, j);
                out.atoms.push_back({nrm, 0.5 * w});
                out.atoms.push_back({-nrm, 0.5 * w});
            }
        } while (next_subset(idx, n));
        return out;
    }
    if (const auto* b = std::get_if<Ball>(&body)) {
        out.components.push_back({L, ball_intrinsic_volume(k, j, b->radius)});
        return out;
    }
    const auto& p = std::get<Polytope>(body);
    Eigen::MatrixXd coords = L.frame().transpose() * p.vertices;  // k x m
    if (k == 2) {
        Hull2D h = convex_hull_2d(coords);
        for (const auto& e : h.edges) out.atoms.push_back({L.frame() * e.normal, 0.5 * e.measure});
        return out;
    }
    if (k == 3) {
        Hull3D h = convex_hull_3d(coords);
        for (const auto& f : h.facets) out.atoms.push_back({L.frame() * f.normal, 0.5 * f.measure});
        return out;
    }
    throw Unsupported("top_area_measure_in_subspace: polytopes supported for sub_dim(L) <= 3");
}

EmbeddedAreaMeasure embedded_area_measure_of_projection(const Body& body, const Subspace& L, int j) {
    const int d = ambient_dim(body);
    const int k = static_cast<int>(L.sub_dim());
    if (j < 1 || j > k) throw InvalidDimension("embedded_area_measure_of_projection: need 1 <= j <= sub_dim(L)");
    EmbeddedAreaMeasure out;
    out.ambient = d;

    if (const auto* z = std::get_if<Zonotope>(&body)) {
        Eigen::MatrixXd coords = L.frame().transpose() * z->generators;
        const int n = static_cast<int>(coords.cols());
        if (j > n) return out;
        std::vector<int> idx = first_subset(j);
        do {
            Eigen::MatrixXd basis;
            double det;
            if (subset_span(coords, idx, basis, det)) {
                Subspace span(d, (L.frame() * basis).eval());  // lin(P_L g_S) in R^d
                Subspace normal_space = complement(span);
                double w = std::ldexp(det, j);
                if (normal_space.sub_dim() == 1) {
                    Eigen::VectorXd nrm = normal_space.frame().col(0);
                    out.atoms.push_back({nrm, 0.5 * w});
                    out.atoms.push_back({-nrm, 0.5 * w});
                } else {
                    out.components.push_back({normal_space, w});
                }
            }
        } while (next_subset(idx, n));
        return out;
    }
    if (std::get_if<Ball>(&body)) {
        // Haar-averaged over L the ball's projection measures collapse to the
        // uniform sphere measure; the descriptor layer uses that exact form.
        throw Unsupported("embedded_area_measure_of_projection: handled at the descriptor level for balls");
    }
    const auto& p = std::get<Polytope>(body);
    if (j != k - 1 || k > 3)
        throw Unsupported("embedded_area_measure_of_projection: polytopes support j = sub_dim(L)-1 <= 2");
    Eigen::MatrixXd coords = L.frame().transpose() * p.vertices;
    Subspace lperp = complement(L);
    auto add_facet = [&](const Eigen::VectorXd& normal_in_L, double facet_measure) {
        Eigen::VectorXd pole = L.frame() * normal_in_L;
        Eigen::MatrixXd span(d, lperp.sub_dim() + 1);
        span.col(0) = pole;
        span.rightCols(lperp.sub_dim()) = lperp.frame();
        HemisphereComponent h;
        h.sphere_span = Subspace(d, span);
        h.pole = pole;
        h.weight = 0.5 * facet_measure;
        out.hemispheres.push_back(std::move(h));
    };
    if (k == 2) {
        Hull2D h = convex_hull_2d(coords);
        for (const auto& e : h.edges) add_facet(e.normal, e.measure);
    } else {
        Hull3D h = convex_hull_3d(coords);
        for (const auto& f : h.facets) add_facet(f.normal, f.measure);
    }
    return out;
}

}  // namespace glab
