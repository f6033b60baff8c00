#include "glab/descriptors.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include "glab/parallel.hpp"

namespace glab {

namespace {

void check_cfg(const Body& body, const DescriptorConfig& cfg, int j_max_excl) {
    if (ambient_dim(body) != cfg.d) throw InvalidDimension("descriptor: body/config dimension mismatch");
    if (cfg.j < 1 || cfg.j > j_max_excl) throw InvalidDimension("descriptor: degree j out of range");
    if (cfg.n_outer < 1) throw InvalidDimension("descriptor: n_outer must be positive");
    if (cfg.inner_samples < 1) throw InvalidDimension("descriptor: inner_samples must be positive");
}

// Per-draw buffer of flattened samples (weight followed by coordinates).
struct DrawBuffer {
    std::vector<double> data;
    void push(double w, const Eigen::VectorXd& flat) {
        data.push_back(w);
        data.insert(data.end(), flat.data(), flat.data() + flat.size());
    }
};

EmpiricalMeasure assemble(Carrier carrier, std::vector<DrawBuffer>& bufs, const DescriptorConfig& cfg,
                          long degenerate, const std::string& label) {
    EmpiricalMeasure out(carrier);
    const int cd = carrier.coord_dim();
    long total = 0;
    for (const auto& b : bufs) total += static_cast<long>(b.data.size()) / (1 + cd);
    out.reserve(total);
    Eigen::VectorXd flat(cd);
    for (long g = 0; g < static_cast<long>(bufs.size()); ++g) {
        const auto& data = bufs[static_cast<std::size_t>(g)].data;
        for (std::size_t off = 0; off < data.size(); off += static_cast<std::size_t>(1 + cd)) {
            for (int c = 0; c < cd; ++c) flat(c) = data[off + 1 + static_cast<std::size_t>(c)];
            out.append(flat, data[off], g);
        }
    }
    out.meta().seed = cfg.seed;
    out.meta().draws = static_cast<long>(bufs.size());
    out.meta().degenerate_draws = degenerate;
    out.meta().label = label;
    return out;
}

Eigen::VectorXd flag_flat(const Eigen::VectorXd& u, const Subspace& L) {
    Eigen::VectorXd flat(u.size() + L.frame().size());
    flat.head(u.size()) = u;
    flat.tail(L.frame().size()) = Eigen::Map<const Eigen::VectorXd>(L.frame().data(), L.frame().size());
    return flat;
}

Eigen::VectorXd grassmann_flat(const Subspace& L) {
    return Eigen::Map<const Eigen::VectorXd>(L.frame().data(), L.frame().size());
}

}  // namespace

EmpiricalMeasure flag_measure(const Body& body, const DescriptorConfig& cfg) {
    check_cfg(body, cfg, cfg.d - 1);
    const int d = cfg.d;
    const int j = cfg.j;

    // With j = d-1 the outer space is R^d itself: no outer randomness for
    // bodies with exact atomic measures.
    bool exact_atoms = !std::holds_alternative<Ball>(body);
    long n = (j == d - 1 && exact_atoms) ? 1 : cfg.n_outer;

    RngStream root(cfg.seed);
    std::vector<DrawBuffer> bufs(static_cast<std::size_t>(n));
    std::atomic<long> degenerate{0};

    parallel_for(n, [&](long i) {
        RngStream s = root.substream(static_cast<std::uint64_t>(i));
        RngStream outer = s.substream(0);
        Subspace e = (j + 1 == d) ? Subspace::full(d) : haar_subspace(d, j + 1, outer);
        AreaMeasure am = top_area_measure_in_subspace(body, e);
        DrawBuffer& buf = bufs[static_cast<std::size_t>(i)];
        if (am.atoms.empty() && am.components.empty()) {
            degenerate.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        for (const auto& a : am.atoms) buf.push(a.weight / static_cast<double>(n), flag_flat(a.direction, e));
        int t = 0;
        for (const auto& c : am.components) {
            RngStream inner = s.substream(1);
            for (int q = 0; q < cfg.inner_samples; ++q) {
                RngStream one = inner.substream(static_cast<std::uint64_t>(t * cfg.inner_samples + q));
                Eigen::VectorXd u = uniform_unit_in(c.sphere_span, one);
                buf.push(c.weight / static_cast<double>(n) / cfg.inner_samples, flag_flat(u, e));
            }
            ++t;
        }
    });
    return assemble(Carrier::flag(d, j + 1), bufs, cfg, degenerate.load(),
                    cfg.label.empty() ? "flag(j=" + std::to_string(j) + ")" : cfg.label);
}

EmpiricalMeasure grassmann_measure(const Body& body, const DescriptorConfig& cfg) {
    EmpiricalMeasure flags = flag_measure(body, cfg);
    Carrier target = Carrier::grassmann(cfg.d, cfg.j);
    EmpiricalMeasure out = push_forward(flags, target, [&](const EmpiricalMeasure& m, long i, Eigen::VectorXd& buf) {
        Subspace sliced = slice(m.direction(i), m.subspace(i));
        buf = grassmann_flat(sliced);
    });
    out.meta().label = "gamma(j=" + std::to_string(cfg.j) + ")";
    return out;
}

EmpiricalMeasure tilde_gamma(const Body& body, const DescriptorConfig& cfg) {
    EmpiricalMeasure flags = flag_measure(body, cfg);
    Carrier target = Carrier::grassmann(cfg.d, cfg.j + 1);
    EmpiricalMeasure out = push_forward(flags, target, [&](const EmpiricalMeasure& m, long i, Eigen::VectorXd& buf) {
        buf = grassmann_flat(m.subspace(i));
    });
    out.meta().label = "tilde-gamma(j=" + std::to_string(cfg.j) + ")";
    return out;
}

EmpiricalMeasure projection_generating_measure(const Zonotope& z, int j) {
    const int d = static_cast<int>(z.dim());
    if (j < 1 || j > d - 1) throw InvalidDimension("projection_generating_measure: need 1 <= j <= d-1");
    EmpiricalMeasure out(Carrier::grassmann(d, j));
    // Weight 2^j |det_j(g_S)| at lin(g_S) over lexicographic j-subsets.
    const int n = static_cast<int>(z.count());
    std::vector<int> idx(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
    bool more = j <= n;
    while (more) {
        Eigen::MatrixXd sel(d, j);
        double scale = 1.0;
        for (int c = 0; c < j; ++c) {
            sel.col(c) = z.generators.col(idx[static_cast<std::size_t>(c)]);
            scale *= std::max(sel.col(c).norm(), 1e-300);
        }
        double det = det_j(sel);
        if (det > 1e-12 * scale) {
            Subspace span = Subspace::from_span(sel);
            out.append_grassmann(span, std::ldexp(det, j), 0);
        }
        // advance lexicographically
        more = false;
        for (int i = j - 1; i >= 0; --i) {
            if (idx[static_cast<std::size_t>(i)] < n - (j - i)) {
                ++idx[static_cast<std::size_t>(i)];
                for (int t = i + 1; t < j; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
                more = true;
                break;
            }
        }
    }
    out.meta().label = "rho_(j=" + std::to_string(j) + ")";
    out.meta().draws = 1;
    return out;
}

EmpiricalMeasure direction_measure(const Body& body, const DescriptorConfig& cfg) {
    check_cfg(body, cfg, cfg.d - 2);
    const int d = cfg.d;
    const int j = cfg.j;
    const long n = cfg.n_outer;
    RngStream root(cfg.seed);
    std::vector<DrawBuffer> bufs(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        RngStream s = root.substream(static_cast<std::uint64_t>(i));
        Subspace L = haar_subspace(d, j + 1, s);
        double vj = intrinsic_volume_of_projection(body, L, j);
        bufs[static_cast<std::size_t>(i)].push(2.0 * vj / static_cast<double>(n), grassmann_flat(complement(L)));
    });
    return assemble(Carrier::grassmann(d, d - j - 1), bufs, cfg, 0,
                    "direction(q=" + std::to_string(d - j - 1) + ")");
}

EmpiricalMeasure projection_average_measure(const Body& body, int k, const DescriptorConfig& cfg) {
    check_cfg(body, cfg, cfg.d - 1);
    const int d = cfg.d;
    const int j = cfg.j;
    if (k <= j || k > d - 1) throw InvalidDimension("projection_average_measure: need j < k <= d-1");
    const long n = cfg.n_outer;
    RngStream root(cfg.seed);
    std::vector<DrawBuffer> bufs(static_cast<std::size_t>(n));
    std::atomic<long> degenerate{0};

    if (std::holds_alternative<Ball>(body)) {
        // Rotation invariance collapses the Haar average to the uniform
        // sphere measure with mass V_j of the k-dimensional ball.
        double mass = ball_intrinsic_volume(k, j, std::get<Ball>(body).radius);
        parallel_for(n, [&](long i) {
            RngStream s = root.substream(static_cast<std::uint64_t>(i));
            Subspace full = Subspace::full(d);
            for (int q = 0; q < cfg.inner_samples; ++q) {
                RngStream one = s.substream(static_cast<std::uint64_t>(q));
                Eigen::VectorXd u = uniform_unit_in(full, one);
                bufs[static_cast<std::size_t>(i)].push(mass / static_cast<double>(n) / cfg.inner_samples, u);
            }
        });
    } else {
        parallel_for(n, [&](long i) {
            RngStream s = root.substream(static_cast<std::uint64_t>(i));
            Subspace L = haar_subspace(d, k, s.substream(0));
            EmbeddedAreaMeasure am = embedded_area_measure_of_projection(body, L, j);
            DrawBuffer& buf = bufs[static_cast<std::size_t>(i)];
            if (am.atoms.empty() && am.components.empty() && am.hemispheres.empty()) {
                degenerate.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            for (const auto& a : am.atoms) buf.push(a.weight / static_cast<double>(n), a.direction);
            RngStream inner = s.substream(1);
            long t = 0;
            for (const auto& c : am.components) {
                for (int q = 0; q < cfg.inner_samples; ++q) {
                    Eigen::VectorXd u = uniform_unit_in(c.sphere_span, inner.substream(static_cast<std::uint64_t>(t++)));
                    buf.push(c.weight / static_cast<double>(n) / cfg.inner_samples, u);
                }
            }
            for (const auto& h : am.hemispheres) {
                for (int q = 0; q < cfg.inner_samples; ++q) {
                    Eigen::VectorXd u = uniform_unit_in(h.sphere_span, inner.substream(static_cast<std::uint64_t>(t++)));
                    if (u.dot(h.pole) < 0) u = -u;
                    buf.push(h.weight / static_cast<double>(n) / cfg.inner_samples, u);
                }
            }
        });
    }
    return assemble(Carrier::sphere(d), bufs, cfg, degenerate.load(),
                    "proj-average(j=" + std::to_string(j) + ";k=" + std::to_string(k) + ")");
}

EmpiricalMeasure sample_area_measure(const AreaMeasure& am, int per_component, std::uint64_t seed) {
    EmpiricalMeasure out(Carrier::sphere(am.ambient));
    RngStream root(seed);
    long g = 0;
    for (const auto& a : am.atoms) out.append_sphere(a.direction, a.weight, g++);
    long t = 0;
    for (const auto& c : am.components) {
        for (int q = 0; q < per_component; ++q) {
            RngStream one = root.substream(static_cast<std::uint64_t>(t++));
            out.append_sphere(uniform_unit_in(c.sphere_span, one), c.weight / per_component, g);
        }
        ++g;
    }
    out.meta().seed = seed;
    out.meta().label = "area-measure-sample";
    return out;
}

EmpiricalMeasure scale_weights(const EmpiricalMeasure& mu, double c) {
    if (!(c >= 0)) throw Error("scale_weights: factor must be nonnegative");
    EmpiricalMeasure out(mu.carrier());
    out.reserve(mu.size());
    out.meta() = mu.meta();
    for (long i = 0; i < mu.size(); ++i) {
        Eigen::VectorXd flat = mu.coords(i);
        out.append(flat, c * mu.weight(i), mu.group(i));
    }
    return out;
}

EmpiricalMeasure complement_measure(const EmpiricalMeasure& mu) {
    if (mu.carrier().kind != CarrierKind::Grassmann)
        throw InvalidDimension("complement_measure: Grassmann carrier required");
    const int d = mu.carrier().d;
    const int k = mu.carrier().k;
    return push_forward(mu, Carrier::grassmann(d, d - k), [&](const EmpiricalMeasure& m, long i, Eigen::VectorXd& buf) {
        buf = grassmann_flat(complement(m.subspace(i)));
    });
}

}  // namespace glab
