#include "glab/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace glab {

int Carrier::coord_dim() const {
    switch (kind) {
        case CarrierKind::Sphere: return d;
        case CarrierKind::Grassmann: return d * k;
        case CarrierKind::Flag: return d + d * k;
    }
    return 0;
}

std::string to_string(const Carrier& c) {
    switch (c.kind) {
        case CarrierKind::Sphere: return "sphere(d=" + std::to_string(c.d) + ")";
        case CarrierKind::Grassmann:
            return "grassmann(d=" + std::to_string(c.d) + ";k=" + std::to_string(c.k) + ")";
        case CarrierKind::Flag: return "flag(d=" + std::to_string(c.d) + ";k=" + std::to_string(c.k) + ")";
    }
    return "?";
}

long EmpiricalMeasure::group_count() const {
    long g = -1;
    for (long v : groups_) g = std::max(g, v);
    return g + 1;
}

double EmpiricalMeasure::total_mass() const {
    double t = 0.0;
    for (double w : weights_) t += w;
    return t;
}

Eigen::Map<const Eigen::VectorXd> EmpiricalMeasure::coords(long i) const {
    const int cd = carrier_.coord_dim();
    return Eigen::Map<const Eigen::VectorXd>(coords_.data() + static_cast<std::size_t>(i) * cd, cd);
}

Eigen::VectorXd EmpiricalMeasure::direction(long i) const {
    if (carrier_.kind == CarrierKind::Grassmann)
        throw CarrierViolation("direction: Grassmann carrier has no direction component");
    return coords(i).head(carrier_.d);
}

Subspace EmpiricalMeasure::subspace(long i) const {
    const int d = carrier_.d;
    const int k = carrier_.k;
    if (carrier_.kind == CarrierKind::Sphere)
        throw CarrierViolation("subspace: sphere carrier has no frame component");
    int off = carrier_.kind == CarrierKind::Flag ? d : 0;
    Eigen::Map<const Eigen::MatrixXd> f(coords_.data() + static_cast<std::size_t>(i) * carrier_.coord_dim() + off, d, k);
    return Subspace(d, f);
}

void EmpiricalMeasure::reserve(long n) {
    weights_.reserve(static_cast<std::size_t>(n));
    groups_.reserve(static_cast<std::size_t>(n));
    coords_.reserve(static_cast<std::size_t>(n) * carrier_.coord_dim());
}

void EmpiricalMeasure::append(const Eigen::VectorXd& flat, double weight, long group) {
    if (flat.size() != carrier_.coord_dim()) throw CarrierViolation("append: coordinate length mismatch");
    if (!(weight >= 0)) throw CarrierViolation("append: negative or NaN weight");
    weights_.push_back(weight);
    groups_.push_back(group);
    coords_.insert(coords_.end(), flat.data(), flat.data() + flat.size());
}

void EmpiricalMeasure::append_sphere(const Eigen::VectorXd& u, double weight, long group) {
    append(u, weight, group);
}

void EmpiricalMeasure::append_grassmann(const Subspace& L, double weight, long group) {
    Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(L.frame().data(), L.frame().size());
    append(flat, weight, group);
}

void EmpiricalMeasure::append_flag(const Eigen::VectorXd& u, const Subspace& L, double weight, long group) {
    Eigen::VectorXd flat(carrier_.coord_dim());
    flat.head(u.size()) = u;
    flat.tail(L.frame().size()) = Eigen::Map<const Eigen::VectorXd>(L.frame().data(), L.frame().size());
    append(flat, weight, group);
}

void EmpiricalMeasure::validate(double tol) const {
    for (long i = 0; i < size(); ++i) {
        if (carrier_.kind != CarrierKind::Grassmann) {
            Eigen::VectorXd u = direction(i);
            if (std::abs(u.norm() - 1.0) > tol)
                throw CarrierViolation("sample " + std::to_string(i) + ": direction not unit");
        }
        if (carrier_.kind != CarrierKind::Sphere) {
            Subspace L = subspace(i);
            if (L.orthonormality_error() > tol)
                throw CarrierViolation("sample " + std::to_string(i) + ": frame not orthonormal");
            if (carrier_.kind == CarrierKind::Flag) {
                Eigen::VectorXd u = direction(i);
                if ((u - L.project(u)).norm() > 1e-8)
                    throw CarrierViolation("sample " + std::to_string(i) + ": flag direction outside subspace");
            }
        }
    }
}

ValueSE integrate(const EmpiricalMeasure& mu, const std::function<double(long)>& f) {
    const long n = mu.size();
    if (n == 0) return {0.0, 0.0};
    // Group-level totals: outer draws are the independent unit.
    const long g = mu.group_count();
    std::vector<double> sums(static_cast<std::size_t>(g), 0.0);
    double total = 0.0;
    for (long i = 0; i < n; ++i) {
        double t = mu.weight(i) * f(i);
        total += t;
        sums[static_cast<std::size_t>(mu.group(i))] += t;
    }
    if (g <= 1) return {total, 0.0};
    double mean = total / static_cast<double>(g);
    double ss = 0.0;
    for (double s : sums) ss += (s - mean) * (s - mean);
    double se = std::sqrt(ss * static_cast<double>(g) / static_cast<double>(g - 1));
    return {total, se};
}

ValueSE integrate_sphere(const EmpiricalMeasure& mu, const std::function<double(const Eigen::VectorXd&)>& f) {
    return integrate(mu, [&](long i) { return f(mu.direction(i)); });
}

ValueSE integrate_grassmann(const EmpiricalMeasure& mu, const std::function<double(const Subspace&)>& f) {
    return integrate(mu, [&](long i) { return f(mu.subspace(i)); });
}

EmpiricalMeasure push_forward(const EmpiricalMeasure& mu, Carrier target,
                              const std::function<void(const EmpiricalMeasure&, long, Eigen::VectorXd&)>& map) {
    EmpiricalMeasure out(target);
    out.reserve(mu.size());
    out.meta() = mu.meta();
    Eigen::VectorXd buf(target.coord_dim());
    for (long i = 0; i < mu.size(); ++i) {
        map(mu, i, buf);
        try {
            out.append(buf, mu.weight(i), mu.group(i));
        } catch (const CarrierViolation&) {
            throw CarrierViolation("push_forward: sample " + std::to_string(i) + " violates the target carrier");
        }
    }
    return out;
}

ProbeBattery ProbeBattery::default_battery(Carrier carrier, int pairs, std::uint64_t seed) {
    ProbeBattery b;
    b.carrier_ = carrier;
    RngStream rng(seed);
    for (int p = 0; p < pairs; ++p) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(p));
        if (carrier.kind == CarrierKind::Sphere) {
            Subspace line = haar_subspace(carrier.d, 1, sub);
            b.ref_dirs_.push_back(line.frame().col(0));
            b.names_.push_back("abs<u,v" + std::to_string(p) + ">");
            b.names_.push_back("sq<u,v" + std::to_string(p) + ">");
        } else {
            // Flag batteries probe the subspace part; the direction part is
            // covered by the slice pushforward consumers.
            b.ref_subspaces_.push_back(haar_subspace(carrier.d, carrier.k, sub));
            b.names_.push_back("bracket(.,M" + std::to_string(p) + ")");
            b.names_.push_back("bracket2(.,M" + std::to_string(p) + ")");
        }
    }
    return b;
}

double ProbeBattery::eval(int p, const EmpiricalMeasure& mu, long i) const {
    if (!(mu.carrier() == carrier_)) throw CarrierViolation("probe battery: carrier mismatch");
    int pair = p / 2;
    bool squared = p % 2 == 1;
    double v;
    if (carrier_.kind == CarrierKind::Sphere) {
        v = std::abs(mu.direction(i).dot(ref_dirs_[static_cast<std::size_t>(pair)]));
    } else {
        v = bracket(mu.subspace(i), ref_subspaces_[static_cast<std::size_t>(pair)]);
    }
    return squared ? v * v : v;
}

ValueSE ProbeBattery::integrate(int p, const EmpiricalMeasure& mu) const {
    return glab::integrate(mu, [&](long i) { return eval(p, mu, i); });
}

double ComparisonReport::max_abs_z() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.resid_z));
    return m;
}

double ComparisonReport::max_abs_z_at(double c) const {
    double m = 0.0;
    for (const auto& r : rows) {
        double denom = std::sqrt(r.mu_se * r.mu_se + c * c * r.nu_se * r.nu_se);
        double resid = r.mu - c * r.nu;
        if (denom < 1e-300)
            m = std::max(m, std::abs(resid) < 1e-9 ? 0.0 : std::numeric_limits<double>::infinity());
        else
            m = std::max(m, std::abs(resid / denom));
    }
    return m;
}

ComparisonReport compare_rows(std::vector<ProbeRow> rows, double z_threshold, double mass_mu, double mass_nu) {
    ComparisonReport rep;
    rep.z_threshold = z_threshold;
    rep.mass_mu = mass_mu;
    rep.mass_nu = mass_nu;

    double s_nn = 0.0, s_mn = 0.0, s_mm = 0.0;
    for (const auto& r : rows) {
        s_nn += r.nu * r.nu;
        s_mn += r.mu * r.nu;
        s_mm += r.mu * r.mu;
    }
    if (s_nn <= 0.0) {
        if (s_mm > 0.0) throw NoFit("compare: reference side vanishes on every probe");
        rep.rows = std::move(rows);
        rep.fitted = 1.0;
        rep.match = true;
        return rep;
    }
    double alpha = s_mn / s_nn;
    // One reweighting pass with variance weights 1/(se_mu^2 + a^2 se_nu^2).
    for (int pass = 0; pass < 2; ++pass) {
        double wn = 0.0, wm = 0.0;
        bool any = false;
        for (const auto& r : rows) {
            double var = r.mu_se * r.mu_se + alpha * alpha * r.nu_se * r.nu_se;
            if (var < 1e-300) continue;
            any = true;
            wn += r.nu * r.nu / var;
            wm += r.mu * r.nu / var;
        }
        if (!any || wn <= 0.0) break;  // exact inputs: keep the unweighted fit
        alpha = wm / wn;
        rep.fitted_se = std::sqrt(1.0 / wn);
    }
    rep.fitted = alpha;
    for (auto& r : rows) {
        double denom = std::sqrt(r.mu_se * r.mu_se + alpha * alpha * r.nu_se * r.nu_se);
        double resid = r.mu - alpha * r.nu;
        if (denom < 1e-300)
            r.resid_z = std::abs(resid) < 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            r.resid_z = resid / denom;
    }
    rep.rows = std::move(rows);
    rep.match = rep.max_abs_z() <= z_threshold;
    return rep;
}

ComparisonReport compare(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const ProbeBattery& battery,
                         double z_threshold) {
    if (!(mu.carrier() == nu.carrier())) throw CarrierViolation("compare: carriers differ");
    std::vector<ProbeRow> rows;
    rows.reserve(static_cast<std::size_t>(battery.size()));
    for (int p = 0; p < battery.size(); ++p) {
        ProbeRow r;
        r.name = battery.name(p);
        ValueSE a = battery.integrate(p, mu);
        ValueSE b = battery.integrate(p, nu);
        r.mu = a.value;
        r.mu_se = a.se;
        r.nu = b.value;
        r.nu_se = b.se;
        rows.push_back(std::move(r));
    }
    return compare_rows(std::move(rows), z_threshold, mu.total_mass(), nu.total_mass());
}

namespace {

void format_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void write_csv(const EmpiricalMeasure& mu, std::ostream& os) {
    std::string line = "carrier:" + to_string(mu.carrier()) + ",weight";
    const int cd = mu.carrier().coord_dim();
    for (int c = 0; c < cd; ++c) line += ",x" + std::to_string(c);
    line += "\n";
    os << line;
    for (long i = 0; i < mu.size(); ++i) {
        line.clear();
        format_double(line, mu.weight(i));
        auto xs = mu.coords(i);
        for (int c = 0; c < cd; ++c) {
            line += ',';
            format_double(line, xs(c));
        }
        line += "\n";
        os << line;
    }
}

void write_csv_file(const EmpiricalMeasure& mu, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: keep LF endings everywhere
    if (!os) throw Error("cannot open for writing: " + path);
    write_csv(mu, os);
}

EmpiricalMeasure read_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw SchemaError("csv: empty input");
    auto parse_carrier = [&](const std::string& h) -> Carrier {
        auto get_int = [&](const std::string& key) {
            auto pos = h.find(key + "=");
            if (pos == std::string::npos) throw SchemaError("csv: header missing " + key);
            return std::atoi(h.c_str() + pos + key.size() + 1);
        };
        if (h.find("carrier:sphere") == 0) return Carrier::sphere(get_int("d"));
        if (h.find("carrier:grassmann") == 0) return Carrier::grassmann(get_int("d"), get_int("k"));
        if (h.find("carrier:flag") == 0) return Carrier::flag(get_int("d"), get_int("k"));
        throw SchemaError("csv: unknown carrier header");
    };
    EmpiricalMeasure out(parse_carrier(header));
    const int cd = out.carrier().coord_dim();
    std::string line;
    Eigen::VectorXd buf(cd);
    long row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) throw SchemaError("csv: bad row");
        double w = std::strtod(cell.c_str(), nullptr);
        for (int c = 0; c < cd; ++c) {
            if (!std::getline(ss, cell, ',')) throw SchemaError("csv: row " + std::to_string(row) + " truncated");
            buf(c) = std::strtod(cell.c_str(), nullptr);
        }
        out.append(buf, w, row);
        ++row;
    }
    return out;
}

}  // namespace glab
