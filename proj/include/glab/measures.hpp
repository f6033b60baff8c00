#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "glab/core.hpp"
#include "glab/errors.hpp"

namespace glab {

enum class CarrierKind { Sphere, Grassmann, Flag };

struct Carrier {
    CarrierKind kind = CarrierKind::Sphere;
    int d = 0;
    int k = 0;  // subspace dimension; unused for Sphere

    static Carrier sphere(int d) { return {CarrierKind::Sphere, d, 0}; }
    static Carrier grassmann(int d, int k) { return {CarrierKind::Grassmann, d, k}; }
    static Carrier flag(int d, int k) { return {CarrierKind::Flag, d, k}; }

    /// Flattened coordinate count per sample: d / d*k / d + d*k.
    int coord_dim() const;
    bool operator==(const Carrier&) const = default;
};

std::string to_string(const Carrier& c);

/// Weighted sample list over a declared carrier.
///
/// Storage is flat: one column of coordinates per sample (frames flattened
/// column-major), so a measure with millions of samples stays cache- and
/// CSV-friendly. Samples carry a group id (the outer Monte Carlo draw that
/// produced them); standard errors treat groups, not samples, as the
/// independent unit. Exact measures live in a single group and report SE 0.
class EmpiricalMeasure {
  public:
    struct Meta {
        std::uint64_t seed = 0;
        long draws = 0;  // outer draw count used to build the measure
        long degenerate_draws = 0;
        std::string label;
    };

    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(Carrier carrier) : carrier_(carrier) {}

    const Carrier& carrier() const { return carrier_; }
    Meta& meta() { return meta_; }
    const Meta& meta() const { return meta_; }

    long size() const { return static_cast<long>(weights_.size()); }
    double weight(long i) const { return weights_[static_cast<std::size_t>(i)]; }
    long group(long i) const { return groups_[static_cast<std::size_t>(i)]; }
    long group_count() const;
    double total_mass() const;

    /// Raw flattened coordinates of sample i.
    Eigen::Map<const Eigen::VectorXd> coords(long i) const;

    /// Typed access. Sphere/Flag direction, Grassmann/Flag frame.
    Eigen::VectorXd direction(long i) const;
    Subspace subspace(long i) const;

    void reserve(long n);
    void append(const Eigen::VectorXd& flat_coords, double weight, long group);
    void append_sphere(const Eigen::VectorXd& u, double weight, long group);
    void append_grassmann(const Subspace& L, double weight, long group);
    void append_flag(const Eigen::VectorXd& u, const Subspace& L, double weight, long group);

    /// Checks every sample against the carrier invariants (unit norm,
    /// frame orthonormality, flag containment); throws CarrierViolation
    /// naming the first offending index.
    void validate(double tol = 1e-8) const;

  private:
    Carrier carrier_;
    std::vector<double> weights_;
    std::vector<long> groups_;
    std::vector<double> coords_;  // coord_dim * size, column per sample
    Meta meta_;
};

struct ValueSE {
    double value = 0.0;
    double se = 0.0;
};

/// Monte Carlo integral of a per-sample functional against the measure:
/// sum of w_i f(i) with the group-level standard error.
ValueSE integrate(const EmpiricalMeasure& mu, const std::function<double(long)>& f);

/// Convenience: integral of f(point) for carrier-typed probes.
ValueSE integrate_sphere(const EmpiricalMeasure& mu, const std::function<double(const Eigen::VectorXd&)>& f);
ValueSE integrate_grassmann(const EmpiricalMeasure& mu, const std::function<double(const Subspace&)>& f);

/// Pushforward: same weights and groups, mapped points. The map writes the
/// flattened target coordinates for sample i.
EmpiricalMeasure push_forward(const EmpiricalMeasure& mu, Carrier target,
                              const std::function<void(const EmpiricalMeasure&, long, Eigen::VectorXd&)>& map);

/// Finite battery of bounded test functions on a carrier; Grassmann probes
/// are brackets (and squared brackets) against Haar-seeded reference
/// subspaces, sphere probes |<u,v_i>| and <u,v_i>^2.
class ProbeBattery {
  public:
    static ProbeBattery default_battery(Carrier carrier, int pairs, std::uint64_t seed);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int p) const { return names_[static_cast<std::size_t>(p)]; }
    const Carrier& carrier() const { return carrier_; }

    double eval(int p, const EmpiricalMeasure& mu, long i) const;
    ValueSE integrate(int p, const EmpiricalMeasure& mu) const;

  private:
    Carrier carrier_;
    std::vector<std::string> names_;
    std::vector<Subspace> ref_subspaces_;       // Grassmann probes: one per pair
    std::vector<Eigen::VectorXd> ref_dirs_;     // sphere probes: one per pair
};

struct ProbeRow {
    std::string name;
    double mu = 0, mu_se = 0;
    double nu = 0, nu_se = 0;
    double resid_z = 0;  // z-score of mu - fitted * nu
};

struct ComparisonReport {
    std::vector<ProbeRow> rows;
    double fitted = 0.0;
    double fitted_se = 0.0;
    double z_threshold = 3.0;
    bool match = false;  // all post-fit |z| <= threshold
    double mass_mu = 0.0, mass_nu = 0.0;

    double max_abs_z() const;
    /// Max |z| of mu - c * nu over rows for a fixed candidate constant.
    double max_abs_z_at(double c) const;
};

/// Weak comparison over a battery: per-probe integrals with SEs, weighted
/// least-squares proportionality constant, post-fit residual z-scores.
/// Throws NoFit when nu vanishes on every probe while mu does not.
ComparisonReport compare(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const ProbeBattery& battery,
                         double z_threshold);

/// Same report from precomputed probe integrals (for sides that are not
/// empirical measures, e.g. pointwise transform evaluations).
ComparisonReport compare_rows(std::vector<ProbeRow> rows, double z_threshold, double mass_mu, double mass_nu);

/// CSV: header row names the carrier, then one row per sample: weight,
/// coordinates (frames flattened column-major). LF endings, '.' decimal.
void write_csv(const EmpiricalMeasure& mu, std::ostream& os);
void write_csv_file(const EmpiricalMeasure& mu, const std::string& path);
EmpiricalMeasure read_csv(std::istream& is);

}  // namespace glab
