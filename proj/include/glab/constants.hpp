#pragma once

#include <cmath>
#include <vector>

#include "glab/errors.hpp"

namespace glab {

/// Volume of the unit ball in R^i, kappa_0 = 1, kappa_1 = 2, kappa_2 = pi.
inline double unit_ball_volume(int i) {
    if (i < 0) throw InvalidDimension("unit_ball_volume: negative dimension");
    return std::pow(M_PI, 0.5 * i) / std::tgamma(0.5 * i + 1.0);
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Dimensional constants of integral geometry for ambient dimension d.
///
/// c(k,m,l,n) = (k! kappa_k m! kappa_m) / (l! kappa_l n! kappa_n) is the
/// flag coefficient appearing in projection formulas; rho(j) is the ratio
/// c(j+1, d-j, d, 1) / c(j, d-j, d, 0) that relates the total mass of the
/// j-th Grassmann measure to the Haar integral of the projection function.
struct DimConstants {
    int d = 0;
    std::vector<double> kappa;  // kappa[i], 0 <= i <= d

    static double c(int k, int m, int l, int n) {
        return (factorial(k) * unit_ball_volume(k) * factorial(m) * unit_ball_volume(m)) /
               (factorial(l) * unit_ball_volume(l) * factorial(n) * unit_ball_volume(n));
    }

    double rho(int j) const {
        if (j < 1 || j > d - 1) throw InvalidDimension("rho: need 1 <= j <= d-1");
        return c(j + 1, d - j, d, 1) / c(j, d - j, d, 0);
    }
};

inline DimConstants constants(int d) {
    if (d < 2) throw InvalidDimension("constants: need d >= 2");
    DimConstants out;
    out.d = d;
    out.kappa.resize(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) out.kappa[static_cast<std::size_t>(i)] = unit_ball_volume(i);
    return out;
}

/// V_j of a ball of the given radius in dimension dim: binom(dim,j) kappa_dim / kappa_{dim-j} r^j.
inline double ball_intrinsic_volume(int dim, int j, double radius) {
    if (j < 0 || j > dim) throw InvalidDimension("ball_intrinsic_volume: need 0 <= j <= dim");
    double binom = factorial(dim) / (factorial(j) * factorial(dim - j));
    return binom * unit_ball_volume(dim) / unit_ball_volume(dim - j) * std::pow(radius, j);
}

}  // namespace glab
