#pragma once

#include <array>
#include <string>
#include <vector>

#include "sgfract/fractal.hpp"

namespace sgf {

/// Outcome of one theorem-inequality check. All sup-norms involved are
/// lattice maxima, so a report is a necessary-condition check and carries
/// norm_mode = "sampled-norm".
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;    // lhs <= rhs + 1e-12
    int depth_m = 0;
    std::string norm_mode = "sampled-norm";
    std::vector<std::pair<std::string, std::string>> params;  // echoed inputs

    /// JSON object with stable key order:
    /// name, lhs, rhs, margin, pass, depth_m, norm_mode, params.
    std::string json() const;
};

/// max over V_1 of |f^alpha - f| (from a depth max(1, m_probe) table)
/// against `tol`.
BoundReport check_interpolation(const ProblemSpec& spec, int m_probe, double tol);

/// Continuity of alpha -> f_b^alpha:
///   ||f_b^alpha - f_b^beta||_inf <= |alpha-beta|_inf / (1-r) (||f_b^alpha|| + ||b||),
/// with r = max(|alpha|_inf, |beta|_inf). lhs is the sup over V_m of the
/// exact tables. Throws ScaleOutOfRange.
BoundReport check_alpha_continuity(const ScalarField& f, const ScalarField& b,
                                   const ScaleVector& alpha, const ScaleVector& beta,
                                   int m, double compat_tol = kDefaultCompatTol);

/// Lipschitz dependence on the base function:
///   ||f_b^alpha - f_c^alpha||_inf <= |alpha|_inf / (1-|alpha|_inf) ||b - c||_inf.
/// Throws IncompatibleBase if either base fails the V_0 condition.
BoundReport check_base_lipschitz(const ScalarField& f, const ScalarField& b,
                                 const ScalarField& c, const ScaleVector& alpha,
                                 int m, double compat_tol = kDefaultCompatTol);

/// Distances ||f^alpha - f^beta||_inf on V_m for probes beta = alpha +
/// radius * direction, checked against the linear envelope
/// K |alpha - beta|_inf with K = (||f^alpha|| + ||b||) / (1 - r_max).
struct SweepReport {
    ScaleVector center;
    struct Probe {
        ScaleVector beta;
        double distance = 0.0;  // sup over V_m of |f^alpha - f^beta|
        double envelope = 0.0;  // K * |alpha - beta|_inf
    };
    std::vector<Probe> probes;
    bool monotone_envelope_ok = false;  // every probe under its envelope
    double envelope_coefficient = 0.0;  // K
    int depth_m = 0;
};

SweepReport modulus_sweep(const ScalarField& f, const ScalarField& b,
                          const ScaleVector& alpha,
                          const std::vector<std::array<double, 3>>& directions,
                          const std::vector<double>& radii, int m,
                          double compat_tol = kDefaultCompatTol);

}  // namespace sgf
