#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sgfract/field_expr.hpp"
#include "sgfract/gasket.hpp"

namespace sgf {

/// Vertical scaling factors (alpha_1, alpha_2, alpha_3). A valid scale
/// vector has max_abs() < 1; validate() enforces it.
struct ScaleVector {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;

    static ScaleVector uniform(double a) { return {a, a, a}; }

    double component(int i) const { return i == 1 ? a1 : (i == 2 ? a2 : a3); }
    double max_abs() const;

    bool operator==(const ScaleVector&) const = default;
};

/// max_i |a_i - b_i|.
double max_abs_diff(const ScaleVector& a, const ScaleVector& b);

/// Validated problem data (f, b, alpha) plus norm estimates sampled at
/// validation time (used by a-priori error bounds; they are lattice
/// maxima, i.e. lower estimates of the true sup-norms).
struct ProblemSpec {
    ScalarField f;
    ScalarField b;
    ScaleVector alpha;
    double compat_tol = kDefaultCompatTol;

    // filled by validate()
    double compat_dev = 0.0;  // measured max |b - f| over V_0
    double f_sup = 0.0;       // max |f| over V_8
    double b_sup = 0.0;       // max |b| over V_8

    /// A-priori bound on ||f_b^alpha||_inf: (F + r B) / (1 - r).
    double fixed_point_sup_bound() const;
    /// Truncation bound |alpha|_inf^n (U + B) = |alpha|_inf^n (F+B)/(1-r).
    double tail_bound(int n) const;
};

/// Checks |alpha|_inf < 1 and b = f on V_0 within tol. Throws
/// ScaleOutOfRange / IncompatibleBase.
ProblemSpec validate(ScalarField f, ScalarField b, ScaleVector alpha,
                     double tol = kDefaultCompatTol);

/// Exact values of f_b^alpha on every canonical V_m vertex, computed by
/// forward recursion on the self-referential equation
///   f^a(t) = f(t) + alpha_i (f^a - b)(u_i^{-1}(t)),  t in u_i(triangle).
class VmTable {
  public:
    VmTable(int depth, VmLattice lattice, std::vector<double> values,
            ProblemSpec spec);

    int depth() const { return depth_; }
    const VmLattice& lattice() const { return lattice_; }
    const std::vector<double>& values() const { return values_; }
    const ProblemSpec& spec() const { return spec_; }

    /// Value at an exact lattice position. Throws NotOnGasket.
    double value_at(Point2 p) const;
    double max_abs_value() const;

  private:
    int depth_ = 0;
    VmLattice lattice_;
    std::vector<double> values_;
    ProblemSpec spec_;
};

/// Builds the exact V_m table. Corners are seeded with the branch-fixed
/// value (f(x_j) - a_j b(x_j)) / (1 - a_j), which is f(x_j) whenever
/// b(x_j) = f(x_j); every other vertex gets the recursion value from its
/// first parent, and repeated visits must agree within a tolerance scaled
/// by the measured compatibility deviation. Throws DepthTooLarge /
/// ConsistencyFailure.
VmTable vm_table(const ProblemSpec& spec, int m);

struct EvalResult {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Evaluates f_b^alpha at the anchor vertex of a cell address by unrolling
/// the functional equation n times and dropping the remainder. The anchor
/// corner is the address's first letter (x_1 for the empty address) and
/// the unroll path extends the address with that letter.
EvalResult eval_point(const ProblemSpec& spec, const Address& addr, int n);

/// Same unrolling anchored at an explicit corner: evaluates at
/// u_word(x_corner), path extended with `corner`.
EvalResult eval_at_vertex(const ProblemSpec& spec, const Address& word,
                          int corner, int n);

/// Read-Bajraktarevic iteration on the V_m lattice starting from g_0 = f.
/// Successive differences are propagated exactly (d_{k+1} = a_i d_k o u_i^{-1}),
/// so the reported delta ratios contract at |alpha|_inf up to relative
/// rounding even once the deltas are tiny.
struct RbIteration {
    VmLattice lattice;
    std::vector<std::vector<double>> tables;  // g_0 .. g_n on the lattice
    std::vector<double> deltas;               // ||g_{k+1} - g_k||_inf, k = 0..n-1
};

RbIteration rb_iterate(const ProblemSpec& spec, int m, int iters);

/// Points on graph(f_b^alpha) generated by iterating randomly chosen maps
/// H_i(t, z) = (u_i(t), f(u_i(t)) + alpha_i (z - b(t))).
struct GraphSample {
    struct P3 {
        double x, y, z;
    };
    std::vector<P3> points;
    std::string provenance;  // "chaos-game" or "table"
    std::uint64_t seed = 0;
};

/// Starts at (x_1, f(x_1)), discards `burn_in` points, returns `count`
/// points. Deterministic for a fixed seed.
GraphSample chaos_game(const ProblemSpec& spec, std::size_t count,
                       std::uint64_t seed, int burn_in = 50);

/// max |g| over V_M (a lower estimate of the true sup-norm). Table-backed
/// fields report the max over their own table values.
double sup_norm_estimate(const ScalarField& g, int sample_depth = 8);

/// Largest |g(p) - g(q)| / |p - q| over the corner pairs of every depth-M
/// cell (a lower estimate of the Lipschitz constant).
double lipschitz_estimate(const ScalarField& g, int sample_depth = 8);

/// Bound on the oscillation of f_b^alpha within one depth-d cell, from the
/// unrolled functional equation and the sampled Lipschitz estimate of f:
///   L_f 2^-d sum_{k<d} (2r)^k + 2 r^d (U + B).
double graph_oscillation_bound(const ProblemSpec& spec, int cell_depth);

/// Scalar field backed by exact table lookup (defined on V_m only; other
/// points throw NotOnGasket).
ScalarField field_from_table(std::shared_ptr<const VmTable> table);

}  // namespace sgf
