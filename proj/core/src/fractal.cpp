#include "sgfract/fractal.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "lattice_internal.hpp"

namespace sgf {

double ScaleVector::max_abs() const {
    return std::max({std::abs(a1), std::abs(a2), std::abs(a3)});
}

double max_abs_diff(const ScaleVector& a, const ScaleVector& b) {
    return std::max({std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2),
                     std::abs(a.a3 - b.a3)});
}

double ProblemSpec::fixed_point_sup_bound() const {
    const double r = alpha.max_abs();
    return (f_sup + r * b_sup) / (1.0 - r);
}

double ProblemSpec::tail_bound(int n) const {
    const double r = alpha.max_abs();
    return std::pow(r, n) * (fixed_point_sup_bound() + b_sup);
}

ProblemSpec validate(ScalarField f, ScalarField b, ScaleVector alpha, double tol) {
    if (!(alpha.max_abs() < 1.0))
        throw ScaleOutOfRange("|alpha|_inf = " + std::to_string(alpha.max_abs()) +
                              " must be < 1");
    double dev = -1.0;
    int worst = 1;
    for (int j = 1; j <= 3; ++j) {
        const Point2 p = base_vertex(j);
        const double d = std::abs(b(p) - f(p));
        if (!(d <= dev)) {  // also catches NaN
            dev = d;
            worst = j;
        }
    }
    if (!(dev <= tol))
        throw IncompatibleBase("base function deviates from f on V_0 by " +
                                   std::to_string(dev) + " at vertex x_" +
                                   std::to_string(worst) + " (tolerance " +
                                   std::to_string(tol) + ")",
                               worst, dev);
    ProblemSpec spec;
    spec.f = std::move(f);
    spec.b = std::move(b);
    spec.alpha = alpha;
    spec.compat_tol = tol;
    spec.compat_dev = dev;
    spec.f_sup = sup_norm_estimate(spec.f);
    spec.b_sup = sup_norm_estimate(spec.b);
    return spec;
}

VmTable::VmTable(int depth, VmLattice lattice, std::vector<double> values,
                 ProblemSpec spec)
    : depth_(depth), lattice_(std::move(lattice)), values_(std::move(values)),
      spec_(std::move(spec)) {}

double VmTable::value_at(Point2 p) const {
    const auto idx = lattice_.find(p);
    if (!idx) throw NotOnGasket("point is not a lattice vertex of this table");
    return values_[*idx];
}

double VmTable::max_abs_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Shared-vertex agreement tolerance. With exact V_0 compatibility the
// recursion reproduces values bitwise, so 1e-10 is generous; a measured
// deviation dev propagates cross-parent disagreements up to
// 2 r dev / (1 - r).
double consistency_tol(const ProblemSpec& spec) {
    const double r = spec.alpha.max_abs();
    return std::max(1e-10, 2.0 * r * spec.compat_dev / (1.0 - r) * (1.0 + 1e-6) + 1e-12);
}

std::vector<double> table_values(const ProblemSpec& spec,
                                 const detail::LatticeBuild& build) {
    const auto& pts = build.pts;
    std::vector<double> f_pts(pts.size()), b_pts(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        f_pts[i] = spec.f(pts[i]);
        b_pts[i] = spec.b(pts[i]);
    }

    std::vector<double> values(pts.size(), 0.0);
    std::vector<char> assigned(pts.size(), 0);
    const double a[3] = {spec.alpha.a1, spec.alpha.a2, spec.alpha.a3};

    // Corner x_j solves its own branch of the functional equation:
    // v = f + a_j (v - b)  =>  v = (f - a_j b) / (1 - a_j). Equals f(x_j)
    // whenever b(x_j) = f(x_j).
    for (int j = 0; j < 3; ++j) {
        values[static_cast<std::size_t>(j)] =
            (f_pts[static_cast<std::size_t>(j)] - a[j] * b_pts[static_cast<std::size_t>(j)]) /
            (1.0 - a[j]);
        assigned[static_cast<std::size_t>(j)] = 1;
    }

    const double ctol = consistency_tol(spec);
    for (const auto& level : build.level_assigns) {
        for (const auto& as : level) {
            const double v = f_pts[as.child] +
                             a[as.branch - 1] * (values[as.parent] - b_pts[as.parent]);
            if (!assigned[as.child]) {
                values[as.child] = v;
                assigned[as.child] = 1;
            } else if (!(std::abs(v - values[as.child]) <= ctol)) {
                throw ConsistencyFailure(
                    "shared-vertex values disagree by " +
                    std::to_string(std::abs(v - values[as.child])) +
                    " (tolerance " + std::to_string(ctol) +
                    "); the problem data violates the V_0 compatibility it declared");
            }
        }
    }
    return values;
}

VmLattice make_lattice(detail::LatticeBuild&& build) {
    std::vector<VmVertex> verts;
    verts.reserve(build.verts.size());
    for (std::size_t i = 0; i < build.verts.size(); ++i) {
        const auto& v = build.verts[i];
        VertexId id;
        id.address = detail::unpack_word(v.rep_word[0]);
        id.corner = v.rep_corner[0];
        id.canonical = true;
        verts.push_back({std::move(id), build.pts[i]});
    }
    return VmLattice(build.depth, std::move(verts), std::move(build.key_index));
}

}  // namespace

VmTable vm_table(const ProblemSpec& spec, int m) {
    auto build = detail::build_lattice(m);  // throws DepthTooLarge
    auto values = table_values(spec, build);
    return VmTable(m, make_lattice(std::move(build)), std::move(values), spec);
}

EvalResult eval_at_vertex(const ProblemSpec& spec, const Address& word, int corner,
                          int n) {
    assert(corner >= 1 && corner <= 3);
    assert(n >= 1);
    const int len = word.depth();
    if (len > kMaxDepth) throw DepthTooLarge("address longer than 12 letters");

    const double a[3] = {spec.alpha.a1, spec.alpha.a2, spec.alpha.a3};

    // Pull-back path: t_k = u_{w_{k+1}} ... u_{w_len}(x_corner) for k <= len,
    // then x_corner forever; branch letters follow the word, extended with
    // the anchor corner.
    std::vector<Point2> path(static_cast<std::size_t>(len) + 1);
    for (int k = 0; k <= len; ++k) {
        VertexId suffix;
        suffix.address.word.assign(word.word.begin() + k, word.word.end());
        suffix.corner = corner;
        path[static_cast<std::size_t>(k)] = address_to_point(suffix);
    }

    auto letter = [&](int k) {
        return k < len ? static_cast<int>(word.word[static_cast<std::size_t>(k)])
                       : corner;
    };
    auto point = [&](int k) {
        return k <= len ? path[static_cast<std::size_t>(k)] : path.back();
    };

    // value_n = f(t_0) + sum_{k=1}^{n-1} P_k (f - b)(t_k), P_k = prod a_{l_j}
    double value = spec.f(point(0));
    double scale = 1.0;
    for (int k = 1; k < n; ++k) {
        scale *= a[letter(k - 1) - 1];
        if (scale == 0.0) break;
        const Point2 t = point(k);
        value += scale * (spec.f(t) - spec.b(t));
    }
    return {value, spec.tail_bound(n)};
}

EvalResult eval_point(const ProblemSpec& spec, const Address& addr, int n) {
    const int anchor = addr.word.empty() ? 1 : static_cast<int>(addr.word.front());
    return eval_at_vertex(spec, addr, anchor, n);
}

RbIteration rb_iterate(const ProblemSpec& spec, int m, int iters) {
    if (m > 10) throw DepthTooLarge("rb_iterate supports depth <= 10");
    assert(iters >= 1);
    auto build = detail::build_lattice(m);
    const std::size_t n = build.verts.size();

    std::vector<double> f_pts(n), b_pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        f_pts[i] = spec.f(build.pts[i]);
        b_pts[i] = spec.b(build.pts[i]);
    }
    const double a[3] = {spec.alpha.a1, spec.alpha.a2, spec.alpha.a3};

    RbIteration out;
    out.tables.reserve(static_cast<std::size_t>(iters) + 1);
    out.tables.push_back(f_pts);  // g_0 = f

    // Differences propagate exactly: d_1 = T g_0 - g_0 computed once, then
    // d_{k+1}(t) = a_i d_k(u_i^{-1} t). Keeping g_{k+1} = g_k + d_{k+1}
    // makes the reported deltas free of O(1)-magnitude cancellation noise.
    std::vector<double> d(n), d_next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = build.verts[i];
        d[i] = a[v.branch - 1] * (f_pts[v.parent] - b_pts[v.parent]);
    }
    for (int k = 0; k < iters; ++k) {
        if (k > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto& v = build.verts[i];
                d_next[i] = a[v.branch - 1] * d[v.parent];
            }
            d.swap(d_next);
        }
        double delta = 0.0;
        std::vector<double> g = out.tables.back();
        for (std::size_t i = 0; i < n; ++i) {
            g[i] += d[i];
            delta = std::max(delta, std::abs(d[i]));
        }
        out.deltas.push_back(delta);
        out.tables.push_back(std::move(g));
    }
    out.lattice = make_lattice(std::move(build));
    return out;
}

GraphSample chaos_game(const ProblemSpec& spec, std::size_t count,
                       std::uint64_t seed, int burn_in) {
    assert(count >= 1);
    assert(burn_in >= 0);
    GraphSample out;
    out.provenance = "chaos-game";
    out.seed = seed;
    out.points.reserve(count);

    std::mt19937_64 rng(seed);
    Point2 t = base_vertex(1);
    double z = spec.f(t);
    const double a[3] = {spec.alpha.a1, spec.alpha.a2, spec.alpha.a3};

    const std::size_t total = static_cast<std::size_t>(burn_in) + count;
    for (std::size_t step = 0; step < total; ++step) {
        const int i = static_cast<int>(rng() % 3);  // map index 0..2
        const Point2 next = apply_map(i + 1, t);
        // M_i(t, z) = f(u_i(t)) + a_i (z - b(t)) -- grouped so that z == b(t)
        // propagates exactly (b = f and alpha = 0 stay on graph(f) bitwise).
        z = spec.f(next) + a[i] * (z - spec.b(t));
        t = next;
        if (step >= static_cast<std::size_t>(burn_in))
            out.points.push_back({t.x, t.y, z});
    }
    return out;
}

double sup_norm_estimate(const ScalarField& g, int sample_depth) {
    if (g.kind() == ScalarField::Kind::table && g.norm_hint()) return *g.norm_hint();
    if (sample_depth > 10) throw DepthTooLarge("sample depth exceeds 10");
    auto build = detail::build_lattice(sample_depth);
    double m = 0.0;
    for (const auto& p : build.pts) m = std::max(m, std::abs(g(p)));
    return m;
}

namespace {

void visit_cells(int depth, int m, const std::array<unsigned, 3>& acc,
                 const ScalarField& g, double& max_slope) {
    if (depth == m) {
        // corners of cell u_w: numerators acc + e_j over 2^m
        Point2 c[3];
        double gv[3];
        for (int j = 0; j < 3; ++j) {
            auto n = acc;
            n[static_cast<std::size_t>(j)] += 1;
            c[j] = detail::bary_point(n[1], n[2], m);
            gv[j] = g(c[j]);
        }
        const double side = 1.0 / static_cast<double>(1u << m);
        for (int u = 0; u < 3; ++u)
            for (int v = u + 1; v < 3; ++v)
                max_slope = std::max(max_slope, std::abs(gv[u] - gv[v]) / side);
        return;
    }
    for (int i = 0; i < 3; ++i) {
        auto n = acc;
        n[static_cast<std::size_t>(i)] += 1u << (m - 1 - depth);
        visit_cells(depth + 1, m, n, g, max_slope);
    }
}

}  // namespace

double lipschitz_estimate(const ScalarField& g, int sample_depth) {
    if (sample_depth > 10) throw DepthTooLarge("sample depth exceeds 10");
    double max_slope = 0.0;
    visit_cells(0, sample_depth, {0, 0, 0}, g, max_slope);
    return max_slope;
}

double graph_oscillation_bound(const ProblemSpec& spec, int cell_depth) {
    const double r = spec.alpha.max_abs();
    const double lip = lipschitz_estimate(spec.f);
    double geom = 0.0, p = 1.0;
    for (int k = 0; k < cell_depth; ++k) {
        geom += p;
        p *= 2.0 * r;
    }
    const double diam = 1.0 / static_cast<double>(1u << cell_depth);
    return lip * diam * geom +
           2.0 * std::pow(r, cell_depth) * (spec.fixed_point_sup_bound() + spec.b_sup);
}

ScalarField field_from_table(std::shared_ptr<const VmTable> table) {
    assert(table);
    const double hint = table->max_abs_value();
    auto f = ScalarField::callable(
        ScalarField::Kind::table,
        "table(m=" + std::to_string(table->depth()) + ")",
        [t = std::move(table)](Point2 p) { return t->value_at(p); });
    f.set_norm_hint(hint);
    return f;
}

}  // namespace sgf
