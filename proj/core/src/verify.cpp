#include "sgfract/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace sgf {

namespace {

constexpr double kPassSlack = 1e-12;

BoundReport make_report(std::string name, double lhs, double rhs, int depth_m,
                        std::vector<std::pair<std::string, std::string>> params) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.pass = lhs <= rhs + kPassSlack;
    r.depth_m = depth_m;
    r.params = std::move(params);
    return r;
}

std::string format_alpha(const ScaleVector& a) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", a.a1, a.a2, a.a3);
    return buf;
}

// max |g| over V_8 and, if the lattice is deeper, over its points too.
double sampled_sup(const ScalarField& g, const VmLattice& lattice) {
    double m = (lattice.depth() >= 8) ? 0.0 : sup_norm_estimate(g, 8);
    if (lattice.depth() >= 8)
        for (const auto& v : lattice.vertices()) m = std::max(m, std::abs(g(v.pt)));
    return m;
}

double table_distance(const VmTable& a, const VmTable& b) {
    double d = 0.0;
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        d = std::max(d, std::abs(va[i] - vb[i]));
    return d;
}

}  // namespace

std::string BoundReport::json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["pass"] = pass;
    j["depth_m"] = depth_m;
    j["norm_mode"] = norm_mode;
    nlohmann::ordered_json p;
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = std::move(p);
    return j.dump();
}

BoundReport check_interpolation(const ProblemSpec& spec, int m_probe, double tol) {
    const int m = std::max(1, m_probe);
    const VmTable table = vm_table(spec, m);
    double lhs = 0.0;
    const VmLattice v1 = enumerate_vm(1);
    for (const auto& v : v1.vertices())
        lhs = std::max(lhs, std::abs(table.value_at(v.pt) - spec.f(v.pt)));
    return make_report("interpolation", lhs, tol, m,
                       {{"alpha", format_alpha(spec.alpha)},
                        {"f", spec.f.text()},
                        {"b", spec.b.text()}});
}

BoundReport check_alpha_continuity(const ScalarField& f, const ScalarField& b,
                                   const ScaleVector& alpha, const ScaleVector& beta,
                                   int m, double compat_tol) {
    const double r = std::max(alpha.max_abs(), beta.max_abs());
    if (!(r < 1.0))
        throw ScaleOutOfRange("max(|alpha|_inf, |beta|_inf) must be < 1");
    const ProblemSpec sa = validate(f, b, alpha, compat_tol);
    const ProblemSpec sb = validate(f, b, beta, compat_tol);
    const VmTable ta = vm_table(sa, m);
    const VmTable tb = vm_table(sb, m);

    const double lhs = table_distance(ta, tb);
    const double norm_fa = std::max(ta.max_abs_value(), 0.0);
    const double norm_b = sampled_sup(b, ta.lattice());
    const double rhs = max_abs_diff(alpha, beta) / (1.0 - r) * (norm_fa + norm_b);
    char rbuf[32];
    std::snprintf(rbuf, sizeof(rbuf), "%.17g", r);
    return make_report("alpha-continuity", lhs, rhs, m,
                       {{"alpha", format_alpha(alpha)},
                        {"beta", format_alpha(beta)},
                        {"r", rbuf}});
}

BoundReport check_base_lipschitz(const ScalarField& f, const ScalarField& b,
                                 const ScalarField& c, const ScaleVector& alpha,
                                 int m, double compat_tol) {
    const ProblemSpec sb = validate(f, b, alpha, compat_tol);
    const ProblemSpec sc = validate(f, c, alpha, compat_tol);
    const VmTable tb = vm_table(sb, m);
    const VmTable tc = vm_table(sc, m);

    const double lhs = table_distance(tb, tc);
    auto diff = ScalarField::callable(ScalarField::Kind::builtin, "b-c",
                                      [&b, &c](Point2 p) { return b(p) - c(p); });
    const double norm_bc = sampled_sup(diff, tb.lattice());
    const double r = alpha.max_abs();
    const double rhs = r / (1.0 - r) * norm_bc;
    return make_report("base-lipschitz", lhs, rhs, m,
                       {{"alpha", format_alpha(alpha)},
                        {"b", b.text()},
                        {"c", c.text()}});
}

SweepReport modulus_sweep(const ScalarField& f, const ScalarField& b,
                          const ScaleVector& alpha,
                          const std::vector<std::array<double, 3>>& directions,
                          const std::vector<double>& radii, int m,
                          double compat_tol) {
    std::vector<ScaleVector> probes;
    probes.reserve(directions.size() * radii.size());
    double r_max = alpha.max_abs();
    for (const auto& dir : directions) {
        for (double rad : radii) {
            const ScaleVector beta{alpha.a1 + rad * dir[0], alpha.a2 + rad * dir[1],
                                   alpha.a3 + rad * dir[2]};
            if (!(beta.max_abs() < 1.0))
                throw ScaleOutOfRange("probe |beta|_inf = " +
                                      std::to_string(beta.max_abs()) +
                                      " leaves the admissible set");
            r_max = std::max(r_max, beta.max_abs());
            probes.push_back(beta);
        }
    }

    const ProblemSpec center_spec = validate(f, b, alpha, compat_tol);
    const VmTable center = vm_table(center_spec, m);
    const double coeff =
        (center.max_abs_value() + sampled_sup(b, center.lattice())) / (1.0 - r_max);

    SweepReport report;
    report.center = alpha;
    report.depth_m = m;
    report.envelope_coefficient = coeff;
    report.monotone_envelope_ok = true;
    for (const auto& beta : probes) {
        const VmTable tb = vm_table(validate(f, b, beta, compat_tol), m);
        SweepReport::Probe p;
        p.beta = beta;
        p.distance = table_distance(center, tb);
        p.envelope = coeff * max_abs_diff(alpha, beta);
        if (!(p.distance <= p.envelope + kPassSlack)) report.monotone_envelope_ok = false;
        report.probes.push_back(p);
    }
    return report;
}

}  // namespace sgf
