#include "sgfract/gasket.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "lattice_internal.hpp"

namespace sgf {

using detail::kSqrt3Over2;

std::array<Point2, 3> base_vertices() {
    return {Point2{0.0, 0.0}, Point2{1.0, 0.0}, Point2{0.5, kSqrt3Over2}};
}

Point2 base_vertex(int i) {
    assert(i >= 1 && i <= 3);
    return base_vertices()[static_cast<std::size_t>(i - 1)];
}

Point2 apply_map(int i, Point2 t) {
    const Point2 c = base_vertex(i);
    return {0.5 * (t.x + c.x), 0.5 * (t.y + c.y)};
}

namespace {

// Barycentric coordinates w.r.t. the unit base triangle.
struct Bary {
    double l1, l2, l3;
};

Bary barycentric(Point2 t) {
    const double l3 = t.y / kSqrt3Over2;
    const double l2 = t.x - 0.5 * l3;
    return {1.0 - l2 - l3, l2, l3};
}

}  // namespace

bool in_triangle(Point2 t, double tol) {
    if (!std::isfinite(t.x) || !std::isfinite(t.y)) return false;
    const Bary b = barycentric(t);
    const double slack = 2.0 * tol;  // barycentric deficit ~ distance / height
    return b.l1 >= -slack && b.l2 >= -slack && b.l3 >= -slack;
}

Point2 invert_map(int i, Point2 t, double tol) {
    const Point2 c = base_vertex(i);
    const Point2 out{2.0 * t.x - c.x, 2.0 * t.y - c.y};
    // t in u_i(triangle)  <=>  2t - x_i in the base triangle
    if (!in_triangle(out, 2.0 * tol))
        throw OutOfCell("point is not in sub-triangle " + std::to_string(i));
    return out;
}

Address Address::parse(std::string_view text) {
    Address a;
    a.word.reserve(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char ch = text[k];
        if (ch < '1' || ch > '3')
            throw SyntaxError("address letters must be 1, 2 or 3", k);
        a.word.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return a;
}

std::string Address::str() const {
    std::string s;
    s.reserve(word.size());
    for (auto l : word) s.push_back(static_cast<char>('0' + l));
    return s;
}

Point2 address_to_point(const VertexId& v) {
    const int m = v.address.depth();
    if (m > kMaxDepth) throw DepthTooLarge("address longer than 12 letters");
    // u_{w_1}...u_{w_m}(x_j) has barycentric numerators
    //   sum_k e_{w_k} 2^{m-k} + e_j  over denominator 2^m.
    unsigned n[3] = {0, 0, 0};
    for (int k = 0; k < m; ++k) {
        const int letter = v.address.word[static_cast<std::size_t>(k)];
        assert(letter >= 1 && letter <= 3);
        n[letter - 1] += 1u << (m - 1 - k);
    }
    assert(v.corner >= 1 && v.corner <= 3);
    n[v.corner - 1] += 1;
    return detail::bary_point(n[1], n[2], m);
}

std::size_t vm_vertex_count(int m) {
    std::size_t p = 1;
    for (int k = 0; k <= m; ++k) p *= 3;
    return (p + 3) / 2;
}

Address locate(Point2 t, int m, double tol) {
    if (m < 0 || m > kMaxDepth) throw DepthTooLarge("depth exceeds 12");
    if (!in_triangle(t, tol)) throw NotOnGasket("point lies outside the base triangle");
    Address a;
    a.word.reserve(static_cast<std::size_t>(m));
    Point2 cur = t;
    double level_tol = tol;
    for (int level = 0; level < m; ++level) {
        // pulled-back distances double per level, so the membership slack does too
        level_tol *= 2.0;
        bool found = false;
        for (int i = 1; i <= 3 && !found; ++i) {
            const Point2 c = base_vertex(i);
            const Point2 child{2.0 * cur.x - c.x, 2.0 * cur.y - c.y};
            if (in_triangle(child, level_tol)) {
                cur = child;
                a.word.push_back(static_cast<std::uint8_t>(i));
                found = true;
            }
        }
        if (!found)
            throw NotOnGasket("no depth-" + std::to_string(level + 1) +
                              " cell contains the point");
    }
    return a;
}

namespace detail {

Address unpack_word(PackedWord w) {
    Address a;
    a.word.reserve(w.len);
    for (int k = 0; k < w.len; ++k)
        a.word.push_back(static_cast<std::uint8_t>(w.letter(k)));
    return a;
}

namespace {

// Keeps the two smallest (word, corner) representatives.
void add_rep(BuildVertex& v, PackedWord w, int corner) {
    for (int r = 0; r < v.rep_count; ++r)
        if (v.rep_word[r].bits == w.bits && v.rep_corner[r] == corner) return;
    if (v.rep_count < 2) {
        v.rep_word[v.rep_count] = w;
        v.rep_corner[v.rep_count] = static_cast<std::uint8_t>(corner);
        ++v.rep_count;
        if (v.rep_count == 2 &&
            rep_less(v.rep_word[1], v.rep_corner[1], v.rep_word[0], v.rep_corner[0])) {
            std::swap(v.rep_word[0], v.rep_word[1]);
            std::swap(v.rep_corner[0], v.rep_corner[1]);
        }
        return;
    }
    // a gasket vertex never has more than two cell representations
    assert(false && "more than two representations for one vertex");
}

}  // namespace

LatticeBuild build_lattice(int m) {
    if (m < 0) throw DepthTooLarge("negative depth");
    if (m > kMaxDepth) throw DepthTooLarge("depth exceeds 12");

    LatticeBuild out;
    out.depth = m;
    out.verts.reserve(vm_vertex_count(m));
    out.key_index.reserve(vm_vertex_count(m) * 2);

    const std::uint16_t unit = static_cast<std::uint16_t>(1u << m);
    for (int j = 0; j < 3; ++j) {
        BuildVertex v;
        v.bary[static_cast<std::size_t>(j)] = unit;
        v.rep_word[0] = PackedWord{};
        v.rep_corner[0] = static_cast<std::uint8_t>(j + 1);
        v.rep_count = 1;
        v.parent = static_cast<std::uint32_t>(j);
        v.branch = static_cast<std::uint8_t>(j + 1);
        v.level = 0;
        out.key_index.emplace(bary_key(v.bary[0], v.bary[1]),
                              static_cast<std::uint32_t>(out.verts.size()));
        out.verts.push_back(v);
    }
    out.level_sizes.push_back(out.verts.size());

    std::vector<BuildVertex> prev;  // rep snapshot of V_{k-1}
    for (int k = 1; k <= m; ++k) {
        const std::uint32_t n_prev = static_cast<std::uint32_t>(out.verts.size());
        prev.assign(out.verts.begin(), out.verts.end());
        for (auto& v : out.verts) v.rep_count = 0;  // reps are per-depth; restage

        std::vector<Assign> assigns;
        assigns.reserve(3 * n_prev);
        const std::uint16_t half = static_cast<std::uint16_t>(1u << (m - 1));

        for (int i = 1; i <= 3; ++i) {
            for (std::uint32_t p = 0; p < n_prev; ++p) {
                const auto& pb = prev[p].bary;
                std::array<std::uint16_t, 3> cb = {
                    static_cast<std::uint16_t>(pb[0] / 2),
                    static_cast<std::uint16_t>(pb[1] / 2),
                    static_cast<std::uint16_t>(pb[2] / 2)};
                cb[static_cast<std::size_t>(i - 1)] =
                    static_cast<std::uint16_t>(cb[static_cast<std::size_t>(i - 1)] + half);

                const std::uint32_t key = bary_key(cb[0], cb[1]);
                auto [it, inserted] = out.key_index.emplace(
                    key, static_cast<std::uint32_t>(out.verts.size()));
                if (inserted) {
                    BuildVertex v;
                    v.bary = cb;
                    v.parent = p;
                    v.branch = static_cast<std::uint8_t>(i);
                    v.level = static_cast<std::uint8_t>(k);
                    out.verts.push_back(v);
                }
                const std::uint32_t idx = it->second;
                for (int r = 0; r < prev[p].rep_count; ++r)
                    add_rep(out.verts[idx], prev[p].rep_word[r].prepend(i),
                            prev[p].rep_corner[r]);
                assigns.push_back({idx, p, static_cast<std::uint8_t>(i)});
            }
        }
        out.level_sizes.push_back(out.verts.size());
        out.level_assigns.push_back(std::move(assigns));
    }

    assert(out.verts.size() == vm_vertex_count(m));
    out.pts.reserve(out.verts.size());
    for (const auto& v : out.verts) out.pts.push_back(bary_point(v.bary[1], v.bary[2], m));
    return out;
}

}  // namespace detail

VmLattice::VmLattice(int depth, std::vector<VmVertex> vertices,
                     std::unordered_map<std::uint32_t, std::uint32_t> index)
    : depth_(depth), vertices_(std::move(vertices)), index_(std::move(index)) {}

std::optional<std::size_t> VmLattice::find(Point2 p) const {
    const double scale = static_cast<double>(1u << depth_);
    const double l3 = p.y / kSqrt3Over2;
    const double l2 = p.x - 0.5 * l3;
    const double n2f = l2 * scale, n3f = l3 * scale;
    const double n2r = std::round(n2f), n3r = std::round(n3f);
    if (std::abs(n2f - n2r) > 0.25 || std::abs(n3f - n3r) > 0.25) return std::nullopt;
    if (n2r < 0 || n3r < 0 || n2r + n3r > scale) return std::nullopt;
    const unsigned n2 = static_cast<unsigned>(n2r), n3 = static_cast<unsigned>(n3r);
    const unsigned n1 = static_cast<unsigned>(scale) - n2 - n3;
    const auto it = index_.find(detail::bary_key(n1, n2));
    if (it == index_.end()) return std::nullopt;
    return static_cast<std::size_t>(it->second);
}

VmLattice enumerate_vm(int m) {
    auto build = detail::build_lattice(m);
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
    return VmLattice(m, std::move(verts), std::move(build.key_index));
}

}  // namespace sgf
