#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgfract/errors.hpp"

namespace sgf {

/// Maximum supported lattice depth. |V_12| is ~797k vertices; deeper
/// tables add nothing visually and the integer vertex coding assumes it.
inline constexpr int kMaxDepth = 12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point2 a, Point2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Word over {1,2,3} naming a nested cell of the gasket. The empty word
/// is the whole gasket.
struct Address {
    std::vector<std::uint8_t> word;

    int depth() const { return static_cast<int>(word.size()); }

    /// Parses digit strings like "312". Throws SyntaxError on any other
    /// character; "" is the empty address.
    static Address parse(std::string_view text);
    std::string str() const;

    bool operator==(const Address&) const = default;
};

/// Names the vertex u_{word}(x_corner). Vertices shared by two cells have
/// two such names; `canonical` marks the representative kept by
/// enumerate_vm (lexicographically smallest (word, corner), 1 < 2 < 3).
struct VertexId {
    Address address;
    int corner = 1;          // 1..3
    bool canonical = false;

    bool operator==(const VertexId&) const = default;
};

struct VmVertex {
    VertexId id;
    Point2 pt;
};

/// All distinct vertices {u_w(x_j) : |w| = m, j in {1,2,3}}, canonical ids
/// only, in deterministic discovery order (level by level). The count is
/// always (3^(m+1) + 3) / 2.
class VmLattice {
  public:
    VmLattice() = default;
    VmLattice(int depth, std::vector<VmVertex> vertices,
              std::unordered_map<std::uint32_t, std::uint32_t> index);

    int depth() const { return depth_; }
    std::size_t size() const { return vertices_.size(); }
    const std::vector<VmVertex>& vertices() const { return vertices_; }
    const VmVertex& operator[](std::size_t i) const { return vertices_[i]; }

    /// Index of the vertex whose exact position matches `p` (quantized to
    /// the depth-m barycentric grid), if any.
    std::optional<std::size_t> find(Point2 p) const;

  private:
    int depth_ = 0;
    std::vector<VmVertex> vertices_;
    std::unordered_map<std::uint32_t, std::uint32_t> index_;  // bary key -> index
};

/// Number of distinct V_m vertices, (3^(m+1) + 3) / 2.
std::size_t vm_vertex_count(int m);

/// Corners of the base triangle: x1 = (0,0), x2 = (1,0), x3 = (1/2, sqrt(3)/2).
std::array<Point2, 3> base_vertices();
Point2 base_vertex(int i);

/// u_i(t) = (t + x_i) / 2.
Point2 apply_map(int i, Point2 t);

/// u_i^{-1}(t) = 2t - x_i. Throws OutOfCell if t is not in the closed
/// sub-triangle u_i(triangle) within tolerance.
Point2 invert_map(int i, Point2 t, double tol = 1e-9);

/// Evaluates u_{w_1} o ... o u_{w_m} (x_corner) exactly (integer
/// barycentric accumulation, bit-identical to lattice vertex positions).
Point2 address_to_point(const VertexId& v);

/// Enumerates V_m with canonical ids. Throws DepthTooLarge for m > 12.
VmLattice enumerate_vm(int m);

/// Length-m word of the depth-m cell containing t; ties at shared points
/// break to the smallest cell index at each level. Throws NotOnGasket if
/// no cell contains t within tolerance (1e-9 at gasket scale).
Address locate(Point2 t, int m, double tol = 1e-9);

/// Closed-triangle membership test with an absolute tolerance.
bool in_triangle(Point2 t, double tol = 1e-9);

}  // namespace sgf
