#pragma once

// Shared level-by-level lattice construction. V_m is generated by
// V_0 = {x_1,x_2,x_3}, V_k = u_1(V_{k-1}) u u_2(V_{k-1}) u u_3(V_{k-1});
// vertices are coded by integer barycentric numerators over the fixed
// denominator 2^m, so deduplication and canonical-representative picking
// are exact integer operations.

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sgfract/gasket.hpp"

namespace sgf::detail {

inline constexpr double kSqrt3Over2 = 0.86602540378443864676;

// Cell word packed 2 bits per letter, first letter in the most
// significant slot: numeric order == lexicographic order (1 < 2 < 3)
// for words of equal length. Supports up to kMaxDepth = 12 letters.
struct PackedWord {
    std::uint32_t bits = 0;
    std::uint8_t len = 0;

    PackedWord prepend(int i) const {
        return {bits + (static_cast<std::uint32_t>(i - 1) << (2u * len)),
                static_cast<std::uint8_t>(len + 1)};
    }
    int letter(int k) const {  // 0-based from the front
        return static_cast<int>((bits >> (2u * (len - 1 - k))) & 3u) + 1;
    }
};

// (word, corner) order used to pick canonical representatives.
inline bool rep_less(PackedWord wa, int ca, PackedWord wb, int cb) {
    if (wa.bits != wb.bits) return wa.bits < wb.bits;
    return ca < cb;
}

struct BuildVertex {
    std::array<std::uint16_t, 3> bary{};  // numerators over 2^depth
    PackedWord rep_word[2];
    std::uint8_t rep_corner[2] = {0, 0};
    std::uint8_t rep_count = 0;
    std::uint32_t parent = 0;  // first generator: u_branch(parent) = this
    std::uint8_t branch = 0;   // (corners: parent = self, branch = corner)
    std::uint8_t level = 0;    // discovery level
};

struct Assign {
    std::uint32_t child;
    std::uint32_t parent;
    std::uint8_t branch;
};

struct LatticeBuild {
    int depth = 0;
    std::vector<BuildVertex> verts;  // discovery order; first |V_k| entries = V_k
    std::vector<Point2> pts;
    std::vector<std::size_t> level_sizes;            // |V_0| .. |V_m|
    std::vector<std::vector<Assign>> level_assigns;  // levels 1..m, sweep order
    std::unordered_map<std::uint32_t, std::uint32_t> key_index;
};

inline std::uint32_t bary_key(unsigned n1, unsigned n2) {
    return (n1 << 13) | n2;  // numerators <= 2^12 each
}

// Cartesian position from barycentric numerators; the single formula used
// everywhere so equal vertices get bit-identical coordinates.
inline Point2 bary_point(unsigned n2, unsigned n3, int depth) {
    const double inv = 1.0 / static_cast<double>(1u << depth);
    return {(static_cast<double>(n2) + 0.5 * static_cast<double>(n3)) * inv,
            kSqrt3Over2 * (static_cast<double>(n3) * inv)};
}

LatticeBuild build_lattice(int m);

Address unpack_word(PackedWord w);

}  // namespace sgf::detail
