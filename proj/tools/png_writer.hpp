#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sgtool {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    Image(int w, int h, std::uint8_t fill = 255)
        : width(w), height(h),
          rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill) {}

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        const std::size_t at =
            (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
             static_cast<std::size_t>(x)) * 3;
        rgb[at] = r;
        rgb[at + 1] = g;
        rgb[at + 2] = b;
    }
};

/// 8-bit RGB PNG via zlib. Returns false on I/O or encoding failure.
bool write_png(const std::string& path, const Image& img);

}  // namespace sgtool
