#include "png_writer.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>

namespace sgtool {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    put_u32(out, crc);
}

}  // namespace

bool write_png(const std::string& path, const Image& img) {
    // raw stream: one filter byte (0 = none) per scanline
    const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = img.rgb.data() + static_cast<std::size_t>(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }

    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> zdata(zlen);
    if (compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        return false;
    zdata.resize(zlen);

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor RGB
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", zdata);
    put_chunk(png, "IEND", {});

    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) return false;
    const bool ok = std::fwrite(png.data(), 1, png.size(), fp) == png.size();
    return std::fclose(fp) == 0 && ok;
}

}  // namespace sgtool
