#pragma once

// Netpbm greyscale images: plain (P2) and raw (P5), 8- or 16-bit samples.
// 16-bit raw samples are big-endian.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxsub/core2d.hpp"
#include "maxsub/error.hpp"

namespace maxsub {

/// Parse failure carrying the byte offset where reading stopped.
class PgmError : public InvalidInput {
public:
    PgmError(std::size_t offset, const std::string& what)
        : InvalidInput("PGM byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

enum class PgmFormat { Plain, Raw };

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::uint32_t maxval = 255;
    std::vector<std::uint16_t> pixels;  // row-major
    PgmFormat format = PgmFormat::Raw;

    std::uint16_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

namespace detail {

class PgmReader {
public:
    explicit PgmReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ >= bytes_.size(); }

    static bool is_space(unsigned char c) noexcept {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            const unsigned char c = bytes_[pos_];
            if (is_space(c)) {
                ++pos_;
            } else if (c == '#') {
                while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint32_t read_uint(const char* what) {
        skip_space_and_comments();
        if (at_end()) throw PgmError(pos_, std::string("unexpected end of data reading ") + what);
        if (bytes_[pos_] < '0' || bytes_[pos_] > '9') throw PgmError(pos_, std::string("expected ") + what);
        std::uint64_t v = 0;
        while (!at_end() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 0xffffffffULL) throw PgmError(pos_, std::string(what) + " is too large");
            ++pos_;
        }
        if (!at_end() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
            throw PgmError(pos_, std::string("unexpected character after ") + what);
        }
        return static_cast<std::uint32_t>(v);
    }

    unsigned char byte() { return bytes_[pos_++]; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline PgmImage read_pgm(std::span<const unsigned char> bytes) {
    detail::PgmReader in(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw PgmError(0, "bad magic number (expected P2 or P5)");
    }
    in.byte();
    PgmImage img;
    img.format = in.byte() == '2' ? PgmFormat::Plain : PgmFormat::Raw;

    img.width = in.read_uint("width");
    img.height = in.read_uint("height");
    if (img.width == 0 || img.height == 0) throw PgmError(in.pos(), "image dimensions must be positive");
    img.maxval = in.read_uint("maxval");
    if (img.maxval == 0 || img.maxval > 65535) throw PgmError(in.pos(), "maxval must lie in [1,65535]");

    const std::size_t count = img.width * img.height;
    img.pixels.resize(count);
    if (img.format == PgmFormat::Plain) {
        for (std::size_t i = 0; i < count; ++i) {
            in.skip_space_and_comments();
            const std::size_t at = in.pos();
            const std::uint32_t v = in.read_uint("pixel value");
            if (v > img.maxval) throw PgmError(at, "pixel value exceeds maxval");
            img.pixels[i] = static_cast<std::uint16_t>(v);
        }
        return img;
    }

    if (in.at_end() || !detail::PgmReader::is_space(bytes[in.pos()])) {
        throw PgmError(in.pos(), "expected single whitespace before raster");
    }
    in.byte();
    const std::size_t sample_bytes = img.maxval < 256 ? 1 : 2;
    if (in.remaining() < count * sample_bytes) {
        throw PgmError(bytes.size(), "truncated raster: need " + std::to_string(count * sample_bytes) +
                                         " bytes, have " + std::to_string(in.remaining()));
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = in.pos();
        std::uint32_t v = in.byte();
        if (sample_bytes == 2) v = (v << 8) | in.byte();
        if (v > img.maxval) throw PgmError(at, "pixel value exceeds maxval");
        img.pixels[i] = static_cast<std::uint16_t>(v);
    }
    return img;
}

/// Canonical encoding: "Px\n<w> <h>\n<maxval>\n" then the raster; plain
/// rasters put one image row per line.
inline std::string write_pgm(const PgmImage& img, PgmFormat format) {
    if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height) {
        throw InvalidInput("PGM image shape does not match its pixel count");
    }
    if (img.maxval == 0 || img.maxval > 65535) throw InvalidInput("maxval must lie in [1,65535]");
    std::string out = format == PgmFormat::Plain ? "P2\n" : "P5\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n" + std::to_string(img.maxval) + "\n";
    if (format == PgmFormat::Plain) {
        for (std::size_t r = 0; r < img.height; ++r) {
            for (std::size_t c = 0; c < img.width; ++c) {
                if (c) out += ' ';
                out += std::to_string(img.at(r, c));
            }
            out += '\n';
        }
        return out;
    }
    const bool wide = img.maxval >= 256;
    for (std::uint16_t v : img.pixels) {
        if (wide) out += static_cast<char>(v >> 8);
        out += static_cast<char>(v & 0xff);
    }
    return out;
}

/// Pixel values minus a scalar background, as a matrix.
inline Matrix pgm_to_matrix(const PgmImage& img, double background = 0.0) {
    std::vector<double> values(img.pixels.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(img.pixels[i]) - background;
    return Matrix(img.height, img.width, std::move(values));
}

}  // namespace maxsub
