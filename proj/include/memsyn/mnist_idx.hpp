/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace memsyn {

/// One grayscale image with intensities normalized to [0, 1].
struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;  // row-major

    double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
};

struct Dataset {
    std::vector<Image> images;
    std::vector<int> labels;
};

class IdxFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw IdxFormatError("idx: truncated header in " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace detail

/// Parse big-endian idx image/label files. Labels outside [0, 9] and header
/// mismatches are rejected.
inline Dataset load_mnist(const std::string& image_path, const std::string& label_path) {
    std::ifstream img(image_path, std::ios::binary);
    if (!img) throw IdxFormatError("idx: cannot open " + image_path);
    if (detail::read_be32(img, image_path) != 0x00000803u)
        throw IdxFormatError("idx: bad image magic in " + image_path);
    const std::uint32_t n_images = detail::read_be32(img, image_path);
    const std::uint32_t rows = detail::read_be32(img, image_path);
    const std::uint32_t cols = detail::read_be32(img, image_path);

    std::ifstream lbl(label_path, std::ios::binary);
    if (!lbl) throw IdxFormatError("idx: cannot open " + label_path);
    if (detail::read_be32(lbl, label_path) != 0x00000801u)
        throw IdxFormatError("idx: bad label magic in " + label_path);
    const std::uint32_t n_labels = detail::read_be32(lbl, label_path);
    if (n_images != n_labels)
        throw IdxFormatError("idx: image/label count mismatch between " + image_path + " and " +
                             label_path);

    Dataset ds;
    ds.images.reserve(n_images);
    ds.labels.reserve(n_images);
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
            throw IdxFormatError("idx: truncated image data in " + image_path);
        Image image{rows, cols, {}};
        image.pixels.resize(buf.size());
        for (std::size_t p = 0; p < buf.size(); ++p)
            image.pixels[p] = static_cast<double>(buf[p]) / 255.0;
        char c = 0;
        if (!lbl.read(&c, 1)) throw IdxFormatError("idx: truncated label data in " + label_path);
        const int label = static_cast<unsigned char>(c);
        if (label > 9) throw IdxFormatError("idx: label out of range in " + label_path);
        ds.images.push_back(std::move(image));
        ds.labels.push_back(label);
    }
    return ds;
}

/// Keep only samples with labels in [0, max_label].
inline Dataset filter_labels(const Dataset& ds, int max_label) {
    Dataset out;
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        if (ds.labels[i] <= max_label) {
            out.images.push_back(ds.images[i]);
            out.labels.push_back(ds.labels[i]);
        }
    }
    return out;
}

/// 28x28 -> 24x24 by center crop (2-pixel border removed on each side).
inline Image scale_24(const Image& in) {
    if (in.rows != 28 || in.cols != 28)
        throw std::invalid_argument("scale_24: expected a 28x28 image");
    Image out{24, 24, std::vector<double>(24 * 24)};
    for (std::size_t r = 0; r < 24; ++r)
        for (std::size_t c = 0; c < 24; ++c) out.pixels[r * 24 + c] = in.at(r + 2, c + 2);
    return out;
}

}  // namespace memsyn
