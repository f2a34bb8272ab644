#pragma once

#include <vector>

#include "dirpose/errors.hpp"

namespace dirpose {

// Row-major float image. Color samples live in [0, 1]; depth images are
// single-channel with values in meters.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w < 1 || h < 1 || (c != 1 && c != 3)) {
      throw UsageError("ImageBuffer: bad dimensions or channel count");
    }
  }

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  bool same_shape(const ImageBuffer& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Bilinear sample at continuous (x, y); pixel centers sit at integer
// coordinates. Coordinates are clamped to the valid interpolation square.
float bilinear_sample(const ImageBuffer& img, double x, double y, int c);

// Nearest-neighbor sample; coordinates rounded then clamped.
float nearest_sample(const ImageBuffer& img, double x, double y, int c);

}  // namespace dirpose
