#include "dirpose/image.hpp"

#include <algorithm>
#include <cmath>

namespace dirpose {

float bilinear_sample(const ImageBuffer& img, double x, double y, int c) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  int x1 = std::min(x0 + 1, img.width - 1);
  int y1 = std::min(y0 + 1, img.height - 1);
  double fx = x - x0;
  double fy = y - y0;
  double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
  double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
  return static_cast<float>((1 - fy) * ((1 - fx) * v00 + fx * v10) +
                            fy * ((1 - fx) * v01 + fx * v11));
}

float nearest_sample(const ImageBuffer& img, double x, double y, int c) {
  int xi = std::clamp(static_cast<int>(std::lround(x)), 0, img.width - 1);
  int yi = std::clamp(static_cast<int>(std::lround(y)), 0, img.height - 1);
  return img.at(xi, yi, c);
}

}  // namespace dirpose
