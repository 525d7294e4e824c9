#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lvs {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 8-bit RGB raster, row-major, interleaved channels.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb value);

  const std::vector<std::uint8_t>& bytes() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Binary PPM (P6, maxval 255). Throws IoError on filesystem failure and
// ParseError on malformed content.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& image, const std::filesystem::path& path);

}  // namespace lvs
