#include "lvs/image.hpp"

#include <fstream>
#include <string>

#include "lvs/errors.hpp"

namespace lvs {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw ValidationError("image dimensions must be non-negative");
  }
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i + 2 < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int x, int y, Rgb value) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = value.r;
  data_[i + 1] = value.g;
  data_[i + 2] = value.b;
}

namespace {

// Skips whitespace and '#' comments between PPM header tokens.
int next_header_int(std::istream& in, const std::filesystem::path& path) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw ParseError("ppm: truncated header: " + path.string());
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw ParseError("ppm: bad header token: " + path.string());
  return value;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for read: " + path.string());

  std::string magic;
  in >> magic;
  if (magic != "P6") throw ParseError("ppm: expected P6 magic: " + path.string());

  const int width = next_header_int(in, path);
  const int height = next_header_int(in, path);
  const int maxval = next_header_int(in, path);
  if (width < 1 || height < 1) {
    throw ParseError("ppm: bad dimensions: " + path.string());
  }
  if (maxval != 255) {
    throw ParseError("ppm: only maxval 255 supported: " + path.string());
  }
  in.get();  // single whitespace after maxval

  Image img(width, height);
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
    throw ParseError("ppm: truncated pixel data: " + path.string());
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
      img.set(x, y, {buf[i], buf[i + 1], buf[i + 2]});
    }
  }
  return img;
}

void write_ppm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path.string());
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.bytes().data()),
            static_cast<std::streamsize>(image.bytes().size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lvs
