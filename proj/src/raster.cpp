#include "isolat/raster.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isolat/io.hpp"

namespace isolat {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t offset, const std::string& what) {
  std::ostringstream msg;
  msg << path << ": raster parse error at byte " << offset << ": " << what;
  throw std::runtime_error(msg.str());
}

// Reads one decimal token, skipping whitespace and '#' comments; reports the
// byte offset of the failure otherwise.
int read_header_int(const std::string& bytes, std::size_t& pos, const std::string& path) {
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size()) parse_fail(path, pos, "unexpected end of header");
  if (bytes[pos] < '0' || bytes[pos] > '9') parse_fail(path, pos, "expected a decimal value");
  long v = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1000000000L) parse_fail(path, pos, "header value out of range");
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace

Raster make_raster(int width, int height, int channels, std::uint8_t fill) {
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
    throw std::domain_error("make_raster: bad geometry");
  Raster r;
  r.width = width;
  r.height = height;
  r.channels = channels;
  r.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
  return r;
}

Raster read_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open raster: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    parse_fail(path, 0, "not a binary PGM/PPM (magic P5 or P6)");
  const int channels = bytes[1] == '5' ? 1 : 3;
  pos = 2;

  const int width = read_header_int(bytes, pos, path);
  const int height = read_header_int(bytes, pos, path);
  const int maxval = read_header_int(bytes, pos, path);
  if (width <= 0 || height <= 0) parse_fail(path, pos, "non-positive dimensions");
  if (maxval <= 0 || maxval > 255) parse_fail(path, pos, "maxval outside 1..255");
  if (pos >= bytes.size() ||
      !(bytes[pos] == ' ' || bytes[pos] == '\t' || bytes[pos] == '\r' || bytes[pos] == '\n'))
    parse_fail(path, pos, "expected single whitespace after maxval");
  ++pos;

  const std::size_t need =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  if (bytes.size() - pos < need) parse_fail(path, bytes.size(), "truncated pixel data");

  Raster r;
  r.width = width;
  r.height = height;
  r.channels = channels;
  r.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return r;
}

void write_raster(const std::string& path, const Raster& r) {
  if (r.width <= 0 || r.height <= 0 || (r.channels != 1 && r.channels != 3))
    throw std::domain_error("write_raster: bad geometry");
  const std::size_t need =
      static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height) * r.channels;
  if (r.data.size() != need) throw std::domain_error("write_raster: pixel buffer size mismatch");
  std::string out;
  out.reserve(need + 32);
  out += r.channels == 1 ? "P5\n" : "P6\n";
  out += std::to_string(r.width);
  out += ' ';
  out += std::to_string(r.height);
  out += "\n255\n";
  out.append(reinterpret_cast<const char*>(r.data.data()), r.data.size());
  atomic_write_file(path, out);
}

}  // namespace isolat
