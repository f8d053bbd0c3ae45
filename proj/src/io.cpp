#include "isolat/io.hpp"

#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace isolat {

void atomic_write_file(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("rename failed for " + target.string() + ": " + ec.message());
  }
}

std::string format_double(double x) {
  // %.17g always round-trips; prefer the shortest precision that does.
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<double> parse_angle(std::string_view text) {
  std::string s(text);
  // strip spaces
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) return std::nullopt;

  const double pi = 3.14159265358979323846264338327950288;
  auto pos = t.find("pi");
  if (pos == std::string::npos) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  }

  // [coefficient][*]pi[/denominator]
  std::string head = t.substr(0, pos);
  std::string tail = t.substr(pos + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();

  double coef = 1.0;
  if (head == "-") {
    coef = -1.0;
  } else if (head == "+" || head.empty()) {
    coef = 1.0;
  } else {
    char* end = nullptr;
    errno = 0;
    coef = std::strtod(head.c_str(), &end);
    if (errno != 0 || end != head.c_str() + head.size() || !std::isfinite(coef)) return std::nullopt;
  }

  double denom = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const std::string d = tail.substr(1);
    char* end = nullptr;
    errno = 0;
    denom = std::strtod(d.c_str(), &end);
    if (errno != 0 || end != d.c_str() + d.size() || !std::isfinite(denom) || denom == 0.0)
      return std::nullopt;
  }
  return coef * pi / denom;
}

std::optional<std::array<std::int64_t, 3>> parse_triple(std::string_view text) {
  std::array<std::int64_t, 3> out{};
  std::string s(text);
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = i < 2 ? s.find(',', start) : s.size();
    if (comma == std::string::npos) return std::nullopt;
    const std::string part = s.substr(start, comma - start);
    if (part.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(part.c_str(), &end, 10);
    if (errno != 0 || end != part.c_str() + part.size()) return std::nullopt;
    out[static_cast<std::size_t>(i)] = v;
    start = comma + 1;
  }
  return out;
}

}  // namespace isolat
