#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "texforge/image.hpp"

namespace texforge {

struct PgmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PgmHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;  // byte offset of the first pixel
};

namespace detail {

// Header tokens are separated by whitespace; '#' starts a comment to end of line.
inline std::size_t next_pnm_token(std::span<const std::uint8_t> bytes, std::size_t pos,
                                  std::string& token) {
  token.clear();
  while (pos < bytes.size()) {
    char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < bytes.size()) {
    char c = static_cast<char>(bytes[pos]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v' || c == '#') break;
    token.push_back(c);
    ++pos;
  }
  if (token.empty()) throw PgmError("pgm: truncated header");
  return pos;
}

inline std::size_t parse_pnm_number(std::span<const std::uint8_t> bytes, std::size_t pos,
                                    std::size_t& value, const char* what) {
  std::string tok;
  pos = next_pnm_token(bytes, pos, tok);
  value = 0;
  if (tok.empty()) throw PgmError(std::string("pgm: missing ") + what);
  for (char c : tok) {
    if (c < '0' || c > '9') throw PgmError(std::string("pgm: malformed ") + what);
    value = value * 10 + static_cast<std::size_t>(c - '0');
    if (value > (std::size_t{1} << 40)) throw PgmError(std::string("pgm: absurd ") + what);
  }
  return pos;
}

}  // namespace detail

/// Parses a binary PGM ("P5") header. Only maxval 255 is accepted.
inline PgmHeader parse_pgm_header(std::span<const std::uint8_t> bytes) {
  std::string magic;
  std::size_t pos = detail::next_pnm_token(bytes, 0, magic);
  if (magic != "P5") throw PgmError("pgm: malformed magic number (expected P5)");
  PgmHeader h;
  std::size_t w = 0, ht = 0, maxval = 0;
  pos = detail::parse_pnm_number(bytes, pos, w, "width");
  pos = detail::parse_pnm_number(bytes, pos, ht, "height");
  pos = detail::parse_pnm_number(bytes, pos, maxval, "maxval");
  if (pos >= bytes.size()) throw PgmError("pgm: truncated pixel data");
  ++pos;  // single whitespace byte after maxval
  if (w == 0 || ht == 0) throw PgmError("pgm: zero dimension");
  if (maxval != 255) throw PgmError("pgm: unsupported maxval (only 255)");
  h.width = w;
  h.height = ht;
  h.maxval = static_cast<int>(maxval);
  h.data_offset = pos;
  return h;
}

/// Decodes a whole binary PGM stream into a GrayImage.
inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  PgmHeader h = parse_pgm_header(bytes);
  const std::size_t need = h.width * h.height;
  if (bytes.size() - h.data_offset < need) throw PgmError("pgm: truncated pixel data");
  std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset),
                               bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset + need));
  return GrayImage(h.width, h.height, std::move(px));
}

inline GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
  return load_pgm(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

inline GrayImage load_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("pgm: cannot open " + path);
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return load_pgm(bytes);
}

inline void write_pgm(const GrayImage& img, std::ostream& out) {
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw std::runtime_error("pgm: write failure");
}

inline void write_pgm_file(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot create " + path);
  write_pgm(img, out);
}

}  // namespace texforge
