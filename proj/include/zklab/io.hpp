#pragma once

// File formats: CSV tables, flat binary fields with JSON sidecars, and FNV
// content hashes for the run manifest.
//
// CSV numbers are printed with "%.17g" so doubles round-trip exactly and
// reruns are byte-comparable.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zklab/core.hpp"

namespace zklab {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Deterministic CSV writer: header fixed at construction, one row per call.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("csv: cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
    columns_ = header.size();
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
      throw ContractViolation("csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    ++rows_;
  }

  void close() {
    if (out_.is_open()) out_.close();
  }

  const std::string& path() const { return path_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

inline std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("hash: cannot open '" + path + "'");
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// Binary field files (little-endian doubles, row-major (m,)j,q) + JSON sidecar.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_f64(std::ostream& o, double v) {
  static_assert(sizeof(double) == 8);
  o.write(reinterpret_cast<const char*>(&v), 8);
}
inline void put_i64(std::ostream& o, std::int64_t v) {
  o.write(reinterpret_cast<const char*>(&v), 8);
}
inline double get_f64(std::istream& in) {
  double v;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
inline std::int64_t get_i64(std::istream& in) {
  std::int64_t v;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

inline void write_sidecar(const std::string& path, nlohmann::json j) {
  std::ofstream s(path + ".json", std::ios::binary | std::ios::trunc);
  s << j.dump(2) << '\n';
}

}  // namespace detail

inline void save_field(const SpectralField& u, const std::string& path) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) throw Error("save_field: cannot open '" + path + "'");
  detail::put_f64(o, u.grid.Lx);
  detail::put_i64(o, u.grid.Nx);
  detail::put_i64(o, u.grid.Ny);
  o.put(u.real_field ? 1 : 0);
  for (const cplx& c : u.coeff) {
    detail::put_f64(o, c.real());
    detail::put_f64(o, c.imag());
  }
  detail::write_sidecar(path, {{"kind", "spectral-field"},
                               {"Lx", u.grid.Lx},
                               {"Nx", u.grid.Nx},
                               {"Ny", u.grid.Ny},
                               {"real_field", u.real_field}});
}

inline SpectralField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("load_field: cannot open '" + path + "'");
  const double Lx = detail::get_f64(in);
  const std::int64_t Nx = detail::get_i64(in);
  const std::int64_t Ny = detail::get_i64(in);
  const int flag = in.get();
  if (!in || flag < 0) throw Error("load_field: truncated header in '" + path + "'");
  Grid g(Lx, static_cast<int>(Nx), static_cast<int>(Ny));
  SpectralField u(g);
  u.real_field = flag != 0;
  for (cplx& c : u.coeff) {
    const double re = detail::get_f64(in);
    const double im = detail::get_f64(in);
    c = cplx(re, im);
  }
  if (!in) throw Error("load_field: truncated payload in '" + path + "'");
  return u;
}

inline void save_field(const SpaceTimeField& u, const std::string& path) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) throw Error("save_field: cannot open '" + path + "'");
  detail::put_f64(o, u.grid.Lx);
  detail::put_i64(o, u.grid.Nx);
  detail::put_i64(o, u.grid.Ny);
  detail::put_f64(o, u.grid.Tw);
  detail::put_i64(o, u.grid.Nt);
  o.put(u.real_field ? 1 : 0);
  for (const cplx& c : u.coeff) {
    detail::put_f64(o, c.real());
    detail::put_f64(o, c.imag());
  }
  detail::write_sidecar(path, {{"kind", "spacetime-field"},
                               {"Lx", u.grid.Lx},
                               {"Nx", u.grid.Nx},
                               {"Ny", u.grid.Ny},
                               {"Tw", u.grid.Tw},
                               {"Nt", u.grid.Nt},
                               {"real_field", u.real_field}});
}

inline SpaceTimeField load_spacetime_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("load_field: cannot open '" + path + "'");
  const double Lx = detail::get_f64(in);
  const std::int64_t Nx = detail::get_i64(in);
  const std::int64_t Ny = detail::get_i64(in);
  const double Tw = detail::get_f64(in);
  const std::int64_t Nt = detail::get_i64(in);
  const int flag = in.get();
  if (!in || flag < 0) throw Error("load_field: truncated header in '" + path + "'");
  Grid g(Lx, static_cast<int>(Nx), static_cast<int>(Ny), Tw, static_cast<int>(Nt));
  SpaceTimeField u(g);
  u.real_field = flag != 0;
  for (cplx& c : u.coeff) {
    const double re = detail::get_f64(in);
    const double im = detail::get_f64(in);
    c = cplx(re, im);
  }
  if (!in) throw Error("load_field: truncated payload in '" + path + "'");
  return u;
}

}  // namespace zklab
