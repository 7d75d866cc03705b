#pragma once

// Binary cache of a symbolic mean matrix, all integers little-endian:
//   "PBM1"
//   u32 length + model id bytes
//   u8 space kind, i32 k, i32 i, i32 j, i32 side, i32 focus
//   u64 state count
//   u64 pool size, then per polynomial: u32 term count, per term u8 a1 b1 a2 b2, u64 coefficient
//   u64 row count, then per row: u32 entry count, per entry u32 column, u32 polynomial id

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/model.hpp"
#include "percbound/poly.hpp"
#include "percbound/state_space.hpp"
#include "percbound/transition.hpp"

namespace percbound {

namespace io_detail {

inline constexpr std::array<char, 4> kMagic{'P', 'B', 'M', '1'};

template <class T>
void put(std::ostream& out, T v) {
  std::array<char, sizeof(T)> bytes;
  auto u = static_cast<std::make_unsigned_t<T>>(v);
  for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<char>((u >> (8 * b)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw Error("truncated matrix cache");
  std::make_unsigned_t<T> u = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) u |= static_cast<std::make_unsigned_t<T>>(bytes[b]) << (8 * b);
  return static_cast<T>(u);
}

}  // namespace io_detail

inline void write_cache(std::ostream& out, const MeanMatrix& m) {
  using io_detail::put;
  out.write(io_detail::kMagic.data(), io_detail::kMagic.size());
  const std::string id = model_id(m.model());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
  out.write(id.data(), static_cast<std::streamsize>(id.size()));
  const SpaceSpec& s = m.spec();
  put<std::uint8_t>(out, static_cast<std::uint8_t>(s.kind));
  for (int v : {s.k, s.i, s.j, s.side, s.focus}) put<std::int32_t>(out, v);
  put<std::uint64_t>(out, m.dimension());

  put<std::uint64_t>(out, m.pool().size());
  for (const Poly& p : m.pool().entries()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.term_count()));
    for (const Term& t : p.terms()) {
      const Exponents e = Exponents::from_key(t.key);
      for (std::uint8_t x : {e.a1, e.b1, e.a2, e.b2}) put<std::uint8_t>(out, x);
      put<std::uint64_t>(out, t.coeff);
    }
  }

  const CsrStructure& csr = *m.structure();
  put<std::uint64_t>(out, csr.rows());
  for (std::size_t i = 0; i < csr.rows(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(csr.row_ptr[i + 1] - csr.row_ptr[i]));
    for (std::uint64_t e = csr.row_ptr[i]; e < csr.row_ptr[i + 1]; ++e) {
      put<std::uint32_t>(out, csr.cols[e]);
      put<std::uint32_t>(out, m.poly_ids()[e]);
    }
  }
  if (!out) throw Error("failed to write matrix cache");
}

inline MeanMatrix read_cache(std::istream& in) {
  using io_detail::get;
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != io_detail::kMagic)
    throw Error("not a matrix cache (bad magic)");
  const auto id_len = get<std::uint32_t>(in);
  if (id_len > 64) throw Error("corrupt matrix cache (model id length)");
  std::string id(id_len, '\0');
  if (!in.read(id.data(), id_len)) throw Error("truncated matrix cache");
  const ModelSpec model = parse_model(id);

  SpaceSpec spec;
  const auto kind = get<std::uint8_t>(in);
  if (kind > static_cast<std::uint8_t>(SpaceKind::Triangle)) throw Error("corrupt matrix cache (space kind)");
  spec.kind = static_cast<SpaceKind>(kind);
  spec.k = get<std::int32_t>(in);
  spec.i = get<std::int32_t>(in);
  spec.j = get<std::int32_t>(in);
  spec.side = get<std::int32_t>(in);
  spec.focus = get<std::int32_t>(in);
  validate(model, spec);
  const auto states = get<std::uint64_t>(in);

  PolyPool pool;
  const auto pool_size = get<std::uint64_t>(in);
  std::vector<Term> terms;
  for (std::uint64_t n = 0; n < pool_size; ++n) {
    const auto count = get<std::uint32_t>(in);
    terms.clear();
    for (std::uint32_t t = 0; t < count; ++t) {
      Exponents e;
      e.a1 = get<std::uint8_t>(in);
      e.b1 = get<std::uint8_t>(in);
      e.a2 = get<std::uint8_t>(in);
      e.b2 = get<std::uint8_t>(in);
      terms.push_back({e.key(), get<std::uint64_t>(in)});
    }
    if (pool.intern(Poly::from_terms(terms)) != n) throw Error("corrupt matrix cache (duplicate polynomial)");
  }

  auto csr = std::make_shared<CsrStructure>();
  std::vector<std::uint32_t> ids;
  const auto rows = get<std::uint64_t>(in);
  if (rows != states) throw Error("corrupt matrix cache (row count differs from state count)");
  for (std::uint64_t i = 0; i < rows; ++i) {
    const auto count = get<std::uint32_t>(in);
    for (std::uint32_t e = 0; e < count; ++e) {
      const auto col = get<std::uint32_t>(in);
      const auto pid = get<std::uint32_t>(in);
      if (col >= states || pid >= pool_size) throw Error("corrupt matrix cache (entry out of range)");
      csr->cols.push_back(col);
      ids.push_back(pid);
    }
    csr->row_ptr.push_back(csr->cols.size());
  }
  MatrixStats stats;
  stats.nonzeros = csr->nonzeros();
  stats.distinct_polys = pool.size();
  return MeanMatrix(model, spec, std::move(csr), std::move(ids), std::move(pool), stats);
}

inline void write_cache(const std::string& path, const MeanMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_cache(out, m);
}

inline MeanMatrix read_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_cache(in);
}

/// One line per nonzero: "<row> <col> <polynomial>".
inline void dump_matrix(std::ostream& out, const MeanMatrix& m, const StateSpace& space) {
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (const auto& e : m.row(i))
      out << space.render(i) << ' ' << space.render(e.col) << ' ' << to_string(m.pool()[e.poly]) << '\n';
}

}  // namespace percbound
