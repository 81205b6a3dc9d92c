#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "pulearn/error.hpp"
#include "pulearn/scorer.hpp"

namespace pulearn {

// Flat little-endian binary snapshot of a trained scorer:
//   magic "PULSCOR1"
//   u32 version (= 1)
//   u32 number of layer dims
//   u64 layer dims
//   u64 training seed
//   u8  estimator
//   f64 focal gamma
//   per layer: row-major f64 weights, then f64 biases
// Round-trips bit-exactly.
struct ModelSnapshot {
  ScorerParams params;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::ifpu;
  double gamma = 3.0;
};

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& buf, double v) {
  put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
  const unsigned char* p;
  const unsigned char* end;
  void need(std::size_t n) {
    if (static_cast<std::size_t>(end - p) < n)
      fail(Errc::io_error, "truncated model snapshot");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    p += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace detail

inline void save_model(const ModelSnapshot& snap, const std::string& path) {
  check_scorer(snap.params);
  std::string buf;
  buf.append("PULSCOR1", 8);
  detail::put_u32(buf, 1);
  detail::put_u32(buf, static_cast<std::uint32_t>(
                           snap.params.layer_dims.size()));
  for (std::size_t d : snap.params.layer_dims) detail::put_u64(buf, d);
  detail::put_u64(buf, snap.seed);
  buf.push_back(static_cast<char>(snap.estimator));
  detail::put_f64(buf, snap.gamma);
  for (std::size_t l = 0; l < snap.params.depth(); ++l) {
    for (double v : snap.params.weights[l].data) detail::put_f64(buf, v);
    for (double v : snap.params.biases[l]) detail::put_f64(buf, v);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(Errc::io_error, "short write to " + path);
}

inline ModelSnapshot load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::missing_file, "cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 8 || buf.compare(0, 8, "PULSCOR1") != 0)
    fail(Errc::io_error, "bad model magic in " + path);
  detail::ByteReader rd{
      reinterpret_cast<const unsigned char*>(buf.data()) + 8,
      reinterpret_cast<const unsigned char*>(buf.data()) + buf.size()};
  const std::uint32_t version = rd.u32();
  if (version != 1)
    fail(Errc::io_error, "unsupported snapshot version " +
                             std::to_string(version));
  ModelSnapshot snap;
  const std::uint32_t n_dims = rd.u32();
  if (n_dims < 2 || n_dims > 64)
    fail(Errc::io_error, "implausible layer count");
  snap.params.layer_dims.resize(n_dims);
  for (auto& d : snap.params.layer_dims)
    d = static_cast<std::size_t>(rd.u64());
  snap.seed = rd.u64();
  rd.need(1);
  const unsigned est = *rd.p++;
  if (est > 2) fail(Errc::io_error, "bad estimator tag");
  snap.estimator = static_cast<Estimator>(est);
  snap.gamma = rd.f64();
  for (std::size_t l = 0; l + 1 < n_dims; ++l) {
    Matrix w(snap.params.layer_dims[l], snap.params.layer_dims[l + 1]);
    for (double& v : w.data) v = rd.f64();
    snap.params.weights.push_back(std::move(w));
    std::vector<double> b(snap.params.layer_dims[l + 1]);
    for (double& v : b) v = rd.f64();
    snap.params.biases.push_back(std::move(b));
  }
  if (rd.p != rd.end) fail(Errc::io_error, "trailing bytes in " + path);
  check_scorer(snap.params);
  return snap;
}

}  // namespace pulearn
