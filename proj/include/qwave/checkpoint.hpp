#pragma once

// Binary MpsState checkpoint.
//
// Layout (little-endian, packed in write order):
//   magic           8 bytes  "QWMPS\0\0\0"
//   version         u32      currently 1
//   n_sites         u32
//   local_dim       u32
//   ortho_center    i32      -1 if none
//   cum_discarded   f64
//   bond_dims       u64 * (n_sites + 1)
//   site tensors    complex<f64>, per site, row-major over (l, n, r):
//                   index = (l * local_dim + n) * Dr + r

#include <cstring>
#include <fstream>

#include "qwave/mps.hpp"

namespace qwave {

inline constexpr char checkpoint_magic[8] = {'Q', 'W', 'M', 'P',
                                             'S', 0,   0,   0};
inline constexpr std::uint32_t checkpoint_version = 1;

inline void save_checkpoint(const MpsState& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_checkpoint: cannot open " + path);
  auto put = [&f](const void* p, std::size_t n) {
    f.write(static_cast<const char*>(p), std::streamsize(n));
  };
  put(checkpoint_magic, 8);
  const std::uint32_t ver = checkpoint_version;
  const std::uint32_t ns = std::uint32_t(s.n_sites());
  const std::uint32_t d = std::uint32_t(s.local_dim);
  const std::int32_t c = std::int32_t(s.center);
  put(&ver, 4);
  put(&ns, 4);
  put(&d, 4);
  put(&c, 4);
  put(&s.cumulative_discarded, 8);
  for (int b = 0; b <= s.n_sites(); ++b) {
    const std::uint64_t bd = std::uint64_t(s.bond_dim(b));
    put(&bd, 8);
  }
  for (const auto& tens : s.site) {
    const int dl = int(tens[0].rows()), dr = int(tens[0].cols());
    for (int l = 0; l < dl; ++l)
      for (int n = 0; n < s.local_dim; ++n)
        for (int r = 0; r < dr; ++r) {
          const cxd v = tens[n](l, r);
          put(&v, 16);
        }
  }
  if (!f) throw std::runtime_error("save_checkpoint: write failed");
}

inline MpsState load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_checkpoint: cannot open " + path);
  auto get = [&f, &path](void* p, std::size_t n) {
    f.read(static_cast<char*>(p), std::streamsize(n));
    if (!f) throw std::runtime_error("load_checkpoint: truncated " + path);
  };
  char magic[8];
  get(magic, 8);
  if (std::memcmp(magic, checkpoint_magic, 8) != 0)
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  std::uint32_t ver, ns, d;
  std::int32_t c;
  get(&ver, 4);
  if (ver != checkpoint_version)
    throw std::runtime_error("load_checkpoint: unsupported version");
  get(&ns, 4);
  get(&d, 4);
  get(&c, 4);
  MpsState s;
  s.local_dim = int(d);
  get(&s.cumulative_discarded, 8);
  std::vector<std::uint64_t> bonds(ns + 1);
  for (auto& b : bonds) get(&b, 8);
  if (bonds.front() != 1 || bonds.back() != 1)
    throw std::runtime_error("load_checkpoint: boundary bonds must be 1");
  s.site.resize(ns);
  for (std::uint32_t i = 0; i < ns; ++i) {
    const int dl = int(bonds[i]), dr = int(bonds[i + 1]);
    s.site[i].assign(d, MatC::Zero(dl, dr));
    for (int l = 0; l < dl; ++l)
      for (std::uint32_t n = 0; n < d; ++n)
        for (int r = 0; r < dr; ++r) {
          cxd v;
          get(&v, 16);
          s.site[i][n](l, r) = v;
        }
  }
  s.center = int(c);
  return s;
}

} // namespace qwave
