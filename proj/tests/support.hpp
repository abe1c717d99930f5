#pragma once

// Shared helpers for the test suites.

#include <random>

#include "qwave/types.hpp"

namespace qwave::test {

inline std::mt19937_64 fixed_rng(std::uint64_t seed = 0xC0FFEE) {
  return std::mt19937_64(seed);
}

inline cxd random_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

inline VecC random_unit_vector(std::mt19937_64& rng, int n) {
  VecC v(n);
  for (int i = 0; i < n; ++i) v(i) = random_gaussian(rng);
  return v / v.norm();
}

// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline MatC random_unitary(std::mt19937_64& rng, int n) {
  MatC g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = random_gaussian(rng);
  Eigen::HouseholderQR<MatC> qr(g);
  MatC q = qr.householderQ() * MatC::Identity(n, n);
  MatC r = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

inline MatC random_hermitian(std::mt19937_64& rng, int n) {
  MatC g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = random_gaussian(rng);
  return 0.5 * (g + g.adjoint());
}

} // namespace qwave::test
