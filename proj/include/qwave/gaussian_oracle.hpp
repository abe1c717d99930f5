#pragma once

// First/second-moment propagation for linear (g = 0 or epsilon = 0) lattice
// dynamics: exact in the Gaussian regime, used as an independent reference.

#include <unsupported/Eigen/MatrixFunctions>

#include "qwave/models.hpp"

namespace qwave {

struct MomentState {
  VecC mean;        // <a_i>
  MatC normal;      // <a_i^dag a_j>
  MatC anomalous;   // <a_i a_j>
};

inline MomentState coherent_moments(const std::vector<cxd>& alphas) {
  const int n = int(alphas.size());
  MomentState m;
  m.mean.resize(n);
  for (int i = 0; i < n; ++i) m.mean(i) = alphas[i];
  m.normal = m.mean.conjugate() * m.mean.transpose();
  m.anomalous = m.mean * m.mean.transpose();
  return m;
}

// Single-particle mode matrix of the Kerr lattice kinetic term
// (tridiagonal: 2J on the diagonal, -J off it).
inline MatC kerr_mode_matrix(const KerrWaveguideModel& m) {
  MatC h = MatC::Zero(m.n_bins, m.n_bins);
  const double j = m.hop_j();
  for (int i = 0; i < m.n_bins; ++i) {
    h(i, i) = 2.0 * j;
    if (i + 1 < m.n_bins) h(i, i + 1) = h(i + 1, i) = -j;
  }
  return h;
}

// Heisenberg propagation a(t) = V a with V = exp(-i M t); means transform as
// mean -> V mean, <a^dag a> -> conj(V) <a^dag a> V^T, <aa> -> V <aa> V^T.
// Uniform loss kappa multiplies V by e^{-kappa t / 2}.
inline MomentState gaussian_moments_evolve(const KerrWaveguideModel& m,
                                           const MomentState& in, double t) {
  m.validate();
  if (m.g_kerr != 0.0)
    throw std::invalid_argument(
        "gaussian_moments_evolve: nonlinear model (g_kerr != 0)");
  MatC v = (-iu * t * kerr_mode_matrix(m)).exp();
  v *= std::exp(-0.5 * m.kappa * t);
  MomentState out;
  out.mean = v * in.mean;
  out.normal = v.conjugate() * in.normal * v.transpose();
  out.anomalous = v * in.anomalous * v.transpose();
  return out;
}

} // namespace qwave
