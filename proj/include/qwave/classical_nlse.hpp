#pragma once

// Mean-field (classical) reference for the Kerr lattice:
//   i da_i/dt = -J (a_{i+1} + a_{i-1}) + 2 J a_i + g |a_i|^2 a_i
// integrated by Strang split-stepping with the linear part applied exactly
// through the eigendecomposition of the hopping matrix.

#include "qwave/gaussian_oracle.hpp"

namespace qwave {

inline VecC classical_split_step(const KerrWaveguideModel& m, VecC field,
                                 double t_total, double dt) {
  m.validate();
  const auto steps = std::llround(t_total / dt);
  if (steps < 1 || std::abs(double(steps) * dt - t_total) >
                       1e-9 * std::max(1.0, t_total))
    throw std::invalid_argument("classical_split_step: T/dt not integral");
  Eigen::SelfAdjointEigenSolver<MatC> es(kerr_mode_matrix(m));
  VecC half_phases(m.n_bins);
  for (int k = 0; k < m.n_bins; ++k)
    half_phases(k) = std::exp(-iu * (0.5 * dt * es.eigenvalues()(k)));
  const MatC v = es.eigenvectors();
  auto half_kinetic = [&](VecC& a) {
    a = v * (half_phases.asDiagonal() * (v.adjoint() * a).eval()).eval();
  };
  for (std::int64_t s = 0; s < steps; ++s) {
    half_kinetic(field);
    for (int i = 0; i < m.n_bins; ++i)
      field(i) *= std::exp(-iu * (dt * m.g_kerr * std::norm(field(i))));
    half_kinetic(field);
  }
  return field;
}

// Intensity-weighted RMS width of a density profile, in bin units.
inline double rms_width(const VecR& density) {
  const double total = density.sum();
  if (total <= 0.0) return 0.0;
  double mean = 0.0;
  for (int i = 0; i < density.size(); ++i) mean += i * density(i);
  mean /= total;
  double var = 0.0;
  for (int i = 0; i < density.size(); ++i)
    var += (i - mean) * (i - mean) * density(i);
  return std::sqrt(var / total);
}

} // namespace qwave
