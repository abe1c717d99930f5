#pragma once

// Matrix-product-state representation of a chain of truncated bosonic modes.
//
// Site tensor storage: site[i][n] is the (left_bond x right_bond) matrix for
// physical occupation n. Boundary bonds have dimension 1. When ortho_center
// = c, tensors left of c are left-isometries and tensors right of c are
// right-isometries; the full state norm is then the Frobenius norm of the
// center tensor. ortho_center = -1 means "unknown".
//
// Row/column grouping used throughout when a tensor is flattened:
//   left fusion  (n, l) -> n * Dl + l   (physical index major)
//   right fusion (n, r) -> n * Dr + r

#include <algorithm>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "qwave/fock.hpp"
#include "qwave/types.hpp"

namespace qwave {

struct MpsState {
  int local_dim = 0;
  int center = -1;                       // orthogonality center, -1 = none
  double cumulative_discarded = 0.0;     // sum of dropped squared singulars
  std::vector<std::vector<MatC>> site;   // site[i][n]: Dl x Dr

  int n_sites() const { return int(site.size()); }

  // Bond i sits left of site i; there are n_sites()+1 bonds.
  int bond_dim(int b) const {
    if (b < n_sites()) return int(site[b][0].rows());
    return int(site[b - 1][0].cols());
  }

  std::vector<int> bond_dims() const {
    std::vector<int> out(n_sites() + 1);
    for (int b = 0; b <= n_sites(); ++b) out[b] = bond_dim(b);
    return out;
  }

  int max_bond_dim() const {
    int m = 1;
    for (int b = 0; b <= n_sites(); ++b) m = std::max(m, bond_dim(b));
    return m;
  }
};

namespace detail {

// Left-fused matrix of site tensor: (d*Dl) x Dr, row n*Dl + l.
inline MatC fuse_left(const std::vector<MatC>& t) {
  const int d = int(t.size());
  const int dl = int(t[0].rows()), dr = int(t[0].cols());
  MatC m(d * dl, dr);
  for (int n = 0; n < d; ++n) m.middleRows(n * dl, dl) = t[n];
  return m;
}

// Right-fused matrix: Dl x (d*Dr), column n*Dr + r.
inline MatC fuse_right(const std::vector<MatC>& t) {
  const int d = int(t.size());
  const int dl = int(t[0].rows()), dr = int(t[0].cols());
  MatC m(dl, d * dr);
  for (int n = 0; n < d; ++n) m.middleCols(n * dr, dr) = t[n];
  return m;
}

inline void unfuse_left(std::vector<MatC>& t, const MatC& m, int dl) {
  const int d = int(t.size());
  for (int n = 0; n < d; ++n) t[n] = m.middleRows(n * dl, dl);
}

inline void unfuse_right(std::vector<MatC>& t, const MatC& m, int dr) {
  const int d = int(t.size());
  for (int n = 0; n < d; ++n) t[n] = m.middleCols(n * dr, dr);
}

// QR-based left-canonicalization of site k; the R factor is absorbed into
// site k+1 (which must exist).
inline void shift_center_right(MpsState& s, int k) {
  const int dl = int(s.site[k][0].rows());
  MatC m = fuse_left(s.site[k]);
  const int rank = int(std::min(m.rows(), m.cols()));
  Eigen::HouseholderQR<MatC> qr(m);
  MatC q = qr.householderQ() * MatC::Identity(m.rows(), rank);
  MatC r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  unfuse_left(s.site[k], q, dl);
  for (auto& b : s.site[k + 1]) b = (r * b).eval();
}

// LQ-based right-canonicalization of site k; the L factor is absorbed into
// site k-1.
inline void shift_center_left(MpsState& s, int k) {
  const int dr = int(s.site[k][0].cols());
  MatC m = fuse_right(s.site[k]);
  const int rank = int(std::min(m.rows(), m.cols()));
  Eigen::HouseholderQR<MatC> qr(m.adjoint());
  MatC q = qr.householderQ() * MatC::Identity(m.cols(), rank);
  MatC r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  unfuse_right(s.site[k], q.adjoint(), dr);
  MatC l = r.adjoint(); // Dl x rank
  for (auto& b : s.site[k - 1]) b = (b * l).eval();
}

} // namespace detail

// Move the orthogonality center to `target`.
inline void canonicalize(MpsState& s, int target) {
  if (target < 0 || target >= s.n_sites())
    throw std::out_of_range("canonicalize: target site out of range");
  if (s.center == -1) {
    for (int k = 0; k < target; ++k) detail::shift_center_right(s, k);
    for (int k = s.n_sites() - 1; k > target; --k)
      detail::shift_center_left(s, k);
  } else if (s.center < target) {
    for (int k = s.center; k < target; ++k) detail::shift_center_right(s, k);
  } else {
    for (int k = s.center; k > target; --k) detail::shift_center_left(s, k);
  }
  s.center = target;
}

inline double norm(const MpsState& s) {
  if (s.center >= 0) {
    double n2 = 0.0;
    for (const auto& b : s.site[s.center]) n2 += b.squaredNorm();
    return std::sqrt(n2);
  }
  // Full transfer contraction <psi|psi>.
  MatC t = MatC::Ones(1, 1);
  for (const auto& tens : s.site) {
    MatC next = MatC::Zero(tens[0].cols(), tens[0].cols());
    for (const auto& b : tens) next += b.adjoint() * t * b;
    t = next;
  }
  return std::sqrt(std::abs(t(0, 0).real()));
}

inline void normalize(MpsState& s) {
  if (s.center < 0) canonicalize(s, 0);
  const double n = norm(s);
  if (n <= 0.0 || !std::isfinite(n))
    throw std::runtime_error("normalize: state has zero or non-finite norm");
  for (auto& b : s.site[s.center]) b /= n;
}

// |0...0>, all bond dims 1.
inline MpsState vacuum_state(int n_sites, int local_dim) {
  if (n_sites < 1) throw std::invalid_argument("vacuum_state: n_sites < 1");
  if (local_dim < 2) throw std::invalid_argument("vacuum_state: local_dim < 2");
  MpsState s;
  s.local_dim = local_dim;
  s.site.resize(n_sites);
  for (auto& t : s.site) {
    t.assign(local_dim, MatC::Zero(1, 1));
    t[0](0, 0) = 1.0;
  }
  s.center = 0;
  return s;
}

// Product state from per-site Fock amplitude vectors (each renormalized).
inline MpsState product_state(const std::vector<VecC>& amps, int local_dim) {
  if (amps.empty()) throw std::invalid_argument("product_state: empty input");
  MpsState s;
  s.local_dim = local_dim;
  s.site.resize(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (int(amps[i].size()) != local_dim)
      throw std::invalid_argument("product_state: amplitude length mismatch");
    VecC v = amps[i] / amps[i].norm();
    s.site[i].assign(local_dim, MatC::Zero(1, 1));
    for (int n = 0; n < local_dim; ++n) s.site[i][n](0, 0) = v(n);
  }
  s.center = 0;
  return s;
}

// Product of truncated coherent states. Per-site truncated-tail weight above
// 1e-6 is reported as a warning; above 1e-2 the builder refuses (the cutoff
// bias would dominate the physics).
inline MpsState coherent_product_state(const std::vector<cxd>& alphas,
                                       int local_dim,
                                       double* max_tail_weight = nullptr) {
  if (alphas.empty())
    throw std::invalid_argument("coherent_product_state: no amplitudes");
  std::vector<VecC> amps;
  amps.reserve(alphas.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    auto c = coherent_amplitudes(alphas[i], local_dim);
    worst = std::max(worst, c.tail_weight);
    if (c.tail_weight > 1e-2)
      throw std::invalid_argument(
          "coherent_product_state: truncated-tail weight " +
          std::to_string(c.tail_weight) + " at site " + std::to_string(i) +
          " exceeds 1e-2; raise local_dim");
    if (c.tail_weight > 1e-6)
      std::cerr << "[qwave] warning: coherent tail weight " << c.tail_weight
                << " at site " << i << " (local_dim " << local_dim << ")\n";
    amps.push_back(c.amps);
  }
  if (max_tail_weight) *max_tail_weight = worst;
  return product_state(amps, local_dim);
}

// One photon distributed over the chain with amplitude profile f (unit norm):
// sum_i f_i a_i^dag |vac>. Bond dimension 2.
inline MpsState single_photon_state(const VecC& profile, int local_dim) {
  const int n = int(profile.size());
  if (n < 1) throw std::invalid_argument("single_photon_state: empty profile");
  if (local_dim < 2)
    throw std::invalid_argument("single_photon_state: local_dim < 2");
  VecC f = profile / profile.norm();
  MpsState s;
  s.local_dim = local_dim;
  s.site.resize(n);
  if (n == 1) {
    s.site[0].assign(local_dim, MatC::Zero(1, 1));
    s.site[0][1](0, 0) = f(0);
    s.center = 0;
    return s;
  }
  for (int i = 0; i < n; ++i) {
    const int dl = (i == 0) ? 1 : 2;
    const int dr = (i == n - 1) ? 1 : 2;
    s.site[i].assign(local_dim, MatC::Zero(dl, dr));
    // Bond state 0: photon not yet placed; bond state 1: photon placed.
    if (i == 0) {
      s.site[i][0](0, 0) = 1.0;
      s.site[i][1](0, 1) = f(i);
    } else if (i == n - 1) {
      s.site[i][0](1, 0) = 1.0;
      s.site[i][1](0, 0) = f(i);
    } else {
      s.site[i][0](0, 0) = 1.0;
      s.site[i][0](1, 1) = 1.0;
      s.site[i][1](0, 1) = f(i);
    }
  }
  s.center = -1;
  return s;
}

// Canonical-form diagnostics (test support).
inline double left_isometry_defect(const MpsState& s, int k) {
  MatC m = detail::fuse_left(s.site[k]);
  return (m.adjoint() * m - MatC::Identity(m.cols(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}

inline double right_isometry_defect(const MpsState& s, int k) {
  MatC m = detail::fuse_right(s.site[k]);
  return (m * m.adjoint() - MatC::Identity(m.rows(), m.rows()))
      .cwiseAbs()
      .maxCoeff();
}

inline double canonical_form_defect(const MpsState& s) {
  if (s.center < 0) return std::numeric_limits<double>::quiet_NaN();
  double worst = 0.0;
  for (int k = 0; k < s.center; ++k)
    worst = std::max(worst, left_isometry_defect(s, k));
  for (int k = s.center + 1; k < s.n_sites(); ++k)
    worst = std::max(worst, right_isometry_defect(s, k));
  return worst;
}

} // namespace qwave
