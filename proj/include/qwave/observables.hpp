#pragma once

// Observable extraction from an MpsState. Routines move the orthogonality
// center internally; that is a pure gauge change.

#include <Eigen/SVD>

#include "qwave/mps_ops.hpp"

namespace qwave {

// Reduced density matrix of one site: rho_{m,n} = sum_{l,r} A_m(l,r) conj(A_n(l,r)).
inline MatC reduced_density_matrix(MpsState& s, int site) {
  if (site < 0 || site >= s.n_sites())
    throw std::out_of_range("reduced_density_matrix: site out of range");
  canonicalize(s, site);
  const int d = s.local_dim;
  MatC rho(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n <= m; ++n) {
      rho(m, n) = (s.site[site][n].adjoint() * s.site[site][m]).trace();
      rho(n, m) = std::conj(rho(m, n));
    }
  return rho;
}

inline cxd expectation_local(MpsState& s, const LocalOperator& op, int site) {
  if (op.dim() != s.local_dim)
    throw std::invalid_argument("expectation_local: operator shape mismatch");
  MatC rho = reduced_density_matrix(s, site);
  return (rho * op.mat).trace();
}

// <a_i^dag a_j> via transfer contraction between the two sites.
inline cxd correlation(MpsState& s, int site_i, int site_j) {
  if (site_i < 0 || site_i >= s.n_sites() || site_j < 0 ||
      site_j >= s.n_sites())
    throw std::out_of_range("correlation: site out of range");
  const int d = s.local_dim;
  const MatC a = annihilation_op(d);
  if (site_i == site_j) {
    MatC rho = reduced_density_matrix(s, site_i);
    return (rho * number_op(d)).trace();
  }
  if (site_i > site_j) return std::conj(correlation(s, site_j, site_i));
  canonicalize(s, site_i);
  const MatC adag = a.adjoint();
  auto step = [&](const MatC& t, int k, const MatC& op) {
    MatC next = MatC::Zero(s.site[k][0].cols(), s.site[k][0].cols());
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const cxd w = op(m, n);
        if (w != 0.0) next += w * (s.site[k][m].adjoint() * t * s.site[k][n]);
      }
    return next;
  };
  MatC t = MatC::Identity(int(s.site[site_i][0].rows()),
                          int(s.site[site_i][0].rows()));
  t = step(t, site_i, adag);
  const MatC id = MatC::Identity(d, d);
  for (int k = site_i + 1; k < site_j; ++k) t = step(t, k, id);
  cxd val = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const cxd w = a(m, n);
      if (w != 0.0)
        val += w * (s.site[site_j][m].adjoint() * t * s.site[site_j][n]).trace();
    }
  return val;
}

// <n_i> for all sites, via a single left-to-right center sweep.
inline VecR number_density(MpsState& s) {
  const int n = s.n_sites(), d = s.local_dim;
  VecR dens(n);
  canonicalize(s, 0);
  for (int k = 0; k < n; ++k) {
    double nk = 0.0;
    for (int m = 1; m < d; ++m) nk += m * s.site[k][m].squaredNorm();
    dens(k) = nk;
    if (k + 1 < n) {
      detail::shift_center_right(s, k);
      s.center = k + 1;
    }
  }
  return dens;
}

// Schmidt spectrum at the bond between `cut` and `cut`+1 (squared singular
// values, normalized to unit sum).
inline VecR schmidt_spectrum(MpsState& s, int cut) {
  if (cut < 0 || cut + 1 >= s.n_sites())
    throw std::out_of_range("schmidt_spectrum: cut out of range");
  canonicalize(s, cut);
  MatC m = detail::fuse_left(s.site[cut]);
  Eigen::BDCSVD<MatC> svd(m);
  VecR p = svd.singularValues().array().square();
  return p / p.sum();
}

// Von Neumann entropy (base 2) of the Schmidt spectrum at `cut`.
inline double entanglement_entropy(MpsState& s, int cut) {
  VecR p = schmidt_spectrum(s, cut);
  double ent = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p(k) > 1e-300) ent -= p(k) * std::log2(p(k));
  return std::max(ent, 0.0);
}

// Entropies at all n-1 cuts via one sweep.
inline VecR entropy_profile(MpsState& s) {
  const int n = s.n_sites();
  VecR out(std::max(n - 1, 0));
  for (int cut = 0; cut + 1 < n; ++cut) out(cut) = entanglement_entropy(s, cut);
  return out;
}

// <a|b> via transfer-matrix contraction.
inline cxd inner_product(const MpsState& a, const MpsState& b) {
  if (a.n_sites() != b.n_sites() || a.local_dim != b.local_dim)
    throw std::invalid_argument("inner_product: shape mismatch");
  MatC t = MatC::Ones(1, 1);
  for (int k = 0; k < a.n_sites(); ++k) {
    MatC next = MatC::Zero(int(a.site[k][0].cols()), int(b.site[k][0].cols()));
    for (int n = 0; n < a.local_dim; ++n)
      next += a.site[k][n].adjoint() * t * b.site[k][n];
    t = next;
  }
  return t(0, 0);
}

inline double fidelity(const MpsState& a, const MpsState& b) {
  const double na = norm(a), nb = norm(b);
  return std::norm(inner_product(a, b)) / (na * na * nb * nb);
}

} // namespace qwave
