#pragma once

// Gate application and SVD truncation for MpsState.

#include <Eigen/SVD>

#include "qwave/mps.hpp"

namespace qwave {

struct TruncationPolicy {
  int max_bond_dim = 1 << 20;  // chi_max
  double svd_cutoff = 0.0;     // eps: discardable squared-weight fraction per gate
  bool renormalize = true;

  void validate() const {
    if (max_bond_dim < 1)
      throw std::invalid_argument("TruncationPolicy: max_bond_dim < 1");
    if (svd_cutoff < 0.0 || svd_cutoff >= 1.0)
      throw std::invalid_argument("TruncationPolicy: svd_cutoff outside [0,1)");
  }
};

struct LocalOperator {
  MatC mat;
  bool unitary = false;

  LocalOperator() = default;
  LocalOperator(MatC m, bool u) : mat(std::move(m)), unitary(u) {
    if (mat.rows() != mat.cols())
      throw std::invalid_argument("LocalOperator: non-square matrix");
    if (unitary && !is_unitary(mat))
      throw std::invalid_argument("LocalOperator: flagged unitary but is not");
  }
  int dim() const { return int(mat.rows()); }
};

struct TwoSiteOperator {
  MatC mat;      // (d1*d2) x (d1*d2), basis |n1,n2> = n1*d2 + n2
  int d1 = 0, d2 = 0;
  bool unitary = false;

  TwoSiteOperator() = default;
  TwoSiteOperator(MatC m, int dim1, int dim2, bool u)
      : mat(std::move(m)), d1(dim1), d2(dim2), unitary(u) {
    if (mat.rows() != mat.cols() || mat.rows() != std::int64_t(d1) * d2)
      throw std::invalid_argument("TwoSiteOperator: shape mismatch");
    if (unitary && !is_unitary(mat))
      throw std::invalid_argument("TwoSiteOperator: flagged unitary but is not");
  }
};

namespace detail {

inline Eigen::BDCSVD<MatC> thin_svd(const MatC& m) {
  return Eigen::BDCSVD<MatC>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

// Decide how many singular values to keep: drop the smallest while the
// dropped squared sum stays within svd_cutoff * (total squared sum), then
// clamp to max_bond_dim. Always keeps at least one.
inline int truncation_rank(const VecR& sv, const TruncationPolicy& pol,
                           double* dropped_weight) {
  const int n = int(sv.size());
  const double total = sv.squaredNorm();
  double budget = pol.svd_cutoff * total;
  int keep = n;
  double dropped = 0.0;
  while (keep > 1) {
    const double w = sv(keep - 1) * sv(keep - 1);
    if (dropped + w > budget) break;
    dropped += w;
    --keep;
  }
  while (keep > pol.max_bond_dim) {
    --keep;
    dropped += sv(keep) * sv(keep);
  }
  if (dropped_weight) *dropped_weight = dropped;
  return std::max(keep, 1);
}

// Split the two-site matrix M (rows (n1,l) = n1*Dl+l, cols (n2,r) = n2*Dr+r)
// back into site tensors at `left`, truncating per policy. Returns the
// dropped squared singular weight (absolute, in the state's normalization).
inline double split_two_site(MpsState& s, const MatC& m, int left, int dl,
                             int dr, const TruncationPolicy& pol) {
  auto svd = thin_svd(m);
  const VecR& sv = svd.singularValues();
  if (!sv.allFinite())
    throw std::runtime_error(
        "apply_two_site: non-finite singular values (numerical blow-up)");
  double dropped = 0.0;
  const int keep = truncation_rank(sv, pol, &dropped);
  VecR kept = sv.head(keep);
  if (pol.renormalize && dropped > 0.0) {
    const double total = sv.squaredNorm();
    kept *= std::sqrt(total / kept.squaredNorm());
  }
  const int d = s.local_dim;
  MatC u = svd.matrixU().leftCols(keep);
  MatC sv_t = kept.asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  for (int n = 0; n < d; ++n) {
    s.site[left][n] = u.middleRows(n * dl, dl);
    s.site[left + 1][n] = sv_t.middleCols(n * dr, dr);
  }
  s.center = left + 1;
  s.cumulative_discarded += dropped;
  return dropped;
}

} // namespace detail

// Contract a one-site operator into the tensor at `site`. Bond dimensions are
// unchanged. A unitary op preserves the canonical structure; a non-unitary op
// invalidates it unless it acts at the center.
inline void apply_one_site(MpsState& s, const LocalOperator& op, int site) {
  if (site < 0 || site >= s.n_sites())
    throw std::out_of_range("apply_one_site: site out of range");
  if (op.dim() != s.local_dim)
    throw std::invalid_argument("apply_one_site: operator shape mismatch");
  const int d = s.local_dim;
  std::vector<MatC> out(d);
  for (int m = 0; m < d; ++m) {
    out[m] = MatC::Zero(s.site[site][0].rows(), s.site[site][0].cols());
    for (int n = 0; n < d; ++n) {
      const cxd w = op.mat(m, n);
      if (w != 0.0) out[m] += w * s.site[site][n];
    }
  }
  s.site[site] = std::move(out);
  if (!op.unitary && s.center != site) s.center = -1;
}

namespace detail {

// Build the gate-applied two-site matrix M for sites (left, left+1).
// `gate` has dimension dg^2 with dg >= d; physical indices beyond d enter as
// zero amplitude and components ending above the cutoff are projected out,
// with the lost squared norm reported in *leaked.
inline MatC gated_two_site_matrix(MpsState& s, const MatC& gate, int dg,
                                  int left, double* leaked) {
  const int d = s.local_dim;
  const auto& a = s.site[left];
  const auto& b = s.site[left + 1];
  const int dl = int(a[0].rows()), dr = int(b[0].cols());
  // Theta rows (n1*d + n2), cols (l*Dr + r).
  MatC theta(d * d, dl * dr);
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2) {
      MatC blk = a[n1] * b[n2];
      for (int l = 0; l < dl; ++l)
        theta.row(n1 * d + n2).segment(l * dr, dr) = blk.row(l);
    }
  MatC theta2;
  if (dg == d) {
    theta2 = gate * theta;
    if (leaked) *leaked = 0.0;
  } else {
    MatC big = MatC::Zero(dg * dg, dl * dr);
    for (int n1 = 0; n1 < d; ++n1)
      for (int n2 = 0; n2 < d; ++n2)
        big.row(n1 * dg + n2) = theta.row(n1 * d + n2);
    big = (gate * big).eval();
    theta2.resize(d * d, dl * dr);
    double lost = 0.0;
    for (int n1 = 0; n1 < dg; ++n1)
      for (int n2 = 0; n2 < dg; ++n2) {
        if (n1 < d && n2 < d)
          theta2.row(n1 * d + n2) = big.row(n1 * dg + n2);
        else
          lost += big.row(n1 * dg + n2).squaredNorm();
      }
    if (leaked) *leaked = lost;
  }
  // Regroup to M(n1*Dl + l, n2*Dr + r).
  MatC m(d * dl, d * dr);
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      for (int l = 0; l < dl; ++l)
        m.row(n1 * dl + l).segment(n2 * dr, dr) =
            theta2.row(n1 * d + n2).segment(l * dr, dr);
  return m;
}

} // namespace detail

// Apply a two-site gate at (left, left+1); the orthogonality center is moved
// there first. Returns the discarded squared singular weight.
inline double apply_two_site(MpsState& s, const TwoSiteOperator& op, int left,
                             const TruncationPolicy& pol) {
  pol.validate();
  if (left < 0 || left + 1 >= s.n_sites())
    throw std::out_of_range("apply_two_site: bond out of range");
  if (op.d1 != s.local_dim || op.d2 != s.local_dim)
    throw std::invalid_argument("apply_two_site: operator shape mismatch");
  canonicalize(s, left);
  const int dl = int(s.site[left][0].rows());
  const int dr = int(s.site[left + 1][0].cols());
  MatC m = detail::gated_two_site_matrix(s, op.mat, s.local_dim, left, nullptr);
  return detail::split_two_site(s, m, left, dl, dr, pol);
}

// Two-site gate built on an enlarged local space (dim d_big per site), with
// projection back to the state's cutoff afterwards. The projected-out norm
// ("leakage") is returned; this is how Fock-cutoff loss of a beamsplitter is
// measured and accounted.
struct PaddedGateResult {
  double discarded = 0.0;
  double leaked = 0.0;
};

inline PaddedGateResult apply_two_site_padded(MpsState& s, const MatC& big_gate,
                                              int d_big, int left,
                                              const TruncationPolicy& pol) {
  pol.validate();
  if (left < 0 || left + 1 >= s.n_sites())
    throw std::out_of_range("apply_two_site_padded: bond out of range");
  if (d_big < s.local_dim ||
      big_gate.rows() != std::int64_t(d_big) * d_big ||
      big_gate.rows() != big_gate.cols())
    throw std::invalid_argument("apply_two_site_padded: gate shape mismatch");
  canonicalize(s, left);
  const int dl = int(s.site[left][0].rows());
  const int dr = int(s.site[left + 1][0].cols());
  PaddedGateResult res;
  MatC m = detail::gated_two_site_matrix(s, big_gate, d_big, left, &res.leaked);
  res.discarded = detail::split_two_site(s, m, left, dl, dr, pol);
  return res;
}

} // namespace qwave
