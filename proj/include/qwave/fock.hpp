#pragma once

// Truncated-Fock single-mode and two-mode operator builders.
//
// Conventions (fixed project-wide):
//   |n> indexed 0..d-1, a|n> = sqrt(n)|n-1>, zero-padded at the cutoff
//   (no reflecting boundary).
//   Two-mode product space |n1,n2> flattened as n1*d2 + n2 (left mode major),
//   matching kron(A1, A2).
//   Beamsplitter: U = exp[theta (e^{i phi} a^dag b - e^{-i phi} a b^dag)],
//   a = left mode, b = right mode.

#include <cmath>
#include <vector>

#include "qwave/types.hpp"

namespace qwave {

inline MatC identity_op(int d) { return MatC::Identity(d, d); }

inline MatC annihilation_op(int d) {
  MatC a = MatC::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline MatC number_op(int d) {
  MatC n = MatC::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return n;
}

inline MatC parity_op(int d) {
  MatC p = MatC::Zero(d, d);
  for (int k = 0; k < d; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return p;
}

// e^{i phi n}, diagonal.
inline MatC phase_shifter_op(int d, double phi) {
  MatC u = MatC::Zero(d, d);
  for (int k = 0; k < d; ++k) u(k, k) = std::exp(iu * (phi * k));
  return u;
}

inline MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(-i t H) for Hermitian H, via eigendecomposition (exactly unitary up to
// the eigensolver's accuracy).
inline MatC expi_hermitian(const MatC& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expi_hermitian: eigensolver failed");
  VecC phases(h.rows());
  for (int k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(-iu * (t * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// exp(K) for anti-Hermitian K (writes K = -i H with H = iK Hermitian).
inline MatC exp_antihermitian(const MatC& k) {
  return expi_hermitian(iu * k, 1.0);
}

// exp(g a^dag b - conj(g) a b^dag) on the truncated two-mode space (d1, d2).
// The generator is block diagonal in total photon number N = n1 + n2; each
// block is exponentiated exactly, so the gate is unitary and conserves N
// exactly even at the cutoff.
inline MatC two_mode_mixer_gate(int d1, int d2, cxd g) {
  MatC u = MatC::Zero(d1 * d2, d1 * d2);
  const int n_max = (d1 - 1) + (d2 - 1);
  for (int N = 0; N <= n_max; ++N) {
    const int n1_lo = std::max(0, N - (d2 - 1));
    const int n1_hi = std::min(d1 - 1, N);
    const int m = n1_hi - n1_lo + 1;
    // H = i K restricted to the block, tridiagonal.
    MatC h = MatC::Zero(m, m);
    for (int r = 0; r + 1 < m; ++r) {
      const int n1 = n1_lo + r;       // a^dag b : (n1, n2) -> (n1+1, n2-1)
      const int n2 = N - n1;
      const double amp = std::sqrt(double(n1 + 1) * double(n2));
      h(r + 1, r) = iu * g * amp;     // i * g * amp
      h(r, r + 1) = std::conj(h(r + 1, r));
    }
    MatC ub = expi_hermitian(h, 1.0);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const int n1r = n1_lo + r, n2r = N - n1r;
        const int n1c = n1_lo + c, n2c = N - n1c;
        u(n1r * d2 + n2r, n1c * d2 + n2c) = ub(r, c);
      }
  }
  return u;
}

inline MatC beamsplitter_gate(int d1, int d2, double theta, double phi) {
  return two_mode_mixer_gate(d1, d2, theta * std::exp(iu * phi));
}

// Truncated displacement operator exp(alpha a^dag - conj(alpha) a).
inline MatC displacement_op(int d, cxd alpha) {
  const MatC a = annihilation_op(d);
  return exp_antihermitian(alpha * a.adjoint() - std::conj(alpha) * a);
}

// Fock amplitudes of |alpha> truncated to d levels; tail_weight is the
// probability mass beyond the cutoff before renormalization.
struct CoherentAmplitudes {
  VecC amps;          // unit norm after truncation
  double tail_weight;
};

inline CoherentAmplitudes coherent_amplitudes(cxd alpha, int d) {
  VecC c(d);
  // c_n = alpha^n / sqrt(n!) * e^{-|alpha|^2/2}, built recursively.
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < d; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
  const double kept = c.squaredNorm();
  CoherentAmplitudes out;
  out.tail_weight = std::max(0.0, 1.0 - kept);
  out.amps = c / std::sqrt(kept);
  return out;
}

inline bool is_unitary(const MatC& u, double tol = 1e-10) {
  return (u.adjoint() * u - MatC::Identity(u.cols(), u.cols()))
             .cwiseAbs()
             .maxCoeff() < tol;
}

inline bool is_hermitian(const MatC& h, double tol = 1e-10) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() < tol;
}

} // namespace qwave
