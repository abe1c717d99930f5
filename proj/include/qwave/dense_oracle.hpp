#pragma once

// Brute-force references: dense state vectors for tiny lattices, Krylov
// (Lanczos) exponential propagation, and a dense Lindblad integrator for the
// small lossy benchmarks.
//
// Dense basis ordering: site-major, Fock-minor. The basis index of
// |n_0 n_1 ... n_{B-1}> is sum_i n_i * d^{B-1-i} (site 0 most significant).

#include <Eigen/Sparse>

#include "qwave/mps_ops.hpp"

namespace qwave {

inline constexpr std::int64_t dense_dimension_cap = std::int64_t(1) << 24;

struct DenseState {
  VecC vec;
  int n_sites = 0;
  int local_dim = 0;
};

inline std::int64_t dense_dim(int n_sites, int local_dim) {
  std::int64_t dim = 1;
  for (int i = 0; i < n_sites; ++i) {
    dim *= local_dim;
    if (dim > dense_dimension_cap)
      throw std::invalid_argument("dense oracle: dimension cap 2^24 exceeded");
  }
  return dim;
}

// Exact contraction of the MPS into a full vector.
inline DenseState densify(const MpsState& s) {
  const int n = s.n_sites(), d = s.local_dim;
  const std::int64_t dim = dense_dim(n, d);
  // v rows indexed by the partial configuration, columns by the open bond.
  MatC v = MatC::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const int dr = int(s.site[k][0].cols());
    MatC next(v.rows() * d, dr);
    for (Eigen::Index p = 0; p < v.rows(); ++p)
      for (int m = 0; m < d; ++m)
        next.row(p * d + m) = v.row(p) * s.site[k][m];
    v = std::move(next);
  }
  DenseState out;
  out.n_sites = n;
  out.local_dim = d;
  out.vec = v.col(0);
  if (out.vec.size() != dim) throw std::logic_error("densify: dimension bug");
  return out;
}

// Dense application of a one-site operator at `site`.
inline void dense_apply_one_site(DenseState& s, const MatC& op, int site) {
  const int d = s.local_dim;
  std::int64_t right = 1;
  for (int k = site + 1; k < s.n_sites; ++k) right *= d;
  const std::int64_t outer = s.vec.size() / (right * d);
  VecC out = VecC::Zero(s.vec.size());
  for (std::int64_t o = 0; o < outer; ++o)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const cxd w = op(m, n);
        if (w == 0.0) continue;
        out.segment((o * d + m) * right, right) +=
            w * s.vec.segment((o * d + n) * right, right);
      }
  s.vec = std::move(out);
}

// Dense application of a two-site operator at (left, left+1), basis
// |n1,n2> = n1*d+n2 as in TwoSiteOperator.
inline void dense_apply_two_site(DenseState& s, const MatC& op, int left) {
  const int d = s.local_dim;
  std::int64_t right = 1;
  for (int k = left + 2; k < s.n_sites; ++k) right *= d;
  const std::int64_t outer = s.vec.size() / (right * d * d);
  VecC out = VecC::Zero(s.vec.size());
  for (std::int64_t o = 0; o < outer; ++o)
    for (int mm = 0; mm < d * d; ++mm)
      for (int nn = 0; nn < d * d; ++nn) {
        const cxd w = op(mm, nn);
        if (w == 0.0) continue;
        out.segment((o * d * d + mm) * right, right) +=
            w * s.vec.segment((o * d * d + nn) * right, right);
      }
  s.vec = std::move(out);
}

using SparseC = Eigen::SparseMatrix<cxd>;

// Assemble a lattice Hamiltonian from uniform on-site and bond terms.
inline SparseC assemble_lattice_hamiltonian(int n_sites, int d,
                                            const MatC& h_site,
                                            const MatC& h_bond) {
  const std::int64_t dim = dense_dim(n_sites, d);
  std::vector<Eigen::Triplet<cxd>> trip;
  auto scatter = [&](const MatC& op, int first_site, int n_op_sites) {
    std::int64_t right = 1;
    for (int k = first_site + n_op_sites; k < n_sites; ++k) right *= d;
    std::int64_t span = 1;
    for (int k = 0; k < n_op_sites; ++k) span *= d;
    const std::int64_t outer = dim / (right * span);
    for (std::int64_t o = 0; o < outer; ++o)
      for (int m = 0; m < span; ++m)
        for (int n = 0; n < span; ++n) {
          const cxd w = op(m, n);
          if (w == 0.0) continue;
          for (std::int64_t r = 0; r < right; ++r)
            trip.emplace_back((o * span + m) * right + r,
                              (o * span + n) * right + r, w);
        }
  };
  if (h_site.size() > 0)
    for (int i = 0; i < n_sites; ++i) scatter(h_site, i, 1);
  if (h_bond.size() > 0)
    for (int i = 0; i + 1 < n_sites; ++i) scatter(h_bond, i, 2);
  SparseC h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

namespace detail {

// One Lanczos step of exp(-i H t) v, with adaptive sub-stepping handled by
// the caller. Returns the propagated vector and an error estimate.
inline VecC lanczos_expm_step(const SparseC& h, const VecC& v, double t, int m,
                              double* err) {
  const int dim = int(v.size());
  m = std::min(m, dim);
  std::vector<VecC> basis;
  basis.reserve(m);
  MatR tri = MatR::Zero(m, m);
  const double beta0 = v.norm();
  basis.push_back(v / beta0);
  int k_used = m;
  for (int k = 0; k < m; ++k) {
    VecC w = h * basis[k];
    if (k > 0) w -= tri(k, k - 1) * basis[k - 1];
    const double alpha = (basis[k].dot(w)).real();
    tri(k, k) = alpha;
    w -= alpha * basis[k];
    // Full reorthogonalization keeps the basis clean for long steps.
    for (const auto& b : basis) w -= b.dot(w) * b;
    const double beta = w.norm();
    if (k + 1 < m) {
      tri(k + 1, k) = tri(k, k + 1) = beta;
      if (beta < 1e-14) {
        k_used = k + 1;
        break;
      }
      basis.push_back(w / beta);
    }
  }
  const MatR t_used = tri.topLeftCorner(k_used, k_used);
  Eigen::SelfAdjointEigenSolver<MatR> es(t_used);
  VecC phases(k_used);
  for (int k = 0; k < k_used; ++k)
    phases(k) = std::exp(-iu * (t * es.eigenvalues()(k)));
  // exp(-i T t) e_1 in the Krylov basis.
  VecC small = es.eigenvectors().cast<cxd>() *
               (phases.array() *
                es.eigenvectors().row(0).transpose().cast<cxd>().array())
                   .matrix();
  VecC out = VecC::Zero(dim);
  for (int k = 0; k < k_used; ++k) out += small(k) * basis[k];
  // Heuristic convergence estimate: magnitude of the last Krylov coefficient
  // (zero when the subspace is exact).
  if (err) *err = (k_used == dim) ? 0.0 : std::abs(small(k_used - 1));
  return beta0 * out;
}

} // namespace detail

// Krylov-subspace propagation of |psi> under H for time T with target
// accuracy ~1e-12 (adaptive sub-stepping on the residual estimate).
inline void exact_evolve(const SparseC& h, DenseState& s, double t_total,
                         int krylov_dim = 40, double tol = 1e-12) {
  if (t_total == 0.0) return;
  double done = 0.0;
  double dt = t_total;
  int guard = 0;
  while (done < std::abs(t_total) * (1.0 - 1e-15)) {
    const double step =
        std::min(std::abs(dt), std::abs(t_total) - done) * (t_total > 0 ? 1 : -1);
    double err = 0.0;
    VecC next = detail::lanczos_expm_step(h, s.vec, step, krylov_dim, &err);
    if (err > tol && std::abs(step) > 1e-8) {
      dt = std::abs(step) / 2;
      if (++guard > 200)
        throw std::runtime_error("exact_evolve: Krylov failed to converge");
      continue;
    }
    s.vec = std::move(next);
    done += std::abs(step);
  }
}

// Convenience wrapper: Hamiltonian given densely.
inline void exact_evolve(const MatC& h, DenseState& s, double t_total) {
  exact_evolve(SparseC(h.sparseView()), s, t_total);
}

inline VecR dense_number_density(const DenseState& s) {
  const int d = s.local_dim, n = s.n_sites;
  VecR out = VecR::Zero(n);
  for (std::int64_t idx = 0; idx < s.vec.size(); ++idx) {
    const double w = std::norm(s.vec(idx));
    if (w == 0.0) continue;
    std::int64_t rest = idx;
    for (int k = n - 1; k >= 0; --k) {
      out(k) += double(rest % d) * w;
      rest /= d;
    }
  }
  return out;
}

// Dense Lindblad evolution (RK4 over the master equation) with uniform jump
// operator sqrt(kappa) a on every site. Reference for the trajectory tests;
// dimensions are expected to be tiny.
inline MatC lindblad_evolve(const SparseC& h, const DenseState& rho0_state,
                            double kappa, double t_total, double dt) {
  const std::int64_t dim = rho0_state.vec.size();
  const int d = rho0_state.local_dim, n = rho0_state.n_sites;
  MatC rho = rho0_state.vec * rho0_state.vec.adjoint();
  // Per-site annihilation operators as dense matrices.
  std::vector<MatC> jump(n);
  {
    const MatC a1 = annihilation_op(d);
    for (int i = 0; i < n; ++i) {
      MatC op = MatC::Ones(1, 1);
      for (int k = 0; k < n; ++k)
        op = kron(op, k == i ? a1 : MatC::Identity(d, d)).eval();
      jump[i] = op;
    }
  }
  MatC hd = MatC(h);
  auto rhs = [&](const MatC& r) {
    MatC out = -iu * (hd * r - r * hd);
    for (const auto& a : jump) {
      MatC ar = a * r;
      out += kappa * (ar * a.adjoint() -
                      0.5 * (a.adjoint() * ar + r * a.adjoint() * a));
    }
    return out;
  };
  const int steps = int(std::llround(t_total / dt));
  if (std::abs(steps * dt - t_total) > 1e-9 * std::max(1.0, t_total))
    throw std::invalid_argument("lindblad_evolve: T/dt not integral");
  for (int s_i = 0; s_i < steps; ++s_i) {
    MatC k1 = rhs(rho);
    MatC k2 = rhs(rho + 0.5 * dt * k1);
    MatC k3 = rhs(rho + 0.5 * dt * k2);
    MatC k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  (void)dim;
  return rho;
}

// Site densities from a dense density matrix.
inline VecR lindblad_number_density(const MatC& rho, int n_sites, int d) {
  VecR out = VecR::Zero(n_sites);
  const std::int64_t dim = rho.rows();
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    const double w = rho(idx, idx).real();
    std::int64_t rest = idx;
    for (int k = n_sites - 1; k >= 0; --k) {
      out(k) += double(rest % d) * w;
      rest /= d;
    }
  }
  return out;
}

} // namespace qwave
