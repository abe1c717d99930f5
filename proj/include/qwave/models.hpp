#pragma once

// Discretized waveguide Hamiltonians and their Trotter gate layers.
//
// Kinetic term: central second difference of -(beta2/2) d^2/dx^2 gives
//   H_kin = sum_i [ -J (a_i^dag a_{i+1} + h.c.) + 2 J n_i ],  J = beta2/(2 dx^2).
// The diagonal 2J n_i part is merged into the on-site gate so the hopping
// gate is a pure two-mode mixer and shares the demux gate machinery.
//
// Units: hbar = 1; space and time in soliton units (length x0, time
// x0^2/beta2). The paper-style attractive/solitonic case has g_kerr < 0.

#include "qwave/mps_ops.hpp"

namespace qwave {

struct KerrWaveguideModel {
  int n_bins = 2;
  double dx = 1.0;
  double beta2 = 1.0;   // group-velocity dispersion
  double g_kerr = 0.0;  // quartic strength, negative = attractive
  double kappa = 0.0;   // per-bin loss rate
  int local_dim = 2;    // Fock cutoff per bin

  double hop_j() const { return beta2 / (2.0 * dx * dx); }

  void validate() const {
    if (n_bins < 1) throw std::invalid_argument("Kerr model: n_bins < 1");
    if (dx <= 0.0) throw std::invalid_argument("Kerr model: dx <= 0");
    if (kappa < 0.0) throw std::invalid_argument("Kerr model: kappa < 0");
    if (local_dim < 2) throw std::invalid_argument("Kerr model: local_dim < 2");
    if (!std::isfinite(beta2) || !std::isfinite(g_kerr))
      throw std::invalid_argument("Kerr model: non-finite coefficient");
  }

  int site_dim() const { return local_dim; }

  // (g/2) n(n-1) + 2 J n, diagonal.
  VecR onsite_energies() const {
    VecR e(local_dim);
    for (int n = 0; n < local_dim; ++n)
      e(n) = 0.5 * g_kerr * n * (n - 1.0) + 2.0 * hop_j() * n;
    return e;
  }

  MatC onsite_hamiltonian() const {
    return VecC(onsite_energies().cast<cxd>()).asDiagonal();
  }

  MatC bond_hamiltonian() const {
    const MatC a = annihilation_op(local_dim);
    return -hop_j() * (kron(a.adjoint(), a) + kron(a, a.adjoint()));
  }

  // Jump operator for loss unraveling: a (the sqrt(kappa) factor is applied
  // by the trajectory driver).
  MatC site_annihilation() const { return annihilation_op(local_dim); }
};

inline LocalOperator kerr_onsite_gate(const KerrWaveguideModel& m, double dt) {
  m.validate();
  if (!std::isfinite(dt)) throw std::invalid_argument("kerr_onsite_gate: dt");
  const VecR e = m.onsite_energies();
  MatC g = MatC::Zero(m.local_dim, m.local_dim);
  for (int n = 0; n < m.local_dim; ++n) g(n, n) = std::exp(-iu * (e(n) * dt));
  return LocalOperator(std::move(g), true);
}

inline TwoSiteOperator kerr_hopping_gate(const KerrWaveguideModel& m,
                                         double dt) {
  m.validate();
  if (!std::isfinite(dt)) throw std::invalid_argument("kerr_hopping_gate: dt");
  // exp(-i H_hop dt) with H_hop = -J(a^dag b + a b^dag) is the two-mode
  // mixer with coupling g = i J dt.
  MatC u = two_mode_mixer_gate(m.local_dim, m.local_dim,
                               cxd(0.0, m.hop_j() * dt));
  return TwoSiteOperator(std::move(u), m.local_dim, m.local_dim, true);
}

struct Chi2WaveguideModel {
  int n_bins = 2;
  double dx = 1.0;
  double signal_beta2 = 2.0;
  double pump_beta2 = 0.0;  // co-moving heavy-pump frame by default
  double epsilon = 0.0;     // three-wave coupling strength
  double xi_mismatch = 0.0; // pump energy above the signal band bottom
  int signal_dim = 3;
  int pump_dim = 2;

  double signal_j() const { return signal_beta2 / (2.0 * dx * dx); }
  double pump_j() const { return pump_beta2 / (2.0 * dx * dx); }
  int site_dim() const { return signal_dim * pump_dim; }

  void validate() const {
    if (n_bins < 1) throw std::invalid_argument("Chi2 model: n_bins < 1");
    if (dx <= 0.0) throw std::invalid_argument("Chi2 model: dx <= 0");
    if (signal_dim < 3)
      throw std::invalid_argument("Chi2 model: signal_dim < 3");
    if (pump_dim < 2) throw std::invalid_argument("Chi2 model: pump_dim < 2");
    if (!std::isfinite(epsilon) || !std::isfinite(xi_mismatch))
      throw std::invalid_argument("Chi2 model: non-finite coefficient");
  }

  // Per-bin local space: signal Fock (x) pump Fock, |n_s,n_p> = n_s*d_p + n_p.
  MatC onsite_hamiltonian() const {
    const MatC a = annihilation_op(signal_dim);
    const MatC b = annihilation_op(pump_dim);
    const MatC is = identity_op(signal_dim);
    const MatC ip = identity_op(pump_dim);
    MatC h = 0.5 * epsilon *
             (kron(a.adjoint() * a.adjoint(), b) + kron(a * a, b.adjoint()));
    h += xi_mismatch * kron(is, number_op(pump_dim));
    h += 2.0 * signal_j() * kron(number_op(signal_dim), ip);
    h += 2.0 * pump_j() * kron(is, number_op(pump_dim));
    return h;
  }

  MatC bond_hamiltonian() const {
    const MatC as = kron(annihilation_op(signal_dim), identity_op(pump_dim));
    const MatC bp = kron(identity_op(signal_dim), annihilation_op(pump_dim));
    MatC h = -signal_j() * (kron(as.adjoint(), as) + kron(as, as.adjoint()));
    h += -pump_j() * (kron(bp.adjoint(), bp) + kron(bp, bp.adjoint()));
    return h;
  }

  // Manley-Rowe charge n_s + 2 n_p on one bin.
  MatC charge_op() const {
    return kron(number_op(signal_dim), identity_op(pump_dim)) +
           2.0 * kron(identity_op(signal_dim), number_op(pump_dim));
  }

  MatC site_annihilation() const {
    return kron(annihilation_op(signal_dim), identity_op(pump_dim));
  }
};

inline LocalOperator chi2_local_gate(const Chi2WaveguideModel& m, double dt) {
  m.validate();
  return LocalOperator(expi_hermitian(m.onsite_hamiltonian(), dt), true);
}

inline TwoSiteOperator chi2_bond_gate(const Chi2WaveguideModel& m, double dt) {
  m.validate();
  return TwoSiteOperator(expi_hermitian(m.bond_hamiltonian(), dt),
                         m.site_dim(), m.site_dim(), true);
}

// Uniform gate compilation interface used by the Trotter scheduler.
inline LocalOperator onsite_gate(const KerrWaveguideModel& m, double dt) {
  return kerr_onsite_gate(m, dt);
}
inline TwoSiteOperator bond_gate(const KerrWaveguideModel& m, double dt) {
  return kerr_hopping_gate(m, dt);
}
inline LocalOperator onsite_gate(const Chi2WaveguideModel& m, double dt) {
  return chi2_local_gate(m, dt);
}
inline TwoSiteOperator bond_gate(const Chi2WaveguideModel& m, double dt) {
  return chi2_bond_gate(m, dt);
}

enum class LayerKind { OnSite, EvenBonds, OddBonds };

struct GateLayer {
  LayerKind kind;
  LocalOperator one;
  TwoSiteOperator two;
};

struct GateSchedule {
  std::vector<GateLayer> layers; // applied in order, once per step
  double dt = 0.0;
  int order = 2;
};

// Lie-Trotter (order 1) or Strang (order 2) step decomposition into even-bond,
// odd-bond and on-site layers. The order-2 schedule is palindromic, so the
// schedule built with -dt is its exact inverse.
template <class Model>
GateSchedule trotter_layers(const Model& m, double dt, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("trotter_layers: order must be 1 or 2");
  GateSchedule s;
  s.dt = dt;
  s.order = order;
  const bool has_bonds = m.n_bins > 1;
  auto onsite = [&](double t) {
    return GateLayer{LayerKind::OnSite, onsite_gate(m, t), {}};
  };
  auto even = [&](double t) {
    return GateLayer{LayerKind::EvenBonds, {}, bond_gate(m, t)};
  };
  auto odd = [&](double t) {
    return GateLayer{LayerKind::OddBonds, {}, bond_gate(m, t)};
  };
  if (order == 1) {
    if (has_bonds) {
      s.layers.push_back(even(dt));
      if (m.n_bins > 2) s.layers.push_back(odd(dt));
    }
    s.layers.push_back(onsite(dt));
  } else {
    s.layers.push_back(onsite(dt / 2));
    if (has_bonds) {
      if (m.n_bins > 2) {
        s.layers.push_back(even(dt / 2));
        s.layers.push_back(odd(dt));
        s.layers.push_back(even(dt / 2));
      } else {
        s.layers.push_back(even(dt));
      }
    }
    s.layers.push_back(onsite(dt / 2));
  }
  return s;
}

// alpha(x) = sqrt(nbar) sech((x - x_c)/x0) sampled on the bins, in units of
// the bin index. The matching attractive Kerr strength for a classical
// soliton of width x0 is g = -beta2 / (nbar x0^2).
inline std::vector<cxd> sech_profile(int n_bins, double nbar, double x0_bins,
                                     double center_bin) {
  std::vector<cxd> out(n_bins);
  for (int i = 0; i < n_bins; ++i)
    out[i] = std::sqrt(nbar) / std::cosh((i - center_bin) / x0_bins);
  return out;
}

inline double soliton_g(double beta2, double nbar, double x0) {
  return -beta2 / (nbar * x0 * x0);
}

// Soliton unit conversions (hbar = 1): length unit x0, time unit x0^2/beta2.
struct SolitonUnits {
  double x0 = 1.0;
  double beta2 = 1.0;
  double time_unit() const { return x0 * x0 / beta2; }
  double to_physical_time(double t_norm) const { return t_norm * time_unit(); }
  double to_normalized_time(double t_phys) const { return t_phys / time_unit(); }
};

} // namespace qwave
