#pragma once

// Time evolution driver: applies Trotter schedules with truncation control,
// observable recording, and first-order quantum-trajectory loss unraveling.

#include <cstdint>
#include <map>

#include "qwave/models.hpp"
#include "qwave/observables.hpp"
#include "qwave/rng.hpp"

namespace qwave {

struct InvariantBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationBudgetExceeded : InvariantBreach {
  double cumulative;
  explicit TruncationBudgetExceeded(double c)
      : InvariantBreach("cumulative discarded weight " + std::to_string(c) +
                        " exceeded the configured budget"),
        cumulative(c) {}
};

struct NonFiniteState : InvariantBreach {
  using InvariantBreach::InvariantBreach;
};

struct EvolutionPlan {
  double total_time = 1.0;
  double dt = 0.01;
  int trotter_order = 2;
  TruncationPolicy policy;
  int record_every = 1;             // snapshot every k-th full step
  bool record_density = true;
  bool record_entropy = true;
  bool record_correlations = false;
  std::vector<int> rdm_sites;
  double discard_budget = 1e-3;     // hard abort threshold

  int n_steps() const {
    const auto n = std::llround(total_time / dt);
    return int(n);
  }

  void validate() const {
    if (total_time <= 0.0) throw std::invalid_argument("plan: total_time <= 0");
    if (dt <= 0.0) throw std::invalid_argument("plan: dt <= 0");
    const auto n = std::llround(total_time / dt);
    if (n < 1 || std::abs(double(n) * dt - total_time) >
                     1e-9 * std::max(1.0, total_time))
      throw std::invalid_argument("plan: total_time/dt is not an integer");
    if (record_every < 1) throw std::invalid_argument("plan: record_every < 1");
    policy.validate();
  }
};

struct Snapshot {
  double t = 0.0;
  double norm_value = 0.0;
  int max_bond = 1;
  double cum_discarded = 0.0;
  VecR density;
  VecR entropies;
  MatC correlations;          // <a_i^dag a_j>, if requested
  std::map<int, MatC> rdms;   // site -> reduced density matrix
};

struct JumpEvent {
  int trajectory = 0;
  int site = 0;
  double time = 0.0;
};

struct EvolutionRecord {
  std::vector<Snapshot> snapshots;
  std::vector<double> step_discarded; // one entry per step
  std::vector<int> step_max_bond;
  std::vector<JumpEvent> jumps;
};

namespace detail {

inline Snapshot take_snapshot(MpsState& s, const EvolutionPlan& plan,
                              double t) {
  Snapshot snap;
  snap.t = t;
  snap.norm_value = norm(s);
  snap.max_bond = s.max_bond_dim();
  snap.cum_discarded = s.cumulative_discarded;
  if (plan.record_density) snap.density = number_density(s);
  if (plan.record_entropy) snap.entropies = entropy_profile(s);
  if (plan.record_correlations) {
    const int n = s.n_sites();
    snap.correlations.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        snap.correlations(i, j) = correlation(s, i, j);
        snap.correlations(j, i) = std::conj(snap.correlations(i, j));
      }
  }
  for (int site : plan.rdm_sites)
    snap.rdms[site] = reduced_density_matrix(s, site);
  return snap;
}

// One full Trotter step; returns the discarded weight of the step.
inline double apply_schedule_step(MpsState& s, const GateSchedule& sched,
                                  const TruncationPolicy& pol) {
  double discarded = 0.0;
  const int n = s.n_sites();
  for (const auto& layer : sched.layers) {
    switch (layer.kind) {
      case LayerKind::OnSite:
        for (int k = 0; k < n; ++k) apply_one_site(s, layer.one, k);
        break;
      case LayerKind::EvenBonds:
        for (int b = 0; b + 1 < n; b += 2)
          discarded += apply_two_site(s, layer.two, b, pol);
        break;
      case LayerKind::OddBonds:
        for (int b = 1; b + 1 < n; b += 2)
          discarded += apply_two_site(s, layer.two, b, pol);
        break;
    }
  }
  return discarded;
}

inline void check_step_health(const MpsState& s, const EvolutionPlan& plan,
                              double t) {
  const double n = norm(s);
  if (!std::isfinite(n) || n == 0.0)
    throw NonFiniteState("non-finite state norm at t = " + std::to_string(t));
  if (s.cumulative_discarded > plan.discard_budget)
    throw TruncationBudgetExceeded(s.cumulative_discarded);
}

} // namespace detail

// Pure readout of the plan's observable set; the input state is not touched.
inline Snapshot observe(const MpsState& s, const EvolutionPlan& plan,
                        double t = 0.0) {
  MpsState copy = s;
  return detail::take_snapshot(copy, plan, t);
}

// Deterministic (kappa = 0) TEBD evolution.
template <class Model>
std::pair<MpsState, EvolutionRecord> evolve(MpsState state, const Model& model,
                                            const EvolutionPlan& plan) {
  plan.validate();
  model.validate();
  if (model.site_dim() != state.local_dim)
    throw std::invalid_argument("evolve: state local_dim does not match model");
  if constexpr (requires { model.kappa; }) {
    if (model.kappa != 0.0)
      throw std::invalid_argument(
          "evolve: model has loss; use evolve_trajectories");
  }
  const GateSchedule sched = trotter_layers(model, plan.dt, plan.trotter_order);
  EvolutionRecord rec;
  const int steps = plan.n_steps();
  rec.step_discarded.reserve(steps);
  rec.step_max_bond.reserve(steps);
  rec.snapshots.push_back(detail::take_snapshot(state, plan, 0.0));
  for (int s_i = 1; s_i <= steps; ++s_i) {
    const double w = detail::apply_schedule_step(state, sched, plan.policy);
    const double t = s_i * plan.dt;
    rec.step_discarded.push_back(w);
    rec.step_max_bond.push_back(state.max_bond_dim());
    detail::check_step_health(state, plan, t);
    if (s_i % plan.record_every == 0 || s_i == steps)
      rec.snapshots.push_back(detail::take_snapshot(state, plan, t));
  }
  return {std::move(state), std::move(rec)};
}

struct TrajectoryConfig {
  int n_trajectories = 1;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (n_trajectories < 1)
      throw std::invalid_argument("TrajectoryConfig: n_trajectories < 1");
  }
};

struct EnsembleRecord {
  std::vector<double> times;
  MatR density_mean;            // n_times x n_sites
  MatR density_var;             // population variance across trajectories
  VecR total_n_mean;
  VecR total_n_var;
  std::vector<JumpEvent> jumps; // all trajectories, in order
  int n_trajectories = 0;
};

// First-order jump unraveling of uniform per-site loss sqrt(kappa) a.
// Per step: coherent Trotter step, no-jump damping e^{-kappa n dt/2} on every
// site, at most one sampled jump, renormalization. Per-trajectory RNG streams
// derive from the master seed via stream_seed(master, k), so the ensemble
// size can grow without perturbing earlier trajectories. Exactly two uniform
// draws happen on jump steps and one on no-jump steps, keeping streams
// aligned with the event history.
template <class Model>
EnsembleRecord evolve_trajectories(const MpsState& state, const Model& model,
                                   const EvolutionPlan& plan,
                                   const TrajectoryConfig& tconf) {
  plan.validate();
  model.validate();
  tconf.validate();
  const double kappa = model.kappa;
  const int n = state.n_sites();

  EnsembleRecord ens;
  ens.n_trajectories = tconf.n_trajectories;

  if (kappa == 0.0) {
    // Bit-for-bit identical to evolve(); every trajectory is the same.
    auto [fin, rec] = evolve(state, model, plan);
    (void)fin;
    const int nt = int(rec.snapshots.size());
    ens.times.resize(nt);
    ens.density_mean.resize(nt, n);
    ens.density_var = MatR::Zero(nt, n);
    ens.total_n_mean.resize(nt);
    ens.total_n_var = VecR::Zero(nt);
    for (int i = 0; i < nt; ++i) {
      ens.times[i] = rec.snapshots[i].t;
      ens.density_mean.row(i) = rec.snapshots[i].density.transpose();
      ens.total_n_mean(i) = rec.snapshots[i].density.sum();
    }
    return ens;
  }

  if (kappa * plan.dt > 0.1)
    throw std::invalid_argument(
        "evolve_trajectories: kappa*dt > 0.1, first-order unraveling invalid");

  const GateSchedule sched = trotter_layers(model, plan.dt, plan.trotter_order);
  MatC damp_mat;
  {
    const MatC a = model.site_annihilation();
    const MatC nop = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<MatC> es(nop);
    VecC diag(nop.rows());
    for (int k = 0; k < nop.rows(); ++k)
      diag(k) = std::exp(-0.5 * kappa * plan.dt * es.eigenvalues()(k));
    damp_mat = es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
  }
  const LocalOperator damp(damp_mat, false);
  const LocalOperator jump_op(model.site_annihilation(), false);

  const int steps = plan.n_steps();
  std::vector<double> times;
  for (int s_i = 0; s_i <= steps; ++s_i)
    if (s_i == 0 || s_i % plan.record_every == 0 || s_i == steps)
      times.push_back(s_i * plan.dt);
  const int nt = int(times.size());
  ens.times = times;
  ens.density_mean = MatR::Zero(nt, n);
  ens.density_var = MatR::Zero(nt, n);
  ens.total_n_mean = VecR::Zero(nt);
  ens.total_n_var = VecR::Zero(nt);
  MatR dens_sum = MatR::Zero(nt, n), dens_sq = MatR::Zero(nt, n);
  VecR tot_sum = VecR::Zero(nt), tot_sq = VecR::Zero(nt);

  for (int traj = 0; traj < tconf.n_trajectories; ++traj) {
    auto rng = stream_rng(tconf.rng_seed, std::uint64_t(traj));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MpsState psi = state;
    normalize(psi);
    int rec_idx = 0;
    auto record = [&](double t) {
      VecR dens = number_density(psi);
      dens_sum.row(rec_idx) += dens.transpose();
      dens_sq.row(rec_idx) += dens.array().square().matrix().transpose();
      tot_sum(rec_idx) += dens.sum();
      tot_sq(rec_idx) += dens.sum() * dens.sum();
      (void)t;
      ++rec_idx;
    };
    record(0.0);
    for (int s_i = 1; s_i <= steps; ++s_i) {
      detail::apply_schedule_step(psi, sched, plan.policy);
      // No-jump damping sweep.
      canonicalize(psi, 0);
      for (int k = 0; k < n; ++k) {
        apply_one_site(psi, damp, k);
        if (k + 1 < n) {
          detail::shift_center_right(psi, k);
          psi.center = k + 1;
        }
      }
      const double nrm2 = std::pow(norm(psi), 2);
      const double p_jump = std::max(0.0, 1.0 - nrm2);
      const double u = uni(rng);
      if (u < p_jump) {
        // Site selection weighted by the local occupation.
        VecR dens = number_density(psi);
        const double total = dens.sum();
        double pick = uni(rng) * total;
        int site = 0;
        for (; site + 1 < n; ++site) {
          pick -= dens(site);
          if (pick <= 0.0) break;
        }
        apply_one_site(psi, jump_op, site);
        ens.jumps.push_back({traj, site, s_i * plan.dt});
      }
      normalize(psi);
      detail::check_step_health(psi, plan, s_i * plan.dt);
      if (s_i % plan.record_every == 0 || s_i == steps) record(s_i * plan.dt);
    }
  }

  const double m = double(tconf.n_trajectories);
  ens.density_mean = dens_sum / m;
  ens.density_var =
      (dens_sq / m - ens.density_mean.array().square().matrix()).cwiseMax(0.0);
  ens.total_n_mean = tot_sum / m;
  ens.total_n_var =
      (tot_sq / m - ens.total_n_mean.array().square().matrix()).cwiseMax(0.0);
  return ens;
}

} // namespace qwave
