#include <catch2/catch_amalgamated.hpp>

#include "qwave/dense_oracle.hpp"
#include "qwave/gaussian_oracle.hpp"
#include "qwave/tebd.hpp"
#include "support.hpp"

using namespace qwave;
using Catch::Approx;

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("kerr hopping gate", "[models]") {
  KerrWaveguideModel m;
  m.n_bins = 2;
  m.beta2 = 1.0;
  m.dx = 1.0;
  m.local_dim = 4;

  SECTION("dt = 0 gives the identity") {
    auto g = kerr_hopping_gate(m, 0.0);
    CHECK((g.mat - MatC::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("two-level Rabi transfer at J dt = pi/4") {
    const double dt = (pi / 4) / m.hop_j();
    auto g = kerr_hopping_gate(m, dt);
    VecC in = VecC::Zero(16); // |1,0>
    in(1 * 4 + 0) = 1.0;
    VecC out = g.mat * in;
    const double p_transfer = std::norm(out(0 * 4 + 1));
    CHECK(p_transfer == Approx(std::pow(std::sin(pi / 4), 2)).margin(1e-12));
  }
  SECTION("random dt matches the dense matrix exponential") {
    const double dt = 0.377;
    auto g = kerr_hopping_gate(m, dt);
    MatC ref = expi_hermitian(m.bond_hamiltonian(), dt);
    CHECK((g.mat - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(is_unitary(g.mat, 1e-12));
  }
}

TEST_CASE("kerr onsite gate", "[models]") {
  KerrWaveguideModel m;
  m.n_bins = 1;
  m.local_dim = 10;

  SECTION("g = 0, J = 0 gives the identity") {
    m.beta2 = 0.0;
    m.g_kerr = 0.0;
    auto g = kerr_onsite_gate(m, 0.9);
    CHECK((g.mat - MatC::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("diagonal phases") {
    m.beta2 = 0.8;
    m.g_kerr = -0.3;
    const double dt = 0.41;
    auto g = kerr_onsite_gate(m, dt);
    const double j = m.hop_j();
    for (int n = 0; n < 10; ++n) {
      const double phase = -(0.5 * m.g_kerr * n * (n - 1) + 2 * j * n) * dt;
      CHECK(std::abs(g.mat(n, n) - std::exp(iu * phase)) < 1e-13);
    }
  }
  SECTION("isolated bin reproduces single-mode Kerr dynamics") {
    m.beta2 = 0.0;
    m.g_kerr = -0.6;
    m.local_dim = 12;
    const cxd alpha(0.8, 0.0);
    auto s = coherent_product_state({alpha}, m.local_dim);
    EvolutionPlan plan;
    plan.total_time = 2.0;
    plan.dt = 0.1;
    auto [fin, rec] = evolve(std::move(s), m, plan);
    (void)rec;
    // Diagonal propagator applied to the truncated coherent amplitudes.
    auto c = coherent_amplitudes(alpha, m.local_dim);
    VecC expect = c.amps;
    for (int n = 0; n < m.local_dim; ++n)
      expect(n) *= std::exp(-iu * (0.5 * m.g_kerr * n * (n - 1.0) * 2.0));
    VecC got = densify(fin).vec;
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("chi2 local gate", "[models]") {
  Chi2WaveguideModel m;
  m.n_bins = 1;
  m.signal_dim = 4;
  m.pump_dim = 3;
  m.signal_beta2 = 0.0;
  m.pump_beta2 = 0.0;

  SECTION("epsilon = 0 is phase-only") {
    m.epsilon = 0.0;
    m.xi_mismatch = 0.7;
    auto g = chi2_local_gate(m, 0.63);
    MatC off = g.mat;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-13);
  }
  SECTION("resonant pump Rabi oscillation in the {|0,1>,|2,0>} block") {
    m.epsilon = 0.8;
    m.xi_mismatch = 0.0;
    const double t = 0.9;
    auto g = chi2_local_gate(m, t);
    VecC in = VecC::Zero(m.site_dim()); // |n_s=0, n_p=1>
    in(0 * m.pump_dim + 1) = 1.0;
    VecC out = g.mat * in;
    double n_pump = 0.0;
    for (int ns = 0; ns < m.signal_dim; ++ns)
      for (int np = 0; np < m.pump_dim; ++np)
        n_pump += np * std::norm(out(ns * m.pump_dim + np));
    const double omega = std::sqrt(2.0) * 0.5 * m.epsilon;
    CHECK(n_pump == Approx(std::pow(std::cos(omega * t), 2)).margin(1e-12));
  }
  SECTION("Manley-Rowe charge commutes with the gate") {
    m.epsilon = 0.55;
    m.xi_mismatch = 1.3;
    auto g = chi2_local_gate(m, 0.77);
    MatC q = m.charge_op();
    CHECK((g.mat * q - q * g.mat).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("trotter schedules", "[models]") {
  KerrWaveguideModel m;
  m.n_bins = 4;
  m.local_dim = 3;
  m.beta2 = 1.0;
  m.g_kerr = -0.4;

  SECTION("unsupported order") {
    CHECK_THROWS_AS(trotter_layers(m, 0.1, 3), std::invalid_argument);
  }
  SECTION("order-2 schedule with negated dt inverts the step") {
    VecC one(3), vac(3);
    one << 0, 1, 0;
    vac << 1, 0, 0;
    auto s = product_state({one, vac, one, vac}, 3);
    auto ref = s;
    TruncationPolicy pol;
    auto fwd = trotter_layers(m, 0.05, 2);
    auto bwd = trotter_layers(m, -0.05, 2);
    for (int k = 0; k < 10; ++k) detail::apply_schedule_step(s, fwd, pol);
    for (int k = 0; k < 10; ++k) detail::apply_schedule_step(s, bwd, pol);
    CHECK(fidelity(s, ref) >= 1.0 - 1e-10);
  }
  SECTION("global error slopes against the dense reference") {
    VecC one(3), vac(3);
    one << 0, 1, 0;
    vac << 1, 0, 0;
    auto s0 = product_state({one, one, vac, vac}, 3);
    DenseState ref = densify(s0);
    SparseC h = assemble_lattice_hamiltonian(4, 3, m.onsite_hamiltonian(),
                                             m.bond_hamiltonian());
    const double t_final = 0.4;
    exact_evolve(h, ref, t_final);
    for (int order : {1, 2}) {
      std::vector<double> log_dt, log_err;
      for (double dt : {0.1, 0.05, 0.025}) {
        auto s = s0;
        EvolutionPlan plan;
        plan.total_time = t_final;
        plan.dt = dt;
        plan.trotter_order = order;
        auto [fin, rec] = evolve(std::move(s), m, plan);
        (void)rec;
        const double err = (densify(fin).vec - ref.vec).norm();
        log_dt.push_back(std::log(dt));
        log_err.push_back(std::log(err));
      }
      const double slope = fit_slope(log_dt, log_err);
      if (order == 1) CHECK(slope == Approx(1.0).margin(0.25));
      if (order == 2) CHECK(slope == Approx(2.0).margin(0.2));
    }
  }
  SECTION("free evolution conserves total photon number") {
    m.g_kerr = 0.0;
    VecC one(3), vac(3);
    one << 0, 1, 0;
    vac << 1, 0, 0;
    auto s = product_state({one, vac, one, vac}, 3);
    EvolutionPlan plan;
    plan.total_time = 1.0;
    plan.dt = 0.02;
    plan.record_every = plan.n_steps();
    auto [fin, rec] = evolve(std::move(s), m, plan);
    (void)fin;
    const double n0 = rec.snapshots.front().density.sum();
    const double n1 = rec.snapshots.back().density.sum();
    CHECK(std::abs(n1 - n0) < 1e-12);
  }
}

TEST_CASE("linear-regime first moments match the Gaussian oracle", "[models]") {
  KerrWaveguideModel m;
  m.n_bins = 4;
  m.local_dim = 8;
  m.beta2 = 1.0;
  m.g_kerr = 0.0;
  std::vector<cxd> alphas = {cxd(0.4, 0.0), cxd(0.0, 0.3), cxd(-0.2, 0.1),
                             cxd(0.1, 0.2)};
  auto s = coherent_product_state(alphas, m.local_dim);
  EvolutionPlan plan;
  plan.total_time = 0.1;
  plan.dt = 2.5e-4;
  plan.record_every = plan.n_steps();
  auto [fin, rec] = evolve(std::move(s), m, plan);
  (void)rec;
  auto moments = gaussian_moments_evolve(m, coherent_moments(alphas), 0.1);
  LocalOperator a_op(annihilation_op(m.local_dim), false);
  for (int i = 0; i < m.n_bins; ++i) {
    cxd got = expectation_local(fin, a_op, i);
    CHECK(std::abs(got - moments.mean(i)) < 1e-8);
  }
}
