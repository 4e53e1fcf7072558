#pragma once

// Independent correctness oracles: the fast environments are replayed against
// dense Lindblad propagation (and, for the fridge, against an eigenbasis
// closed-form solution) on random piecewise-constant protocols, and the
// conservation laws are spot-checked on random steps.

#include <string>
#include <vector>

#include "qtm/env.hpp"
#include "qtm/quantum.hpp"

namespace qtm::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;  // measured worst error / statistic
  double bound = 0;  // tolerance it is held against
  std::string detail;
};

inline HybridAction random_action(const Environment& env, Rng& rng) {
  std::uniform_real_distribution<double> U(env.u_range().first, env.u_range().second);
  std::uniform_int_distribution<int> Di(0, env.n_actions() - 1);
  return {Di(rng), U(rng)};
}

// Relative to the trajectory's peak magnitude, with an absolute floor so that
// identically-zero signals compare clean.
struct RelTracker {
  double max_abs_ref = 1e-12, max_dev = 0;
  void add(double fast, double ref) {
    max_abs_ref = std::max(max_abs_ref, std::abs(ref));
    max_dev = std::max(max_dev, std::abs(fast - ref));
  }
  double rel() const { return max_dev / max_abs_ref; }
};

// --- fridge eigenbasis closed form --------------------------------------------

// Exact segment solution in the instantaneous eigenbasis: populations relax at
// gamma_up + gamma_down toward their Gibbs-like fixed point, the coherence is a
// damped rotation at the gap frequency, and the per-bath heat integrals are
// elementary. Serves as an algebraically independent check of the integrator.
struct FridgeSegment {
  Mat rho;
  double heat_hot = 0, heat_cold = 0;
};

inline FridgeSegment fridge_segment_closed_form(const ModelParams& m, const Baths& baths,
                                                const Mat& rho0, double u, double dt) {
  FridgeEigensystem es = fridge_eigensystem(m, u);
  Eigen::Vector2cd g = es.ground.cast<cplx>(), e = es.excited.cast<cplx>();
  double p0 = ((e.adjoint() * rho0 * e)(0)).real();
  cplx c0 = (g.adjoint() * rho0 * e)(0);

  double up[2], dn[2];
  for (int b = 0; b < 2; ++b) {
    const BathSpec& s = b == 0 ? baths.hot : baths.cold;
    up[b] = bath_spectrum(s, es.gap);
    dn[b] = bath_spectrum(s, -es.gap);
  }
  double gu = up[0] + up[1], gd = dn[0] + dn[1];
  double G = gu + gd, pstar = gu / G;

  double decay = std::exp(-G * dt);
  double p1 = pstar + (p0 - pstar) * decay;
  double ip = pstar * dt + (p0 - pstar) * (1.0 - decay) / G;  // integral of p(t)
  cplx c1 = c0 * std::exp(cplx(-0.5 * G * dt, es.gap * dt));

  FridgeSegment out;
  out.heat_hot = es.gap * (up[0] * dt - (up[0] + dn[0]) * ip);
  out.heat_cold = es.gap * (up[1] * dt - (up[1] + dn[1]) * ip);
  Mat rho = p1 * e * e.adjoint() + (1 - p1) * g * g.adjoint() + c1 * g * e.adjoint() +
            std::conj(c1) * e * g.adjoint();
  out.rho = rho;
  return out;
}

// --- protocol comparisons -------------------------------------------------------

inline CheckResult oracle_two_level(const EnvConfig& cfg, int protocols, int steps,
                                    uint64_t seed) {
  RelTracker state, heat;
  int sub = effective_substeps(cfg);
  for (int k = 0; k < protocols; ++k) {
    Rng rng(seed + k);
    TwoLevelEnv env(cfg);
    env.reset();
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = env.p;
    rho(1, 1) = 1 - env.p;
    for (int t = 0; t < steps; ++t) {
      HybridAction a = random_action(env, rng);
      auto r = env.step(a);
      Mat H = build_hamiltonian(cfg.model, a.u);
      auto ch = build_channels(cfg.model, cfg.baths, a.u, a.d);
      auto res = propagate_constant(rho, H, ch, cfg.dt, sub);
      rho = res.rho;
      state.add(env.p, rho(0, 0).real());
      heat.add(r.heat_hot, res.heat_hot);
      heat.add(r.heat_cold, res.heat_cold);
    }
  }
  double v = std::max(state.rel(), heat.rel());
  return {"oracle/two_level", v <= 1e-6, v, 1e-6, ""};
}

inline CheckResult oracle_fridge(const EnvConfig& cfg, int protocols, int steps, uint64_t seed) {
  RelTracker state, heat;
  for (int k = 0; k < protocols; ++k) {
    Rng rng(seed + k);
    FridgeEnv env(cfg);
    env.reset();
    Mat rho = env.rho;
    for (int t = 0; t < steps; ++t) {
      HybridAction a = random_action(env, rng);
      auto r = env.step(a);
      auto res = fridge_segment_closed_form(cfg.model, cfg.baths, rho, a.u, cfg.dt);
      rho = res.rho;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          state.add(env.rho(i, j).real(), rho(i, j).real());
          state.add(env.rho(i, j).imag(), rho(i, j).imag());
        }
      heat.add(r.heat_hot, res.heat_hot);
      heat.add(r.heat_cold, res.heat_cold);
    }
  }
  double v = std::max(state.rel(), heat.rel());
  return {"oracle/fridge", v <= 1e-6, v, 1e-6, ""};
}

inline Mat oscillator_L_operator(const ModelParams& m, double u) {
  int n = m.fock_cutoff;
  Mat L = Mat::Zero(n, n);
  double u2 = u * u;
  for (int k = 0; k < n; ++k) L(k, k) = 0.25 * m.omega0 * (1 - u2) * (2 * k + 1);
  for (int k = 2; k < n; ++k) {
    double v = -0.25 * m.omega0 * (1 + u2) * std::sqrt(double(k) * (k - 1));
    L(k - 2, k) = v;
    L(k, k - 2) = v;
  }
  return L;
}

inline Mat oscillator_D_operator(const ModelParams& m) {
  Mat a = fock_lowering(m.fock_cutoff);
  return cplx(0, 1) * (a.adjoint() * a.adjoint() - a * a);
}

inline CheckResult oracle_oscillator(const EnvConfig& cfg, int protocols, int steps,
                                     uint64_t seed) {
  RelTracker state, heat;
  double guard_max = 0;
  int sub = effective_substeps(cfg);
  const ModelParams& m = cfg.model;
  Mat Dop = oscillator_D_operator(m);
  for (int k = 0; k < protocols; ++k) {
    Rng rng(seed + k);
    OscillatorEnv env(cfg);
    env.reset();
    Mat rho = gibbs_state(build_hamiltonian(m, env.u), cfg.baths.cold.beta);
    for (int t = 0; t < steps; ++t) {
      HybridAction a = random_action(env, rng);
      auto r = env.step(a);
      Mat H = build_hamiltonian(m, a.u);
      auto ch = build_channels(m, cfg.baths, a.u, a.d);
      auto res = propagate_constant(rho, H, ch, cfg.dt, sub);
      rho = res.rho;
      double top = rho(m.fock_cutoff - 1, m.fock_cutoff - 1).real();
      guard_max = std::max(guard_max, top);
      state.add(env.H, trace_prod(H, rho).real());
      state.add(env.L, trace_prod(oscillator_L_operator(m, a.u), rho).real());
      state.add(env.D, trace_prod(Dop, rho).real());
      heat.add(r.heat_hot, res.heat_hot);
      heat.add(r.heat_cold, res.heat_cold);
    }
  }
  double v = std::max(state.rel(), heat.rel());
  CheckResult out{"oracle/oscillator", v <= 1e-3, v, 1e-3,
                  "basis-top occupation max " + std::to_string(guard_max)};
  if (guard_max >= 1e-6) {
    out.pass = false;
    out.detail += " (guard breached: truncated oracle invalid)";
  }
  return out;
}

// --- conservation spot checks ---------------------------------------------------

// Per-step first law on the fast environments: dU = jump work + total heat.
inline CheckResult conservation_env(const EnvConfig& cfg, const char* name, int steps,
                                    uint64_t seed) {
  Rng rng(seed);
  auto env = make_environment(cfg);
  env->reset();
  double worst = 0;
  for (int t = 0; t < steps; ++t) {
    double U0 = env->internal_energy();
    auto r = env->step(random_action(*env, rng));
    double dU = env->internal_energy() - U0;
    worst = std::max(worst, std::abs(dU - r.work_in - r.heat_hot - r.heat_cold));
  }
  return {std::string("first_law/") + name, worst <= 1e-8, worst, 1e-8, ""};
}

// Trace/Hermiticity/positivity preservation of dense propagation on random
// draws of (control, duration, state).
inline CheckResult conservation_dense(const EnvConfig& cfg, const char* name, int draws,
                                      uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  double worst_trace = 0, worst_herm = 0, worst_eig = 0;
  for (int t = 0; t < draws; ++t) {
    double u = cfg.u_min + (cfg.u_max - cfg.u_min) * U(rng);
    double dt = 0.02 + 0.98 * U(rng);
    int d = cfg.model.kind == ModelKind::Fridge ? 0 : int(3 * U(rng));
    Mat H = build_hamiltonian(cfg.model, u);
    Mat rho = gibbs_state(build_hamiltonian(cfg.model, cfg.u_min + (cfg.u_max - cfg.u_min) * U(rng)),
                          cfg.baths.cold.beta / (1.0 + U(rng)));
    auto res = propagate_constant(rho, H, build_channels(cfg.model, cfg.baths, u, d), dt,
                                  std::max(1, int(std::ceil(dt / 0.02))));
    StateCheck c = check_state(res.rho);
    worst_trace = std::max(worst_trace, c.trace_err);
    worst_herm = std::max(worst_herm, c.hermiticity);
    worst_eig = std::min(worst_eig, c.min_eigenvalue);
  }
  bool ok = worst_trace <= 1e-10 && worst_herm <= 1e-12 && worst_eig >= -1e-9;
  return {std::string("state_invariants/") + name, ok, worst_trace, 1e-10,
          "hermiticity " + std::to_string(worst_herm) + ", min eigenvalue " +
              std::to_string(worst_eig)};
}

}  // namespace qtm::verify
