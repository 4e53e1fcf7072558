#pragma once

// The three control environments: two-level engine, superconducting-qubit
// refrigerator, and harmonic-oscillator engine. Each step executes a sudden
// control jump followed by constant-control evolution for one time interval;
// the reward is the heat-based power of that interval.

#include <limits>
#include <memory>
#include <utility>

#include "qtm/quantum.hpp"
#include "qtm/types.hpp"

namespace qtm {

struct EnvConfig {
  ModelParams model;
  Baths baths;
  double u_min = 0, u_max = 0;
  double dt = 0;
  double u_init = std::numeric_limits<double>::quiet_NaN();  // NaN: midpoint of the range
  int substeps = 0;                                          // 0: ceil(dt / 0.02)
};

inline void validate(const EnvConfig& c) {
  auto req = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  req(c.u_min < c.u_max, "control range requires u_min < u_max");
  req(c.dt > 0, "time step must be positive");
  req(c.baths.hot.beta > 0 && c.baths.cold.beta > c.baths.hot.beta,
      "baths require beta_cold > beta_hot > 0");
  if (!std::isnan(c.u_init))
    req(c.u_init >= c.u_min && c.u_init <= c.u_max, "u_init outside the control range");
  req(c.substeps >= 0, "substeps must be nonnegative");
  switch (c.model.kind) {
    case ModelKind::TwoLevel:
      req(c.model.E0 > 0, "two-level model requires E0 > 0");
      req(c.baths.hot.Gamma > 0 && c.baths.cold.Gamma > 0, "bath rates must be positive");
      break;
    case ModelKind::Fridge:
      req(c.model.E0 > 0 && c.model.delta > 0, "fridge model requires E0 > 0 and delta > 0");
      for (const BathSpec* b : {&c.baths.hot, &c.baths.cold})
        req(b->g > 0 && b->Q > 0 && b->omega > 0, "fridge baths require g, Q, omega > 0");
      req(c.u_min >= 0, "fridge control must be nonnegative");
      break;
    case ModelKind::Oscillator:
      req(c.model.omega0 > 0 && c.model.mass > 0, "oscillator requires omega0, mass > 0");
      req(c.model.fock_cutoff >= 2, "oscillator truncation must be >= 2");
      req(c.baths.hot.Gamma > 0 && c.baths.cold.Gamma > 0, "bath rates must be positive");
      req(c.u_min > 0, "oscillator control must be positive");
      break;
  }
}

inline double initial_u(const EnvConfig& c) {
  return std::isnan(c.u_init) ? 0.5 * (c.u_min + c.u_max) : c.u_init;
}

inline int effective_substeps(const EnvConfig& c) {
  return c.substeps > 0 ? c.substeps : std::max(1, int(std::ceil(c.dt / 0.02)));
}

struct StepRecord {
  RVec obs;                            // encoded observation after the step
  double reward = 0;                   // heat-based power of the interval
  double heat_hot = 0, heat_cold = 0;  // energy absorbed from each bath
  double work_in = 0;                  // jump work done on the system
};

struct Environment {
  virtual ~Environment() = default;
  virtual int obs_dim() const = 0;
  virtual int n_actions() const = 0;
  virtual std::pair<double, double> u_range() const = 0;
  virtual const EnvConfig& config() const = 0;
  // Deterministic start of the trajectory: thermal state of the cold bath at
  // the initial control. The continuing task never resets during training.
  virtual RVec reset() = 0;
  virtual StepRecord step(const HybridAction& a) = 0;
  virtual RVec observe() const = 0;
  virtual double internal_energy() const = 0;
  virtual double current_u() const = 0;
  virtual const char* action_label(int d) const = 0;
  virtual int parse_action_label(const std::string& s) const = 0;
};

inline void check_action(const Environment& env, const HybridAction& a) {
  auto [lo, hi] = env.u_range();
  if (!(a.u >= lo && a.u <= hi)) throw std::invalid_argument("control u outside the range");
  if (a.d < 0 || a.d >= env.n_actions()) throw std::invalid_argument("bad discrete action");
}

// --- two-level engine ---------------------------------------------------------

// State: excited population p with closed-form relaxation per segment.
struct TwoLevelEnv final : Environment {
  EnvConfig cfg;
  double p = 0, u = 0;

  explicit TwoLevelEnv(const EnvConfig& c) : cfg(c) {
    if (c.model.kind != ModelKind::TwoLevel) throw std::invalid_argument("wrong model kind");
    validate(c);
    reset();
  }

  int obs_dim() const override { return 2; }
  int n_actions() const override { return 3; }
  std::pair<double, double> u_range() const override { return {cfg.u_min, cfg.u_max}; }
  const EnvConfig& config() const override { return cfg; }
  double current_u() const override { return u; }
  double internal_energy() const override { return u * cfg.model.E0 * (p - 0.5); }

  RVec reset() override {
    u = initial_u(cfg);
    p = fermi(cfg.baths.cold.beta * u * cfg.model.E0);
    return observe();
  }

  RVec observe() const override {
    RVec o(2);
    o << p, u;
    return o;
  }

  StepRecord step(const HybridAction& a) override {
    check_action(*this, a);
    StepRecord r;
    r.work_in = cfg.model.E0 * (a.u - u) * (p - 0.5);
    u = a.u;
    if (a.d != kNone) {
      const BathSpec& b = a.d == kHot ? cfg.baths.hot : cfg.baths.cold;
      double pstar = fermi(b.beta * u * cfg.model.E0);
      double p1 = pstar + (p - pstar) * std::exp(-b.Gamma * cfg.dt);
      double heat = u * cfg.model.E0 * (p1 - p);
      (a.d == kHot ? r.heat_hot : r.heat_cold) = heat;
      p = p1;
    }
    r.reward = (r.heat_hot + r.heat_cold) / cfg.dt;
    r.obs = observe();
    return r;
  }

  const char* action_label(int d) const override {
    return d == kHot ? "Hot" : d == kCold ? "Cold" : "None";
  }
  int parse_action_label(const std::string& s) const override {
    if (s == "Hot") return kHot;
    if (s == "Cold") return kCold;
    if (s == "None") return kNone;
    throw std::invalid_argument("unknown action label '" + s + "'");
  }
};

// --- superconducting-qubit refrigerator ---------------------------------------

// State: qubit density matrix in the fixed computational basis; both baths are
// permanently coupled, so the only action is the continuous control.
struct FridgeEnv final : Environment {
  EnvConfig cfg;
  Mat rho;
  double u = 0;
  int substeps_;

  explicit FridgeEnv(const EnvConfig& c) : cfg(c), substeps_(effective_substeps(c)) {
    if (c.model.kind != ModelKind::Fridge) throw std::invalid_argument("wrong model kind");
    validate(c);
    reset();
  }

  int obs_dim() const override { return 4; }
  int n_actions() const override { return 1; }
  std::pair<double, double> u_range() const override { return {cfg.u_min, cfg.u_max}; }
  const EnvConfig& config() const override { return cfg; }
  double current_u() const override { return u; }
  double internal_energy() const override {
    return trace_prod(build_hamiltonian(cfg.model, u), rho).real();
  }

  RVec reset() override {
    u = initial_u(cfg);
    rho = gibbs_state(build_hamiltonian(cfg.model, u), cfg.baths.cold.beta);
    return observe();
  }

  // Components of rho in the instantaneous eigenbasis, then the control.
  RVec observe() const override {
    FridgeEigensystem es = fridge_eigensystem(cfg.model, u);
    Eigen::Vector2cd g = es.ground.cast<cplx>(), e = es.excited.cast<cplx>();
    cplx ree = (e.adjoint() * rho * e)(0);
    cplx c = (g.adjoint() * rho * e)(0);
    RVec o(4);
    o << ree.real(), c.real(), c.imag(), u;
    return o;
  }

  StepRecord step(const HybridAction& a) override {
    check_action(*this, a);
    StepRecord r;
    r.work_in = sudden_jump_work(rho, cfg.model, u, a.u);
    u = a.u;
    Mat H = build_hamiltonian(cfg.model, u);
    auto res = propagate_constant(rho, H, build_channels(cfg.model, cfg.baths, u, 0), cfg.dt,
                                  substeps_);
    rho = 0.5 * (res.rho + res.rho.adjoint());  // shed round-off asymmetry
    r.heat_hot = res.heat_hot;
    r.heat_cold = res.heat_cold;
    r.reward = r.heat_cold / cfg.dt;  // cooling power
    r.obs = observe();
    return r;
  }

  const char* action_label(int) const override { return "Both"; }
  int parse_action_label(const std::string& s) const override {
    if (s == "Both") return 0;
    throw std::invalid_argument("unknown action label '" + s + "'");
  }
};

// --- harmonic-oscillator engine ------------------------------------------------

// State: (H, L, D) = (<H>, <p^2/2m - m w^2 q^2/2>, <qp+pq>), which close under
// both the unitary and the dissipative dynamics. Segments solve exactly:
// H relaxes exponentially, (L, D) is a damped rotation at frequency 2w.
struct OscillatorEnv final : Environment {
  EnvConfig cfg;
  double H = 0, L = 0, D = 0, u = 0;

  explicit OscillatorEnv(const EnvConfig& c) : cfg(c) {
    if (c.model.kind != ModelKind::Oscillator) throw std::invalid_argument("wrong model kind");
    validate(c);
    reset();
  }

  int obs_dim() const override { return 6; }
  int n_actions() const override { return 3; }
  std::pair<double, double> u_range() const override { return {cfg.u_min, cfg.u_max}; }
  const EnvConfig& config() const override { return cfg; }
  double current_u() const override { return u; }
  double internal_energy() const override { return H; }

  RVec reset() override {
    u = initial_u(cfg);
    double w = u * cfg.model.omega0;
    H = 0.5 * w / std::tanh(0.5 * cfg.baths.cold.beta * w);
    L = D = 0;
    return observe();
  }

  // Log-compressed magnitudes with separate signs; the sign of H is fixed.
  RVec observe() const override {
    auto lg = [](double x) { return std::log(std::abs(x) + 1e-20); };
    RVec o(6);
    o << lg(H), lg(L), lg(D), sgn(L), sgn(D), u;
    return o;
  }

  StepRecord step(const HybridAction& a) override {
    check_action(*this, a);
    StepRecord r;
    // Sudden frequency jump: q, p moments unchanged, H and L remix.
    double ratio = (a.u / u) * (a.u / u);
    double Hj = 0.5 * ((1 + ratio) * H + (1 - ratio) * L);
    double Lj = 0.5 * ((1 - ratio) * H + (1 + ratio) * L);
    r.work_in = Hj - H;
    H = Hj;
    L = Lj;
    u = a.u;

    double w = u * cfg.model.omega0;
    double damp = 1.0, heq = 0.0, gamma = 0.0;
    if (a.d != kNone) {
      const BathSpec& b = a.d == kHot ? cfg.baths.hot : cfg.baths.cold;
      gamma = b.Gamma;
      damp = std::exp(-gamma * cfg.dt);
      heq = 0.5 * w / std::tanh(0.5 * b.beta * w);
    }
    double H1 = heq + (H - heq) * damp;
    double c = std::cos(2 * w * cfg.dt), s = std::sin(2 * w * cfg.dt);
    double L1 = damp * (L * c - 0.5 * w * D * s);
    double D1 = damp * (D * c + 2.0 / w * L * s);
    if (a.d != kNone) (a.d == kHot ? r.heat_hot : r.heat_cold) = H1 - H;
    H = H1;
    L = L1;
    D = D1;
    if (H < 0.5 * w - 1e-9) throw std::runtime_error("oscillator energy below ground level");
    r.reward = (r.heat_hot + r.heat_cold) / cfg.dt;
    r.obs = observe();
    return r;
  }

  const char* action_label(int d) const override {
    return d == kHot ? "Hot" : d == kCold ? "Cold" : "None";
  }
  int parse_action_label(const std::string& s) const override {
    if (s == "Hot") return kHot;
    if (s == "Cold") return kCold;
    if (s == "None") return kNone;
    throw std::invalid_argument("unknown action label '" + s + "'");
  }
};

inline std::unique_ptr<Environment> make_environment(const EnvConfig& c) {
  switch (c.model.kind) {
    case ModelKind::TwoLevel: return std::make_unique<TwoLevelEnv>(c);
    case ModelKind::Fridge: return std::make_unique<FridgeEnv>(c);
    case ModelKind::Oscillator: return std::make_unique<OscillatorEnv>(c);
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace qtm
