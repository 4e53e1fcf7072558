#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtm {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // complex dense matrix (density matrices, operators)
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

enum class ModelKind { TwoLevel, Fridge, Oscillator };

enum class Bath { Hot, Cold };

// Discrete action index convention for bath-switching models.
// Models with a fixed bath coupling (the fridge) have a single action d = 0.
inline constexpr int kHot = 0;
inline constexpr int kCold = 1;
inline constexpr int kNone = 2;

struct HybridAction {
  int d = 0;     // index into the environment's discrete action set
  double u = 0;  // continuous control, must lie in [u_min, u_max]
};

struct ModelParams {
  ModelKind kind = ModelKind::TwoLevel;
  double E0 = 0;        // two-level gap scale; fridge energy scale
  double delta = 0;     // fridge minimum-gap parameter
  double omega0 = 0;    // oscillator base frequency
  double mass = 1;      // oscillator mass; drops out of every observable
  int fock_cutoff = 60; // truncation of the oscillator oracle basis
};

struct BathSpec {
  double beta = 0;   // inverse temperature
  double Gamma = 0;  // thermalization rate (two-level, oscillator)
  double g = 0;      // fridge spectrum: coupling strength,
  double Q = 0;      //   resonator quality factor,
  double omega = 0;  //   resonance frequency
};

// Invariant everywhere: baths.cold.beta > baths.hot.beta > 0.
struct Baths {
  BathSpec hot, cold;
  const BathSpec& operator[](Bath b) const { return b == Bath::Hot ? hot : cold; }
};

// Piecewise-constant control schedule; each segment lasts `steps` whole time steps.
struct CycleSegment {
  int steps = 1;
  double u = 0;
  int d = 0;
};

struct CycleProtocol {
  std::vector<CycleSegment> segments;
  int period_steps() const {
    int n = 0;
    for (const auto& s : segments) n += s.steps;
    return n;
  }
};

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace qtm
