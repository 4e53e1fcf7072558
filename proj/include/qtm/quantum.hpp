#pragma once

// Exact dense Lindblad dynamics for small Hilbert spaces. Serves as the
// propagation engine for the fridge environment and as the correctness
// oracle for the closed-form two-level and oscillator environments.

#include <cmath>
#include <utility>

#include "qtm/types.hpp"

namespace qtm {

inline double fermi(double x) { return 1.0 / (1.0 + std::exp(x)); }

// Bose-Einstein occupation 1/(e^x - 1), x > 0.
inline double bose(double x) { return 1.0 / std::expm1(x); }

// Noise power spectrum of a resonant fridge bath, defined for eps != 0 of
// either sign; satisfies detailed balance S(-eps) = e^{beta*eps} S(eps).
inline double bath_spectrum(const BathSpec& b, double eps) {
  double det = eps / b.omega - b.omega / eps;
  double lorentz = 1.0 / (1.0 + b.Q * b.Q * det * det);
  return 0.5 * b.g * lorentz * eps / std::expm1(b.beta * eps);
}

struct LindbladChannel {
  Mat A;        // jump operator
  double gamma; // nonnegative rate
  Bath bath;
};

// Tr[M rho] without forming the matrix product.
inline cplx trace_prod(const Mat& M, const Mat& rho) {
  return (M.transpose().cwiseProduct(rho)).sum();
}

// --- model Hamiltonians -----------------------------------------------------

inline Mat two_level_hamiltonian(const ModelParams& m, double u) {
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = 0.5 * m.E0 * u;   // excited level |e> = first basis vector
  H(1, 1) = -0.5 * m.E0 * u;
  return H;
}

inline Mat fridge_hamiltonian(const ModelParams& m, double u) {
  Mat H(2, 2);
  H(0, 0) = -m.E0 * u;
  H(0, 1) = -m.E0 * m.delta;
  H(1, 0) = -m.E0 * m.delta;
  H(1, 1) = m.E0 * u;
  return H;
}

// Lowering operator a on the truncated Fock basis of the reference frequency.
inline Mat fock_lowering(int n) {
  Mat a = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

// H = p^2/2m + m(u w0)^2 q^2/2 expressed in the fixed Fock basis of frequency
// w0: H = (w0/4)[(1+u^2)(2 a^t a + 1) + (u^2-1)(a^2 + a^t^2)]; mass cancels.
inline Mat oscillator_hamiltonian(const ModelParams& m, double u) {
  int n = m.fock_cutoff;
  if (n < 2) throw std::invalid_argument("oscillator truncation must be >= 2");
  Mat H = Mat::Zero(n, n);
  double u2 = u * u;
  for (int k = 0; k < n; ++k) H(k, k) = 0.25 * m.omega0 * (1 + u2) * (2 * k + 1);
  for (int k = 2; k < n; ++k) {
    double v = 0.25 * m.omega0 * (u2 - 1) * std::sqrt(double(k) * (k - 1));
    H(k - 2, k) = v;
    H(k, k - 2) = v;
  }
  return H;
}

// Annihilation operator of the instantaneous frequency u*w0 in the fixed
// basis: a_u = c+ a + c- a^t with c± = (sqrt(u) ± 1/sqrt(u))/2.
inline Mat oscillator_lowering(const ModelParams& m, double u) {
  int n = m.fock_cutoff;
  double s = std::sqrt(u);
  double cp = 0.5 * (s + 1.0 / s), cm = 0.5 * (s - 1.0 / s);
  Mat a = fock_lowering(n);
  return cp * a + cm * a.adjoint();
}

inline Mat build_hamiltonian(const ModelParams& m, double u) {
  if (!std::isfinite(u)) throw std::invalid_argument("non-finite control u");
  switch (m.kind) {
    case ModelKind::TwoLevel: return two_level_hamiltonian(m, u);
    case ModelKind::Fridge: return fridge_hamiltonian(m, u);
    case ModelKind::Oscillator: return oscillator_hamiltonian(m, u);
  }
  throw std::invalid_argument("unknown model kind");
}

// --- fridge eigensystem ------------------------------------------------------

// Instantaneous eigenbasis of the fridge Hamiltonian. Both eigenvectors are
// real with nonnegative first component; this pins the sign of coherences.
struct FridgeEigensystem {
  double gap = 0;              // excited minus ground energy, 2 E0 sqrt(delta^2+u^2)
  Eigen::Vector2d ground, excited;
};

inline FridgeEigensystem fridge_eigensystem(const ModelParams& m, double u) {
  Eigen::Matrix2d H;
  H << -m.E0 * u, -m.E0 * m.delta, -m.E0 * m.delta, m.E0 * u;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  FridgeEigensystem r;
  r.gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  r.ground = es.eigenvectors().col(0);
  r.excited = es.eigenvectors().col(1);
  if (r.ground(0) < 0) r.ground = -r.ground;
  if (r.excited(0) < 0) r.excited = -r.excited;
  return r;
}

// --- jump operators and rates -----------------------------------------------

inline std::vector<LindbladChannel> build_channels(const ModelParams& m, const Baths& baths,
                                                   double u, int d) {
  std::vector<LindbladChannel> ch;
  switch (m.kind) {
    case ModelKind::TwoLevel: {
      if (d == kNone) return ch;
      if (d != kHot && d != kCold) throw std::invalid_argument("bad discrete action");
      Bath b = d == kHot ? Bath::Hot : Bath::Cold;
      const BathSpec& spec = baths[b];
      Mat up = Mat::Zero(2, 2), dn = Mat::Zero(2, 2);
      up(0, 1) = 1.0;  // |e><g|
      dn(1, 0) = 1.0;  // |g><e|
      double x = spec.beta * u * m.E0;
      ch.push_back({up, spec.Gamma * fermi(x), b});
      ch.push_back({dn, spec.Gamma * fermi(-x), b});
      return ch;
    }
    case ModelKind::Fridge: {
      // Coupling to both baths is fixed; d is ignored.
      FridgeEigensystem es = fridge_eigensystem(m, u);
      Mat up = Mat::Zero(2, 2), dn = Mat::Zero(2, 2);
      const cplx mi(0, -1), pi(0, 1);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          up(i, j) = mi * es.excited(i) * es.ground(j);  // -i |e><g|
          dn(i, j) = pi * es.ground(i) * es.excited(j);  // +i |g><e|
        }
      for (Bath b : {Bath::Hot, Bath::Cold}) {
        const BathSpec& spec = baths[b];
        ch.push_back({up, bath_spectrum(spec, es.gap), b});
        ch.push_back({dn, bath_spectrum(spec, -es.gap), b});
      }
      return ch;
    }
    case ModelKind::Oscillator: {
      if (d == kNone) return ch;
      if (d != kHot && d != kCold) throw std::invalid_argument("bad discrete action");
      Bath b = d == kHot ? Bath::Hot : Bath::Cold;
      const BathSpec& spec = baths[b];
      double n = bose(spec.beta * u * m.omega0);
      Mat a = oscillator_lowering(m, u);
      ch.push_back({a.adjoint(), spec.Gamma * n, b});
      ch.push_back({a, spec.Gamma * (1.0 + n), b});
      return ch;
    }
  }
  throw std::invalid_argument("unknown model kind");
}

// --- propagation ------------------------------------------------------------

inline Mat lindblad_rhs(const Mat& H, const std::vector<LindbladChannel>& ch, const Mat& rho) {
  const cplx I(0, 1);
  Mat d = -I * (H * rho - rho * H);
  for (const auto& c : ch) {
    Mat ar = c.A * rho;
    Mat aa = c.A.adjoint() * c.A;
    d += c.gamma * (ar * c.A.adjoint() - 0.5 * (aa * rho + rho * aa));
  }
  return d;
}

struct PropagateResult {
  Mat rho;
  double heat_hot = 0, heat_cold = 0;  // energy absorbed from each bath
  double heat(Bath b) const { return b == Bath::Hot ? heat_hot : heat_cold; }
};

// Integrates drho/dt = -i[H,rho] + sum_k gamma_k D[A_k] rho over a segment of
// fixed controls with `substeps` classical 4th-order steps; the per-bath heat
// integrals Tr[H D^(a) rho(t)] are accumulated with the same quadrature, so
// the first law holds to round-off. Throws if the trace drifts above 1e-8.
inline PropagateResult propagate_constant(const Mat& rho0, const Mat& H,
                                          const std::vector<LindbladChannel>& ch, double dt,
                                          int substeps) {
  if (dt <= 0) throw std::invalid_argument("segment duration must be positive");
  if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  const cplx I(0, 1);

  // Drift G = iH + (1/2) sum gamma A^t A; rhs(rho) = -(G rho + (G rho)^t) + sum gamma A rho A^t.
  // The adjoint form keeps every stage exactly Hermitian for Hermitian input.
  Mat G = I * H;
  // Heat functionals: d(heat_a)/dt = sum_{k in a} gamma_k Re Tr[M_k rho] with
  // M_k = A^t H A - (1/2){A^t A, H}.
  std::vector<Mat> M(ch.size());
  std::vector<Mat> A(ch.size());
  for (size_t k = 0; k < ch.size(); ++k) {
    Mat aa = ch[k].A.adjoint() * ch[k].A;
    G += 0.5 * ch[k].gamma * aa;
    M[k] = ch[k].A.adjoint() * H * ch[k].A - 0.5 * (aa * H + H * aa);
    A[k] = ch[k].A;
  }

  auto rhs = [&](const Mat& r, double heat[2]) {
    Mat gr = G * r;
    Mat d = -(gr + gr.adjoint());
    heat[0] = heat[1] = 0;
    for (size_t k = 0; k < ch.size(); ++k) {
      Mat ar = A[k] * r;
      d.noalias() += ch[k].gamma * (ar * A[k].adjoint());
      heat[ch[k].bath == Bath::Hot ? 0 : 1] += ch[k].gamma * trace_prod(M[k], r).real();
    }
    return d;
  };

  Mat r = rho0;
  double q[2] = {0, 0};
  const double h = dt / substeps;
  double hk[4][2];
  for (int s = 0; s < substeps; ++s) {
    Mat k1 = rhs(r, hk[0]);
    Mat k2 = rhs(r + 0.5 * h * k1, hk[1]);
    Mat k3 = rhs(r + 0.5 * h * k2, hk[2]);
    Mat k4 = rhs(r + h * k3, hk[3]);
    r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    for (int b = 0; b < 2; ++b)
      q[b] += (h / 6.0) * (hk[0][b] + 2.0 * hk[1][b] + 2.0 * hk[2][b] + hk[3][b]);
  }

  if (!r.allFinite()) throw std::runtime_error("propagation produced non-finite state");
  // Entries of a density matrix are bounded by 1; well beyond that the stepper
  // has left the stability region even if symmetry kept the trace intact.
  if (r.cwiseAbs().maxCoeff() > 4.0)
    throw std::runtime_error("integration diverged; increase substeps");
  double drift = std::abs(r.trace().real() - 1.0) + std::abs(r.trace().imag());
  if (drift > 1e-8)
    throw std::runtime_error("integrator trace drift " + std::to_string(drift) +
                             " exceeds 1e-8; increase substeps");
  PropagateResult out;
  out.rho = std::move(r);
  out.heat_hot = q[0];
  out.heat_cold = q[1];
  return out;
}

// Work done on the system by an instantaneous control jump; the state is
// unchanged per the sudden approximation.
inline double sudden_jump_work(const Mat& rho, const ModelParams& m, double u_old, double u_new) {
  if (u_new == u_old) return 0.0;
  Mat dH = build_hamiltonian(m, u_new) - build_hamiltonian(m, u_old);
  return trace_prod(dH, rho).real();
}

inline Mat gibbs_state(const Mat& H, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  RVec e = es.eigenvalues();
  RVec p = (-beta * (e.array() - e.minCoeff())).exp().matrix();  // max-shift avoids overflow
  p /= p.sum();
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
}

// --- state diagnostics --------------------------------------------------------

struct StateCheck {
  double trace_err;      // |Tr rho - 1|
  double hermiticity;    // max |rho - rho^t|
  double min_eigenvalue;
  bool ok(double trace_tol = 1e-10, double herm_tol = 1e-12, double pos_tol = -1e-9) const {
    return trace_err <= trace_tol && hermiticity <= herm_tol && min_eigenvalue >= pos_tol;
  }
};

inline StateCheck check_state(const Mat& rho) {
  StateCheck c;
  c.trace_err = std::abs(rho.trace() - cplx(1, 0));
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

}  // namespace qtm
