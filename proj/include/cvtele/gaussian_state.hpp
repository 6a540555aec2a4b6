#pragma once

// Phase-space description of bosonic Gaussian states.
//
// Conventions used throughout the library:
//   * quadrature ordering (p1, q1, p2, q2, ...), p before q;
//   * vacuum variance 1/4 per quadrature (NOT 1/2 as in many references),
//     so a coherent state has V = 1/4·𝟙₂ and a thermal state with n photons
//     has V = (2n+1)/4·𝟙₂;
//   * a coherent state |α> has displacement d = (Re α, Im α).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvtele/error.hpp"

namespace cvtele {

inline constexpr double kVacuumVariance = 0.25;
inline constexpr double kPhysicalityTolerance = 1e-9;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Ω = ⊕ [[0, 1], [-1, 0]]
inline Matrix symplectic_form(int n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

inline bool is_symmetric(const Matrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

// Smallest eigenvalue of the Hermitian matrix V + (i/4)Ω.  The state is
// physical iff this is non-negative.
inline double uncertainty_margin(const Matrix& v) {
  const int dim = static_cast<int>(v.rows());
  Eigen::MatrixXcd h = v.cast<std::complex<double>>();
  h += std::complex<double>(0.0, kVacuumVariance) * symplectic_form(dim / 2).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Tolerance on the uncertainty margin.  Eigenvalue roundoff grows with the
// largest entry, so strongly amplified states get a proportionally wider band.
inline double physicality_tolerance(const Matrix& v) {
  return kPhysicalityTolerance * std::max(1.0, v.cwiseAbs().maxCoeff());
}

inline bool is_physical_covariance(const Matrix& v) {
  return uncertainty_margin(v) >= -physicality_tolerance(v);
}

class GaussianState {
 public:
  GaussianState(Vector d, Matrix v) : d_(std::move(d)), v_(std::move(v)) {
    if (v_.rows() != v_.cols() || v_.rows() % 2 != 0 || v_.rows() == 0) {
      throw std::invalid_argument("GaussianState: covariance must be a non-empty 2n x 2n matrix");
    }
    if (d_.size() != v_.rows()) {
      throw std::invalid_argument("GaussianState: displacement length must equal matrix dimension");
    }
    v_ = 0.5 * (v_ + v_.transpose()).eval();
  }

  static GaussianState vacuum(int n_modes) {
    return GaussianState(Vector::Zero(2 * n_modes),
                         kVacuumVariance * Matrix::Identity(2 * n_modes, 2 * n_modes));
  }

  static GaussianState thermal(double n_photons) {
    return GaussianState(Vector::Zero(2), (2.0 * n_photons + 1.0) * kVacuumVariance * Matrix::Identity(2, 2));
  }

  static GaussianState coherent(std::complex<double> alpha) {
    Vector d(2);
    d << alpha.real(), alpha.imag();
    return GaussianState(std::move(d), kVacuumVariance * Matrix::Identity(2, 2));
  }

  // Two-mode squeezed vacuum with squeeze factor r: cosh(2r)/4 on the
  // diagonal blocks, sinh(2r)/4·σ_z on the off-diagonal ones.
  static GaussianState two_mode_squeezed(double r) {
    Matrix v = Matrix::Zero(4, 4);
    const double c = std::cosh(2.0 * r) * kVacuumVariance;
    const double s = std::sinh(2.0 * r) * kVacuumVariance;
    v.diagonal().setConstant(c);
    v(0, 2) = v(2, 0) = s;
    v(1, 3) = v(3, 1) = -s;
    return GaussianState(Vector::Zero(4), std::move(v));
  }

  int n_modes() const noexcept { return static_cast<int>(d_.size() / 2); }
  const Vector& displacement() const noexcept { return d_; }
  const Matrix& covariance() const noexcept { return v_; }

  Matrix mode_block(int k) const { return v_.block(2 * k, 2 * k, 2, 2); }

  bool is_physical() const { return is_physical_covariance(v_); }

  void require_physical(const std::string& context) const {
    const double margin = uncertainty_margin(v_);
    if (margin < -physicality_tolerance(v_)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", margin);
      throw PhysicsError(context + ": unphysical covariance (min eigenvalue of V + iΩ/4 = " + buf + ")");
    }
  }

 private:
  Vector d_;
  Matrix v_;
};

// A linear map of the quadratures.  Passive and squeezing operations are
// symplectic; loss operators are contractions and carry `lossy = true`.
struct SymplecticOp {
  Matrix m;
  std::string label;
  bool lossy = false;

  int n_modes() const noexcept { return static_cast<int>(m.rows() / 2); }

  bool is_symplectic(double tol = 1e-9) const {
    const Matrix omega = symplectic_form(n_modes());
    return (m.transpose() * omega * m - omega).cwiseAbs().maxCoeff() <= tol;
  }
};

namespace ops {

inline SymplecticOp identity(int n_modes, std::string label = "I") {
  return {Matrix::Identity(2 * n_modes, 2 * n_modes), std::move(label), false};
}

// [[cos γ, -sin γ], [sin γ, cos γ]] on one mode.
inline SymplecticOp rotation(int n_modes, int mode, double angle, std::string label = "R") {
  SymplecticOp op = identity(n_modes, std::move(label));
  op.m.block(2 * mode, 2 * mode, 2, 2) << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return op;
}

// diag(e^{-r}, e^{r}): squeezes the p quadrature of `mode` for r > 0.
inline SymplecticOp squeeze(int n_modes, int mode, double r, std::string label = "J") {
  SymplecticOp op = identity(n_modes, std::move(label));
  op.m(2 * mode, 2 * mode) = std::exp(-r);
  op.m(2 * mode + 1, 2 * mode + 1) = std::exp(r);
  return op;
}

// Two-port mixer with power transmissivity t:
//   mode_i' =  √t mode_i + √(1-t) mode_j
//   mode_j' = -√(1-t) mode_i + √t mode_j
// t = 1/2 is the balanced beam splitter; the directional coupler and the
// eavesdropper tap are instances with t = 1 - η and t = 1 - ε.
inline SymplecticOp beam_splitter(int n_modes, int i, int j, double t, std::string label = "B") {
  if (!(t >= 0.0 && t <= 1.0)) throw PhysicsError("beam splitter transmissivity must lie in [0, 1]");
  SymplecticOp op = identity(n_modes, std::move(label));
  const double a = std::sqrt(t);
  const double b = std::sqrt(1.0 - t);
  const Matrix eye = Matrix::Identity(2, 2);
  op.m.block(2 * i, 2 * i, 2, 2) = a * eye;
  op.m.block(2 * i, 2 * j, 2, 2) = b * eye;
  op.m.block(2 * j, 2 * i, 2, 2) = -b * eye;
  op.m.block(2 * j, 2 * j, 2, 2) = a * eye;
  return op;
}

// Per-mode attenuation √(1-ε_k).
inline SymplecticOp loss(std::span<const double> eps, std::string label = "L") {
  const int n = static_cast<int>(eps.size());
  SymplecticOp op = identity(n, std::move(label));
  for (int k = 0; k < n; ++k) {
    if (!(eps[k] >= 0.0 && eps[k] <= 1.0)) throw PhysicsError("loss fraction must lie in [0, 1]");
    op.m(2 * k, 2 * k) = op.m(2 * k + 1, 2 * k + 1) = std::sqrt(1.0 - eps[k]);
  }
  op.lossy = std::any_of(eps.begin(), eps.end(), [](double e) { return e > 0.0; });
  return op;
}

inline SymplecticOp compose(const SymplecticOp& outer, const SymplecticOp& inner, std::string label) {
  return {outer.m * inner.m, std::move(label), outer.lossy || inner.lossy};
}

}  // namespace ops

// d' = M d,  V' = M V Mᵀ + N.
inline GaussianState apply(const SymplecticOp& op, const GaussianState& state,
                           const std::optional<Matrix>& added_noise = std::nullopt) {
  const auto dim = state.covariance().rows();
  if (op.m.rows() != dim || op.m.cols() != dim) {
    throw std::invalid_argument("apply: operator '" + op.label + "' dimension does not match state");
  }
  Matrix v = op.m * state.covariance() * op.m.transpose();
  if (added_noise) {
    if (added_noise->rows() != dim || added_noise->cols() != dim) {
      throw std::invalid_argument("apply: noise matrix dimension does not match state");
    }
    if (!is_symmetric(*added_noise)) throw std::invalid_argument("apply: noise matrix must be symmetric");
    v += *added_noise;
  }
  return GaussianState(op.m * state.displacement(), std::move(v));
}

// Sub-state on the listed modes, in the listed order.
inline GaussianState extract_modes(const GaussianState& state, std::span<const int> modes) {
  const int n = state.n_modes();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int m : modes) {
    if (m < 0 || m >= n) throw std::out_of_range("extract_modes: mode index out of range");
    if (seen[static_cast<std::size_t>(m)]) throw std::invalid_argument("extract_modes: duplicate mode index");
    seen[static_cast<std::size_t>(m)] = true;
  }
  const int k = static_cast<int>(modes.size());
  if (k == 0) throw std::invalid_argument("extract_modes: empty mode list");
  Vector d(2 * k);
  Matrix v(2 * k, 2 * k);
  for (int a = 0; a < k; ++a) {
    d.segment(2 * a, 2) = state.displacement().segment(2 * modes[a], 2);
    for (int b = 0; b < k; ++b) {
      v.block(2 * a, 2 * b, 2, 2) = state.covariance().block(2 * modes[a], 2 * modes[b], 2, 2);
    }
  }
  return GaussianState(std::move(d), std::move(v));
}

inline GaussianState extract_modes(const GaussianState& state, std::initializer_list<int> modes) {
  return extract_modes(state, std::span<const int>(modes.begin(), modes.size()));
}

// Uncorrelated joint state a ⊗ b.
inline GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
  const auto na = a.displacement().size();
  const auto nb = b.displacement().size();
  Vector d(na + nb);
  d << a.displacement(), b.displacement();
  Matrix v = Matrix::Zero(na + nb, na + nb);
  v.topLeftCorner(na, na) = a.covariance();
  v.bottomRightCorner(nb, nb) = b.covariance();
  return GaussianState(std::move(d), std::move(v));
}

// Uhlmann fidelity between two single-mode Gaussian states:
//   F = ½ exp(-½ dᵀ(V₁+V₂)⁻¹d) / (√(Λ+Δ) - √Δ),
//   Λ = det(V₁+V₂),  Δ = 16 (det V₁ - 1/16)(det V₂ - 1/16),  d = d₁ - d₂.
inline double uhlmann_fidelity(const GaussianState& s1, const GaussianState& s2) {
  if (s1.n_modes() != 1 || s2.n_modes() != 1) {
    throw std::invalid_argument("uhlmann_fidelity: both states must be single-mode");
  }
  const Matrix& v1 = s1.covariance();
  const Matrix& v2 = s2.covariance();
  const Eigen::Matrix2d sum = v1 + v2;
  const double lambda = sum.determinant();
  double delta = 16.0 * (v1.determinant() - 1.0 / 16.0) * (v2.determinant() - 1.0 / 16.0);
  if (delta < -kPhysicalityTolerance || !(lambda > 0.0)) {
    throw PhysicsError("uhlmann_fidelity: unphysical covariance");
  }
  delta = std::max(delta, 0.0);
  const Eigen::Vector2d d = s1.displacement() - s2.displacement();
  const double exponent = -0.5 * d.dot(sum.inverse() * d);
  double f = 0.5 * std::exp(exponent) / (std::sqrt(lambda + delta) - std::sqrt(delta));
  if (f > 1.0 + kPhysicalityTolerance || f < 0.0) {
    throw PhysicsError("uhlmann_fidelity: result outside [0, 1] beyond round-off (" + std::to_string(f) + ")");
  }
  return std::clamp(f, 0.0, 1.0);
}

// Symplectic eigenvalues ν_k (ascending), each >= 1/4 for a physical state.
inline std::vector<double> symplectic_eigenvalues(const Matrix& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance must be 2n x 2n");
  }
  if (!is_physical_covariance(v)) throw PhysicsError("symplectic_eigenvalues: unphysical covariance");
  const int n = static_cast<int>(v.rows() / 2);
  // Eigenvalues of ΩV are ±iν_k.
  Eigen::EigenSolver<Matrix> solver(symplectic_form(n) * v, false);
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < 2 * n; ++k) mags.push_back(std::abs(solver.eigenvalues()[k]));
  std::sort(mags.begin(), mags.end());
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    nu.push_back(std::max(0.5 * (mags[2 * k] + mags[2 * k + 1]), kVacuumVariance));
  }
  return nu;
}

// g(n) = (n+1) ln(n+1) - n ln n, the entropy of a thermal mode with mean
// occupation n, in nats.  g(0) = 0.
inline double thermal_entropy(double n) {
  if (n <= 0.0) return 0.0;
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

inline double von_neumann_entropy(const Matrix& v) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(v)) s += thermal_entropy((4.0 * nu - 1.0) / 2.0);
  return s;
}

// Differential entropy ln(2πe v) of an isotropic two-dimensional Gaussian
// with per-quadrature variance v.
inline double differential_entropy_gaussian(double v) {
  if (!(v > 0.0)) throw std::invalid_argument("differential_entropy_gaussian: variance must be positive");
  return std::log(2.0 * std::numbers::pi * std::numbers::e * v);
}

}  // namespace cvtele
