#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace foltor {

/// Angle on the base circle, kept in [0, 2*pi).
struct BasePoint {
  double angle = 0.0;
};

double wrap_angle(double a);
double wrap_angle(long double a);

/// Finite Fourier sum c0 + sum_k (a_k cos(k y) + b_k sin(k y)); smooth,
/// 2*pi-periodic, exactly differentiable.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(double c0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
      : c0_(c0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {}

  static TrigPoly constant(double c) { return TrigPoly(c, {}, {}); }

  double value(double y) const;
  double deriv(double y) const;
  double deriv2(double y) const;

  double c0() const { return c0_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }

 private:
  double c0_ = 0.0;
  std::vector<double> cos_, sin_;
};

/// Symmetric matrix field y -> A(y) on the circle, stored as trig-poly
/// entries of the upper triangle. Represents the fiberwise quadratic form
/// f(y,v) = v^T A(y) v.
struct QuadHomogField {
  int n = 2;
  std::vector<TrigPoly> upper;  // row-major upper triangle, n*(n+1)/2 entries

  Eigen::MatrixXd matrix_at(double y) const;
  const TrigPoly& entry(int i, int j) const;
};

QuadHomogField constant_field(const Eigen::MatrixXd& a);

/// A(y) = R(y+phase)^T diag(d1,d2) R(y+phase): a rank-2 field whose
/// eigenvalues are constant, so definiteness is exact by construction.
QuadHomogField rotating_field(double d1, double d2, double phase = 0.0);

/// Seeded definite rank-2 field for reproducible verification runs.
QuadHomogField seeded_definite_field(std::uint64_t seed);

/// Fiberwise homogeneous function of integer degree k: a sum of monomials
/// v^e of total degree k with trig-poly coefficients on the base circle.
struct HomogFn {
  int rank = 2;
  int degree = 2;
  bool definite = false;
  std::vector<std::pair<std::vector<int>, TrigPoly>> terms;

  double eval(const BasePoint& y, const Eigen::VectorXd& v) const;  // RankMismatch
  double eval(double angle, const Eigen::VectorXd& v) const;
  Eigen::VectorXd fiber_gradient(double angle, const Eigen::VectorXd& v) const;
};

/// f(y,v) = v^T A(y) v from a symmetric field; definite flag from the
/// min-eigenvalue sweep.
HomogFn homog_from_field(const QuadHomogField& field);

/// |v|^2 on the trivial rank-2 bundle.
HomogFn standard_quadratic();

/// |v|^4 on the trivial rank-2 bundle (degree four, definite).
HomogFn standard_quartic();

using FiberFn = std::function<double(double /*angle*/, const Eigen::VectorXd&)>;

/// Max over seeded samples of |f(y, t v) - t^k f(y, v)| for t in {0, 1/2, 2}.
double check_homogeneity(const FiberFn& f, int rank, int k, int samples,
                         std::uint64_t seed = 0);

/// Recovers the symmetric matrix of a 2-homogeneous fiber function by
/// polarization a_ij = (f(e_i+e_j) - f(e_i) - f(e_j)) / 2 and verifies the
/// reconstruction on random vectors. Throws NotQuadratic.
Eigen::MatrixXd polarize(const FiberFn& f, int rank, const BasePoint& y,
                         double tol = 1e-10, std::uint64_t seed = 0);

/// |f(y,v) - (1/k) sum_i v_i df/dv_i(y,v)| with analytic fiber gradient.
double euler_witness(const HomogFn& f, const BasePoint& y, const Eigen::VectorXd& v);

struct DefiniteReport {
  bool definite = false;
  double min_eigenvalue = 0.0;
  double at_angle = 0.0;
};

/// Min eigenvalue of A(y) over a base grid; definite iff positive.
DefiniteReport is_definite(const QuadHomogField& field, int grid = 128);

/// Smallest eigenvalue of a symmetric matrix (closed form for n = 2,
/// tridiagonalizing solver otherwise).
double min_eigenvalue_sym(const Eigen::MatrixXd& a);

}  // namespace foltor
