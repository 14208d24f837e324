#include "foltor/homog.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "foltor/errors.hpp"
#include "foltor/rng.hpp"

namespace foltor {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

double wrap_angle(long double a) {
  long double r = std::fmod(a, static_cast<long double>(kTwoPi));
  if (r < 0.0L) r += static_cast<long double>(kTwoPi);
  return static_cast<double>(r);
}

double TrigPoly::value(double y) const {
  double acc = c0_;
  for (std::size_t k = 0; k < cos_.size(); ++k) acc += cos_[k] * std::cos((k + 1.0) * y);
  for (std::size_t k = 0; k < sin_.size(); ++k) acc += sin_[k] * std::sin((k + 1.0) * y);
  return acc;
}

double TrigPoly::deriv(double y) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < cos_.size(); ++k) acc -= (k + 1.0) * cos_[k] * std::sin((k + 1.0) * y);
  for (std::size_t k = 0; k < sin_.size(); ++k) acc += (k + 1.0) * sin_[k] * std::cos((k + 1.0) * y);
  return acc;
}

double TrigPoly::deriv2(double y) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double w = (k + 1.0);
    acc -= w * w * cos_[k] * std::cos(w * y);
  }
  for (std::size_t k = 0; k < sin_.size(); ++k) {
    const double w = (k + 1.0);
    acc -= w * w * sin_[k] * std::sin(w * y);
  }
  return acc;
}

const TrigPoly& QuadHomogField::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle: offset of row i is i*n - i(i-1)/2
  const int idx = i * n - i * (i - 1) / 2 + (j - i);
  return upper[static_cast<std::size_t>(idx)];
}

Eigen::MatrixXd QuadHomogField::matrix_at(double y) const {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      a(i, j) = entry(i, j).value(y);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

QuadHomogField constant_field(const Eigen::MatrixXd& a) {
  QuadHomogField field;
  field.n = static_cast<int>(a.rows());
  for (int i = 0; i < field.n; ++i) {
    for (int j = i; j < field.n; ++j) {
      field.upper.push_back(TrigPoly::constant(a(i, j)));
    }
  }
  return field;
}

QuadHomogField rotating_field(double d1, double d2, double phase) {
  // R(y+c)^T diag(d1,d2) R(y+c) expands into degree-2 trig polys:
  //   A11 = m + r cos(2y+2c), A12 = r sin(2y+2c), A22 = m - r cos(2y+2c)
  const double m = 0.5 * (d1 + d2);
  const double r = 0.5 * (d1 - d2);
  const double c2 = std::cos(2 * phase), s2 = std::sin(2 * phase);
  QuadHomogField field;
  field.n = 2;
  field.upper = {
      TrigPoly(m, {0.0, r * c2}, {0.0, -r * s2}),
      TrigPoly(0.0, {0.0, r * s2}, {0.0, r * c2}),
      TrigPoly(m, {0.0, -r * c2}, {0.0, r * s2}),
  };
  return field;
}

QuadHomogField seeded_definite_field(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  const double d1 = rng.uniform(0.6, 2.0);
  const double d2 = rng.uniform(0.4, 1.8);
  const double phase = rng.uniform(0.0, kTwoPi);
  return rotating_field(d1, d2, phase);
}

double HomogFn::eval(const BasePoint& y, const Eigen::VectorXd& v) const {
  return eval(y.angle, v);
}

double HomogFn::eval(double angle, const Eigen::VectorXd& v) const {
  if (static_cast<int>(v.size()) != rank) {
    throw RankMismatch("fiber vector has size " + std::to_string(v.size()) +
                       ", expected " + std::to_string(rank));
  }
  double acc = 0.0;
  for (const auto& [exps, coeff] : terms) {
    double mono = 1.0;
    for (int i = 0; i < rank; ++i) {
      for (int e = 0; e < exps[static_cast<std::size_t>(i)]; ++e) mono *= v[i];
    }
    acc += coeff.value(angle) * mono;
  }
  return acc;
}

Eigen::VectorXd HomogFn::fiber_gradient(double angle, const Eigen::VectorXd& v) const {
  if (static_cast<int>(v.size()) != rank) {
    throw RankMismatch("fiber vector has size " + std::to_string(v.size()) +
                       ", expected " + std::to_string(rank));
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(rank);
  for (const auto& [exps, coeff] : terms) {
    const double c = coeff.value(angle);
    for (int j = 0; j < rank; ++j) {
      const int ej = exps[static_cast<std::size_t>(j)];
      if (ej == 0) continue;
      double mono = static_cast<double>(ej);
      for (int i = 0; i < rank; ++i) {
        int e = exps[static_cast<std::size_t>(i)] - (i == j ? 1 : 0);
        for (int k = 0; k < e; ++k) mono *= v[i];
      }
      grad[j] += c * mono;
    }
  }
  return grad;
}

HomogFn homog_from_field(const QuadHomogField& field) {
  HomogFn f;
  f.rank = field.n;
  f.degree = 2;
  for (int i = 0; i < field.n; ++i) {
    for (int j = i; j < field.n; ++j) {
      std::vector<int> exps(static_cast<std::size_t>(field.n), 0);
      exps[static_cast<std::size_t>(i)] += 1;
      exps[static_cast<std::size_t>(j)] += 1;
      TrigPoly coeff = field.entry(i, j);
      if (i != j) {
        coeff = TrigPoly(2 * coeff.c0(),
                         [&] {
                           auto c = coeff.cos_coeffs();
                           for (auto& x : c) x *= 2;
                           return c;
                         }(),
                         [&] {
                           auto s = coeff.sin_coeffs();
                           for (auto& x : s) x *= 2;
                           return s;
                         }());
      }
      f.terms.emplace_back(std::move(exps), std::move(coeff));
    }
  }
  f.definite = is_definite(field).definite;
  return f;
}

HomogFn standard_quadratic() { return homog_from_field(constant_field(Eigen::MatrixXd::Identity(2, 2))); }

HomogFn standard_quartic() {
  HomogFn f;
  f.rank = 2;
  f.degree = 4;
  f.definite = true;
  f.terms = {
      {{4, 0}, TrigPoly::constant(1.0)},
      {{2, 2}, TrigPoly::constant(2.0)},
      {{0, 4}, TrigPoly::constant(1.0)},
  };
  return f;
}

double check_homogeneity(const FiberFn& f, int rank, int k, int samples, std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5851f42d4c957f2dULL);
  const double ts[] = {0.0, 0.5, 2.0};
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double y = rng.uniform(0.0, kTwoPi);
    Eigen::VectorXd v(rank);
    for (int j = 0; j < rank; ++j) v[j] = rng.uniform(-1.0, 1.0);
    const double base = f(y, v);
    for (double t : ts) {
      const double scaled = f(y, Eigen::VectorXd(t * v));
      worst = std::fmax(worst, std::fabs(scaled - std::pow(t, k) * base));
    }
  }
  return worst;
}

Eigen::MatrixXd polarize(const FiberFn& f, int rank, const BasePoint& y, double tol,
                         std::uint64_t seed) {
  Eigen::MatrixXd a(rank, rank);
  for (int i = 0; i < rank; ++i) {
    for (int j = i; j < rank; ++j) {
      Eigen::VectorXd ei = Eigen::VectorXd::Zero(rank);
      Eigen::VectorXd ej = Eigen::VectorXd::Zero(rank);
      ei[i] = 1.0;
      ej[j] = 1.0;
      a(i, j) = 0.5 * (f(y.angle, ei + ej) - f(y.angle, ei) - f(y.angle, ej));
      a(j, i) = a(i, j);
    }
  }
  SplitMix64 rng(seed ^ 0xa3ec647659359acdULL);
  for (int s = 0; s < 24; ++s) {
    Eigen::VectorXd v(rank);
    for (int j = 0; j < rank; ++j) v[j] = rng.uniform(-1.0, 1.0);
    const double direct = f(y.angle, v);
    const double quad = v.dot(a * v);
    if (std::fabs(direct - quad) > tol) {
      throw NotQuadratic("reconstruction residual " + std::to_string(std::fabs(direct - quad)));
    }
  }
  return a;
}

double euler_witness(const HomogFn& f, const BasePoint& y, const Eigen::VectorXd& v) {
  const Eigen::VectorXd grad = f.fiber_gradient(y.angle, v);
  return std::fabs(f.eval(y, v) - v.dot(grad) / f.degree);
}

double min_eigenvalue_sym(const Eigen::MatrixXd& a) {
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = std::sqrt(std::fmax(tr * tr - 4 * det, 0.0));
    return 0.5 * (tr - disc);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DefiniteReport is_definite(const QuadHomogField& field, int grid) {
  DefiniteReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double y = kTwoPi * i / grid;
    const double eig = min_eigenvalue_sym(field.matrix_at(y));
    if (eig < report.min_eigenvalue) {
      report.min_eigenvalue = eig;
      report.at_angle = y;
    }
  }
  report.definite = report.min_eigenvalue > 0.0;
  return report;
}

}  // namespace foltor
