#include "foltor/fn1d.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "foltor/errors.hpp"
#include "foltor/rng.hpp"

namespace foltor {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fd_step(double t) {
  static const double h0 = std::pow(2.220446049250313e-16, 0.2);
  return h0 * std::fmax(1.0, std::fabs(t));
}

// Fourth-order first derivative; one-sided near the interval ends.
double fd1(const RealFn& f, double t, double lo, double hi) {
  const double h = fd_step(t);
  if (t - 2 * h >= lo && t + 2 * h <= hi) {
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
  }
  if (t + 4 * h <= hi) {
    return (-25 * f(t) + 48 * f(t + h) - 36 * f(t + 2 * h) + 16 * f(t + 3 * h) -
            3 * f(t + 4 * h)) /
           (12 * h);
  }
  return (25 * f(t) - 48 * f(t - h) + 36 * f(t - 2 * h) - 16 * f(t - 3 * h) +
          3 * f(t - 4 * h)) /
         (12 * h);
}

// Fourth-order second derivative; one-sided variants use the 6-point
// Fornberg stencils.
double fd2(const RealFn& f, double t, double lo, double hi) {
  const double h = fd_step(t);
  if (t - 2 * h >= lo && t + 2 * h <= hi) {
    return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) /
           (12 * h * h);
  }
  static const std::array<double, 6> c = {15.0 / 4, -77.0 / 6, 107.0 / 6,
                                          -13.0,    61.0 / 12, -5.0 / 6};
  double acc = 0.0;
  if (t + 5 * h <= hi) {
    for (int i = 0; i < 6; ++i) acc += c[static_cast<std::size_t>(i)] * f(t + i * h);
  } else {
    for (int i = 0; i < 6; ++i) acc += c[static_cast<std::size_t>(i)] * f(t - i * h);
  }
  return acc / (h * h);
}

struct QuadRule {
  std::array<double, 32> x{};  // nodes on (0,1)
  std::array<double, 32> w{};
};

// Nodes and weights of the 32-point Gauss-Legendre rule, computed once by
// Newton iteration on the Legendre recurrence and mapped to [0,1].
const QuadRule& gl32() {
  static const QuadRule rule = [] {
    QuadRule r;
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 64; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-15) {
          p0 = 1.0;
          p1 = t;
          for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
          }
          dp = n * (t * p1 - p0) / (t * t - 1.0);
          break;
        }
      }
      const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
      const auto j = static_cast<std::size_t>(i);
      r.x[j] = 0.5 * (1.0 - t);
      r.w[j] = 0.5 * weight;
      r.x[31 - j] = 0.5 * (1.0 + t);
      r.w[31 - j] = 0.5 * weight;
    }
    return r;
  }();
  return rule;
}

}  // namespace

double integrate01(const std::function<double(double)>& f) {
  const QuadRule& r = gl32();
  double acc = 0.0;
  for (std::size_t i = 0; i < 32; ++i) acc += r.w[i] * f(r.x[i]);
  return acc;
}

double Fn1D::deriv(double t) const {
  if (d1) return d1(t);
  return fd1(f, t, lo, hi);
}

double Fn1D::deriv2(double t) const {
  if (d2) return d2(t);
  if (d1) return fd1(d1, t, lo, hi);
  return fd2(f, t, lo, hi);
}

Fn1D make_fn(double lo, double hi, RealFn f) { return Fn1D{lo, hi, std::move(f), {}, {}}; }
Fn1D make_fn(double lo, double hi, RealFn f, RealFn d1) {
  return Fn1D{lo, hi, std::move(f), std::move(d1), {}};
}
Fn1D make_fn(double lo, double hi, RealFn f, RealFn d1, RealFn d2) {
  return Fn1D{lo, hi, std::move(f), std::move(d1), std::move(d2)};
}

Fn1D poly_fn(double lo, double hi, std::vector<double> coeffs) {
  auto horner = [](const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  std::vector<double> dc, d2c;
  for (std::size_t i = 1; i < coeffs.size(); ++i) dc.push_back(static_cast<double>(i) * coeffs[i]);
  for (std::size_t i = 1; i < dc.size(); ++i) d2c.push_back(static_cast<double>(i) * dc[i]);
  return make_fn(
      lo, hi, [coeffs, horner](double t) { return horner(coeffs, t); },
      [dc, horner](double t) { return horner(dc, t); },
      [d2c, horner](double t) { return horner(d2c, t); });
}

double derivative_consistency(const Fn1D& fn, int grid) {
  if (!fn.d1) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = fn.lo + (fn.hi - fn.lo) * (i + 0.5) / grid;
    const double a = fn.d1(t);
    const double b = fd1(fn.f, t, fn.lo, fn.hi);
    worst = std::fmax(worst, std::fabs(a - b) / std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b))));
  }
  return worst;
}

Diffeo01 make_diffeo01(Fn1D fn) {
  constexpr double kEndTol = 1e-6;
  const double v0 = fn.f(0.0), v1 = fn.f(1.0);
  Orientation orient;
  if (std::fabs(v0) <= kEndTol && std::fabs(v1 - 1.0) <= kEndTol) {
    orient = Orientation::preserving;
  } else if (std::fabs(v0 - 1.0) <= kEndTol && std::fabs(v1) <= kEndTol) {
    orient = Orientation::reversing;
  } else {
    throw Error("make_diffeo01: endpoint values " + std::to_string(v0) + ", " +
                std::to_string(v1) + " do not fix {0,1}");
  }
  const double sign = orient == Orientation::preserving ? 1.0 : -1.0;
  for (int i = 0; i < 256; ++i) {
    const double t = (i + 1.0) / 257.0;
    if (sign * fn.deriv(t) <= 0.0) {
      throw NotMonotone("derivative sign flips at t = " + std::to_string(t));
    }
  }
  return Diffeo01{std::move(fn), orient};
}

Diffeo01 identity_diffeo() {
  return Diffeo01{make_fn(
                      0.0, 1.0, [](double t) { return t; }, [](double) { return 1.0; },
                      [](double) { return 0.0; }),
                  Orientation::preserving};
}

Diffeo01 compose(const Diffeo01& outer, const Diffeo01& inner) {
  Fn1D o = outer.fn, in = inner.fn;
  Fn1D fn = make_fn(
      0.0, 1.0, [o, in](double t) { return o.f(in.f(t)); },
      [o, in](double t) { return o.deriv(in.f(t)) * in.deriv(t); },
      [o, in](double t) {
        const double u = in.f(t), du = in.deriv(t);
        return o.deriv2(u) * du * du + o.deriv(u) * in.deriv2(t);
      });
  Orientation orient = outer.orientation == inner.orientation ? Orientation::preserving
                                                              : Orientation::reversing;
  return Diffeo01{std::move(fn), orient};
}

Fn1D hadamard_div(const Fn1D& phi) {
  if (std::fabs(phi.f(phi.lo)) > 1e-12) {
    throw NonzeroAtOrigin("phi(0) = " + std::to_string(phi.f(phi.lo)));
  }
  Fn1D p = phi;
  return make_fn(
      phi.lo, phi.hi,
      [p](double t) { return integrate01([&](double s) { return p.deriv(s * t); }); },
      [p](double t) { return integrate01([&](double s) { return s * p.deriv2(s * t); }); });
}

Fn1D whitney_even_root(const Fn1D& gamma, double even_tol, double s0_scale) {
  const double a = gamma.hi;
  if (a <= 0.0 || std::fabs(gamma.lo + gamma.hi) > 1e-12 * std::fmax(1.0, a)) {
    throw Error("whitney_even_root: domain must be symmetric [-a,a]");
  }
  double worst = 0.0;
  for (int i = 1; i <= 256; ++i) {
    const double t = a * i / 256.0;
    worst = std::fmax(worst, std::fabs(gamma.f(t) - gamma.f(-t)));
  }
  if (worst > even_tol) {
    throw NotEven("max |gamma(t)-gamma(-t)| = " + std::to_string(worst));
  }

  Fn1D g = gamma;
  const double s0 = s0_scale * a * a;

  // Away from 0 the chain rule gives phi'(s) = gamma'(sqrt(s)) / (2 sqrt(s));
  // near 0 that quotient degenerates and the derivative comes from the
  // Hadamard integral phi'(t^2) = 1/2 int_0^1 gamma''(u t) du instead.
  auto dphi = [g, s0](double s) {
    if (s >= s0) {
      const double root = std::sqrt(s);
      return g.deriv(root) / (2.0 * root);
    }
    const double root = std::sqrt(std::fmax(s, 0.0));
    return 0.5 * integrate01([&](double u) { return g.deriv2(u * root); });
  };

  // Quadratic model below s0: value and slope anchored at 0, curvature
  // matched so the two branches agree at the seam.
  const double c0 = g.f(0.0);
  const double c1 = dphi(0.0);
  const double c2 = (g.f(std::sqrt(s0)) - c0 - c1 * s0) / (s0 * s0);

  auto value = [g, s0, c0, c1, c2](double s) {
    if (s >= s0) return g.f(std::sqrt(s));
    return c0 + c1 * s + c2 * s * s;
  };
  return make_fn(0.0, a * a, value, dphi);
}

Diffeo01 contract_to_id(const Diffeo01& phi, double t) {
  if (phi.orientation != Orientation::preserving) {
    throw NotOrientationPreserving("contract_to_id needs a preserving diffeomorphism");
  }
  Fn1D p = phi.fn;
  const double w = 1.0 - t;
  Fn1D fn = make_fn(
      0.0, 1.0, [p, w, t](double x) { return w * p.f(x) + t * x; },
      [p, w, t](double x) { return w * p.deriv(x) + t; },
      [p, w](double x) { return w * p.deriv2(x); });
  return Diffeo01{std::move(fn), Orientation::preserving};
}

Diffeo01 invert(const Diffeo01& phi) {
  const double sign = phi.orientation == Orientation::preserving ? 1.0 : -1.0;
  for (int i = 0; i < 256; ++i) {
    const double t = (i + 1.0) / 257.0;
    if (sign * phi.fn.deriv(t) <= 0.0) {
      throw NotMonotone("cannot invert: derivative sign flips at t = " + std::to_string(t));
    }
  }
  Fn1D p = phi.fn;
  const bool increasing = phi.orientation == Orientation::preserving;

  auto solve = [p, increasing](double y) {
    y = std::fmin(std::fmax(y, 0.0), 1.0);
    double lo = 0.0, hi = 1.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double fx = p.f(x) - y;
      if (std::fabs(fx) < 5e-15) break;
      // shrink the bracket, then try a Newton step inside it
      const bool too_high = increasing ? fx > 0.0 : fx < 0.0;
      if (too_high) {
        hi = x;
      } else {
        lo = x;
      }
      const double d = p.deriv(x);
      double next = x - fx / d;
      if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
      x = next;
    }
    return x;
  };

  Fn1D fn = make_fn(
      0.0, 1.0, solve, [p, solve](double y) { return 1.0 / p.deriv(solve(y)); },
      [p, solve](double y) {
        const double x = solve(y);
        const double d = p.deriv(x);
        return -p.deriv2(x) / (d * d * d);
      });
  return Diffeo01{std::move(fn), phi.orientation};
}

Diffeo01 flip_conjugate(const Diffeo01& phi) {
  if (phi.orientation != Orientation::preserving) {
    throw NotOrientationPreserving("flip_conjugate needs a preserving diffeomorphism");
  }
  Fn1D p = phi.fn;
  Fn1D fn = make_fn(
      0.0, 1.0, [p](double t) { return 1.0 - p.f(1.0 - t); },
      [p](double t) { return p.deriv(1.0 - t); },
      [p](double t) { return -p.deriv2(1.0 - t); });
  return Diffeo01{std::move(fn), Orientation::preserving};
}

Diffeo01 seeded_diffeo(std::uint64_t seed) {
  SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  const double amp = rng.uniform(-0.75, 0.75);
  const int freq = static_cast<int>(rng.uniform_int(1, 3));
  const double blend = rng.uniform(-0.7, 0.7);

  // x + amp * sin(pi k x) / (1.25 pi k): derivative >= 1 - |amp|/1.25 > 0.
  const double scale = 1.25 * kPi * freq;
  Fn1D bump = make_fn(
      0.0, 1.0, [amp, freq, scale](double x) { return x + amp * std::sin(kPi * freq * x) / scale; },
      [amp, freq, scale](double x) {
        return 1.0 + amp * kPi * freq * std::cos(kPi * freq * x) / scale;
      },
      [amp, freq, scale](double x) {
        return -amp * kPi * kPi * freq * freq * std::sin(kPi * freq * x) / scale;
      });
  Diffeo01 quad{poly_fn(0.0, 1.0, {0.0, 1.0 - blend, blend}), Orientation::preserving};
  return compose(Diffeo01{std::move(bump), Orientation::preserving}, quad);
}

}  // namespace foltor
