#pragma once

// Hermite basis algebra and Gaussian quadrature for the normalized measure
// (4*pi)^{-1/2} exp(-y^2/4) dy.  The basis is H_k(y) = 2^{k/2} He_k(y/sqrt(2))
// with He_k the monic probabilist polynomial, so H_0 = 1, H_2 = y^2 - 2,
// H_4 = y^4 - 12 y^2 + 12 and <H_j,H_k> = delta_jk 2^k k!.
//
// Two scalar instantiations are used throughout: Rational (exact oracle path)
// and double (grid path).

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace translab {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return x.template convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Hard cap on polynomial degree; 2^k k! based constants stay representable.
inline constexpr int kMaxHermiteDegree = 64;

enum class Parity { Even, Odd, Mixed };

/// A finite polynomial sum c_0 H_0 + ... + c_N H_N.
template <class Scalar>
struct HermiteSeries {
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Coeffs c;

  HermiteSeries() : c(Coeffs::Zero(1)) {}
  explicit HermiteSeries(Coeffs coeffs) : c(std::move(coeffs)) {
    if (c.size() == 0) c = Coeffs::Zero(1);
    if (c.size() > kMaxHermiteDegree + 1)
      throw std::invalid_argument("HermiteSeries: degree overflow");
  }

  int degree() const {
    for (int k = int(c.size()) - 1; k >= 0; --k)
      if (c[k] != Scalar(0)) return k;
    return 0;
  }

  Scalar coeff(int k) const { return k < c.size() ? c[k] : Scalar(0); }

  Parity parity() const {
    bool even = true, odd = true;
    for (int k = 0; k < c.size(); ++k) {
      if (c[k] == Scalar(0)) continue;
      (k % 2 == 0 ? odd : even) = false;
    }
    if (even && !odd) return Parity::Even;
    if (odd && !even) return Parity::Odd;
    if (even && odd) return Parity::Even;  // zero series
    return Parity::Mixed;
  }

  HermiteSeries truncated(int max_deg) const {
    Coeffs out = Coeffs::Zero(max_deg + 1);
    for (int k = 0; k <= max_deg && k < c.size(); ++k) out[k] = c[k];
    return HermiteSeries(std::move(out));
  }
};

/// ||H_k||^2 = 2^k k! for the normalized measure.
template <class Scalar>
Scalar hermite_norm_sq(int k) {
  if (k < 0 || k > kMaxHermiteDegree) throw std::invalid_argument("hermite_norm_sq: degree overflow");
  Scalar v(1);
  for (int j = 1; j <= k; ++j) v *= Scalar(2) * Scalar(j);
  return v;
}

/// The basis polynomial H_k as a series.
template <class Scalar>
HermiteSeries<Scalar> hermite_poly(int k, int max_degree = kMaxHermiteDegree) {
  if (k < 0 || k > max_degree) throw std::invalid_argument("hermite_poly: degree overflow");
  typename HermiteSeries<Scalar>::Coeffs c =
      HermiteSeries<Scalar>::Coeffs::Zero(k + 1);
  c[k] = Scalar(1);
  return HermiteSeries<Scalar>(std::move(c));
}

/// Monomial coefficients of the series, exact via H_{k+1} = y H_k - 2k H_{k-1}.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> to_monomial(const HermiteSeries<Scalar>& f) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int n = int(f.c.size());
  // rows: basis polynomials in monomial form
  std::vector<Vec> H(n);
  for (int k = 0; k < n; ++k) H[k] = Vec::Zero(n);
  H[0][0] = Scalar(1);
  if (n > 1) H[1][1] = Scalar(1);
  for (int k = 1; k + 1 < n; ++k) {
    Vec next = Vec::Zero(n);
    for (int m = 0; m + 1 < n; ++m) next[m + 1] += H[k][m];
    next -= Scalar(2 * k) * H[k - 1];
    H[k + 1] = next;
  }
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) out += f.c[k] * H[k];
  return out;
}

/// Inverse of to_monomial: expand a monomial-coefficient polynomial in the basis.
template <class Scalar>
HermiteSeries<Scalar> from_monomial(Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mono) {
  const int n = int(mono.size());
  if (n > kMaxHermiteDegree + 1) throw std::invalid_argument("from_monomial: degree overflow");
  typename HermiteSeries<Scalar>::Coeffs out =
      HermiteSeries<Scalar>::Coeffs::Zero(std::max(n, 1));
  // peel from the top: leading monomial coefficient of H_k is 1
  for (int k = n - 1; k >= 0; --k) {
    Scalar ck = mono[k];
    if (ck == Scalar(0)) continue;
    out[k] = ck;
    auto hk = to_monomial(hermite_poly<Scalar>(k));
    for (int m = 0; m <= k; ++m) mono[m] -= ck * hk[m];
  }
  return HermiteSeries<Scalar>(std::move(out));
}

template <class Scalar>
HermiteSeries<Scalar> operator+(const HermiteSeries<Scalar>& f, const HermiteSeries<Scalar>& g) {
  const int n = int(std::max(f.c.size(), g.c.size()));
  typename HermiteSeries<Scalar>::Coeffs c = HermiteSeries<Scalar>::Coeffs::Zero(n);
  for (int k = 0; k < n; ++k) c[k] = f.coeff(k) + g.coeff(k);
  return HermiteSeries<Scalar>(std::move(c));
}

template <class Scalar>
HermiteSeries<Scalar> operator-(const HermiteSeries<Scalar>& f, const HermiteSeries<Scalar>& g) {
  const int n = int(std::max(f.c.size(), g.c.size()));
  typename HermiteSeries<Scalar>::Coeffs c = HermiteSeries<Scalar>::Coeffs::Zero(n);
  for (int k = 0; k < n; ++k) c[k] = f.coeff(k) - g.coeff(k);
  return HermiteSeries<Scalar>(std::move(c));
}

template <class Scalar>
HermiteSeries<Scalar> operator*(const Scalar& a, const HermiteSeries<Scalar>& f) {
  auto c = f.c;
  c *= a;
  return HermiteSeries<Scalar>(std::move(c));
}

/// Exact product, re-expanded via H_m H_n = sum_j C(m,j) C(n,j) j! 2^j H_{m+n-2j}.
template <class Scalar>
HermiteSeries<Scalar> multiply(const HermiteSeries<Scalar>& f, const HermiteSeries<Scalar>& g) {
  const int df = f.degree(), dg = g.degree();
  if (df + dg > kMaxHermiteDegree) throw std::invalid_argument("multiply: degree overflow");
  typename HermiteSeries<Scalar>::Coeffs out =
      HermiteSeries<Scalar>::Coeffs::Zero(df + dg + 1);
  for (int m = 0; m <= df; ++m) {
    if (f.coeff(m) == Scalar(0)) continue;
    for (int n = 0; n <= dg; ++n) {
      if (g.coeff(n) == Scalar(0)) continue;
      Scalar cmn = f.coeff(m) * g.coeff(n);
      // j-th linearization coefficient, built incrementally
      Scalar lin(1);
      for (int j = 0; j <= std::min(m, n); ++j) {
        if (j > 0) {
          // C(m,j)C(n,j) j! 2^j  =  prev * (m-j+1)(n-j+1) * 2 / j
          lin = lin * Scalar(m - j + 1) * Scalar(n - j + 1) * Scalar(2) / Scalar(j);
        }
        out[m + n - 2 * j] += cmn * lin;
      }
    }
  }
  return HermiteSeries<Scalar>(std::move(out));
}

/// <f,g> under the normalized Gaussian measure, exact from orthogonality.
template <class Scalar>
Scalar gauss_inner(const HermiteSeries<Scalar>& f, const HermiteSeries<Scalar>& g) {
  const int n = int(std::min(f.c.size(), g.c.size()));
  Scalar acc(0), nrm(1);
  for (int k = 0; k < n; ++k) {
    if (k > 0) nrm *= Scalar(2) * Scalar(k);
    acc += f.coeff(k) * g.coeff(k) * nrm;
  }
  return acc;
}

template <class Scalar>
Scalar gauss_norm_sq(const HermiteSeries<Scalar>& f) {
  return gauss_inner(f, f);
}

/// d/dy in the basis:  H_k' = k H_{k-1}.
template <class Scalar>
HermiteSeries<Scalar> differentiate(const HermiteSeries<Scalar>& f) {
  const int d = f.degree();
  typename HermiteSeries<Scalar>::Coeffs c =
      HermiteSeries<Scalar>::Coeffs::Zero(std::max(d, 1));
  for (int k = 1; k <= d; ++k) c[k - 1] = Scalar(k) * f.coeff(k);
  return HermiteSeries<Scalar>(std::move(c));
}

/// Ornstein-Uhlenbeck operator L = d^2/dy^2 - (y/2) d/dy + 1, computed by exact
/// polynomial differentiation in monomial form (the eigenrelation
/// L H_k = (1 - k/2) H_k is a tested consequence, not an input).
template <class Scalar>
HermiteSeries<Scalar> apply_OU(const HermiteSeries<Scalar>& f) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec m = to_monomial(f);
  const int n = int(m.size());
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    if (m[k] == Scalar(0)) continue;
    if (k >= 2) out[k - 2] += Scalar(k) * Scalar(k - 1) * m[k];  // f''
    out[k] += (Scalar(1) - Scalar(k) / Scalar(2)) * m[k];        // -(y/2) f' + f
  }
  return from_monomial(std::move(out));
}

enum class Sector { Plus, Zero, Minus };

/// Spectral projection: Plus keeps H_0,H_1; Zero keeps H_2; Minus the rest.
template <class Scalar>
HermiteSeries<Scalar> project(const HermiteSeries<Scalar>& f, Sector s) {
  typename HermiteSeries<Scalar>::Coeffs c =
      HermiteSeries<Scalar>::Coeffs::Zero(f.c.size());
  for (int k = 0; k < f.c.size(); ++k) {
    bool keep = false;
    switch (s) {
      case Sector::Plus: keep = (k <= 1); break;
      case Sector::Zero: keep = (k == 2); break;
      case Sector::Minus: keep = (k >= 3); break;
    }
    if (keep) c[k] = f.c[k];
  }
  return HermiteSeries<Scalar>(std::move(c));
}

/// Evaluate H_k at all grid points via the three-term recurrence.
inline Eigen::ArrayXd hermite_values(int k, const Eigen::ArrayXd& y) {
  if (k < 0 || k > kMaxHermiteDegree) throw std::invalid_argument("hermite_values: degree overflow");
  Eigen::ArrayXd hm = Eigen::ArrayXd::Ones(y.size());
  if (k == 0) return hm;
  Eigen::ArrayXd h = y;
  for (int j = 1; j < k; ++j) {
    Eigen::ArrayXd next = y * h - 2.0 * j * hm;
    hm.swap(h);
    h.swap(next);
  }
  return h;
}

inline Eigen::ArrayXd eval(const HermiteSeries<double>& f, const Eigen::ArrayXd& y) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(y.size());
  Eigen::ArrayXd hm = Eigen::ArrayXd::Ones(y.size());
  Eigen::ArrayXd h = y;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k == 0) {
      out += f.coeff(0) * hm;
    } else if (k == 1) {
      out += f.coeff(1) * h;
    } else {
      Eigen::ArrayXd next = y * h - 2.0 * (k - 1) * hm;
      hm.swap(h);
      h.swap(next);
      out += f.coeff(k) * h;
    }
  }
  return out;
}

inline double eval(const HermiteSeries<double>& f, double y) {
  Eigen::ArrayXd pt(1);
  pt[0] = y;
  return eval(f, pt)[0];
}

/// Quintic smoothstep cutoff: 1 for r <= 1, 0 for r >= 2.
inline double smoothstep_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  double s = 2.0 - r;
  return ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
}

/// Truncation rule for grid-sampled profiles: either eta(|y|/|tau|^delta) or a
/// fixed radius eta(|y|/R).
struct Cutoff {
  enum class Mode { None, TauPower, FixedRadius } mode = Mode::None;
  double delta = 0.1;
  double radius = 4.25;

  static Cutoff none() { return {}; }
  static Cutoff tau_power(double delta) { return {Mode::TauPower, delta, 0.0}; }
  static Cutoff fixed_radius(double R) { return {Mode::FixedRadius, 0.0, R}; }

  double scale(std::optional<double> tau) const {
    switch (mode) {
      case Mode::None: return std::numeric_limits<double>::infinity();
      case Mode::TauPower:
        if (!tau) return std::numeric_limits<double>::infinity();
        return std::pow(std::abs(*tau), delta);
      case Mode::FixedRadius: return radius;
    }
    return std::numeric_limits<double>::infinity();
  }

  Eigen::ArrayXd values(const Eigen::ArrayXd& y, std::optional<double> tau) const {
    double s = scale(tau);
    if (!std::isfinite(s)) return Eigen::ArrayXd::Ones(y.size());
    Eigen::ArrayXd out(y.size());
    for (int i = 0; i < y.size(); ++i) out[i] = smoothstep_cutoff(std::abs(y[i]) / s);
    return out;
  }
};

/// Weighted-trapezoid quadrature on a symmetric truncated line for the
/// normalized Gaussian measure.  Every use is gated by self_test().
struct GaussianQuadrature {
  Eigen::ArrayXd y;  // nodes, uniform, symmetric about 0
  Eigen::ArrayXd w;  // (4 pi)^{-1/2} e^{-y^2/4} h with trapezoid end factors

  static GaussianQuadrature make(double L = 30.0, double h = 0.005) {
    // nodes (i - m) h are bitwise symmetric about 0, so odd moments of even
    // samples cancel exactly
    const int m = int(std::round(L / h));
    const int n = 2 * m + 1;
    GaussianQuadrature q;
    q.y.resize(n);
    q.w.resize(n);
    const double c = 1.0 / std::sqrt(4.0 * M_PI);
    for (int i = 0; i < n; ++i) {
      double yi = (i - m) * h;
      q.y[i] = yi;
      double wi = c * std::exp(-0.25 * yi * yi) * h;
      if (i == 0 || i == n - 1) wi *= 0.5;
      q.w[i] = wi;
    }
    return q;
  }

  double inner(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) const {
    return (f * g * w).sum();
  }

  double norm_sq(const Eigen::ArrayXd& f) const { return inner(f, f); }

  /// Relative error of the worst ||H_k||^2 against 2^k k!, k <= kmax.
  double self_test_error(int kmax = 8) const {
    double worst = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      double num = norm_sq(hermite_values(k, y));
      double ex = to_double(hermite_norm_sq<Rational>(k));
      worst = std::max(worst, std::abs(num - ex) / ex);
    }
    return worst;
  }

  bool self_test(int kmax = 8, double rel_tol = 1e-3) const {
    return self_test_error(kmax) <= rel_tol;
  }
};

/// <samples, H_k> / ||H_k||^2 by weighted trapezoid, with the optional cutoff
/// applied to the samples when tau is supplied.  Throws if the quadrature grid
/// fails its own norm reproduction gate.
inline double discrete_projection(const GaussianQuadrature& q, const Eigen::ArrayXd& samples,
                                  int k, std::optional<double> tau = std::nullopt,
                                  const Cutoff& cutoff = Cutoff::none()) {
  if (!q.self_test(std::max(k, 4)))
    throw std::runtime_error("discrete_projection: grid too coarse (quadrature self-test failed)");
  Eigen::ArrayXd s = samples;
  if (tau) s *= cutoff.values(q.y, tau);
  double nrm = to_double(hermite_norm_sq<Rational>(k));
  return q.inner(s, hermite_values(k, q.y)) / nrm;
}

template <class Scalar>
HermiteSeries<double> to_double_series(const HermiteSeries<Scalar>& f) {
  Eigen::VectorXd c(f.c.size());
  for (int k = 0; k < f.c.size(); ++k) c[k] = to_double(f.c[k]);
  return HermiteSeries<double>(std::move(c));
}

}  // namespace translab
