#ifndef GL_CARPET_ENTROPY_HPP_
#define GL_CARPET_ENTROPY_HPP_

// Entropy functions and the dimension objective of a two-column-type
// Gatzouras-Lalley carpet. All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

namespace gl_carpet {

inline constexpr double kLog2 = 0.69314718055994530942;

/// Parameters of a carpet with base alphabet {a, b}.
///
/// `lambda` is the horizontal log-contraction shared by every map,
/// `psi_a`/`psi_b` the vertical log-contractions over the two symbols and
/// `ell_a`/`ell_b` the number of maps lying over each symbol.
struct CarpetSpec {
  double lambda = 0.0;
  int ell_a = 0;
  int ell_b = 0;
  double psi_a = 0.0;
  double psi_b = 0.0;

  int alphabet_size() const { return ell_a + ell_b; }

  void validate() const {
    if (!(psi_a > 0.0) || !(psi_b > 0.0)) {
      throw std::domain_error("CarpetSpec: psi_a and psi_b must be positive");
    }
    if (ell_a < 1 || ell_b < 1) {
      throw std::domain_error("CarpetSpec: ell_a and ell_b must be >= 1");
    }
    if (!(lambda > psi_a) || !(lambda > psi_b)) {
      throw std::domain_error(
          "CarpetSpec: lambda must exceed both psi_a and psi_b");
    }
  }
};

/// Intermediate constants of the majorant construction.
struct DerivedConstants {
  double b_param = 0.0;  // curvature coefficient B
  double a_param = 0.0;  // majorant height A
  double u_param = 0.0;
  double v_param = 0.0;
  double m_param = 0.0;

  // Largest absolute residual of UV = B, MV - U = B, M = A - B/4.
  double identity_residual() const {
    const double r1 = std::abs(u_param * v_param - b_param);
    const double r2 = std::abs(m_param * v_param - u_param - b_param);
    const double r3 = std::abs(m_param - (a_param - b_param / 4.0));
    return std::max({r1, r2, r3});
  }
};

/// H(x) = -x log x - (1-x) log(1-x), extended by continuity to {0, 1}.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: x outside [0,1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

/// H'(x) = log((1-x)/x) on (0, 1).
inline double binary_entropy_derivative(double x) {
  return std::log1p(-x) - std::log(x);
}

/// Shannon entropy of a probability vector, with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  double sum = 0.0;
  double h = 0.0;
  for (double pi : p) {
    if (!(pi >= 0.0)) {
      throw std::domain_error("shannon_entropy: negative component");
    }
    sum += pi;
    if (pi > 0.0) h -= pi * std::log(pi);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::domain_error("shannon_entropy: components do not sum to 1");
  }
  return h;
}

namespace detail {
inline void check_unit(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(who) + ": x outside [0,1]");
  }
}
}  // namespace detail

/// Dimension objective over Bernoulli measures with nu([a]) = x:
///   f(x) = (log(ell_a/ell_b) x + log ell_b) / lambda
///          + H(x) / (psi_a x + psi_b (1-x)).
inline double objective_f(double x, const CarpetSpec& spec) {
  spec.validate();
  detail::check_unit(x, "objective_f");
  const double la = std::log(static_cast<double>(spec.ell_a));
  const double lb = std::log(static_cast<double>(spec.ell_b));
  const double denom = spec.psi_a * x + spec.psi_b * (1.0 - x);
  return ((la - lb) * x + lb) / spec.lambda + binary_entropy(x) / denom;
}

/// Analytic derivative of objective_f on the open interval (0, 1).
inline double objective_f_derivative(double x, const CarpetSpec& spec) {
  spec.validate();
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("objective_f_derivative: x outside (0,1)");
  }
  const double la = std::log(static_cast<double>(spec.ell_a));
  const double lb = std::log(static_cast<double>(spec.ell_b));
  const double denom = spec.psi_a * x + spec.psi_b * (1.0 - x);
  const double h = binary_entropy(x);
  const double dh = binary_entropy_derivative(x);
  return (la - lb) / spec.lambda +
         (dh * denom - h * (spec.psi_a - spec.psi_b)) / (denom * denom);
}

/// g(x) = U x - M + H(x) / (1 + V x).
inline double gap_g(double x, const DerivedConstants& c) {
  detail::check_unit(x, "gap_g");
  const double denom = 1.0 + c.v_param * x;
  if (!(denom > 0.0)) {
    throw std::domain_error("gap_g: 1 + V x must be positive");
  }
  return c.u_param * x - c.m_param + binary_entropy(x) / denom;
}

/// F(x) = A - B (x - 1/2)^2.
inline double majorant_F(double x, double a_param, double b_param) {
  const double t = x - 0.5;
  return a_param - b_param * t * t;
}

/// Curvature |h''| / (1 + h'^2)^{3/2} from derivative values.
inline double curvature(double second_deriv, double first_deriv) {
  const double s = 1.0 + first_deriv * first_deriv;
  return std::abs(second_deriv) / (s * std::sqrt(s));
}

/// Two-term pressure functional at the Bernoulli measure with weights `p`;
/// the first ell_a entries lie over symbol a.
///
/// Returns (h(p) - H(x)) / lambda + H(x) / (psi_a x + psi_b (1-x)) where
/// x is the total a-mass. For fixed x the value is largest when the weights
/// are uniform within each family, in which case it equals objective_f(x).
inline double pressure_bernoulli(std::span<const double> p,
                                 const CarpetSpec& spec) {
  spec.validate();
  if (p.size() != static_cast<std::size_t>(spec.alphabet_size())) {
    throw std::invalid_argument(
        "pressure_bernoulli: weight vector length must be ell_a + ell_b");
  }
  const double h = shannon_entropy(p);
  double x = std::accumulate(p.begin(), p.begin() + spec.ell_a, 0.0);
  x = std::clamp(x, 0.0, 1.0);
  const double hx = binary_entropy(x);
  const double denom = spec.psi_a * x + spec.psi_b * (1.0 - x);
  return (h - hx) / spec.lambda + hx / denom;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_ENTROPY_HPP_
