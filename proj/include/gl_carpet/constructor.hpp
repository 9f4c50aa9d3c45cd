#ifndef GL_CARPET_CONSTRUCTOR_HPP_
#define GL_CARPET_CONSTRUCTOR_HPP_

// Synthesis of a carpet whose dimension objective has two maximizers,
// starting from a single curvature coefficient B > 2.
//
// Pipeline: A = max_x B(x-1/2)^2 + H(x); V, U from the identity
// -(Ux - M)(1 + Vx) = A - B(x-1/2)^2; psi_b = 1, psi_a = 1 + V; integers
// ell_a, ell_b with log(ell_a/ell_b) > (1+V)B/V; lambda = log(ell_a/ell_b) V/B.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "gl_carpet/entropy.hpp"
#include "gl_carpet/errors.hpp"
#include "gl_carpet/search.hpp"

namespace gl_carpet {

enum class AlphabetStrategy { kPaperPreset, kMinimal, kExplicit };

inline const char* to_string(AlphabetStrategy s) {
  switch (s) {
    case AlphabetStrategy::kPaperPreset:
      return "paper_preset";
    case AlphabetStrategy::kMinimal:
      return "minimal";
    case AlphabetStrategy::kExplicit:
      return "explicit";
  }
  return "unknown";
}

struct ConstructionOptions {
  AlphabetStrategy alphabet_strategy = AlphabetStrategy::kPaperPreset;
  int explicit_ell_a = 0;  // used by kExplicit only
  int explicit_ell_b = 0;
  double root_tolerance = 1e-12;
  int grid_points = 4096;
  // Test hook: when false, B <= 2 is accepted so the single-maximum regime
  // can be exercised. Never disable outside tests.
  bool enforce_curvature_condition = true;

  void validate() const {
    if (!(root_tolerance > 0.0 && root_tolerance <= 1e-6)) {
      throw std::invalid_argument("ConstructionOptions: root_tolerance must be in (0, 1e-6]");
    }
    if (grid_points < 64) {
      throw std::invalid_argument("ConstructionOptions: grid_points must be >= 64");
    }
  }
};

struct FeasibilityCheck {
  bool pass = false;
  double margin = 0.0;  // bound - attained; positive means pass
};

struct FeasibilityReport {
  FeasibilityCheck lambda_exceeds_psi;     // lambda > max(psi_a, psi_b)
  FeasibilityCheck horizontal_fit;         // 3 e^{-lambda} ell_a < 1
  FeasibilityCheck vertical_fit;           // e^{-psi_a} + e^{-psi_b} < 1
  FeasibilityCheck alphabet_inequality;    // log(ell_a/ell_b) > (1+V)B/V
  FeasibilityCheck lambda_exceeds_1_plus_v;

  bool all_pass() const {
    return lambda_exceeds_psi.pass && horizontal_fit.pass && vertical_fit.pass &&
           alphabet_inequality.pass && lambda_exceeds_1_plus_v.pass;
  }
};

struct MajorantHeight {
  double a_param = 0.0;
  double argmax_x = 0.0;  // maximizer in (0, 1/2]; 1 - argmax_x is the mirror
};

struct Construction {
  CarpetSpec spec;
  DerivedConstants constants;
  FeasibilityReport feasibility;
};

/// rho(x) = B (x - 1/2)^2 + H(x).
inline double majorant_gap_rho(double x, double b_param) {
  const double t = x - 0.5;
  return b_param * t * t + binary_entropy(x);
}

/// A = max over [0,1] of B(x-1/2)^2 + H(x), with the maximizer in (0, 1/2).
///
/// rho' = 2B(x-1/2) + log((1-x)/x) is +inf at 0+, and for B > 2 is negative
/// just left of 1/2 (rho''(1/2) = 2B - 4). A coarse scan brackets the sign
/// change and bisection refines it. When the curvature guard is disabled and
/// no sign change exists (B <= 2), rho is increasing on (0, 1/2) and the
/// maximizer is 1/2 itself.
inline MajorantHeight compute_A(double b_param, const ConstructionOptions& opts = {}) {
  opts.validate();
  if (!std::isfinite(b_param)) {
    throw std::domain_error("compute_A: B must be finite");
  }
  if (opts.enforce_curvature_condition && !(b_param > 2.0)) {
    std::ostringstream os;
    os << "curvature condition violated: B = " << b_param << " must exceed 2";
    throw std::domain_error(os.str());
  }
  if (!(b_param > 0.0)) {
    throw std::domain_error("compute_A: B must be positive");
  }
  auto drho = [b_param](double x) {
    return 2.0 * b_param * (x - 0.5) + binary_entropy_derivative(x);
  };

  // Scan left to right on (0, 1/2) for the first + to - transition of rho'.
  const int n = opts.grid_points;
  const double eps = 0.5 / (4.0 * n);
  double prev_x = eps;
  double prev_d = drho(prev_x);
  bool found = false;
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = eps + (0.5 - 2.0 * eps) * static_cast<double>(i) / n;
    const double d = drho(x);
    if (prev_d > 0.0 && d <= 0.0) {
      lo = prev_x;
      hi = x;
      found = true;
      break;
    }
    prev_x = x;
    prev_d = d;
  }

  MajorantHeight out;
  if (!found) {
    if (opts.enforce_curvature_condition) {
      throw ConstructionError(
          "compute_A: no interior critical point of rho found on (0, 1/2)");
    }
    out.argmax_x = 0.5;
  } else {
    out.argmax_x = bisect_root(drho, lo, hi, opts.root_tolerance);
  }
  out.a_param = majorant_gap_rho(out.argmax_x, b_param);
  // Endpoints are dominated because rho' -> +inf at 0+, but keep the max
  // definition honest.
  const double at_end = b_param / 4.0;
  if (at_end > out.a_param) {
    out.a_param = at_end;
    out.argmax_x = 0.0;
  }
  return out;
}

/// Positive root of (A - B/4) V^2 - B V - B = 0:
///   V = (2B + 4 sqrt(AB)) / (4A - B).
inline double compute_V(double a_param, double b_param) {
  if (!(a_param > 0.0) || !(b_param > 0.0)) {
    throw std::domain_error("compute_V: A and B must be positive");
  }
  const double denom = 4.0 * a_param - b_param;
  if (std::abs(denom) < 1e-14) {
    throw ConstructionError("compute_V: degenerate denominator 4A - B");
  }
  if (denom < 0.0) {
    throw ConstructionError("compute_V: 4A - B must be positive for a positive root");
  }
  const double v = (2.0 * b_param + 4.0 * std::sqrt(a_param * b_param)) / denom;
  const double m = a_param - b_param / 4.0;
  const double residual = m * v * v - b_param * v - b_param;
  if (!(v > 0.0) || std::abs(residual) >= 1e-10 * std::max(1.0, v * v)) {
    throw ConstructionError("compute_V: quadratic residual too large");
  }
  return v;
}

/// U = sqrt(AB) - B/2.
inline double compute_U(double a_param, double b_param) {
  if (!(a_param > 0.0) || !(b_param > 0.0)) {
    throw std::domain_error("compute_U: A and B must be positive");
  }
  return std::sqrt(a_param * b_param) - b_param / 2.0;
}

/// Lower bound (1+V)B/V that log(ell_a/ell_b) must strictly exceed.
inline double alphabet_bound(double v_param, double b_param) {
  return (1.0 + v_param) * b_param / v_param;
}

inline std::pair<int, int> choose_alphabet(double v_param, double b_param,
                                           AlphabetStrategy strategy,
                                           int explicit_ell_a = 0,
                                           int explicit_ell_b = 0) {
  if (!(v_param > 0.0)) {
    throw std::domain_error("choose_alphabet: V must be positive");
  }
  const double bound = alphabet_bound(v_param, b_param);
  auto check = [bound](int la, int lb) {
    if (la < 1 || lb < 1) {
      throw std::domain_error("choose_alphabet: ell_a and ell_b must be >= 1");
    }
    const double lhs = std::log(static_cast<double>(la) / lb);
    if (!(lhs > bound)) {
      std::ostringstream os;
      os.precision(17);
      os << "alphabet inequality violated: log(" << la << "/" << lb
         << ") = " << lhs << " must exceed (1+V)B/V = " << bound;
      throw std::domain_error(os.str());
    }
  };
  switch (strategy) {
    case AlphabetStrategy::kPaperPreset:
      check(150, 1);
      return {150, 1};
    case AlphabetStrategy::kMinimal: {
      if (bound > std::log(static_cast<double>(std::numeric_limits<int>::max() / 2))) {
        throw ConstructionError("choose_alphabet: required ell_a overflows int");
      }
      int la = std::max(1, static_cast<int>(std::floor(std::exp(bound))) - 1);
      while (!(std::log(static_cast<double>(la)) > bound)) ++la;
      check(la, 1);
      return {la, 1};
    }
    case AlphabetStrategy::kExplicit:
      check(explicit_ell_a, explicit_ell_b);
      return {explicit_ell_a, explicit_ell_b};
  }
  throw std::invalid_argument("choose_alphabet: unknown strategy");
}

/// lambda = log(ell_a/ell_b) V / B; must exceed 1 + V.
inline double compute_lambda(int ell_a, int ell_b, double v_param, double b_param) {
  if (ell_a < 1 || ell_b < 1 || !(v_param > 0.0) || !(b_param > 0.0)) {
    throw std::domain_error("compute_lambda: inputs must be positive");
  }
  const double lambda =
      std::log(static_cast<double>(ell_a) / ell_b) * v_param / b_param;
  if (!(lambda > 1.0 + v_param)) {
    std::ostringstream os;
    os.precision(17);
    os << "construction inconsistency: lambda = " << lambda
       << " does not exceed 1 + V = " << 1.0 + v_param;
    throw ConstructionError(os.str());
  }
  return lambda;
}

inline FeasibilityReport validate_feasibility(const CarpetSpec& spec,
                                              const DerivedConstants& consts) {
  FeasibilityReport r;
  const double max_psi = std::max(spec.psi_a, spec.psi_b);
  r.lambda_exceeds_psi.margin = spec.lambda - max_psi;
  r.lambda_exceeds_psi.pass = r.lambda_exceeds_psi.margin > 0.0;

  const double horiz = 3.0 * std::exp(-spec.lambda) * spec.ell_a;
  r.horizontal_fit.margin = 1.0 - horiz;
  r.horizontal_fit.pass = horiz < 1.0;

  const double vert = std::exp(-spec.psi_a) + std::exp(-spec.psi_b);
  r.vertical_fit.margin = 1.0 - vert;
  r.vertical_fit.pass = vert < 1.0;

  const double log_ratio =
      std::log(static_cast<double>(spec.ell_a) / static_cast<double>(spec.ell_b));
  if (consts.v_param > 0.0) {
    const double bound = alphabet_bound(consts.v_param, consts.b_param);
    r.alphabet_inequality.margin = log_ratio - bound;
    r.alphabet_inequality.pass = log_ratio > bound;
  } else {
    r.alphabet_inequality.margin = -std::numeric_limits<double>::infinity();
    r.alphabet_inequality.pass = false;
  }

  r.lambda_exceeds_1_plus_v.margin = spec.lambda - (1.0 + consts.v_param);
  r.lambda_exceeds_1_plus_v.pass = r.lambda_exceeds_1_plus_v.margin > 0.0;
  return r;
}

/// Runs the full pipeline from B. Throws on any failed stage or when the
/// resulting feasibility report is not all-pass.
inline Construction synthesize(double b_param, const ConstructionOptions& opts = {}) {
  opts.validate();
  Construction out;
  const MajorantHeight ah = compute_A(b_param, opts);
  DerivedConstants& c = out.constants;
  c.b_param = b_param;
  c.a_param = ah.a_param;
  c.v_param = compute_V(c.a_param, b_param);
  c.u_param = compute_U(c.a_param, b_param);
  c.m_param = c.a_param - b_param / 4.0;

  CarpetSpec& s = out.spec;
  s.psi_b = 1.0;
  s.psi_a = 1.0 + c.v_param;
  const auto [la, lb] = choose_alphabet(c.v_param, b_param, opts.alphabet_strategy,
                                        opts.explicit_ell_a, opts.explicit_ell_b);
  s.ell_a = la;
  s.ell_b = lb;
  s.lambda = compute_lambda(la, lb, c.v_param, b_param);
  s.validate();

  out.feasibility = validate_feasibility(s, c);
  if (!out.feasibility.all_pass()) {
    throw ConstructionError("synthesize: feasibility checks failed");
  }
  return out;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_CONSTRUCTOR_HPP_
