#ifndef GL_CARPET_MAXIMIZER_HPP_
#define GL_CARPET_MAXIMIZER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gl_carpet/entropy.hpp"
#include "gl_carpet/random.hpp"
#include "gl_carpet/search.hpp"

namespace gl_carpet {

struct LocalMax {
  double x = 0.0;
  double value = 0.0;
};

struct MaximizerReport {
  std::vector<LocalMax> maxima;  // ascending in x
  double global_value = 0.0;
  double value_tolerance = 0.0;
  double separation_tolerance = 0.0;
  int certified_count = 0;
  // Every refined local maximum before the value filter, for diagnostics.
  std::vector<LocalMax> candidates;
};

struct MaximizerOptions {
  double value_tol = 1e-9;
  double sep_tol = 1e-4;
  int grid_points = 4096;
  double refine_width = 1e-12;
};

namespace detail {

// Brackets every grid-local maximum of `fn` on [0, 1] (endpoints included),
// refines each by golden section and merges refinements closer than sep_tol.
template <class Fn>
std::vector<LocalMax> refined_local_maxima(Fn&& fn, int grid_points, double sep_tol,
                                           double refine_width) {
  const int n = grid_points;
  std::vector<double> xs(n + 1);
  std::vector<double> vs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = static_cast<double>(i) / n;
    vs[i] = fn(xs[i]);
  }
  std::vector<LocalMax> found;
  for (int i = 0; i <= n; ++i) {
    const bool left_ok = i == 0 || vs[i] >= vs[i - 1];
    const bool right_ok = i == n || vs[i] >= vs[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = xs[std::max(0, i - 1)];
    const double hi = xs[std::min(n, i + 1)];
    LineMaximum m = golden_section_max(fn, lo, hi, refine_width);
    if (vs[i] > m.value) {
      m.x = xs[i];
      m.value = vs[i];
    }
    found.push_back({m.x, m.value});
  }
  std::sort(found.begin(), found.end(),
            [](const LocalMax& a, const LocalMax& b) { return a.x < b.x; });
  // Merge clusters, keeping the best member of each.
  std::vector<LocalMax> merged;
  for (const LocalMax& m : found) {
    if (!merged.empty() && m.x - merged.back().x <= sep_tol) {
      if (m.value > merged.back().value) merged.back() = m;
    } else {
      merged.push_back(m);
    }
  }
  return merged;
}

}  // namespace detail

/// Global maxima of objective_f on [0, 1].
///
/// Every grid-local maximum (the endpoints count) is refined by golden
/// section; refinements within sep_tol of each other are one cluster, and
/// clusters whose value is within value_tol of the best are reported.
inline MaximizerReport global_maxima(const CarpetSpec& spec,
                                     const MaximizerOptions& opts = {}) {
  spec.validate();
  if (!(opts.value_tol > 0.0) || !(opts.sep_tol > 0.0)) {
    throw std::invalid_argument("global_maxima: tolerances must be positive");
  }
  if (opts.grid_points < 256) {
    throw std::invalid_argument("global_maxima: grid_points must be >= 256");
  }
  auto f = [&spec](double x) { return objective_f(x, spec); };
  auto df = [&spec](double x) { return objective_f_derivative(x, spec); };
  MaximizerReport r;
  r.value_tolerance = opts.value_tol;
  r.separation_tolerance = opts.sep_tol;
  r.candidates = detail::refined_local_maxima(f, opts.grid_points, opts.sep_tol,
                                              opts.refine_width);
  // Golden section on values only pins x to about sqrt(eps); where f' changes
  // sign around the refined point, bisect on f' instead.
  for (LocalMax& m : r.candidates) {
    const double h = 1.0 / opts.grid_points;
    const double lo = std::max(m.x - h, 0.5 * m.x);
    const double hi = std::min(m.x + h, 0.5 * (1.0 + m.x));
    if (!(lo > 0.0 && hi < 1.0)) continue;
    if (!(df(lo) > 0.0 && df(hi) < 0.0)) continue;
    const double x = bisect_root(df, lo, hi, 0.0);
    const double v = f(x);
    if (v >= m.value - 1e-14) m = {x, std::max(v, m.value)};
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const LocalMax& m : r.candidates) best = std::max(best, m.value);
  for (const LocalMax& m : r.candidates) {
    if (best - m.value <= opts.value_tol) r.maxima.push_back(m);
  }
  r.global_value = best;
  r.certified_count = static_cast<int>(r.maxima.size());
  return r;
}

struct GapCertificate {
  double max_gap = 0.0;
  std::vector<double> roots;  // tangency points where g is within root_tol of 0
  double root_tolerance = 0.0;
  int grid_points = 0;

  bool certified(double gap_tol = 1e-10) const {
    return max_gap <= gap_tol && roots.size() >= 2;
  }
};

/// Checks g(x) <= 0 on [0, 1] and locates its zeros.
///
/// max_gap is the larger of the grid maximum and every refined local
/// maximum. A root is a refined local maximum of g with |g| <= root_tol;
/// transversal sign changes (only possible when the certificate fails) are
/// not listed.
inline GapCertificate verify_gap_nonpositive(const DerivedConstants& consts,
                                             int grid_points = 100000,
                                             double root_tol = 1e-10) {
  if (grid_points < 2) {
    throw std::invalid_argument("verify_gap_nonpositive: grid_points must be >= 2");
  }
  auto g = [&consts](double x) { return gap_g(x, consts); };
  GapCertificate cert;
  cert.root_tolerance = root_tol;
  cert.grid_points = grid_points;
  cert.max_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_points; ++i) {
    cert.max_gap = std::max(cert.max_gap, g(static_cast<double>(i) / grid_points));
  }
  const auto local = detail::refined_local_maxima(g, grid_points, 1e-4, 1e-12);
  for (const LocalMax& m : local) {
    cert.max_gap = std::max(cert.max_gap, m.value);
    if (std::abs(m.value) <= root_tol) cert.roots.push_back(m.x);
  }
  return cert;
}

struct SimplexOptions {
  int resolution = 40;
  int restarts = 8;
  std::uint64_t seed = 0;
  // Above this many lattice points the lattice is sampled instead of
  // enumerated.
  std::int64_t lattice_budget = 2'000'000;
};

struct SimplexResult {
  std::vector<double> best_p;
  double best_value = 0.0;
  std::int64_t lattice_points_evaluated = 0;
};

inline constexpr int kSimplexMaxSymbols = 8;

namespace detail {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Enumerates compositions of `total` into `parts` nonnegative integers in
// lexicographic order.
template <class Visit>
void for_each_composition(int total, int parts, Visit&& visit) {
  std::vector<int> c(parts, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == parts - 1) {
      c[pos] = remaining;
      visit(c);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      c[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

// Pairwise mass transfers with shrinking step; each accepted move keeps p on
// the simplex and strictly increases the objective.
template <class Fn>
double simplex_coordinate_ascent(std::vector<double>& p, Fn&& value, double start_step) {
  const std::size_t n = p.size();
  double best = value(p);
  double step = start_step;
  std::vector<double> trial(n);
  while (step > 1e-13) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double delta = std::min(step, p[j]);
        if (delta <= 0.0) continue;
        trial = p;
        trial[i] += delta;
        trial[j] -= delta;
        const double v = value(trial);
        if (v > best) {
          best = v;
          p = trial;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      const double s = std::accumulate(p.begin(), p.end(), 0.0);
      for (double& v : p) v /= s;
      best = value(p);
    }
  }
  return best;
}

}  // namespace detail

/// Brute-force maximum of pressure_bernoulli over the whole probability
/// simplex on ell_a + ell_b symbols.
///
/// Lattice points with denominator `resolution` are scored (all of them,
/// or a seeded sample when the lattice exceeds the budget); the best
/// `restarts` lattice points plus `restarts` seeded random interior points
/// are then polished by pairwise coordinate ascent.
inline SimplexResult simplex_bruteforce(const CarpetSpec& spec,
                                        const SimplexOptions& opts = {}) {
  spec.validate();
  const int n = spec.alphabet_size();
  if (n > kSimplexMaxSymbols) {
    throw std::invalid_argument("simplex_bruteforce: alphabet exceeds 8 symbols");
  }
  if (opts.resolution < 10) {
    throw std::invalid_argument("simplex_bruteforce: resolution must be >= 10");
  }
  if (opts.restarts < 1) {
    throw std::invalid_argument("simplex_bruteforce: restarts must be >= 1");
  }
  auto value = [&spec](const std::vector<double>& p) {
    return pressure_bernoulli(p, spec);
  };
  auto normalized = [](std::vector<double> p) {
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= s;
    return p;
  };

  SeededRng rng(opts.seed);
  const int res = opts.resolution;
  // (value, lattice vector) of the best lattice points, best first.
  std::vector<std::pair<double, std::vector<double>>> top;
  auto consider = [&](const std::vector<int>& c) {
    std::vector<double> p(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) p[k] = static_cast<double>(c[k]) / res;
    const double v = value(p);
    if (static_cast<int>(top.size()) < opts.restarts || v > top.back().first) {
      top.emplace_back(v, std::move(p));
      std::stable_sort(top.begin(), top.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      if (static_cast<int>(top.size()) > opts.restarts) top.pop_back();
    }
  };

  SimplexResult out;
  const std::int64_t lattice = detail::binomial(res + n - 1, n - 1);
  if (lattice <= opts.lattice_budget) {
    detail::for_each_composition(res, n, consider);
    out.lattice_points_evaluated = lattice;
  } else {
    // Uniform sample of compositions via sorted cut points.
    std::vector<int> cuts(n - 1);
    std::vector<int> c(n);
    for (std::int64_t s = 0; s < opts.lattice_budget; ++s) {
      for (int& cut : cuts) cut = static_cast<int>(rng.uniform_int(res + 1));
      std::sort(cuts.begin(), cuts.end());
      int prev = 0;
      for (int k = 0; k < n - 1; ++k) {
        c[k] = cuts[k] - prev;
        prev = cuts[k];
      }
      c[n - 1] = res - prev;
      consider(c);
    }
    out.lattice_points_evaluated = opts.lattice_budget;
  }

  std::vector<std::vector<double>> starts;
  for (auto& [v, p] : top) starts.push_back(p);
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<double> p(n);
    for (double& v : p) v = rng.exponential();
    starts.push_back(normalized(std::move(p)));
  }

  out.best_value = -std::numeric_limits<double>::infinity();
  for (auto& p : starts) {
    const double v =
        detail::simplex_coordinate_ascent(p, value, 1.0 / static_cast<double>(res));
    if (v > out.best_value) {
      out.best_value = v;
      out.best_p = p;
    }
  }
  return out;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_MAXIMIZER_HPP_
