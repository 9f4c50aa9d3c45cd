#ifndef GL_CARPET_CARPET_HPP_
#define GL_CARPET_CARPET_HPP_

// Planar iterated function system of a carpet, plus rendering, chaos-game
// sampling and box counting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gl_carpet/entropy.hpp"
#include "gl_carpet/errors.hpp"
#include "gl_carpet/maximizer.hpp"
#include "gl_carpet/random.hpp"

namespace gl_carpet {

enum class MapFamily { kA, kB };

/// (x, y) -> (contract_x * x + translate_x, contract_y * y + translate_y).
struct AffineMap {
  double contract_x = 0.0;
  double contract_y = 0.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  MapFamily family = MapFamily::kA;
  int index = 0;  // 1-based within the family

  struct Point {
    double x = 0.0;
    double y = 0.0;
  };

  Point apply(Point p) const {
    return {contract_x * p.x + translate_x, contract_y * p.y + translate_y};
  }

  Point fixed_point() const {
    return {translate_x / (1.0 - contract_x), translate_y / (1.0 - contract_y)};
  }
};

using Point = AffineMap::Point;

struct IfsSpec {
  std::vector<AffineMap> maps;  // family a first, then family b
  CarpetSpec source;
};

namespace detail {

inline constexpr double kGeometrySlack = 1e-15;

// Open rectangles [x0, x1] x [y0, y1] overlap in their interiors.
inline bool interiors_overlap(const AffineMap& p, const AffineMap& q) {
  const double px1 = p.translate_x + p.contract_x;
  const double qx1 = q.translate_x + q.contract_x;
  const double py1 = p.translate_y + p.contract_y;
  const double qy1 = q.translate_y + q.contract_y;
  const bool x_sep = px1 <= q.translate_x + kGeometrySlack ||
                     qx1 <= p.translate_x + kGeometrySlack;
  const bool y_sep = py1 <= q.translate_y + kGeometrySlack ||
                     qy1 <= p.translate_y + kGeometrySlack;
  return !(x_sep || y_sep);
}

}  // namespace detail

/// Throws GeometryError unless every first-level rectangle lies in the unit
/// square and their interiors are pairwise disjoint.
inline void check_ifs_geometry(const IfsSpec& ifs) {
  for (const AffineMap& m : ifs.maps) {
    if (!(m.contract_x > 0.0 && m.contract_x < 1.0 && m.contract_y > 0.0 &&
          m.contract_y < 1.0)) {
      throw GeometryError("map is not a strict contraction");
    }
    if (m.translate_x < -detail::kGeometrySlack || m.translate_y < -detail::kGeometrySlack ||
        m.translate_x + m.contract_x > 1.0 + detail::kGeometrySlack ||
        m.translate_y + m.contract_y > 1.0 + detail::kGeometrySlack) {
      throw GeometryError("map image escapes the unit square");
    }
  }
  // Sweep over rectangles sorted by left edge.
  std::vector<std::size_t> order(ifs.maps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ifs.maps[a].translate_x < ifs.maps[b].translate_x;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const AffineMap& p = ifs.maps[order[i]];
    const double right = p.translate_x + p.contract_x;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const AffineMap& q = ifs.maps[order[j]];
      if (q.translate_x >= right - detail::kGeometrySlack) break;
      if (detail::interiors_overlap(p, q)) {
        std::ostringstream os;
        os << "rectangles of maps " << order[i] << " and " << order[j] << " overlap";
        throw GeometryError(os.str());
      }
    }
  }
}

/// One column per map: the k-th map overall (family a first) sits at
/// horizontal offset 2(k-1)e^{-lambda}. Family a hugs the bottom edge,
/// family b the top edge.
inline IfsSpec build_ifs(const CarpetSpec& spec) {
  spec.validate();
  IfsSpec ifs;
  ifs.source = spec;
  const double cx = std::exp(-spec.lambda);
  const double cya = std::exp(-spec.psi_a);
  const double cyb = std::exp(-spec.psi_b);
  ifs.maps.reserve(static_cast<std::size_t>(spec.alphabet_size()));
  int column = 0;
  for (int r = 1; r <= spec.ell_a; ++r, ++column) {
    ifs.maps.push_back({cx, cya, 2.0 * column * cx, 0.0, MapFamily::kA, r});
  }
  for (int s = 1; s <= spec.ell_b; ++s, ++column) {
    ifs.maps.push_back({cx, cyb, 2.0 * column * cx, 1.0 - cyb, MapFamily::kB, s});
  }
  check_ifs_geometry(ifs);
  return ifs;
}

/// Hausdorff dimension of the attractor: the maximum of the dimension
/// objective over Bernoulli measures.
inline double hausdorff_dimension(const CarpetSpec& spec,
                                  const MaximizerOptions& opts = {}) {
  return global_maxima(spec, opts).global_value;
}

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top; 1 = covered
  std::int64_t rectangles = 0;

  bool at(int col, int row) const {
    return pixels[static_cast<std::size_t>(row) * width + col] != 0;
  }
  std::int64_t occupied() const {
    return std::count(pixels.begin(), pixels.end(), std::uint8_t{1});
  }
};

inline constexpr std::int64_t kDefaultRectangleCap = 10'000'000;

// Region of the plane mapped onto the image.
struct Viewport {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

/// Bounding box of the first-level rectangles. For strongly anisotropic
/// carpets this is far narrower than the unit square.
inline Viewport first_level_extent(const IfsSpec& ifs) {
  Viewport v{1.0, 0.0, 1.0, 0.0};
  for (const AffineMap& m : ifs.maps) {
    v.x0 = std::min(v.x0, m.translate_x);
    v.x1 = std::max(v.x1, m.translate_x + m.contract_x);
    v.y0 = std::min(v.y0, m.translate_y);
    v.y1 = std::max(v.y1, m.translate_y + m.contract_y);
  }
  return v;
}

/// Marks every pixel touched by an image of the unit square under a
/// depth-fold composition of maps. Rectangles thinner than a pixel still
/// mark one pixel in that direction; rectangles outside the viewport are
/// skipped.
inline Raster rasterize(const IfsSpec& ifs, int depth, int width_px, int height_px,
                        std::int64_t rectangle_cap = kDefaultRectangleCap,
                        const Viewport& view = {}) {
  if (!(view.x1 > view.x0) || !(view.y1 > view.y0)) {
    throw std::invalid_argument("rasterize: empty viewport");
  }
  if (depth < 1) throw std::invalid_argument("rasterize: depth must be >= 1");
  if (width_px < 16 || height_px < 16) {
    throw std::invalid_argument("rasterize: image must be at least 16x16");
  }
  if (ifs.maps.empty()) throw std::invalid_argument("rasterize: empty IFS");
  const auto n = static_cast<std::int64_t>(ifs.maps.size());
  std::int64_t total = 1;
  for (int d = 0; d < depth; ++d) {
    if (total > rectangle_cap / n) {
      throw ResourceError("rasterize: rectangle count exceeds cap");
    }
    total *= n;
  }
  if (total > rectangle_cap) {
    throw ResourceError("rasterize: rectangle count exceeds cap");
  }

  Raster img;
  img.width = width_px;
  img.height = height_px;
  img.pixels.assign(static_cast<std::size_t>(width_px) * height_px, 0);

  auto pixel_span = [](double lo, double hi, double origin, double extent, int size) {
    lo = (lo - origin) / extent;
    hi = (hi - origin) / extent;
    int a = static_cast<int>(std::floor(lo * size));
    int b = static_cast<int>(std::ceil(hi * size)) - 1;
    a = std::clamp(a, 0, size - 1);
    b = std::clamp(b, 0, size - 1);
    if (b < a) b = a;
    return std::pair<int, int>{a, b};
  };

  // Composite affine map: scale and offset per axis.
  struct Frame {
    double sx, sy, tx, ty;
  };
  const double xw = view.x1 - view.x0;
  const double yh = view.y1 - view.y0;
  auto paint = [&](const Frame& f) {
    ++img.rectangles;
    if (f.tx > view.x1 || f.tx + f.sx < view.x0 || f.ty > view.y1 || f.ty + f.sy < view.y0) {
      return;
    }
    const auto [c0, c1] = pixel_span(f.tx, f.tx + f.sx, view.x0, xw, width_px);
    const auto [r0, r1] = pixel_span(f.ty, f.ty + f.sy, view.y0, yh, height_px);
    for (int r = r0; r <= r1; ++r) {
      const int row = height_px - 1 - r;
      std::fill_n(img.pixels.begin() + static_cast<std::ptrdiff_t>(row) * width_px + c0,
                  c1 - c0 + 1, std::uint8_t{1});
    }
  };
  auto descend = [&](auto&& self, const Frame& f, int level) -> void {
    if (level == depth) {
      paint(f);
      return;
    }
    for (const AffineMap& m : ifs.maps) {
      self(self,
           Frame{f.sx * m.contract_x, f.sy * m.contract_y, f.tx + f.sx * m.translate_x,
                 f.ty + f.sy * m.translate_y},
           level + 1);
    }
  };
  descend(descend, Frame{1.0, 1.0, 0.0, 0.0}, 0);
  return img;
}

/// Weights of the Bernoulli measure with a-mass x, uniform within each
/// family. These are the measures the dimension objective ranges over.
inline std::vector<double> bernoulli_weights(const CarpetSpec& spec, double x) {
  spec.validate();
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("bernoulli_weights: x outside [0,1]");
  std::vector<double> w(static_cast<std::size_t>(spec.alphabet_size()));
  std::fill_n(w.begin(), spec.ell_a, x / spec.ell_a);
  std::fill(w.begin() + spec.ell_a, w.end(), (1.0 - x) / spec.ell_b);
  return w;
}

/// Random iteration x_{k+1} = S_{i_k}(x_k) with i_k drawn from `weights`.
/// Starts at the centre of the square; the first burn_in iterates are
/// discarded.
inline std::vector<Point> chaos_game(const std::vector<AffineMap>& maps,
                                     std::span<const double> weights,
                                     std::int64_t n_points, std::int64_t burn_in,
                                     std::uint64_t seed) {
  if (weights.size() != maps.size()) {
    throw std::invalid_argument("chaos_game: weights length must match map count");
  }
  if (n_points < 1) throw std::invalid_argument("chaos_game: n_points must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("chaos_game: burn_in must be >= 0");
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::domain_error("chaos_game: negative weight");
    acc += weights[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw std::domain_error("chaos_game: weights sum to zero");
  for (double& c : cdf) c /= acc;
  cdf.back() = 1.0;

  SeededRng rng(seed);
  Point p{0.5, 0.5};
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (std::int64_t k = 0; k < burn_in + n_points; ++k) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                         cdf.size() - 1);
    p = maps[i].apply(p);
    if (k >= burn_in) out.push_back(p);
  }
  return out;
}

inline std::vector<Point> chaos_game(const IfsSpec& ifs, std::span<const double> weights,
                                     std::int64_t n_points, std::int64_t burn_in,
                                     std::uint64_t seed) {
  return chaos_game(ifs.maps, weights, n_points, burn_in, seed);
}

struct BoxCountReport {
  std::vector<int> levels;        // k, box side 2^{-k}
  std::vector<double> scales;     // 2^{-k}, strictly decreasing
  std::vector<std::int64_t> counts;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Occupied dyadic boxes of side 2^{-k} for k in [k_min, k_max], and the
/// least-squares slope of log(count) against k log 2.
inline BoxCountReport box_count(std::span<const Point> points, int k_min, int k_max) {
  if (points.size() < 1000) {
    throw std::invalid_argument("box_count: at least 1000 points required");
  }
  if (!(k_min >= 1 && k_min < k_max && k_max <= 16)) {
    throw std::invalid_argument("box_count: need 1 <= k_min < k_max <= 16");
  }
  const bool degenerate = std::all_of(points.begin(), points.end(), [&](const Point& p) {
    return p.x == points.front().x && p.y == points.front().y;
  });
  if (degenerate) throw std::domain_error("box_count: all points are identical");

  BoxCountReport rep;
  std::vector<std::uint64_t> keys(points.size());
  for (int k = k_min; k <= k_max; ++k) {
    const double side = std::ldexp(1.0, k);
    const auto cells = static_cast<std::int64_t>(side);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto ix = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor(points[i].x * side)), 0, cells - 1);
      const auto iy = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor(points[i].y * side)), 0, cells - 1);
      keys[i] = (static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy);
    }
    std::sort(keys.begin(), keys.end());
    const auto distinct = std::unique(keys.begin(), keys.end()) - keys.begin();
    rep.levels.push_back(k);
    rep.scales.push_back(std::ldexp(1.0, -k));
    rep.counts.push_back(distinct);
  }

  const auto m = static_cast<double>(rep.levels.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const double x = rep.levels[i] * kLog2;
    const double y = std::log(static_cast<double>(rep.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  rep.slope = cxy / vx;
  rep.intercept = (sy - rep.slope * sx) / m;
  rep.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return rep;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_CARPET_HPP_
