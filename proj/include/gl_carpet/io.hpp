#ifndef GL_CARPET_IO_HPP_
#define GL_CARPET_IO_HPP_

// Serialization of reports (JSON), point samples (CSV) and rasters (plain PGM).
// Floating-point values are written with 17 significant digits so that they
// round-trip exactly.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gl_carpet/carpet.hpp"
#include "gl_carpet/constructor.hpp"
#include "gl_carpet/entropy.hpp"
#include "gl_carpet/maximizer.hpp"

namespace gl_carpet {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json_impl(std::ostream& os, const Json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json_impl(os, it.value(), indent, level + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_json_impl(os, v, indent, level + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

/// Pretty-prints `j` with every float rendered by format_number.
inline void write_json(std::ostream& os, const Json& j, int indent = 2) {
  detail::write_json_impl(os, j, indent, 0);
  os << "\n";
}

inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

inline Json to_json(const CarpetSpec& s) {
  return Json{{"lambda", s.lambda},
              {"ell_a", s.ell_a},
              {"ell_b", s.ell_b},
              {"psi_a", s.psi_a},
              {"psi_b", s.psi_b}};
}

inline CarpetSpec carpet_spec_from_json(const Json& j) {
  CarpetSpec s;
  s.lambda = j.at("lambda").get<double>();
  s.ell_a = j.at("ell_a").get<int>();
  s.ell_b = j.at("ell_b").get<int>();
  s.psi_a = j.at("psi_a").get<double>();
  s.psi_b = j.at("psi_b").get<double>();
  s.validate();
  return s;
}

inline Json to_json(const DerivedConstants& c) {
  return Json{{"B", c.b_param}, {"A", c.a_param}, {"U", c.u_param},
              {"V", c.v_param}, {"M", c.m_param}};
}

inline Json to_json(const FeasibilityCheck& c) {
  return Json{{"pass", c.pass}, {"margin", c.margin}};
}

inline Json to_json(const FeasibilityReport& r) {
  return Json{{"all_pass", r.all_pass()},
              {"lambda_exceeds_psi", to_json(r.lambda_exceeds_psi)},
              {"horizontal_fit", to_json(r.horizontal_fit)},
              {"vertical_fit", to_json(r.vertical_fit)},
              {"alphabet_inequality", to_json(r.alphabet_inequality)},
              {"lambda_exceeds_1_plus_V", to_json(r.lambda_exceeds_1_plus_v)}};
}

inline Json to_json(const MaximizerReport& r) {
  Json maxima = Json::array();
  for (const LocalMax& m : r.maxima) maxima.push_back(Json{{"x", m.x}, {"value", m.value}});
  Json candidates = Json::array();
  for (const LocalMax& m : r.candidates) {
    candidates.push_back(Json{{"x", m.x}, {"value", m.value}});
  }
  return Json{{"certified_count", r.certified_count},
              {"global_value", r.global_value},
              {"value_tolerance", r.value_tolerance},
              {"separation_tolerance", r.separation_tolerance},
              {"maxima", maxima},
              {"local_maxima", candidates}};
}

inline Json to_json(const GapCertificate& c) {
  return Json{{"max_gap", c.max_gap},
              {"grid_points", c.grid_points},
              {"root_tolerance", c.root_tolerance},
              {"roots", c.roots}};
}

inline Json to_json(const BoxCountReport& r) {
  return Json{{"levels", r.levels},     {"scales", r.scales},
              {"counts", r.counts},     {"slope", r.slope},
              {"intercept", r.intercept}, {"r_squared", r.r_squared}};
}

/// Plain PGM (P2): covered pixels black (0), background white (255).
inline void write_pgm(std::ostream& os, const Raster& img) {
  os << "P2\n" << img.width << " " << img.height << "\n255\n";
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (c) os << ' ';
      os << (img.at(c, r) ? 0 : 255);
    }
    os << '\n';
  }
}

inline void write_points_csv(std::ostream& os, std::span<const Point> points) {
  os << "x,y\n";
  for (const Point& p : points) os << format_number(p.x) << ',' << format_number(p.y) << '\n';
}

/// Reads "x,y" lines; a non-numeric first line is treated as a header.
inline std::vector<Point> read_points_csv(std::istream& is) {
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("read_points_csv: missing comma on line " +
                               std::to_string(lineno));
    }
    try {
      const double x = std::stod(line.substr(0, comma));
      const double y = std::stod(line.substr(comma + 1));
      pts.push_back({x, y});
    } catch (const std::invalid_argument&) {
      if (lineno == 1) continue;
      throw std::runtime_error("read_points_csv: malformed line " + std::to_string(lineno));
    }
  }
  return pts;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_IO_HPP_
