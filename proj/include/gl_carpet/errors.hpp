#ifndef GL_CARPET_ERRORS_HPP_
#define GL_CARPET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gl_carpet {

// Raised when a synthesized parameter set fails an internal consistency
// check (e.g. 4A - B <= 0, lambda <= 1 + V).
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// Overlapping or escaping first-level rectangles.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Work would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gl_carpet

#endif  // GL_CARPET_ERRORS_HPP_
