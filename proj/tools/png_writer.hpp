#ifndef GL_CARPET_TOOLS_PNG_WRITER_HPP_
#define GL_CARPET_TOOLS_PNG_WRITER_HPP_

#include <png.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl_carpet/carpet.hpp"

namespace gl_carpet::tools {

// 8-bit grayscale PNG, covered pixels black.
inline void write_png(const std::string& path, const Raster& img) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::ios_base::failure("cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("libpng initialisation failed");
  }
  std::vector<png_byte> row(static_cast<std::size_t>(img.width));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::ios_base::failure("libpng write failed for " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) row[c] = img.at(c, r) ? 0 : 255;
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw std::ios_base::failure("cannot close " + path);
}

}  // namespace gl_carpet::tools

#endif  // GL_CARPET_TOOLS_PNG_WRITER_HPP_
