#ifndef GL_CARPET_GL_CARPET_HPP_
#define GL_CARPET_GL_CARPET_HPP_

#include "gl_carpet/carpet.hpp"
#include "gl_carpet/constructor.hpp"
#include "gl_carpet/entropy.hpp"
#include "gl_carpet/errors.hpp"
#include "gl_carpet/io.hpp"
#include "gl_carpet/maximizer.hpp"
#include "gl_carpet/random.hpp"
#include "gl_carpet/search.hpp"

#endif  // GL_CARPET_GL_CARPET_HPP_
