#pragma once

#include <string>

#include "raqsim/entropy.hpp"

namespace raqsim {

// Plain (P2) and raw (P5) portable graymaps, maxval <= 255.
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

}  // namespace raqsim
