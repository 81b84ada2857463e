#pragma once

#include <string>
#include <utility>

#include "kolmo/field.hpp"

namespace kolmo {

// Flat binary checkpoint, little-endian IEEE-754 doubles throughout:
//   bytes  0..11   magic "KOLMO-CKPT\0\0"
//   bytes 12..15   version (uint32, = 1)
//   u64 n, f64 L, f64 t
//   3 components x n^3 (re, im) pairs in lexicographic signed-mode order
//   (mx, then my, then mz, each running -n/2 .. n/2-1).
// Round trips are bit-exact.

void write_checkpoint(const std::string& path, const SpectralVectorField& field, double t);

std::pair<SpectralVectorField, double> read_checkpoint(const std::string& path);

}  // namespace kolmo
