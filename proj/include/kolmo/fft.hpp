#pragma once

#include <complex>

namespace kolmo::detail {

// Thin cached-plan wrapper around FFTW's in-place complex 3D transforms.
// Plans are created with FFTW_ESTIMATE so repeated runs are bit-reproducible.
// Execution is thread safe; plan creation is serialized internally.

/// In-place unnormalized forward DFT (e^{-ikx}) on an n^3 cube, z fastest.
void fft3_forward(int n, std::complex<double>* data);

/// In-place unnormalized backward DFT (e^{+ikx}).
void fft3_backward(int n, std::complex<double>* data);

}  // namespace kolmo::detail
