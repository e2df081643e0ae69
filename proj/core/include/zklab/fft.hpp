#pragma once

#include "zklab/grid.hpp"

namespace zklab::fft {

// Number of threads FFTW may use for plans created after this call.
void set_threads(int n);
int threads();

// Unnormalised complex transforms on arrays laid out with x fastest.
// Forward uses exp(-i k x), backward exp(+i k x).
void forward_2d(int nx, int ny, const cplx* in, cplx* out);
void backward_2d(int nx, int ny, const cplx* in, cplx* out);
void forward_3d(int nx, int ny, int nt, const cplx* in, cplx* out);
void backward_3d(int nx, int ny, int nt, const cplx* in, cplx* out);

}  // namespace zklab::fft
