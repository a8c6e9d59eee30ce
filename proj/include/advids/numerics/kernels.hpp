#pragma once

#include <cstddef>

namespace advids::numerics::kernels {

// Raw numeric kernels shared by the layer implementations. Every kernel
// comes in two variants: the serial reference in `serial::` and an
// OpenMP-parallel version in `omp::`. The parallel variants split work by
// output element only — each element is produced by one thread with the
// same inner summation order as the reference — so both variants are
// bit-identical for any thread count.
//
// Conventions: x is (c_in, len) row-major, w is (c_out, c_in, k) row-major,
// cross-correlation with zero padding `pad`, stride 1.
// out length = len + 2*pad - k + 1.

namespace serial {

void conv1d_forward(const double* x, std::size_t c_in, std::size_t len,
                    const double* w, const double* b, std::size_t c_out,
                    std::size_t k, std::size_t pad, double* out,
                    std::size_t out_len);

// Accumulates into gw/gb; writes gx.
void conv1d_backward(const double* x, std::size_t c_in, std::size_t len,
                     const double* w, std::size_t c_out, std::size_t k,
                     std::size_t pad, const double* gout, std::size_t out_len,
                     double* gx, double* gw, double* gb);

// y = W x + b; W is (out_n, in_n).
void linear_forward(const double* x, std::size_t in_n, const double* w,
                    const double* b, std::size_t out_n, double* y);

// Accumulates into gw/gb; writes gx = W^T g.
void linear_backward(const double* x, std::size_t in_n, const double* w,
                     std::size_t out_n, const double* g, double* gx,
                     double* gw, double* gb);

}  // namespace serial

namespace omp {

void conv1d_forward(const double* x, std::size_t c_in, std::size_t len,
                    const double* w, const double* b, std::size_t c_out,
                    std::size_t k, std::size_t pad, double* out,
                    std::size_t out_len);

void conv1d_backward(const double* x, std::size_t c_in, std::size_t len,
                     const double* w, std::size_t c_out, std::size_t k,
                     std::size_t pad, const double* gout, std::size_t out_len,
                     double* gx, double* gw, double* gb);

void linear_forward(const double* x, std::size_t in_n, const double* w,
                    const double* b, std::size_t out_n, double* y);

void linear_backward(const double* x, std::size_t in_n, const double* w,
                     std::size_t out_n, const double* g, double* gx,
                     double* gw, double* gb);

}  // namespace omp

}  // namespace advids::numerics::kernels
