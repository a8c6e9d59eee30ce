#include "advids/numerics/kernels.hpp"

#include <cstdint>

namespace advids::numerics::kernels {

namespace {

inline double conv_out_element(const double* x, std::size_t c_in,
                               std::size_t len, const double* w,
                               std::size_t k, std::size_t pad,
                               std::size_t co, std::size_t i, double bias) {
    double acc = bias;
    for (std::size_t ci = 0; ci < c_in; ++ci) {
        const double* xr = x + ci * len;
        const double* wr = w + (co * c_in + ci) * k;
        for (std::size_t t = 0; t < k; ++t) {
            // padded index i + t maps to source index i + t - pad
            std::int64_t src = static_cast<std::int64_t>(i + t) -
                               static_cast<std::int64_t>(pad);
            if (src >= 0 && src < static_cast<std::int64_t>(len)) {
                acc += wr[t] * xr[src];
            }
        }
    }
    return acc;
}

inline double conv_gx_element(const double* w, std::size_t c_in,
                              const double* gout, std::size_t out_len,
                              std::size_t c_out, std::size_t k,
                              std::size_t pad, std::size_t ci, std::size_t j) {
    // gx(ci, j) = sum over co, t of w(co, ci, t) * gout(co, j + pad - t)
    double acc = 0.0;
    for (std::size_t co = 0; co < c_out; ++co) {
        const double* wr = w + (co * c_in + ci) * k;
        const double* gr = gout + co * out_len;
        for (std::size_t t = 0; t < k; ++t) {
            std::int64_t op = static_cast<std::int64_t>(j + pad) -
                              static_cast<std::int64_t>(t);
            if (op >= 0 && op < static_cast<std::int64_t>(out_len)) {
                acc += wr[t] * gr[op];
            }
        }
    }
    return acc;
}

inline double conv_gw_element(const double* x, std::size_t len,
                              const double* gout, std::size_t out_len,
                              std::size_t pad, std::size_t ci, std::size_t t,
                              std::size_t co, std::size_t c_in) {
    const double* xr = x + ci * len;
    const double* gr = gout + co * out_len;
    double acc = 0.0;
    for (std::size_t i = 0; i < out_len; ++i) {
        std::int64_t src = static_cast<std::int64_t>(i + t) -
                           static_cast<std::int64_t>(pad);
        if (src >= 0 && src < static_cast<std::int64_t>(len)) {
            acc += gr[i] * xr[src];
        }
    }
    return acc;
}

}  // namespace

namespace serial {

void conv1d_forward(const double* x, std::size_t c_in, std::size_t len,
                    const double* w, const double* b, std::size_t c_out,
                    std::size_t k, std::size_t pad, double* out,
                    std::size_t out_len) {
    for (std::size_t co = 0; co < c_out; ++co) {
        for (std::size_t i = 0; i < out_len; ++i) {
            out[co * out_len + i] =
                conv_out_element(x, c_in, len, w, k, pad, co, i, b[co]);
        }
    }
}

void conv1d_backward(const double* x, std::size_t c_in, std::size_t len,
                     const double* w, std::size_t c_out, std::size_t k,
                     std::size_t pad, const double* gout, std::size_t out_len,
                     double* gx, double* gw, double* gb) {
    for (std::size_t ci = 0; ci < c_in; ++ci) {
        for (std::size_t j = 0; j < len; ++j) {
            gx[ci * len + j] =
                conv_gx_element(w, c_in, gout, out_len, c_out, k, pad, ci, j);
        }
    }
    for (std::size_t co = 0; co < c_out; ++co) {
        for (std::size_t ci = 0; ci < c_in; ++ci) {
            for (std::size_t t = 0; t < k; ++t) {
                gw[(co * c_in + ci) * k + t] +=
                    conv_gw_element(x, len, gout, out_len, pad, ci, t, co, c_in);
            }
        }
    }
    for (std::size_t co = 0; co < c_out; ++co) {
        double acc = 0.0;
        const double* gr = gout + co * out_len;
        for (std::size_t i = 0; i < out_len; ++i) acc += gr[i];
        gb[co] += acc;
    }
}

void linear_forward(const double* x, std::size_t in_n, const double* w,
                    const double* b, std::size_t out_n, double* y) {
    for (std::size_t o = 0; o < out_n; ++o) {
        const double* wr = w + o * in_n;
        double acc = b[o];
        for (std::size_t i = 0; i < in_n; ++i) acc += wr[i] * x[i];
        y[o] = acc;
    }
}

void linear_backward(const double* x, std::size_t in_n, const double* w,
                     std::size_t out_n, const double* g, double* gx,
                     double* gw, double* gb) {
    for (std::size_t i = 0; i < in_n; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < out_n; ++o) acc += w[o * in_n + i] * g[o];
        gx[i] = acc;
    }
    for (std::size_t o = 0; o < out_n; ++o) {
        const double go = g[o];
        double* gwr = gw + o * in_n;
        for (std::size_t i = 0; i < in_n; ++i) gwr[i] += go * x[i];
        gb[o] += go;
    }
}

}  // namespace serial

namespace omp {

void conv1d_forward(const double* x, std::size_t c_in, std::size_t len,
                    const double* w, const double* b, std::size_t c_out,
                    std::size_t k, std::size_t pad, double* out,
                    std::size_t out_len) {
#pragma omp parallel for schedule(static)
    for (std::size_t co = 0; co < c_out; ++co) {
        for (std::size_t i = 0; i < out_len; ++i) {
            out[co * out_len + i] =
                conv_out_element(x, c_in, len, w, k, pad, co, i, b[co]);
        }
    }
}

void conv1d_backward(const double* x, std::size_t c_in, std::size_t len,
                     const double* w, std::size_t c_out, std::size_t k,
                     std::size_t pad, const double* gout, std::size_t out_len,
                     double* gx, double* gw, double* gb) {
#pragma omp parallel for schedule(static)
    for (std::size_t ci = 0; ci < c_in; ++ci) {
        for (std::size_t j = 0; j < len; ++j) {
            gx[ci * len + j] =
                conv_gx_element(w, c_in, gout, out_len, c_out, k, pad, ci, j);
        }
    }
#pragma omp parallel for schedule(static)
    for (std::size_t co = 0; co < c_out; ++co) {
        for (std::size_t ci = 0; ci < c_in; ++ci) {
            for (std::size_t t = 0; t < k; ++t) {
                gw[(co * c_in + ci) * k + t] +=
                    conv_gw_element(x, len, gout, out_len, pad, ci, t, co, c_in);
            }
        }
    }
#pragma omp parallel for schedule(static)
    for (std::size_t co = 0; co < c_out; ++co) {
        double acc = 0.0;
        const double* gr = gout + co * out_len;
        for (std::size_t i = 0; i < out_len; ++i) acc += gr[i];
        gb[co] += acc;
    }
}

void linear_forward(const double* x, std::size_t in_n, const double* w,
                    const double* b, std::size_t out_n, double* y) {
#pragma omp parallel for schedule(static)
    for (std::size_t o = 0; o < out_n; ++o) {
        const double* wr = w + o * in_n;
        double acc = b[o];
        for (std::size_t i = 0; i < in_n; ++i) acc += wr[i] * x[i];
        y[o] = acc;
    }
}

void linear_backward(const double* x, std::size_t in_n, const double* w,
                     std::size_t out_n, const double* g, double* gx,
                     double* gw, double* gb) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < in_n; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < out_n; ++o) acc += w[o * in_n + i] * g[o];
        gx[i] = acc;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t o = 0; o < out_n; ++o) {
        const double go = g[o];
        double* gwr = gw + o * in_n;
        for (std::size_t i = 0; i < in_n; ++i) gwr[i] += go * x[i];
        gb[o] += go;
    }
}

}  // namespace omp

}  // namespace advids::numerics::kernels
