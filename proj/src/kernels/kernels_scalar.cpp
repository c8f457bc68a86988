// Scalar reference kernels. The SIMD variants are validated against these.

#include "cordreg/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cordreg::kernels {
namespace {

void lerp_scalar(const float* a, const float* b, float t, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
}

MaskedMoments masked_moments_scalar(const float* f, const float* m, const std::uint8_t* mask,
                                    std::size_t n) {
    MaskedMoments mm;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        const double fv = f[i], mv = m[i];
        mm.sum_f += fv;
        mm.sum_m += mv;
        mm.sum_ff += fv * fv;
        mm.sum_mm += mv * mv;
        mm.sum_fm += fv * mv;
        ++mm.count;
    }
    return mm;
}

void nonzero_sum_count_scalar(const float* v, std::size_t n, float eps, double* sum,
                              std::int64_t* count) {
    double s = 0.0;
    std::int64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(v[i]) > eps) {
            s += v[i];
            ++c;
        }
    }
    *sum = s;
    *count = c;
}

void trilinear_gather_scalar(const float* vol, int nx, int ny, int nz, const float* xs,
                             const float* ys, const float* zs, std::size_t n, Oob oob,
                             float* out) {
    const std::size_t sy = static_cast<std::size_t>(nx);
    const std::size_t sz = static_cast<std::size_t>(nx) * ny;
    for (std::size_t p = 0; p < n; ++p) {
        float x = xs[p], y = ys[p], z = zs[p];
        if (oob == Oob::clamp) {
            x = std::clamp(x, 0.0f, static_cast<float>(nx - 1));
            y = std::clamp(y, 0.0f, static_cast<float>(ny - 1));
            z = std::clamp(z, 0.0f, static_cast<float>(nz - 1));
        } else if (x < 0.0f || x > nx - 1 || y < 0.0f || y > ny - 1 || z < 0.0f || z > nz - 1) {
            out[p] = 0.0f;
            continue;
        }
        const int i0 = static_cast<int>(std::floor(x));
        const int j0 = static_cast<int>(std::floor(y));
        const int k0 = static_cast<int>(std::floor(z));
        const int i1 = std::min(i0 + 1, nx - 1);
        const int j1 = std::min(j0 + 1, ny - 1);
        const int k1 = std::min(k0 + 1, nz - 1);
        const float fx = x - i0, fy = y - j0, fz = z - k0;

        const float* p00 = vol + k0 * sz + j0 * sy;
        const float* p10 = vol + k0 * sz + j1 * sy;
        const float* p01 = vol + k1 * sz + j0 * sy;
        const float* p11 = vol + k1 * sz + j1 * sy;

        const float c00 = p00[i0] + fx * (p00[i1] - p00[i0]);
        const float c10 = p10[i0] + fx * (p10[i1] - p10[i0]);
        const float c01 = p01[i0] + fx * (p01[i1] - p01[i0]);
        const float c11 = p11[i0] + fx * (p11[i1] - p11[i0]);
        const float c0 = c00 + fy * (c10 - c00);
        const float c1 = c01 + fy * (c11 - c01);
        out[p] = c0 + fz * (c1 - c0);
    }
}

void nearest_gather_scalar(const float* vol, int nx, int ny, int nz, const float* xs,
                           const float* ys, const float* zs, std::size_t n, float* out) {
    const std::size_t sy = static_cast<std::size_t>(nx);
    const std::size_t sz = static_cast<std::size_t>(nx) * ny;
    for (std::size_t p = 0; p < n; ++p) {
        const long i = std::lrintf(xs[p]);
        const long j = std::lrintf(ys[p]);
        const long k = std::lrintf(zs[p]);
        if (i < 0 || i >= nx || j < 0 || j >= ny || k < 0 || k >= nz) {
            out[p] = 0.0f;
            continue;
        }
        out[p] = vol[static_cast<std::size_t>(k) * sz + static_cast<std::size_t>(j) * sy +
                     static_cast<std::size_t>(i)];
    }
}

} // namespace

namespace detail {
const Funcs scalar_funcs = {
    lerp_scalar, masked_moments_scalar, nonzero_sum_count_scalar,
    trilinear_gather_scalar, nearest_gather_scalar,
};
} // namespace detail

} // namespace cordreg::kernels
