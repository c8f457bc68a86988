// AVX2 kernel variants. Compiled with -mavx2 -mfma; only dispatched to at
// runtime when the CPU reports AVX2. Index arithmetic is 32-bit: callers
// keep volumes below 2^31 voxels.

#if defined(CORDREG_HAVE_AVX2)

#include "cordreg/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace cordreg::kernels {
namespace {

inline double hsum_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void lerp_avx2(const float* a, const float* b, float t, float* out, std::size_t n) {
    const __m256 vt = _mm256_set1_ps(t);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        _mm256_storeu_ps(out + i, _mm256_fmadd_ps(vt, _mm256_sub_ps(vb, va), va));
    }
    for (; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
}

MaskedMoments masked_moments_avx2(const float* f, const float* m, const std::uint8_t* mask,
                                  std::size_t n) {
    __m256d sf = _mm256_setzero_pd(), sm = _mm256_setzero_pd();
    __m256d sff = _mm256_setzero_pd(), smm = _mm256_setzero_pd(), sfm = _mm256_setzero_pd();
    std::int64_t count = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i mb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask + i));
        const __m256i m32 = _mm256_cvtepu8_epi32(mb);
        const __m256i sel = _mm256_cmpgt_epi32(m32, _mm256_setzero_si256());
        const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(sel));
        if (bits == 0) continue;
        count += __builtin_popcount(static_cast<unsigned>(bits));

        const __m256 selps = _mm256_castsi256_ps(sel);
        const __m256 vf = _mm256_and_ps(_mm256_loadu_ps(f + i), selps);
        const __m256 vm = _mm256_and_ps(_mm256_loadu_ps(m + i), selps);

        // Widen before multiplying so per-element rounding matches the
        // scalar reference; only the summation order differs.
        const __m256d flo = _mm256_cvtps_pd(_mm256_castps256_ps128(vf));
        const __m256d fhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vf, 1));
        const __m256d mlo = _mm256_cvtps_pd(_mm256_castps256_ps128(vm));
        const __m256d mhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vm, 1));

        sf = _mm256_add_pd(sf, _mm256_add_pd(flo, fhi));
        sm = _mm256_add_pd(sm, _mm256_add_pd(mlo, mhi));
        sff = _mm256_add_pd(sff, _mm256_add_pd(_mm256_mul_pd(flo, flo), _mm256_mul_pd(fhi, fhi)));
        smm = _mm256_add_pd(smm, _mm256_add_pd(_mm256_mul_pd(mlo, mlo), _mm256_mul_pd(mhi, mhi)));
        sfm = _mm256_add_pd(sfm, _mm256_add_pd(_mm256_mul_pd(flo, mlo), _mm256_mul_pd(fhi, mhi)));
    }
    MaskedMoments mm;
    mm.sum_f = hsum_pd(sf);
    mm.sum_m = hsum_pd(sm);
    mm.sum_ff = hsum_pd(sff);
    mm.sum_mm = hsum_pd(smm);
    mm.sum_fm = hsum_pd(sfm);
    mm.count = count;
    for (; i < n; ++i) {
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

void nonzero_sum_count_avx2(const float* v, std::size_t n, float eps, double* sum,
                            std::int64_t* count) {
    const __m256 abs_mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
    const __m256 veps = _mm256_set1_ps(eps);
    __m256d acc = _mm256_setzero_pd();
    std::int64_t c = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vv = _mm256_loadu_ps(v + i);
        const __m256 nz = _mm256_cmp_ps(_mm256_and_ps(vv, abs_mask), veps, _CMP_GT_OQ);
        const int bits = _mm256_movemask_ps(nz);
        if (bits == 0) continue;
        c += __builtin_popcount(static_cast<unsigned>(bits));
        const __m256 sel = _mm256_and_ps(vv, nz);
        acc = _mm256_add_pd(acc, _mm256_cvtps_pd(_mm256_castps256_ps128(sel)));
        acc = _mm256_add_pd(acc, _mm256_cvtps_pd(_mm256_extractf128_ps(sel, 1)));
    }
    double s = hsum_pd(acc);
    for (; i < n; ++i) {
        if (std::fabs(v[i]) > eps) {
            s += v[i];
            ++c;
        }
    }
    *sum = s;
    *count = c;
}

void trilinear_gather_avx2(const float* vol, int nx, int ny, int nz, const float* xs,
                           const float* ys, const float* zs, std::size_t n, Oob oob,
                           float* out) {
    const __m256 zero = _mm256_setzero_ps();
    const __m256 fnx1 = _mm256_set1_ps(static_cast<float>(nx - 1));
    const __m256 fny1 = _mm256_set1_ps(static_cast<float>(ny - 1));
    const __m256 fnz1 = _mm256_set1_ps(static_cast<float>(nz - 1));
    const __m256i inx1 = _mm256_set1_epi32(nx - 1);
    const __m256i iny1 = _mm256_set1_epi32(ny - 1);
    const __m256i inz1 = _mm256_set1_epi32(nz - 1);
    const __m256i vnx = _mm256_set1_epi32(nx);
    const __m256i vny = _mm256_set1_epi32(ny);
    const __m256i one = _mm256_set1_epi32(1);

    std::size_t p = 0;
    for (; p + 8 <= n; p += 8) {
        __m256 x = _mm256_loadu_ps(xs + p);
        __m256 y = _mm256_loadu_ps(ys + p);
        __m256 z = _mm256_loadu_ps(zs + p);

        __m256 inb = _mm256_castsi256_ps(_mm256_set1_epi32(-1));
        if (oob == Oob::zero) {
            inb = _mm256_and_ps(_mm256_cmp_ps(x, zero, _CMP_GE_OQ),
                                _mm256_cmp_ps(x, fnx1, _CMP_LE_OQ));
            inb = _mm256_and_ps(inb, _mm256_and_ps(_mm256_cmp_ps(y, zero, _CMP_GE_OQ),
                                                   _mm256_cmp_ps(y, fny1, _CMP_LE_OQ)));
            inb = _mm256_and_ps(inb, _mm256_and_ps(_mm256_cmp_ps(z, zero, _CMP_GE_OQ),
                                                   _mm256_cmp_ps(z, fnz1, _CMP_LE_OQ)));
        }
        // Clamp unconditionally so every lane gathers from valid memory.
        x = _mm256_min_ps(_mm256_max_ps(x, zero), fnx1);
        y = _mm256_min_ps(_mm256_max_ps(y, zero), fny1);
        z = _mm256_min_ps(_mm256_max_ps(z, zero), fnz1);

        const __m256 xf = _mm256_floor_ps(x);
        const __m256 yf = _mm256_floor_ps(y);
        const __m256 zf = _mm256_floor_ps(z);
        const __m256 fx = _mm256_sub_ps(x, xf);
        const __m256 fy = _mm256_sub_ps(y, yf);
        const __m256 fz = _mm256_sub_ps(z, zf);

        const __m256i i0 = _mm256_cvttps_epi32(xf);
        const __m256i j0 = _mm256_cvttps_epi32(yf);
        const __m256i k0 = _mm256_cvttps_epi32(zf);
        const __m256i i1 = _mm256_min_epi32(_mm256_add_epi32(i0, one), inx1);
        const __m256i j1 = _mm256_min_epi32(_mm256_add_epi32(j0, one), iny1);
        const __m256i k1 = _mm256_min_epi32(_mm256_add_epi32(k0, one), inz1);

        const __m256i row00 =
            _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(k0, vny), j0), vnx);
        const __m256i row10 =
            _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(k0, vny), j1), vnx);
        const __m256i row01 =
            _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(k1, vny), j0), vnx);
        const __m256i row11 =
            _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(k1, vny), j1), vnx);

        const __m256 c000 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row00, i0), 4);
        const __m256 c100 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row00, i1), 4);
        const __m256 c010 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row10, i0), 4);
        const __m256 c110 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row10, i1), 4);
        const __m256 c001 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row01, i0), 4);
        const __m256 c101 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row01, i1), 4);
        const __m256 c011 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row11, i0), 4);
        const __m256 c111 = _mm256_i32gather_ps(vol, _mm256_add_epi32(row11, i1), 4);

        const __m256 c00 = _mm256_fmadd_ps(fx, _mm256_sub_ps(c100, c000), c000);
        const __m256 c10 = _mm256_fmadd_ps(fx, _mm256_sub_ps(c110, c010), c010);
        const __m256 c01 = _mm256_fmadd_ps(fx, _mm256_sub_ps(c101, c001), c001);
        const __m256 c11 = _mm256_fmadd_ps(fx, _mm256_sub_ps(c111, c011), c011);
        const __m256 c0 = _mm256_fmadd_ps(fy, _mm256_sub_ps(c10, c00), c00);
        const __m256 c1 = _mm256_fmadd_ps(fy, _mm256_sub_ps(c11, c01), c01);
        __m256 res = _mm256_fmadd_ps(fz, _mm256_sub_ps(c1, c0), c0);

        if (oob == Oob::zero) res = _mm256_and_ps(res, inb);
        _mm256_storeu_ps(out + p, res);
    }
    if (p < n)
        detail::scalar_funcs.trilinear_gather(vol, nx, ny, nz, xs + p, ys + p, zs + p, n - p,
                                              oob, out + p);
}

void nearest_gather_avx2(const float* vol, int nx, int ny, int nz, const float* xs,
                         const float* ys, const float* zs, std::size_t n, float* out) {
    const __m256i vzero = _mm256_setzero_si256();
    const __m256i inx1 = _mm256_set1_epi32(nx - 1);
    const __m256i iny1 = _mm256_set1_epi32(ny - 1);
    const __m256i inz1 = _mm256_set1_epi32(nz - 1);
    const __m256i vnx = _mm256_set1_epi32(nx);
    const __m256i vny = _mm256_set1_epi32(ny);

    std::size_t p = 0;
    for (; p + 8 <= n; p += 8) {
        // cvtps_epi32 rounds to nearest-even, same as lrintf under the
        // default rounding mode.
        const __m256i i = _mm256_cvtps_epi32(_mm256_loadu_ps(xs + p));
        const __m256i j = _mm256_cvtps_epi32(_mm256_loadu_ps(ys + p));
        const __m256i k = _mm256_cvtps_epi32(_mm256_loadu_ps(zs + p));

        __m256i inb = _mm256_andnot_si256(_mm256_cmpgt_epi32(vzero, i), _mm256_cmpgt_epi32(vnx, i));
        inb = _mm256_and_si256(inb, _mm256_andnot_si256(_mm256_cmpgt_epi32(vzero, j),
                                                        _mm256_cmpgt_epi32(vny, j)));
        inb = _mm256_and_si256(
            inb, _mm256_andnot_si256(_mm256_cmpgt_epi32(vzero, k),
                                     _mm256_cmpgt_epi32(_mm256_set1_epi32(nz), k)));

        const __m256i ic = _mm256_min_epi32(_mm256_max_epi32(i, vzero), inx1);
        const __m256i jc = _mm256_min_epi32(_mm256_max_epi32(j, vzero), iny1);
        const __m256i kc = _mm256_min_epi32(_mm256_max_epi32(k, vzero), inz1);
        const __m256i idx = _mm256_add_epi32(
            _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(kc, vny), jc), vnx), ic);

        __m256 res = _mm256_i32gather_ps(vol, idx, 4);
        res = _mm256_and_ps(res, _mm256_castsi256_ps(inb));
        _mm256_storeu_ps(out + p, res);
    }
    if (p < n)
        detail::scalar_funcs.nearest_gather(vol, nx, ny, nz, xs + p, ys + p, zs + p, n - p,
                                            out + p);
}

} // namespace

namespace detail {
const Funcs avx2_funcs = {
    lerp_avx2, masked_moments_avx2, nonzero_sum_count_avx2,
    trilinear_gather_avx2, nearest_gather_avx2,
};
} // namespace detail

} // namespace cordreg::kernels

#endif // CORDREG_HAVE_AVX2
