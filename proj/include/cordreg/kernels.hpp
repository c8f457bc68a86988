#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace cordreg::kernels {

/// Inner-loop kernels used by resampling, registration and field algebra.
/// Every kernel has a scalar reference implementation plus SIMD variants
/// (AVX2 on x86-64, NEON on arm64) selected once at startup. The variants
/// are equivalence-tested against the scalar reference; reductions may
/// differ from the reference only by floating-point summation order.

enum class Backend { scalar, avx2, neon };

/// Out-of-bounds policy for gather kernels. `zero` is the image convention
/// (background 0), `clamp` the displacement-field convention (edge values
/// extend outward).
enum class Oob { zero, clamp };

/// Masked first/second-order sums for normalized cross-correlation.
struct MaskedMoments {
    double sum_f = 0.0, sum_m = 0.0;
    double sum_ff = 0.0, sum_mm = 0.0, sum_fm = 0.0;
    std::int64_t count = 0;

    MaskedMoments& operator+=(const MaskedMoments& o) {
        sum_f += o.sum_f;
        sum_m += o.sum_m;
        sum_ff += o.sum_ff;
        sum_mm += o.sum_mm;
        sum_fm += o.sum_fm;
        count += o.count;
        return *this;
    }
};

struct Funcs {
    /// out[i] = a[i] + t * (b[i] - a[i])
    void (*lerp)(const float* a, const float* b, float t, float* out, std::size_t n);

    /// Sums over voxels where mask[i] != 0.
    MaskedMoments (*masked_moments)(const float* f, const float* m, const std::uint8_t* mask,
                                    std::size_t n);

    /// Sum and count of entries with |v[i]| > eps (slice-wise symmetrization).
    void (*nonzero_sum_count)(const float* v, std::size_t n, float eps, double* sum,
                              std::int64_t* count);

    /// Trilinear interpolation of `vol` (x-fastest layout, dims nx,ny,nz) at
    /// n voxel-space points (xs,ys,zs). Oob::zero returns 0 outside the hull
    /// of voxel centers; Oob::clamp clamps coordinates into it.
    void (*trilinear_gather)(const float* vol, int nx, int ny, int nz, const float* xs,
                             const float* ys, const float* zs, std::size_t n, Oob oob,
                             float* out);

    /// Nearest-neighbor lookup at n voxel-space points; out of bounds -> 0.
    /// Half-way coordinates round to even, matching std::lrint.
    void (*nearest_gather)(const float* vol, int nx, int ny, int nz, const float* xs,
                           const float* ys, const float* zs, std::size_t n, float* out);
};

/// Active dispatch table. Resolved once: honours CORDREG_KERNELS
/// (auto|scalar|avx2|neon), otherwise picks the widest supported ISA.
const Funcs& funcs();

Backend active_backend();
std::string backend_name(Backend b);

/// Force a backend (tests). Throws cordreg::DataError if unsupported here.
void force_backend(Backend b);

/// Backend availability on this machine.
bool backend_available(Backend b);

namespace detail {
extern const Funcs scalar_funcs;
#if defined(CORDREG_HAVE_AVX2)
extern const Funcs avx2_funcs;
#endif
#if defined(CORDREG_HAVE_NEON)
extern const Funcs neon_funcs;
#endif
} // namespace detail

} // namespace cordreg::kernels
