#include "aerotrack/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace aerotrack::kernels {

namespace {

enum class Backend { Scalar, Avx2, Neon };

Backend pick_backend() {
    if (const char* env = std::getenv("AEROTRACK_KERNELS")) {
        const std::string_view v(env);
        if (v == "scalar") return Backend::Scalar;
#if defined(AEROTRACK_HAVE_AVX2)
        if (v == "avx2" && avx2::supported()) return Backend::Avx2;
#endif
#if defined(AEROTRACK_HAVE_NEON)
        if (v == "neon") return Backend::Neon;
#endif
        // unknown value: fall through to auto-detection
    }
#if defined(AEROTRACK_HAVE_AVX2)
    if (avx2::supported()) return Backend::Avx2;
#endif
#if defined(AEROTRACK_HAVE_NEON)
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

const Backend g_backend = pick_backend();

template <typename Fn>
Fn select(Fn scalar_fn, Fn avx2_fn, Fn neon_fn) {
    switch (g_backend) {
        case Backend::Avx2:
            return avx2_fn;
        case Backend::Neon:
            return neon_fn;
        default:
            return scalar_fn;
    }
}

#if defined(AEROTRACK_HAVE_AVX2)
#define AEROTRACK_AVX2_FN(name) &avx2::name
#else
#define AEROTRACK_AVX2_FN(name) &scalar::name
#endif
#if defined(AEROTRACK_HAVE_NEON)
#define AEROTRACK_NEON_FN(name) &neon::name
#else
#define AEROTRACK_NEON_FN(name) &scalar::name
#endif

}  // namespace

DistRowFn scaled_dist_row = select<DistRowFn>(
    &scalar::scaled_dist_row, AEROTRACK_AVX2_FN(scaled_dist_row),
    AEROTRACK_NEON_FN(scaled_dist_row));

IouCostRowFn iou_cost_row =
    select<IouCostRowFn>(&scalar::iou_cost_row, AEROTRACK_AVX2_FN(iou_cost_row),
                         AEROTRACK_NEON_FN(iou_cost_row));

ReduceFn abs_diff_sum =
    select<ReduceFn>(&scalar::abs_diff_sum, AEROTRACK_AVX2_FN(abs_diff_sum),
                     AEROTRACK_NEON_FN(abs_diff_sum));

ReduceFn sq_diff_sum =
    select<ReduceFn>(&scalar::sq_diff_sum, AEROTRACK_AVX2_FN(sq_diff_sum),
                     AEROTRACK_NEON_FN(sq_diff_sum));

ReduceFn huber_diff_sum =
    select<ReduceFn>(&scalar::huber_diff_sum, AEROTRACK_AVX2_FN(huber_diff_sum),
                     AEROTRACK_NEON_FN(huber_diff_sum));

const char* active_backend() {
    switch (g_backend) {
        case Backend::Avx2:
            return "avx2";
        case Backend::Neon:
            return "neon";
        default:
            return "scalar";
    }
}

}  // namespace aerotrack::kernels
