#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "aerotrack/geometry.hpp"
#include "aerotrack/kernels.hpp"
#include "aerotrack/rng.hpp"

using namespace aerotrack;

namespace {

struct RowFixture {
    std::vector<double> xs, ys, x1s, y1s, x2s, y2s, a, b;

    explicit RowFixture(std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(rng.uniform(-100.0, 100.0));
            ys.push_back(rng.uniform(-100.0, 100.0));
            const double bx = rng.uniform(-50.0, 50.0);
            const double by = rng.uniform(-50.0, 50.0);
            x1s.push_back(bx);
            y1s.push_back(by);
            x2s.push_back(bx + rng.uniform(0.0, 20.0));
            y2s.push_back(by + rng.uniform(0.0, 20.0));
            a.push_back(rng.uniform(-4.0, 4.0));
            b.push_back(rng.uniform(-4.0, 4.0));
        }
    }
};

}  // namespace

TEST_CASE("dispatched row kernels are bit-identical to the scalar reference") {
    // Covers the SIMD main loop and the scalar tail at every alignment.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 33u, 100u}) {
        RowFixture f(n, 1000 + n);
        std::vector<double> got(n, -1.0), want(n, -1.0);

        kernels::scaled_dist_row(3.25, -7.5, f.xs.data(), f.ys.data(), n, 0.12,
                                 got.data());
        kernels::scalar::scaled_dist_row(3.25, -7.5, f.xs.data(), f.ys.data(), n,
                                         0.12, want.data());
        CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);

        kernels::iou_cost_row(-1.0, -2.0, 9.0, 6.0, f.x1s.data(), f.y1s.data(),
                              f.x2s.data(), f.y2s.data(), n, got.data());
        kernels::scalar::iou_cost_row(-1.0, -2.0, 9.0, 6.0, f.x1s.data(),
                                      f.y1s.data(), f.x2s.data(), f.y2s.data(), n,
                                      want.data());
        CHECK(std::memcmp(got.data(), want.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("iou cost row matches the scalar iou function") {
    RowFixture f(64, 42);
    std::vector<double> row(64);
    const BoundingBox a{-3.0, -1.0, 5.0, 7.0};
    kernels::iou_cost_row(a.x1, a.y1, a.x2, a.y2, f.x1s.data(), f.y1s.data(),
                          f.x2s.data(), f.y2s.data(), 64, row.data());
    for (std::size_t j = 0; j < 64; ++j) {
        const BoundingBox b{f.x1s[j], f.y1s[j], f.x2s[j], f.y2s[j]};
        CHECK(row[j] == 1.0 - iou(a, b));
    }
}

TEST_CASE("reductions agree across backends up to rounding") {
    for (std::size_t n : {0u, 1u, 5u, 8u, 64u, 1001u}) {
        RowFixture f(n, 2000 + n);
        const double l1 = kernels::abs_diff_sum(f.a.data(), f.b.data(), n);
        const double l2 = kernels::sq_diff_sum(f.a.data(), f.b.data(), n);
        const double hu = kernels::huber_diff_sum(f.a.data(), f.b.data(), n);
        CHECK(l1 == doctest::Approx(kernels::scalar::abs_diff_sum(f.a.data(),
                                                                  f.b.data(), n))
                        .epsilon(1e-12));
        CHECK(l2 == doctest::Approx(kernels::scalar::sq_diff_sum(f.a.data(),
                                                                 f.b.data(), n))
                        .epsilon(1e-12));
        CHECK(hu == doctest::Approx(kernels::scalar::huber_diff_sum(f.a.data(),
                                                                    f.b.data(), n))
                        .epsilon(1e-12));
    }
}

#if defined(AEROTRACK_HAVE_AVX2)
TEST_CASE("avx2 variants are callable directly when supported") {
    if (!kernels::avx2::supported()) return;
    RowFixture f(37, 3);
    std::vector<double> got(37), want(37);
    kernels::avx2::scaled_dist_row(0.0, 0.0, f.xs.data(), f.ys.data(), 37, 1.0,
                                   got.data());
    kernels::scalar::scaled_dist_row(0.0, 0.0, f.xs.data(), f.ys.data(), 37, 1.0,
                                     want.data());
    CHECK(std::memcmp(got.data(), want.data(), 37 * sizeof(double)) == 0);
}
#endif

TEST_CASE("backend name is reported") {
    const std::string backend = kernels::active_backend();
    CHECK((backend == "avx2" || backend == "neon" || backend == "scalar"));
}
