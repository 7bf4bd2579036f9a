#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aerotrack/geometry.hpp"
#include "aerotrack/rng.hpp"

using namespace aerotrack;

namespace {

// Independent IoU oracle: rasterize both boxes on a fine grid over their
// joint extent and count cells.
double iou_rasterized(const BoundingBox& a, const BoundingBox& b, int res = 2000) {
    const double lo_x = std::min(a.x1, b.x1), hi_x = std::max(a.x2, b.x2);
    const double lo_y = std::min(a.y1, b.y1), hi_y = std::max(a.y2, b.y2);
    const double dx = (hi_x - lo_x) / res, dy = (hi_y - lo_y) / res;
    if (dx == 0.0 || dy == 0.0) return 0.0;
    long long inter = 0, uni = 0;
    for (int i = 0; i < res; ++i) {
        const double x = lo_x + (i + 0.5) * dx;
        for (int j = 0; j < res; ++j) {
            const double y = lo_y + (j + 0.5) * dy;
            const bool in_a = x > a.x1 && x < a.x2 && y > a.y1 && y < a.y2;
            const bool in_b = x > b.x1 && x < b.x2 && y > b.y1 && y < b.y2;
            inter += in_a && in_b;
            uni += in_a || in_b;
        }
    }
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

BoundingBox random_box(Rng& rng) {
    const double x1 = rng.uniform(-50.0, 50.0);
    const double y1 = rng.uniform(-50.0, 50.0);
    return {x1, y1, x1 + rng.uniform(0.0, 30.0), y1 + rng.uniform(0.0, 30.0)};
}

}  // namespace

TEST_CASE("iou examples") {
    CHECK(iou({0, 0, 4, 4}, {0, 0, 4, 4}) == doctest::Approx(1.0));
    CHECK(iou({0, 0, 2, 2}, {5, 5, 7, 7}) == 0.0);

    const BoundingBox a{0, 0, 2, 2}, b{1, 1, 3, 3};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
    CHECK(iou_rasterized(a, b) == doctest::Approx(iou(a, b)).epsilon(5e-3));
}

TEST_CASE("iou agrees with the rasterization oracle on random boxes") {
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        const BoundingBox a = random_box(rng), b = random_box(rng);
        CHECK(iou_rasterized(a, b, 1000) == doctest::Approx(iou(a, b)).epsilon(2e-2));
    }
}

TEST_CASE("iou degenerate boxes") {
    const BoundingBox point{3, 3, 3, 3};
    CHECK(iou(point, point) == 0.0);
    CHECK(iou(point, {0, 0, 10, 10}) == 0.0);
}

TEST_CASE("iou symmetry and identity properties") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const BoundingBox a = random_box(rng), b = random_box(rng);
        CHECK(iou(a, b) == iou(b, a));
        const double v = iou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (a.area() > 0.0) CHECK(iou(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("enlarge examples") {
    CHECK(enlarge({0, 0, 4, 4}, 1.0) == BoundingBox{0, 0, 4, 4});
    CHECK(enlarge({0, 0, 4, 4}, 2.0) == BoundingBox{-2, -2, 6, 6});
    // center (12, 14), half extents 1 and 2 after halving
    CHECK(enlarge({10, 10, 14, 18}, 0.5) == BoundingBox{11, 12, 13, 16});
}

TEST_CASE("enlarge rejects non-positive factors") {
    CHECK_THROWS_AS(enlarge({0, 0, 1, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(enlarge({0, 0, 1, 1}, -2.0), std::invalid_argument);
}

TEST_CASE("enlarge preserves center and scales area") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const BoundingBox b = random_box(rng);
        const double f = rng.uniform(0.1, 5.0);
        const BoundingBox e = enlarge(b, f);
        CHECK(e.center().x == doctest::Approx(b.center().x).epsilon(1e-12));
        CHECK(e.center().y == doctest::Approx(b.center().y).epsilon(1e-12));
        if (b.area() > 0.0) {
            CHECK(e.area() == doctest::Approx(b.area() * f * f).epsilon(1e-9));
        }
    }
}

TEST_CASE("center_distance_m examples") {
    const BoundingBox a{0, 0, 4, 4};
    CHECK(center_distance_m(a, a, 0.1) == 0.0);

    const BoundingBox at_origin{-1, -1, 1, 1};  // center (0, 0)
    const BoundingBox at_34{2, 3, 4, 5};        // center (3, 4)
    CHECK(center_distance_m(at_origin, at_34, 0.1) == doctest::Approx(0.5));

    const BoundingBox c1{0, 0, 2, 2};  // center (1, 1)
    const BoundingBox c2{3, 4, 5, 6};  // center (4, 5)
    CHECK(center_distance_m(c1, c2, 0.12) == doctest::Approx(0.6));
}

TEST_CASE("center_distance_m scales linearly in gsd") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const BoundingBox a = random_box(rng), b = random_box(rng);
        const double g = rng.uniform(0.01, 1.0);
        CHECK(center_distance_m(a, b, 2.0 * g) ==
              doctest::Approx(2.0 * center_distance_m(a, b, g)).epsilon(1e-12));
    }
}

TEST_CASE("center_distance_m rejects non-positive gsd") {
    CHECK_THROWS_AS(center_distance_m({0, 0, 1, 1}, {0, 0, 1, 1}, 0.0),
                    std::invalid_argument);
}
