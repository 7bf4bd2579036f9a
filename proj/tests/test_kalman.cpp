#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "aerotrack/kalman.hpp"
#include "aerotrack/rng.hpp"

using namespace aerotrack;

namespace {

double cov(const KalmanState& s, int r, int c) { return s.cov[r * 4 + c]; }

// Jacobi eigenvalue sweep for the symmetric 4x4 covariance; good enough as an
// independent PSD check in tests.
double min_eigenvalue(const std::array<double, 16>& m_in) {
    std::array<double, 16> m = m_in;
    auto at = [&m](int r, int c) -> double& { return m[r * 4 + c]; };
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += std::abs(at(p, q));
        if (off < 1e-15) break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 4; ++k) {
                    const double mkp = at(k, p), mkq = at(k, q);
                    at(k, p) = c * mkp - s * mkq;
                    at(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double mpk = at(p, k), mqk = at(q, k);
                    at(p, k) = c * mpk - s * mqk;
                    at(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    double mn = at(0, 0);
    for (int i = 1; i < 4; ++i) mn = std::min(mn, at(i, i));
    return mn;
}

double sym_error(const std::array<double, 16>& m) {
    double e = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) e = std::max(e, std::abs(m[r * 4 + c] - m[c * 4 + r]));
    return e;
}

}  // namespace

TEST_CASE("kalman_init") {
    const MotionNoiseConfig cfg;  // measurement_var 1.0
    const KalmanState s = kalman_init({5, 5}, cfg);
    CHECK(s.mean == std::array<double, 4>{5, 5, 0, 0});
    CHECK(cov(s, 0, 0) == cfg.measurement_var);
    CHECK(cov(s, 1, 1) == cfg.measurement_var);
    CHECK(cov(s, 2, 2) == 1000.0 * cfg.measurement_var);
    CHECK(cov(s, 3, 3) == 1000.0 * cfg.measurement_var);
    CHECK(sym_error(s.cov) == 0.0);
    CHECK(min_eigenvalue(s.cov) >= 0.0);
}

TEST_CASE("kalman_predict moves the mean by the velocity") {
    MotionNoiseConfig cfg;
    KalmanState s = kalman_init({0, 0}, cfg);
    s.mean = {0, 0, 1, 2};
    const KalmanState p = kalman_predict(s, cfg);
    CHECK(p.mean == std::array<double, 4>{1, 2, 1, 2});

    KalmanState two = kalman_init({0, 0}, cfg);
    two.mean = {0, 0, 3, 0};
    const KalmanState after = kalman_predict(kalman_predict(two, cfg), cfg);
    CHECK(after.mean[0] == 6.0);
}

TEST_CASE("kalman_predict with zero process noise and zero velocity") {
    MotionNoiseConfig cfg{0.0, 0.0, 1.0};
    KalmanState s = kalman_init({4, 7}, cfg);
    const KalmanState p = kalman_predict(s, cfg);
    CHECK(p.mean[0] == 4.0);
    CHECK(p.mean[1] == 7.0);
    // position block grows only through the velocity prior routed by F
    CHECK(cov(p, 0, 0) == doctest::Approx(cov(s, 0, 0) + cov(s, 2, 2)));
    CHECK(cov(p, 2, 2) == cov(s, 2, 2));
}

TEST_CASE("kalman_update limit cases") {
    SUBCASE("exact measurement pins the position") {
        MotionNoiseConfig cfg{1.0, 0.25, 0.0};
        KalmanState s = kalman_init({0, 0}, cfg);
        s = kalman_predict(s, cfg);  // inflate position uncertainty
        const KalmanState u = kalman_update(s, {3, 4}, cfg);
        CHECK(u.mean[0] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(u.mean[1] == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("useless measurement keeps the prior") {
        MotionNoiseConfig cfg{1.0, 0.25, 1e12};
        KalmanState s = kalman_init({1, 2}, cfg);
        s.cov = {};
        for (int i = 0; i < 4; ++i) s.cov[i * 4 + i] = 1.0;
        const KalmanState u = kalman_update(s, {100, -50}, cfg);
        CHECK(u.mean[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(u.mean[1] == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("scalar gain 0.5") {
        MotionNoiseConfig cfg{0.0, 0.0, 1.0};
        KalmanState s;
        s.mean = {0, 0, 0, 0};
        s.cov = {};
        s.cov[0] = 1.0;   // var(x) = 1
        s.cov[5] = 1.0;   // var(y) = 1
        const KalmanState u = kalman_update(s, {2, 0}, cfg);
        CHECK(u.mean[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cov(u, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("noiseless consistency: exact lock within 10 frames") {
    const MotionNoiseConfig cfg{0.0, 0.0, 0.0};
    const Vec2 p0{100.0, 200.0};
    const Vec2 v{6.0, -4.5};
    KalmanState s = kalman_init(p0, cfg);
    double err = 1e9;
    for (int t = 1; t <= 10; ++t) {
        s = kalman_predict(s, cfg);
        const Vec2 truth{p0.x + v.x * t, p0.y + v.y * t};
        err = std::hypot(s.mean[0] - truth.x, s.mean[1] - truth.y);
        s = kalman_update(s, truth, cfg);
    }
    CHECK(err < 1e-6);
}

TEST_CASE("covariance stays symmetric PSD over 1000 random steps") {
    Rng rng(31);
    MotionNoiseConfig cfg{1.0, 0.25, 1.0};
    KalmanState s = kalman_init({0, 0}, cfg);
    for (int i = 0; i < 1000; ++i) {
        s = kalman_predict(s, cfg);
        if (rng.uniform01() < 0.7) {
            s = kalman_update(s, {rng.uniform(-50, 50), rng.uniform(-50, 50)}, cfg);
        }
        REQUIRE(sym_error(s.cov) < 1e-9);
        REQUIRE(min_eigenvalue(s.cov) >= -1e-9);
    }
}

TEST_CASE("update contracts the position variance") {
    Rng rng(37);
    MotionNoiseConfig cfg{0.5, 0.1, 2.0};
    KalmanState s = kalman_init({0, 0}, cfg);
    for (int i = 0; i < 200; ++i) {
        s = kalman_predict(s, cfg);
        const double prior_x = cov(s, 0, 0), prior_y = cov(s, 1, 1);
        s = kalman_update(s, {rng.uniform(-5, 5), rng.uniform(-5, 5)}, cfg);
        CHECK(cov(s, 0, 0) <= prior_x + 1e-12);
        CHECK(cov(s, 1, 1) <= prior_y + 1e-12);
    }
}

TEST_CASE("linear_predict") {
    CHECK(linear_predict({5, 5}, {1, -1}, 1.0) == Vec2{6, 4});
    CHECK(linear_predict({5, 5}, {1, -1}, 0.0) == Vec2{5, 5});
    CHECK(linear_predict({0, 0}, {2, 3}, 0.5) == Vec2{1, 1.5});

    Rng rng(41);
    // dyadic grid keeps p + v - p exact in binary floating point
    auto grid = [&rng](double lo, double hi) {
        return std::round(rng.uniform(lo, hi) * 4.0) / 4.0;
    };
    for (int i = 0; i < 100; ++i) {
        const Vec2 p{grid(-10, 10), grid(-10, 10)};
        const Vec2 v{grid(-3, 3), grid(-3, 3)};
        const Vec2 q = linear_predict(p, v, 1.0);
        CHECK(q - p == v);
    }
}
