#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ab/constants.hpp"
#include "ab/quadrature.hpp"

using namespace ab;
using constants::mu0;
using constants::pi;

namespace {
const QuadConfig kCfg; // defaults
}

TEST_CASE("closed loop integral of a gradient field vanishes") {
    // F = grad(xyz)
    auto f = [](const Vec3& r) { return Vec3{r.y * r.z, r.x * r.z, r.x * r.y}; };
    Path loop = Path::circle({0.3, -0.2, 0.5}, {0.2, 0.5, 1.0}, 0.7, 64);
    auto res = line_integral(f, loop, kCfg);
    CHECK(std::abs(res.value) < 1e-10);
}

TEST_CASE("constant field over a straight segment is exact") {
    const Vec3 c{1.5, -2.0, 0.25};
    auto f = [&](const Vec3&) { return c; };
    Path seg;
    seg.vertices = {{0, 0, 0}, {2, 1, -3}};
    auto res = line_integral(f, seg, kCfg);
    CHECK(res.value == doctest::Approx(c.dot({2, 1, -3})).epsilon(1e-14));
}

TEST_CASE("analytic solenoid A around a square loop recovers the flux") {
    // Stokes oracle: \oint A . dl = Phi for A_phi = Phi/(2 pi rho) outside
    const double phi0 = mu0 * 1000.0 * 1.0 * pi * 0.01 * 0.01;
    auto a = [&](const Vec3& r) {
        const double rho2 = r.x * r.x + r.y * r.y;
        return Vec3{-r.y, r.x, 0.0} * (phi0 / (2.0 * pi * rho2));
    };
    const double s = 0.04; // side 8R centered on the axis
    Path loop;
    loop.vertices = {{s, -s, 0}, {s, s, 0}, {-s, s, 0}, {-s, -s, 0}, {s, -s, 0}};
    loop.closed = true;
    auto res = line_integral(a, loop, kCfg);
    CHECK(res.value == doctest::Approx(phi0).epsilon(1e-6));
    CHECK(res.error_estimate < 1e-6 * std::abs(res.value) + 1e-12);

    SUBCASE("orientation antisymmetry") {
        auto rev = line_integral(a, loop.reversed(), kCfg);
        CHECK(rev.value == doctest::Approx(-res.value).epsilon(1e-10));
    }
}

TEST_CASE("cylinder volume") {
    Region cyl = CylinderRegion{{0, 0, 0}, {0, 0, 1}, 1.0, 1.0};
    auto one = [](const Vec3&) { return 1.0; };
    QuadConfig cfg;
    cfg.rel_tol = 1e-9;
    auto res = volume_integral(one, cyl, cfg);
    CHECK(res.value == doctest::Approx(pi).epsilon(1e-8));
}

TEST_CASE("torus volume") {
    Region tor = TorusRegion{{0, 0, 0}, 1.0, 2.0, 1.0};
    auto one = [](const Vec3&) { return 1.0; };
    QuadConfig cfg;
    cfg.rel_tol = 1e-9;
    auto res = volume_integral(one, tor, cfg);
    CHECK(res.value == doctest::Approx(3.0 * pi).epsilon(1e-8));
}

TEST_CASE("uniform-field energy density over a solenoid interior") {
    const double n = 1000.0, cur = 1.0, radius = 0.01, len = 1.0;
    const double b0 = mu0 * n * cur;
    Region cyl = CylinderRegion{{0, 0, 0}, {0, 0, 1}, radius, len};
    auto f = [&](const Vec3&) { return b0 * b0 / (2.0 * mu0); };
    auto res = volume_integral(f, cyl, kCfg);
    const double expect = 0.5 * mu0 * n * n * cur * cur * pi * radius * radius * len;
    CHECK(expect == doctest::Approx(1.9739e-4).epsilon(1e-4));
    CHECK(res.value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("linearity of the volume integral") {
    Region box = BoxRegion{{0, 0, 0}, {1, 1, 1}};
    auto f = [](const Vec3& r) { return r.x * r.x + std::sin(r.y); };
    auto g = [](const Vec3& r) { return std::exp(r.z); };
    auto fg = [&](const Vec3& r) { return 2.0 * f(r) - 3.0 * g(r); };
    auto rf = volume_integral(f, box, kCfg);
    auto rg = volume_integral(g, box, kCfg);
    auto rfg = volume_integral(fg, box, kCfg);
    CHECK(rfg.value ==
          doctest::Approx(2.0 * rf.value - 3.0 * rg.value).epsilon(1e-9));
}

TEST_CASE("error estimate shrinks with extra refinement depth") {
    // mildly peaked smooth integrand
    auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
    QuadConfig coarse;
    coarse.rel_tol = 1e-12;
    coarse.abs_tol = 0.0;
    coarse.max_depth = 3;
    coarse.accept_best_on_cap = true;
    QuadConfig fine = coarse;
    fine.max_depth = 12;
    auto rc = integrate_1d(f, -1.0, 1.0, coarse);
    auto rf = integrate_1d(f, -1.0, 1.0, fine);
    CHECK(rf.error_estimate <= rc.error_estimate);
}

TEST_CASE("non-convergence carries the best estimate") {
    auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x) + 1e-300); };
    QuadConfig cfg;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 0.0;
    cfg.max_depth = 4;
    try {
        integrate_1d(f, 0.0, 1.0, cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.best_value > 1.0); // exact value is 2
        CHECK(e.error_estimate > 0.0);
    }
}

TEST_CASE("closed path validation") {
    Path bad;
    bad.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    bad.closed = true;
    CHECK_THROWS_AS(bad.validate(), GeometryError);
}
