#include <doctest.h>

#include <cmath>
#include <random>

#include "dofseg/colorspace.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dofseg;

namespace {

void check_close(const LabColor& got, const LabColor& want, double tol)
{
    CHECK(std::abs(got.L - want.L) <= tol);
    CHECK(std::abs(got.a - want.a) <= tol);
    CHECK(std::abs(got.b - want.b) <= tol);
}

} // namespace

TEST_CASE("sRGB anchors match the textbook conversion")
{
    check_close(srgb_to_lab(255, 255, 255), {100.0, 0.0, 0.0}, 0.05);
    check_close(srgb_to_lab(0, 0, 0), {0.0, 0.0, 0.0}, 0.05);
    // Widely tabulated D65 value for pure red.
    check_close(srgb_to_lab(255, 0, 0), {53.2408, 80.0925, 67.2032}, 0.05);
    check_close(srgb_to_lab(255, 0, 0), oracle::reference_lab(255, 0, 0), 0.05);
}

TEST_CASE("conversion agrees with the reference across the cube")
{
    double worst = 0.0;
    for (int r = 0; r < 256; r += 15)
        for (int g = 0; g < 256; g += 15)
            for (int b = 0; b < 256; b += 15) {
                const auto got = srgb_to_lab(r, g, b);
                const auto want = oracle::reference_lab(r, g, b);
                worst = std::max({worst, std::abs(got.L - want.L), std::abs(got.a - want.a), std::abs(got.b - want.b)});
            }
    CHECK(worst < 1e-6);
}

TEST_CASE("lightness stays in [0,100] and the inverse round-trips every sampled color")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 20000; ++i) {
        const Rgb8 c{static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
                     static_cast<std::uint8_t>(byte(rng))};
        const auto lab = srgb_to_lab(c);
        REQUIRE(lab.L >= -1e-9);
        REQUIRE(lab.L <= 100.0 + 1e-9);
        REQUIRE(lab_to_srgb(lab) == c);
    }
}

TEST_CASE("delta E is a metric")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> L(0, 100), ab(-128, 127);
    auto draw = [&] { return LabColor{L(rng), ab(rng), ab(rng)}; };
    for (int i = 0; i < 10000; ++i) {
        const auto u = draw(), v = draw(), w = draw();
        REQUIRE(delta_e(u, u) == 0.0);
        REQUIRE(delta_e(u, v) >= 0.0);
        REQUIRE(std::abs(delta_e(u, v) - delta_e(v, u)) <= 1e-9);
        REQUIRE(delta_e(u, w) <= delta_e(u, v) + delta_e(v, w) + 1e-9);
    }
    CHECK(delta_e({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
}

TEST_CASE("delta E max is the diagonal of the nominal Lab box")
{
    CHECK(std::abs(delta_e_max() - 374.2326) <= 1e-4);
    CHECK(delta_e_max() == doctest::Approx(delta_e({0, -128, -128}, {100, 127, 127})));
}

TEST_CASE("image conversions round-trip")
{
    std::mt19937 rng(3);
    const auto lab = testing::random_lab(rng, 17, 9);
    const auto rgb = to_rgb(lab);
    CHECK(to_lab(rgb).pixels() == lab.pixels());
    CHECK(rgb.width() == 17);
    CHECK(rgb.height() == 9);
}
