#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cidp/array.hpp"
#include "cidp/errors.hpp"

using namespace cidp;

TEST_CASE("broadside response is all ones") {
  for (const auto &a : array_response(16, 0.5, 0.0)) {
    CHECK(a.real() == doctest::Approx(1.0));
    CHECK(a.imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("two elements at endfire with half-wavelength spacing") {
  const auto a = array_response(2, 0.5, 90.0);
  CHECK(a[0].real() == doctest::Approx(1.0));
  CHECK(a[1].real() == doctest::Approx(-1.0));
  CHECK(std::abs(a[1].imag()) < 1e-12);
}

TEST_CASE("response is periodic in 360 degrees") {
  for (double theta : {-73.0, 12.5, 45.0}) {
    const auto a = array_response(8, 0.45, theta);
    const auto b = array_response(8, 0.45, theta + 360.0);
    for (std::size_t m = 0; m < a.size(); ++m)
      CHECK(a[m] == b[m]);
  }
}

TEST_CASE("elements have unit modulus and the expected phase progression") {
  const double theta = 30.0;
  const auto a = array_response(5, 0.5, theta);
  for (int m = 0; m < 5; ++m) {
    CHECK(std::abs(a[m]) == doctest::Approx(1.0));
    const auto expect = std::polar(1.0, std::numbers::pi * m * 0.5);
    CHECK(std::abs(a[m] - expect) < 1e-12);
  }
}

TEST_CASE("steering puts the full gain at theta0") {
  const ArrayGeometry geom{8, 0.5, 20.0};
  const std::vector<double> ones(8, 1.0);
  CHECK(std::abs(pattern(geom, ones, 20.0)) == doctest::Approx(8.0));
  CHECK(std::abs(pattern(geom, ones, 0.0)) < 8.0);
}

TEST_CASE("pattern special cases") {
  const ArrayGeometry geom{16, 0.5, 0.0};
  const std::vector<double> zeros(16, 0.0);
  for (double theta = -90; theta <= 90; theta += 7.5)
    CHECK(std::abs(pattern(geom, zeros, theta)) == 0.0);

  const ArrayGeometry pair{2, 0.5, 0.0};
  const std::vector<double> single{1.0, 0.0};
  for (double theta = -90; theta <= 90; theta += 10)
    CHECK(std::abs(pattern(pair, single, theta)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(pattern(geom, single, 0.0), DomainError);
  CHECK_THROWS_AS(array_response(1, 0.5, 0.0), DomainError);
}
