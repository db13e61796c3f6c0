#include "cidp/array.hpp"

#include <cmath>
#include <numbers>

#include "cidp/errors.hpp"

namespace cidp {

namespace {
double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
} // namespace

ComplexVector array_response(int m_elements, double spacing_wavelengths, double theta_deg) {
  if (m_elements < 2)
    throw DomainError("array_response: need at least two elements");
  // Reduce first so theta and theta + 360 give identical bits.
  const double reduced = std::remainder(theta_deg, 360.0);
  const double k = 2.0 * std::numbers::pi * spacing_wavelengths * std::sin(deg2rad(reduced));
  ComplexVector a(m_elements);
  for (int m = 0; m < m_elements; ++m)
    a[m] = std::polar(1.0, k * m);
  return a;
}

ComplexVector steered_response(const ArrayGeometry &geom, double theta_deg) {
  auto a = array_response(geom.m_elements, geom.spacing_wavelengths, theta_deg);
  if (geom.theta0_deg != 0.0) {
    const auto a0 = array_response(geom.m_elements, geom.spacing_wavelengths, geom.theta0_deg);
    for (std::size_t m = 0; m < a.size(); ++m)
      a[m] *= std::conj(a0[m]);
  }
  return a;
}

std::complex<double> pattern(const ArrayGeometry &geom, std::span<const double> weights,
                             double theta_deg) {
  if (static_cast<int>(weights.size()) != geom.m_elements)
    throw DomainError("pattern: weight vector length must equal the element count");
  const auto a = steered_response(geom, theta_deg);
  std::complex<double> f = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m)
    f += weights[m] * a[m];
  return f;
}

} // namespace cidp
