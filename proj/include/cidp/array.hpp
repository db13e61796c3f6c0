#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cidp {

using ComplexVector = std::vector<std::complex<double>>;

/// Uniform linear array with unit-modulus elements:
///   a_m(theta) = exp(j 2 pi m d sin(theta)),  m = 0 .. M-1
ComplexVector array_response(int m_elements, double spacing_wavelengths, double theta_deg);

/// Geometry plus the steering direction of the fixed main beam.
struct ArrayGeometry {
  int m_elements = 0;
  double spacing_wavelengths = 0.5;
  double theta0_deg = 0.0;
};

/// a(theta) with each element rotated by the fixed steering phase
/// -arg a_m(theta0); at theta0 = 0 the phases are all zero.
ComplexVector steered_response(const ArrayGeometry &geom, double theta_deg);

/// F(theta) = sum_m s_m a_m(theta) e^{j phi_m}, phi_m the steering phases.
std::complex<double> pattern(const ArrayGeometry &geom, std::span<const double> weights,
                             double theta_deg);

} // namespace cidp
