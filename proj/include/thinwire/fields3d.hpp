#pragma once

// Full electromagnetic field of an E-wave (H_3 = 0) built from the scalar
// solution u(x, y) of the transverse Helmholtz problem:
//
//   E_1,2 = (i k3 / kappa^2) dU/dx,y e^{i k3 z},  E_3 = U e^{i k3 z},
//   H_1 = k^2/(i omega mu kappa^2) dU/dy e^{i k3 z},
//   H_2 = -k^2/(i omega mu kappa^2) dU/dx e^{i k3 z},  U = (kappa/k) u,
//
// plus finite-difference checks of Maxwell's equations on sampled grids.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "thinwire/geometry.hpp"
#include "thinwire/scalar_field.hpp"
#include "thinwire/single_scatter.hpp"

namespace thinwire {

/// Wavenumbers and material constants of one axial mode. Invariants:
/// kappa^2 + k3^2 = k^2 and k^2 = omega^2 eps mu (1e-12 relative), n0^2 = eps mu.
class ModeParams {
 public:
  ModeParams(double k, double kappa, double k3, double omega, double epsilon, double mu);

  /// k = sqrt(kappa^2 + k3^2), omega = k / sqrt(eps mu).
  static ModeParams from_wavenumbers(double kappa, double k3, double epsilon = 1.0,
                                     double mu = 1.0);

  [[nodiscard]] double k() const noexcept { return k_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] double k3() const noexcept { return k3_; }
  [[nodiscard]] double omega() const noexcept { return omega_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double n0_sq() const noexcept { return epsilon_ * mu_; }

 private:
  double k_, kappa_, k3_, omega_, epsilon_, mu_;
};

struct FieldSample {
  std::array<Complex, 3> e{};
  std::array<Complex, 3> h{};
};

/// E0 = k^{-1} e^{i kappa y + i k3 z} (-k3 e_2 + kappa e_3), H0 = curl E0 / (i omega mu).
FieldSample incident_field(const ModeParams& params, Point3 x);

/// Fields from the value and planar gradient of u at (x, y), at height z.
/// Throws DomainError when kappa is not positive.
FieldSample fields_from_u(const ScalarSample& u, const ModeParams& params, double z);

inline FieldSample fields_from_u(const ScalarField& u, const ModeParams& params, Point3 x) {
  return fields_from_u(u(x.planar()), params, x.z);
}

/// E and H on a uniform nx x ny x nz grid, stored component-wise with
/// x fastest: index = (iz * ny + iy) * nx + ix.
struct FieldGrid {
  Point3 origin;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  int nz = 0;
  std::array<std::vector<Complex>, 3> e;
  std::array<std::vector<Complex>, 3> h;

  [[nodiscard]] std::size_t index(int ix, int iy, int iz) const {
    return (std::size_t(iz) * ny + iy) * nx + ix;
  }
  [[nodiscard]] Point3 node(int ix, int iy, int iz) const {
    return {origin.x + ix * spacing, origin.y + iy * spacing, origin.z + iz * spacing};
  }
};

FieldGrid sample_field_grid(const ScalarField& u, const ModeParams& params, Point3 origin,
                            double spacing, int nx, int ny, int nz);

struct MaxwellResidual {
  double curl_e = 0.0;      ///< max |curl E - i omega mu H|
  double curl_h = 0.0;      ///< max |curl H + i omega eps E|
  double divergence = 0.0;  ///< max |div E|
};

/// Central-difference residuals over interior nodes. Needs at least 5 nodes
/// per axis; throws std::invalid_argument otherwise.
MaxwellResidual maxwell_residual(const FieldGrid& grid, const ModeParams& params);

struct AmplitudeReport {
  /// One entry per scalar equation of the curl system written for the
  /// z-independent amplitudes, with its max-norm residual.
  std::vector<std::pair<std::string, double>> equations;

  [[nodiscard]] double worst() const;
};

/// Builds the transverse amplitudes from u on an nx x ny planar grid and
/// checks the six scalar equations that curl E = i omega mu H and
/// curl H = -i omega eps E reduce to. Derivatives of the amplitudes are central
/// differences; derivatives of u itself come from the sampler.
AmplitudeReport amplitude_check(const ModeParams& params, const ScalarField& u, Point2 origin,
                                double spacing, int nx, int ny);

/// max over `samples` points of the cylinder surface of |E_3| and of the
/// planar tangential component |t . (E_1, E_2)|.
double tangential_e_on_cylinder(const ScalarField& u, const ModeParams& params, const Disc& disc,
                                int samples, double z = 0.0);

}  // namespace thinwire
