#include "thinwire/fields3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thinwire/errors.hpp"

namespace thinwire {
namespace {

constexpr Complex kI{0.0, 1.0};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

ModeParams::ModeParams(double k, double kappa, double k3, double omega, double epsilon, double mu)
    : k_(k), kappa_(kappa), k3_(k3), omega_(omega), epsilon_(epsilon), mu_(mu) {
  if (!(kappa > 0) || !std::isfinite(kappa)) {
    throw DomainError("ModeParams: kappa must be positive (degenerate mode otherwise)");
  }
  if (!(k > 0) || !(omega > 0) || !(epsilon > 0) || !(mu > 0) || !std::isfinite(k3)) {
    throw DomainError("ModeParams: k, omega, epsilon, mu must be positive and k3 finite");
  }
  if (!close_rel(kappa * kappa + k3 * k3, k * k, 1e-12)) {
    throw DomainError("ModeParams: kappa^2 + k3^2 must equal k^2");
  }
  if (!close_rel(k * k, omega * omega * epsilon * mu, 1e-12)) {
    throw DomainError("ModeParams: k^2 must equal omega^2 epsilon mu");
  }
}

ModeParams ModeParams::from_wavenumbers(double kappa, double k3, double epsilon, double mu) {
  const double k = std::hypot(kappa, k3);
  return {k, kappa, k3, k / std::sqrt(epsilon * mu), epsilon, mu};
}

FieldSample incident_field(const ModeParams& p, Point3 x) {
  const Complex phase = std::exp(kI * (p.kappa() * x.y + p.k3() * x.z));
  FieldSample f;
  f.e = {0.0, -p.k3() / p.k() * phase, p.kappa() / p.k() * phase};
  // curl E0 = i k phase e_1
  f.h = {p.k() / (p.omega() * p.mu()) * phase, 0.0, 0.0};
  return f;
}

FieldSample fields_from_u(const ScalarSample& u, const ModeParams& p, double z) {
  if (!(p.kappa() > 0)) throw DomainError("fields_from_u: kappa must be positive");
  const double kappa2 = p.kappa() * p.kappa();
  const double scale = p.kappa() / p.k();  // U = (kappa/k) u
  const Complex axial = std::exp(kI * (p.k3() * z));
  const Complex e_t = kI * p.k3() / kappa2 * scale * axial;
  const Complex h_t = p.k() * p.k() / (kI * p.omega() * p.mu() * kappa2) * scale * axial;
  FieldSample f;
  f.e = {e_t * u.dx, e_t * u.dy, scale * u.value * axial};
  f.h = {h_t * u.dy, -h_t * u.dx, 0.0};
  return f;
}

FieldGrid sample_field_grid(const ScalarField& u, const ModeParams& params, Point3 origin,
                            double spacing, int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1 || !(spacing > 0)) {
    throw std::invalid_argument("sample_field_grid: empty grid or non-positive spacing");
  }
  FieldGrid g;
  g.origin = origin;
  g.spacing = spacing;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  const std::size_t total = std::size_t(nx) * ny * nz;
  for (int c = 0; c < 3; ++c) {
    g.e[c].resize(total);
    g.h[c].resize(total);
  }
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Point3 base = g.node(ix, iy, 0);
      const ScalarSample s = u(base.planar());
      for (int iz = 0; iz < nz; ++iz) {
        const FieldSample f = fields_from_u(s, params, g.node(ix, iy, iz).z);
        const std::size_t at = g.index(ix, iy, iz);
        for (int c = 0; c < 3; ++c) {
          g.e[c][at] = f.e[c];
          g.h[c][at] = f.h[c];
        }
      }
    }
  }
  return g;
}

MaxwellResidual maxwell_residual(const FieldGrid& g, const ModeParams& p) {
  if (g.nx < 5 || g.ny < 5 || g.nz < 5) {
    throw std::invalid_argument("maxwell_residual: need at least 5 nodes per axis");
  }
  const double inv2h = 1.0 / (2.0 * g.spacing);
  const std::size_t sx = 1;
  const std::size_t sy = std::size_t(g.nx);
  const std::size_t sz = std::size_t(g.nx) * g.ny;
  const auto d = [inv2h](const std::vector<Complex>& f, std::size_t at, std::size_t stride) {
    return (f[at + stride] - f[at - stride]) * inv2h;
  };
  const Complex iwm = kI * p.omega() * p.mu();
  const Complex iwe = kI * p.omega() * p.epsilon();

  MaxwellResidual r;
  for (int iz = 1; iz + 1 < g.nz; ++iz) {
    for (int iy = 1; iy + 1 < g.ny; ++iy) {
      for (int ix = 1; ix + 1 < g.nx; ++ix) {
        const std::size_t at = g.index(ix, iy, iz);
        const auto& e = g.e;
        const auto& h = g.h;
        const std::array<Complex, 3> curl_e{d(e[2], at, sy) - d(e[1], at, sz),
                                            d(e[0], at, sz) - d(e[2], at, sx),
                                            d(e[1], at, sx) - d(e[0], at, sy)};
        const std::array<Complex, 3> curl_h{d(h[2], at, sy) - d(h[1], at, sz),
                                            d(h[0], at, sz) - d(h[2], at, sx),
                                            d(h[1], at, sx) - d(h[0], at, sy)};
        for (int c = 0; c < 3; ++c) {
          r.curl_e = std::max(r.curl_e, std::abs(curl_e[c] - iwm * h[c][at]));
          r.curl_h = std::max(r.curl_h, std::abs(curl_h[c] + iwe * e[c][at]));
        }
        const Complex div = d(e[0], at, sx) + d(e[1], at, sy) + d(e[2], at, sz);
        r.divergence = std::max(r.divergence, std::abs(div));
      }
    }
  }
  return r;
}

double AmplitudeReport::worst() const {
  double w = 0.0;
  for (const auto& [name, value] : equations) w = std::max(w, value);
  return w;
}

AmplitudeReport amplitude_check(const ModeParams& p, const ScalarField& u, Point2 origin,
                                double spacing, int nx, int ny) {
  if (nx < 3 || ny < 3 || !(spacing > 0)) {
    throw std::invalid_argument("amplitude_check: need at least 3 x 3 nodes and positive spacing");
  }
  const double kappa2 = p.kappa() * p.kappa();
  const double scale = p.kappa() / p.k();
  const Complex ik3 = kI * p.k3();
  const Complex iwm = kI * p.omega() * p.mu();
  const Complex iwe = kI * p.omega() * p.epsilon();
  const Complex h_factor = p.k() * p.k() / (iwm * kappa2);

  const std::size_t total = std::size_t(nx) * ny;
  std::vector<Complex> amp(total), ux(total), uy(total), e1(total), e2(total), h1(total), h2(total);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t at = std::size_t(iy) * nx + ix;
      const ScalarSample s = u({origin.x + ix * spacing, origin.y + iy * spacing});
      amp[at] = scale * s.value;
      ux[at] = scale * s.dx;
      uy[at] = scale * s.dy;
      e1[at] = ik3 / kappa2 * ux[at];
      e2[at] = ik3 / kappa2 * uy[at];
      h1[at] = h_factor * uy[at];
      h2[at] = -h_factor * ux[at];
    }
  }

  std::array<double, 6> worst{};
  const double inv2h = 1.0 / (2.0 * spacing);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t at = std::size_t(iy) * nx + ix;
      worst[0] = std::max(worst[0], std::abs(uy[at] - ik3 * e2[at] - iwm * h1[at]));
      worst[1] = std::max(worst[1], std::abs(-ux[at] + ik3 * e1[at] - iwm * h2[at]));
      worst[3] = std::max(worst[3], std::abs(ik3 * h2[at] - iwe * e1[at]));
      worst[4] = std::max(worst[4], std::abs(ik3 * h1[at] + iwe * e2[at]));
      if (ix == 0 || iy == 0 || ix + 1 == nx || iy + 1 == ny) continue;
      const auto dx = [&](const std::vector<Complex>& f) {
        return (f[at + 1] - f[at - 1]) * inv2h;
      };
      const auto dy = [&](const std::vector<Complex>& f) {
        return (f[at + nx] - f[at - nx]) * inv2h;
      };
      worst[2] = std::max(worst[2], std::abs(dx(e2) - dy(e1)));
      worst[5] = std::max(worst[5], std::abs(dx(h2) - dy(h1) + iwe * amp[at]));
    }
  }
  AmplitudeReport report;
  report.equations = {{"curlE_x: u_y - i k3 E2 = i w mu H1", worst[0]},
                      {"curlE_y: -u_x + i k3 E1 = i w mu H2", worst[1]},
                      {"curlE_z: E2_x = E1_y", worst[2]},
                      {"curlH_x: i k3 H2 = i w eps E1", worst[3]},
                      {"curlH_y: i k3 H1 = -i w eps E2", worst[4]},
                      {"curlH_z: H2_x - H1_y = -i w eps u", worst[5]}};
  return report;
}

double tangential_e_on_cylinder(const ScalarField& u, const ModeParams& params, const Disc& disc,
                                int samples, double z) {
  if (samples < 1) throw std::invalid_argument("tangential_e_on_cylinder: samples must be >= 1");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * (i + 0.5) / samples;
    const Point2 normal{std::cos(theta), std::sin(theta)};
    const Point2 on = disc.center + disc.radius * normal;
    const FieldSample f = fields_from_u(u(on), params, z);
    const Complex planar = -normal.y * f.e[0] + normal.x * f.e[1];
    worst = std::max({worst, std::abs(f.e[2]), std::abs(planar)});
  }
  return worst;
}

}  // namespace thinwire
