// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "thinwire/fields3d.hpp"
#include "thinwire/homogenize.hpp"
#include "thinwire/many_scatter.hpp"
#include "thinwire/single_scatter.hpp"

using namespace thinwire;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds
  std::function<Outcome()> body;
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt(x);
  return s;
}

const std::vector<double> kLadder{1e-2, 1e-3, 1e-4, 1e-6};

Outcome log_sine() {
  const double exact = -kPi * std::numbers::ln2;
  const double err = std::abs(log_sine_quadrature() - exact);
  return {err <= 1e-8 && std::abs(exact + 2.177586090303602) <= 1e-15, "|error| = " + fmt(err)};
}

Outcome ring() {
  double worst = 0.0;
  for (double a : {1e-1, 1e-2, 1e-3}) {
    for (double psi : {0.0, 0.9, 2.5}) {
      worst = std::max(worst, std::abs(ring_log_integral_quadrature(a, psi) - a * std::log(a)));
    }
  }
  return {worst <= 1e-9, "max |error| = " + fmt(worst)};
}

Outcome charge() {
  const IncidentWave wave(1.0);
  std::vector<double> raw, scaled;
  for (double a : kLadder) {
    const Disc disc({0, 0}, a);
    const Complex q = nystrom_charge(disc, wave, 64).charge;
    const double rel = std::abs(q - charge_asymptotic(disc, wave)) / std::abs(q);
    raw.push_back(rel);
    scaled.push_back(rel * std::log(1 / a));
  }
  const double bound = *std::max_element(scaled.begin(), scaled.end());
  return {bound <= 5.0 && strictly_decreasing(raw),
          "rel. error " + fmt(raw) + "; times ln(1/a) " + fmt(scaled)};
}

Outcome single_field() {
  const IncidentWave wave(1.0);
  std::vector<double> dev;
  for (double a : kLadder) {
    const Disc disc({0, 0}, a);
    const int terms = series_terms_for(a);
    double worst = 0.0;
    for (int i = 0; i < 128; ++i) {
      const double t = 2 * kPi * i / 128;
      const Point2 x{std::cos(t), std::sin(t)};
      const Complex exact = exact_series(disc, wave, terms, x);
      worst = std::max(worst, std::abs(field_asymptotic(disc, wave, x) - exact) / std::abs(exact));
    }
    dev.push_back(worst);
  }
  return {strictly_decreasing(dev), "max rel. deviation " + fmt(dev)};
}

Outcome reduction() {
  const IncidentWave wave(1.0);
  const Disc disc({0.2, -0.4}, 1e-3);
  const CylinderArray one({disc.center}, disc.radius);
  const EffectiveField s1 = solve_effective(one, wave);
  double err = std::abs(s1.values[0] - wave.value(disc.center));
  err = std::max(err, std::abs(s1.charges[0] - charge_asymptotic(disc, wave)));
  for (const Point2 x : {Point2{1, 1}, Point2{-1.5, 0.3}, Point2{0.0, 2.0}}) {
    err = std::max(err, std::abs(total_field(s1, one, wave, x) - field_asymptotic(disc, wave, x)));
  }
  double mirror = 0.0;
  for (double half : {0.05, 0.25, 0.7}) {
    const EffectiveField s2 =
        solve_effective(CylinderArray({{-half, 0.3}, {half, 0.3}}, 1e-3), wave);
    mirror = std::max(mirror, std::abs(s2.values[0] - s2.values[1]));
  }
  return {err <= 1e-12 && mirror <= 1e-10,
          "M=1 deviation " + fmt(err) + ", mirror difference " + fmt(mirror)};
}

Outcome homogenization() {
  const DensityField field = DensityField::constant({}, 0.5);
  const IncidentWave wave(1.0);
  const std::vector<double> ladder{1e-3, 1e-6, 1e-9, 1e-12};
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed : {11u, 12u}) {
    const ConsistencyReport r = limit_consistency(field, wave, ladder, seed, 24);
    std::vector<double> d;
    for (const auto& row : r.rows) d.push_back(row.discrepancy);
    for (std::size_t i = 1; i < d.size(); ++i) ok = ok && d[i] <= d[i - 1];
    detail += (detail.empty() ? "" : "; ") + ("seed " + std::to_string(seed) + ": ") + fmt(d);
  }
  return {ok, "discrepancy " + detail};
}

Outcome dispersion() {
  const double kappa = 1.0;
  const double n = 0.05;
  const DensityField field = DensityField::constant({}, n);
  const IncidentWave wave(kappa);
  const double kappa_n = std::sqrt(kappa * kappa - 2 * kPi * n);
  std::vector<double> res;
  for (int cells : {8, 16, 32, 64}) {
    GridField g{{0, 0}, 1.0 / cells, 1.0 / cells, cells + 1, cells + 1, {}};
    for (int iy = 0; iy <= cells; ++iy) {
      for (int ix = 0; ix <= cells; ++ix) {
        g.values.push_back(std::exp(Complex(0, kappa_n * g.node(ix, iy).y)));
      }
    }
    res.push_back(pde_residual(g, field, wave));
  }
  std::vector<double> ratios;
  bool ok = true;
  for (std::size_t i = 1; i < res.size(); ++i) {
    ratios.push_back(res[i - 1] / res[i]);
    ok = ok && ratios.back() >= 3.5 && ratios.back() <= 4.5;
  }
  const double k = 1.3;
  const bool endpoints = refraction_coefficient(1.7, 0.0, k).n_sq == 1.7 &&
                         refraction_coefficient(1.7, k * k / (2 * kPi), k).n_sq == 0.0;
  return {ok && endpoints,
          "residual ratios " + fmt(ratios) + (endpoints ? "; endpoints exact" : "; endpoints off")};
}

Outcome maxwell() {
  const ModeParams params = ModeParams::from_wavenumbers(1.0, 0.7, 1.3, 1.1);
  const Disc disc({0, 0}, 0.05);
  const IncidentWave wave(params.kappa());
  const int terms = series_terms_for(params.kappa() * disc.radius);
  const ScalarField u = [&](Point2 x) { return exact_series_sample(disc, wave, terms, x); };
  std::vector<double> ce, ch;
  double h3 = 0.0;
  for (int n : {5, 9, 17}) {
    const FieldGrid g = sample_field_grid(u, params, {-1.1, 0.9, 0.2}, 0.4 / (n - 1), n, n, n);
    const MaxwellResidual r = maxwell_residual(g, params);
    ce.push_back(r.curl_e);
    ch.push_back(r.curl_h);
    for (const auto& v : g.h[2]) h3 = std::max(h3, std::abs(v));
  }
  const double oe = std::log2(ce[1] / ce[2]);
  const double oh = std::log2(ch[1] / ch[2]);
  const bool second_order = std::abs(oe - 2) <= 0.2 && std::abs(oh - 2) <= 0.2 &&
                            strictly_decreasing(ce) && strictly_decreasing(ch);
  const double tangential = tangential_e_on_cylinder(u, params, disc, 128, 0.4);
  return {second_order && tangential <= 1e-10 && h3 == 0.0,
          "orders curl E " + fmt(oe) + ", curl H " + fmt(oh) + "; tangential E " + fmt(tangential) +
              "; max |H3| " + fmt(h3)};
}

Outcome sampling() {
  const Rect unit{};
  const std::vector<DensityField> fields{DensityField::constant(unit, 0.5),
                                         DensityField::linear_ramp(unit, 0.1, 1.0),
                                         DensityField::gaussian_bump(unit, 1.0, {0.5, 0.5}, 0.2)};
  double worst = 0.0;
  bool ok = true;
  for (const auto& field : fields) {
    for (double a : {1e-3, 1e-6, 1e-9}) {
      for (std::uint64_t seed : {1u, 2u}) {
        const CenterSample s = sample_centers(field, a, seed);
        const double log_inv = std::log(1 / a);
        std::vector<int> counts(s.partition.squares().size(), 0);
        for (const auto& c : s.array.centers()) ++counts.at(s.partition.index_of(c));
        for (std::size_t p = 0; p < counts.size(); ++p) {
          const Square& sq = s.partition.squares()[p];
          const double gap = std::abs(counts[p] / log_inv - field(sq.center) * sq.area());
          worst = std::max(worst, gap * log_inv);
          ok = ok && gap <= 0.5 / log_inv + 1e-12;
        }
      }
    }
  }
  return {ok, "max |count - ln(1/a) N |Delta|| = " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "log-sine constant", 1.0, log_sine},
      {2, "ring log integral", 1.0, ring},
      {3, "charge asymptotics", 5.0, charge},
      {4, "single-cylinder field", 10.0, single_field},
      {5, "system reduction", 1.0, reduction},
      {6, "homogenization consistency", 60.0, homogenization},
      {7, "dispersion and refraction", 5.0, dispersion},
      {8, "Maxwell consistency", 10.0, maxwell},
      {9, "sampling law", 5.0, sampling},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool passed = o.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("[%s] criterion %d: %s: %s; %.3f s (limit %.0f s)\n", passed ? "PASS" : "FAIL",
                c.id, c.title.c_str(), o.detail.c_str(), seconds, c.time_limit);
  }
  return failures == 0 ? 0 : 1;
}
