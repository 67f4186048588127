#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tensoray/attenuation.hpp"
#include "tensoray/errors.hpp"
#include "tensoray/transport.hpp"

using namespace tensoray;

namespace {

constexpr double kPi = std::numbers::pi;

PackConfig fast_cfg() {
  PackConfig cfg;
  cfg.h_att = 5e-3;
  cfg.radon_step = 1.0 / 128.0;
  cfg.mass_tol = 1e-2;  // the 1e-4 gate is calibrated for the default N = 24
  return cfg;
}

AttenuationPack small_pack(std::shared_ptr<const Attenuation> a) {
  Domain dom(1.0, 64);
  auto grid = std::make_shared<DiskGrid>(0.05, 0.9);
  return build_pack(std::move(a), dom, grid, 64, 8, fast_cfg());
}

}  // namespace

TEST_SUITE_BEGIN("attenuation");

TEST_CASE("beam_transform") {
  ConstantAttenuation tiny(1e-12, 1.0);
  CHECK(std::abs(beam_transform(tiny, {0.2, 0.1}, unit_vec(0.7), 1e-3)) < 1e-10);

  GaussianAttenuation g(1.0, 0.25, {0.0, 0.0}, 1.0);
  double v = beam_transform(g, {0.0, 0.0}, {1.0, 0.0}, 1e-3);
  CHECK(std::abs(v - 0.25 * std::sqrt(kPi) / 2.0) < 1e-7);

  // beam pair sums to the full line integral
  GaussianAttenuation go(0.8, 0.4, {0.15, -0.1}, 1.0);
  for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.3, 0.2}, Vec2{-0.5, 0.1}}) {
    Vec2 th = unit_vec(1.1);
    double da1 = beam_transform(go, z, th, 1e-3);
    double da2 = beam_transform(go, z, -th, 1e-3);
    double ra = radon(go, dot(z, perp(th)), th, 1e-3);
    CHECK(std::abs(da1 + da2 - ra) < 1e-9);
  }
}

TEST_CASE("radon") {
  ConstantAttenuation tiny(1e-12, 1.0);
  CHECK(std::abs(radon(tiny, 0.3, unit_vec(0.2), 1e-3)) < 1e-10);

  GaussianAttenuation g(1.0, 0.25, {0.0, 0.0}, 1.0);
  for (double s : {0.0, 0.2, 0.5}) {
    double v = radon(g, s, unit_vec(0.9), 1e-3);
    double expect = 0.25 * std::sqrt(kPi) * std::exp(-s * s / (0.25 * 0.25));
    CHECK(std::abs(v - expect) < 1e-7);
    CHECK(std::abs(radon(g, -s, unit_vec(0.9), 1e-3) - v) < 1e-12);
  }
  CHECK(radon(g, 1.5, unit_vec(0.0), 1e-3) == 0.0);  // outside the support
}

TEST_CASE("classical_hilbert") {
  const double ds = 0.01;
  const std::size_t n = 8192;
  const double s0 = -0.5 * ds * double(n);
  std::vector<double> zero(n, 0.0);
  auto hz = classical_hilbert(zero, s0, ds);
  for (double v : hz) CHECK(v == 0.0);

  // H(H f) = -f on an oscillatory compactly supported profile
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = s0 + ds * double(i);
    if (std::abs(s) < 2.0) f[i] = std::sin(20.0 * s) * std::exp(-s * s / 0.16);
  }
  auto hf = classical_hilbert(f, s0, ds);
  auto hhf = classical_hilbert(hf, s0, ds, 0);  // Hf is not compactly supported: plain multiplier
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(s0 + ds * double(i)) < 2.0) worst = std::max(worst, std::abs(hhf[i] + f[i]));
  CHECK(worst < 1e-6);

  // Lorentzian pair: H[1/(1+s^2)] = s/(1+s^2)
  const double ds2 = 0.01;
  const std::size_t n2 = 16384;
  const double s02 = -0.5 * ds2 * double(n2);
  std::vector<double> lor(n2, 0.0);
  for (std::size_t i = 0; i < n2; ++i) {
    double s = s02 + ds2 * double(i);
    if (std::abs(s) <= 20.0) lor[i] = 1.0 / (1.0 + s * s);
  }
  auto hl = classical_hilbert(lor, s02, ds2);
  double worst2 = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    double s = s02 + ds2 * double(i);
    if (std::abs(s) <= 2.0) worst2 = std::max(worst2, std::abs(hl[i] - s / (1.0 + s * s)));
  }
  CHECK(worst2 < 1e-4);

  // insufficient padding is rejected
  std::vector<double> wide(256, 1.0);
  CHECK_THROWS_AS(classical_hilbert(wide, -1.28, 0.01), ConfigError);
}

TEST_CASE("classical_hilbert narrowband quadrature pair") {
  // cosine times a smooth window maps to sine times the window, up to the
  // window's spectral spread; checks the sign of the multiplier
  const double ds = 0.005;
  const std::size_t n = 4096;
  const double s0 = -0.5 * ds * double(n);
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = s0 + ds * double(i);
    if (std::abs(s) < 2.0) f[i] = std::cos(30.0 * s) * std::exp(-s * s / 0.25);
  }
  auto hf = classical_hilbert(f, s0, ds);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = s0 + ds * double(i);
    if (std::abs(s) < 1.0)
      worst = std::max(worst, std::abs(hf[i] - std::sin(30.0 * s) * std::exp(-s * s / 0.25)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("build_pack on a near-zero attenuation") {
  auto tiny = std::make_shared<ConstantAttenuation>(1e-12, 1.0);
  AttenuationPack pack = small_pack(tiny);
  double worst_h = 0.0;
  for (Complex h : pack.h_boundary) worst_h = std::max(worst_h, std::abs(h));
  for (Complex h : pack.h_interior) worst_h = std::max(worst_h, std::abs(h));
  CHECK(worst_h < 1e-10);
  // alpha_0 = beta_0 = 1, higher modes vanish
  for (int k = 0; k <= pack.N; ++k) {
    double expect = (k == 0) ? 1.0 : 0.0;
    double worst = 0.0;
    for (std::size_t idx = 0; idx < pack.grid->size(); ++idx) {
      if (!pack.grid->inside_mask()[idx]) continue;
      worst = std::max(worst, std::abs(pack.alpha[k].v[idx] - expect));
      worst = std::max(worst, std::abs(pack.beta[k].v[idx] - expect));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("integrating factor identities") {
  auto gauss =
      std::make_shared<GaussianAttenuation>(0.2 * std::exp(1.0), 1.0, Vec2{0.0, 0.0}, 1.0);
  AttenuationPack pack = small_pack(gauss);
  PackIdentityReport rep = verify_pack(pack);
  CHECK(rep.transport < 5e-3);  // central differences at grid step 0.05
  CHECK(rep.neg_modes < 1e-6);
  CHECK(rep.conv < 1e-8);
  CHECK(rep.alpha_recursion < 5e-3);
  CHECK(rep.beta_recursion < 5e-3);
  CHECK(rep.eh_product < 1e-10);
  CHECK(pack.discarded_mass < 1e-2);

  // tabulated h against the direct slow path
  PackConfig cfg = fast_cfg();
  for (Vec2 z : {Vec2{0.3, 0.2}, Vec2{-0.4, 0.1}, Vec2{0.0, -0.55}}) {
    std::size_t j = 9;
    double phi = 2.0 * kPi * double(j) / double(pack.K);
    int ix, iy;
    double fx, fy;
    REQUIRE(pack.grid->locate(z, ix, iy, fx, fy));
    // compare at an actual grid node
    Vec2 node = pack.grid->point(ix, iy);
    Complex table = pack.h_interior[pack.grid->index(ix, iy) * pack.K + j];
    Complex direct = integrating_factor_direct(*gauss, node, phi, cfg);
    CHECK(std::abs(table - direct) < 1e-5);
  }
}

TEST_CASE("u_from_v and v_from_u") {
  auto gauss =
      std::make_shared<GaussianAttenuation>(0.2 * std::exp(1.0), 1.0, Vec2{0.0, 0.0}, 1.0);
  AttenuationPack pack = small_pack(gauss);
  auto grid = pack.grid;

  // zero in, zero out
  SequenceField zero;
  zero.comp.assign(4, Field(grid));
  SequenceField uz = u_from_v(zero, pack);
  for (const auto& f : uz.comp)
    for (auto c : f.v) CHECK(std::abs(c) == 0.0);

  // smooth synthetic v with decaying components
  SequenceField v;
  v.comp.assign(6, Field(grid));
  for (std::size_t k = 0; k < v.comp.size(); ++k)
    for (int iy = 0; iy < grid->n(); ++iy)
      for (int ix = 0; ix < grid->n(); ++ix) {
        if (!grid->inside(ix, iy)) continue;
        Complex z = to_complex(grid->point(ix, iy));
        v.comp[k].v[grid->index(ix, iy)] =
            std::pow(0.4, double(k)) * (z * z + 0.3 * std::conj(z) + Complex{0.1, 0.05});
      }

  // near-zero attenuation: u = v
  auto tiny = std::make_shared<ConstantAttenuation>(1e-12, 1.0);
  AttenuationPack tpack = small_pack(tiny);
  SequenceField ut = u_from_v(v, tpack);
  double worst = 0.0;
  for (std::size_t k = 0; k < v.comp.size(); ++k)
    for (std::size_t i = 0; i < v.comp[k].v.size(); ++i)
      if (v.comp[k].mask[i]) worst = std::max(worst, std::abs(ut.comp[k].v[i] - v.comp[k].v[i]));
  CHECK(worst < 1e-8);

  // roundtrip up to the convolution truncation
  SequenceField u = u_from_v(v, pack);
  SequenceField back = v_from_u(u, pack);
  // compare only the leading components; the deepest ones lose convolution
  // partners to the truncation
  double round = 0.0;
  for (std::size_t k = 0; k + 3 < v.comp.size(); ++k)
    for (std::size_t i = 0; i < v.comp[k].v.size(); ++i)
      if (v.comp[k].mask[i])
        round = std::max(round, std::abs(back.comp[k].v[i] - v.comp[k].v[i]));
  CHECK(round < 1e-6);
}


TEST_CASE("attenuated data modes") {
  Domain dom(1.0, 64);
  auto bump = std::make_shared<BumpTensor>(BumpComponent{0.8, {0.1, 0.0}, 0.45},
                                           BumpComponent{-0.4, {-0.1, 0.1}, 0.4},
                                           BumpComponent{0.6, {0.0, 0.05}, 0.5}, 1.0);

  // near-zero attenuation: gamma modes coincide with the plain modes
  auto tiny = std::make_shared<ConstantAttenuation>(1e-9, 1.0);
  AttenuationPack tpack = small_pack(tiny);
  FanData fan = make_fan(*bump, tiny.get(), dom, 64, 2e-3);
  AttenuatedModes am = attenuated_data_modes(fan, tpack);
  double worst = 0.0;
  for (std::size_t i = 0; i < dom.nodes(); ++i)
    for (int n = -tpack.N; n <= tpack.N; ++n)
      worst = std::max(worst, std::abs(am.gamma.g(i, n) - am.plain.g(i, n)));
  CHECK(worst < 1e-8);

  // zero fan: zero sequences
  FanData zf(dom.nodes(), 64, 1.0);
  AttenuatedModes z = attenuated_data_modes(zf, tpack);
  for (auto c : z.g_h.c) CHECK(std::abs(c) == 0.0);

  // sequence layout: g_h starts at gamma_{-2}, g_h_odd skips gamma_{-1}
  CHECK(am.g_h.len == std::size_t(tpack.N) - 1);
  CHECK(am.g_h_even.len + am.g_h_odd.len == am.g_h.len);
  CHECK(std::abs(am.g_h.at(3, 0) - am.gamma.g(3, -2)) == 0.0);
  CHECK(std::abs(am.g_h_odd.at(3, 0) - am.gamma.g(3, -3)) == 0.0);

  // convolution oracle: gamma_k = sum_m alpha_m^Gamma g_{k-m} with the
  // boundary modes of e^{-h}
  auto gauss =
      std::make_shared<GaussianAttenuation>(0.2 * std::exp(1.0), 1.0, Vec2{0.0, 0.0}, 1.0);
  AttenuationPack pack = small_pack(gauss);
  FanData fan2 = make_fan(*bump, gauss.get(), dom, 64, 2e-3);
  // plain modes of the fan at full depth for the convolution window
  int deep = 24;
  ModeSequences gfull = angular_modes(fan2, deep);
  AttenuatedModes am2 = attenuated_data_modes(fan2, pack);
  double worst2 = 0.0;
  for (std::size_t i = 0; i < dom.nodes(); i += 5) {
    // boundary angular modes of e^{-h} at node i
    std::vector<Complex> arow(2 * deep + 1);
    for (int k = -deep; k <= deep; ++k) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < pack.K; ++j) {
        double ang = -double(k) * 2.0 * kPi * double(j) / double(pack.K);
        acc += pack.boundary_eh[i * pack.K + j] * Complex{std::cos(ang), std::sin(ang)};
      }
      arow[k + deep] = acc / double(pack.K);
    }
    for (int k = -4; k <= 4; ++k) {
      Complex conv = 0.0;
      for (int m = -deep; m <= deep; ++m) {
        int rest = k - m;
        if (std::abs(rest) > deep) continue;
        conv += arow[m + deep] * gfull.g(i, rest);
      }
      worst2 = std::max(worst2, std::abs(conv - am2.gamma.g(i, k)));
    }
  }
  CHECK(worst2 < 1e-10);
}

TEST_SUITE_END();
