// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Desk-scale defaults throughout: M = K = 256, N = 24, grid step 0.02,
// margin 0.1, h_ray 1e-3.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "tensoray/reconstruct.hpp"
#include "tensoray/transport.hpp"

using namespace tensoray;

namespace {

constexpr double kPi = std::numbers::pi;

struct Tally {
  int failed = 0;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void report(int num, const char* name, bool pass, const std::string& detail) {
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    std::printf("[%s] %2d. %-24s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", num, name,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failed;
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double fan_sup(const FanData& f) {
  double s = 0.0;
  for (double v : f.values) s = std::max(s, std::abs(v));
  return s;
}

double fan_sup_rel_diff(const FanData& a, const FanData& b) {
  double sup = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
    ref = std::max(ref, std::abs(a.values[i]));
  }
  return ref > 0.0 ? sup / ref : sup;
}

std::shared_ptr<const BumpTensor> bump_phantom() {
  return std::make_shared<BumpTensor>(BumpComponent{0.9, {0.12, -0.05}, 0.45},
                                      BumpComponent{-0.5, {-0.1, 0.15}, 0.4},
                                      BumpComponent{0.7, {0.0, 0.08}, 0.5}, 1.0);
}

std::shared_ptr<const PotentialTensor> potential_phantom() {
  VectorFieldDesc v;
  v.value = [](Vec2 x) -> Vec2 {
    double w = 1.0 - norm2(x);
    return {w * w, 0.0};
  };
  v.jacobian = [](Vec2 x) -> std::array<double, 4> {
    double w = 1.0 - norm2(x);
    return {-4.0 * x.x * w, -4.0 * x.y * w, 0.0, 0.0};
  };
  return std::make_shared<PotentialTensor>(v, 1.0);
}

// chord integral of the centered Gaussian at signed distance s (the closed
// form includes the chord truncation factor)
double gaussian_chord(double s, double sigma, double radius) {
  if (std::abs(s) >= radius) return 0.0;
  double half = std::sqrt(radius * radius - s * s);
  return sigma * std::sqrt(kPi) * std::exp(-s * s / (sigma * sigma)) * std::erf(half / sigma);
}

struct Settings {
  std::size_t M, K;
  int N;
  double step;
};

}  // namespace

int main() {
  Tally tally;
  const double h_ray = 1e-3;
  const Settings def{256, 256, 24, 0.02};
  const Settings coarse{192, 192, 18, 0.03};

  Domain dom(1.0, def.M);
  auto grid = std::make_shared<DiskGrid>(def.step, 1.0 - 0.1);

  // 1. forward accuracy against the Gaussian chord integral
  try {
    IsotropicGaussian gauss(0.3, {0.0, 0.0}, 1.0);
    FanData fan = make_fan(gauss, nullptr, dom, def.K, h_ray);
    double worst = 0.0;
    for (std::size_t i = 0; i < fan.M; ++i) {
      Vec2 zeta = dom.boundary_point(i);
      for (std::size_t j = 0; j < fan.K; ++j) {
        Vec2 th = unit_vec(fan.angle(j));
        if (dom.classify(zeta, th) != RayClass::outflow) continue;
        double expect = gaussian_chord(dot(zeta, perp(th)), 0.3, 1.0);
        if (expect != 0.0)
          worst = std::max(worst, std::abs(fan.at(i, j) - expect) / std::abs(expect));
      }
    }
    tally.report(1, "forward accuracy", worst < 1e-6, fmt("rel err %.2e < 1e-6", worst));
  } catch (const std::exception& e) {
    tally.report(1, "forward accuracy", false, e.what());
  }

  // 2. null space of the potential tensor
  try {
    FanData fan = make_fan(*potential_phantom(), nullptr, dom, def.K, h_ray);
    double sup = fan_sup(fan);
    tally.report(2, "null space", sup < 1e-6, fmt("sup |X F| %.2e < 1e-6", sup));
  } catch (const std::exception& e) {
    tally.report(2, "null space", false, e.what());
  }

  // shared bump data at the default settings
  auto bump = bump_phantom();
  FanData fan_bump = make_fan(*bump, nullptr, dom, def.K, h_ray);
  ModeSequences ms_bump = angular_modes(fan_bump, def.N);
  double even_res = range_residual(build_even(ms_bump), dom).sup;
  double odd_res = range_residual(build_odd(ms_bump), dom).sup;

  // 3. range necessity and its decrease under refinement
  try {
    Domain dom2(1.0, 2 * def.M);
    FanData fan2 = make_fan(*bump, nullptr, dom2, 2 * def.K, h_ray);
    ModeSequences ms2 = angular_modes(fan2, 2 * def.N);
    double even2 = range_residual(build_even(ms2), dom2).sup;
    double odd2 = range_residual(build_odd(ms2), dom2).sup;
    bool pass = even_res < 5e-3 && odd_res < 5e-3 && even2 < even_res && odd2 < odd_res;
    tally.report(3, "range necessity", pass,
                 fmt("even %.2e odd %.2e < 5e-3; refined", even_res, odd_res) +
                     fmt(" even %.2e odd %.2e", even2, odd2));
  } catch (const std::exception& e) {
    tally.report(3, "range necessity", false, e.what());
  }

  // 4. odd-extension variant
  try {
    FanData tilde = odd_extension(fan_bump);
    ModeSequences tm = angular_modes(tilde, def.N);
    double even_mode = 0.0;
    for (std::size_t i = 0; i < tm.M; ++i)
      for (int n = -def.N; n <= def.N; n += 2)
        even_mode = std::max(even_mode, std::abs(tm.g(i, n)));
    double res = range_residual(gtilde_seq(fan_bump, def.N), dom).sup;
    bool pass = res < 5e-3 && even_mode < 1e-14;
    tally.report(4, "odd extension", pass,
                 fmt("residual %.2e < 5e-3, even modes %.2e < 1e-14", res, even_mode));
  } catch (const std::exception& e) {
    tally.report(4, "odd extension", false, e.what());
  }

  // 5. integrating factor identities (Gaussian attenuation, min a = 0.2)
  auto atten = std::make_shared<GaussianAttenuation>(0.2 * std::exp(1.0), 1.0, Vec2{0.0, 0.0},
                                                     1.0);
  std::shared_ptr<AttenuationPack> pack;
  try {
    PackConfig pcfg;  // defaults: h_att 2e-3, radon step 1/256, padding 8
    pack = std::make_shared<AttenuationPack>(
        build_pack(atten, dom, grid, def.K, def.N, pcfg));
    PackIdentityReport rep = verify_pack(*pack);
    bool pass = rep.transport < 1e-3 && rep.neg_modes < 1e-6 && rep.conv < 1e-8 &&
                rep.alpha_recursion < 1e-3 && rep.beta_recursion < 1e-3;
    tally.report(5, "integrating factor", pass,
                 fmt("transport %.2e neg %.2e conv %.2e", rep.transport, rep.neg_modes,
                     rep.conv) +
                     fmt(" recursions %.2e/%.2e < 1e-3", rep.alpha_recursion,
                         rep.beta_recursion));
  } catch (const std::exception& e) {
    tally.report(5, "integrating factor", false, e.what());
  }

  // 6. attenuated necessity
  FanData fan_att = make_fan(*bump, atten.get(), dom, def.K, h_ray);
  try {
    AttenuatedModes am = attenuated_data_modes(fan_att, *pack);
    double he = range_residual(am.g_h_even, dom).sup;
    double ho = range_residual(am.g_h_odd, dom).sup;
    double compat = compat_check(fan_att, *pack);
    bool pass = he < 5e-3 && ho < 5e-3 && compat < 5e-3;
    tally.report(6, "attenuated necessity", pass,
                 fmt("g_h even %.2e odd %.2e compat %.2e < 5e-3", he, ho, compat));
  } catch (const std::exception& e) {
    tally.report(6, "attenuated necessity", false, e.what());
  }

  // 7. reconstruction roundtrips, improving under refinement
  double rel_free = 1e9, rel_att = 1e9;
  std::shared_ptr<ReconstructionResult> recon_free;
  try {
    recon_free = std::make_shared<ReconstructionResult>(
        reconstruct_free(fan_bump, std::nullopt, def.N, dom, grid));
    FanData back = make_fan(*recon_free->tensor, nullptr, dom, def.K, h_ray);
    rel_free = fan_sup_rel_diff(fan_bump, back);

    ReconstructionResult ratt = reconstruct_att(fan_att, *pack, std::nullopt);
    FanData back_att = make_fan(*ratt.tensor, atten.get(), dom, def.K, h_ray);
    rel_att = fan_sup_rel_diff(fan_att, back_att);

    // coarse pair for the refinement clause
    Domain dom_c(1.0, coarse.M);
    auto grid_c = std::make_shared<DiskGrid>(coarse.step, 0.9);
    FanData fan_c = make_fan(*bump, nullptr, dom_c, coarse.K, h_ray);
    ReconstructionResult rc = reconstruct_free(fan_c, std::nullopt, coarse.N, dom_c, grid_c);
    double rel_free_c = fan_sup_rel_diff(fan_c, make_fan(*rc.tensor, nullptr, dom_c, coarse.K, h_ray));

    PackConfig pcfg_c;
    AttenuationPack pack_c = build_pack(atten, dom_c, grid_c, coarse.K, coarse.N, pcfg_c);
    FanData fan_att_c = make_fan(*bump, atten.get(), dom_c, coarse.K, h_ray);
    ReconstructionResult rac = reconstruct_att(fan_att_c, pack_c, std::nullopt);
    double rel_att_c =
        fan_sup_rel_diff(fan_att_c, make_fan(*rac.tensor, atten.get(), dom_c, coarse.K, h_ray));

    bool pass = rel_free < 2e-2 && rel_att < 5e-2 && rel_free < rel_free_c && rel_att < rel_att_c;
    tally.report(7, "roundtrip", pass,
                 fmt("free %.2e < 2e-2 (coarse %.2e);", rel_free, rel_free_c) +
                     fmt(" attenuated %.2e < 5e-2 (coarse %.2e)", rel_att, rel_att_c));
  } catch (const std::exception& e) {
    tally.report(7, "roundtrip", false, e.what());
  }

  // 8. gauge non-uniqueness
  try {
    ReconstructionResult r2 =
        reconstruct_free(fan_bump, psi_radial_blend(ms_bump, dom, grid), def.N, dom, grid);
    double diff = 0.0;
    for (std::size_t i = 0; i < r2.tensor_grid->comp11().size(); ++i) {
      diff = std::max(diff, std::abs(recon_free->tensor_grid->comp11()[i] -
                                     r2.tensor_grid->comp11()[i]));
      diff = std::max(diff, std::abs(recon_free->tensor_grid->comp12()[i] -
                                     r2.tensor_grid->comp12()[i]));
      diff = std::max(diff, std::abs(recon_free->tensor_grid->comp22()[i] -
                                     r2.tensor_grid->comp22()[i]));
    }
    double rel2 = fan_sup_rel_diff(fan_bump, make_fan(*r2.tensor, nullptr, dom, def.K, h_ray));
    bool pass = diff > 1e-3 && rel2 < 2e-2 && rel_free < 2e-2;
    tally.report(8, "non-uniqueness", pass,
                 fmt("tensor diff %.2e > 1e-3, data agree %.2e/%.2e", diff, rel_free, rel2));
  } catch (const std::exception& e) {
    tally.report(8, "non-uniqueness", false, e.what());
  }

  // 9. L-analyticity of the Cauchy output on forward data
  try {
    double res = recon_free ? recon_free->l_analytic : 1e9;
    tally.report(9, "L-analyticity", res < 1e-3, fmt("residual %.2e < 1e-3", res));
  } catch (const std::exception& e) {
    tally.report(9, "L-analyticity", false, e.what());
  }

  // 10. sensitivity to an injected spurious mode
  try {
    FanData noisy = fan_bump;
    for (std::size_t i = 0; i < noisy.M; ++i) {
      double s = dom.node_angle(i);
      for (std::size_t j = 0; j < noisy.K; ++j) {
        if (dom.classify(dom.boundary_point(i), unit_vec(noisy.angle(j))) != RayClass::outflow)
          continue;
        noisy.at(i, j) += 0.1 * std::cos(2.0 * noisy.angle(j)) * std::sin(s);
      }
    }
    ModeSequences msn = angular_modes(noisy, def.N);
    double even_n = range_residual(build_even(msn), dom).sup;
    double odd_n = range_residual(build_odd(msn), dom).sup;
    double clean = std::max(even_res, odd_res);
    double dirty = std::max(even_n, odd_n);
    bool pass = dirty >= 10.0 * clean;
    tally.report(10, "sensitivity", pass, fmt("noisy %.2e vs clean %.2e (x%.0f)", dirty, clean,
                                              clean > 0 ? dirty / clean : 0.0));
  } catch (const std::exception& e) {
    tally.report(10, "sensitivity", false, e.what());
  }

  if (tally.failed == 0) {
    std::puts("acceptance: all criteria passed");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", tally.failed);
  return 1;
}
