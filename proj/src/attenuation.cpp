#include "tensoray/attenuation.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "tensoray/errors.hpp"
#include "tensoray/parallel.hpp"

namespace tensoray {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// composite Simpson of f over [t0, t1] with step <= `step`
template <class F>
double simpson(F&& f, double t0, double t1, double step) {
  if (t1 <= t0) return 0.0;
  std::size_t n = std::size_t(std::ceil((t1 - t0) / step));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  double h = (t1 - t0) / double(n);
  double sum = f(t0) + f(t1);
  for (std::size_t k = 1; k < n; ++k) sum += f(t0 + h * double(k)) * (k % 2 == 1 ? 4.0 : 2.0);
  return h / 3.0 * sum;
}

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// in-place complex FFT through FFTW; sign = FFTW_FORWARD / FFTW_BACKWARD
void fft(std::vector<Complex>& data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(int(data.size()), reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

double beam_transform(const Attenuation& a, Vec2 z, Vec2 theta, double step) {
  double rs = a.support_radius();
  if (norm2(z) > rs * rs)
    throw std::domain_error("beam_transform: point outside the extension support");
  // exit of the support ball along theta
  double b = dot(z, theta);
  double tmax = -b + std::sqrt(std::max(0.0, b * b + rs * rs - norm2(z)));
  return simpson([&](double t) { return a.extended(z + t * theta); }, 0.0, tmax, step);
}

double radon(const Attenuation& a, double s, Vec2 theta, double step) {
  double rs = a.support_radius();
  if (std::abs(s) >= rs) return 0.0;
  double half = std::sqrt(rs * rs - s * s);
  Vec2 base = s * perp(theta);
  return simpson([&](double t) { return a.extended(base + t * theta); }, -half, half, step);
}

std::vector<double> classical_hilbert(const std::vector<double>& samples, double s_left,
                                      double ds, int corrections) {
  const std::size_t n = samples.size();
  if (n < 8) throw ConfigError("classical_hilbert: grid too small");
  if (corrections < 0 || corrections > 5)
    throw ConfigError("classical_hilbert: corrections order must be in [0, 5]");

  // support of the samples
  std::size_t lo = n, hi = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (samples[i] != 0.0) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  std::vector<double> out(n, 0.0);
  if (lo > hi) return out;  // identically zero
  double support_len = double(hi - lo + 1) * ds;
  double total_len = double(n) * ds;
  // corrections == 0 is the plain periodic multiplier, which carries no
  // compact-support requirement
  if (corrections > 0 && total_len < 4.0 * support_len)
    throw ConfigError("classical_hilbert: grid must be zero-padded to >= 4x the support");

  // periodic Hilbert transform: multiplier -i*sgn(k)
  std::vector<Complex> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = samples[i];
  fft(buf, FFTW_FORWARD);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || k == half) {
      buf[k] = 0.0;
    } else if (k < half) {
      buf[k] *= Complex{0.0, -1.0};
    } else {
      buf[k] *= Complex{0.0, 1.0};
    }
  }
  fft(buf, FFTW_BACKWARD);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real() / double(n);

  if (corrections == 0) return out;

  // The periodic kernel is (pi/L) cot(pi (s-t)/L) = 1/(s-t) - sum_k c_k
  // ((pi/L)^2k) (s-t)^{2k-1}; add the moment polynomials back to recover
  // the line transform.
  static const double cot_coef[5] = {1.0 / 3.0, 1.0 / 45.0, 2.0 / 945.0, 1.0 / 4725.0,
                                     2.0 / 93555.0};
  int pmax = 2 * corrections - 1;
  std::vector<double> mu(pmax + 1, 0.0);  // raw moments of the samples
  for (std::size_t i = lo; i <= hi; ++i) {
    double s = s_left + ds * double(i);
    double pw = 1.0;
    for (int p = 0; p <= pmax; ++p) {
      mu[p] += samples[i] * pw * ds;
      pw *= s;
    }
  }
  std::vector<double> binom((pmax + 1) * (pmax + 1), 0.0);
  for (int p = 0; p <= pmax; ++p) {
    binom[p * (pmax + 1) + 0] = 1.0;
    for (int r = 1; r <= p; ++r)
      binom[p * (pmax + 1) + r] =
          binom[(p - 1) * (pmax + 1) + r - 1] + ((r <= p - 1) ? binom[(p - 1) * (pmax + 1) + r] : 0.0);
  }
  const double L = total_len;
  for (std::size_t i = 0; i < n; ++i) {
    double s = s_left + ds * double(i);
    double corr = 0.0;
    for (int k = 1; k <= corrections; ++k) {
      int p = 2 * k - 1;
      // m_p(s) = int f(t) (s-t)^p dt expanded in raw moments
      double m = 0.0;
      double sp = 1.0;
      for (int r = p; r >= 0; --r) {  // s^{p-r} (-1)^r mu_r, accumulate from r = p
        double term = binom[p * (pmax + 1) + r] * ((r % 2) ? -1.0 : 1.0) * mu[r] * sp;
        m += term;
        sp *= s;
      }
      corr += cot_coef[k - 1] * std::pow(std::numbers::pi / L, 2 * k) * m;
    }
    out[i] += corr / std::numbers::pi;
  }
  return out;
}

namespace {

// uniform-grid cubic (4-point Lagrange) interpolation
double cubic_interp(const std::vector<double>& f, double s_left, double ds, double x) {
  double g = (x - s_left) / ds;
  long l = long(std::floor(g));
  if (l < 1) l = 1;
  if (l > long(f.size()) - 3) l = long(f.size()) - 3;
  double t = g - double(l);
  double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return w0 * f[l - 1] + w1 * f[l] + w2 * f[l + 1] + w3 * f[l + 2];
}

struct STable {
  double s_left = 0.0;
  double ds = 0.0;
  std::vector<double> ra;   // Radon profile
  std::vector<double> hra;  // its Hilbert transform
};

}  // namespace

Complex integrating_factor_direct(const Attenuation& a, Vec2 z, double phi,
                                  const PackConfig& cfg) {
  Vec2 theta = unit_vec(phi);
  double s = dot(z, perp(theta));
  double da = beam_transform(a, z, theta, cfg.h_att);
  double ra = radon(a, s, theta, cfg.h_att);
  // regularized principal value on the support interval
  double S = a.support_radius();
  auto f = [&](double t) { return radon(a, t, theta, cfg.h_att); };
  const std::size_t nq = 4096;
  double fs = ra, acc = 0.0;
  double hq = 2.0 * S / double(nq);
  for (std::size_t k = 0; k <= nq; ++k) {
    double t = -S + hq * double(k);
    double w = (k == 0 || k == nq) ? 0.5 : 1.0;
    double d = s - t;
    double val = (std::abs(d) < 1e-12) ? 0.0 : (f(t) - fs) / d;
    acc += w * val * hq;
  }
  double hra = (acc + fs * std::log((S + s) / (S - s))) / std::numbers::pi;
  return Complex{da - 0.5 * ra, 0.5 * hra};
}

AttenuationPack build_pack(std::shared_ptr<const Attenuation> a, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid, std::size_t K, int N,
                           const PackConfig& cfg) {
  if (K % 2 != 0 || K < std::size_t(2 * N + 2))
    throw ConfigError("build_pack: need even K >= 2N+2");
  if (grid->r_max() > dom.radius())
    throw std::invalid_argument("build_pack: grid exceeds the domain");

  AttenuationPack pack;
  pack.a = a;
  pack.dom = dom;
  pack.grid = grid;
  pack.K = K;
  pack.N = N;
  pack.cfg = cfg;
  pack.rings = reconstruction_rings(dom, *grid, cfg.ring_offset);

  // ---- per-direction (s)-tables: Radon profile and its Hilbert transform
  const double S = a->support_radius();
  const double Lhalf = cfg.padding * S;
  std::size_t ns = 1;
  while (double(ns) * cfg.radon_step < 2.0 * Lhalf) ns *= 2;
  std::vector<STable> tables(K);
  parallel_for(K, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      STable& t = tables[j];
      t.ds = cfg.radon_step;
      t.s_left = -0.5 * double(ns) * t.ds;
      t.ra.assign(ns, 0.0);
      Vec2 theta = unit_vec(kTwoPi * double(j) / double(K));
      for (std::size_t l = 0; l < ns; ++l) {
        double s = t.s_left + t.ds * double(l);
        if (std::abs(s) < S) t.ra[l] = radon(*a, s, theta, cfg.h_att);
      }
    }
  });
  for (std::size_t j = 0; j < K; ++j)
    tables[j].hra = classical_hilbert(tables[j].ra, tables[j].s_left, tables[j].ds,
                                      cfg.hilbert_corrections);

  // ---- evaluation point list: interior grid, boundary nodes, rings
  struct Slot {
    Vec2 p;
    std::vector<Complex>* dst;
    std::size_t at;
  };
  const std::size_t m = dom.nodes();
  pack.h_interior.assign(grid->size() * K, Complex{0.0, 0.0});
  pack.h_boundary.assign(m * K, Complex{0.0, 0.0});
  pack.h_rings.assign(pack.rings.radii.size() * m * K, Complex{0.0, 0.0});
  std::vector<Slot> slots;
  for (int iy = 0; iy < grid->n(); ++iy)
    for (int ix = 0; ix < grid->n(); ++ix)
      if (grid->inside(ix, iy))
        slots.push_back({grid->point(ix, iy), &pack.h_interior, grid->index(ix, iy)});
  for (std::size_t i = 0; i < m; ++i)
    slots.push_back({dom.boundary_point(i), &pack.h_boundary, i});
  for (std::size_t r = 0; r < pack.rings.radii.size(); ++r)
    for (std::size_t i = 0; i < m; ++i)
      slots.push_back({pack.rings.radii[r] * unit_vec(dom.node_angle(i)), &pack.h_rings,
                       r * m + i});

  parallel_for(slots.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t si = b; si < e; ++si) {
      const Slot& sl = slots[si];
      for (std::size_t j = 0; j < K; ++j) {
        Vec2 theta = unit_vec(kTwoPi * double(j) / double(K));
        double s = dot(sl.p, perp(theta));
        double da = beam_transform(*a, sl.p, theta, cfg.h_att);
        double ra = cubic_interp(tables[j].ra, tables[j].s_left, tables[j].ds, s);
        double hra = cubic_interp(tables[j].hra, tables[j].s_left, tables[j].ds, s);
        (*sl.dst)[sl.at * K + j] = Complex{da - 0.5 * ra, 0.5 * hra};
      }
    }
  });

  pack.boundary_eh.resize(m * K);
  for (std::size_t i = 0; i < m * K; ++i) pack.boundary_eh[i] = std::exp(-pack.h_boundary[i]);

  // ---- angular modes of e^{-h} and e^{+h} per evaluation point
  pack.alpha.assign(N + 1, Field(grid));
  pack.beta.assign(N + 1, Field(grid));
  pack.alpha_rings.rg = pack.rings;
  pack.alpha_rings.len = N + 1;
  pack.alpha_rings.v.assign(pack.rings.radii.size() * m * (N + 1), Complex{0.0, 0.0});
  pack.beta_rings = pack.alpha_rings;

  const int pad = 16;
  // phase table e^{-ik phi_j} for k = -pad .. N+pad
  const int nk = N + 2 * pad + 1;
  std::vector<Complex> phase(std::size_t(nk) * K);
  for (int k = -pad; k <= N + pad; ++k)
    for (std::size_t j = 0; j < K; ++j) {
      double ang = -double(k) * kTwoPi * double(j) / double(K);
      phase[std::size_t(k + pad) * K + j] = Complex{std::cos(ang), std::sin(ang)};
    }
  std::vector<double> worst_neg(slots.size(), 0.0), worst_mass(slots.size(), 0.0);
  parallel_for(slots.size(), [&](std::size_t b, std::size_t e) {
    std::vector<Complex> eh(K), ehp(K);
    for (std::size_t si = b; si < e; ++si) {
      const Slot& sl = slots[si];
      const Complex* hrow = &(*sl.dst)[sl.at * K];
      double p2 = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        eh[j] = std::exp(-hrow[j]);
        ehp[j] = std::exp(hrow[j]);
        p2 += std::norm(eh[j]);
      }
      p2 /= double(K);
      auto mode = [&](const std::vector<Complex>& f, int k) {
        const Complex* ph = &phase[std::size_t(k + pad) * K];
        Complex acc = 0.0;
        for (std::size_t j = 0; j < K; ++j) acc += f[j] * ph[j];
        return acc / double(K);
      };
      double neg = 0.0, kept2 = 0.0, extra_mass = 0.0;
      for (int k = -pad; k <= N + pad; ++k) {
        Complex ak = mode(eh, k);
        kept2 += std::norm(ak);
        if (k < 0) {
          neg = std::max(neg, std::abs(ak));
          extra_mass += std::abs(ak);
        } else if (k > N) {
          extra_mass += std::abs(ak);
        } else {
          if (sl.dst == &pack.h_interior) {
            pack.alpha[k].v[sl.at] = ak;
          } else if (sl.dst == &pack.h_rings) {
            pack.alpha_rings.v[sl.at * (N + 1) + k] = ak;
          }
        }
        if (k >= 0 && k <= N) {
          Complex bk = mode(ehp, k);
          if (sl.dst == &pack.h_interior) {
            pack.beta[k].v[sl.at] = bk;
          } else if (sl.dst == &pack.h_rings) {
            pack.beta_rings.v[sl.at * (N + 1) + k] = bk;
          }
        }
      }
      double rem2 = std::max(0.0, p2 - kept2);
      double rest = std::sqrt(rem2 * double(K));  // Cauchy-Schwarz bound on the l1 tail
      worst_neg[si] = neg;
      worst_mass[si] = extra_mass + rest;
    }
  });
  for (std::size_t si = 0; si < slots.size(); ++si) {
    pack.max_neg_mode = std::max(pack.max_neg_mode, worst_neg[si]);
    pack.discarded_mass = std::max(pack.discarded_mass, worst_mass[si]);
  }

  // alpha * beta = delta residual on the interior grid
  for (int k = 0; k <= N; ++k) {
    double worst = 0.0;
    for (std::size_t idx = 0; idx < grid->size(); ++idx) {
      if (!grid->inside_mask()[idx]) continue;
      Complex acc = 0.0;
      for (int mth = 0; mth <= k; ++mth) acc += pack.alpha[mth].v[idx] * pack.beta[k - mth].v[idx];
      if (k == 0) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
    pack.conv_residual = std::max(pack.conv_residual, worst);
  }

  if (pack.discarded_mass > cfg.mass_tol)
    throw ConfigError("build_pack: discarded angular mode mass exceeds tolerance; "
                      "attenuation under-resolved (raise N or K)");
  return pack;
}

SequenceField u_from_v(const SequenceField& v, const AttenuationPack& pack) {
  SequenceField out;
  out.tag = "u_modes";
  out.tail = v.tail;
  const std::size_t len = v.len();
  out.comp.assign(len, Field(pack.grid));
  const std::size_t nmodes = pack.beta.size();
  for (std::size_t k = 0; k < len; ++k) {
    Field& dst = out.comp[k];
    dst.mask = v.comp[k].mask;
    for (std::size_t j = 0; j < nmodes && k + j < len; ++j) {
      const Field& bj = pack.beta[j];
      const Field& vc = v.comp[k + j];
      for (std::size_t idx = 0; idx < dst.v.size(); ++idx) {
        if (!dst.mask[idx] || !vc.mask[idx]) continue;
        dst.v[idx] += bj.v[idx] * vc.v[idx];
      }
    }
  }
  return out;
}

PackIdentityReport verify_pack(const AttenuationPack& pack, int recursion_depth) {
  PackIdentityReport rep;
  rep.neg_modes = pack.max_neg_mode;
  rep.conv = pack.conv_residual;

  const DiskGrid& g = *pack.grid;
  const std::size_t K = pack.K;

  // attenuation sampled on the grid
  std::vector<double> av(g.size(), 0.0);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      if (g.inside(ix, iy)) av[g.index(ix, iy)] = pack.a->value(g.point(ix, iy));

  // theta . grad h + a per direction, via the Cauchy-Riemann split
  std::vector<double> worst(K, 0.0);
  parallel_for(K, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      Field hj(pack.grid);
      for (std::size_t idx = 0; idx < g.size(); ++idx) hj.v[idx] = pack.h_interior[idx * K + j];
      Field db = cr_dbar(hj), d = cr_d(hj);
      double phi = kTwoPi * double(j) / double(K);
      Complex em = std::polar(1.0, -phi), ep = std::polar(1.0, phi);
      double w = 0.0;
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (!(db.mask[idx] && d.mask[idx])) continue;
        w = std::max(w, std::abs(em * db.v[idx] + ep * d.v[idx] + av[idx]));
      }
      worst[j] = w;
    }
  });
  for (double w : worst) rep.transport = std::max(rep.transport, w);

  // e^{-h} e^{+h} = 1 pointwise
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.inside_mask()[idx]) continue;
    for (std::size_t j = 0; j < K; ++j) {
      Complex h = pack.h_interior[idx * K + j];
      rep.eh_product = std::max(rep.eh_product, std::abs(std::exp(-h) * std::exp(h) - 1.0));
    }
  }

  // Mode recursions, from theta.grad e^{-/+h} = +/- a e^{-/+h}:
  //   dbar a_{k+2} + d a_k - a a_{k+1} = 0,  dbar a_1 = +a a_0
  //   dbar b_{k+2} + d b_k + a b_{k+1} = 0,  dbar b_1 = -a b_0
  auto recursions = [&](const std::vector<Field>& f, double sign) {
    double sup = 0.0;
    Field d0 = cr_dbar(f[0]);
    sup = std::max(sup, sup_abs(d0));
    if (f.size() > 1) {
      Field d1 = cr_dbar(f[1]);
      for (std::size_t idx = 0; idx < d1.v.size(); ++idx)
        if (d1.mask[idx])
          sup = std::max(sup, std::abs(d1.v[idx] + sign * av[idx] * f[0].v[idx]));
    }
    int kmax = std::min<int>(recursion_depth, int(f.size()) - 3);
    for (int k = 0; k <= kmax; ++k) {
      Field a2 = cr_dbar(f[k + 2]), a0 = cr_d(f[k]);
      for (std::size_t idx = 0; idx < a2.v.size(); ++idx) {
        if (!(a2.mask[idx] && a0.mask[idx])) continue;
        sup = std::max(sup,
                       std::abs(a2.v[idx] + a0.v[idx] + sign * av[idx] * f[k + 1].v[idx]));
      }
    }
    return sup;
  };
  rep.alpha_recursion = recursions(pack.alpha, -1.0);
  rep.beta_recursion = recursions(pack.beta, +1.0);
  return rep;
}

SequenceField v_from_u(const SequenceField& u, const AttenuationPack& pack) {
  SequenceField out;
  out.tag = "v_modes";
  out.tail = u.tail;
  const std::size_t len = u.len();
  out.comp.assign(len, Field(pack.grid));
  const std::size_t nmodes = pack.alpha.size();
  for (std::size_t k = 0; k < len; ++k) {
    Field& dst = out.comp[k];
    dst.mask = u.comp[k].mask;
    for (std::size_t j = 0; j < nmodes && k + j < len; ++j) {
      const Field& aj = pack.alpha[j];
      const Field& uc = u.comp[k + j];
      for (std::size_t idx = 0; idx < dst.v.size(); ++idx) {
        if (!dst.mask[idx] || !uc.mask[idx]) continue;
        dst.v[idx] += aj.v[idx] * uc.v[idx];
      }
    }
  }
  return out;
}

}  // namespace tensoray
