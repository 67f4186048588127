#include "tensoray/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tensoray/errors.hpp"
#include "tensoray/parallel.hpp"

namespace tensoray {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// trigonometric synthesis of boundary node values at an arbitrary angle
class BoundaryInterp {
 public:
  explicit BoundaryInterp(const std::vector<Complex>& nodes) : m_(nodes.size()), coef_(m_) {
    for (std::size_t f = 0; f < m_; ++f) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double ang = -kTwoPi * double(f) * double(i) / double(m_);
        acc += nodes[i] * Complex{std::cos(ang), std::sin(ang)};
      }
      coef_[f] = acc / double(m_);
    }
  }

  Complex at(double s) const {
    Complex acc = 0.0;
    for (std::size_t f = 0; f < m_; ++f) {
      if (f == m_ / 2) {
        acc += coef_[f] * std::cos(double(m_ / 2) * s);
        continue;
      }
      long freq = (f < m_ / 2) ? long(f) : long(f) - long(m_);
      acc += coef_[f] * std::polar(1.0, double(freq) * s);
    }
    return acc;
  }

 private:
  std::size_t m_;
  std::vector<Complex> coef_;
};

std::vector<Complex> mode_row(const ModeSequences& ms, int n) {
  std::vector<Complex> out(ms.M);
  for (std::size_t i = 0; i < ms.M; ++i) out[i] = ms.g(i, n);
  return out;
}

// ---- polar ring calculus --------------------------------------------------
// Scalar stacks on concentric rings; the Cauchy-Riemann operators combine a
// spectral angular derivative with radial central differences, trimming one
// ring from each side per layer.

struct RingStack {
  std::vector<double> radii;  // ascending
  std::size_t M = 0;
  std::vector<Complex> v;  // [ring*M + i]

  Complex at(std::size_t k, std::size_t i) const { return v[k * M + i]; }
  Complex& at(std::size_t k, std::size_t i) { return v[k * M + i]; }
  std::size_t rings() const { return radii.size(); }
};

RingStack ring_stack_from_seq(const RingSeq& rs, std::size_t comp) {
  RingStack out;
  out.radii = rs.rg.radii;
  out.M = rs.rg.M;
  out.v.resize(out.radii.size() * out.M);
  for (std::size_t k = 0; k < out.radii.size(); ++k)
    for (std::size_t i = 0; i < out.M; ++i) out.at(k, i) = rs.at(k, i, comp);
  return out;
}

RingStack ring_stack_sample(const RingGrid& rg, const std::function<Complex(Vec2)>& f) {
  RingStack out;
  out.radii = rg.radii;
  out.M = rg.M;
  out.v.resize(out.radii.size() * out.M);
  for (std::size_t k = 0; k < out.radii.size(); ++k)
    for (std::size_t i = 0; i < out.M; ++i) {
      double s = kTwoPi * double(i) / double(out.M);
      out.at(k, i) = f(out.radii[k] * unit_vec(s));
    }
  return out;
}

// bar = true: dbar = e^{+is}/2 (d_r + i/r d_s); bar = false: d = e^{-is}/2 (d_r - i/r d_s)
RingStack ring_cr_derivative(const RingStack& w, bool bar) {
  if (w.rings() < 3) throw ConfigError("ring derivative: need at least three rings");
  RingStack out;
  out.radii.assign(w.radii.begin() + 1, w.radii.end() - 1);
  out.M = w.M;
  out.v.resize(out.radii.size() * out.M);
  for (std::size_t k = 1; k + 1 < w.rings(); ++k) {
    std::vector<Complex> row(w.v.begin() + k * w.M, w.v.begin() + (k + 1) * w.M);
    std::vector<Complex> ds = spectral_dds(row);
    double rho = w.radii[k];
    double drad = w.radii[k + 1] - w.radii[k - 1];
    for (std::size_t i = 0; i < w.M; ++i) {
      double s = kTwoPi * double(i) / double(w.M);
      Complex dr = (w.at(k + 1, i) - w.at(k - 1, i)) / drad;
      Complex ang = Complex{0.0, 1.0} / rho * ds[i];
      out.at(k - 1, i) =
          0.5 * std::polar(1.0, bar ? s : -s) * (bar ? (dr + ang) : (dr - ang));
    }
  }
  return out;
}

}  // namespace

PsiChoice psi_default_free(const ModeSequences& ms, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid) {
  PsiChoice psi;
  psi.kind = "poisson";
  psi.boundary_trace = mode_row(ms, -1);
  psi.values = Field(grid);
  const double R = dom.radius();
  const std::size_t m = dom.nodes();

  // Harmonic extension of the band-limited trace: Poisson integral in its
  // spectral form sum_k c_k (|z|/R)^{|k|} e^{ik arg z}, valid on the whole
  // closed disk.
  std::vector<Complex> coef(m);
  for (std::size_t f = 0; f < m; ++f) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double ang = -kTwoPi * double(f) * double(i) / double(m);
      acc += psi.boundary_trace[i] * Complex{std::cos(ang), std::sin(ang)};
    }
    coef[f] = acc / double(m);
  }
  psi.eval = [coef, m, R](Vec2 p) -> Complex {
    double r = norm(p) / R;
    double t = (r > 1e-300) ? std::atan2(p.y, p.x) : 0.0;
    Complex acc = 0.0;
    for (std::size_t f = 0; f < m; ++f) {
      long freq = (f < m / 2) ? long(f) : long(f) - long(m);
      if (f == m / 2) {
        acc += coef[f] * std::pow(r, double(m / 2)) * std::cos(double(m / 2) * t);
        continue;
      }
      acc += coef[f] * std::pow(r, double(std::abs(freq))) * std::polar(1.0, double(freq) * t);
    }
    return acc;
  };

  const int n = grid->n();
  parallel_for(std::size_t(n), [&](std::size_t b, std::size_t e) {
    for (std::size_t iy = b; iy < e; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        if (!grid->inside(ix, int(iy))) continue;
        psi.values.v[grid->index(ix, int(iy))] = psi.eval(grid->point(ix, int(iy)));
      }
  });
  return psi;
}

PsiChoice psi_radial_blend(const ModeSequences& ms, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid) {
  PsiChoice psi;
  psi.kind = "radial_blend";
  psi.boundary_trace = mode_row(ms, -1);
  psi.values = Field(grid);
  auto trace = std::make_shared<BoundaryInterp>(psi.boundary_trace);
  const double R = dom.radius();
  psi.eval = [trace, R](Vec2 p) -> Complex {
    double r = norm(p) / R;
    if (r < 1e-14) return {0.0, 0.0};
    return trace->at(std::atan2(p.y, p.x)) * (r * r * (2.0 - r * r));
  };
  const int n = grid->n();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      if (!grid->inside(ix, iy)) continue;
      psi.values.v[grid->index(ix, iy)] = psi.eval(grid->point(ix, iy));
    }
  return psi;
}

AssembledU assemble_u(const ModeStack& modes, Vec2 x, double phi) {
  AssembledU out;
  if (modes.neg.empty()) return out;
  Complex u0 = bilinear(modes.neg[0], x);
  Complex acc = u0;
  for (std::size_t m = 1; m < modes.neg.size(); ++m) {
    if (modes.neg[m].v.empty()) continue;
    Complex um = bilinear(modes.neg[m], x);
    acc += um * std::polar(1.0, -double(m) * phi) +
           std::conj(um) * std::polar(1.0, double(m) * phi);
  }
  out.value = acc.real();
  out.imag_residual = std::abs(acc.imag());
  return out;
}

Field synthesize_u_field(const ModeStack& modes, double phi) {
  if (modes.neg.empty() || modes.neg[0].v.empty())
    throw std::invalid_argument("synthesize_u_field: empty mode stack");
  Field out = modes.neg[0];
  for (std::size_t m = 1; m < modes.neg.size(); ++m) {
    if (modes.neg[m].v.empty()) continue;
    Complex em = std::polar(1.0, -double(m) * phi);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
      if (!out.mask[i] || !modes.neg[m].mask[i]) continue;
      Complex um = modes.neg[m].v[i];
      out.v[i] += um * em + std::conj(um * em);
    }
  }
  return out;
}

ReconstructionResult reconstruct_free(const FanData& fan, const std::optional<PsiChoice>& psi_in,
                                      int N, const Domain& dom,
                                      std::shared_ptr<const DiskGrid> grid,
                                      const ReconstructOptions& opt) {
  ModeSequences ms = angular_modes(fan, N);
  BoundarySeq geven = build_even(ms);
  BoundarySeq godd = build_odd(ms);

  ReconstructionResult res;
  res.range_even = range_residual(geven, dom).sup;
  res.range_odd = range_residual(godd, dom).sup;
  res.in_range = res.range_even < opt.tol_range && res.range_odd < opt.tol_range;

  BukhgeimCauchy beven(geven, dom, opt.margin);
  BukhgeimCauchy bodd(godd, dom, opt.margin);
  SequenceField even_f = beven.on_grid(grid);  // u_0, u_{-2}, ...
  SequenceField odd_f = bodd.on_grid(grid);    // u_{-3}, u_{-5}, ...
  res.tail = std::max(beven.tail_magnitude(), bodd.tail_magnitude());
  res.l_analytic = std::max(l_analytic_residual(even_f), l_analytic_residual(odd_f));

  PsiChoice psi = psi_in ? *psi_in : psi_default_free(ms, dom, grid);
  if (psi.values.grid != grid)
    throw std::invalid_argument("reconstruct_free: psi lives on a different grid");
  if (!psi.eval) throw std::invalid_argument("reconstruct_free: psi must carry an evaluator");
  res.psi = psi;

  // f0 = 2 Re d(psi), f2 = dbar(psi) + d(u_{-3})
  Field dpsi = cr_d(psi.values);
  Field f0 = dpsi;
  for (std::size_t i = 0; i < f0.v.size(); ++i)
    f0.v[i] = Complex{2.0 * dpsi.v[i].real(), 0.0};
  Field f2 = cr_dbar(psi.values);
  Field du3 = cr_d(odd_f.comp[0]);
  for (std::size_t i = 0; i < f2.v.size(); ++i) {
    f2.mask[i] = f2.mask[i] && du3.mask[i];
    f2.v[i] = f2.mask[i] ? f2.v[i] + du3.v[i] : Complex{0.0, 0.0};
  }
  res.tensor_grid = std::make_shared<GriddedTensor>(assemble_tensor(f0, f2, false));

  // Near-boundary annulus from the ring ladder, one derivative layer. The
  // angular grid is doubled so the cubic interpolation of the annulus
  // resolves the full mode content of the data.
  RingGrid rings = reconstruction_rings(dom, *grid, 0.01);
  rings.M = 2 * dom.nodes();
  BukhgeimCauchy bodd_ring(godd, dom, 0.5 * (dom.radius() - rings.radii.back()));
  RingStack psi_r = ring_stack_sample(rings, psi.eval);
  RingStack u3_r = ring_stack_from_seq(bodd_ring.on_rings(rings), 0);
  RingStack dpsi_r = ring_cr_derivative(psi_r, false);
  RingStack dbpsi_r = ring_cr_derivative(psi_r, true);
  RingStack du3_r = ring_cr_derivative(u3_r, false);
  PolarAnnulus ann;
  ann.radii = dpsi_r.radii;
  ann.M = rings.M;
  ann.c11.resize(ann.radii.size() * ann.M);
  ann.c12.resize(ann.radii.size() * ann.M);
  ann.c22.resize(ann.radii.size() * ann.M);
  for (std::size_t k = 0; k < ann.radii.size(); ++k)
    for (std::size_t i = 0; i < ann.M; ++i) {
      double rf0 = 2.0 * dpsi_r.at(k, i).real();
      Complex rf2 = dbpsi_r.at(k, i) + du3_r.at(k, i);
      ann.c11[k * ann.M + i] = rf0 + 2.0 * rf2.real();
      ann.c12[k * ann.M + i] = 2.0 * rf2.imag();
      ann.c22[k * ann.M + i] = rf0 - 2.0 * rf2.real();
    }
  res.tensor = std::make_shared<AnnularTensor>(res.tensor_grid, std::move(ann));

  // mode stack: evens from B g^even, u_{-1} = psi, odds from B g^odd
  std::size_t top = std::max<std::size_t>(2 * (even_f.len() - 1), 3 + 2 * (odd_f.len() - 1));
  res.modes.neg.resize(top + 1);
  for (std::size_t k = 0; k < even_f.len(); ++k) res.modes.neg[2 * k] = even_f.comp[k];
  res.modes.neg[1] = psi.values;
  for (std::size_t k = 0; k < odd_f.len(); ++k) res.modes.neg[3 + 2 * k] = odd_f.comp[k];
  return res;
}

// ---- attenuated case -----------------------------------------------------

namespace {

// W = sum_j beta_j v_{-2-j} on the rings, dW extrapolated to the boundary;
// returns dW|_Gamma per node.
std::vector<Complex> ring_boundary_derivative(const AttenuatedModes& am,
                                              const AttenuationPack& pack) {
  const Domain& dom = pack.dom;
  const std::size_t m = dom.nodes();
  const RingGrid& rg = pack.rings;
  const std::size_t nr = rg.radii.size();
  if (nr < 4) throw ConfigError("attenuated boundary term: need at least 4 rings");

  double margin = dom.radius() - rg.radii.back();
  BukhgeimCauchy beven(am.g_h_even, dom, 0.5 * margin);
  BukhgeimCauchy bodd(am.g_h_odd, dom, 0.5 * margin);
  RingSeq veven = beven.on_rings(rg);  // v_{-2}, v_{-4}, ...
  RingSeq vodd = bodd.on_rings(rg);    // v_{-3}, v_{-5}, ...

  // W per ring node
  std::vector<Complex> w(nr * m, Complex{0.0, 0.0});
  const std::size_t nb = pack.beta_rings.len;
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t i = 0; i < m; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        // v_{-2-j}: even j from the even stack, odd j from the odd stack
        Complex vj;
        if (j % 2 == 0) {
          std::size_t k = j / 2;
          if (k >= veven.len) break;
          vj = veven.at(r, i, k);
        } else {
          std::size_t k = (j - 1) / 2;
          if (k >= vodd.len) break;
          vj = vodd.at(r, i, k);
        }
        acc += pack.beta_rings.at(r, i, j) * vj;
      }
      w[r * m + i] = acc;
    }

  // d = e^{-i s}/2 (d_rho - i/rho d_s) on the two interior rings, then
  // linear extrapolation from those rings to the boundary.
  auto dw_on_ring = [&](std::size_t r) {
    std::vector<Complex> row(w.begin() + r * m, w.begin() + (r + 1) * m);
    std::vector<Complex> ds = spectral_dds(row);
    std::vector<Complex> out(m);
    double rho = rg.radii[r];
    double drho = rg.radii[r + 1] - rg.radii[r - 1];
    for (std::size_t i = 0; i < m; ++i) {
      Complex drad = (w[(r + 1) * m + i] - w[(r - 1) * m + i]) / drho;
      Complex val = 0.5 * std::polar(1.0, -dom.node_angle(i)) *
                    (drad - Complex{0.0, 1.0} / rho * ds[i]);
      out[i] = val;
    }
    return out;
  };
  std::vector<Complex> da = dw_on_ring(nr - 3);  // inner of the two usable rings
  std::vector<Complex> db = dw_on_ring(nr - 2);  // outer
  double ra = rg.radii[nr - 3], rb = rg.radii[nr - 2], R = dom.radius();
  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = db[i] + (db[i] - da[i]) * ((R - rb) / (rb - ra));
  return out;
}

}  // namespace

std::vector<Complex> attenuated_boundary_term(const AttenuatedModes& am,
                                              const AttenuationPack& pack) {
  const Domain& dom = pack.dom;
  const std::size_t m = dom.nodes();
  std::vector<Complex> dw = ring_boundary_derivative(am, pack);
  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex g1 = am.plain.g(i, -1);
    double ab = pack.a->value(dom.boundary_point(i));
    out[i] = std::polar(1.0, -dom.node_angle(i)) * (dw[i] + ab * g1);
  }
  return out;
}

double compat_check(const FanData& fan, const AttenuationPack& pack) {
  AttenuatedModes am = attenuated_data_modes(fan, pack);
  std::vector<Complex> term = attenuated_boundary_term(am, pack);
  std::vector<Complex> g0 = mode_row(am.plain, 0);
  std::vector<Complex> dtau = boundary_derivative(pack.dom, g0);
  double sup = 0.0;
  for (std::size_t i = 0; i < term.size(); ++i)
    sup = std::max(sup, std::abs(dtau[i].real() + 2.0 * term[i].imag()));
  return sup;
}

PsiChoice psi_default_att(const FanData& fan, const AttenuationPack& pack,
                          std::shared_ptr<const DiskGrid> grid) {
  AttenuatedModes am = attenuated_data_modes(fan, pack);
  std::vector<Complex> term = attenuated_boundary_term(am, pack);
  const Domain& dom = pack.dom;
  const std::size_t m = dom.nodes();

  PsiChoice psi;
  psi.kind = "hermite_att";
  psi.boundary_trace.resize(m);
  psi.normal_trace.resize(m);
  std::vector<Complex> g0(m), rho(m);
  for (std::size_t i = 0; i < m; ++i) {
    g0[i] = Complex{am.plain.g(i, 0).real(), 0.0};  // g real, so g_0 is real
    rho[i] = Complex{-2.0 * term[i].real(), 0.0};
    psi.boundary_trace[i] = g0[i];
    psi.normal_trace[i] = rho[i].real();
  }

  auto tr = std::make_shared<BoundaryInterp>(g0);
  auto nr = std::make_shared<BoundaryInterp>(rho);
  psi.values = Field(grid);
  const double R = dom.radius();
  psi.eval = [tr, nr, R](Vec2 p) -> Complex {
    double r = norm(p) / R;
    if (r < 1e-14) return {0.0, 0.0};
    double s = std::atan2(p.y, p.x);
    // P(1)=1, P'(1)=0, Q(1)=0, Q'(1)=1, both ~ r^3 near the origin
    double P = r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
    double Q = r * r * r * (-4.0 + r * (7.0 - 3.0 * r));
    return Complex{tr->at(s).real() * P + R * nr->at(s).real() * Q, 0.0};
  };
  const int n = grid->n();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      if (!grid->inside(ix, iy)) continue;
      psi.values.v[grid->index(ix, iy)] = psi.eval(grid->point(ix, iy));
    }
  return psi;
}

ReconstructionResult reconstruct_att(const FanData& fan, const AttenuationPack& pack,
                                     const std::optional<PsiChoice>& psi_in,
                                     const ReconstructOptions& opt) {
  if (pack.a->min_on_disk() < opt.min_a_guard)
    throw ConfigError("reconstruct_att: attenuation minimum below the guard");
  const Domain& dom = pack.dom;
  AttenuatedModes am = attenuated_data_modes(fan, pack);

  ReconstructionResult res;
  res.range_even = range_residual(am.g_h_even, dom).sup;
  res.range_odd = range_residual(am.g_h_odd, dom).sup;
  res.compat = compat_check(fan, pack);
  res.in_range = res.range_even < opt.tol_range && res.range_odd < opt.tol_range &&
                 res.compat < opt.tol_range;

  std::shared_ptr<const DiskGrid> grid = pack.grid;
  BukhgeimCauchy beven(am.g_h_even, dom, opt.margin);
  BukhgeimCauchy bodd(am.g_h_odd, dom, opt.margin);
  SequenceField veven = beven.on_grid(grid);  // v_{-2}, v_{-4}, ...
  SequenceField vodd = bodd.on_grid(grid);    // v_{-3}, v_{-5}, ...
  res.tail = std::max(beven.tail_magnitude(), bodd.tail_magnitude());
  res.l_analytic = std::max(l_analytic_residual(veven), l_analytic_residual(vodd));

  // interleave to v_{-2}, v_{-3}, v_{-4}, ... then convolve with beta
  SequenceField v;
  v.tag = "v_modes";
  v.tail = res.tail;
  std::size_t vcount = veven.len() + vodd.len();
  v.comp.reserve(vcount);
  for (std::size_t k = 0; k < vcount; ++k)
    v.comp.push_back((k % 2 == 0) ? veven.comp[k / 2] : vodd.comp[k / 2]);
  SequenceField u = u_from_v(v, pack);  // u_{-2}, u_{-3}, ...

  PsiChoice psi = psi_in ? *psi_in : psi_default_att(fan, pack, grid);
  if (psi.values.grid != grid)
    throw std::invalid_argument("reconstruct_att: psi lives on a different grid");
  res.psi = psi;

  // attenuation values on the grid
  Field afield(grid);
  const int n = grid->n();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      if (grid->inside(ix, iy))
        afield.v[grid->index(ix, iy)] = pack.a->value(grid->point(ix, iy));

  // w = (dbar psi + d u_{-2}) / a;  u_{-1} = -w
  Field dbpsi = cr_dbar(psi.values);
  Field du2 = cr_d(u.comp[0]);
  Field w(grid);
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    bool ok = dbpsi.mask[i] && du2.mask[i];
    w.mask[i] = ok;
    w.v[i] = ok ? (dbpsi.v[i] + du2.v[i]) / afield.v[i] : Complex{0.0, 0.0};
  }

  // f0 = -2 Re d(w) + a psi  (the zeroth transport mode with u_{-1} = -w)
  Field dw = cr_d(w);
  Field f0 = dw;
  for (std::size_t i = 0; i < f0.v.size(); ++i) {
    bool ok = dw.mask[i] && psi.values.mask[i];
    f0.mask[i] = ok;
    f0.v[i] = ok ? Complex{-2.0 * dw.v[i].real() +
                               (afield.v[i] * psi.values.v[i]).real(),
                           0.0}
                 : Complex{0.0, 0.0};
  }
  // f2 = -dbar(w) + d u_{-3} + a u_{-2}
  Field dbw = cr_dbar(w);
  Field du3 = cr_d(u.comp[1]);
  Field f2 = dbw;
  for (std::size_t i = 0; i < f2.v.size(); ++i) {
    bool ok = dbw.mask[i] && du3.mask[i] && u.comp[0].mask[i];
    f2.mask[i] = ok;
    f2.v[i] = ok ? -dbw.v[i] + du3.v[i] + afield.v[i] * u.comp[0].v[i] : Complex{0.0, 0.0};
  }
  res.tensor_grid = std::make_shared<GriddedTensor>(assemble_tensor(f0, f2, false));

  // Near-boundary annulus: the same fields on the pack's ring ladder with
  // two radial derivative layers; angular grid doubled for the cubic
  // annulus interpolation, beta rows upsampled by trigonometric
  // interpolation.
  {
    if (pack.rings.radii.size() < 8)
      throw ConfigError("reconstruct_att: pack built without a reconstruction ring ladder");
    RingGrid rings = pack.rings;
    rings.M = 2 * pack.rings.M;
    double ring_margin = 0.5 * (dom.radius() - rings.radii.back());
    BukhgeimCauchy bev_ring(am.g_h_even, dom, ring_margin);
    BukhgeimCauchy bod_ring(am.g_h_odd, dom, ring_margin);
    RingSeq vev = bev_ring.on_rings(rings);
    RingSeq vod = bod_ring.on_rings(rings);

    // beta mode rows, upsampled to the doubled angular grid
    const std::size_t nr = rings.radii.size(), m = rings.M, mb = pack.rings.M;
    const std::size_t nb = pack.beta_rings.len;
    std::vector<Complex> beta2((nr * m) * nb);
    {
      std::vector<Complex> row(mb);
      for (std::size_t k = 0; k < nr; ++k)
        for (std::size_t j = 0; j < nb; ++j) {
          for (std::size_t i = 0; i < mb; ++i) row[i] = pack.beta_rings.at(k, i, j);
          BoundaryInterp interp(row);
          for (std::size_t i = 0; i < m; ++i)
            beta2[(k * m + i) * nb + j] = interp.at(kTwoPi * double(i) / double(m));
        }
    }

    // u_{-2}, u_{-3} on the rings via the beta convolution
    RingStack u2r, u3r;
    u2r.radii = rings.radii;
    u2r.M = m;
    u2r.v.assign(nr * m, Complex{0.0, 0.0});
    u3r = u2r;
    for (std::size_t k = 0; k < nr; ++k)
      for (std::size_t i = 0; i < m; ++i) {
        Complex acc2 = 0.0, acc3 = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
          // v_{-2-j} and v_{-3-j} from the interleaved even/odd ring values
          std::size_t p2 = j;      // physical index -(2+j)
          std::size_t p3 = j + 1;  // physical index -(3+j)
          Complex bj = beta2[(k * m + i) * nb + j];
          if ((p2 % 2 == 0) ? (p2 / 2 < vev.len) : ((p2 - 1) / 2 < vod.len)) {
            Complex v2 = (p2 % 2 == 0) ? vev.at(k, i, p2 / 2) : vod.at(k, i, (p2 - 1) / 2);
            acc2 += bj * v2;
          }
          if ((p3 % 2 == 0) ? (p3 / 2 < vev.len) : ((p3 - 1) / 2 < vod.len)) {
            Complex v3 = (p3 % 2 == 0) ? vev.at(k, i, p3 / 2) : vod.at(k, i, (p3 - 1) / 2);
            acc3 += bj * v3;
          }
        }
        u2r.at(k, i) = acc2;
        u3r.at(k, i) = acc3;
      }

    RingStack psi_r = ring_stack_sample(rings, psi.eval);
    RingStack a_r = ring_stack_sample(
        rings, [&](Vec2 p) { return Complex{pack.a->value(p), 0.0}; });

    RingStack dbpsi = ring_cr_derivative(psi_r, true);
    RingStack du2 = ring_cr_derivative(u2r, false);
    RingStack wr = dbpsi;  // (dbar psi + d u_{-2}) / a, defined on level-1 rings
    for (std::size_t k = 0; k < wr.rings(); ++k)
      for (std::size_t i = 0; i < m; ++i)
        wr.at(k, i) = (dbpsi.at(k, i) + du2.at(k, i)) / a_r.at(k + 1, i);

    RingStack dwr = ring_cr_derivative(wr, false);    // level 2
    RingStack dbwr = ring_cr_derivative(wr, true);    // level 2
    RingStack du3r = ring_cr_derivative(u3r, false);  // level 1
    PolarAnnulus ann;
    ann.radii = dwr.radii;
    ann.M = m;
    ann.c11.resize(ann.radii.size() * m);
    ann.c12.resize(ann.radii.size() * m);
    ann.c22.resize(ann.radii.size() * m);
    for (std::size_t k = 0; k < ann.radii.size(); ++k)
      for (std::size_t i = 0; i < m; ++i) {
        double av = a_r.at(k + 2, i).real();
        double rf0 = -2.0 * dwr.at(k, i).real() + av * psi_r.at(k + 2, i).real();
        Complex rf2 = -dbwr.at(k, i) + du3r.at(k + 1, i) + av * u2r.at(k + 2, i);
        ann.c11[k * m + i] = rf0 + 2.0 * rf2.real();
        ann.c12[k * m + i] = 2.0 * rf2.imag();
        ann.c22[k * m + i] = rf0 - 2.0 * rf2.real();
      }
    res.tensor = std::make_shared<AnnularTensor>(res.tensor_grid, std::move(ann));
  }

  res.modes.neg.resize(u.len() + 2);
  res.modes.neg[0] = psi.values;
  Field u1 = w;
  for (std::size_t i = 0; i < u1.v.size(); ++i) u1.v[i] = -u1.v[i];
  res.modes.neg[1] = u1;
  for (std::size_t k = 0; k < u.len(); ++k) res.modes.neg[k + 2] = u.comp[k];
  return res;
}

}  // namespace tensoray
