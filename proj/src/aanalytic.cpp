#include "tensoray/aanalytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tensoray/errors.hpp"
#include "tensoray/parallel.hpp"

namespace tensoray {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BoundarySeq shift_left(const BoundarySeq& s) {
  if (s.len < 2) throw std::invalid_argument("shift_left: sequence length must be >= 2");
  BoundarySeq out;
  out.M = s.M;
  out.len = s.len - 1;
  out.role = s.role + "_shifted";
  out.c.resize(out.M * out.len);
  for (std::size_t i = 0; i < s.M; ++i)
    for (std::size_t k = 0; k + 1 < s.len; ++k) out.at(i, k) = s.at(i, k + 1);
  return out;
}

SequenceField shift_left(const SequenceField& s) {
  if (s.len() < 2) throw std::invalid_argument("shift_left: sequence length must be >= 2");
  SequenceField out;
  out.comp.assign(s.comp.begin() + 1, s.comp.end());
  out.tag = s.tag + "_shifted";
  out.tail = s.tail;
  return out;
}

// ---- Bukhgeim-Cauchy -----------------------------------------------------

BukhgeimCauchy::BukhgeimCauchy(BoundarySeq seq, Domain dom, double margin)
    : seq_(std::move(seq)), dom_(std::move(dom)), margin_(margin) {
  if (seq_.M != dom_.nodes())
    throw std::invalid_argument("BukhgeimCauchy: sequence nodes != domain nodes");
  if (seq_.len == 0) throw std::invalid_argument("BukhgeimCauchy: empty sequence");
  if (margin_ <= 0.0 || margin_ >= dom_.radius())
    throw std::invalid_argument("BukhgeimCauchy: margin must be in (0, radius)");
  for (std::size_t i = 0; i < seq_.M; ++i)
    tail_ = std::max(tail_, std::abs(seq_.at(i, seq_.len - 1)));

  // base table, no upsampling
  Table base;
  base.factor = 1;
  base.zeta.resize(seq_.M);
  for (std::size_t i = 0; i < seq_.M; ++i) base.zeta[i] = to_complex(dom_.boundary_point(i));
  base.c = seq_.c;
  tables_.push_back(std::move(base));
}

std::size_t BukhgeimCauchy::factor_for(double r) const {
  // The trapezoid error of the Cauchy kernels decays like
  // exp(-M_eval * log(R/r)) with an algebraic amplification near the pole;
  // an exponent of 34 keeps evaluations at ~1e-12.
  const double gap = std::log(dom_.radius() / std::max(r, 0.05 * dom_.radius()));
  std::size_t f = 1;
  while (f < 64 && double(dom_.nodes() * f) * gap < 34.0) f *= 2;
  return f;
}

void BukhgeimCauchy::ensure_reach(double r) {
  std::size_t need = factor_for(r);
  std::size_t have = tables_.back().factor;
  while (have < need) {
    have *= 2;
    const std::size_t m = seq_.M, len = seq_.len, mu = m * have;
    Table t;
    t.factor = have;
    t.zeta.resize(mu);
    for (std::size_t i = 0; i < mu; ++i) {
      double s = kTwoPi * double(i) / double(mu);
      t.zeta[i] = std::polar(dom_.radius(), s);
    }
    // trigonometric interpolation of each component (Nyquist mode split)
    t.c.assign(mu * len, Complex{0.0, 0.0});
    std::vector<Complex> coef(m);
    for (std::size_t k = 0; k < len; ++k) {
      for (std::size_t f = 0; f < m; ++f) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          double ang = -kTwoPi * double(f) * double(i) / double(m);
          acc += seq_.at(i, k) * Complex{std::cos(ang), std::sin(ang)};
        }
        coef[f] = acc / double(m);
      }
      parallel_for(mu, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          double s = kTwoPi * double(i) / double(mu);
          Complex acc = 0.0;
          for (std::size_t f = 0; f < m; ++f) {
            long freq = (f <= m / 2) ? long(f) : long(f) - long(m);
            if (f == m / 2) {
              acc += coef[f] * std::cos(double(m / 2) * s);
            } else {
              acc += coef[f] * std::polar(1.0, double(freq) * s);
            }
          }
          t.c[i * len + k] = acc;
        }
      });
    }
    tables_.push_back(std::move(t));
  }
}

const BukhgeimCauchy::Table& BukhgeimCauchy::table_for(double r) const {
  std::size_t need = factor_for(r);
  for (const Table& t : tables_)
    if (t.factor >= need) return t;
  throw std::logic_error("BukhgeimCauchy: ensure_reach was not called for this radius");
}

std::vector<Complex> BukhgeimCauchy::eval(Vec2 z) const {
  const double r = norm(z);
  if (r > dom_.radius() - margin_ + 1e-15)
    throw std::domain_error("bukhgeim_cauchy: evaluation point too close to the boundary");
  const Table& tb = table_for(r);
  const std::size_t mu = tb.zeta.size(), len = seq_.len;
  const double ds = kTwoPi / double(mu);
  const Complex zc = to_complex(z);

  std::vector<Complex> acc(len + 1, Complex{0.0, 0.0});  // index n = 1..len
  for (std::size_t i = 0; i < mu; ++i) {
    const Complex zeta = tb.zeta[i];
    const Complex d = zeta - zc;
    const Complex q = std::conj(d) / d;  // unit modulus
    const Complex kern = 1.0 / d;
    const Complex* ci = &tb.c[i * len];
    Complex t_next = 0.0;  // T_{n+1}, zero beyond the truncation
    for (std::size_t n = len; n >= 1; --n) {
      Complex t_n = ci[n - 1] + q * t_next;
      acc[n] += (zeta * t_n + std::conj(zeta) * t_next) * kern;
      t_next = t_n;
    }
  }
  std::vector<Complex> out(len);
  for (std::size_t n = 1; n <= len; ++n) out[n - 1] = acc[n] * (ds / kTwoPi);
  return out;
}

SequenceField BukhgeimCauchy::on_grid(std::shared_ptr<const DiskGrid> grid) {
  if (grid->r_max() > dom_.radius() - margin_ + 1e-15)
    throw std::domain_error("bukhgeim_cauchy: grid reaches past the evaluation margin");
  ensure_reach(grid->r_max());
  SequenceField sf;
  sf.tag = seq_.role;
  sf.tail = tail_;
  sf.comp.assign(seq_.len, Field(grid));
  const int n = grid->n();
  parallel_for(std::size_t(n), [&](std::size_t b, std::size_t e) {
    for (std::size_t iy = b; iy < e; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        if (!grid->inside(ix, int(iy))) continue;
        std::vector<Complex> vals = eval(grid->point(ix, int(iy)));
        std::size_t id = grid->index(ix, int(iy));
        for (std::size_t k = 0; k < seq_.len; ++k) sf.comp[k].v[id] = vals[k];
      }
  });
  return sf;
}

RingSeq BukhgeimCauchy::on_rings(const RingGrid& rg) {
  double rmax = 0.0;
  for (double r : rg.radii) rmax = std::max(rmax, r);
  ensure_reach(rmax);
  RingSeq out;
  out.rg = rg;
  out.len = seq_.len;
  out.v.assign(rg.radii.size() * rg.M * seq_.len, Complex{0.0, 0.0});
  parallel_for(rg.radii.size() * rg.M, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      std::size_t ring = s / rg.M, i = s % rg.M;
      double ang = kTwoPi * double(i) / double(rg.M);
      Vec2 p = rg.radii[ring] * unit_vec(ang);
      std::vector<Complex> vals = eval(p);
      for (std::size_t k = 0; k < seq_.len; ++k) out.v[s * seq_.len + k] = vals[k];
    }
  });
  return out;
}

RingGrid reconstruction_rings(const Domain& dom, const DiskGrid& grid, double offset) {
  RingGrid rg;
  rg.M = dom.nodes();
  const double R = dom.radius();
  double r_min = grid.r_max() - 5.0 * grid.step();
  int count = int(std::ceil((R - r_min) / (offset * R))) - 1;
  count = std::max(6, std::min(40, count));
  for (int k = count; k >= 1; --k) rg.radii.push_back(R * (1.0 - double(k) * offset));
  return rg;
}

std::vector<Complex> bukhgeim_cauchy(const BoundarySeq& seq, const Domain& dom, Vec2 z,
                                     double margin) {
  BukhgeimCauchy op(seq, dom, margin);
  op.ensure_reach(norm(z));
  return op.eval(z);
}

SequenceField bukhgeim_cauchy_field(const BoundarySeq& seq, const Domain& dom,
                                    std::shared_ptr<const DiskGrid> grid, double margin) {
  BukhgeimCauchy op(seq, dom, margin);
  return op.on_grid(std::move(grid));
}

// ---- Hilbert transform ---------------------------------------------------

// On the circle the kernels reduce to
//   dzeta/(zeta-xi)                     = (cot((s-s0)/2) + i)/2 ds
//   dzeta/(zeta-xi) - dconj/(conj diff) = i ds
//   conj(zeta-xi)/(zeta-xi)             = -e^{-i(s+s0)},
// so only the leading term carries a principal value; it is integrated by
// the node-skipping trapezoid rule, exact for smooth data on even grids.
std::vector<Complex> hilbert(const BoundarySeq& seq, const Domain& dom, std::size_t xi_index) {
  const std::size_t m = seq.M;
  if (m != dom.nodes()) throw std::invalid_argument("hilbert: sequence nodes != domain nodes");
  if (m % 2 != 0) throw ConfigError("hilbert: boundary node count must be even");
  if (xi_index >= m) throw std::invalid_argument("hilbert: node index out of range");

  const std::size_t len = seq.len;
  const double ds = kTwoPi / double(m);
  const double s0 = dom.node_angle(xi_index);

  std::vector<Complex> pv(len, Complex{0.0, 0.0});
  std::vector<Complex> trap(len, Complex{0.0, 0.0});
  std::vector<Complex> qsum(len + 1, Complex{0.0, 0.0});  // index n: sum of q*T_{n+1}

  for (std::size_t i = 0; i < m; ++i) {
    const double si = dom.node_angle(i);
    const Complex q = -std::polar(1.0, -(si + s0));
    const Complex* ci = &seq.c[i * len];

    Complex t_next = 0.0;
    for (std::size_t n = len; n >= 1; --n) {
      Complex t_n = ci[n - 1] + q * t_next;
      qsum[n] += q * t_next;
      t_next = t_n;
    }
    for (std::size_t k = 0; k < len; ++k) trap[k] += ci[k];
    if (((i + m) - xi_index) % 2 == 1) {
      double w = 1.0 / std::tan(0.5 * (si - s0));
      for (std::size_t k = 0; k < len; ++k) pv[k] += ci[k] * w;
    }
  }

  std::vector<Complex> out(len);
  const Complex iunit{0.0, 1.0};
  for (std::size_t k = 0; k < len; ++k) {
    out[k] = pv[k] * (2.0 * ds / kTwoPi) + iunit * trap[k] * (ds / kTwoPi) +
             iunit * qsum[k + 1] * (2.0 * ds / kTwoPi);
  }
  return out;
}

RangeResidual range_residual(const BoundarySeq& seq, const Domain& dom) {
  RangeResidual rr;
  rr.M = seq.M;
  rr.len = seq.len;
  rr.res.assign(seq.M * seq.len, Complex{0.0, 0.0});
  rr.per_component.assign(seq.len, 0.0);
  parallel_for(seq.M, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      std::vector<Complex> h = hilbert(seq, dom, i);
      for (std::size_t k = 0; k < seq.len; ++k)
        rr.res[i * seq.len + k] = seq.at(i, k) + Complex{0.0, 1.0} * h[k];
    }
  });
  for (std::size_t i = 0; i < seq.M; ++i)
    for (std::size_t k = 0; k < seq.len; ++k) {
      double a = std::abs(rr.res[i * seq.len + k]);
      rr.per_component[k] = std::max(rr.per_component[k], a);
      rr.sup = std::max(rr.sup, a);
    }
  return rr;
}

double l_analytic_residual(const SequenceField& sf) {
  if (sf.len() < 2)
    throw ConfigError("l_analytic_residual: need at least two sequence components");
  double sup = 0.0;
  bool any = false;
  for (std::size_t k = 0; k + 1 < sf.len(); ++k) {
    Field a = cr_dbar(sf.comp[k]);
    Field b = cr_d(sf.comp[k + 1]);
    for (std::size_t i = 0; i < a.v.size(); ++i) {
      if (!(a.mask[i] && b.mask[i])) continue;
      any = true;
      sup = std::max(sup, std::abs(a.v[i] + b.v[i]));
    }
  }
  if (!any) throw ConfigError("l_analytic_residual: grid too coarse for the stencil");
  return sup;
}

}  // namespace tensoray
