#include "tensoray/fields.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tensoray {

F0F2 decompose_f0_f2(const TensorField& F, Vec2 x) {
  double a = F.f11(x), b = F.f12(x), c = F.f22(x);
  return {(a + c) / 2.0, Complex{(a - c) / 4.0, b / 2.0}};
}

double source_term(const TensorField& F, Vec2 x, double phi) {
  double ct = std::cos(phi), st = std::sin(phi);
  return F.f11(x) * ct * ct + 2.0 * F.f12(x) * ct * st + F.f22(x) * st * st;
}

double source_term_modes(const TensorField& F, Vec2 x, double phi) {
  F0F2 m = decompose_f0_f2(F, x);
  Complex e2 = std::polar(1.0, 2.0 * phi);
  Complex val = m.f0 + std::conj(m.f2) * e2 + m.f2 * std::conj(e2);
  return val.real();
}

IsotropicGaussian::IsotropicGaussian(double sigma, Vec2 center, double amplitude)
    : sigma_(sigma), amplitude_(amplitude), center_(center) {
  if (sigma <= 0.0) throw std::invalid_argument("IsotropicGaussian: sigma must be positive");
}

double IsotropicGaussian::value(Vec2 x) const {
  return amplitude_ * std::exp(-norm2(x - center_) / (sigma_ * sigma_));
}

double BumpComponent::eval(Vec2 x) const {
  double u = norm2(x - center) / (rho * rho);
  if (u >= 1.0) return 0.0;
  double w = 1.0 - u;
  return amplitude * w * w * w;
}

BumpTensor::BumpTensor(BumpComponent c11, BumpComponent c12, BumpComponent c22,
                       double domain_radius)
    : c11_(c11), c12_(c12), c22_(c22) {
  double reach = 0.0;
  for (const BumpComponent* c : {&c11_, &c12_, &c22_})
    if (c->amplitude != 0.0) reach = std::max(reach, norm(c->center) + c->rho);
  margin_ = domain_radius - reach;
  if (margin_ <= 0.0)
    throw std::invalid_argument("BumpTensor: bump support must stay inside the disk");
}

PotentialTensor::PotentialTensor(VectorFieldDesc v, double domain_radius) : v_(std::move(v)) {
  if (!v_.value) throw std::invalid_argument("PotentialTensor: missing value function");
  for (int i = 0; i < 64; ++i) {
    double s = 2.0 * std::numbers::pi * i / 64.0;
    Vec2 b{domain_radius * std::cos(s), domain_radius * std::sin(s)};
    if (norm(v_.value(b)) > 1e-10)
      throw std::invalid_argument("PotentialTensor: v must vanish on the boundary");
  }
}

std::array<double, 4> PotentialTensor::jac(Vec2 x) const {
  if (v_.jacobian) return v_.jacobian(x);
  double h = v_.fd_step;
  Vec2 vxp = v_.value({x.x + h, x.y}), vxm = v_.value({x.x - h, x.y});
  Vec2 vyp = v_.value({x.x, x.y + h}), vym = v_.value({x.x, x.y - h});
  return {(vxp.x - vxm.x) / (2 * h), (vyp.x - vym.x) / (2 * h),
          (vxp.y - vxm.y) / (2 * h), (vyp.y - vym.y) / (2 * h)};
}

double PotentialTensor::f11(Vec2 x) const { return jac(x)[0]; }
double PotentialTensor::f12(Vec2 x) const {
  auto j = jac(x);
  return 0.5 * (j[1] + j[2]);
}
double PotentialTensor::f22(Vec2 x) const { return jac(x)[3]; }

ScaledSum::ScaledSum(std::shared_ptr<const TensorField> a, std::shared_ptr<const TensorField> b,
                     double ca, double cb)
    : a_(std::move(a)), b_(std::move(b)), ca_(ca), cb_(cb) {}

double ScaledSum::support_margin() const {
  double ma = a_->support_margin(), mb = b_->support_margin();
  return (ma > 0.0 && mb > 0.0) ? std::min(ma, mb) : 0.0;
}

GriddedTensor::GriddedTensor(std::shared_ptr<const DiskGrid> grid, std::vector<double> t11,
                             std::vector<double> t12, std::vector<double> t22,
                             std::vector<std::uint8_t> mask, bool radial_extension)
    : grid_(std::move(grid)),
      t11_(std::move(t11)),
      t12_(std::move(t12)),
      t22_(std::move(t22)),
      mask_(std::move(mask)),
      extend_(radial_extension) {
  if (t11_.size() != grid_->size() || t12_.size() != grid_->size() ||
      t22_.size() != grid_->size() || mask_.size() != grid_->size())
    throw std::invalid_argument("GriddedTensor: component size != grid size");
  // Largest radius whose bilinear stencils stay on defined nodes. The mask
  // is a (subset of a) disk, so a 2-step inset is enough.
  r_in_ = grid_->r_max() - 2.0 * grid_->step();
  // zero out slots not covered by the mask so bilinear can read raw values
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (!mask_[i]) t11_[i] = t12_[i] = t22_[i] = 0.0;
}

double GriddedTensor::bilin(const std::vector<double>& c, Vec2 x) const {
  int ix, iy;
  double fx, fy;
  if (!grid_->locate(x, ix, iy, fx, fy)) return 0.0;
  const DiskGrid& g = *grid_;
  double v00 = c[g.index(ix, iy)], v10 = c[g.index(ix + 1, iy)];
  double v01 = c[g.index(ix, iy + 1)], v11 = c[g.index(ix + 1, iy + 1)];
  return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy + v11 * fx * fy;
}

double GriddedTensor::sample(const std::vector<double>& c, Vec2 x) const {
  double r = norm(x);
  if (r <= r_in_) return bilin(c, x);
  if (!extend_) return 0.0;
  // linear radial extrapolation from two interior rings along the ray
  double h = 2.0 * grid_->step();
  double r2 = r_in_, r1 = r_in_ - h;
  Vec2 w = (r > 0) ? x * (1.0 / r) : Vec2{1.0, 0.0};
  double v1 = bilin(c, w * r1), v2 = bilin(c, w * r2);
  return v2 + (v2 - v1) * (r - r2) / (r2 - r1);
}

GriddedTensor assemble_tensor(const Field& f0, const Field& f2, bool radial_extension) {
  if (f0.grid != f2.grid && (f0.grid->n() != f2.grid->n() || f0.grid->step() != f2.grid->step()))
    throw std::invalid_argument("assemble_tensor: mode fields on different grids");
  std::size_t n = f0.grid->size();
  std::vector<double> t11(n, 0.0), t12(n, 0.0), t22(n, 0.0);
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f0.mask[i] && f2.mask[i])) continue;
    double a = f0.v[i].real();
    double re2 = f2.v[i].real(), im2 = f2.v[i].imag();
    t11[i] = a + 2.0 * re2;
    t12[i] = 2.0 * im2;
    t22[i] = a - 2.0 * re2;
    mask[i] = 1;
  }
  return GriddedTensor(f0.grid, std::move(t11), std::move(t12), std::move(t22), std::move(mask),
                       radial_extension);
}

AnnularTensor::AnnularTensor(std::shared_ptr<const GriddedTensor> interior, PolarAnnulus annulus)
    : interior_(std::move(interior)), annulus_(std::move(annulus)) {
  // rings must be uniformly spaced in radius (cubic stencils index directly)
  if (annulus_.radii.size() < 4 || annulus_.M < 8)
    throw std::invalid_argument("AnnularTensor: need at least four rings");
  if (annulus_.c11.size() != annulus_.radii.size() * annulus_.M)
    throw std::invalid_argument("AnnularTensor: component size mismatch");
  r_switch_ = annulus_.radii[1];
}

namespace {

// 4-point Lagrange weights on a uniform grid, local coordinate t in [0, 1]
// between the two middle nodes
inline void cubic4(double t, double w[4]) {
  w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
  w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

}  // namespace

double AnnularTensor::sample(int comp, Vec2 x) const {
  double r = norm(x);
  if (r <= r_switch_) {
    switch (comp) {
      case 0: return interior_->f11(x);
      case 1: return interior_->f12(x);
      default: return interior_->f22(x);
    }
  }
  const std::vector<double>* pol = &annulus_.c11;
  if (comp == 1) pol = &annulus_.c12;
  if (comp == 2) pol = &annulus_.c22;

  const std::size_t m = annulus_.M;
  const long nr = long(annulus_.radii.size());
  double s = std::atan2(x.y, x.x);
  if (s < 0.0) s += 2.0 * std::numbers::pi;
  double gs = s * double(m) / (2.0 * std::numbers::pi);
  long i0 = long(std::floor(gs));
  double fs = gs - double(i0);
  double ws[4];
  cubic4(fs, ws);
  auto ring_val = [&](long k) {
    double acc = 0.0;
    for (long d = -1; d <= 2; ++d) {
      std::size_t i = std::size_t(((i0 + d) % long(m) + long(m)) % long(m));
      acc += ws[d + 1] * (*pol)[std::size_t(k) * m + i];
    }
    return acc;
  };

  const double dr = annulus_.radii[1] - annulus_.radii[0];
  if (r >= annulus_.radii[nr - 1]) {
    // linear radial extrapolation from the outer two rings
    double v1 = ring_val(nr - 2), v2 = ring_val(nr - 1);
    return v2 + (v2 - v1) * (r - annulus_.radii[nr - 1]) / dr;
  }
  double gr = (r - annulus_.radii[0]) / dr;
  long k0 = long(std::floor(gr));
  if (k0 < 1) k0 = 1;
  if (k0 > nr - 3) k0 = nr - 3;
  double tr = gr - double(k0);
  double wr[4];
  cubic4(tr, wr);
  double acc = 0.0;
  for (long d = -1; d <= 2; ++d) acc += wr[d + 1] * ring_val(k0 + d);
  return acc;
}

Attenuation::Attenuation(double domain_radius, double cutoff_width)
    : radius_(domain_radius), width_(cutoff_width) {
  if (domain_radius <= 0.0 || cutoff_width <= 0.0)
    throw std::invalid_argument("Attenuation: radius and cutoff width must be positive");
}

namespace {
// quintic smoothstep, C^2 with flat ends
double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
}  // namespace

double Attenuation::extended(Vec2 x) const {
  double r = norm(x);
  if (r <= radius_) return value(x);
  if (r >= radius_ + width_) return 0.0;
  return value(x) * (1.0 - smoothstep5((r - radius_) / width_));
}

void Attenuation::compute_min() {
  // sampled on a fixed 201x201 lattice over the disk
  const int n = 201;
  double m = std::numeric_limits<double>::max();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      Vec2 p{radius_ * (2.0 * ix / (n - 1) - 1.0), radius_ * (2.0 * iy / (n - 1) - 1.0)};
      if (norm2(p) > radius_ * radius_) continue;
      m = std::min(m, value(p));
    }
  min_a_ = m;
  if (min_a_ <= 0.0)
    throw std::invalid_argument("Attenuation: coefficient must be positive on the disk");
}

ConstantAttenuation::ConstantAttenuation(double a0, double domain_radius,
                                         double cutoff_width_factor)
    : Attenuation(domain_radius, cutoff_width_factor * domain_radius), a0_(a0) {
  compute_min();
}

GaussianAttenuation::GaussianAttenuation(double amplitude, double sigma, Vec2 center,
                                         double domain_radius, double cutoff_width_factor)
    : Attenuation(domain_radius, cutoff_width_factor * domain_radius),
      amplitude_(amplitude),
      sigma_(sigma),
      center_(center) {
  if (sigma <= 0.0) throw std::invalid_argument("GaussianAttenuation: sigma must be positive");
  compute_min();
}

double GaussianAttenuation::value(Vec2 x) const {
  return amplitude_ * std::exp(-norm2(x - center_) / (sigma_ * sigma_));
}

}  // namespace tensoray
