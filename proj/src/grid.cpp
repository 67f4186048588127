#include "tensoray/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tensoray {

DiskGrid::DiskGrid(double step, double r_max) : step_(step), r_max_(r_max) {
  if (step <= 0.0 || r_max <= 0.0)
    throw std::invalid_argument("DiskGrid: step and r_max must be positive");
  int half = int(std::floor(r_max / step + 1e-12));
  n_ = 2 * half + 1;
  c_ = half;
  inside_.assign(size(), 0);
  for (int iy = 0; iy < n_; ++iy)
    for (int ix = 0; ix < n_; ++ix) {
      Vec2 p = point(ix, iy);
      inside_[index(ix, iy)] = (norm2(p) <= r_max_ * r_max_ + 1e-15) ? 1 : 0;
    }
}

bool DiskGrid::locate(Vec2 p, int& ix, int& iy, double& fx, double& fy) const {
  double gx = p.x / step_ + c_;
  double gy = p.y / step_ + c_;
  ix = int(std::floor(gx));
  iy = int(std::floor(gy));
  if (ix < 0 || iy < 0 || ix + 1 >= n_ || iy + 1 >= n_) return false;
  fx = gx - ix;
  fy = gy - iy;
  return true;
}

Field::Field(std::shared_ptr<const DiskGrid> g)
    : grid(std::move(g)), mask(grid->inside_mask()), v(grid->size(), Complex{0.0, 0.0}) {}

namespace {

// shared stencil walk for both Cauchy-Riemann operators
Field cr_derivative(const Field& f, bool bar) {
  Field out;
  out.grid = f.grid;
  out.mask.assign(f.grid->size(), 0);
  out.v.assign(f.grid->size(), Complex{0.0, 0.0});
  const DiskGrid& g = *f.grid;
  const double inv = 1.0 / (4.0 * g.step());  // central difference and the 1/2
  for (int iy = 1; iy + 1 < g.n(); ++iy)
    for (int ix = 1; ix + 1 < g.n(); ++ix) {
      if (!(f.defined(ix - 1, iy) && f.defined(ix + 1, iy) && f.defined(ix, iy - 1) &&
            f.defined(ix, iy + 1)))
        continue;
      Complex dx = f.at(ix + 1, iy) - f.at(ix - 1, iy);
      Complex dy = f.at(ix, iy + 1) - f.at(ix, iy - 1);
      Complex val = bar ? (dx + Complex{0.0, 1.0} * dy) : (dx - Complex{0.0, 1.0} * dy);
      std::size_t id = g.index(ix, iy);
      out.v[id] = val * inv;
      out.mask[id] = 1;
    }
  return out;
}

}  // namespace

Field cr_dbar(const Field& f) { return cr_derivative(f, true); }
Field cr_d(const Field& f) { return cr_derivative(f, false); }

Complex bilinear(const Field& f, Vec2 p, Complex outside) {
  int ix, iy;
  double fx, fy;
  if (!f.grid->locate(p, ix, iy, fx, fy)) return outside;
  if (!(f.defined(ix, iy) && f.defined(ix + 1, iy) && f.defined(ix, iy + 1) &&
        f.defined(ix + 1, iy + 1)))
    return outside;
  Complex v00 = f.at(ix, iy), v10 = f.at(ix + 1, iy);
  Complex v01 = f.at(ix, iy + 1), v11 = f.at(ix + 1, iy + 1);
  return v00 * ((1 - fx) * (1 - fy)) + v10 * (fx * (1 - fy)) + v01 * ((1 - fx) * fy) +
         v11 * (fx * fy);
}

double sup_abs(const Field& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    if (f.mask[i]) m = std::max(m, std::abs(f.v[i]));
  return m;
}

}  // namespace tensoray
