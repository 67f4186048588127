#pragma once

// Cartesian evaluation grid on the disk and complex scalar fields living on
// it, with the central-difference Cauchy-Riemann operators and bilinear
// sampling used throughout the reconstruction pipelines.

#include <memory>
#include <vector>

#include "tensoray/geometry.hpp"

namespace tensoray {

// Uniform Cartesian grid centered at the origin; nodes (i - c, j - c)*step,
// kept where |z| <= r_max. The node count per axis is odd so the origin is
// a grid point.
class DiskGrid {
 public:
  DiskGrid(double step, double r_max);

  double step() const { return step_; }
  double r_max() const { return r_max_; }
  int n() const { return n_; }
  std::size_t size() const { return std::size_t(n_) * std::size_t(n_); }

  std::size_t index(int ix, int iy) const { return std::size_t(iy) * n_ + ix; }
  Vec2 point(int ix, int iy) const {
    return {(ix - c_) * step_, (iy - c_) * step_};
  }
  bool inside(int ix, int iy) const { return inside_[index(ix, iy)] != 0; }
  const std::vector<std::uint8_t>& inside_mask() const { return inside_; }

  // Index of the cell lower-left corner containing p, or -1 if p is not
  // representable (outside the node bounding box).
  bool locate(Vec2 p, int& ix, int& iy, double& fx, double& fy) const;

 private:
  double step_;
  double r_max_;
  int n_;
  int c_;
  std::vector<std::uint8_t> inside_;
};

// Complex scalar field on a DiskGrid. The mask tracks where values are
// defined; undefined slots hold zero.
struct Field {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<std::uint8_t> mask;
  std::vector<Complex> v;

  Field() = default;
  explicit Field(std::shared_ptr<const DiskGrid> g);

  Complex at(int ix, int iy) const { return v[grid->index(ix, iy)]; }
  bool defined(int ix, int iy) const { return mask[grid->index(ix, iy)] != 0; }
};

// dbar = (d/dx + i d/dy)/2 and d = (d/dx - i d/dy)/2 by second-order central
// differences. The result is defined where all four neighbors are.
Field cr_dbar(const Field& f);
Field cr_d(const Field& f);

// Bilinear sample; `outside` is returned where the stencil touches
// undefined nodes.
Complex bilinear(const Field& f, Vec2 p, Complex outside = Complex{0.0, 0.0});

// max |f| over defined nodes
double sup_abs(const Field& f);

}  // namespace tensoray
