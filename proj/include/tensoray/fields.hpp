#pragma once

// Symmetric 2-tensor fields on the disk, their f0/f2 complex decomposition,
// analytic phantom generators, gridded tensors with bilinear sampling, and
// positive attenuation coefficients with a compactly supported extension.

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "tensoray/grid.hpp"

namespace tensoray {

// Symmetric 2-tensor field: only f11, f12, f22 are stored/evaluated.
class TensorField {
 public:
  virtual ~TensorField() = default;
  virtual double f11(Vec2 x) const = 0;
  virtual double f12(Vec2 x) const = 0;
  virtual double f22(Vec2 x) const = 0;
  // Distance from the boundary within which the field vanishes;
  // 0 means not compactly supported away from the boundary.
  virtual double support_margin() const { return 0.0; }
  virtual std::string tag() const { return "tensor"; }
};

struct F0F2 {
  double f0;
  Complex f2;
};

// f0 = (f11+f22)/2, f2 = (f11-f22)/4 + i f12/2
F0F2 decompose_f0_f2(const TensorField& F, Vec2 x);

// <F(x) theta, theta> for theta = (cos phi, sin phi), evaluated as the
// quadratic form.
double source_term(const TensorField& F, Vec2 x, double phi);
// same quantity via f0 + conj(f2) e^{2i phi} + f2 e^{-2i phi}; the two
// routes agree and the second is used as a cross-check in tests.
double source_term_modes(const TensorField& F, Vec2 x, double phi);

// ---- phantoms ----------------------------------------------------------

// s(x) * I with s a Gaussian: amplitude * exp(-|x-center|^2 / sigma^2).
class IsotropicGaussian : public TensorField {
 public:
  IsotropicGaussian(double sigma, Vec2 center, double amplitude);
  double f11(Vec2 x) const override { return value(x); }
  double f12(Vec2) const override { return 0.0; }
  double f22(Vec2 x) const override { return value(x); }
  std::string tag() const override { return "gaussian_isotropic"; }
  double value(Vec2 x) const;

 private:
  double sigma_, amplitude_;
  Vec2 center_;
};

// One C^2 bump (1 - |x-c|^2/rho^2)^3 on |x-c| < rho per component.
struct BumpComponent {
  double amplitude = 0.0;
  Vec2 center{0.0, 0.0};
  double rho = 0.5;
  double eval(Vec2 x) const;
};

class BumpTensor : public TensorField {
 public:
  BumpTensor(BumpComponent c11, BumpComponent c12, BumpComponent c22, double domain_radius);
  double f11(Vec2 x) const override { return c11_.eval(x); }
  double f12(Vec2 x) const override { return c12_.eval(x); }
  double f22(Vec2 x) const override { return c22_.eval(x); }
  double support_margin() const override { return margin_; }
  std::string tag() const override { return "bump_tensor"; }

 private:
  BumpComponent c11_, c12_, c22_;
  double margin_;
};

// Smooth vector field descriptor. jacobian (row-major d v_j / d x_k, i.e.
// {dv1/dx1, dv1/dx2, dv2/dx1, dv2/dx2}) may be empty; central differences
// with step fd_step are used then.
struct VectorFieldDesc {
  std::function<Vec2(Vec2)> value;
  std::function<std::array<double, 4>(Vec2)> jacobian;
  double fd_step = 1e-5;
};

// Symmetrized gradient F_jk = (d_j v_k + d_k v_j)/2 of a vector field
// vanishing on the boundary; such tensors are in the null space of the ray
// transform. Throws std::invalid_argument when v does not vanish on the
// boundary (checked on boundary samples, tolerance 1e-10).
class PotentialTensor : public TensorField {
 public:
  PotentialTensor(VectorFieldDesc v, double domain_radius);
  double f11(Vec2 x) const override;
  double f12(Vec2 x) const override;
  double f22(Vec2 x) const override;
  std::string tag() const override { return "potential_tensor"; }

 private:
  std::array<double, 4> jac(Vec2 x) const;
  VectorFieldDesc v_;
};

// alpha*A + beta*B, for linearity tests and perturbation studies.
class ScaledSum : public TensorField {
 public:
  ScaledSum(std::shared_ptr<const TensorField> a, std::shared_ptr<const TensorField> b,
            double ca, double cb);
  double f11(Vec2 x) const override { return ca_ * a_->f11(x) + cb_ * b_->f11(x); }
  double f12(Vec2 x) const override { return ca_ * a_->f12(x) + cb_ * b_->f12(x); }
  double f22(Vec2 x) const override { return ca_ * a_->f22(x) + cb_ * b_->f22(x); }
  double support_margin() const override;

 private:
  std::shared_ptr<const TensorField> a_, b_;
  double ca_, cb_;
};

// Tensor sampled on a DiskGrid, bilinear interpolation inside; outside the
// safe interpolation radius the components are continued by per-ray linear
// radial extrapolation (reconstructed tensors generally do not vanish near
// the boundary; data stored only up to the evaluation margin).
class GriddedTensor : public TensorField {
 public:
  GriddedTensor(std::shared_ptr<const DiskGrid> grid, std::vector<double> t11,
                std::vector<double> t12, std::vector<double> t22,
                std::vector<std::uint8_t> mask, bool radial_extension = true);
  double f11(Vec2 x) const override { return sample(t11_, x); }
  double f12(Vec2 x) const override { return sample(t12_, x); }
  double f22(Vec2 x) const override { return sample(t22_, x); }
  std::string tag() const override { return "gridded_tensor"; }

  const DiskGrid& grid() const { return *grid_; }
  const std::vector<double>& comp11() const { return t11_; }
  const std::vector<double>& comp12() const { return t12_; }
  const std::vector<double>& comp22() const { return t22_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

 private:
  double sample(const std::vector<double>& c, Vec2 x) const;
  double bilin(const std::vector<double>& c, Vec2 x) const;
  std::shared_ptr<const DiskGrid> grid_;
  std::vector<double> t11_, t12_, t22_;
  std::vector<std::uint8_t> mask_;
  bool extend_;
  double r_in_;  // bilinear used for |x| <= r_in, extrapolation beyond
};

// f11 = f0 + 2 Re f2, f12 = 2 Im f2, f22 = f0 - 2 Re f2 from gridded mode
// fields; exact inverse of decompose_f0_f2. Throws on grid mismatch.
GriddedTensor assemble_tensor(const Field& f0, const Field& f2, bool radial_extension = true);

// Components on concentric polar rings (radii ascending, M angular nodes
// per ring); covers the near-boundary annulus a Cartesian grid of
// derivative stencils cannot reach.
struct PolarAnnulus {
  std::vector<double> radii;
  std::size_t M = 0;
  std::vector<double> c11, c12, c22;  // [ring*M + i]
};

// Cartesian interior plus polar annulus: bilinear on the grid below the
// switch radius, bilinear in (r, angle) on the rings above it, linear
// radial extrapolation beyond the outermost ring.
class AnnularTensor : public TensorField {
 public:
  AnnularTensor(std::shared_ptr<const GriddedTensor> interior, PolarAnnulus annulus);
  double f11(Vec2 x) const override { return sample(0, x); }
  double f12(Vec2 x) const override { return sample(1, x); }
  double f22(Vec2 x) const override { return sample(2, x); }
  std::string tag() const override { return "annular_tensor"; }

 private:
  double sample(int comp, Vec2 x) const;
  std::shared_ptr<const GriddedTensor> interior_;
  PolarAnnulus annulus_;
  double r_switch_;
};

// ---- attenuation --------------------------------------------------------

// Positive attenuation a on the closed disk together with its compactly
// supported extension: a_tilde = a * chi(|x|) where chi is a C^2 radial
// cutoff, 1 on the disk and 0 beyond radius + cutoff_width.
class Attenuation {
 public:
  Attenuation(double domain_radius, double cutoff_width);
  virtual ~Attenuation() = default;

  // the coefficient formula, evaluable in a neighborhood of the disk
  virtual double value(Vec2 x) const = 0;
  virtual std::string tag() const { return "attenuation"; }

  double extended(Vec2 x) const;  // a_tilde
  double domain_radius() const { return radius_; }
  double cutoff_width() const { return width_; }
  double support_radius() const { return radius_ + width_; }
  double min_on_disk() const { return min_a_; }

 protected:
  void compute_min();  // samples the disk; call at end of derived ctor

 private:
  double radius_, width_;
  double min_a_ = 0.0;
};

class ConstantAttenuation : public Attenuation {
 public:
  ConstantAttenuation(double a0, double domain_radius, double cutoff_width_factor = 0.2);
  double value(Vec2) const override { return a0_; }
  std::string tag() const override { return "constant"; }

 private:
  double a0_;
};

class GaussianAttenuation : public Attenuation {
 public:
  GaussianAttenuation(double amplitude, double sigma, Vec2 center, double domain_radius,
                      double cutoff_width_factor = 0.2);
  double value(Vec2 x) const override;
  std::string tag() const override { return "gaussian"; }

 private:
  double amplitude_, sigma_;
  Vec2 center_;
};

}  // namespace tensoray
