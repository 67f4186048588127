#pragma once

// Sequence-space machinery on the disk: the left shift, the Bukhgeim-Cauchy
// integral operator producing L-analytic maps from boundary sequences, the
// boundary Hilbert transform with the (I + iH) range residual, and the
// discrete L-analyticity residual of interior sequence fields.

#include <memory>
#include <vector>

#include "tensoray/grid.hpp"
#include "tensoray/modes.hpp"

namespace tensoray {

// Truncated sequence <u_{-1}, u_{-2}, ...> sampled on an interior grid;
// comp[k] holds u_{-(k+1)}.
struct SequenceField {
  std::vector<Field> comp;
  std::string tag;
  double tail = 0.0;  // sup of the last kept boundary component (truncation report)

  std::size_t len() const { return comp.size(); }
};

BoundarySeq shift_left(const BoundarySeq& s);
SequenceField shift_left(const SequenceField& s);

// Concentric evaluation rings (radii ascending) with M angular nodes each;
// used for boundary-limit evaluation of interior quantities.
struct RingGrid {
  std::vector<double> radii;
  std::size_t M = 0;
};

struct RingSeq {
  RingGrid rg;
  std::size_t len = 0;
  std::vector<Complex> v;  // [(ring*M + i)*len + k]

  Complex at(std::size_t ring, std::size_t i, std::size_t k) const {
    return v[(ring * rg.M + i) * len + k];
  }
  Complex& at(std::size_t ring, std::size_t i, std::size_t k) {
    return v[(ring * rg.M + i) * len + k];
  }
};

// Bukhgeim-Cauchy operator acting on a boundary sequence. Boundary
// integrals use the M-node trapezoid rule with dzeta = i zeta(s) ds; the
// kernel ratio conj(zeta-z)/(zeta-z) is tracked as a unit-modulus phase and
// the j-sums truncate at the available sequence length. Near the boundary
// the data is upsampled by trigonometric interpolation to keep the
// trapezoid rule resolved.
class BukhgeimCauchy {
 public:
  BukhgeimCauchy(BoundarySeq seq, Domain dom, double margin);

  // <(Bg)_{-1}(z), ..., (Bg)_{-len}(z)>; throws std::domain_error when
  // |z| > radius - margin.
  std::vector<Complex> eval(Vec2 z) const;

  // grid sweep (parallel); grid.r_max must respect the margin
  SequenceField on_grid(std::shared_ptr<const DiskGrid> grid);

  // ring sweep for boundary-limit work
  RingSeq on_rings(const RingGrid& rg);

  // Build the upsampled tables needed up to radius r (serial; must be
  // called before parallel eval at such radii; on_grid/on_rings do it).
  void ensure_reach(double r);

  std::size_t len() const { return seq_.len; }
  double tail_magnitude() const { return tail_; }
  const Domain& domain() const { return dom_; }

 private:
  struct Table {
    std::size_t factor = 1;
    std::vector<Complex> zeta;  // boundary points, factor*M of them
    std::vector<Complex> c;     // upsampled sequence [i*len + k]
  };
  std::size_t factor_for(double r) const;
  const Table& table_for(double r) const;

  BoundarySeq seq_;
  Domain dom_;
  double margin_;
  double tail_ = 0.0;
  std::vector<Table> tables_;  // factors 1, 2, 4, ...
};

// Ring ladder used for boundary-limit evaluation: radii radius*(1 - k*offset)
// from just inside the boundary down to where the Cartesian derivative
// stencils are sound.
RingGrid reconstruction_rings(const Domain& dom, const DiskGrid& grid, double offset = 0.01);

// convenience wrappers
std::vector<Complex> bukhgeim_cauchy(const BoundarySeq& seq, const Domain& dom, Vec2 z,
                                     double margin);
SequenceField bukhgeim_cauchy_field(const BoundarySeq& seq, const Domain& dom,
                                    std::shared_ptr<const DiskGrid> grid, double margin);

// Hilbert transform of the boundary sequence at boundary node xi_index,
// componentwise <(Hg)_{-1}, ..., (Hg)_{-len}>. The principal-value
// cotangent kernel is handled by the node-skipping trapezoid rule (M even).
std::vector<Complex> hilbert(const BoundarySeq& seq, const Domain& dom, std::size_t xi_index);

// (I + iH) applied to the sequence: full residual field and sup norms.
struct RangeResidual {
  std::size_t M = 0;
  std::size_t len = 0;
  std::vector<Complex> res;              // [i*len + k]
  double sup = 0.0;
  std::vector<double> per_component;     // sup over nodes, per component
};

RangeResidual range_residual(const BoundarySeq& seq, const Domain& dom);

// sup over grid and components of |dbar u_{-n} + d u_{-n-1}| with central
// differences; the last component has no successor and is excluded.
double l_analytic_residual(const SequenceField& sf);

}  // namespace tensoray
