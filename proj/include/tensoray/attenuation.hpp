#pragma once

// Integrating-factor machinery for the attenuated transform: divergence
// beam transform, Radon transform, classical Hilbert transform on the line,
// the complex factor h(z, theta) with e^{-h} free of negative angular
// modes, the angular mode fields alpha_k / beta_k of e^{-/+h}, and the
// convolution maps between the u- and v-mode systems.

#include <memory>
#include <vector>

#include "tensoray/aanalytic.hpp"
#include "tensoray/fields.hpp"

namespace tensoray {

// Divergence beam transform int_0^inf a_tilde(z + t*theta) dt, Simpson rule
// up to the extension's support edge.
double beam_transform(const Attenuation& a, Vec2 z, Vec2 theta, double step);

// Radon transform int a_tilde(s*perp(theta) + t*theta) dt, Simpson rule.
double radon(const Attenuation& a, double s, Vec2 theta, double step);

// Hilbert transform of compactly supported samples on the uniform grid
// s_l = s_left + l*ds: Fourier multiplier -i*sgn(frequency) on the padded
// grid, plus analytic corrections for the periodization of the kernel
// (cotangent expansion through `corrections` orders). The grid must be
// zero-padded to at least 4x the sample support (ConfigError otherwise).
std::vector<double> classical_hilbert(const std::vector<double>& samples, double s_left,
                                      double ds, int corrections = 3);

struct PackConfig {
  double h_att = 2e-3;        // quadrature step for attenuation integrals
  double radon_step = 1.0 / 256.0;
  double padding = 8.0;       // padded half-length / extension support radius
  int hilbert_corrections = 3;
  double ring_offset = 0.01;  // ring ladder spacing, as a fraction of the radius
  double mass_tol = 1e-4;     // discarded angular mass that fails the build
};

// The integrating factor and its angular mode fields, tabulated on the
// interior grid, the boundary nodes, and the near-boundary rings.
struct AttenuationPack {
  std::shared_ptr<const Attenuation> a;
  Domain dom{1.0, 8};
  std::shared_ptr<const DiskGrid> grid;
  std::size_t K = 0;
  int N = 0;
  PackConfig cfg;
  RingGrid rings;

  std::vector<Complex> h_interior;   // [grid_index*K + j]
  std::vector<Complex> h_boundary;   // [i*K + j]
  std::vector<Complex> h_rings;      // [(ring*M + i)*K + j]
  std::vector<Complex> boundary_eh;  // e^{-h} on the boundary grid [i*K + j]

  std::vector<Field> alpha;  // modes 0..N of e^{-h} on the interior grid
  std::vector<Field> beta;   // modes 0..N of e^{+h}
  RingSeq alpha_rings;       // same modes on the rings (len = N+1)
  RingSeq beta_rings;

  double max_neg_mode = 0.0;    // sup |mode_{-k}(e^{-h})|, k = 1..16
  double discarded_mass = 0.0;  // sup l1 mass outside modes 0..N
  double conv_residual = 0.0;   // sup |sum alpha_m beta_{k-m} - [k=0]|

  Complex h_at_boundary(std::size_t i, std::size_t j) const { return h_boundary[i * K + j]; }
};

// Tabulates h over (grid + boundary + rings) x angles and extracts the mode
// fields. Throws ConfigError when the discarded angular mass exceeds
// cfg.mass_tol (under-resolved attenuation).
AttenuationPack build_pack(std::shared_ptr<const Attenuation> a, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid, std::size_t K, int N,
                           const PackConfig& cfg = {});

// Slow reference evaluation of h at one (z, theta): direct quadratures and
// a regularized principal-value integral instead of the tabulated path.
Complex integrating_factor_direct(const Attenuation& a, Vec2 z, double phi,
                                  const PackConfig& cfg = {});

// u_n = sum_j beta_j v_{n-j} (n <= -2) and the alpha-convolution inverse.
// comp[k] of the argument holds physical mode -(k+2); truncated where
// indices run out.
SequenceField u_from_v(const SequenceField& v, const AttenuationPack& pack);
SequenceField v_from_u(const SequenceField& u, const AttenuationPack& pack);

// Discrete residuals of the integrating-factor identities, all sup norms.
struct PackIdentityReport {
  double transport = 0.0;        // theta . grad h + a  (central differences)
  double neg_modes = 0.0;        // negative angular modes of e^{-h}
  double conv = 0.0;             // alpha * beta - delta
  double alpha_recursion = 0.0;  // dbar a_0; dbar a_1 - a a_0; dbar a_{k+2} + d a_k + a a_{k+1}
  double beta_recursion = 0.0;   // dbar b_0; dbar b_1 + a b_0; dbar b_{k+2} + d b_k + a b_{k+1}
  double eh_product = 0.0;       // e^{-h} e^{+h} - 1
};

PackIdentityReport verify_pack(const AttenuationPack& pack, int recursion_depth = 6);

}  // namespace tensoray
