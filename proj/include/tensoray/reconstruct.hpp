#pragma once

// Sufficiency-direction constructions: gauge function (psi) generators, the
// non-attenuated and attenuated reconstruction pipelines producing a tensor
// with the prescribed data, the attenuated boundary compatibility check,
// and synthesis of the verifying transport solution from its modes.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tensoray/aanalytic.hpp"
#include "tensoray/attenuation.hpp"
#include "tensoray/fields.hpp"
#include "tensoray/modes.hpp"

namespace tensoray {

struct PsiChoice {
  std::string kind;                      // "poisson", "radial_blend", "hermite_att", ...
  Field values;                          // psi on the interior grid
  std::vector<Complex> boundary_trace;   // prescribed trace per boundary node
  std::vector<double> normal_trace;      // attenuated case: prescribed d_n psi per node
  std::function<Complex(Vec2)> eval;     // closed-form evaluation, valid on the closed disk
};

// Harmonic (Poisson) extension of the mode g_{-1}; the default gauge choice
// in the non-attenuated pipeline.
PsiChoice psi_default_free(const ModeSequences& ms, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid);

// Same trace, different interior behavior: g_{-1}(omega) * r^2 (2 - r^2).
// Used to exhibit the gauge non-uniqueness.
PsiChoice psi_radial_blend(const ModeSequences& ms, const Domain& dom,
                           std::shared_ptr<const DiskGrid> grid);

// Real gauge for the attenuated pipeline: psi = g_0(omega) P(r) + radius *
// rho(omega) Q(r) with Hermite radial profiles (P(1)=1, P'(1)=0, Q(1)=0,
// Q'(1)=1, third-order vanishing at r=0) and rho the prescribed normal
// derivative.
PsiChoice psi_default_att(const FanData& fan, const AttenuationPack& pack,
                          std::shared_ptr<const DiskGrid> grid);

// Modes u_{-m} of the transport solution; neg[m] holds u_{-m}.
struct ModeStack {
  std::vector<Field> neg;
};

struct AssembledU {
  double value = 0.0;
  double imag_residual = 0.0;  // |Im| of the synthesized value (should vanish)
};

// u = u_0 + sum_{m>=1} (u_{-m} e^{-im phi} + conj(u_{-m}) e^{im phi}),
// modes sampled bilinearly at x.
AssembledU assemble_u(const ModeStack& modes, Vec2 x, double phi);

// Node-wise synthesis of u(., phi) on the grid (for residual diagnostics).
Field synthesize_u_field(const ModeStack& modes, double phi);

struct ReconstructOptions {
  double margin = 0.1;       // evaluation margin for the Cauchy operator (absolute)
  double tol_range = 5e-3;   // warn threshold for the range residuals
  double min_a_guard = 1e-6;
};

struct ReconstructionResult {
  std::shared_ptr<const TensorField> tensor;        // F_psi (interior + annulus)
  std::shared_ptr<const GriddedTensor> tensor_grid; // Cartesian part, for file output
  ModeStack modes;
  PsiChoice psi;

  double range_even = 0.0;   // sup (I+iH) residuals of the sequences used
  double range_odd = 0.0;
  double compat = 0.0;       // attenuated case only
  double l_analytic = 0.0;   // discrete L-analyticity of the B output
  double tail = 0.0;         // truncation report
  bool in_range = true;      // residuals below tol_range (warn flag, never aborts)
};

// Non-attenuated pipeline. psi may be empty (Poisson default).
ReconstructionResult reconstruct_free(const FanData& fan, const std::optional<PsiChoice>& psi,
                                      int N, const Domain& dom,
                                      std::shared_ptr<const DiskGrid> grid,
                                      const ReconstructOptions& opt = {});

// e^{-i eta}( d(sum_j beta_j (B g_h)_{-2-j})|_Gamma + a|_Gamma g_{-1} ) per
// boundary node, the operator appearing in the attenuated compatibility
// condition and in the gauge class normal derivative. Evaluated by spectral
// angular derivatives on near-boundary rings, radial central differences,
// and linear extrapolation from the two outermost rings.
std::vector<Complex> attenuated_boundary_term(const AttenuatedModes& am,
                                              const AttenuationPack& pack);

// sup_i | d_tau g_0 + 2 Im(boundary term) |
double compat_check(const FanData& fan, const AttenuationPack& pack);

// Attenuated pipeline. psi may be empty (Hermite radial default).
ReconstructionResult reconstruct_att(const FanData& fan, const AttenuationPack& pack,
                                     const std::optional<PsiChoice>& psi,
                                     const ReconstructOptions& opt = {});

}  // namespace tensoray
