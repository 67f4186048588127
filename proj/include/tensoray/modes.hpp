#pragma once

// Angular Fourier analysis of fan data and the boundary mode sequences the
// range conditions and reconstructions consume.

#include <string>
#include <vector>

#include "tensoray/transport.hpp"

namespace tensoray {

struct AttenuationPack;  // attenuation.hpp

// Per-boundary-node angular Fourier coefficients g_n(zeta_i), |n| <= N,
// normalized so g(zeta, theta) = sum_n g_n(zeta) e^{i n phi}.
struct ModeSequences {
  std::size_t M = 0;
  int N = 0;
  std::string provenance = "g";  // "g", "gtilde", "gamma"
  std::vector<Complex> coef;     // [i*(2N+1) + (n+N)]

  Complex g(std::size_t i, int n) const { return coef[i * (2 * N + 1) + (n + N)]; }
  Complex& g(std::size_t i, int n) { return coef[i * (2 * N + 1) + (n + N)]; }
};

// Truncated boundary sequence <c_{-1}, c_{-2}, ...> per node; component k
// (0-based) is the abstract index -(k+1).
struct BoundarySeq {
  std::size_t M = 0;
  std::size_t len = 0;
  std::string role;          // "g_even", "g_odd", "gtilde", "g_h", "g_h_even", "g_h_odd", ...
  std::vector<Complex> c;    // [i*len + k]

  Complex at(std::size_t i, std::size_t k) const { return c[i * len + k]; }
  Complex& at(std::size_t i, std::size_t k) { return c[i * len + k]; }
};

// finite-grid decay/regularity diagnostics (reported, never enforced)
struct SeqDiagnostics {
  double l11 = 0.0;       // sup_i sum_k (k+1)   |c_k|
  double l12 = 0.0;       // sup_i sum_k (k+1)^2 |c_k|
  double y_alpha = 0.0;   // sup over node pairs of sum_k (k+1)|c_k(xi)-c_k(mu)| / |xi-mu|^alpha
  double tail = 0.0;      // sup_i |c_{len-1}|, magnitude of the last kept component
};

// Angular DFT per boundary node; modes |n| > N are discarded. Requires
// K >= 2N+2 (throws ConfigError otherwise).
ModeSequences angular_modes(const FanData& fan, int N);

// Same analysis for complex-valued samples (used for e^{-h} weighted data).
ModeSequences angular_modes_complex(const std::vector<Complex>& values, std::size_t M,
                                    std::size_t K, int N, const std::string& provenance);

// Trigonometric synthesis at angle phi from the kept modes (test utility).
Complex synthesize(const ModeSequences& ms, std::size_t i, double phi);

// <g_0, g_{-2}, g_{-4}, ...> down to -2*floor(N/2)
BoundarySeq build_even(const ModeSequences& ms);
// <g_{-3}, g_{-5}, ...> (mode -1 deliberately excluded)
BoundarySeq build_odd(const ModeSequences& ms);

// g~(z, theta) = (g(z,theta) - g(z,-theta))/2; requires K even so that
// -theta is a grid direction.
FanData odd_extension(const FanData& fan);

// odd extension, then angular modes, then <g~_{-3}, g~_{-5}, ...>
BoundarySeq gtilde_seq(const FanData& fan, int N);

struct AttenuatedModes {
  ModeSequences gamma;    // modes of e^{-h} g
  ModeSequences plain;    // modes of g itself (g_0 and g_{-1} feed the compatibility data)
  BoundarySeq g_h;        // <gamma_{-2}, gamma_{-3}, ...>
  BoundarySeq g_h_even;   // <gamma_{-2}, gamma_{-4}, ...>
  BoundarySeq g_h_odd;    // <gamma_{-3}, gamma_{-5}, ...>  (gamma_{-1} excluded)
};

// Pointwise multiply the fan by e^{-h} on the boundary grid and collect the
// attenuated data sequences.
AttenuatedModes attenuated_data_modes(const FanData& fan, const AttenuationPack& pack);

SeqDiagnostics seq_diagnostics(const BoundarySeq& seq, const Domain& dom, double alpha = 0.75);

}  // namespace tensoray
