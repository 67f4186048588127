#include "tensoray/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tensoray/attenuation.hpp"
#include "tensoray/errors.hpp"

namespace tensoray {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ModeSequences analyze(const std::vector<Complex>& values, std::size_t M, std::size_t K, int N,
                      const std::string& provenance) {
  if (N < 1) throw ConfigError("angular_modes: N must be >= 1");
  if (K < std::size_t(2 * N + 2))
    throw ConfigError("angular_modes: angle count K must be >= 2N+2");
  ModeSequences ms;
  ms.M = M;
  ms.N = N;
  ms.provenance = provenance;
  ms.coef.assign(M * (2 * N + 1), Complex{0.0, 0.0});
  // precomputed angular phases e^{-i n phi_j}
  for (std::size_t i = 0; i < M; ++i) {
    for (int n = -N; n <= N; ++n) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        double ang = -double(n) * kTwoPi * double(j) / double(K);
        acc += values[i * K + j] * Complex{std::cos(ang), std::sin(ang)};
      }
      ms.g(i, n) = acc / double(K);
    }
  }
  return ms;
}

}  // namespace

ModeSequences angular_modes(const FanData& fan, int N) {
  std::vector<Complex> vals(fan.values.begin(), fan.values.end());
  return analyze(vals, fan.M, fan.K, N, "g");
}

ModeSequences angular_modes_complex(const std::vector<Complex>& values, std::size_t M,
                                    std::size_t K, int N, const std::string& provenance) {
  if (values.size() != M * K)
    throw std::invalid_argument("angular_modes_complex: value array size mismatch");
  return analyze(values, M, K, N, provenance);
}

Complex synthesize(const ModeSequences& ms, std::size_t i, double phi) {
  Complex acc = 0.0;
  for (int n = -ms.N; n <= ms.N; ++n) acc += ms.g(i, n) * std::polar(1.0, double(n) * phi);
  return acc;
}

BoundarySeq build_even(const ModeSequences& ms) {
  if (ms.N < 4) throw ConfigError("build_even: N must be >= 4");
  BoundarySeq s;
  s.M = ms.M;
  s.len = std::size_t(ms.N / 2) + 1;  // g_0, g_-2, ..., g_{-2 floor(N/2)}
  s.role = ms.provenance == "g" ? "g_even" : ms.provenance + "_even";
  s.c.resize(s.M * s.len);
  for (std::size_t i = 0; i < s.M; ++i)
    for (std::size_t k = 0; k < s.len; ++k) s.at(i, k) = ms.g(i, -2 * int(k));
  return s;
}

BoundarySeq build_odd(const ModeSequences& ms) {
  if (ms.N < 4) throw ConfigError("build_odd: N must be >= 4");
  BoundarySeq s;
  s.M = ms.M;
  s.len = std::size_t((ms.N - 1) / 2);  // g_-3, g_-5, ..., down to >= -N
  s.role = ms.provenance == "g" ? "g_odd" : ms.provenance + "_odd";
  s.c.resize(s.M * s.len);
  for (std::size_t i = 0; i < s.M; ++i)
    for (std::size_t k = 0; k < s.len; ++k) s.at(i, k) = ms.g(i, -3 - 2 * int(k));
  return s;
}

FanData odd_extension(const FanData& fan) {
  if (fan.K % 2 != 0) throw ConfigError("odd_extension: K must be even");
  FanData out(fan.M, fan.K, fan.radius, fan.attenuation_tag);
  const std::size_t half = fan.K / 2;
  for (std::size_t i = 0; i < fan.M; ++i)
    for (std::size_t j = 0; j < fan.K; ++j) {
      std::size_t jopp = (j + half) % fan.K;
      out.at(i, j) = 0.5 * (fan.at(i, j) - fan.at(i, jopp));
    }
  return out;
}

BoundarySeq gtilde_seq(const FanData& fan, int N) {
  FanData tilde = odd_extension(fan);
  ModeSequences ms = angular_modes(tilde, N);
  ms.provenance = "gtilde";
  BoundarySeq s = build_odd(ms);
  s.role = "gtilde";
  return s;
}

AttenuatedModes attenuated_data_modes(const FanData& fan, const AttenuationPack& pack) {
  if (pack.boundary_eh.size() != fan.M * fan.K)
    throw std::invalid_argument("attenuated_data_modes: fan grid does not match the pack");
  std::vector<Complex> weighted(fan.M * fan.K);
  for (std::size_t i = 0; i < fan.M; ++i)
    for (std::size_t j = 0; j < fan.K; ++j)
      weighted[i * fan.K + j] = pack.boundary_eh[i * fan.K + j] * fan.at(i, j);

  AttenuatedModes out;
  out.gamma = angular_modes_complex(weighted, fan.M, fan.K, pack.N, "gamma");
  out.plain = angular_modes(fan, pack.N);

  const int N = pack.N;
  auto collect = [&](int start, int stride, const char* role) {
    BoundarySeq s;
    s.M = fan.M;
    s.role = role;
    s.len = 0;
    for (int n = start; -n <= N; n -= stride) ++s.len;
    s.c.resize(s.M * s.len);
    for (std::size_t i = 0; i < s.M; ++i) {
      int n = start;
      for (std::size_t k = 0; k < s.len; ++k, n -= stride) s.at(i, k) = out.gamma.g(i, n);
    }
    return s;
  };
  out.g_h = collect(-2, 1, "g_h");
  out.g_h_even = collect(-2, 2, "g_h_even");
  out.g_h_odd = collect(-3, 2, "g_h_odd");
  return out;
}

SeqDiagnostics seq_diagnostics(const BoundarySeq& seq, const Domain& dom, double alpha) {
  SeqDiagnostics d;
  for (std::size_t i = 0; i < seq.M; ++i) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < seq.len; ++k) {
      double a = std::abs(seq.at(i, k));
      s1 += double(k + 1) * a;
      s2 += double(k + 1) * double(k + 1) * a;
    }
    d.l11 = std::max(d.l11, s1);
    d.l12 = std::max(d.l12, s2);
    d.tail = std::max(d.tail, std::abs(seq.at(i, seq.len - 1)));
  }
  // Y_alpha seminorm estimated over adjacent node pairs
  for (std::size_t i = 0; i < seq.M; ++i) {
    std::size_t i2 = (i + 1) % seq.M;
    double dist = norm(dom.boundary_point(i) - dom.boundary_point(i2));
    double acc = 0.0;
    for (std::size_t k = 0; k < seq.len; ++k)
      acc += double(k + 1) * std::abs(seq.at(i, k) - seq.at(i2, k));
    d.y_alpha = std::max(d.y_alpha, acc / std::pow(dist, alpha));
  }
  return d;
}

}  // namespace tensoray
