#include "tensoray/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tensoray/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; byte swapping not implemented");

namespace tensoray {

namespace {

constexpr char kFanMagic[8] = {'T', 'R', 'A', 'Y', 'F', 'A', 'N', '1'};
constexpr char kPackMagic[8] = {'T', 'R', 'A', 'Y', 'P', 'C', 'K', '1'};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
void put(std::string& s, const T& v) {
  s.append(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T take(const std::string& s, std::size_t& off, const char* what) {
  if (off + sizeof(T) > s.size()) throw IoError(std::string("truncated file while reading ") + what);
  T v;
  std::memcpy(&v, s.data() + off, sizeof v);
  off += sizeof v;
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

void write_fan_csv(const std::filesystem::path& path, const FanData& fan) {
  std::ostringstream out;
  out << "# tensoray fan v1\n";
  out << "# M,K,radius,attenuation\n";
  out << fan.M << "," << fan.K << "," << fmt17(fan.radius) << "," << fan.attenuation_tag << "\n";
  out << "i,j,s,phi,value\n";
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t i = 0; i < fan.M; ++i)
    for (std::size_t j = 0; j < fan.K; ++j) {
      double s = two_pi * double(i) / double(fan.M);
      out << i << "," << j << "," << fmt17(s) << "," << fmt17(fan.angle(j)) << ","
          << fmt17(fan.at(i, j)) << "\n";
    }
  atomic_write(path, out.str());
}

FanData read_fan_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };

  auto next_line = [&]() {
    if (!std::getline(in, line)) fail("unexpected end of file");
    ++lineno;
  };
  next_line();
  if (line.rfind("# tensoray fan", 0) != 0) fail("not a tensoray fan CSV");
  next_line();  // header comment
  next_line();  // M,K,radius,tag
  FanData fan;
  {
    std::istringstream ss(line);
    std::string tok;
    try {
      if (!std::getline(ss, tok, ',')) fail("missing M");
      fan.M = std::stoul(tok);
      if (!std::getline(ss, tok, ',')) fail("missing K");
      fan.K = std::stoul(tok);
      if (!std::getline(ss, tok, ',')) fail("missing radius");
      fan.radius = std::stod(tok);
      if (!std::getline(ss, tok)) fail("missing attenuation tag");
      fan.attenuation_tag = tok;
    } catch (const std::logic_error&) {
      fail("malformed header numbers");
    }
  }
  if (fan.M == 0 || fan.K == 0) fail("degenerate grid");
  fan.values.assign(fan.M * fan.K, 0.0);
  next_line();  // column names
  for (std::size_t n = 0; n < fan.M * fan.K; ++n) {
    next_line();
    std::istringstream ss(line);
    std::string tok;
    std::size_t i, j;
    double v;
    try {
      if (!std::getline(ss, tok, ',')) fail("missing i");
      i = std::stoul(tok);
      if (!std::getline(ss, tok, ',')) fail("missing j");
      j = std::stoul(tok);
      if (!std::getline(ss, tok, ',')) fail("missing s");
      if (!std::getline(ss, tok, ',')) fail("missing phi");
      if (!std::getline(ss, tok)) fail("missing value");
      v = std::stod(tok);
    } catch (const std::logic_error&) {
      fail("malformed row");
    }
    if (i >= fan.M || j >= fan.K) fail("index out of range");
    fan.at(i, j) = v;
  }
  return fan;
}

void write_fan_binary(const std::filesystem::path& path, const FanData& fan) {
  std::string buf;
  buf.append(kFanMagic, sizeof kFanMagic);
  put<std::uint32_t>(buf, 1);  // version
  put<std::uint64_t>(buf, fan.M);
  put<std::uint64_t>(buf, fan.K);
  put<double>(buf, fan.radius);
  put<std::uint32_t>(buf, std::uint32_t(fan.attenuation_tag.size()));
  buf.append(fan.attenuation_tag);
  buf.append(reinterpret_cast<const char*>(fan.values.data()), fan.values.size() * sizeof(double));
  atomic_write(path, buf);
}

FanData read_fan_binary(const std::filesystem::path& path) {
  std::string s = slurp(path);
  std::size_t off = 0;
  if (s.size() < 8 || std::memcmp(s.data(), kFanMagic, 8) != 0)
    throw IoError(path.string() + ": not a tensoray fan binary");
  off = 8;
  auto version = take<std::uint32_t>(s, off, "version");
  if (version != 1) throw IoError(path.string() + ": unsupported fan binary version");
  FanData fan;
  fan.M = take<std::uint64_t>(s, off, "M");
  fan.K = take<std::uint64_t>(s, off, "K");
  fan.radius = take<double>(s, off, "radius");
  auto tlen = take<std::uint32_t>(s, off, "tag length");
  if (off + tlen > s.size()) throw IoError(path.string() + ": truncated tag");
  fan.attenuation_tag.assign(s.data() + off, tlen);
  off += tlen;
  std::size_t count = fan.M * fan.K;
  if (off + count * sizeof(double) > s.size()) throw IoError(path.string() + ": truncated values");
  fan.values.resize(count);
  std::memcpy(fan.values.data(), s.data() + off, count * sizeof(double));
  return fan;
}

FanData read_fan_auto(const std::filesystem::path& path) {
  std::string head;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char buf[8] = {};
    in.read(buf, 8);
    head.assign(buf, std::size_t(in.gcount()));
  }
  if (head.size() == 8 && std::memcmp(head.data(), kFanMagic, 8) == 0)
    return read_fan_binary(path);
  return read_fan_csv(path);
}

void write_modes_csv(const std::filesystem::path& path, const ModeSequences& ms) {
  std::ostringstream out;
  out << "i,n,Re,Im\n";
  for (std::size_t i = 0; i < ms.M; ++i)
    for (int n = -ms.N; n <= ms.N; ++n) {
      Complex v = ms.g(i, n);
      out << i << "," << n << "," << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
    }
  atomic_write(path, out.str());
}

void write_tensor_csv(const std::filesystem::path& path, const GriddedTensor& t) {
  std::ostringstream out;
  out << "x,y,f11,f12,f22\n";
  const DiskGrid& g = t.grid();
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      std::size_t id = g.index(ix, iy);
      if (!t.mask()[id]) continue;
      Vec2 p = g.point(ix, iy);
      out << fmt17(p.x) << "," << fmt17(p.y) << "," << fmt17(t.comp11()[id]) << ","
          << fmt17(t.comp12()[id]) << "," << fmt17(t.comp22()[id]) << "\n";
    }
  atomic_write(path, out.str());
}

void write_tensor_plot_script(const std::filesystem::path& path, const std::string& csv_name) {
  std::ostringstream out;
  out << "set datafile separator ','\n";
  out << "set size ratio -1\n";
  out << "set palette rgbformulae 33,13,10\n";
  int col = 3;
  for (const char* name : {"f11", "f12", "f22"}) {
    out << "set title '" << name << "'\n";
    out << "plot '" << csv_name << "' skip 1 using 1:2:" << col
        << " with points pt 5 ps 0.6 palette notitle\n";
    out << "pause -1 'press enter for the next component'\n";
    ++col;
  }
  atomic_write(path, out.str());
}

void write_pack_binary(const std::filesystem::path& path, const AttenuationPack& pack) {
  std::string buf;
  buf.append(kPackMagic, sizeof kPackMagic);
  put<std::uint32_t>(buf, 1);
  put<std::uint64_t>(buf, pack.dom.nodes());
  put<std::uint64_t>(buf, pack.K);
  put<std::int32_t>(buf, pack.N);
  put<double>(buf, pack.dom.radius());
  put<double>(buf, pack.grid->step());
  put<double>(buf, pack.grid->r_max());
  auto put_arr = [&buf](const std::vector<Complex>& a) {
    put<std::uint64_t>(buf, a.size());
    buf.append(reinterpret_cast<const char*>(a.data()), a.size() * sizeof(Complex));
  };
  put_arr(pack.h_boundary);
  put_arr(pack.boundary_eh);
  atomic_write(path, buf);
}

PackArtifact read_pack_binary(const std::filesystem::path& path) {
  std::string s = slurp(path);
  if (s.size() < 8 || std::memcmp(s.data(), kPackMagic, 8) != 0)
    throw IoError(path.string() + ": not a tensoray pack binary");
  std::size_t off = 8;
  auto version = take<std::uint32_t>(s, off, "version");
  if (version != 1) throw IoError(path.string() + ": unsupported pack version");
  PackArtifact art;
  art.M = take<std::uint64_t>(s, off, "M");
  art.K = take<std::uint64_t>(s, off, "K");
  art.N = take<std::int32_t>(s, off, "N");
  art.radius = take<double>(s, off, "radius");
  art.grid_step = take<double>(s, off, "grid step");
  art.grid_rmax = take<double>(s, off, "grid rmax");
  auto take_arr = [&](const char* what) {
    auto n = take<std::uint64_t>(s, off, what);
    if (off + n * sizeof(Complex) > s.size()) throw IoError(path.string() + ": truncated array");
    std::vector<Complex> a(n);
    std::memcpy(a.data(), s.data() + off, n * sizeof(Complex));
    off += n * sizeof(Complex);
    return a;
  };
  art.h_boundary = take_arr("h boundary");
  art.boundary_eh = take_arr("boundary eh");
  return art;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

}  // namespace tensoray
