#include "osg/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "osg/error.hpp"

namespace osg {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "grid files are written in host byte order");

namespace {

constexpr char kMagic[8] = {'O', 'S', 'G', 'G', 'R', 'I', 'D', '\0'};

json header_json(const MomentumGrid& grid) {
  const auto& m = grid.metadata;
  json rings = json::array();
  for (const auto& r : m.rings)
    rings.push_back({{"n", r.n}, {"radius", r.radius}, {"inner", r.inner}, {"outer", r.outer}, {"weight", r.weight}});
  return {{"format_version", kGridFormatVersion},
          {"tool_version", tool_version()},
          {"n_p", grid.n_p()},
          {"n_phi", grid.n_phi()},
          {"p_max", grid.p_axis().empty() ? 0.0 : grid.p_axis().back()},
          {"params",
           {{"lambda", m.params.lambda},
            {"k_dr", m.params.k_dr},
            {"eps_trunc", m.params.eps_trunc},
            {"n_max", m.params.n_max}}},
          {"field", m.field},
          {"atom", m.atom},
          {"n_total_max", m.n_total_max},
          {"captured_weight", m.captured_weight},
          {"integral", m.integral},
          {"rings", rings}};
}

GridMetadata metadata_from(const json& h) {
  GridMetadata m;
  try {
    const auto& p = h.at("params");
    m.params.lambda = p.at("lambda").get<double>();
    m.params.k_dr = p.at("k_dr").get<double>();
    m.params.eps_trunc = p.at("eps_trunc").get<double>();
    m.params.n_max = p.at("n_max").get<int>();
    m.field = h.at("field").get<std::string>();
    m.atom = h.at("atom").get<std::string>();
    m.n_total_max = h.at("n_total_max").get<int>();
    m.captured_weight = h.at("captured_weight").get<double>();
    m.integral = h.at("integral").get<double>();
    for (const auto& r : h.at("rings"))
      m.rings.push_back({r.at("n").get<int>(), r.at("radius").get<double>(), r.at("inner").get<double>(),
                         r.at("outer").get<double>(), r.at("weight").get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("grid header: ") + e.what());
  }
  return m;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::Io, "truncated grid payload in " + path.string());
}

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* tool_version() {
#ifdef OSG_VERSION
  return "osglith " OSG_VERSION;
#else
  return "osglith";
#endif
}

std::string grid_header(const MomentumGrid& grid) { return header_json(grid).dump(); }

void write_grid_bin(const std::filesystem::path& path, const MomentumGrid& grid) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  const std::string header = grid_header(grid);
  const std::uint32_t version = kGridFormatVersion;
  const std::uint64_t header_bytes = header.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&header_bytes), sizeof header_bytes);
  out.write(header.data(), std::streamsize(header.size()));
  write_doubles(out, grid.p_axis());
  write_doubles(out, grid.phi_axis());
  write_doubles(out, grid.values());
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

MomentumGrid read_grid_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t header_bytes = 0;
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::Io, path.string() + " is not a grid file");
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&header_bytes), sizeof header_bytes);
  if (!in) throw Error(ErrorKind::Io, "truncated grid header in " + path.string());
  if (version != kGridFormatVersion)
    throw Error(ErrorKind::Io, "unsupported grid format version " + std::to_string(version));
  if (header_bytes > (std::uint64_t(1) << 30)) throw Error(ErrorKind::Io, "implausible header size");
  std::string header(header_bytes, '\0');
  in.read(header.data(), std::streamsize(header_bytes));
  if (!in) throw Error(ErrorKind::Io, "truncated grid header in " + path.string());
  json h;
  try {
    h = json::parse(header);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, std::string("grid header: ") + e.what());
  }
  const auto n_p = h.value("n_p", std::size_t(0)), n_phi = h.value("n_phi", std::size_t(0));
  if (n_p == 0 || n_phi == 0) throw Error(ErrorKind::Io, "grid header has no shape");
  std::vector<double> p(n_p), phi(n_phi);
  read_doubles(in, p, path);
  read_doubles(in, phi, path);
  MomentumGrid grid(std::move(p), std::move(phi));
  read_doubles(in, grid.values(), path);
  if (in.peek() != std::ifstream::traits_type::eof())
    throw Error(ErrorKind::Io, "trailing bytes after the payload of " + path.string());
  grid.metadata = metadata_from(h);
  return grid;
}

void write_grid_csv(const std::filesystem::path& path, const MomentumGrid& grid) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << "# " << grid_header(grid) << "\n";
  out << "p,phi,W\n";
  for (std::size_t i = 0; i < grid.n_p(); ++i)
    for (std::size_t j = 0; j < grid.n_phi(); ++j)
      out << format_g17(grid.p_axis()[i]) << ',' << format_g17(grid.phi_axis()[j]) << ','
          << format_g17(grid.at(i, j)) << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

MomentumGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw Error(ErrorKind::Io, path.string() + " lacks the header line");
  json h;
  try {
    h = json::parse(line.substr(2));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, std::string("grid header: ") + e.what());
  }
  if (!std::getline(in, line) || line != "p,phi,W") throw Error(ErrorKind::Io, "missing column line");
  const auto n_p = h.value("n_p", std::size_t(0)), n_phi = h.value("n_phi", std::size_t(0));
  if (n_p == 0 || n_phi == 0) throw Error(ErrorKind::Io, "grid header has no shape");
  std::vector<double> p(n_p), phi(n_phi), w(n_p * n_phi);
  for (std::size_t k = 0; k < n_p * n_phi; ++k) {
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "truncated CSV " + path.string());
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
      throw Error(ErrorKind::Io, "bad CSV row " + std::to_string(k + 3));
    p[k / n_phi] = a;
    phi[k % n_phi] = b;
    w[k] = c;
  }
  MomentumGrid grid(std::move(p), std::move(phi));
  grid.values() = std::move(w);
  grid.metadata = metadata_from(h);
  return grid;
}

}  // namespace osg
