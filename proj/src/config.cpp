#include "osg/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "osg/error.hpp"

namespace osg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Config, where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

cplx get_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {get_number(j, where), 0.0};
  if (!j.is_object()) fail(where, "expected a complex number {re, im} or {mod, arg}");
  if (j.contains("re") || j.contains("im")) {
    only_keys(j, where, {"re", "im"});
    const double re = j.contains("re") ? get_number(j["re"], where + ".re") : 0.0;
    const double im = j.contains("im") ? get_number(j["im"], where + ".im") : 0.0;
    return {re, im};
  }
  if (j.contains("mod")) {
    only_keys(j, where, {"mod", "arg"});
    const double mod = get_number(j["mod"], where + ".mod");
    if (mod < 0.0) fail(where, "modulus must be >= 0");
    const double arg = j.contains("arg") ? get_number(j["arg"], where + ".arg") : 0.0;
    return std::polar(mod, arg);
  }
  fail(where, "expected a complex number {re, im} or {mod, arg}");
}

json put_complex(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ModeSpec parse_mode(const json& j, const std::string& where) {
  only_keys(j, where, {"kind", "n", "alpha", "r", "phi_sq"});
  if (!j.contains("kind")) fail(where, "missing 'kind' (fock, coherent or squeezed)");
  const std::string kind = get_string(j["kind"], where + ".kind");
  ModeSpec m;
  if (kind == "fock") {
    m.kind = ModeSpec::Kind::Fock;
    only_keys(j, where, {"kind", "n"});
    if (!j.contains("n")) fail(where, "fock mode needs 'n'");
    m.n = get_int(j["n"], where + ".n");
    if (m.n < 0) fail(where + ".n", "must be >= 0");
  } else if (kind == "coherent") {
    m.kind = ModeSpec::Kind::Coherent;
    only_keys(j, where, {"kind", "alpha"});
    if (!j.contains("alpha")) fail(where, "coherent mode needs 'alpha'");
    m.alpha = get_complex(j["alpha"], where + ".alpha");
  } else if (kind == "squeezed") {
    m.kind = ModeSpec::Kind::Squeezed;
    if (!j.contains("alpha") || !j.contains("r")) fail(where, "squeezed mode needs 'alpha' and 'r'");
    m.alpha = get_complex(j["alpha"], where + ".alpha");
    m.r = get_number(j["r"], where + ".r");
    if (m.r < 0.0) fail(where + ".r", "must be >= 0");
    if (j.contains("phi_sq")) m.phi_sq = get_number(j["phi_sq"], where + ".phi_sq");
  } else {
    fail(where + ".kind", "unknown mode kind '" + kind + "'");
  }
  return m;
}

json put_mode(const ModeSpec& m) {
  switch (m.kind) {
    case ModeSpec::Kind::Fock:
      return {{"kind", "fock"}, {"n", m.n}};
    case ModeSpec::Kind::Coherent:
      return {{"kind", "coherent"}, {"alpha", put_complex(m.alpha)}};
    case ModeSpec::Kind::Squeezed:
      return {{"kind", "squeezed"}, {"alpha", put_complex(m.alpha)}, {"r", m.r}, {"phi_sq", m.phi_sq}};
  }
  return {};
}

std::vector<std::vector<cplx>> parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  std::vector<std::vector<cplx>> rows;
  for (std::size_t m = 0; m < j.size(); ++m) {
    const std::string row_where = where + "[" + std::to_string(m) + "]";
    if (!j[m].is_array()) fail(row_where, "expected an array");
    std::vector<cplx> row;
    for (std::size_t n = 0; n < j[m].size(); ++n)
      row.push_back(get_complex(j[m][n], row_where + "[" + std::to_string(n) + "]"));
    rows.push_back(std::move(row));
  }
  return rows;
}

TargetSpec parse_target(const json& j, const std::string& where) {
  only_keys(j, where, {"p", "phi", "r", "r_a", "r_b"});
  if (!j.contains("p") || !j.contains("phi")) fail(where, "target needs 'p' and 'phi'");
  TargetSpec t;
  t.p = get_number(j["p"], where + ".p");
  t.phi = get_number(j["phi"], where + ".phi");
  if (j.contains("r")) {
    if (j.contains("r_a") || j.contains("r_b")) fail(where, "give either 'r' or 'r_a'/'r_b'");
    t.r_a = t.r_b = get_number(j["r"], where + ".r");
  }
  if (j.contains("r_a")) t.r_a = get_number(j["r_a"], where + ".r_a");
  if (j.contains("r_b")) t.r_b = get_number(j["r_b"], where + ".r_b");
  if (!(t.p > 0.0)) fail(where + ".p", "must be > 0");
  if (t.r_a < 0.0 || t.r_b < 0.0) fail(where, "squeeze factors must be >= 0");
  return t;
}

json put_target(const TargetSpec& t) { return {{"p", t.p}, {"phi", t.phi}, {"r_a", t.r_a}, {"r_b", t.r_b}}; }

}  // namespace

AtomPrep AtomSpec::resolve() const {
  if (kappa) return AtomPrep::from_phase(*kappa);
  return {c_g, c_e};
}

bool RunConfig::operator==(const RunConfig& o) const {
  return schema == o.schema && mode == o.mode && params == o.params && field == o.field && atom == o.atom &&
         grid == o.grid && output == o.output && threads == o.threads && term_budget == o.term_budget &&
         exclusion_radius == o.exclusion_radius && target == o.target && sweep == o.sweep && oracle == o.oracle;
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Bin: return "bin";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "bin") return OutputFormat::Bin;
  if (s == "both") return OutputFormat::Both;
  throw Error(ErrorKind::Config, "format must be csv, bin or both, not '" + s + "'");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config", {"schema", "mode", "params", "field", "atom", "grid", "output", "threads", "term_budget",
                          "exclusion_radius", "target", "sweep", "oracle"});
  RunConfig c;
  c.base_dir = base_dir;
  if (!j.contains("schema")) fail("config", "missing 'schema'");
  c.schema = get_int(j["schema"], "schema");
  if (c.schema != kConfigSchema)
    fail("schema", "unsupported version " + std::to_string(c.schema) + " (expected " + std::to_string(kConfigSchema) + ")");

  if (j.contains("mode")) {
    c.mode = get_string(j["mode"], "mode");
    if (c.mode != "simulate" && c.mode != "target" && c.mode != "oracle-check" && c.mode != "sweep")
      fail("mode", "must be simulate, target, oracle-check or sweep");
  }

  if (j.contains("params")) {
    const auto& p = j["params"];
    only_keys(p, "params", {"lambda", "k_dr", "eps_trunc", "n_max"});
    if (p.contains("lambda")) c.params.lambda = get_number(p["lambda"], "params.lambda");
    if (p.contains("k_dr")) c.params.k_dr = get_number(p["k_dr"], "params.k_dr");
    if (p.contains("eps_trunc")) c.params.eps_trunc = get_number(p["eps_trunc"], "params.eps_trunc");
    if (p.contains("n_max")) c.params.n_max = get_int(p["n_max"], "params.n_max");
    try {
      c.params.validate();
    } catch (const Error& e) {
      fail("params", e.what());
    }
    if (c.params.n_max < -1) fail("params.n_max", "must be >= 0 or -1 (automatic)");
  }

  if (j.contains("field")) {
    const auto& f = j["field"];
    only_keys(f, "field", {"a", "b", "matrix", "matrix_file"});
    const bool modes = f.contains("a") || f.contains("b");
    const int sources = int(modes) + int(f.contains("matrix")) + int(f.contains("matrix_file"));
    if (sources != 1) fail("field", "give exactly one of {a, b}, matrix, matrix_file");
    if (modes) {
      if (!f.contains("a") || !f.contains("b")) fail("field", "both modes 'a' and 'b' are required");
      c.field.a = parse_mode(f["a"], "field.a");
      c.field.b = parse_mode(f["b"], "field.b");
    }
    if (f.contains("matrix")) c.field.matrix = parse_matrix(f["matrix"], "field.matrix");
    if (f.contains("matrix_file")) c.field.matrix_file = get_string(f["matrix_file"], "field.matrix_file");
  }

  if (j.contains("atom")) {
    const auto& a = j["atom"];
    only_keys(a, "atom", {"kappa", "c_g", "c_e"});
    AtomSpec atom;
    if (a.contains("kappa")) {
      if (a.contains("c_g") || a.contains("c_e")) fail("atom", "give either 'kappa' or 'c_g'/'c_e'");
      atom.kappa = get_number(a["kappa"], "atom.kappa");
    } else {
      if (!a.contains("c_g") || !a.contains("c_e")) fail("atom", "needs 'kappa' or both 'c_g' and 'c_e'");
      atom.c_g = get_complex(a["c_g"], "atom.c_g");
      atom.c_e = get_complex(a["c_e"], "atom.c_e");
      try {
        atom.resolve().validate();
      } catch (const Error& e) {
        fail("atom", e.what());
      }
    }
    c.atom = atom;
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    only_keys(g, "grid", {"n_p", "n_phi", "p_max"});
    if (g.contains("n_p")) c.grid.n_p = get_int(g["n_p"], "grid.n_p");
    if (g.contains("n_phi")) c.grid.n_phi = get_int(g["n_phi"], "grid.n_phi");
    if (g.contains("p_max")) c.grid.p_max = get_number(g["p_max"], "grid.p_max");
    try {
      c.grid.validate();
    } catch (const Error& e) {
      fail("grid", e.what());
    }
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    only_keys(o, "output", {"dir", "stem", "format"});
    if (o.contains("dir")) c.output.dir = get_string(o["dir"], "output.dir");
    if (o.contains("stem")) c.output.stem = get_string(o["stem"], "output.stem");
    if (o.contains("format")) c.output.format = parse_format(get_string(o["format"], "output.format"));
    if (c.output.stem.empty() || c.output.stem.find('/') != std::string::npos)
      fail("output.stem", "must be a plain, non-empty file stem");
  }

  if (j.contains("threads")) {
    c.threads = get_int(j["threads"], "threads");
    if (c.threads < 1) fail("threads", "must be >= 1");
  }
  if (j.contains("term_budget")) {
    c.term_budget = get_number(j["term_budget"], "term_budget");
    if (!(c.term_budget > 0.0)) fail("term_budget", "must be > 0");
  }
  if (j.contains("exclusion_radius")) {
    c.exclusion_radius = get_number(j["exclusion_radius"], "exclusion_radius");
    if (*c.exclusion_radius < 0.0) fail("exclusion_radius", "must be >= 0");
  }
  if (j.contains("target")) c.target = parse_target(j["target"], "target");
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_array()) fail("sweep", "expected an array of targets");
    for (std::size_t i = 0; i < s.size(); ++i) c.sweep.push_back(parse_target(s[i], "sweep[" + std::to_string(i) + "]"));
  }
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    only_keys(o, "oracle", {"n_max", "points", "seed", "pipeline"});
    if (o.contains("n_max")) c.oracle.n_max = get_int(o["n_max"], "oracle.n_max");
    if (o.contains("points")) c.oracle.points = get_int(o["points"], "oracle.points");
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) fail("oracle.seed", "expected a non-negative integer");
      c.oracle.seed = o["seed"].get<unsigned>();
    }
    if (o.contains("pipeline")) c.oracle.pipeline = get_bool(o["pipeline"], "oracle.pipeline");
    if (c.oracle.n_max < 0 || c.oracle.points < 1) fail("oracle", "needs n_max >= 0 and points >= 1");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string to_json(const RunConfig& c) {
  json j;
  j["schema"] = c.schema;
  if (!c.mode.empty()) j["mode"] = c.mode;
  j["params"] = {{"lambda", c.params.lambda},
                 {"k_dr", c.params.k_dr},
                 {"eps_trunc", c.params.eps_trunc},
                 {"n_max", c.params.n_max}};
  json field = json::object();
  if (c.field.a) field["a"] = put_mode(*c.field.a);
  if (c.field.b) field["b"] = put_mode(*c.field.b);
  if (!c.field.matrix.empty()) {
    json rows = json::array();
    for (const auto& row : c.field.matrix) {
      json r = json::array();
      for (cplx z : row) r.push_back(put_complex(z));
      rows.push_back(r);
    }
    field["matrix"] = rows;
  }
  if (!c.field.matrix_file.empty()) field["matrix_file"] = c.field.matrix_file;
  if (!field.empty()) j["field"] = field;
  if (c.atom) {
    if (c.atom->kappa)
      j["atom"] = {{"kappa", *c.atom->kappa}};
    else
      j["atom"] = {{"c_g", put_complex(c.atom->c_g)}, {"c_e", put_complex(c.atom->c_e)}};
  }
  j["grid"] = {{"n_p", c.grid.n_p}, {"n_phi", c.grid.n_phi}, {"p_max", c.grid.p_max}};
  j["output"] = {{"dir", c.output.dir}, {"stem", c.output.stem}, {"format", to_string(c.output.format)}};
  j["threads"] = c.threads;
  j["term_budget"] = c.term_budget;
  if (c.exclusion_radius) j["exclusion_radius"] = *c.exclusion_radius;
  if (c.target) j["target"] = put_target(*c.target);
  if (!c.sweep.empty()) {
    json s = json::array();
    for (const auto& t : c.sweep) s.push_back(put_target(t));
    j["sweep"] = s;
  }
  j["oracle"] = {{"n_max", c.oracle.n_max},
                 {"points", c.oracle.points},
                 {"seed", c.oracle.seed},
                 {"pipeline", c.oracle.pipeline}};
  return j.dump(2) + "\n";
}

ModeCoeffs build_mode(const ModeSpec& mode, double eps) {
  switch (mode.kind) {
    case ModeSpec::Kind::Fock:
      return fock_coeffs(mode.n, mode.n);
    case ModeSpec::Kind::Coherent:
      return coherent_coeffs(mode.alpha, coherent_window(mode.alpha, eps), eps);
    case ModeSpec::Kind::Squeezed:
      return squeezed_coherent_coeffs(mode.alpha, mode.r, mode.phi_sq,
                                      squeezed_window(mode.alpha, mode.r, mode.phi_sq, eps), eps);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown mode kind");
}

TwoModeFockState build_field(const FieldSpec& field, const SimParams& params,
                             const std::filesystem::path& base_dir) {
  if (field.a && field.b) {
    const double eps = params.eps_trunc / 8.0;
    const ModeCoeffs a = build_mode(*field.a, eps), b = build_mode(*field.b, eps);
    if (params.n_max < 0) return product_state(a, b, params.eps_trunc);
    const int N = params.n_max, dim = N + 1;
    const double sa = std::sqrt(a.captured_weight()), sb = std::sqrt(b.captured_weight());
    std::vector<cplx> dense(std::size_t(dim) * dim);
    for (int m = 0; m <= std::min(N, a.n_max()); ++m)
      for (int n = 0; n <= std::min(N - m, b.n_max()); ++n) dense[std::size_t(m) * dim + n] = sa * a[m] * sb * b[n];
    return TwoModeFockState(std::move(dense), dim, N);
  }

  std::vector<std::vector<cplx>> rows = field.matrix;
  if (!field.matrix_file.empty()) {
    std::filesystem::path path = field.matrix_file;
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read C matrix " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    json j;
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Config, "C matrix file " + path.string() + ": " + e.what());
    }
    rows = parse_matrix(j.is_object() && j.contains("matrix") ? j["matrix"] : j, path.string());
  }
  if (rows.empty()) throw Error(ErrorKind::Config, "field: no field state given");
  auto raw = TwoModeFockState::from_matrix(rows);
  if (params.n_max < 0 || params.n_max >= raw.n_total_max()) return raw;
  std::vector<cplx> dense(std::size_t(raw.dim()) * raw.dim());
  for (int m = 0; m < raw.dim(); ++m)
    for (int n = 0; n < raw.dim(); ++n) dense[std::size_t(m) * raw.dim() + n] = raw.coefficient(m, n);
  return TwoModeFockState(std::move(dense), raw.dim(), params.n_max);
}

}  // namespace osg
