#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "osg/grid.hpp"
#include "osg/lithography.hpp"
#include "osg/params.hpp"
#include "osg/states.hpp"

// Versioned run configuration (JSON). Unknown keys are rejected; complex numbers are
// {"re": x, "im": y} or {"mod": r, "arg": radians}.
namespace osg {

inline constexpr int kConfigSchema = 1;

struct ModeSpec {
  enum class Kind { Fock, Coherent, Squeezed };
  Kind kind = Kind::Coherent;
  int n = 0;  ///< Fock
  cplx alpha{0.0, 0.0};
  double r = 0.0;
  double phi_sq = FieldPlan::kSqueezePhase;

  bool operator==(const ModeSpec&) const = default;
};

/// Either one generator per mode or a raw C matrix (inline or from a JSON file).
struct FieldSpec {
  std::optional<ModeSpec> a;
  std::optional<ModeSpec> b;
  std::vector<std::vector<cplx>> matrix;
  std::string matrix_file;  ///< relative paths resolve against the config's directory

  bool operator==(const FieldSpec&) const = default;
};

/// c_g, c_e directly, or the equal superposition (|g> + e^{i kappa}|e>)/sqrt 2.
struct AtomSpec {
  std::optional<double> kappa;
  cplx c_g{1.0, 0.0};
  cplx c_e{0.0, 0.0};

  AtomPrep resolve() const;
  bool operator==(const AtomSpec&) const = default;
};

struct TargetSpec {
  double p = 0.0;
  double phi = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;

  bool operator==(const TargetSpec&) const = default;
};

enum class OutputFormat { Csv, Bin, Both };

struct OutputSpec {
  std::string dir = ".";
  std::string stem = "grid";
  OutputFormat format = OutputFormat::Bin;

  bool operator==(const OutputSpec&) const = default;
};

struct OracleSpec {
  int n_max = 5;     ///< quadrature suite: N <= n_max
  int points = 20;   ///< random (p, phi) per index set
  unsigned seed = 1;
  bool pipeline = true;  ///< run the evolution-FFT comparison

  bool operator==(const OracleSpec&) const = default;
};

struct RunConfig {
  int schema = kConfigSchema;
  std::string mode;  ///< simulate | target | oracle-check | sweep; empty = from the command line
  SimParams params;
  FieldSpec field;
  std::optional<AtomSpec> atom;
  GridSpec grid;
  OutputSpec output;
  int threads = 1;
  double term_budget = 1e11;
  std::optional<double> exclusion_radius;
  std::optional<TargetSpec> target;
  std::vector<TargetSpec> sweep;
  OracleSpec oracle;

  std::filesystem::path base_dir;  ///< directory of the config file; not serialized

  bool operator==(const RunConfig& o) const;
};

/// Throws Error(Config) on malformed JSON, unknown keys, wrong types or invalid values.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
/// Throws Error(Io) if the file cannot be read, Error(Config) if it does not validate.
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON (complex numbers as re/im); parse_config(to_json(c)) == c.
std::string to_json(const RunConfig& config);

/// The two-mode state described by `field`, truncated per `params`. An explicit params.n_max
/// overrides the automatic total cutoff.
TwoModeFockState build_field(const FieldSpec& field, const SimParams& params,
                             const std::filesystem::path& base_dir = {});

ModeCoeffs build_mode(const ModeSpec& mode, double eps);

const char* to_string(OutputFormat format);
OutputFormat parse_format(const std::string& s);

}  // namespace osg
