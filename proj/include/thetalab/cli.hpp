#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/curve.hpp"
#include "thetalab/theta.hpp"

namespace thetalab {

/// gauss, theta, distribution, interpolate, hypotheses, rank0, resolvent, equivariance.
const std::vector<std::string>& job_commands();

struct JobSpec {
  std::string command;
  /// Line-delimited JSON records: curves {label?, ainvs} and at most one
  /// field {conductor, subgroup_generators}.
  std::string curve_path;
  int64_t conductor = 1;
  /// Absent or empty means F = Q(zeta_c)^+.
  std::vector<int64_t> subgroup;
  int64_t p = 3;
  int64_t precision = 12;
  std::string tol = "1e-8";
  uint64_t seed = 0;
  int64_t embedding = 0;
  std::string fixtures;
  std::string report_path;

  nlohmann::json to_json() const;
  /// Throws ParseError.
  static JobSpec from_json(const nlohmann::json& j);
};

struct Inputs {
  std::vector<CurveQ> curves;
  std::optional<int64_t> conductor;
  std::optional<std::vector<int64_t>> subgroup;
};

/// Parses a record file. Curves are replaced by their minimal models (labels
/// kept). Throws ParseError, InvalidCurve, InvalidFieldSpec.
Inputs load_inputs(const std::string& path);

/// FieldSpec for (c, subgroup), defaulting to Q(zeta_c)^+. Throws InvalidFieldSpec.
FieldSpec make_field(int64_t c, const std::vector<int64_t>& subgroup);

/// Runs the job and returns the report; writes it to spec.report_path when
/// set. Module failures are rethrown with the command and curve as context.
nlohmann::json run_job(const JobSpec& spec);

/// Entry point of the command-line tool; returns the process exit status
/// (0 completed, 1 usage error, 2 job error).
int cli_main(int argc, char** argv);

}  // namespace thetalab
