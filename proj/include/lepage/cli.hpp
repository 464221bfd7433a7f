#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lepage/error.hpp"
#include "lepage/minimal.hpp"
#include "lepage/variation.hpp"

namespace lepage::cli {

inline constexpr const char* kProblemSchema = "lepage-problem/1";
inline constexpr const char* kReportSchema = "lepage-report/1";

/// Malformed problem file or command line (exit code 2).
struct InputError : Error {
  using Error::Error;
};

struct Problem {
  JetChart chart{1, 1};
  std::optional<Metric> metric;
  std::optional<Lagrangian> lagrangian;
  std::optional<HorizontalNForm> form;
  std::vector<FieldSpec> fields;
  std::optional<Immersion> immersion;
  std::vector<int> adapted;  // (i) for Grassmann-mode output, default 1..n
  nlohmann::json minsurf = nlohmann::json::object();
  std::uint64_t seed = 1;

  const Lagrangian& lambda() const;
};

/// Validates a problem document; throws InputError.
Problem load_problem(const nlohmann::json& doc);
Problem load_problem_file(const std::string& path);

nlohmann::json to_json(const Form& f);
nlohmann::json to_json(const PointAssignment& p);

/// Entry point; returns the process exit code (0 pass, 1 mathematical failure, 2 input error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lepage::cli
