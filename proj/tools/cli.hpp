#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsd/benchmarks.hpp"
#include "nsd/core.hpp"

namespace nsd::cli {

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

/// Command-line overrides; unset fields keep the benchmark reference value.
struct Overrides {
  std::optional<double> eps0;
  std::optional<double> delta;
  std::optional<double> delta_prime;
  std::optional<double> t1_scale;
  std::optional<double> t2_factor;
  std::optional<std::string> g_family;
  std::optional<std::string> line_search;
  std::optional<std::int64_t> max_grads;
  std::optional<double> f_target;
  std::optional<double> gap_tol;
};

struct RunSpec {
  std::string problem;
  std::optional<int> n;
  std::string x0;  // start label or comma separated coordinates; empty selects the default start
  Variant variant = Variant::A;
  Overrides overrides;
  std::optional<std::string> config_path;  // JSON file applied before the flag overrides
};

struct Resolved {
  bench::Benchmark benchmark;
  std::string x0_label;
  Point x0;
  Params params;
  Controls controls;
};

struct RunSummary {
  std::string problem;
  int n = 0;
  Variant variant = Variant::A;
  std::string x0;
  std::int64_t iterations = 0;
  std::int64_t gradient_evals = 0;
  std::int64_t value_evals = 0;
  double final_f = 0.0;
  std::optional<double> gap;  // final_f minus the known optimal value
  std::string status;         // Status name, or "error" when the run threw
  std::string message;
  double seconds = 0.0;
};

// JSON mirrors of Params / Controls (field names as in the structs)
nlohmann::json to_json(const Params& p, const Controls& c);
void apply_json(const nlohmann::json& j, Params& p, Controls& c);

/// Resolves problem, start, reference configuration, config file and flags in that order.
/// Throws UnknownProblem, InvalidConfig or UnknownStart.
Resolved resolve(const RunSpec& spec);

RunSummary run(const Resolved& r, Trace* trace_out = nullptr);

/// One JSON object per outer iteration.
void write_trace_jsonl(const Trace& trace, std::ostream& os);
std::string summary_line(const RunSummary& s);
nlohmann::json summary_json(const RunSummary& s);

/// Suite combinations in output order. `extended` adds the larger Nesterov cases.
std::vector<RunSpec> suite_specs(const std::vector<std::string>& filter, bool extended);
std::vector<RunSummary> run_suite(const std::vector<RunSpec>& specs, bool parallel);

inline constexpr const char* kCsvHeader =
    "problem,n,variant,x0,iterations,gradient_evals,value_evals,final_f,gap,status,seconds";
void write_csv(const std::vector<RunSummary>& rows, std::ostream& os);

/// Entry point shared by the executable and the tests. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsd::cli
