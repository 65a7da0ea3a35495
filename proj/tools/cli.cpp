#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "nsd/solver.hpp"

namespace nsd::cli {

using nlohmann::json;

namespace {

std::string_view bundle_name(BundlePolicy p) { return p == BundlePolicy::KeepCuts ? "keep-cuts" : "keep-min-norms"; }
std::string_view metric_name(MetricMode m) { return m == MetricMode::Gram ? "gram" : "operator"; }

template <class Enum>
Enum parse_or_throw(std::optional<Enum> v, std::string_view what, std::string_view text) {
  if (!v) throw InvalidConfig({fmt::format("unknown {} '{}'", what, text)});
  return *v;
}

BundlePolicy parse_bundle(std::string_view s) {
  if (s == "keep-cuts") return BundlePolicy::KeepCuts;
  if (s == "keep-min-norms") return BundlePolicy::KeepMinNorms;
  throw InvalidConfig({fmt::format("unknown bundle policy '{}'", s)});
}

MetricMode parse_metric(std::string_view s) {
  if (s == "gram") return MetricMode::Gram;
  if (s == "operator") return MetricMode::Operator;
  throw InvalidConfig({fmt::format("unknown metric mode '{}'", s)});
}

std::string_view t1_name(T1Control::Family f) { return f == T1Control::Family::Linear ? "linear" : "sqrt"; }
std::string_view t2_name(T2Control::Family f) { return f == T2Control::Family::Geometric ? "geometric" : "rational"; }

Point parse_point(const std::string& text, int n) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw bench::UnknownStart(fmt::format("x0 '{}' is neither a start label nor a coordinate list", text));
    }
  }
  if (static_cast<int>(v.size()) != n) throw DimensionMismatch("x0", n, static_cast<Eigen::Index>(v.size()));
  return Eigen::Map<Point>(v.data(), n);
}

template <class T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

json to_json(const Params& p, const Controls& c) {
  json j;
  j["delta"] = p.delta;
  j["delta_prime"] = p.delta_prime;
  j["eps0"] = p.eps0;
  j["bundle_m"] = p.bundle_m;
  j["bundle_policy"] = bundle_name(p.bundle_policy);
  j["max_iterations"] = p.max_iterations;
  j["max_gradient_evals"] = p.max_gradient_evals;
  j["max_bisections"] = p.max_bisections;
  j["max_inner_steps"] = p.max_inner_steps;
  j["eps_tol"] = p.eps_tol;
  j["f_target"] = p.f_target ? json(*p.f_target) : json(nullptr);
  j["gap_tol"] = p.gap_tol;
  j["line_search"] = to_string(p.line_search);
  j["sigma_growth"] = p.sigma_growth;
  j["max_doublings"] = p.max_doublings;
  j["line_search_refinements"] = p.line_search_refinements;
  j["variant"] = to_string(p.variant);
  j["metric_mode"] = metric_name(p.metric_mode);
  j["radius_from_previous_gradient"] = p.radius_from_previous_gradient;
  j["minnorm_tol"] = p.minnorm_tol;
  j["controls"] = {
      {"t1", {{"family", t1_name(c.t1.family)}, {"scale", c.t1.scale}}},
      {"t2", {{"family", t2_name(c.t2.family)}, {"factor", c.t2.factor}}},
      {"g", {{"family", to_string(c.g.family)}, {"alpha", c.g.alpha}}},
  };
  return j;
}

void apply_json(const json& j, Params& p, Controls& c) {
  if (!j.is_object()) throw InvalidConfig({"config must be a JSON object"});
  try {
    read(j, "delta", p.delta);
    read(j, "delta_prime", p.delta_prime);
    read(j, "eps0", p.eps0);
    read(j, "bundle_m", p.bundle_m);
    read(j, "max_iterations", p.max_iterations);
    read(j, "max_gradient_evals", p.max_gradient_evals);
    read(j, "max_bisections", p.max_bisections);
    read(j, "max_inner_steps", p.max_inner_steps);
    read(j, "eps_tol", p.eps_tol);
    read(j, "gap_tol", p.gap_tol);
    read(j, "sigma_growth", p.sigma_growth);
    read(j, "max_doublings", p.max_doublings);
    read(j, "line_search_refinements", p.line_search_refinements);
    read(j, "radius_from_previous_gradient", p.radius_from_previous_gradient);
    read(j, "minnorm_tol", p.minnorm_tol);
    if (j.contains("f_target")) {
      const auto& t = j.at("f_target");
      p.f_target = t.is_null() ? std::nullopt : std::optional<double>(t.get<double>());
    }
    if (j.contains("bundle_policy")) p.bundle_policy = parse_bundle(j.at("bundle_policy").get<std::string>());
    if (j.contains("metric_mode")) p.metric_mode = parse_metric(j.at("metric_mode").get<std::string>());
    if (j.contains("line_search")) {
      const auto s = j.at("line_search").get<std::string>();
      p.line_search = parse_or_throw(parse_line_search(s), "line search", s);
    }
    if (j.contains("variant")) {
      const auto s = j.at("variant").get<std::string>();
      p.variant = parse_or_throw(parse_variant(s), "variant", s);
    }
    if (j.contains("controls")) {
      const json& cj = j.at("controls");
      if (cj.contains("t1")) {
        const json& t = cj.at("t1");
        if (t.contains("family")) {
          const auto f = t.at("family").get<std::string>();
          if (f == "linear") c.t1.family = T1Control::Family::Linear;
          else if (f == "sqrt") c.t1.family = T1Control::Family::Sqrt;
          else throw InvalidConfig({fmt::format("unknown T1 family '{}'", f)});
        }
        read(t, "scale", c.t1.scale);
      }
      if (cj.contains("t2")) {
        const json& t = cj.at("t2");
        if (t.contains("family")) {
          const auto f = t.at("family").get<std::string>();
          if (f == "geometric") c.t2.family = T2Control::Family::Geometric;
          else if (f == "rational") c.t2.family = T2Control::Family::Rational;
          else throw InvalidConfig({fmt::format("unknown T2 family '{}'", f)});
        }
        read(t, "factor", c.t2.factor);
      }
      if (cj.contains("g")) {
        const json& g = cj.at("g");
        if (g.contains("family")) {
          const auto f = g.at("family").get<std::string>();
          c.g.family = parse_or_throw(parse_g_family(f), "G family", f);
        }
        read(g, "alpha", c.g.alpha);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidConfig({std::string("config: ") + e.what()});
  }
}

Resolved resolve(const RunSpec& spec) {
  std::optional<bench::Benchmark> b = bench::make_by_name(spec.problem, spec.n);
  if (!b) throw UnknownProblem("unknown problem: " + spec.problem);

  Resolved r{std::move(*b), {}, {}, {}, {}};
  const auto& bm = r.benchmark;
  if (spec.x0.empty()) {
    r.x0_label = bm.starts.front().label;
    r.x0 = bm.starts.front().x;
  } else if (auto it = std::find_if(bm.starts.begin(), bm.starts.end(),
                                    [&](const bench::NamedPoint& s) { return s.label == spec.x0; });
             it != bm.starts.end()) {
    r.x0_label = it->label;
    r.x0 = it->x;
  } else {
    r.x0 = parse_point(spec.x0, bm.dimension);
    r.x0_label = spec.x0;
  }

  const Overrides& o = spec.overrides;
  r.params = bm.params(spec.variant);
  std::optional<double> eps0 = o.eps0;
  json file;
  if (spec.config_path) {
    std::ifstream in(*spec.config_path);
    if (!in) throw InvalidConfig({"cannot read config file " + *spec.config_path});
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidConfig({std::string("config: ") + e.what()});
    }
    if (!eps0 && file.is_object() && file.contains("eps0") && file["eps0"].is_number()) {
      eps0 = file["eps0"].get<double>();
    }
  }
  r.controls = bm.controls(spec.variant, eps0);
  if (spec.config_path) apply_json(file, r.params, r.controls);
  r.params.variant = spec.variant;

  if (o.eps0) r.params.eps0 = *o.eps0;
  if (o.delta) r.params.delta = *o.delta;
  if (o.delta_prime) r.params.delta_prime = *o.delta_prime;
  if (o.t1_scale) r.controls.t1 = T1Control::linear(*o.t1_scale);
  if (o.t2_factor) r.controls.t2 = T2Control::geometric(*o.t2_factor);
  if (o.g_family) r.controls.g.family = parse_or_throw(parse_g_family(*o.g_family), "G family", *o.g_family);
  if (o.line_search) r.params.line_search = parse_or_throw(parse_line_search(*o.line_search), "line search", *o.line_search);
  if (o.max_grads) r.params.max_gradient_evals = *o.max_grads;
  if (o.f_target) r.params.f_target = *o.f_target;
  if (o.gap_tol) r.params.gap_tol = *o.gap_tol;

  if (spec.variant == Variant::B && !bm.hessian) {
    throw InvalidConfig({"problem " + bm.name + " has no Hessian for variant B"});
  }
  validate_params(r.params, r.controls);
  return r;
}

RunSummary run(const Resolved& r, Trace* trace_out) {
  RunSummary s;
  s.problem = r.benchmark.name;
  s.n = r.benchmark.dimension;
  s.variant = r.params.variant;
  s.x0 = r.x0_label;

  const auto start = std::chrono::steady_clock::now();
  try {
    Trace t = solve(*r.benchmark.oracle, r.x0, r.params, r.controls, r.benchmark.hessian);
    s.iterations = static_cast<std::int64_t>(t.iterations.size());
    s.gradient_evals = t.grad_evals;
    s.value_evals = t.value_evals;
    s.final_f = t.f;
    if (r.benchmark.optimum) s.gap = t.f - r.benchmark.optimum->value;
    s.status = std::string(to_string(t.status));
    s.message = t.message;
    if (trace_out) *trace_out = std::move(t);
  } catch (const Error& e) {
    s.status = "error";
    s.message = e.what();
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

void write_trace_jsonl(const Trace& trace, std::ostream& os) {
  for (const auto& rec : trace.iterations) {
    json j;
    j["k"] = rec.k;
    j["f"] = rec.f;
    j["eps_k"] = rec.eps_k;
    json eps = json::array(), branches = json::array();
    for (const auto& r : rec.radii) {
      eps.push_back(r.eps);
      branches.push_back(to_string(r.kind));
    }
    j["eps_ki"] = std::move(eps);
    j["branches"] = std::move(branches);
    j["sigma"] = rec.sigma ? json(*rec.sigma) : json(nullptr);
    j["grad_evals"] = rec.grad_evals;
    os << j.dump() << '\n';
  }
}

std::string summary_line(const RunSummary& s) {
  return fmt::format("problem={} n={} variant={} x0={} iterations={} gradient_evals={} value_evals={} final_f={:.10g} "
                     "gap={} status={} seconds={:.3f}{}",
                     s.problem, s.n, to_string(s.variant), s.x0, s.iterations, s.gradient_evals, s.value_evals,
                     s.final_f, s.gap ? fmt::format("{:.3g}", *s.gap) : "n/a", s.status, s.seconds,
                     s.message.empty() ? "" : " message=\"" + s.message + "\"");
}

json summary_json(const RunSummary& s) {
  return {{"problem", s.problem},
          {"n", s.n},
          {"variant", to_string(s.variant)},
          {"x0", s.x0},
          {"iterations", s.iterations},
          {"gradient_evals", s.gradient_evals},
          {"value_evals", s.value_evals},
          {"final_f", s.final_f},
          {"gap", s.gap ? json(*s.gap) : json(nullptr)},
          {"status", s.status},
          {"message", s.message},
          {"seconds", s.seconds}};
}

std::vector<RunSpec> suite_specs(const std::vector<std::string>& filter, bool extended) {
  struct Row {
    const char* problem;
    std::optional<int> n;
    const char* x0;
    Variant variant;
  };
  using V = Variant;
  std::vector<Row> rows = {
      {"wolfe", {}, "", V::A},
      {"qmax", 20, "u+", V::A},
      {"qmax", 20, "v", V::A},
      {"qmax", 20, "u+-", V::A},
      {"qmax", 50, "u+", V::A},
      {"rosenbrock", {}, "", V::A},
      {"rosenbrock", {}, "", V::B},
      {"hilbert", 10, "", V::A},
      {"hilbert", 40, "", V::A},
      {"hilbert", 80, "", V::A},
      {"nesterov_smooth", 3, "", V::A},
      {"nesterov_smooth", 3, "", V::B},
      {"nesterov_nonsmooth", 3, "", V::A},
      {"nesterov_nonsmooth", 4, "", V::A},
      {"nesterov_abs", 2, "", V::A},
      {"cheb_exp", 2, "", V::A},
      {"cheb_exp", 4, "", V::A},
      {"cheb_exp", 6, "", V::A},
      {"cheb_exp", 8, "", V::A},
      {"cheb_exp_fn", 2, "", V::A},
      {"cheb_exp_fn", 4, "", V::A},
      {"cheb_exp_fn", 6, "", V::A},
      {"regression", {}, "zero", V::A},
      {"regression", {}, "ones", V::A},
      {"regression", {}, "zero", V::B},
      {"regression", {}, "ones", V::B},
  };
  if (extended) {
    rows.push_back({"nesterov_smooth", 8, "", V::A});
    rows.push_back({"nesterov_nonsmooth", 5, "", V::A});
  }

  std::vector<RunSpec> out;
  for (const auto& r : rows) {
    if (!filter.empty() && std::find(filter.begin(), filter.end(), r.problem) == filter.end()) continue;
    RunSpec s;
    s.problem = r.problem;
    s.n = r.n;
    s.x0 = r.x0;
    s.variant = r.variant;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

RunSummary run_spec(const RunSpec& spec) {
  try {
    return run(resolve(spec));
  } catch (const Error& e) {
    RunSummary s;
    s.problem = spec.problem;
    s.n = spec.n.value_or(0);
    s.variant = spec.variant;
    s.x0 = spec.x0;
    s.status = "error";
    s.message = e.what();
    return s;
  }
}

}  // namespace

std::vector<RunSummary> run_suite(const std::vector<RunSpec>& specs, bool parallel) {
  std::vector<RunSummary> rows(specs.size());
  if (!parallel) {
    for (std::size_t i = 0; i < specs.size(); ++i) rows[i] = run_spec(specs[i]);
    return rows;
  }
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, specs.size()); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < specs.size(); i = next++) rows[i] = run_spec(specs[i]);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

void write_csv(const std::vector<RunSummary>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.problem << ',' << r.n << ',' << to_string(r.variant) << ',' << r.x0 << ',' << r.iterations << ','
       << r.gradient_evals << ',' << r.value_evals << ',' << fmt_double(r.final_f) << ','
       << (r.gap ? fmt_double(*r.gap) : "") << ',' << r.status << ',' << fmt::format("{:.3f}", r.seconds) << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

void add_spec_options(CLI::App& cmd, RunSpec& spec, std::string& variant) {
  Overrides& o = spec.overrides;
  cmd.add_option("--problem", spec.problem, "benchmark name")->required();
  cmd.add_option("--n", spec.n, "problem dimension");
  cmd.add_option("--x0", spec.x0, "start label or comma separated coordinates");
  cmd.add_option("--variant", variant, "A or B")->capture_default_str();
  cmd.add_option("--config", spec.config_path, "JSON file with Params/Controls fields");
  cmd.add_option("--eps0", o.eps0);
  cmd.add_option("--delta", o.delta);
  cmd.add_option("--delta-prime", o.delta_prime);
  cmd.add_option("--t1-scale", o.t1_scale, "T1(x) = scale * x");
  cmd.add_option("--t2-factor", o.t2_factor, "T2(x) = factor * x");
  cmd.add_option("--g-family", o.g_family, "second, first, scaled-second, max-const, min-const, const");
  cmd.add_option("--line-search", o.line_search, "armijo-expand or first-non-decrease");
  cmd.add_option("--max-grads", o.max_grads);
  cmd.add_option("--f-target", o.f_target);
  cmd.add_option("--gap-tol", o.gap_tol);
}

Variant variant_or_throw(const std::string& s) { return parse_or_throw(parse_variant(s), "variant", s); }

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nonsmooth descent benchmarks"};
  app.require_subcommand(1);

  RunSpec run_spec_opts;
  std::string run_variant = "A";
  std::optional<std::string> run_out, run_trace;
  CLI::App* run_cmd = app.add_subcommand("run", "solve one benchmark");
  add_spec_options(*run_cmd, run_spec_opts, run_variant);
  run_cmd->add_option("--out", run_out, "write the summary as JSON");
  run_cmd->add_option("--trace-out", run_trace, "write the trace as JSON lines");

  RunSpec trace_spec;
  std::string trace_variant = "A";
  std::string trace_out;
  CLI::App* trace_cmd = app.add_subcommand("trace", "solve one benchmark and write its trace");
  add_spec_options(*trace_cmd, trace_spec, trace_variant);
  trace_cmd->add_option("--out", trace_out, "JSON lines output")->required();

  std::string suite_out;
  std::vector<std::string> filter;
  bool parallel = false, extended = false;
  CLI::App* suite_cmd = app.add_subcommand("suite", "run every benchmark combination");
  suite_cmd->add_option("--out", suite_out, "CSV output; configs go next to it as JSON")->required();
  suite_cmd->add_option("--filter", filter, "problem names to keep")->delimiter(',');
  suite_cmd->add_flag("--parallel", parallel);
  suite_cmd->add_flag("--extended", extended, "add the larger Nesterov cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (suite_cmd->parsed()) {
      const auto specs = suite_specs(filter, extended);
      const auto rows = run_suite(specs, parallel);
      std::ofstream csv(suite_out);
      if (!csv) {
        err << "cannot write " << suite_out << '\n';
        return 1;
      }
      write_csv(rows, csv);

      json configs = json::array();
      for (std::size_t i = 0; i < specs.size(); ++i) {
        json entry = summary_json(rows[i]);
        entry.erase("seconds");
        try {
          const Resolved r = resolve(specs[i]);
          entry["config"] = to_json(r.params, r.controls);
          entry["x0_point"] = std::vector<double>(r.x0.data(), r.x0.data() + r.x0.size());
        } catch (const Error&) {
          entry["config"] = nullptr;
        }
        configs.push_back(std::move(entry));
      }
      std::ofstream(std::filesystem::path(suite_out).replace_extension(".json")) << configs.dump(2) << '\n';

      bool failed = false;
      for (const auto& r : rows) {
        out << summary_line(r) << '\n';
        failed = failed || r.status == "error";
      }
      return failed ? 1 : 0;
    }

    const bool tracing = trace_cmd->parsed();
    RunSpec spec = tracing ? trace_spec : run_spec_opts;
    spec.variant = variant_or_throw(tracing ? trace_variant : run_variant);
    const Resolved r = resolve(spec);
    Trace trace;
    const RunSummary s = run(r, &trace);
    out << summary_line(s) << '\n';
    if (s.status == "error") {
      err << s.message << '\n';
      return 1;
    }
    const std::optional<std::string> trace_path = tracing ? std::optional<std::string>(trace_out) : run_trace;
    if (trace_path) {
      std::ofstream f(*trace_path);
      if (!f) {
        err << "cannot write " << *trace_path << '\n';
        return 1;
      }
      write_trace_jsonl(trace, f);
    }
    if (!tracing && run_out) {
      std::ofstream f(*run_out);
      f << summary_json(s).dump(2) << '\n';
      f << std::flush;
      if (!f) {
        err << "cannot write " << *run_out << '\n';
        return 1;
      }
    }
    return 0;
  } catch (const UnknownProblem& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
}

}  // namespace nsd::cli
