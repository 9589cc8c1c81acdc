#include "spectring/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "spectring/bracketing.hpp"
#include "spectring/disorder.hpp"
#include "spectring/eigensolver.hpp"
#include "spectring/error.hpp"
#include "spectring/serialize.hpp"
#include "spectring/shooting.hpp"
#include "spectring/string.hpp"
#include "spectring/subordinator.hpp"
#include "spectring/walk.hpp"

namespace spectring {

namespace {

using nlohmann::json;

const std::set<std::string> kSubcommands = {"eig", "converge", "count",
                                            "anneal", "psi"};

const std::set<std::string> kCommonKeys = {"seed", "out", "format", "workers"};

std::set<std::string> allowed_keys(const std::string& sub) {
  std::set<std::string> keys = kCommonKeys;
  auto add = [&](std::initializer_list<const char*> more) {
    for (const char* k : more)
      keys.insert(k);
  };
  if (sub == "eig")
    add({"model", "n", "k", "bc", "alpha", "epsilon", "mode", "string",
         "rates", "gauge"});
  else if (sub == "converge")
    add({"model", "k", "n_list", "alpha", "epsilon", "mode"});
  else if (sub == "count")
    add({"model", "n", "alpha", "epsilon", "mode", "string", "rates", "gauge",
         "x_grid", "cuts"});
  else if (sub == "anneal")
    add({"model", "alpha", "x_grid", "samples", "epsilon", "mode",
         "n_atoms_cap"});
  else if (sub == "psi")
    add({"model", "n", "alpha", "epsilon", "mode", "string", "rates", "gauge",
         "lambda_grid"});
  return keys;
}

bool is_model_subcommand_string(const std::string& model) {
  return model == "ssrw" || model == "trap" || model == "barrier" ||
         model == "explicit-string" || model == "explicit-rates";
}

void push_error(std::vector<Diagnostic>& out, const std::string& field,
                const std::string& message) {
  out.push_back({Diagnostic::Severity::error, field, message});
}

void push_warning(std::vector<Diagnostic>& out, const std::string& field,
                  const std::string& message) {
  out.push_back({Diagnostic::Severity::warning, field, message});
}

// Grid spec: explicit array or {"min","max","points","scale"}.
std::vector<double> parse_grid(const json& spec) {
  std::vector<double> grid;
  if (spec.is_array()) {
    grid = spec.get<std::vector<double>>();
  } else if (spec.is_object()) {
    const double lo = spec.at("min").get<double>();
    const double hi = spec.at("max").get<double>();
    const std::size_t points = spec.at("points").get<std::size_t>();
    const std::string scale = spec.value("scale", "log");
    if (points < 2 || !(hi > lo))
      throw ValidationError("grid spec needs points >= 2 and max > min");
    for (std::size_t i = 0; i < points; ++i) {
      const double t =
          static_cast<double>(i) / static_cast<double>(points - 1);
      grid.push_back(scale == "log" ? lo * std::pow(hi / lo, t)
                                    : lo + t * (hi - lo));
    }
  } else {
    throw ValidationError("grid must be an array or a {min,max,points} spec");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ValidationError("grid must be strictly increasing");
  return grid;
}

json load_json_value(const json& v) {
  if (v.is_object())
    return v;
  if (v.is_string()) {
    std::ifstream in(v.get<std::string>());
    if (!in)
      throw ValidationError("cannot open file " + v.get<std::string>());
    json j;
    in >> j;
    return j;
  }
  throw ValidationError("expected an inline object or a file path");
}

CompensationMode parse_mode(const json& body) {
  const std::string m = body.value("mode", "truncate");
  if (m == "truncate")
    return CompensationMode::truncate;
  if (m == "grid-compensate")
    return CompensationMode::grid_compensate;
  throw ValidationError("mode must be truncate or grid-compensate");
}

std::uint64_t seed_of(const json& body) {
  return body.value("seed", static_cast<std::uint64_t>(default_seed));
}

// Build the working string from the model fields of a config body.
KreinString string_from_config(const json& body) {
  const std::string model = body.value("model", "explicit-string");
  if (model == "ssrw") {
    const std::size_t n = body.at("n").get<std::size_t>();
    return build_string(decompose_rates(RateField::ssrw(n), 1.0));
  }
  if (model == "trap" || model == "barrier") {
    const double alpha = body.at("alpha").get<double>();
    const double eps = body.value("epsilon", 1e-6);
    const std::uint64_t seed = seed_of(body);
    const std::size_t n = body.value("n", std::size_t{0});
    const double horizon =
        n >= 2 ? 1.0 + 1.0 / static_cast<double>(n) : 1.0;
    const SubordinatorPath path =
        sample_subordinator(alpha, horizon, eps, seed, parse_mode(body));
    if (model == "trap")
      return n >= 2 ? trap_string(path, n) : limit_trap_string(path);
    return n >= 2 ? barrier_string(path, n) : limit_barrier_string(path);
  }
  if (model == "explicit-string")
    return string_from_json(load_json_value(body.at("string")));
  if (model == "explicit-rates") {
    const RateField rates = rate_field_from_json(load_json_value(body.at("rates")));
    return build_string(decompose_rates(rates, body.value("gauge", 1.0)));
  }
  throw ValidationError("unknown model " + model);
}

struct OutputSink {
  std::ostream* stream = nullptr;
  std::ofstream file;
  std::string path;

  explicit OutputSink(const json& body, std::ostream& fallback) {
    if (body.contains("out")) {
      path = body.at("out").get<std::string>();
      file.open(path, std::ios::binary | std::ios::trunc);
      if (!file)
        throw ValidationError("cannot open output file " + path);
      stream = &file;
    } else {
      stream = &fallback;
    }
  }

  // Wall-clock metadata lives in a sidecar so the main artifact is
  // byte-identical across re-runs.
  void write_sidecar() const {
    if (path.empty())
      return;
    std::ofstream side(path + ".run.json", std::ios::trunc);
    if (!side)
      return;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    side << json{{"timestamp_unix_ms",
                  std::chrono::duration_cast<std::chrono::milliseconds>(now)
                      .count()}}
                .dump()
         << '\n';
  }
};

void write_meta_header(std::ostream& os, const ExperimentConfig& cfg) {
  os << "# spectring-version: " << version_string << '\n';
  os << "# config-hash: " << config_hash(cfg) << '\n';
  os << "# seed: " << seed_of(cfg.body) << '\n';
}

json meta_block(const ExperimentConfig& cfg) {
  return json{{"version", version_string},
              {"config_hash", config_hash(cfg)},
              {"seed", seed_of(cfg.body)}};
}

void emit(const ExperimentConfig& cfg, std::ostream& fallback,
          const std::function<void(std::ostream&)>& csv_body,
          const json& json_body) {
  OutputSink sink(cfg.body, fallback);
  const std::string format = cfg.body.value("format", "csv");
  if (format == "csv") {
    write_meta_header(*sink.stream, cfg);
    csv_body(*sink.stream);
  } else {
    *sink.stream << json{{"meta", meta_block(cfg)}, {"data", json_body}}.dump(2)
                 << '\n';
  }
  sink.stream->flush();
  sink.write_sidecar();
}

BoundaryCondition parse_bc(const json& body) {
  const std::string bc = body.value("bc", "dirichlet");
  if (bc == "dirichlet")
    return BoundaryCondition::dirichlet;
  if (bc == "neumann")
    return BoundaryCondition::neumann;
  throw ValidationError("bc must be dirichlet or neumann");
}

void run_eig(const ExperimentConfig& cfg, std::ostream& out) {
  const KreinString s = string_from_config(cfg.body);
  const std::size_t k = cfg.body.value("k", std::size_t{0});
  const Spectrum spec =
      eigenvalues(s, parse_bc(cfg.body), k == 0 ? all_eigenvalues : k);
  emit(cfg, out, [&](std::ostream& os) { write_csv(os, spec); },
       to_json(spec));
}

void run_converge(const ExperimentConfig& cfg, std::ostream& out) {
  const json& body = cfg.body;
  const std::string model = body.value("model", "ssrw");
  const std::size_t k = body.value("k", std::size_t{1});
  const std::vector<std::size_t> n_list =
      body.at("n_list").get<std::vector<std::size_t>>();

  struct Row {
    std::size_t n, k;
    double lambda, scaled, reference;
  };
  std::vector<Row> rows;

  if (model == "ssrw") {
    for (std::size_t n : n_list) {
      const KreinString s =
          build_string(decompose_rates(RateField::ssrw(n), 1.0));
      const Spectrum spec = eigenvalues(s, BoundaryCondition::dirichlet, k);
      for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        const double lam = spec.eigenvalues[i];
        const double nn = static_cast<double>(n);
        const double pk = M_PI * static_cast<double>(i + 1);
        rows.push_back(Row{n, i + 1, lam, nn * nn * lam, pk * pk / 2.0});
      }
    }
  } else if (model == "trap" || model == "barrier") {
    const double alpha = body.at("alpha").get<double>();
    const double eps = body.value("epsilon", 1e-6);
    const std::uint64_t seed = seed_of(body);
    std::size_t n_max = 2;
    for (std::size_t n : n_list)
      n_max = std::max(n_max, n);
    const double horizon = 1.0 + 1.0 / 2.0; // covers every n >= 2
    const SubordinatorPath path =
        sample_subordinator(alpha, horizon, eps, seed, parse_mode(body));
    const KreinString limit = model == "trap" ? limit_trap_string(path)
                                              : limit_barrier_string(path);
    const Spectrum lim_spec =
        eigenvalues(limit, BoundaryCondition::dirichlet, k);
    for (std::size_t n : n_list) {
      const KreinString s =
          model == "trap" ? trap_string(path, n) : barrier_string(path, n);
      const Spectrum spec = eigenvalues(s, BoundaryCondition::dirichlet, k);
      for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        const double lam = spec.eigenvalues[i];
        const double ref = i < lim_spec.eigenvalues.size()
                               ? lim_spec.eigenvalues[i]
                               : 0.0;
        rows.push_back(Row{n, i + 1, lam, std::fabs(lam - ref), ref});
      }
    }
  } else {
    throw ValidationError("converge supports models ssrw, trap, barrier");
  }

  const bool ssrw = model == "ssrw";
  auto csv = [&](std::ostream& os) {
    os << (ssrw ? "n,k,lambda,n2_lambda,limit\n" : "n,k,lambda,abs_err,limit\n");
    for (const Row& r : rows)
      os << r.n << ',' << r.k << ',' << format_double(r.lambda) << ','
         << format_double(r.scaled) << ',' << format_double(r.reference)
         << '\n';
  };
  json jrows = json::array();
  for (const Row& r : rows)
    jrows.push_back({{"n", r.n},
                     {"k", r.k},
                     {"lambda", r.lambda},
                     {ssrw ? "n2_lambda" : "abs_err", r.scaled},
                     {"limit", r.reference}});
  emit(cfg, out, csv, jrows);
}

void run_count(const ExperimentConfig& cfg, std::ostream& out) {
  const KreinString s = string_from_config(cfg.body);
  const std::vector<double> x_grid = parse_grid(cfg.body.at("x_grid"));
  std::vector<double> cuts;
  if (cfg.body.contains("cuts"))
    cuts = cfg.body.at("cuts").get<std::vector<double>>();
  const BracketReport report = bracket_report(s, cuts, x_grid);
  emit(cfg, out, [&](std::ostream& os) { write_csv(os, report); },
       to_json(report));
}

void run_anneal(const ExperimentConfig& cfg, std::ostream& out) {
  const json& body = cfg.body;
  AnnealedConfig acfg;
  acfg.alpha = body.at("alpha").get<double>();
  acfg.x_grid = parse_grid(body.at("x_grid"));
  acfg.samples = body.value("samples", std::size_t{200});
  acfg.epsilon = body.value("epsilon", 1e-5);
  acfg.seed = seed_of(body);
  acfg.mode = parse_mode(body);
  acfg.n_atoms_cap = body.value("n_atoms_cap", std::size_t{100000});
  acfg.workers = body.value("workers", std::size_t{1});
  const std::string model = body.value("model", "trap");
  if (model == "trap")
    acfg.model = DisorderModel::trap;
  else if (model == "barrier")
    acfg.model = DisorderModel::barrier;
  else
    throw ValidationError("anneal model must be trap or barrier");

  const CountingCurve curve = annealed_counting(acfg);
  const json summary = {{"slope", curve.slope},
                        {"slope_ci", curve.slope_halfwidth},
                        {"expected_slope", curve.expected_slope}};
  emit(cfg, out,
       [&](std::ostream& os) {
         write_csv(os, curve);
         os << "# summary: " << summary.dump() << '\n';
       },
       to_json(curve));
}

void run_psi(const ExperimentConfig& cfg, std::ostream& out) {
  const KreinString s = string_from_config(cfg.body);
  const std::vector<double> grid = parse_grid(cfg.body.at("lambda_grid"));
  auto csv = [&](std::ostream& os) {
    os << "lambda,psi_ell\n";
    for (double lam : grid)
      os << format_double(lam) << ','
         << format_double(shoot_psi(s, lam).value) << '\n';
  };
  json rows = json::array();
  for (double lam : grid)
    rows.push_back({{"lambda", lam}, {"psi_ell", shoot_psi(s, lam).value}});
  emit(cfg, out, csv, rows);
}

} // namespace

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string canon = cfg.subcommand + "\n" + cfg.body.dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void validate_impl(const ExperimentConfig& cfg, std::vector<Diagnostic>& out);

} // namespace

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  try {
    validate_impl(cfg, out);
  } catch (const nlohmann::json::exception& e) {
    push_error(out, "config", std::string("malformed config value: ") +
                                  e.what());
  }
  return out;
}

namespace {

void validate_impl(const ExperimentConfig& cfg, std::vector<Diagnostic>& out) {
  if (!kSubcommands.count(cfg.subcommand)) {
    push_error(out, "subcommand", "unknown subcommand " + cfg.subcommand);
    return;
  }
  if (!cfg.body.is_object()) {
    push_error(out, "config", "config body must be a JSON object");
    return;
  }

  const std::set<std::string> keys = allowed_keys(cfg.subcommand);
  for (const auto& item : cfg.body.items())
    if (!keys.count(item.key()))
      push_error(out, item.key(), "unknown key for subcommand " +
                                      cfg.subcommand);

  const json& body = cfg.body;
  if (!body.contains("seed"))
    push_warning(out, "seed",
                 "no seed given; using the default seed " +
                     std::to_string(default_seed));

  if (body.contains("format")) {
    const std::string f = body.at("format").get<std::string>();
    if (f != "csv" && f != "json")
      push_error(out, "format", "format must be csv or json");
  }
  if (body.contains("workers") &&
      body.at("workers").get<long long>() < 1)
    push_error(out, "workers", "workers must be >= 1");

  if (body.contains("alpha")) {
    const double a = body.at("alpha").get<double>();
    if (!(a > 0.0 && a < 1.0))
      push_error(out, "alpha", "alpha must lie in (0, 1), got " +
                                   format_double(a));
  }
  if (body.contains("epsilon") && !(body.at("epsilon").get<double>() > 0.0))
    push_error(out, "epsilon", "epsilon must be positive");
  if (body.contains("n") && body.at("n").get<long long>() < 2)
    push_error(out, "n", "n must be >= 2");
  if (body.contains("k") && body.at("k").get<long long>() < 1)
    push_error(out, "k", "k must be >= 1");
  if (body.contains("samples") && body.at("samples").get<long long>() < 30)
    push_error(out, "samples", "samples must be >= 30");
  if (body.contains("mode")) {
    const std::string m = body.at("mode").get<std::string>();
    if (m != "truncate" && m != "grid-compensate")
      push_error(out, "mode", "mode must be truncate or grid-compensate");
  }
  if (body.contains("bc")) {
    const std::string b = body.at("bc").get<std::string>();
    if (b != "dirichlet" && b != "neumann")
      push_error(out, "bc", "bc must be dirichlet or neumann");
  }
  if (body.contains("model")) {
    const std::string m = body.at("model").get<std::string>();
    if (!is_model_subcommand_string(m))
      push_error(out, "model", "unknown model " + m);
    if ((m == "trap" || m == "barrier") && cfg.subcommand != "anneal" &&
        !body.contains("alpha"))
      push_error(out, "alpha", "disorder models need alpha");
    if (m == "ssrw" && cfg.subcommand != "converge" && !body.contains("n"))
      push_error(out, "n", "model ssrw needs n");
    if (m == "explicit-string" && !body.contains("string"))
      push_error(out, "string", "model explicit-string needs a string");
    if (m == "explicit-rates" && !body.contains("rates"))
      push_error(out, "rates", "model explicit-rates needs rates");
  }

  if (cfg.subcommand == "converge" && !body.contains("n_list"))
    push_error(out, "n_list", "converge needs n_list");
  if (cfg.subcommand == "anneal") {
    if (!body.contains("alpha"))
      push_error(out, "alpha", "anneal needs alpha");
    if (!body.contains("x_grid"))
      push_error(out, "x_grid", "anneal needs x_grid");
  }
  if (cfg.subcommand == "count" && !body.contains("x_grid"))
    push_error(out, "x_grid", "count needs x_grid");
  if (cfg.subcommand == "psi" && !body.contains("lambda_grid"))
    push_error(out, "lambda_grid", "psi needs lambda_grid");

  // Grid specs must parse.
  for (const char* key : {"x_grid", "lambda_grid"}) {
    if (body.contains(key)) {
      try {
        parse_grid(body.at(key));
      } catch (const Error& e) {
        push_error(out, key, e.what());
      } catch (const nlohmann::json::exception& e) {
        push_error(out, key, e.what());
      }
    }
  }
}

} // namespace

nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& ds) {
  json arr = json::array();
  for (const Diagnostic& d : ds)
    arr.push_back(
        {{"severity",
          d.severity == Diagnostic::Severity::error ? "error" : "warning"},
         {"field", d.field},
         {"message", d.message}});
  return arr;
}

int run(const ExperimentConfig& cfg, std::ostream& out_stream,
        std::ostream& err_stream) {
  const std::vector<Diagnostic> diags = validate(cfg);
  bool blocked = false;
  for (const Diagnostic& d : diags)
    blocked = blocked || d.severity == Diagnostic::Severity::error;
  if (blocked) {
    err_stream << json{{"error", "validation"},
                       {"diagnostics", diagnostics_to_json(diags)}}
                      .dump()
               << '\n';
    return 2;
  }

  try {
    if (cfg.subcommand == "eig")
      run_eig(cfg, out_stream);
    else if (cfg.subcommand == "converge")
      run_converge(cfg, out_stream);
    else if (cfg.subcommand == "count")
      run_count(cfg, out_stream);
    else if (cfg.subcommand == "anneal")
      run_anneal(cfg, out_stream);
    else if (cfg.subcommand == "psi")
      run_psi(cfg, out_stream);
    return 0;
  } catch (const ValidationError& e) {
    err_stream << json{{"error", "validation"}, {"message", e.what()}}.dump()
               << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err_stream << json{{"error", "validation"}, {"message", e.what()}}.dump()
               << '\n';
    return 2;
  } catch (const Error& e) {
    err_stream << json{{"error", "numeric"}, {"message", e.what()}}.dump()
               << '\n';
    return 3;
  }
}

} // namespace spectring
