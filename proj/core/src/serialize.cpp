#include "spectring/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "spectring/error.hpp"

namespace spectring {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json to_json(const RateField& rates) {
  return nlohmann::json{{"n", rates.n},
                        {"step", rates.step},
                        {"left", rates.left},
                        {"right", rates.right}};
}

RateField rate_field_from_json(const nlohmann::json& j) {
  try {
    return RateField(j.at("n").get<std::size_t>(),
                     j.value("step", 1.0),
                     j.at("left").get<std::vector<double>>(),
                     j.at("right").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed rate field JSON: ") +
                          e.what());
  }
}

nlohmann::json to_json(const KreinString& s) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : s.atoms())
    atoms.push_back({a.position, a.weight});
  return nlohmann::json{
      {"left", s.left()}, {"right", s.right()}, {"atoms", atoms}};
}

KreinString string_from_json(const nlohmann::json& j) {
  try {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back(Atom{a.at(0).get<double>(), a.at(1).get<double>()});
    return KreinString(j.at("left").get<double>(), j.at("right").get<double>(),
                       std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed string JSON: ") + e.what());
  }
}

void write_csv(std::ostream& os, const KreinString& s) {
  os << "pos,weight\n";
  for (const Atom& a : s.atoms())
    os << format_double(a.position) << ',' << format_double(a.weight) << '\n';
}

nlohmann::json to_json(const Spectrum& spec) {
  double residual_max = 0.0;
  for (double r : spec.residuals)
    residual_max = std::max(residual_max, r);
  return nlohmann::json{
      {"bc", spec.bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann"},
      {"eigenvalues", spec.eigenvalues},
      {"residual_max", residual_max}};
}

void write_csv(std::ostream& os, const Spectrum& spec) {
  os << "k,lambda,residual\n";
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k)
    os << (k + 1) << ',' << format_double(spec.eigenvalues[k]) << ','
       << format_double(spec.residuals[k]) << '\n';
}

nlohmann::json to_json(const CountingCurve& curve) {
  return nlohmann::json{{"x", curve.x_grid},
                        {"mean", curve.mean},
                        {"stderr", curve.stderr_},
                        {"samples", curve.samples},
                        {"resampled_paths", curve.resampled_paths},
                        {"capped_paths", curve.capped_paths},
                        {"slope", curve.slope},
                        {"slope_ci", curve.slope_halfwidth},
                        {"expected_slope", curve.expected_slope}};
}

void write_csv(std::ostream& os, const CountingCurve& curve) {
  os << "x,mean,stderr\n";
  for (std::size_t g = 0; g < curve.x_grid.size(); ++g)
    os << format_double(curve.x_grid[g]) << ',' << format_double(curve.mean[g])
       << ',' << format_double(curve.stderr_[g]) << '\n';
}

nlohmann::json to_json(const BracketReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BracketRow& r : report.rows) {
    rows.push_back({{"x", r.x},
                    {"N_D", r.whole_dirichlet},
                    {"N_N", r.whole_neumann},
                    {"cell_D", r.cell_dirichlet},
                    {"cell_N", r.cell_neumann},
                    {"ok_dn_gap", r.ok_dn_gap},
                    {"ok_superadditive", r.ok_superadditive},
                    {"ok_subadditive", r.ok_subadditive},
                    {"ok_crude_bound", r.ok_crude_bound}});
  }
  return nlohmann::json{{"cuts", report.cuts},
                        {"rows", rows},
                        {"violations", report.violations}};
}

void write_csv(std::ostream& os, const BracketReport& report) {
  os << "x,N_D,N_N,cell_D_sum,cell_N_sum,ok_dn_gap,ok_superadditive,"
        "ok_subadditive,ok_crude_bound\n";
  for (const BracketRow& r : report.rows)
    os << format_double(r.x) << ',' << r.whole_dirichlet << ','
       << r.whole_neumann << ',' << r.cell_dirichlet_sum() << ','
       << r.cell_neumann_sum() << ',' << (r.ok_dn_gap ? 1 : 0) << ','
       << (r.ok_superadditive ? 1 : 0) << ',' << (r.ok_subadditive ? 1 : 0)
       << ',' << (r.ok_crude_bound ? 1 : 0) << '\n';
}

} // namespace spectring
