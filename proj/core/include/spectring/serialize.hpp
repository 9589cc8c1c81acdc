#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "spectring/bracketing.hpp"
#include "spectring/disorder.hpp"
#include "spectring/eigensolver.hpp"
#include "spectring/string.hpp"
#include "spectring/walk.hpp"

namespace spectring {

// Wire formats. Doubles are printed with %.17g so that a re-run
// reproduces output files byte for byte.

std::string format_double(double v);

// {"n":, "step":, "left": [...], "right": [...]}
// left[i] = c(k, k-1) for k = i+1, right[i] = c(i, i+1).
nlohmann::json to_json(const RateField& rates);
RateField rate_field_from_json(const nlohmann::json& j);

// {"left":, "right":, "atoms": [[pos, weight], ...]}
nlohmann::json to_json(const KreinString& s);
KreinString string_from_json(const nlohmann::json& j);
void write_csv(std::ostream& os, const KreinString& s); // pos,weight

// {"bc":, "eigenvalues": [...], "residual_max": }
nlohmann::json to_json(const Spectrum& spec);
void write_csv(std::ostream& os, const Spectrum& spec); // k,lambda,residual

nlohmann::json to_json(const CountingCurve& curve);
void write_csv(std::ostream& os, const CountingCurve& curve); // x,mean,stderr

nlohmann::json to_json(const BracketReport& report);
// x,N_D,N_N,cell_D_sum,cell_N_sum,ok_dn,ok_super,ok_sub,ok_crude
void write_csv(std::ostream& os, const BracketReport& report);

} // namespace spectring
