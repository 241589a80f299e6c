#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pbpois/bounds.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/harness.hpp"
#include "pbpois/log_pmf.hpp"

namespace pbpois {

/// First line of every CSV file written here.
inline constexpr std::string_view kCsvSchemaLine = "# schema=1";

/// %.17g, with nan / inf / -inf spelled out.
std::string format_number(double x);
/// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

/// tv, kl, chi2, renyi_<a>..., tsallis_<a>..., vajda_<a>... (a >= 1), h_w, h_z,
/// h2_z, entropy_diff, kl_negative_part, kl_quadratic_lower,
/// truncation_tail_budget, support_end, precision, escalated
std::vector<std::string> divergence_columns(const std::vector<double>& alphas);
std::vector<std::string> divergence_values(const DivergenceReport& r, const std::vector<double>& alphas);

void write_pmf_csv(std::ostream& out, const LogPmf& w, const LogPmf& v);
/// lambda, n, then divergence_columns.
void write_divergence_csv(std::ostream& out, const DivergenceReport& r, const std::vector<double>& alphas);
/// name, side, applicable, lhs, rhs, margin, holds, precision, note
void write_checks_csv(std::ostream& out, const std::vector<BoundCheckResult>& checks);
void write_ratios_csv(std::ostream& out, const std::vector<RatioRecord>& ratios);

/// One row per record: index, family, kind, seed, n, lambda, lambda2, lambda3,
/// F, Q, max_p, divergence_columns, applicable, violations, violated, error_kind, error.
/// Failed records keep their row with empty numeric fields.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const std::vector<double>& alphas);
/// Long form: index, family, then the check columns, one row per check.
void write_sweep_checks_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_sweep_ratios_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_constants_csv(std::ostream& out, const std::vector<EmpiricalConstantReport>& constants);
void write_limit_csv(std::ostream& out, const std::vector<LimitRow>& rows);
void write_degenerate_csv(std::ostream& out, const std::vector<DegenerateRow>& rows);
void write_degenerate_summary_csv(std::ostream& out, const DegenerateSummary& s);
void write_structure_csv(std::ostream& out, const std::vector<StructureCheck>& rows);
void write_saddle_csv(std::ostream& out, const std::vector<SaddleSuiteRow>& rows);
void write_catalog_csv(std::ostream& out, const std::vector<BoundSpec>& catalog);

// JSON mirrors of the same structures. Non-finite numbers become null.
nlohmann::ordered_json to_json(const LogPmf& w, const LogPmf& v);
nlohmann::ordered_json to_json(const DivergenceReport& r);
nlohmann::ordered_json to_json(const BoundCheckResult& c);
nlohmann::ordered_json to_json(const RatioRecord& r);
nlohmann::ordered_json to_json(const SweepRecord& rec);
nlohmann::ordered_json to_json(const EmpiricalConstantReport& e);
nlohmann::ordered_json to_json(const LimitRow& row);
nlohmann::ordered_json to_json(const DegenerateRow& row);
nlohmann::ordered_json to_json(const DegenerateSummary& s);
nlohmann::ordered_json to_json(const StructureCheck& c);
nlohmann::ordered_json to_json(const SaddleSuiteRow& row);
nlohmann::ordered_json to_json(const BoundSpec& spec);

std::string to_string(RecordError e);

}  // namespace pbpois
