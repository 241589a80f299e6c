#include "pbpois/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pbpois {

namespace {

using Json = nlohmann::ordered_json;

std::string alpha_suffix(double alpha) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, alpha);
  (void)ec;
  return std::string(buf, end);
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string flag(bool b) { return b ? "true" : "false"; }

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& columns) {
  out << kCsvSchemaLine << '\n';
  write_row(out, columns);
}

const std::vector<std::string>& check_columns() {
  static const std::vector<std::string> cols = {"name",   "side",  "applicable", "lhs",  "rhs",
                                                "margin", "holds", "precision",  "note"};
  return cols;
}

std::vector<std::string> check_values(const BoundCheckResult& c) {
  const bool a = c.applicable;
  return {c.name,
          to_string(c.side),
          flag(a),
          a ? format_number(c.lhs) : "",
          a ? format_number(c.rhs) : "",
          a ? format_number(c.margin) : "",
          a ? flag(c.holds) : "",
          to_string(c.precision),
          c.note};
}

std::vector<std::string> ratio_values(const RatioRecord& r) {
  return {r.name, flag(r.applicable), r.applicable ? format_number(r.value) : "", r.note};
}

Json alpha_map(const std::map<double, double>& m) {
  Json out = Json::object();
  for (const auto& [a, v] : m) out[alpha_suffix(a)] = number(v);
  return out;
}

std::string join_violations(const BoundEvaluation& b) {
  std::string out;
  for (const BoundCheckResult& c : b.checks) {
    if (!c.violated()) continue;
    if (!out.empty()) out += ';';
    out += c.name;
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_string(RecordError e) {
  switch (e) {
    case RecordError::none: return "";
    case RecordError::input: return "input";
    case RecordError::escalation: return "escalation";
    case RecordError::other: return "other";
  }
  return "?";
}

std::vector<std::string> divergence_columns(const std::vector<double>& alphas) {
  std::vector<std::string> cols = {"tv", "kl", "chi2"};
  for (double a : alphas) cols.push_back("renyi_" + alpha_suffix(a));
  for (double a : alphas) cols.push_back("tsallis_" + alpha_suffix(a));
  for (double a : alphas) {
    if (a >= 1.0) cols.push_back("vajda_" + alpha_suffix(a));
  }
  for (const char* c : {"h_w", "h_z", "h2_z", "entropy_diff", "kl_negative_part", "kl_quadratic_lower",
                        "truncation_tail_budget", "support_end", "precision", "escalated"}) {
    cols.emplace_back(c);
  }
  return cols;
}

std::vector<std::string> divergence_values(const DivergenceReport& r, const std::vector<double>& alphas) {
  std::vector<std::string> v = {format_number(r.tv), format_number(r.kl), format_number(r.chi2)};
  for (double a : alphas) v.push_back(format_number(r.renyi_at(a)));
  for (double a : alphas) v.push_back(format_number(r.tsallis_at(a)));
  for (double a : alphas) {
    if (a >= 1.0) v.push_back(format_number(r.vajda_at(a)));
  }
  for (double x : {r.h_w, r.h_z, r.h2_z, r.entropy_diff, r.kl_negative_part, r.kl_quadratic_lower,
                   r.truncation_tail_budget}) {
    v.push_back(format_number(x));
  }
  v.push_back(std::to_string(r.support_end));
  v.push_back(to_string(r.precision));
  v.push_back(flag(r.escalated));
  return v;
}

void write_pmf_csv(std::ostream& out, const LogPmf& w, const LogPmf& v) {
  write_header(out, {"k", "w", "v", "diff", "log_w", "log_v"});
  const std::size_t len = std::max(w.size(), v.size());
  const double neg_inf = -INFINITY;
  for (std::size_t k = 0; k < len; ++k) {
    const double lw = k < w.size() ? w.log_mass[k] : neg_inf;
    const double lv = k < v.size() ? v.log_mass[k] : neg_inf;
    const double wk = std::exp(lw), vk = std::exp(lv);
    write_row(out, {std::to_string(k), format_number(wk), format_number(vk), format_number(wk - vk),
                    format_number(lw), format_number(lv)});
  }
}

void write_divergence_csv(std::ostream& out, const DivergenceReport& r, const std::vector<double>& alphas) {
  std::vector<std::string> cols = {"lambda", "n"};
  const auto dc = divergence_columns(alphas);
  cols.insert(cols.end(), dc.begin(), dc.end());
  write_header(out, cols);
  std::vector<std::string> vals = {format_number(r.lambda), std::to_string(r.n)};
  const auto dv = divergence_values(r, alphas);
  vals.insert(vals.end(), dv.begin(), dv.end());
  write_row(out, vals);
}

void write_checks_csv(std::ostream& out, const std::vector<BoundCheckResult>& checks) {
  write_header(out, check_columns());
  for (const BoundCheckResult& c : checks) write_row(out, check_values(c));
}

void write_ratios_csv(std::ostream& out, const std::vector<RatioRecord>& ratios) {
  write_header(out, {"name", "applicable", "value", "note"});
  for (const RatioRecord& r : ratios) write_row(out, ratio_values(r));
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const std::vector<double>& alphas) {
  std::vector<std::string> cols = {"index", "family", "kind", "seed", "n",    "lambda",
                                   "lambda2", "lambda3", "F",  "Q",    "max_p"};
  const auto dc = divergence_columns(alphas);
  cols.insert(cols.end(), dc.begin(), dc.end());
  for (const char* c : {"applicable", "violations", "violated", "error_kind", "error"}) cols.emplace_back(c);
  write_header(out, cols);
  for (const SweepRecord& rec : records) {
    std::vector<std::string> v = {std::to_string(rec.index), rec.family.id(), to_string(rec.family.kind),
                                  std::to_string(rec.family.seed)};
    if (rec.ok()) {
      const Moments& m = rec.moments;
      v.push_back(std::to_string(rec.n));
      for (double x : {m.lambda, m.lambda2, m.lambda3, m.big_f, m.q, rec.max_p}) v.push_back(format_number(x));
      const auto dv = divergence_values(rec.report, alphas);
      v.insert(v.end(), dv.begin(), dv.end());
      v.push_back(std::to_string(rec.bounds.applicable_count()));
      v.push_back(std::to_string(rec.bounds.violation_count()));
      v.push_back(join_violations(rec.bounds));
    } else {
      v.resize(cols.size() - 2);
    }
    v.push_back(to_string(rec.error_kind));
    v.push_back(rec.error);
    write_row(out, v);
  }
}

void write_sweep_checks_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  std::vector<std::string> cols = {"index", "family"};
  cols.insert(cols.end(), check_columns().begin(), check_columns().end());
  write_header(out, cols);
  for (const SweepRecord& rec : records) {
    for (const BoundCheckResult& c : rec.bounds.checks) {
      std::vector<std::string> v = {std::to_string(rec.index), rec.family.id()};
      const auto cv = check_values(c);
      v.insert(v.end(), cv.begin(), cv.end());
      write_row(out, v);
    }
  }
}

void write_sweep_ratios_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  write_header(out, {"index", "family", "name", "applicable", "value", "note"});
  for (const SweepRecord& rec : records) {
    for (const RatioRecord& r : rec.bounds.ratios) {
      std::vector<std::string> v = {std::to_string(rec.index), rec.family.id()};
      const auto rv = ratio_values(r);
      v.insert(v.end(), rv.begin(), rv.end());
      write_row(out, v);
    }
  }
}

void write_constants_csv(std::ostream& out, const std::vector<EmpiricalConstantReport>& constants) {
  write_header(out, {"name", "min", "argmin", "max", "argmax", "count"});
  for (const auto& e : constants) {
    write_row(out, {e.name, format_number(e.min), e.argmin, format_number(e.max), e.argmax, std::to_string(e.count)});
  }
}

void write_limit_csv(std::ostream& out, const std::vector<LimitRow>& rows) {
  write_header(out, {"lambda", "n", "lambda2", "regime", "in_regime", "ratio", "holds"});
  for (const LimitRow& r : rows) {
    write_row(out, {format_number(r.lambda), std::to_string(r.n), format_number(r.lambda2), format_number(r.regime),
                    flag(r.in_regime), format_number(r.ratio), flag(r.holds)});
  }
}

void write_degenerate_csv(std::ostream& out, const std::vector<DegenerateRow>& rows) {
  write_header(out, {"n", "kl", "chi2", "stirling_gap", "gap_holds", "chi2_ratio", "cross_checked",
                     "cross_check_holds", "envelope_failures"});
  for (const DegenerateRow& r : rows) {
    write_row(out, {std::to_string(r.n), format_number(r.kl), format_number(r.chi2), format_number(r.stirling_gap),
                    flag(r.gap_holds), format_number(r.chi2_ratio), flag(r.cross_checked),
                    flag(r.cross_check_holds), std::to_string(r.envelope_failures)});
  }
}

void write_degenerate_summary_csv(std::ostream& out, const DegenerateSummary& s) {
  write_header(out, {"n_max", "gap_failures", "first_gap_failure", "envelope_failures", "min_ratio_from_100",
                     "max_ratio_from_100", "ratio_increasing_from_100"});
  write_row(out, {std::to_string(s.n_max), std::to_string(s.gap_failures), std::to_string(s.first_gap_failure),
                  std::to_string(s.envelope_failures), format_number(s.min_ratio_from_100),
                  format_number(s.max_ratio_from_100), flag(s.ratio_increasing_from_100)});
}

void write_structure_csv(std::ostream& out, const std::vector<StructureCheck>& rows) {
  std::vector<std::string> cols = {"instance"};
  cols.insert(cols.end(), check_columns().begin(), check_columns().end());
  write_header(out, cols);
  for (const StructureCheck& s : rows) {
    std::vector<std::string> v = {s.instance};
    const auto cv = check_values(s.check);
    v.insert(v.end(), cv.begin(), cv.end());
    write_row(out, v);
  }
}

void write_saddle_csv(std::ostream& out, const std::vector<SaddleSuiteRow>& rows) {
  write_header(out, {"instance", "ks_checked", "bracket_failures", "refinement_checked", "refinement_failures",
                     "modulus_checked", "modulus_failures", "oscillatory_checked", "oscillatory_failures",
                     "tail_checked", "tail_failures"});
  for (const SaddleSuiteRow& r : rows) {
    write_row(out, {r.instance, std::to_string(r.ks_checked), std::to_string(r.bracket_failures),
                    std::to_string(r.refinement_checked), std::to_string(r.refinement_failures),
                    std::to_string(r.modulus_checked), std::to_string(r.modulus_failures),
                    std::to_string(r.oscillatory_checked), std::to_string(r.oscillatory_failures),
                    std::to_string(r.tail_checked), std::to_string(r.tail_failures)});
  }
}

void write_catalog_csv(std::ostream& out, const std::vector<BoundSpec>& catalog) {
  write_header(out, {"name", "side", "statement", "constants", "applicability", "verdict"});
  for (const BoundSpec& b : catalog) {
    std::string consts;
    for (const auto& [k, v] : b.constants) {
      if (!consts.empty()) consts += ';';
      consts += k + "=" + format_number(v);
    }
    write_row(out, {b.name, to_string(b.side), b.statement, consts, b.applicability, flag(b.verdict)});
  }
}

Json to_json(const LogPmf& w, const LogPmf& v) {
  Json rows = Json::array();
  const std::size_t len = std::max(w.size(), v.size());
  for (std::size_t k = 0; k < len; ++k) {
    const double wk = k < w.size() ? std::exp(w.log_mass[k]) : 0.0;
    const double vk = k < v.size() ? std::exp(v.log_mass[k]) : 0.0;
    rows.push_back({{"k", k}, {"w", number(wk)}, {"v", number(vk)}, {"diff", number(wk - vk)},
                    {"log_w", number(k < w.size() ? w.log_mass[k] : -INFINITY)},
                    {"log_v", number(k < v.size() ? v.log_mass[k] : -INFINITY)}});
  }
  return {{"method", to_string(w.method)}, {"poisson_tail_mass", number(v.tail_bound)}, {"rows", rows}};
}

Json to_json(const DivergenceReport& r) {
  Json j;
  j["lambda"] = number(r.lambda);
  j["n"] = r.n;
  j["tv"] = number(r.tv);
  j["kl"] = number(r.kl);
  j["chi2"] = number(r.chi2);
  j["renyi"] = alpha_map(r.renyi);
  j["tsallis"] = alpha_map(r.tsallis);
  j["vajda"] = alpha_map(r.vajda);
  j["h_w"] = number(r.h_w);
  j["h_z"] = number(r.h_z);
  j["h2_z"] = number(r.h2_z);
  j["entropy_diff"] = number(r.entropy_diff);
  j["kl_negative_part"] = number(r.kl_negative_part);
  j["kl_quadratic_lower"] = number(r.kl_quadratic_lower);
  j["truncation_tail_budget"] = number(r.truncation_tail_budget);
  j["support_end"] = r.support_end;
  j["precision"] = to_string(r.precision);
  j["escalated"] = r.escalated;
  j["escalation_reason"] = r.escalation_reason;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const BoundCheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["side"] = to_string(c.side);
  j["applicable"] = c.applicable;
  if (c.applicable) {
    j["lhs"] = number(c.lhs);
    j["rhs"] = number(c.rhs);
    j["margin"] = number(c.margin);
    j["holds"] = c.holds;
  }
  j["precision"] = to_string(c.precision);
  j["note"] = c.note;
  return j;
}

Json to_json(const RatioRecord& r) {
  Json j;
  j["name"] = r.name;
  j["applicable"] = r.applicable;
  if (r.applicable) j["value"] = number(r.value);
  j["note"] = r.note;
  return j;
}

Json to_json(const SweepRecord& rec) {
  Json j;
  j["index"] = rec.index;
  j["family"] = rec.family.id();
  j["kind"] = to_string(rec.family.kind);
  j["seed"] = rec.family.seed;
  if (rec.ok()) {
    j["n"] = rec.n;
    j["moments"] = {{"lambda", number(rec.moments.lambda)}, {"lambda2", number(rec.moments.lambda2)},
                    {"lambda3", number(rec.moments.lambda3)}, {"F", number(rec.moments.big_f)},
                    {"Q", number(rec.moments.q)}, {"max_p", number(rec.max_p)}};
    j["report"] = to_json(rec.report);
    Json checks = Json::array(), ratios = Json::array();
    for (const auto& c : rec.bounds.checks) checks.push_back(to_json(c));
    for (const auto& r : rec.bounds.ratios) ratios.push_back(to_json(r));
    j["checks"] = checks;
    j["ratios"] = ratios;
  }
  j["error_kind"] = to_string(rec.error_kind);
  j["error"] = rec.error;
  return j;
}

Json to_json(const EmpiricalConstantReport& e) {
  return {{"name", e.name},         {"min", number(e.min)}, {"argmin", e.argmin},
          {"max", number(e.max)},   {"argmax", e.argmax},   {"count", e.count}};
}

Json to_json(const LimitRow& r) {
  return {{"lambda", number(r.lambda)}, {"n", r.n},          {"lambda2", number(r.lambda2)},
          {"regime", number(r.regime)}, {"in_regime", r.in_regime}, {"ratio", number(r.ratio)},
          {"holds", r.holds}};
}

Json to_json(const DegenerateRow& r) {
  return {{"n", r.n},
          {"kl", number(r.kl)},
          {"chi2", number(r.chi2)},
          {"stirling_gap", number(r.stirling_gap)},
          {"gap_holds", r.gap_holds},
          {"chi2_ratio", number(r.chi2_ratio)},
          {"cross_checked", r.cross_checked},
          {"cross_check_holds", r.cross_check_holds},
          {"envelope_failures", r.envelope_failures}};
}

Json to_json(const DegenerateSummary& s) {
  return {{"n_max", s.n_max},
          {"gap_failures", s.gap_failures},
          {"first_gap_failure", s.first_gap_failure},
          {"envelope_failures", s.envelope_failures},
          {"min_ratio_from_100", number(s.min_ratio_from_100)},
          {"max_ratio_from_100", number(s.max_ratio_from_100)},
          {"ratio_increasing_from_100", s.ratio_increasing_from_100}};
}

Json to_json(const StructureCheck& c) {
  Json j = to_json(c.check);
  j["instance"] = c.instance;
  return j;
}

Json to_json(const SaddleSuiteRow& r) {
  return {{"instance", r.instance},
          {"ks_checked", r.ks_checked},
          {"bracket_failures", r.bracket_failures},
          {"refinement_checked", r.refinement_checked},
          {"refinement_failures", r.refinement_failures},
          {"modulus_checked", r.modulus_checked},
          {"modulus_failures", r.modulus_failures},
          {"oscillatory_checked", r.oscillatory_checked},
          {"oscillatory_failures", r.oscillatory_failures},
          {"tail_checked", r.tail_checked},
          {"tail_failures", r.tail_failures}};
}

Json to_json(const BoundSpec& b) {
  Json consts = Json::object();
  for (const auto& [k, v] : b.constants) consts[k] = number(v);
  return {{"name", b.name},   {"side", to_string(b.side)}, {"statement", b.statement},
          {"constants", consts}, {"applicability", b.applicability}, {"verdict", b.verdict}};
}

}  // namespace pbpois
