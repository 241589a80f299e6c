#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbpois/bounds.hpp"
#include "pbpois/distributions.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/errors.hpp"
#include "pbpois/harness.hpp"
#include "pbpois/report_io.hpp"
#include "pbpois/saddle.hpp"

namespace pbpois::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::string command;
  std::string input;
  std::vector<std::string> families;
  std::string method = "dp";
  std::string alpha;
  std::string precision = "binary64";
  unsigned digits = PrecisionPolicy::kDefaultExtendedDigits;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::string suite = "all";
  std::string config;
  bool catalog = false;
};

std::vector<double> parse_alphas(const std::string& text) {
  if (text.empty()) return default_alpha_grid();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError("--alpha: not a number: '" + item + "'");
    out.push_back(a);
  }
  if (out.empty()) throw InputError("--alpha: empty list");
  return out;
}

PrecisionPolicy policy_of(const Config& c) {
  PrecisionPolicy p;
  p.mode = parse_precision_mode(c.precision);
  p.extended_digits = c.digits;
  p.validate();
  return p;
}

// Fills flags that were not given on the command line from a JSON object
// whose keys are the flag names without dashes.
void apply_config_file(Config& c, const CLI::App& sub) {
  std::ifstream in(c.config);
  if (!in) throw InputError("cannot open config file '" + c.config + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + c.config + "': " + e.what());
  }
  if (!j.is_object()) throw InputError("config file '" + c.config + "' must hold a JSON object");
  auto unset = [&](const std::string& key) {
    try {
      return sub.get_option("--" + key)->count() == 0;
    } catch (const CLI::OptionNotFound&) {
      throw InputError("config key '" + key + "' is not a flag of " + c.command);
    }
  };
  auto text = [&](const Json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw InputError("config key '" + key + "' must be a string or number");
  };
  for (const auto& [key, v] : j.items()) {
    if (!unset(key)) continue;
    if (key == "input") {
      c.input = text(v, key);
    } else if (key == "family") {
      c.families.clear();
      if (v.is_array()) {
        for (const auto& f : v) c.families.push_back(text(f, key));
      } else {
        c.families.push_back(text(v, key));
      }
    } else if (key == "method") {
      c.method = text(v, key);
    } else if (key == "alpha") {
      if (v.is_array()) {
        c.alpha.clear();
        for (const auto& a : v) c.alpha += (c.alpha.empty() ? "" : ",") + text(a, key);
      } else {
        c.alpha = text(v, key);
      }
    } else if (key == "precision") {
      c.precision = text(v, key);
    } else if (key == "digits") {
      if (!v.is_number_unsigned()) throw InputError("config key 'digits' must be a non-negative integer");
      c.digits = v.get<unsigned>();
    } else if (key == "out") {
      c.out = text(v, key);
    } else if (key == "format") {
      c.format = text(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw InputError("config key 'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "suite") {
      c.suite = text(v, key);
    } else if (key != "config") {
      throw InputError("unknown config key '" + key + "'");
    }
  }
}

BernoulliVector load_instance(const Config& c) {
  if (!c.input.empty() == !c.families.empty()) throw InputError("give exactly one of --input or --family");
  if (!c.input.empty()) return read_probability_file(c.input);
  if (c.families.size() != 1) throw InputError("--family may be given once for " + c.command);
  return parse_family(c.families.front()).generate();
}

void check_format(const Config& c) {
  if (c.format != "csv" && c.format != "json") throw InputError("--format must be csv or json");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes through `emit` either to the stream or to the named file.
void emit_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  emit(f);
}

class RunInfo {
 public:
  RunInfo(const Config& c, const std::vector<std::string>& args) : started_(std::chrono::steady_clock::now()) {
    info_["tool"] = "pbpois";
    info_["version"] = kVersion;
    info_["command"] = c.command;
    info_["arguments"] = args;
    info_["seed"] = c.seed;
    info_["precision"] = c.precision;
    info_["digits"] = c.digits;
    info_["started_utc"] = utc_now();
  }
  Json& operator[](const char* key) { return info_[key]; }
  void write(const fs::path& path) {
    info_["finished_utc"] = utc_now();
    info_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << info_.dump(2) << '\n';
  }

 private:
  Json info_;
  std::chrono::steady_clock::time_point started_;
};

void write_sidecar(const Config& c, RunInfo& info) {
  if (!c.out.empty()) info.write(c.out + ".run_info.json");
}

int cmd_pmf(const Config& c, std::ostream& out, std::ostream& err, RunInfo& info) {
  check_format(c);
  const BernoulliVector p = load_instance(c);
  const PrecisionPolicy policy = policy_of(c);
  const PmfMethod method = parse_pmf_method(c.method);
  LogPmf w;
  switch (method) {
    case PmfMethod::dp: w = poisson_binomial_pmf_dp(p, policy); break;
    case PmfMethod::dft: w = poisson_binomial_pmf_dft(p, 1.0, default_dft_nodes(p.size()), policy); break;
    case PmfMethod::contour:
      try {
        w = poisson_binomial_pmf_contour(p, policy);
      } catch (const DomainError& e) {
        throw InputError(std::string("--method contour: ") + e.what());
      }
      break;
    default: throw InputError("--method must be dp, dft or contour");
  }
  // the transform length can exceed n + 1; those coefficients are zero
  w.log_mass.resize(p.size() + 1, num::neg_inf<double>());
  TruncationPolicy cut;
  cut.hard_cap = static_cast<double>(p.size());
  const LogPmf v = poisson_pmf(p.moments().lambda, p.size(), cut);
  err << "note: Poisson mass beyond k = " << p.size() << " is " << format_number(v.tail_bound) << '\n';
  emit_to(c.out, out, [&](std::ostream& os) {
    if (c.format == "json") {
      os << to_json(w, v).dump(2) << '\n';
    } else {
      write_pmf_csv(os, w, v);
    }
  });
  write_sidecar(c, info);
  return kSuccess;
}

int cmd_divergence(const Config& c, std::ostream& out, std::ostream& err, RunInfo& info) {
  check_format(c);
  const BernoulliVector p = load_instance(c);
  const std::vector<double> alphas = parse_alphas(c.alpha);
  const DivergenceReport r = divergence_report(p, alphas, policy_of(c));
  for (const std::string& note : r.notes) err << "note: " << note << '\n';
  if (r.escalated) err << "note: evaluated in extended precision (" << r.escalation_reason << ")\n";
  emit_to(c.out, out, [&](std::ostream& os) {
    if (c.format == "json") {
      os << to_json(r).dump(2) << '\n';
    } else {
      write_divergence_csv(os, r, alphas);
    }
  });
  write_sidecar(c, info);
  return kSuccess;
}

int cmd_bounds(const Config& c, std::ostream& out, std::ostream&, RunInfo& info) {
  check_format(c);
  if (c.catalog) {
    emit_to(c.out, out, [&](std::ostream& os) {
      if (c.format == "json") {
        Json arr = Json::array();
        for (const BoundSpec& b : bound_catalog()) arr.push_back(to_json(b));
        os << arr.dump(2) << '\n';
      } else {
        write_catalog_csv(os, bound_catalog());
      }
    });
    write_sidecar(c, info);
    return kSuccess;
  }
  const BernoulliVector p = load_instance(c);
  const std::vector<double> alphas = parse_alphas(c.alpha);
  const DivergenceReport r = divergence_report(p, alphas, policy_of(c));
  const BoundEvaluation ev = evaluate_bounds(p, r);
  emit_to(c.out, out, [&](std::ostream& os) {
    if (c.format == "json") {
      Json checks = Json::array(), ratios = Json::array();
      for (const auto& x : ev.checks) checks.push_back(to_json(x));
      for (const auto& x : ev.ratios) ratios.push_back(to_json(x));
      os << Json{{"checks", checks}, {"ratios", ratios}}.dump(2) << '\n';
    } else {
      write_checks_csv(os, ev.checks);
    }
  });
  info["violations"] = ev.violation_count();
  write_sidecar(c, info);
  return ev.violation_count() ? kViolation : kSuccess;
}

struct Outcome {
  std::size_t violations = 0;
  std::size_t input_errors = 0;
  std::size_t numerical_errors = 0;

  int exit_code() const {
    if (violations) return kViolation;
    if (numerical_errors) return kNumericalFailure;
    if (input_errors) return kInputError;
    return kSuccess;
  }
};

class OutputDir {
 public:
  OutputDir(const Config& c) : format_(c.format) {
    if (!c.out.empty()) {
      dir_ = c.out;
      fs::create_directories(dir_);
    }
  }
  bool enabled() const { return !dir_.empty(); }
  const fs::path& path() const { return dir_; }

  void table(const std::string& stem, const std::function<void(std::ostream&)>& csv,
             const std::function<Json()>& json) {
    if (!enabled() || (format_ == "json" && !json)) return;
    const fs::path file = dir_ / (stem + (format_ == "json" ? ".json" : ".csv"));
    std::ofstream f(file, std::ios::binary);
    if (!f) throw InputError("cannot write '" + file.string() + "'");
    if (format_ == "json") {
      f << json().dump(2) << '\n';
    } else {
      csv(f);
    }
  }

 private:
  std::string format_;
  fs::path dir_;
};

template <class T>
Json json_array(const std::vector<T>& rows) {
  Json arr = Json::array();
  for (const T& r : rows) arr.push_back(to_json(r));
  return arr;
}

void sweep_outputs(OutputDir& dir, const std::vector<SweepRecord>& recs, const std::vector<double>& alphas,
                   Outcome& outcome, std::ostream& out, const std::string& label) {
  std::size_t applicable = 0, escalated = 0, failed = 0;
  for (const SweepRecord& r : recs) {
    if (!r.ok()) {
      ++failed;
      (r.error_kind == RecordError::input ? outcome.input_errors : outcome.numerical_errors)++;
      continue;
    }
    applicable += r.bounds.applicable_count();
    outcome.violations += r.bounds.violation_count();
    escalated += r.report.escalated;
  }
  const auto constants = empirical_constants(recs);
  dir.table("records", [&](std::ostream& os) { write_sweep_csv(os, recs, alphas); },
            [&] { return json_array(recs); });
  // in JSON form the checks and ratios live inside records.json
  dir.table("checks", [&](std::ostream& os) { write_sweep_checks_csv(os, recs); }, nullptr);
  dir.table("ratios", [&](std::ostream& os) { write_sweep_ratios_csv(os, recs); }, nullptr);
  dir.table("constants", [&](std::ostream& os) { write_constants_csv(os, constants); },
            [&] { return json_array(constants); });
  out << label << ": records=" << recs.size() << " applicable_checks=" << applicable
      << " violations=" << outcome.violations << " errors=" << failed << " escalated=" << escalated << '\n';
}

std::vector<FamilySpec> sweep_families(const Config& c) {
  std::vector<FamilySpec> specs;
  for (const std::string& f : c.families) specs.push_back(parse_family(f));
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw InputError("cannot open '" + c.input + "'");
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      try {
        specs.push_back(parse_family(line.substr(first, last - first + 1)));
      } catch (const InputError& e) {
        throw InputError(c.input, no, e.what());
      }
    }
  }
  if (specs.empty()) specs = default_corpus(500, c.seed);
  return specs;
}

int cmd_sweep(const Config& c, std::ostream& out, std::ostream& err, RunInfo& info) {
  check_format(c);
  SweepOptions opts;
  opts.alphas = parse_alphas(c.alpha);
  opts.precision = policy_of(c);
  const std::vector<FamilySpec> specs = sweep_families(c);
  const auto recs = run_sweep(specs, opts);
  Outcome outcome;
  OutputDir dir(c);
  if (dir.enabled()) {
    sweep_outputs(dir, recs, opts.alphas, outcome, out, "sweep");
    info["records"] = recs.size();
    info.write(dir.path() / "run_info.json");
  } else {
    std::ostringstream summary;
    sweep_outputs(dir, recs, opts.alphas, outcome, summary, "sweep");
    if (c.format == "json") {
      out << json_array(recs).dump(2) << '\n';
    } else {
      write_sweep_csv(out, recs, opts.alphas);
    }
    err << summary.str();
  }
  return outcome.exit_code();
}

void suite_core(const Config& c, OutputDir& dir, Outcome& outcome, std::ostream& out) {
  SweepOptions opts;
  opts.alphas = parse_alphas(c.alpha);
  opts.precision = policy_of(c);
  const auto recs = run_sweep(default_corpus(500, c.seed), opts);
  sweep_outputs(dir, recs, opts.alphas, outcome, out, "verify core");
  dir.table("catalog", [&](std::ostream& os) { write_catalog_csv(os, bound_catalog()); },
            [&] { return json_array(bound_catalog()); });
}

void suite_asymptotic(OutputDir& dir, Outcome& outcome, std::ostream& out) {
  const auto limit = bv_limit_check({0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0}, {10, 100, 1000, 10000});
  const auto rows = degenerate_asymptotics({1, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000, 10000, 100000, 1000000});
  const DegenerateSummary summary = degenerate_sweep(1000000);
  std::size_t failures = 0, in_regime = 0;
  for (const LimitRow& r : limit) {
    failures += !r.holds;
    in_regime += r.in_regime;
  }
  for (const DegenerateRow& r : rows) {
    failures += !r.gap_holds + !r.cross_check_holds + r.envelope_failures;
    if (r.n >= 100) failures += !(r.chi2_ratio >= 0.9 && r.chi2_ratio <= 1.1);
  }
  failures += summary.gap_failures + summary.envelope_failures + !summary.ratio_increasing_from_100;
  failures += !(summary.min_ratio_from_100 >= 0.9 && summary.max_ratio_from_100 <= 1.1);
  outcome.violations += failures;
  dir.table("bv_limit", [&](std::ostream& os) { write_limit_csv(os, limit); }, [&] { return json_array(limit); });
  dir.table("degenerate", [&](std::ostream& os) { write_degenerate_csv(os, rows); },
            [&] { return json_array(rows); });
  dir.table("degenerate_summary", [&](std::ostream& os) { write_degenerate_summary_csv(os, summary); },
            [&] { return to_json(summary); });
  out << "verify asymptotic: bv_limit_rows=" << limit.size() << " in_regime=" << in_regime
      << " degenerate_rows=" << rows.size() << " stirling_n_max=" << summary.n_max
      << " chi2_ratio_range=[" << format_number(summary.min_ratio_from_100) << ","
      << format_number(summary.max_ratio_from_100) << "] failures=" << failures << '\n';
}

void suite_structure(OutputDir& dir, Outcome& outcome, std::ostream& out) {
  const auto checks = entropy_structure_checks();
  std::vector<SaddleSuiteRow> saddle;
  for (const FamilySpec& s : default_saddle_corpus()) saddle.push_back(saddle_suite(s));
  std::size_t failures = 0;
  for (const StructureCheck& s : checks) failures += s.check.violated();
  for (const SaddleSuiteRow& r : saddle) failures += r.failures();
  outcome.violations += failures;
  dir.table("structure", [&](std::ostream& os) { write_structure_csv(os, checks); },
            [&] { return json_array(checks); });
  dir.table("saddle", [&](std::ostream& os) { write_saddle_csv(os, saddle); }, [&] { return json_array(saddle); });
  out << "verify structure: entropy_checks=" << checks.size() << " saddle_instances=" << saddle.size()
      << " failures=" << failures << '\n';
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream&, RunInfo& info) {
  check_format(c);
  const bool all = c.suite == "all";
  if (!all && c.suite != "core" && c.suite != "asymptotic" && c.suite != "structure") {
    throw InputError("unknown suite '" + c.suite + "' (expected core, asymptotic, structure or all)");
  }
  OutputDir dir(c);
  Outcome outcome;
  if (all || c.suite == "core") suite_core(c, dir, outcome, out);
  if (all || c.suite == "asymptotic") suite_asymptotic(dir, outcome, out);
  if (all || c.suite == "structure") suite_structure(dir, outcome, out);
  info["suite"] = c.suite;
  info["violations"] = outcome.violations;
  if (dir.enabled()) info.write(dir.path() / "run_info.json");
  return outcome.exit_code();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Poisson-binomial versus Poisson distances and bound certification", "pbpois"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto common = [&](CLI::App* sub, bool instance) {
    sub->add_option("--input", c.input, instance ? "probability file, one p per line" : "family list, one per line");
    sub->add_option("--family", c.families, "family spec, e.g. equal:n=100,p=0.01");
    sub->add_option("--precision", c.precision, "binary64 or extended");
    sub->add_option("--digits", c.digits, "decimal digits in extended precision");
    sub->add_option("--out", c.out, instance ? "output file" : "output directory");
    sub->add_option("--format", c.format, "csv or json");
    sub->add_option("--config", c.config, "JSON file with flag values");
  };
  CLI::App* pmf = app.add_subcommand("pmf", "pmf of W next to Poisson(lambda)");
  common(pmf, true);
  pmf->add_option("--method", c.method, "dp, dft or contour");
  CLI::App* div = app.add_subcommand("divergence", "all distances between W and Poisson(lambda)");
  common(div, true);
  div->add_option("--alpha", c.alpha, "comma-separated alpha grid");
  CLI::App* bnd = app.add_subcommand("bounds", "evaluate every catalog bound on one instance");
  common(bnd, true);
  bnd->add_option("--alpha", c.alpha, "comma-separated alpha grid");
  bnd->add_flag("--catalog", c.catalog, "print the bound catalog instead");
  CLI::App* swp = app.add_subcommand("sweep", "evaluate families and write per-record tables");
  common(swp, false);
  swp->add_option("--alpha", c.alpha, "comma-separated alpha grid");
  swp->add_option("--seed", c.seed, "base seed of the random-seeded corpus");
  CLI::App* ver = app.add_subcommand("verify", "run a certification suite");
  common(ver, false);
  ver->add_option("--alpha", c.alpha, "comma-separated alpha grid");
  ver->add_option("--seed", c.seed, "base seed of the random-seeded corpus");
  ver->add_option("--suite", c.suite, "core, asymptotic, structure or all");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  const std::map<CLI::App*, std::function<int(const Config&, std::ostream&, std::ostream&, RunInfo&)>> handlers = {
      {pmf, cmd_pmf}, {div, cmd_divergence}, {bnd, cmd_bounds}, {swp, cmd_sweep}, {ver, cmd_verify}};
  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  try {
    if (!c.config.empty()) apply_config_file(c, *sub);
    RunInfo info(c, args);
    return handlers.at(sub)(c, out, err, info);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const EscalationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace pbpois::cli
