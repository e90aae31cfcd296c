#include "hirschfa/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "hirschfa/cfa.hpp"
#include "hirschfa/efa.hpp"
#include "hirschfa/errors.hpp"
#include "hirschfa/report.hpp"

namespace hirschfa::cli {

namespace {

using nlohmann::json;
using report::format_fixed;

enum class Output { text, csv, json };

struct Options {
  bool fixture = false;
  std::string input;
  std::string format;
  std::string vars = "7";
  std::string transform = "raw";
  std::string rotation = "varimax";
  int kappa = 3;
  int factors = 2;
  std::optional<double> threshold;
  std::string g_convention = "padded";
  int B = 1000;
  std::uint64_t seed = 1;
  std::optional<double> df;
  std::optional<double> tolerance;
  bool all = false;
  bool as_json = false;
  bool as_csv = false;

  Output output() const { return as_json ? Output::json : as_csv ? Output::csv : Output::text; }
};

indices::GIndexConvention parse_convention(std::string_view s) {
  if (s == "padded") return indices::GIndexConvention::padded;
  if (s == "capped") return indices::GIndexConvention::capped;
  throw ValidationError(fmt::format("unknown g convention '{}'", s));
}

class InputSource {
 public:
  explicit InputSource(const std::string& path) {
    if (path == "-") return;
    file_.open(path);
    if (!file_) throw ValidationError(fmt::format("cannot open input file '{}'", path));
  }
  std::istream& stream() { return file_.is_open() ? static_cast<std::istream&>(file_) : std::cin; }

 private:
  std::ifstream file_;
};

struct Loaded {
  IndicatorTable table;
  std::vector<indices::CitationRecord> records;  // empty unless citations were read
};

Loaded load(const Options& o, std::string_view default_format) {
  if (o.fixture == !o.input.empty()) throw ValidationError("exactly one of --fixture or --input is required");
  if (o.fixture) return {report::fixture(), {}};
  const std::string format = o.format.empty() ? std::string(default_format) : o.format;
  InputSource src(o.input);
  if (format == "indicators") return {parse_indicator_table(src.stream()), {}};
  const auto fmt_enum = format == "long" ? report::CitationFormat::long_format : report::CitationFormat::wide_format;
  auto records = report::parse_citations(src.stream(), fmt_enum);
  auto table = report::indicator_table(records, parse_convention(o.g_convention));
  return {std::move(table), std::move(records)};
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + "\n";
}

json matrix_json(const linalg::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const linalg::Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string pad(std::string_view s, std::size_t w) {
  std::string out(s);
  if (out.size() < w) out.insert(0, w - out.size(), ' ');
  return out;
}

std::string pad_right(std::string_view s, std::size_t w) {
  std::string out(s);
  if (out.size() < w) out.append(w - out.size(), ' ');
  return out;
}

std::string factor_name(Eigen::Index j) { return fmt::format("F{}", j + 1); }

// ---- indices ---------------------------------------------------------------

void cmd_indices(const Options& o, std::ostream& out) {
  const auto loaded = load(o, "long");
  const auto& t = loaded.table;
  const auto conv = parse_convention(o.g_convention);
  switch (o.output()) {
    case Output::csv:
      out << to_csv(t);
      break;
    case Output::json: {
      json rows = json::array();
      for (std::size_t i = 0; i < t.rows(); ++i) {
        json row;
        row["scientist"] = t.row_labels()[i];
        for (const auto& c : t.columns()) row[c] = t.at(i, c);
        if (!loaded.records.empty()) {
          const auto& rec = loaded.records[i];
          row["empty_core"] = indices::indicator_set(rec, conv).empty_core;
          const auto interp = indices::interpolated_set(rec);
          row["h_tilde"] = interp.h_tilde;
          row["g_tilde"] = interp.g_tilde;
          row["h2_tilde"] = interp.h2_tilde;
        }
        rows.push_back(row);
      }
      out << rows.dump(2) << "\n";
      break;
    }
    case Output::text: {
      std::size_t w = 9;
      for (const auto& l : t.row_labels()) w = std::max(w, l.size());
      out << pad_right("scientist", w);
      for (const auto& c : t.columns()) out << pad(c, 9);
      out << "\n";
      for (std::size_t i = 0; i < t.rows(); ++i) {
        out << pad_right(t.row_labels()[i], w);
        for (const auto& c : t.columns()) out << pad(format_fixed(t.at(i, c), 2), 9);
        out << "\n";
      }
      break;
    }
  }
}

// ---- describe --------------------------------------------------------------

void cmd_describe(const Options& o, std::ostream& out) {
  const auto loaded = load(o, "indicators");
  const auto vars = report::variable_set(o.vars);
  const auto transform = stats::parse_transform(o.transform);

  struct Column {
    stats::Descriptives d;
    stats::DistSpec normal_fit, student_fit;
    stats::KSResult normal, student;
  };
  std::vector<Column> cols;
  for (const auto& v : vars) {
    const auto values = stats::apply_transform(loaded.table.column(v), transform);
    Column c;
    c.d = stats::describe(values);
    c.normal_fit = stats::fit_distspec(values, stats::Family::normal);
    c.student_fit = stats::fit_distspec(values, stats::Family::student, o.df);
    c.normal = stats::ks_test(values, c.normal_fit);
    c.student = stats::ks_test(values, c.student_fit);
    cols.push_back(c);
  }

  struct Row {
    std::string name;
    int digits;
    double (*get)(const Column&);
  };
  const std::vector<Row> rows = {
      {"Mean", 2, [](const Column& c) { return c.d.mean; }},
      {"Median", 2, [](const Column& c) { return c.d.median; }},
      {"SD", 2, [](const Column& c) { return c.d.sd; }},
      {"KS D (normal)", 3, [](const Column& c) { return c.normal.D; }},
      {"p (normal)", 3, [](const Column& c) { return c.normal.p; }},
      {"KS D (Student)", 3, [](const Column& c) { return c.student.D; }},
      {"p (Student)", 3, [](const Column& c) { return c.student.p; }},
  };

  switch (o.output()) {
    case Output::json: {
      json doc;
      doc["transform"] = o.transform;
      doc["n"] = loaded.table.rows();
      for (std::size_t k = 0; k < vars.size(); ++k) {
        const auto& c = cols[k];
        doc["variables"][vars[k]] = {
            {"mean", c.d.mean},
            {"median", c.d.median},
            {"sd", c.d.sd},
            {"normal", {{"location", c.normal_fit.location}, {"scale", c.normal_fit.scale}, {"D", c.normal.D}, {"p", c.normal.p}}},
            {"student",
             {{"df", c.student_fit.df},
              {"location", c.student_fit.location},
              {"scale", c.student_fit.scale},
              {"D", c.student.D},
              {"p", c.student.p}}},
        };
      }
      out << doc.dump(2) << "\n";
      break;
    }
    case Output::csv: {
      std::vector<std::string> header = {"statistic"};
      header.insert(header.end(), vars.begin(), vars.end());
      out << csv_row(header);
      for (const auto& r : rows) {
        std::vector<std::string> cells = {r.name};
        for (const auto& c : cols) cells.push_back(format_number(r.get(c)));
        out << csv_row(cells);
      }
      break;
    }
    case Output::text: {
      out << pad_right(fmt::format("transform: {}", o.transform), 16);
      for (const auto& v : vars) out << pad(v, 9);
      out << "\n";
      for (const auto& r : rows) {
        out << pad_right(r.name, 16);
        for (const auto& c : cols) out << pad(format_fixed(r.get(c), r.digits), 9);
        out << "\n";
      }
      break;
    }
  }
}

// ---- efa -------------------------------------------------------------------

efa::RotationSpec rotation_spec(const Options& o) {
  efa::RotationSpec spec;
  spec.kind = efa::parse_rotation(o.rotation);
  spec.kappa = o.kappa;
  return spec;
}

efa::ExtractionSettings extraction(const Options& o) {
  efa::ExtractionSettings s;
  s.n_factors = o.factors;
  return s;
}

void text_matrix(std::ostream& out, const std::string& title, const std::vector<std::string>& labels,
                 const linalg::Matrix& m, int digits, const std::vector<std::string>& extra_header = {},
                 const std::vector<linalg::Vector>& extra = {}) {
  out << title << "\n" << pad_right("", 10);
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << pad(factor_name(j), 9);
  for (const auto& h : extra_header) out << pad(h, 13);
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << pad_right(labels[static_cast<std::size_t>(i)], 10);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << pad(format_fixed(m(i, j), digits), 9);
    for (const auto& col : extra) out << pad(format_fixed(col(i), digits), 13);
    out << "\n";
  }
}

void cmd_efa(const Options& o, std::ostream& out, std::ostream& err) {
  const auto loaded = load(o, "indicators");
  const auto vars = report::variable_set(o.vars);
  const auto transform = stats::parse_transform(o.transform);
  const auto res = efa::efa_pipeline(loaded.table, vars, transform, extraction(o), rotation_spec(o));
  const auto ad = efa::adequacy(res.correlations, static_cast<int>(loaded.table.rows()));
  const double threshold = o.threshold.value_or(0.6);
  const auto cat = efa::categorize(res.rotated, threshold);
  const auto p = static_cast<double>(vars.size());

  switch (o.output()) {
    case Output::json: {
      json doc;
      doc["transform"] = o.transform;
      doc["rotation"] = o.rotation;
      doc["variables"] = vars;
      doc["kmo"] = ad.kmo;
      doc["bartlett"] = {{"chi2", ad.bartlett_chi2}, {"df", ad.bartlett_df}, {"p", ad.bartlett_p}};
      doc["iterations"] = res.iterations;
      doc["unrotated"] = matrix_json(res.unrotated.values);
      doc["loadings"] = matrix_json(res.rotated.values);
      if (res.structure) doc["structure"] = matrix_json(*res.structure);
      if (res.phi) doc["phi"] = matrix_json(*res.phi);
      doc["communalities"] = vector_json(res.communalities);
      doc["ss_loadings"] = vector_json(res.ss_loadings);
      doc["variance_explained_percent"] = vector_json(100.0 * res.variance_explained);
      doc["categorization"]["threshold"] = threshold;
      for (Eigen::Index j = 0; j < res.rotated.factors(); ++j) {
        doc["categorization"]["factors"].push_back(cat.members_of(static_cast<int>(j)));
      }
      doc["warnings"] = res.warnings;
      out << doc.dump(2) << "\n";
      break;
    }
    case Output::csv: {
      std::vector<std::string> header = {"variable"};
      for (Eigen::Index j = 0; j < res.rotated.factors(); ++j) header.push_back(factor_name(j));
      header.push_back("communality");
      out << csv_row(header);
      for (std::size_t i = 0; i < vars.size(); ++i) {
        std::vector<std::string> cells = {vars[i]};
        for (Eigen::Index j = 0; j < res.rotated.factors(); ++j) {
          cells.push_back(format_number(res.rotated.values(static_cast<Eigen::Index>(i), j)));
        }
        cells.push_back(format_number(res.communalities(static_cast<Eigen::Index>(i))));
        out << csv_row(cells);
      }
      std::vector<std::string> ss = {"SS"};
      for (Eigen::Index j = 0; j < res.ss_loadings.size(); ++j) ss.push_back(format_number(res.ss_loadings(j)));
      ss.emplace_back();
      out << csv_row(ss);
      break;
    }
    case Output::text: {
      out << fmt::format("transform: {}  rotation: {}  n = {}\n", o.transform, o.rotation, loaded.table.rows());
      out << fmt::format("KMO = {}  Bartlett chi2 = {} (df = {}), p = {}\n", format_fixed(ad.kmo, 3),
                         format_fixed(ad.bartlett_chi2, 2), ad.bartlett_df,
                         ad.bartlett_p < 0.001 ? std::string("< 0.001") : format_fixed(ad.bartlett_p, 3));
      text_matrix(out, res.structure ? "Pattern loadings" : "Loadings", vars, res.rotated.values, 3,
                  {"communality"}, {res.communalities});
      out << pad_right(res.structure ? "SS (struct)" : "SS", 10);
      for (Eigen::Index j = 0; j < res.ss_loadings.size(); ++j) out << pad(format_fixed(res.ss_loadings(j), 3), 9);
      out << "\n" << pad_right("% var", 10);
      for (Eigen::Index j = 0; j < res.ss_loadings.size(); ++j) {
        out << pad(format_fixed(100.0 * res.ss_loadings(j) / p, 2), 9);
      }
      out << "\n";
      if (res.structure) text_matrix(out, "Structure loadings", vars, *res.structure, 3);
      if (res.phi) {
        std::vector<std::string> fl;
        for (Eigen::Index j = 0; j < res.phi->rows(); ++j) fl.push_back(factor_name(j));
        text_matrix(out, "Factor correlations", fl, *res.phi, 3);
      }
      out << fmt::format("Categorization (|loading| > {}):\n", threshold);
      for (Eigen::Index j = 0; j < res.rotated.factors(); ++j) {
        const auto members = cat.members_of(static_cast<int>(j));
        out << fmt::format("  {}: {}\n", factor_name(j), fmt::join(members, " "));
      }
      break;
    }
  }
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
}

// ---- cfa -------------------------------------------------------------------

void cmd_cfa(const Options& o, std::ostream& out) {
  const auto loaded = load(o, "indicators");
  const auto vars = report::variable_set(o.vars);
  const auto transform = stats::parse_transform(o.transform);
  efa::RotationSpec rot;
  rot.kind = efa::Rotation::varimax;
  const auto ex = efa::efa_pipeline(loaded.table, vars, transform, extraction(o), rot);
  const auto spec = cfa::pattern_from_efa(ex.rotated, o.threshold.value_or(0.7), true);
  const auto fit = cfa::cfa_fit(ex.correlations, static_cast<int>(loaded.table.rows()), spec);

  switch (o.output()) {
    case Output::json: {
      json doc;
      doc["transform"] = o.transform;
      doc["variables"] = vars;
      json mask = json::array();
      for (Eigen::Index i = 0; i < spec.variables(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < spec.factors(); ++j) row.push_back(static_cast<bool>(spec.loadings(i, j)));
        mask.push_back(row);
      }
      doc["pattern"] = mask;
      doc["estimates"] = matrix_json(fit.estimates);
      doc["standardized"] = matrix_json(fit.loadings);
      doc["standard_errors"] = matrix_json(fit.standard_errors);
      doc["z"] = matrix_json(fit.z);
      doc["p_values"] = matrix_json(fit.p_values);
      doc["phi"] = matrix_json(fit.phi);
      doc["uniquenesses"] = vector_json(fit.uniquenesses);
      doc["r_squared"] = vector_json(fit.r_squared);
      doc["fml"] = fit.fml;
      doc["chi2"] = fit.chi2;
      doc["df"] = fit.df;
      doc["converged"] = fit.converged;
      doc["grad_norm"] = fit.grad_norm;
      doc["iterations"] = fit.iterations;
      doc["heywood"] = fit.heywood;
      out << doc.dump(2) << "\n";
      break;
    }
    case Output::csv: {
      out << "variable,factor,estimate,standardized,se,z,p,r_squared\n";
      for (Eigen::Index i = 0; i < spec.variables(); ++i) {
        for (Eigen::Index j = 0; j < spec.factors(); ++j) {
          if (!spec.loadings(i, j)) continue;
          out << csv_row({vars[static_cast<std::size_t>(i)], factor_name(j), format_number(fit.estimates(i, j)),
                          format_number(fit.loadings(i, j)), format_number(fit.standard_errors(i, j)),
                          format_number(fit.z(i, j)), format_number(fit.p_values(i, j)),
                          format_number(fit.r_squared(i))});
        }
      }
      break;
    }
    case Output::text: {
      out << fmt::format("transform: {}  n = {}  F_ML = {}  chi2 = {} (df = {})  {}\n", o.transform,
                         loaded.table.rows(), format_fixed(fit.fml, 4), format_fixed(fit.chi2, 2), fit.df,
                         fit.converged ? "converged" : "NOT converged");
      if (fit.heywood) out << "Heywood case: a uniqueness reached the lower bound\n";
      out << fmt::format("{}{}{}{}{}{}{}\n", pad_right("variable", 10), pad("factor", 8), pad("std", 8),
                         pad("se", 8), pad("z", 9), pad("p", 8), pad("R2", 7));
      for (Eigen::Index i = 0; i < spec.variables(); ++i) {
        for (Eigen::Index j = 0; j < spec.factors(); ++j) {
          if (!spec.loadings(i, j)) continue;
          const double pv = fit.p_values(i, j);
          out << fmt::format("{}{}{}{}{}{}{}{}\n", pad_right(vars[static_cast<std::size_t>(i)], 10),
                             pad(factor_name(j), 8), pad(format_fixed(fit.loadings(i, j), 2), 8),
                             pad(format_fixed(fit.standard_errors(i, j), 3), 8), pad(format_fixed(fit.z(i, j), 2), 9),
                             pad(format_fixed(pv, 3), 8), pad(format_fixed(fit.r_squared(i), 2), 7),
                             pv >= 0.05 ? "  n.s." : "");
        }
      }
      std::vector<std::string> fl;
      for (Eigen::Index j = 0; j < fit.phi.rows(); ++j) fl.push_back(factor_name(j));
      text_matrix(out, "Factor correlations", fl, fit.phi, 3);
      break;
    }
  }
}

// ---- bootstrap -------------------------------------------------------------

void cmd_bootstrap(const Options& o, std::ostream& out) {
  const auto loaded = load(o, "indicators");
  const auto vars = report::variable_set(o.vars);
  const auto transform = stats::parse_transform(o.transform);
  const auto res = efa::bootstrap_efa(loaded.table, vars, transform, extraction(o), rotation_spec(o), o.B, o.seed);
  const auto& s = res.summary;

  switch (o.output()) {
    case Output::json: {
      json doc;
      doc["B"] = res.B;
      doc["seed"] = res.seed;
      doc["converged"] = res.converged;
      doc["non_converged"] = res.non_converged;
      doc["variables"] = vars;
      doc["reference"] = matrix_json(res.reference.values);
      doc["mean"] = matrix_json(s.mean);
      doc["sd"] = matrix_json(s.sd);
      doc["lower"] = matrix_json(s.lower);
      doc["upper"] = matrix_json(s.upper);
      out << doc.dump(2) << "\n";
      break;
    }
    case Output::csv: {
      out << "variable,factor,estimate,mean,sd,lower,upper\n";
      for (Eigen::Index i = 0; i < s.mean.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.mean.cols(); ++j) {
          out << csv_row({vars[static_cast<std::size_t>(i)], factor_name(j), format_number(res.reference.values(i, j)),
                          format_number(s.mean(i, j)), format_number(s.sd(i, j)), format_number(s.lower(i, j)),
                          format_number(s.upper(i, j))});
        }
      }
      break;
    }
    case Output::text: {
      out << fmt::format("B = {}  seed = {}  converged = {}  skipped = {}\n", res.B, res.seed, res.converged,
                         res.non_converged);
      out << fmt::format("{}{}{}{}{}{}\n", pad_right("variable", 10), pad("factor", 7), pad("estimate", 10),
                         pad("mean", 8), pad("sd", 8), pad("95% interval", 18));
      for (Eigen::Index i = 0; i < s.mean.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.mean.cols(); ++j) {
          out << fmt::format("{}{}{}{}{}{}\n", pad_right(vars[static_cast<std::size_t>(i)], 10), pad(factor_name(j), 7),
                             pad(format_fixed(res.reference.values(i, j), 3), 10), pad(format_fixed(s.mean(i, j), 3), 8),
                             pad(format_fixed(s.sd(i, j), 3), 8),
                             pad(fmt::format("[{}, {}]", format_fixed(s.lower(i, j), 3), format_fixed(s.upper(i, j), 3)),
                                 18));
        }
      }
      break;
    }
  }
}

// ---- verify ----------------------------------------------------------------

std::string_view comparison_name(report::Comparison c) {
  switch (c) {
    case report::Comparison::within: return "within";
    case report::Comparison::below: return "below";
    case report::Comparison::above: return "above";
  }
  return "within";
}

int cmd_verify(const Options& o, std::ostream& out) {
  report::VerifyOptions vo;
  vo.tolerance = o.tolerance;
  if (o.fixture || !o.input.empty()) vo.table = load(o, "indicators").table;
  const auto rep = report::verify(vo);

  switch (o.output()) {
    case Output::json: {
      json doc;
      doc["pass"] = rep.pass;
      doc["binding_checks"] = rep.binding_checks;
      doc["binding_failures"] = rep.binding_failures;
      doc["advisory_failures"] = rep.advisory_failures;
      doc["checks"] = json::array();
      for (const auto& c : rep.checks) {
        doc["checks"].push_back({{"criterion", c.criterion},
                                 {"table", c.table_id},
                                 {"cell", c.cell_id},
                                 {"expected", c.expected},
                                 {"computed", c.computed},
                                 {"tolerance", c.tolerance},
                                 {"comparison", comparison_name(c.comparison)},
                                 {"binding", c.binding},
                                 {"pass", c.pass}});
      }
      out << doc.dump(2) << "\n";
      break;
    }
    case Output::csv: {
      out << "criterion,table,cell,expected,computed,tolerance,comparison,binding,pass\n";
      for (const auto& c : rep.checks) {
        out << csv_row({std::to_string(c.criterion), c.table_id, "\"" + c.cell_id + "\"", format_number(c.expected),
                        format_number(c.computed), format_number(c.tolerance), std::string(comparison_name(c.comparison)),
                        c.binding ? "1" : "0", c.pass ? "1" : "0"});
      }
      break;
    }
    case Output::text: {
      for (const auto& c : rep.checks) {
        if (c.pass && !o.all) continue;
        out << fmt::format("{} [{}] c{} {} | {} | expected {} computed {} ({} {})\n", c.pass ? "PASS" : "FAIL",
                           c.binding ? "binding" : "advisory", c.criterion, c.table_id, c.cell_id,
                           format_number(c.expected), format_fixed(c.computed, 4), comparison_name(c.comparison),
                           format_number(c.tolerance));
      }
      out << fmt::format("{} binding checks, {} failed; {} advisory deviations; overall {}\n", rep.binding_checks,
                         rep.binding_failures, rep.advisory_failures, rep.pass ? "PASS" : "FAIL");
      break;
    }
  }
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

void add_input(CLI::App* cmd, Options& o) {
  auto* fx = cmd->add_flag("--fixture", o.fixture, "Use the embedded 26-scientist dataset");
  auto* in = cmd->add_option("--input", o.input, "Input CSV path ('-' for stdin)");
  fx->excludes(in);
  cmd->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"long", "wide", "indicators"}));
  cmd->add_option("--g-convention", o.g_convention, "g-index convention")
      ->check(CLI::IsMember({"padded", "capped"}));
}

void add_output(CLI::App* cmd, Options& o) {
  auto* j = cmd->add_flag("--json", o.as_json, "JSON output (full precision)");
  auto* c = cmd->add_flag("--csv", o.as_csv, "CSV output (full precision)");
  j->excludes(c);
}

void add_model(CLI::App* cmd, Options& o) {
  cmd->add_option("--vars", o.vars, "7 | 7+NS | 7+NC | 7+NSC | comma-separated list");
  cmd->add_option("--transform", o.transform, "Data transform")->check(CLI::IsMember({"raw", "ln", "ln1p", "sqrt"}));
}

void add_factor(CLI::App* cmd, Options& o) {
  cmd->add_option("--factors", o.factors, "Number of factors")->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", o.threshold, "Loading threshold")->check(CLI::Range(0.0, 1.0));
}

void add_rotation(CLI::App* cmd, Options& o) {
  cmd->add_option("--rotation", o.rotation, "Rotation")->check(CLI::IsMember({"varimax", "promax", "none"}));
  cmd->add_option("--kappa", o.kappa, "Promax exponent")->check(CLI::IsMember({2, 3, 4}));
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hirsch-type index computation and factor analysis"};
  app.name("hirschfa");
  app.require_subcommand(1);
  Options o;

  auto* indices_cmd = app.add_subcommand("indices", "Compute indicators from citation records");
  add_input(indices_cmd, o);
  add_output(indices_cmd, o);

  auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics and KS tests");
  add_input(describe_cmd, o);
  add_model(describe_cmd, o);
  describe_cmd->add_option("--df", o.df, "Fixed Student df (default: maximum likelihood)")->check(CLI::PositiveNumber);
  add_output(describe_cmd, o);

  auto* efa_cmd = app.add_subcommand("efa", "Exploratory factor analysis");
  add_input(efa_cmd, o);
  add_model(efa_cmd, o);
  add_rotation(efa_cmd, o);
  add_factor(efa_cmd, o);
  add_output(efa_cmd, o);

  auto* cfa_cmd = app.add_subcommand("cfa", "Confirmatory factor analysis on the EFA-derived pattern");
  add_input(cfa_cmd, o);
  add_model(cfa_cmd, o);
  add_factor(cfa_cmd, o);
  add_output(cfa_cmd, o);

  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap the EFA loadings");
  add_input(boot_cmd, o);
  add_model(boot_cmd, o);
  add_rotation(boot_cmd, o);
  add_factor(boot_cmd, o);
  boot_cmd->add_option("--B", o.B, "Number of resamples")->check(CLI::Range(2, 1000000));
  boot_cmd->add_option("--seed", o.seed, "RNG seed");
  add_output(boot_cmd, o);

  auto* verify_cmd = app.add_subcommand("verify", "Recompute the reference tables and compare");
  add_input(verify_cmd, o);
  verify_cmd->add_option("--tolerance", o.tolerance, "Override every tolerance band")->check(CLI::NonNegativeNumber);
  verify_cmd->add_flag("--all", o.all, "List passing checks too");
  add_output(verify_cmd, o);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*indices_cmd) cmd_indices(o, out);
    if (*describe_cmd) cmd_describe(o, out);
    if (*efa_cmd) cmd_efa(o, out, err);
    if (*cfa_cmd) cmd_cfa(o, out);
    if (*boot_cmd) cmd_bootstrap(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace hirschfa::cli
