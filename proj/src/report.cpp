/*
 * Copyright 2026 The embdim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "embdim/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "embdim/error.hpp"

namespace embdim::report {
namespace {

void DumpValue(const nlohmann::json& value, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      // nlohmann::json objects are std::map backed: iteration is key-sorted.
      out += "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::json(it.key()).dump() + ": ";
        DumpValue(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      const bool scalars = std::none_of(value.begin(), value.end(), [](const auto& v) {
        return v.is_object() || v.is_array();
      });
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i > 0) out += ", ";
          DumpValue(value[i], indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        DumpValue(value[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += FormatNumber(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::vector<std::string> ParseCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double ParseDouble(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    Fail(ErrorKind::kData, "expected a number, got '" + text + "'");
  }
  return value;
}

std::string Str(std::size_t v) { return std::to_string(v); }

}  // namespace

Format ParseFormat(const std::string& name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  if (name == "md") return Format::kMarkdown;
  Fail(ErrorKind::kUsage, "unknown format '" + name + "' (json|csv|md)");
}

Format FormatForPath(const std::filesystem::path& path, Format fallback) {
  const auto ext = path.extension().string();
  if (ext == ".json") return Format::kJson;
  if (ext == ".csv") return Format::kCsv;
  if (ext == ".md") return Format::kMarkdown;
  return fallback;
}

std::string FormatNumber(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string DumpJson(const nlohmann::json& doc) {
  std::string out;
  DumpValue(doc, 0, out);
  out += "\n";
  return out;
}

std::string DumpCsv(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += CsvField(fields[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

std::string DumpMarkdownTable(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    out += "|";
    for (const auto& f : fields) out += " " + f + " |";
    out += "\n";
  };
  line(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : rows) line(row);
  return out;
}

nlohmann::json ToJson(const EvalResult& result) {
  return {{"task", result.task_name},
          {"metric", MetricName(result.metric)},
          {"score", result.score},
          {"mask_spec", result.mask_spec}};
}

nlohmann::json ToJson(const SweepReport& report) {
  nlohmann::json per_task = nlohmann::json::object();
  for (const auto& ts : report.tasks) {
    nlohmann::json runs = nlohmann::json::array();
    nlohmann::json relative = nlohmann::json::array();
    for (std::size_t f = 0; f < report.fractions.size(); ++f) {
      nlohmann::json scores = nlohmann::json::array();
      for (const auto& r : ts.results[f]) scores.push_back(r.score);
      runs.push_back(std::move(scores));
      relative.push_back(ts.relative[f]);
    }
    per_task[ts.task] = {{"metric", MetricName(ts.full.metric)},
                         {"full_score", ts.full.score},
                         {"per_fraction",
                          {{"mean_rel", ts.mean_relative},
                           {"std_rel", ts.std_relative},
                           {"runs", std::move(runs)},
                           {"relative", std::move(relative)}}}};
  }
  return {{"mode", TruncationModeName(report.spec.mode)},
          {"runs", report.spec.runs},
          {"seed", report.spec.seed},
          {"fractions", report.fractions},
          {"per_task", std::move(per_task)},
          {"aggregate", {{"mean_rel", report.aggregate_mean}, {"std_rel", report.aggregate_std}}}};
}

nlohmann::json ToJson(const GeometryReport& report) {
  return {{"uniform_loss", report.uniform_loss},
          {"isoscore", report.isoscore},
          {"mean_abs_corr", report.mean_abs_corr},
          {"n_points", report.n_points},
          {"dims", report.dims},
          {"uniform_loss_points", report.uniform_loss_points},
          {"corr_pairs_skipped", report.corr_pairs_skipped}};
}

nlohmann::json ToJson(const OutlierReport& report) {
  nlohmann::json doc = {{"mean", report.mean},
                        {"std", report.std},
                        {"outliers", report.outliers},
                        {"n_outliers", report.outliers.size()},
                        {"n_rows", report.n_rows},
                        {"mean_embedding", report.mean_embedding}};
  if (!report.note.empty()) doc["note"] = report.note;
  return doc;
}

nlohmann::json ToJson(const OutlierTrialReport& report) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"trial", t.trial},
                      {"removed", t.removed},
                      {"removed_set_hash", t.removed_hash},
                      {"task_scores", t.task_scores},
                      {"score", t.score}});
  }
  return {{"outliers", report.outliers},
          {"tasks", report.tasks},
          {"full_scores", report.full_scores},
          {"outlier_removed_scores", report.outlier_removed_scores},
          {"full_score", report.full_score},
          {"outlier_removed_score", report.outlier_removed_score},
          {"control", {{"mean", report.control_mean}, {"std", report.control_std}}},
          {"trials", std::move(trials)}};
}

nlohmann::json ToJson(const SharedDegradingHistogram& histogram) {
  nlohmann::json shared = nlohmann::json::array();
  for (std::size_t m = 0; m < histogram.ratios.size(); ++m) {
    shared.push_back({{"datasets", m + 1},
                      {"count", histogram.counts[m]},
                      {"ratio", histogram.ratios[m]}});
  }
  return {{"dims", histogram.dims}, {"n_datasets", histogram.n_datasets}, {"shared", shared}};
}

nlohmann::json ToJson(const PcaComparison& comparison) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : comparison.rows) {
    rows.push_back({{"task", r.task},
                    {"metric", MetricName(r.metric)},
                    {"full_score", r.full_score},
                    {"pca_score", r.pca_score},
                    {"pca_relative", r.pca_relative},
                    {"random_mean_relative", r.random_mean_relative},
                    {"random_std_relative", r.random_std_relative},
                    {"effective_dim", r.effective_dim}});
  }
  return {{"fraction", comparison.fraction},
          {"dims", comparison.dims},
          {"target_dim", comparison.target_dim},
          {"runs", comparison.runs},
          {"tasks", std::move(rows)},
          {"pca_mean_relative", comparison.pca_mean_relative},
          {"random_mean_relative", comparison.random_mean_relative},
          {"warnings", comparison.warnings}};
}

std::string PcaComparisonCsv(const PcaComparison& comparison) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : comparison.rows) {
    rows.push_back({r.task, MetricName(r.metric), FormatNumber(r.full_score),
                    FormatNumber(r.pca_score), FormatNumber(r.pca_relative),
                    FormatNumber(r.random_mean_relative), FormatNumber(r.random_std_relative)});
  }
  return DumpCsv({"task", "metric", "full_score", "pca_score", "pca_relative",
                  "random_mean_relative", "random_std_relative"},
                 rows);
}

std::string PcaComparisonMarkdown(const PcaComparison& comparison) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : comparison.rows) {
    rows.push_back({r.task, FormatNumber(r.random_mean_relative), FormatNumber(r.pca_relative)});
  }
  rows.push_back({"mean", FormatNumber(comparison.random_mean_relative),
                  FormatNumber(comparison.pca_mean_relative)});
  return DumpMarkdownTable({"task", "Trun. (relative)", "PCA (relative)"}, rows);
}

std::string SweepCsv(const SweepReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t f = 0; f < report.fractions.size(); ++f) {
    for (const auto& ts : report.tasks) {
      for (std::size_t r = 0; r < ts.results[f].size(); ++r) {
        rows.push_back({FormatNumber(report.fractions[f]), ts.task, Str(r),
                        FormatNumber(ts.results[f][r].score), FormatNumber(ts.relative[f][r])});
      }
    }
  }
  return DumpCsv({"fraction", "task", "run", "score", "relative"}, rows);
}

std::string SweepMarkdown(const SweepReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t f = 0; f < report.fractions.size(); ++f) {
    rows.push_back({FormatNumber(report.fractions[f]), FormatNumber(report.aggregate_mean[f]),
                    FormatNumber(report.aggregate_std[f])});
  }
  return DumpMarkdownTable({"fraction", "relative (mean)", "std"}, rows);
}

std::string AttributionCsv(std::span<const DatasetAttribution> datasets) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& ds : datasets) {
    for (const auto& r : ds.attribution.records) {
      rows.push_back({ds.attribution.task, Str(r.dim), FormatNumber(r.score_without),
                      FormatNumber(r.delta), VerdictName(ds.verdicts.by_dim[r.dim])});
    }
  }
  return DumpCsv({"dataset", "dim", "score_without", "delta", "verdict"}, rows);
}

std::vector<DatasetAttribution> ParseAttributionCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || ParseCsvLine(line) != std::vector<std::string>{
                                     "dataset", "dim", "score_without", "delta", "verdict"}) {
    Fail(ErrorKind::kFormat, "attribution CSV must start with "
                             "dataset,dim,score_without,delta,verdict");
  }
  std::vector<DatasetAttribution> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<Verdict>> verdicts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = ParseCsvLine(line);
    if (f.size() != 5) Fail(ErrorKind::kFormat, "attribution CSV row needs 5 fields: " + line);
    auto [it, inserted] = index.emplace(f[0], out.size());
    if (inserted) {
      out.emplace_back();
      out.back().attribution.task = f[0];
      verdicts.emplace_back();
    }
    AttributionRecord record;
    record.dim = static_cast<std::size_t>(ParseDouble(f[1]));
    record.score_without = ParseDouble(f[2]);
    record.delta = ParseDouble(f[3]);
    Verdict verdict = Verdict::kNeutral;
    if (f[4] == "degrading") {
      verdict = Verdict::kDegrading;
    } else if (f[4] == "improving") {
      verdict = Verdict::kImproving;
    } else if (f[4] != "neutral") {
      Fail(ErrorKind::kFormat, "unknown verdict '" + f[4] + "'");
    }
    out[it->second].attribution.records.push_back(record);
    verdicts[it->second].push_back(verdict);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& ds = out[i];
    const std::size_t dims = ds.attribution.records.size();
    ds.verdicts.by_dim.assign(dims, Verdict::kNeutral);
    std::vector<char> seen(dims, 0);
    for (std::size_t k = 0; k < dims; ++k) {
      const std::size_t d = ds.attribution.records[k].dim;
      if (d >= dims || seen[d]) {
        Fail(ErrorKind::kData, "dataset '" + ds.attribution.task +
                                   "' does not list every dimension exactly once");
      }
      seen[d] = 1;
      ds.verdicts.by_dim[d] = verdicts[i][k];
    }
    std::sort(ds.attribution.records.begin(), ds.attribution.records.end(),
              [](const auto& a, const auto& b) { return a.dim < b.dim; });
    for (std::size_t d = 0; d < dims; ++d) {
      switch (ds.verdicts.by_dim[d]) {
        case Verdict::kDegrading:
          ds.verdicts.degrading.push_back(d);
          break;
        case Verdict::kImproving:
          ds.verdicts.improving.push_back(d);
          break;
        case Verdict::kNeutral:
          ds.verdicts.neutral.push_back(d);
          break;
      }
    }
    if (!ds.attribution.records.empty()) {
      const auto& r = ds.attribution.records.front();
      ds.attribution.full_score = r.score_without - r.delta;
    }
  }
  return out;
}

std::string CurveCsv(std::span<const NamedCurve> curves) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      rows.push_back({curve.task, FormatNumber(p.fraction), Str(p.n_removed),
                      FormatNumber(p.score), FormatNumber(p.relative)});
    }
  }
  return DumpCsv({"task", "fraction", "n_removed", "score", "relative"}, rows);
}

std::string RankAgreementCsv(const RankAgreementCurve& curve) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : curve) {
    rows.push_back({FormatNumber(p.fraction), FormatNumber(p.mean_rho), FormatNumber(p.std_rho),
                    Str(p.n_queries)});
  }
  return DumpCsv({"fraction", "mean_rho", "std_rho", "n_queries"}, rows);
}

std::string ControlTrialCsv(const OutlierTrialReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : report.trials) {
    rows.push_back({Str(t.trial), t.removed_hash, FormatNumber(t.score)});
  }
  return DumpCsv({"trial", "removed_set_hash", "score"}, rows);
}

std::string OutlierMarkdown(const std::string& model, const OutlierTrialReport& report) {
  return DumpMarkdownTable(
      {"model", "# outliers", "outlier score", "control mean ± std"},
      {{model, Str(report.outliers.size()), FormatNumber(report.outlier_removed_score),
        FormatNumber(report.control_mean) + " ± " + FormatNumber(report.control_std)}});
}

}  // namespace embdim::report
