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

#include "embdim/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "embdim/attribution.hpp"
#include "embdim/classifier.hpp"
#include "embdim/evaluate.hpp"
#include "embdim/geometry.hpp"
#include "embdim/io.hpp"
#include "embdim/parallel.hpp"
#include "embdim/rank_analysis.hpp"
#include "embdim/report.hpp"
#include "embdim/stats.hpp"
#include "embdim/synthetic.hpp"
#include "embdim/truncation.hpp"

namespace fs = std::filesystem;

namespace embdim::cli {
namespace {

using nlohmann::json;
using report::Format;

constexpr const char* kDecileFractions = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";

struct Options {
  std::vector<std::string> task_dirs;
  std::string queries, docs, qrels;
  std::string train, test, labels;
  std::vector<std::string> emb;
  std::string fracs;
  std::optional<std::size_t> runs;
  std::uint64_t seed = 0;
  std::string mode = "last";
  std::string gain = "linear";
  std::string classifier = "logreg";
  double eps = 0.0;
  std::size_t depth = 100;
  std::string out;
  std::string format;
  std::optional<long long> workers;
  std::string make_toy;
  std::vector<fs::path> toy_dirs;  // filled once --make-toy has written them
  std::string attribution;
  std::string which = "degrading";
  std::string fit;
  std::string model = "model";
  bool per_task_masks = false;
};

struct Output {
  std::string contents;
  std::string summary;
};

std::vector<double> ParseFractions(const std::string& text) {
  std::vector<double> fractions;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double f = 0.0;
    try {
      f = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      Fail(ErrorKind::kUsage, "--fracs: '" + item + "' is not a number");
    }
    if (!(f >= 0.0 && f < 1.0)) Fail(ErrorKind::kUsage, "--fracs: values must lie in [0, 1)");
    if (!fractions.empty() && f <= fractions.back()) {
      Fail(ErrorKind::kUsage, "--fracs: values must be strictly increasing");
    }
    fractions.push_back(f);
  }
  if (fractions.empty()) Fail(ErrorKind::kUsage, "--fracs: no fractions given");
  return fractions;
}

void RequireFile(const std::string& path, const char* flag) {
  if (!fs::is_regular_file(path)) {
    Fail(ErrorKind::kIo, std::string(flag) + ": no such file '" + path + "'");
  }
}

std::string NameFor(const fs::path& emb_path) {
  if (auto meta = io::LoadMeta(emb_path); meta && !meta->dataset.empty()) return meta->dataset;
  const auto parent = fs::absolute(emb_path).parent_path().filename().string();
  return parent.empty() ? emb_path.stem().string() : parent;
}

std::vector<Task> LoadTasks(const Options& o) {
  std::vector<Task> tasks;
  for (const auto& dir : o.task_dirs) {
    if (!fs::is_directory(dir)) Fail(ErrorKind::kIo, "--task: no such directory '" + dir + "'");
    tasks.push_back(io::LoadBundle(dir));
  }
  const bool any_retrieval = !o.queries.empty() || !o.docs.empty() || !o.qrels.empty();
  if (any_retrieval) {
    if (o.queries.empty() || o.docs.empty() || o.qrels.empty()) {
      Fail(ErrorKind::kUsage, "--queries, --docs and --qrels go together");
    }
    RequireFile(o.queries, "--queries");
    RequireFile(o.docs, "--docs");
    RequireFile(o.qrels, "--qrels");
    tasks.emplace_back(io::LoadRetrievalTask(NameFor(o.queries), o.queries, o.docs, o.qrels));
  }
  const bool any_classification = !o.train.empty() || !o.test.empty() || !o.labels.empty();
  if (any_classification) {
    if (o.train.empty() || o.test.empty() || o.labels.empty()) {
      Fail(ErrorKind::kUsage, "--train, --test and --labels go together");
    }
    RequireFile(o.train, "--train");
    RequireFile(o.test, "--test");
    RequireFile(o.labels, "--labels");
    tasks.emplace_back(io::LoadClassificationTask(NameFor(o.train), o.train, o.test, o.labels));
  }
  if (tasks.empty()) {
    for (const auto& dir : o.toy_dirs) tasks.push_back(io::LoadBundle(dir));
  }
  if (tasks.empty()) {
    Fail(ErrorKind::kUsage,
         "no task given (use --task DIR, --queries/--docs/--qrels or --train/--test/--labels)");
  }
  std::set<std::string> names;
  for (const auto& t : tasks) {
    if (!names.insert(TaskName(t)).second) {
      Fail(ErrorKind::kUsage, "two tasks share the name '" + TaskName(t) + "'");
    }
  }
  return tasks;
}

EvalOptions MakeEvalOptions(const Options& o) {
  EvalOptions options;
  if (o.gain == "linear") {
    options.retrieval.gain = Gain::kLinear;
  } else if (o.gain == "exp") {
    options.retrieval.gain = Gain::kExponential;
  } else {
    Fail(ErrorKind::kUsage, "--gain must be linear or exp");
  }
  if (o.classifier == "logreg") {
    options.classification.kind = ClassifierKind::kLogisticRegression;
  } else if (o.classifier == "centroid") {
    options.classification.kind = ClassifierKind::kNearestCentroid;
  } else {
    Fail(ErrorKind::kUsage, "--classifier must be logreg or centroid");
  }
  return options;
}

TruncationSpec MakeSpec(const Options& o, std::size_t default_runs) {
  TruncationSpec spec;
  spec.mode = ParseTruncationMode(o.mode);
  spec.runs = o.runs.value_or(default_runs);
  if (spec.runs == 0) Fail(ErrorKind::kUsage, "--runs must be at least 1");
  spec.seed = o.seed;
  spec.per_task_masks = o.per_task_masks;
  return spec;
}

Format ResolveFormat(const Options& o, Format fallback, std::initializer_list<Format> allowed) {
  const Format format =
      o.format.empty() ? report::FormatForPath(o.out, fallback) : report::ParseFormat(o.format);
  if (std::find(allowed.begin(), allowed.end(), format) == allowed.end()) {
    Fail(ErrorKind::kUsage, "this subcommand cannot write that format");
  }
  return format;
}

std::string Num(double v) { return report::FormatNumber(v); }

std::vector<const EmbeddingMatrix*> OutlierRows(const std::vector<Task>& tasks) {
  std::vector<const EmbeddingMatrix*> rows;
  for (const auto& t : tasks) {
    if (const auto* r = std::get_if<RetrievalTask>(&t)) {
      rows.push_back(&r->queries);
    } else {
      rows.push_back(&std::get<ClassificationTask>(t).train);
    }
  }
  return rows;
}

OutlierReport OutliersOf(const std::vector<Task>& tasks) {
  std::vector<EmbeddingMatrix> sets;
  for (const auto* m : OutlierRows(tasks)) sets.push_back(*m);
  return FindOutlierDimensions(sets);
}

// ---- subcommands ----------------------------------------------------------

Output RunSweepCommand(const Options& o) {
  const auto tasks = LoadTasks(o);
  const auto fractions = ParseFractions(o.fracs.empty() ? kDecileFractions : o.fracs);
  const auto spec = MakeSpec(o, 1);
  const SweepReport rep = RunSweep(tasks, spec, fractions, MakeEvalOptions(o));
  Output out;
  switch (ResolveFormat(o, Format::kJson, {Format::kJson, Format::kCsv, Format::kMarkdown})) {
    case Format::kJson:
      out.contents = report::DumpJson(report::ToJson(rep));
      break;
    case Format::kCsv:
      out.contents = report::SweepCsv(rep);
      break;
    case Format::kMarkdown:
      out.contents = report::SweepMarkdown(rep);
      break;
  }
  out.summary = "sweep: " + std::to_string(tasks.size()) + " task(s), mode " + o.mode + ", " +
                std::to_string(fractions.size()) + " fraction(s) x " +
                std::to_string(rep.spec.runs) + " run(s); relative at " + Num(fractions.back()) +
                " = " + Num(rep.aggregate_mean.back());
  return out;
}

Output RunAttributeCommand(const Options& o) {
  if (o.eps < 0.0) Fail(ErrorKind::kUsage, "--eps must be non-negative");
  const auto tasks = LoadTasks(o);
  const auto options = MakeEvalOptions(o);
  std::vector<report::DatasetAttribution> datasets;
  for (const auto& task : tasks) {
    report::DatasetAttribution ds;
    ds.attribution = LeaveOneOut(task, options);
    ds.verdicts = ClassifyDimensions(ds.attribution.records, o.eps);
    datasets.push_back(std::move(ds));
  }
  Output out;
  std::string counts;
  for (const auto& ds : datasets) {
    counts += (counts.empty() ? "" : ", ") + ds.attribution.task + "=" +
              std::to_string(ds.verdicts.degrading.size());
  }
  out.summary = "attribute: " + std::to_string(tasks.size()) + " dataset(s); degrading " + counts;

  const Format format =
      ResolveFormat(o, Format::kCsv, {Format::kJson, Format::kCsv, Format::kMarkdown});
  if (format == Format::kCsv) {
    out.contents = report::AttributionCsv(datasets);
    return out;
  }
  bool same_dims = true;
  for (const auto& t : tasks) same_dims = same_dims && TaskDims(t) == TaskDims(tasks[0]);
  std::vector<std::size_t> outliers;
  if (same_dims) outliers = OutliersOf(tasks).outliers;

  std::vector<OutlierDegrading> odd;
  for (const auto& ds : datasets) {
    odd.push_back(FindOutlierDegrading(ds.attribution.records, ds.verdicts, outliers));
  }
  if (format == Format::kMarkdown) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
      const auto& v = datasets[i].verdicts;
      rows.push_back({datasets[i].attribution.task, Num(datasets[i].attribution.full_score),
                      std::to_string(v.degrading.size()), std::to_string(v.improving.size()),
                      std::to_string(v.neutral.size()), std::to_string(odd[i].dims.size())});
    }
    out.contents = report::DumpMarkdownTable(
        {"dataset", "full score", "degrading", "improving", "neutral", "ODD"}, rows);
    return out;
  }
  json doc = {{"eps", o.eps}, {"outlier_dims", outliers}};
  json list = json::array();
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto& ds = datasets[i];
    list.push_back({{"dataset", ds.attribution.task},
                    {"metric", MetricName(std::holds_alternative<RetrievalTask>(tasks[i])
                                              ? Metric::kNdcgAt10
                                              : Metric::kAccuracy)},
                    {"full_score", ds.attribution.full_score},
                    {"degrading", ds.verdicts.degrading},
                    {"improving", ds.verdicts.improving},
                    {"n_neutral", ds.verdicts.neutral.size()},
                    {"odd",
                     {{"dims", odd[i].dims},
                      {"mean", odd[i].mean},
                      {"std", odd[i].std},
                      {"outlier_overlap", odd[i].outlier_overlap}}}});
  }
  doc["datasets"] = std::move(list);
  if (same_dims) {
    std::vector<DimensionVerdicts> verdicts;
    for (const auto& ds : datasets) verdicts.push_back(ds.verdicts);
    doc["shared_degrading"] = report::ToJson(SharedDegrading(verdicts));
  }
  out.contents = report::DumpJson(doc);
  return out;
}

Output RunCurveCommand(const Options& o) {
  const auto tasks = LoadTasks(o);
  const auto options = MakeEvalOptions(o);
  const auto fractions = ParseFractions(o.fracs.empty() ? "0,0.1,0.2,0.3,0.4,0.5" : o.fracs);
  std::vector<report::NamedCurve> curves;
  if (o.which == "degrading" || o.which == "improving") {
    if (o.attribution.empty()) Fail(ErrorKind::kUsage, "--which " + o.which + " needs --attribution");
    std::ifstream in(o.attribution, std::ios::binary);
    if (!in) Fail(ErrorKind::kIo, "--attribution: cannot open '" + o.attribution + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto datasets = report::ParseAttributionCsv(buffer.str());
    const GuidedSet which = o.which == "degrading" ? GuidedSet::kDegrading : GuidedSet::kImproving;
    for (const auto& task : tasks) {
      const auto it = std::find_if(datasets.begin(), datasets.end(), [&](const auto& ds) {
        return ds.attribution.task == TaskName(task);
      });
      if (it == datasets.end()) {
        Fail(ErrorKind::kData, "attribution CSV has no rows for task '" + TaskName(task) + "'");
      }
      if (it->attribution.records.size() != TaskDims(task)) {
        Fail(ErrorKind::kDimension, "attribution for '" + TaskName(task) + "' covers " +
                                        std::to_string(it->attribution.records.size()) +
                                        " dimensions, task has " + std::to_string(TaskDims(task)));
      }
      curves.push_back({TaskName(task), GuidedRemovalCurve(task, it->attribution.records,
                                                           it->verdicts, which, fractions,
                                                           options)});
    }
  } else {
    Options mode_options = o;
    mode_options.mode = o.which;
    const auto spec = MakeSpec(mode_options, 1);
    const SweepReport rep = RunSweep(tasks, spec, fractions, options);
    for (const auto& ts : rep.tasks) {
      report::NamedCurve curve{ts.task, {}};
      for (std::size_t f = 0; f < fractions.size(); ++f) {
        std::vector<double> scores;
        for (const auto& r : ts.results[f]) scores.push_back(r.score);
        curve.points.push_back({fractions[f], RemovalCount(TaskDims(tasks[0]), fractions[f]),
                                Mean(scores), ts.mean_relative[f]});
      }
      curves.push_back(std::move(curve));
    }
  }
  Output out;
  if (ResolveFormat(o, Format::kCsv, {Format::kCsv, Format::kJson}) == Format::kCsv) {
    out.contents = report::CurveCsv(curves);
  } else {
    json doc = json::object();
    for (const auto& c : curves) {
      json points = json::array();
      for (const auto& p : c.points) {
        points.push_back({{"fraction", p.fraction},
                          {"n_removed", p.n_removed},
                          {"score", p.score},
                          {"relative", p.relative}});
      }
      doc[c.task] = std::move(points);
    }
    out.contents = report::DumpJson({{"which", o.which}, {"curves", doc}});
  }
  std::size_t n_points = 0;
  for (const auto& c : curves) n_points += c.points.size();
  out.summary = "curve: " + o.which + " removal, " + std::to_string(curves.size()) +
                " task(s), " + std::to_string(n_points) + " point(s)";
  return out;
}

Output RunGeometryCommand(const Options& o) {
  std::vector<std::pair<std::string, EmbeddingMatrix>> inputs;
  for (const auto& path : o.emb) {
    RequireFile(path, "--emb");
    inputs.emplace_back(fs::path(path).stem().string(), io::LoadEmbeddings(path));
  }
  const bool has_tasks = !o.task_dirs.empty() || !o.queries.empty() || !o.train.empty() ||
                         (!o.toy_dirs.empty() && o.emb.empty());
  if (has_tasks) {
    for (const auto& t : LoadTasks(o)) {
      if (const auto* r = std::get_if<RetrievalTask>(&t)) {
        inputs.emplace_back(r->name + "/queries", r->queries);
        inputs.emplace_back(r->name + "/docs", r->documents);
      } else {
        const auto& c = std::get<ClassificationTask>(t);
        inputs.emplace_back(c.name + "/train", c.train);
        inputs.emplace_back(c.name + "/test", c.test);
      }
    }
  }
  if (inputs.empty()) Fail(ErrorKind::kUsage, "geometry needs --emb FILE or a task");
  std::vector<GeometryReport> reports(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    reports[i] = ComputeGeometry(inputs[i].second, o.seed);
  }
  Output out;
  const Format format =
      ResolveFormat(o, Format::kJson, {Format::kJson, Format::kCsv, Format::kMarkdown});
  if (format == Format::kJson) {
    json doc = json::object();
    for (std::size_t i = 0; i < inputs.size(); ++i) doc[inputs[i].first] = report::ToJson(reports[i]);
    out.contents = report::DumpJson(doc);
  } else {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      rows.push_back({inputs[i].first, Num(reports[i].uniform_loss), Num(reports[i].isoscore),
                      Num(reports[i].mean_abs_corr), std::to_string(reports[i].n_points),
                      std::to_string(reports[i].dims)});
    }
    const std::vector<std::string> header = {"matrix", "uniform_loss", "isoscore",
                                             "mean_abs_corr", "n_points", "dims"};
    out.contents = format == Format::kCsv ? report::DumpCsv(header, rows)
                                          : report::DumpMarkdownTable(header, rows);
  }
  out.summary = "geometry: " + std::to_string(inputs.size()) + " matrix(es); " +
                inputs[0].first + " uniform_loss " + Num(reports[0].uniform_loss) + ", isoscore " +
                Num(reports[0].isoscore);
  return out;
}

Output RunOutliersCommand(const Options& o) {
  const auto tasks = LoadTasks(o);
  const OutlierReport outliers = OutliersOf(tasks);
  const std::size_t trials = o.runs.value_or(10);
  if (trials == 0) Fail(ErrorKind::kUsage, "--runs must be at least 1");
  std::optional<OutlierTrialReport> trial;
  if (!outliers.outliers.empty()) {
    trial = OutlierControlTrial(tasks, outliers.outliers, trials, o.seed, MakeEvalOptions(o));
  }
  Output out;
  const Format format =
      ResolveFormat(o, Format::kJson, {Format::kJson, Format::kCsv, Format::kMarkdown});
  if (format == Format::kJson) {
    json doc = {{"model", o.model}, {"outliers", report::ToJson(outliers)}};
    if (trial) doc["control_trial"] = report::ToJson(*trial);
    out.contents = report::DumpJson(doc);
  } else if (format == Format::kCsv) {
    out.contents = trial ? report::ControlTrialCsv(*trial)
                         : report::DumpCsv({"trial", "removed_set_hash", "score"}, {});
  } else if (trial) {
    out.contents = report::OutlierMarkdown(o.model, *trial);
  } else {
    out.contents = report::DumpMarkdownTable(
        {"model", "# outliers", "outlier score", "control mean ± std"}, {{o.model, "0", "-", "-"}});
  }
  out.summary = "outliers: " + std::to_string(outliers.outliers.size()) + " outlier dimension(s)";
  if (trial) {
    out.summary += "; removed score " + Num(trial->outlier_removed_score) + " vs control " +
                   Num(trial->control_mean) + " +/- " + Num(trial->control_std);
  } else if (!outliers.note.empty()) {
    out.summary += " (" + outliers.note + ")";
  }
  return out;
}

Output RunPcaCommand(const Options& o) {
  const auto tasks = LoadTasks(o);
  const auto fractions = ParseFractions(o.fracs.empty() ? "0.5" : o.fracs);
  if (fractions.size() != 1) Fail(ErrorKind::kUsage, "pca takes exactly one fraction");
  std::optional<EmbeddingMatrix> fit;
  if (!o.fit.empty()) {
    RequireFile(o.fit, "--fit");
    fit = io::LoadEmbeddings(o.fit);
  }
  const PcaComparison cmp =
      ComparePcaToTruncation(tasks, fractions[0], o.runs.value_or(5), o.seed,
                             fit ? &*fit : nullptr, MakeEvalOptions(o));
  Output out;
  switch (ResolveFormat(o, Format::kJson, {Format::kJson, Format::kCsv, Format::kMarkdown})) {
    case Format::kJson:
      out.contents = report::DumpJson(report::ToJson(cmp));
      break;
    case Format::kCsv:
      out.contents = report::PcaComparisonCsv(cmp);
      break;
    case Format::kMarkdown:
      out.contents = report::PcaComparisonMarkdown(cmp);
      break;
  }
  out.summary = "pca: D " + std::to_string(cmp.dims) + " -> " + std::to_string(cmp.target_dim) +
                "; relative PCA " + Num(cmp.pca_mean_relative) + " vs random " +
                Num(cmp.random_mean_relative);
  return out;
}

Output RunRankcorrCommand(const Options& o) {
  std::vector<RetrievalTask> tasks;
  for (auto& t : LoadTasks(o)) {
    if (auto* r = std::get_if<RetrievalTask>(&t)) tasks.push_back(std::move(*r));
  }
  if (tasks.empty()) Fail(ErrorKind::kUsage, "rankcorr needs at least one retrieval task");
  const auto fractions = ParseFractions(o.fracs.empty() ? kDecileFractions : o.fracs);
  const RankAgreementCurve curve = RankAgreement(tasks, MakeSpec(o, 1), fractions, o.depth);
  Output out;
  if (ResolveFormat(o, Format::kCsv, {Format::kCsv, Format::kJson}) == Format::kCsv) {
    out.contents = report::RankAgreementCsv(curve);
  } else {
    json points = json::array();
    for (const auto& p : curve) {
      points.push_back({{"fraction", p.fraction},
                        {"mean_rho", p.mean_rho},
                        {"std_rho", p.std_rho},
                        {"n_queries", p.n_queries}});
    }
    out.contents = report::DumpJson({{"mode", o.mode}, {"depth", o.depth}, {"curve", points}});
  }
  out.summary = "rankcorr: " + std::to_string(curve.front().n_queries) + " queries, mean rho at " +
                Num(curve.back().fraction) + " = " + Num(curve.back().mean_rho);
  return out;
}

std::vector<std::vector<std::string>> ResultRows(const std::vector<EvalResult>& results) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    rows.push_back({r.task_name, MetricName(r.metric), Num(r.score), r.mask_spec});
  }
  return rows;
}

Output EmitResults(const Options& o, const std::vector<EvalResult>& results, json extra) {
  Output out;
  const std::vector<std::string> header = {"task", "metric", "score", "mask_spec"};
  switch (ResolveFormat(o, Format::kJson, {Format::kJson, Format::kCsv, Format::kMarkdown})) {
    case Format::kJson: {
      json list = json::array();
      for (const auto& r : results) list.push_back(report::ToJson(r));
      extra["results"] = std::move(list);
      out.contents = report::DumpJson(extra);
      break;
    }
    case Format::kCsv:
      out.contents = report::DumpCsv(header, ResultRows(results));
      break;
    case Format::kMarkdown:
      out.contents = report::DumpMarkdownTable(header, ResultRows(results));
      break;
  }
  return out;
}

Output RunClassifyCommand(const Options& o) {
  std::vector<Task> tasks;
  for (auto& t : LoadTasks(o)) {
    if (std::holds_alternative<ClassificationTask>(t)) tasks.push_back(std::move(t));
  }
  if (tasks.empty()) Fail(ErrorKind::kUsage, "classify needs at least one classification task");
  const auto results = EvaluateAll(tasks, MakeEvalOptions(o));
  Output out = EmitResults(o, results, {{"classifier", o.classifier}});
  double mean = 0.0;
  for (const auto& r : results) mean += r.score / static_cast<double>(results.size());
  out.summary = "classify: " + std::to_string(results.size()) + " task(s), " + o.classifier +
                ", mean accuracy " + Num(mean);
  return out;
}

Output RunReportCommand(const Options& o) {
  const auto tasks = LoadTasks(o);
  const auto fractions = ParseFractions(o.fracs.empty() ? "0" : o.fracs);
  if (fractions.size() != 1) Fail(ErrorKind::kUsage, "report takes exactly one fraction");
  const auto spec = MakeSpec(o, 1);
  const auto options = MakeEvalOptions(o);
  std::vector<EvalResult> results(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const DimensionMask mask = MakeMask(spec, TaskDims(tasks[t]), fractions[0], 0, t);
    results[t] = Evaluate(tasks[t], mask.empty() ? nullptr : &mask, options);
    if (!mask.empty()) {
      results[t].mask = mask;
      results[t].mask_spec = std::string(TruncationModeName(spec.mode)) + ":" +
                             Num(fractions[0]) + ":" + mask.Describe();
    }
  }
  Output out = EmitResults(o, results, json::object());
  out.summary = "report: " + std::to_string(results.size()) + " task(s) evaluated";
  return out;
}

// ---------------------------------------------------------------------------

void ApplyWorkers(const Options& o) {
  std::optional<long long> workers = o.workers;
  if (const char* env = std::getenv("EMBDIM_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long value = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0') {
      Fail(ErrorKind::kUsage, std::string("EMBDIM_WORKERS: '") + env + "' is not an integer");
    }
    workers = value;
  }
  if (workers && *workers < 1) Fail(ErrorKind::kUsage, "worker count must be at least 1");
  SetWorkerCount(workers ? static_cast<std::size_t>(*workers)
                         : std::max(1u, std::thread::hardware_concurrency()));
}

void AddTaskInputs(CLI::App* sub, Options& o) {
  sub->add_option("--task", o.task_dirs, "Task bundle directory (repeatable)");
  sub->add_option("--queries", o.queries, "Query embeddings (.emb)");
  sub->add_option("--docs", o.docs, "Document embeddings (.emb)");
  sub->add_option("--qrels", o.qrels, "Relevance judgments (TSV)");
  sub->add_option("--train", o.train, "Training embeddings (.emb)");
  sub->add_option("--test", o.test, "Test embeddings (.emb)");
  sub->add_option("--labels", o.labels, "Labels for train and test rows (TSV)");
}

void AddOutput(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output path (stdout when omitted)");
  sub->add_option("--format", o.format, "json|csv|md (default: from --out extension)")
      ->check(CLI::IsMember({"json", "csv", "md"}));
}

void AddEval(CLI::App* sub, Options& o) {
  sub->add_option("--gain", o.gain, "nDCG gain: linear or exp")
      ->check(CLI::IsMember({"linear", "exp"}));
  sub->add_option("--classifier", o.classifier, "logreg or centroid")
      ->check(CLI::IsMember({"logreg", "centroid"}));
}

void AddTruncation(CLI::App* sub, Options& o, bool with_mode) {
  sub->add_option("--fracs", o.fracs, "Comma-separated fractions in [0, 1), increasing");
  sub->add_option("--runs", o.runs, "Random runs / control trials");
  sub->add_option("--seed", o.seed, "Seed");
  if (with_mode) {
    sub->add_option("--mode", o.mode, "last|first|random")
        ->check(CLI::IsMember({"last", "first", "random"}));
    sub->add_flag("--per-task-masks", o.per_task_masks, "Draw random masks per task");
  }
}

}  // namespace

int ExitCodeFor(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kIo:
      return kExitUsage;
    case ErrorKind::kFormat:
    case ErrorKind::kTruncated:
    case ErrorKind::kData:
    case ErrorKind::kAlignment:
    case ErrorKind::kDimension:
      return kExitData;
    case ErrorKind::kDegenerate:
      return kExitDegenerate;
  }
  return kExitInternal;
}

int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Per-dimension diagnostics for text-embedding matrices", "embdim"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.add_option("--workers", o.workers, "Worker threads (EMBDIM_WORKERS overrides)");
  app.add_option("--make-toy", o.make_toy,
                 "Write the synthetic toy bundles into DIR; subcommands without other inputs "
                 "then use them");

  using Handler = Output (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto* sweep = app.add_subcommand("sweep", "Truncation sweep and relative performance");
  AddTaskInputs(sweep, o);
  AddTruncation(sweep, o, true);
  AddEval(sweep, o);
  AddOutput(sweep, o);
  commands.emplace_back(sweep, RunSweepCommand);

  auto* attribute = app.add_subcommand("attribute", "Leave-one-dimension-out attribution");
  AddTaskInputs(attribute, o);
  attribute->add_option("--eps", o.eps, "Verdict tolerance on delta (>= 0)");
  AddEval(attribute, o);
  AddOutput(attribute, o);
  commands.emplace_back(attribute, RunAttributeCommand);

  auto* curve = app.add_subcommand("curve", "Guided or contiguous removal curve");
  AddTaskInputs(curve, o);
  curve->add_option("--attribution", o.attribution, "Attribution CSV written by `attribute`");
  curve->add_option("--which", o.which, "degrading|improving|last|first|random")
      ->check(CLI::IsMember({"degrading", "improving", "last", "first", "random"}));
  AddTruncation(curve, o, false);
  AddEval(curve, o);
  AddOutput(curve, o);
  commands.emplace_back(curve, RunCurveCommand);

  auto* geometry = app.add_subcommand("geometry", "Uniform loss, IsoScore, mean |correlation|");
  AddTaskInputs(geometry, o);
  geometry->add_option("--emb", o.emb, "Embedding file (repeatable)");
  geometry->add_option("--seed", o.seed, "Subsampling seed");
  AddOutput(geometry, o);
  commands.emplace_back(geometry, RunGeometryCommand);

  auto* outliers = app.add_subcommand("outliers", "Outlier dimensions and control trial");
  AddTaskInputs(outliers, o);
  outliers->add_option("--runs", o.runs, "Control trials (default 10)");
  outliers->add_option("--seed", o.seed, "Seed");
  outliers->add_option("--model", o.model, "Model name for the summary table");
  AddEval(outliers, o);
  AddOutput(outliers, o);
  commands.emplace_back(outliers, RunOutliersCommand);

  auto* pca = app.add_subcommand("pca", "PCA reduction against random truncation");
  AddTaskInputs(pca, o);
  pca->add_option("--fracs", o.fracs, "Removed fraction (default 0.5)");
  pca->add_option("--runs", o.runs, "Random runs (default 5)");
  pca->add_option("--seed", o.seed, "Seed");
  pca->add_option("--fit", o.fit, "Fit PCA on this matrix instead of each task's corpus");
  AddEval(pca, o);
  AddOutput(pca, o);
  commands.emplace_back(pca, RunPcaCommand);

  auto* rankcorr = app.add_subcommand("rankcorr", "Spearman agreement of truncated rankings");
  AddTaskInputs(rankcorr, o);
  AddTruncation(rankcorr, o, true);
  rankcorr->add_option("--depth", o.depth, "Candidates per query from the full ranking");
  AddOutput(rankcorr, o);
  commands.emplace_back(rankcorr, RunRankcorrCommand);

  auto* classify = app.add_subcommand("classify", "Train and score classification tasks");
  AddTaskInputs(classify, o);
  AddEval(classify, o);
  AddOutput(classify, o);
  commands.emplace_back(classify, RunClassifyCommand);

  auto* report_cmd = app.add_subcommand("report", "Evaluate every task under one mask");
  AddTaskInputs(report_cmd, o);
  AddTruncation(report_cmd, o, true);
  AddEval(report_cmd, o);
  AddOutput(report_cmd, o);
  commands.emplace_back(report_cmd, RunReportCommand);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    ApplyWorkers(o);
    Handler handler = nullptr;
    for (const auto& [sub, h] : commands) {
      if (sub->parsed()) handler = h;
    }
    if (!o.make_toy.empty()) o.toy_dirs = synthetic::WriteToyBundles(o.make_toy, o.seed);
    if (handler == nullptr) {
      if (o.make_toy.empty()) {
        err << app.help();
        return kExitUsage;
      }
      out << "make-toy: wrote " << o.toy_dirs.size() << " bundles to " << o.make_toy << "\n";
      return kExitOk;
    }
    const Output result = handler(o);
    if (o.out.empty()) {
      out << result.contents;
      err << result.summary << "\n";
    } else {
      io::WriteFileAtomic(o.out, result.contents);
      out << result.summary << " -> " << o.out << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace embdim::cli
