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

#include "embdim/truncation.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "embdim/error.hpp"
#include "embdim/parallel.hpp"
#include "embdim/pca.hpp"
#include "embdim/random.hpp"

namespace embdim {

const char* TruncationModeName(TruncationMode mode) noexcept {
  switch (mode) {
    case TruncationMode::kLast:
      return "last";
    case TruncationMode::kFirst:
      return "first";
    case TruncationMode::kRandom:
      return "random";
  }
  return "unknown";
}

TruncationMode ParseTruncationMode(const std::string& name) {
  if (name == "last") return TruncationMode::kLast;
  if (name == "first") return TruncationMode::kFirst;
  if (name == "random") return TruncationMode::kRandom;
  Fail(ErrorKind::kUsage, "unknown truncation mode '" + name + "' (last|first|random)");
}

std::size_t RemovalCount(std::size_t dims, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    Fail(ErrorKind::kUsage, "truncation fraction must lie in [0, 1), got " + std::to_string(fraction));
  }
  const auto removed = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(dims) + 0.5));
  if (removed >= dims) {
    Fail(ErrorKind::kDegenerate, "fraction " + std::to_string(fraction) + " removes all " +
                                     std::to_string(dims) + " dimensions");
  }
  return removed;
}

DimensionMask MakeContiguousMask(std::size_t dims, double fraction, TruncationMode end) {
  if (end == TruncationMode::kRandom) {
    Fail(ErrorKind::kUsage, "contiguous masks are first or last");
  }
  const std::size_t removed = RemovalCount(dims, fraction);
  std::vector<std::size_t> indices(removed);
  const std::size_t start = end == TruncationMode::kLast ? dims - removed : 0;
  std::iota(indices.begin(), indices.end(), start);
  return {dims, std::move(indices)};
}

DimensionMask MakeRandomMask(std::size_t dims, double fraction, std::uint64_t seed,
                             std::size_t run_index) {
  const std::size_t removed = RemovalCount(dims, fraction);
  SplitMix64 rng = SplitMix64::ForStream(seed, run_index);
  return {dims, SampleWithoutReplacement(dims, removed, rng)};
}

DimensionMask MakeMask(const TruncationSpec& spec, std::size_t dims, double fraction,
                       std::size_t run_index, std::size_t task_index) {
  if (spec.mode != TruncationMode::kRandom) return MakeContiguousMask(dims, fraction, spec.mode);
  std::uint64_t seed = spec.seed;
  if (spec.per_task_masks) seed = SplitMix64::ForStream(spec.seed, task_index).Next();
  return MakeRandomMask(dims, fraction, seed, run_index);
}

SweepReport RunSweep(std::span<const Task> tasks, const TruncationSpec& spec,
                     std::span<const double> fractions, const EvalOptions& options) {
  if (tasks.empty()) Fail(ErrorKind::kUsage, "sweep needs at least one task");
  if (fractions.empty()) Fail(ErrorKind::kUsage, "sweep needs at least one fraction");
  if (spec.runs == 0) Fail(ErrorKind::kUsage, "runs must be at least 1");
  const std::size_t runs = spec.mode == TruncationMode::kRandom ? spec.runs : 1;
  const std::size_t dims = TaskDims(tasks[0]);
  for (const auto& task : tasks) {
    if (TaskDims(task) != dims) {
      Fail(ErrorKind::kDimension, "sweep tasks disagree on dimensionality (" +
                                      std::to_string(dims) + " vs " +
                                      std::to_string(TaskDims(task)) + ")");
    }
  }
  for (double f : fractions) RemovalCount(dims, f);

  SweepReport report;
  report.spec = spec;
  report.spec.runs = runs;
  report.fractions.assign(fractions.begin(), fractions.end());

  const std::vector<EvalResult> full = EvaluateAll(tasks, options);
  const std::size_t n_tasks = tasks.size();
  const std::size_t n_fracs = fractions.size();
  report.tasks.resize(n_tasks);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    TaskSweep& ts = report.tasks[t];
    ts.task = TaskName(tasks[t]);
    ts.full = full[t];
    ts.results.assign(n_fracs, std::vector<EvalResult>(runs));
    ts.relative.assign(n_fracs, std::vector<double>(runs));
  }

  const std::size_t points = n_tasks * n_fracs * runs;
  ParallelFor(points, [&](std::size_t p) {
    const std::size_t t = p / (n_fracs * runs);
    const std::size_t f = (p / runs) % n_fracs;
    const std::size_t r = p % runs;
    const DimensionMask mask = MakeMask(spec, dims, fractions[f], r, t);
    EvalResult result = Evaluate(tasks[t], mask.empty() ? nullptr : &mask, options);
    result.mask = mask;
    result.mask_spec = std::string(TruncationModeName(spec.mode)) + ":" +
                       std::to_string(fractions[f]) + ":run=" + std::to_string(r);
    report.tasks[t].relative[f][r] = RelativePerformance(result, full[t]);
    report.tasks[t].results[f][r] = std::move(result);
  });

  report.aggregate_mean.resize(n_fracs);
  report.aggregate_std.resize(n_fracs);
  for (std::size_t f = 0; f < n_fracs; ++f) {
    std::vector<double> task_means;
    for (auto& ts : report.tasks) {
      ts.mean_relative.push_back(Mean(ts.relative[f]));
      ts.std_relative.push_back(PopulationStd(ts.relative[f]));
      task_means.push_back(ts.mean_relative.back());
    }
    std::vector<double> run_means(runs, 0.0);
    for (std::size_t r = 0; r < runs; ++r) {
      for (const auto& ts : report.tasks) run_means[r] += ts.relative[f][r];
      run_means[r] /= static_cast<double>(n_tasks);
    }
    report.aggregate_mean[f] = Mean(task_means);
    report.aggregate_std[f] = PopulationStd(run_means);
  }
  return report;
}

PcaComparison ComparePcaToTruncation(std::span<const Task> tasks, double fraction,
                                     std::size_t runs, std::uint64_t seed,
                                     const EmbeddingMatrix* fit, const EvalOptions& options) {
  if (tasks.empty()) Fail(ErrorKind::kUsage, "PCA comparison needs at least one task");
  const std::size_t dims = TaskDims(tasks[0]);
  if (fit != nullptr && fit->dims() != dims) {
    Fail(ErrorKind::kDimension, "PCA fit matrix has D=" + std::to_string(fit->dims()) +
                                    " but the tasks have D=" + std::to_string(dims));
  }
  PcaComparison out;
  out.fraction = fraction;
  out.dims = dims;
  out.target_dim = dims - RemovalCount(dims, fraction);
  out.runs = runs;

  TruncationSpec spec;
  spec.mode = TruncationMode::kRandom;
  spec.runs = runs;
  spec.seed = seed;
  const double fractions[] = {fraction};
  const SweepReport sweep = RunSweep(tasks, spec, fractions, options);

  std::optional<PcaModel> shared;
  if (fit != nullptr) {
    shared = FitPca(*fit, out.target_dim);
    for (const auto& w : shared->warnings) out.warnings.push_back("fit: " + w);
  }
  out.rows.resize(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    PcaModel own;
    if (!shared) {
      const auto* r = std::get_if<RetrievalTask>(&tasks[t]);
      own = FitPca(r != nullptr ? r->documents : std::get<ClassificationTask>(tasks[t]).train,
                   out.target_dim);
      for (const auto& w : own.warnings) out.warnings.push_back(TaskName(tasks[t]) + ": " + w);
    }
    const PcaModel& model = shared ? *shared : own;
    EvalResult pca = Evaluate(ProjectTask(tasks[t], model), nullptr, options);
    const TaskSweep& ts = sweep.tasks[t];
    PcaComparisonRow& row = out.rows[t];
    row.task = ts.task;
    row.metric = ts.full.metric;
    row.full_score = ts.full.score;
    row.pca_score = pca.score;
    row.pca_relative = RelativePerformance(pca, ts.full);
    row.random_mean_relative = ts.mean_relative[0];
    row.random_std_relative = ts.std_relative[0];
    row.effective_dim = model.effective_dim;
  }
  std::vector<double> pca_rel;
  std::vector<double> random_rel;
  for (const auto& row : out.rows) {
    pca_rel.push_back(row.pca_relative);
    random_rel.push_back(row.random_mean_relative);
  }
  out.pca_mean_relative = Mean(pca_rel);
  out.random_mean_relative = Mean(random_rel);
  return out;
}

}  // namespace embdim
