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

#include "embdim/attribution.hpp"

#include <algorithm>
#include <cmath>

#include "embdim/error.hpp"
#include "embdim/parallel.hpp"
#include "embdim/stats.hpp"
#include "embdim/truncation.hpp"

namespace embdim {

Attribution LeaveOneOut(const Task& task, const EvalOptions& options) {
  const std::size_t dims = TaskDims(task);
  if (dims < 2) Fail(ErrorKind::kDegenerate, "leave-one-out needs at least two dimensions");
  Attribution out;
  out.task = TaskName(task);
  out.full_score = Evaluate(task, nullptr, options).score;
  out.records.resize(dims);
  ParallelFor(dims, [&](std::size_t d) {
    const DimensionMask mask(dims, {d});
    const double score = Evaluate(task, &mask, options).score;
    out.records[d] = {d, score, score - out.full_score};
  });
  return out;
}

Attribution AverageAttributions(std::span<const Attribution> attributions) {
  if (attributions.empty()) Fail(ErrorKind::kUsage, "nothing to average");
  const std::size_t dims = attributions[0].records.size();
  Attribution out;
  out.task = "mean";
  out.records.resize(dims);
  const auto n = static_cast<double>(attributions.size());
  for (std::size_t d = 0; d < dims; ++d) out.records[d].dim = d;
  for (const auto& a : attributions) {
    if (a.records.size() != dims) {
      Fail(ErrorKind::kDimension, "attributions disagree on dimensionality");
    }
    out.full_score += a.full_score / n;
    for (std::size_t d = 0; d < dims; ++d) {
      out.records[d].score_without += a.records[d].score_without / n;
      out.records[d].delta += a.records[d].delta / n;
    }
  }
  return out;
}

const char* VerdictName(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::kDegrading:
      return "degrading";
    case Verdict::kImproving:
      return "improving";
    case Verdict::kNeutral:
      return "neutral";
  }
  return "unknown";
}

DimensionVerdicts ClassifyDimensions(std::span<const AttributionRecord> records, double eps) {
  if (!(eps >= 0.0)) Fail(ErrorKind::kUsage, "tolerance must be non-negative");
  const std::size_t dims = records.size();
  std::vector<char> seen(dims, 0);
  for (const auto& r : records) {
    if (r.dim >= dims || seen[r.dim]) {
      Fail(ErrorKind::kData, "attribution records must cover every dimension exactly once");
    }
    seen[r.dim] = 1;
  }
  DimensionVerdicts v;
  v.eps = eps;
  v.by_dim.assign(dims, Verdict::kNeutral);
  for (const auto& r : records) {
    if (r.delta > eps) {
      v.by_dim[r.dim] = Verdict::kDegrading;
    } else if (r.delta < -eps) {
      v.by_dim[r.dim] = Verdict::kImproving;
    }
  }
  for (std::size_t d = 0; d < dims; ++d) {
    switch (v.by_dim[d]) {
      case Verdict::kDegrading:
        v.degrading.push_back(d);
        break;
      case Verdict::kImproving:
        v.improving.push_back(d);
        break;
      case Verdict::kNeutral:
        v.neutral.push_back(d);
        break;
    }
  }
  return v;
}

OutlierDegrading FindOutlierDegrading(std::span<const AttributionRecord> records,
                                      const DimensionVerdicts& verdicts,
                                      std::span<const std::size_t> outlier_dims) {
  if (records.size() < 2) Fail(ErrorKind::kDegenerate, "need at least two dimensions");
  if (verdicts.by_dim.size() != records.size()) {
    Fail(ErrorKind::kDimension, "verdicts and records disagree on dimensionality");
  }
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const auto& r : records) scores.push_back(r.score_without);

  OutlierDegrading out;
  out.mean = Mean(scores);
  out.std = PopulationStd(scores);
  if (out.std == 0.0) return out;
  for (const auto& r : records) {
    if (verdicts.by_dim[r.dim] == Verdict::kDegrading &&
        r.score_without - out.mean >= 3.0 * out.std) {
      out.dims.push_back(r.dim);
    }
  }
  std::sort(out.dims.begin(), out.dims.end());
  for (std::size_t d : out.dims) {
    if (std::find(outlier_dims.begin(), outlier_dims.end(), d) != outlier_dims.end()) {
      out.outlier_overlap.push_back(d);
    }
  }
  return out;
}

SharedDegradingHistogram SharedDegrading(std::span<const DimensionVerdicts> per_dataset) {
  if (per_dataset.size() < 2) {
    Fail(ErrorKind::kUsage, "shared-degrading analysis needs at least two datasets");
  }
  const std::size_t dims = per_dataset[0].by_dim.size();
  for (const auto& v : per_dataset) {
    if (v.by_dim.size() != dims) {
      Fail(ErrorKind::kDimension, "datasets disagree on dimensionality");
    }
  }
  SharedDegradingHistogram h;
  h.dims = dims;
  h.n_datasets = per_dataset.size();
  h.counts.assign(h.n_datasets, 0);
  for (std::size_t d = 0; d < dims; ++d) {
    std::size_t flagged = 0;
    for (const auto& v : per_dataset) flagged += v.by_dim[d] == Verdict::kDegrading ? 1 : 0;
    if (flagged > 0) ++h.counts[flagged - 1];
  }
  for (std::size_t c : h.counts) {
    h.ratios.push_back(static_cast<double>(c) / static_cast<double>(dims));
  }
  return h;
}

std::vector<std::size_t> GuidedOrder(std::span<const AttributionRecord> records,
                                     const DimensionVerdicts& verdicts, GuidedSet which) {
  const auto& chosen = which == GuidedSet::kDegrading ? verdicts.degrading : verdicts.improving;
  std::vector<double> magnitude(records.size(), 0.0);
  for (const auto& r : records) {
    if (r.dim < magnitude.size()) magnitude[r.dim] = std::abs(r.delta);
  }
  std::vector<std::size_t> order(chosen);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] > magnitude[b];
    return a < b;
  });
  return order;
}

std::vector<CurvePoint> GuidedRemovalCurve(const Task& task,
                                           std::span<const AttributionRecord> records,
                                           const DimensionVerdicts& verdicts, GuidedSet which,
                                           std::span<const double> fractions,
                                           const EvalOptions& options) {
  const std::size_t dims = TaskDims(task);
  if (records.size() != dims || verdicts.by_dim.size() != dims) {
    Fail(ErrorKind::kDimension, "attribution covers " + std::to_string(records.size()) +
                                    " dimensions but task '" + TaskName(task) + "' has " +
                                    std::to_string(dims));
  }
  const std::vector<std::size_t> order = GuidedOrder(records, verdicts, which);
  if (order.empty()) {
    Fail(ErrorKind::kDegenerate, std::string("no ") +
                                     (which == GuidedSet::kDegrading ? "degrading" : "improving") +
                                     " dimensions to remove");
  }

  std::vector<std::pair<double, std::size_t>> plan;
  for (double f : fractions) {
    const std::size_t n = RemovalCount(dims, f);
    if (n <= order.size()) plan.emplace_back(f, n);
  }

  const EvalResult full = Evaluate(task, nullptr, options);
  std::vector<CurvePoint> curve(plan.size());
  ParallelFor(plan.size(), [&](std::size_t i) {
    const auto [fraction, n] = plan[i];
    const DimensionMask mask(dims, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n)});
    const EvalResult result = Evaluate(task, mask.empty() ? nullptr : &mask, options);
    curve[i] = {fraction, n, result.score, RelativePerformance(result, full)};
  });
  return curve;
}

}  // namespace embdim
