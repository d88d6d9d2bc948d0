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

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "embdim/attribution.hpp"
#include "embdim/geometry.hpp"
#include "embdim/rank_analysis.hpp"
#include "embdim/task.hpp"
#include "embdim/truncation.hpp"

namespace embdim::report {

enum class Format { kJson, kCsv, kMarkdown };

Format ParseFormat(const std::string& name);
// From the file extension (.json / .csv / .md); `fallback` otherwise.
Format FormatForPath(const std::filesystem::path& path, Format fallback);

// Every float is printed with 6 significant digits ("%.6g").
std::string FormatNumber(double value);

// JSON with keys sorted, two-space indentation, floats through FormatNumber
// and a trailing newline. Identical documents always serialize identically.
std::string DumpJson(const nlohmann::json& doc);

// Comma-separated rows; fields containing a comma, quote or newline are quoted.
std::string DumpCsv(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

// Pipe table with a header separator row.
std::string DumpMarkdownTable(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows);

nlohmann::json ToJson(const EvalResult& result);
nlohmann::json ToJson(const SweepReport& report);
nlohmann::json ToJson(const GeometryReport& report);
nlohmann::json ToJson(const OutlierReport& report);
nlohmann::json ToJson(const OutlierTrialReport& report);
nlohmann::json ToJson(const SharedDegradingHistogram& histogram);
nlohmann::json ToJson(const PcaComparison& comparison);

// (fraction, task, run, score, relative), one row per evaluated mask.
std::string SweepCsv(const SweepReport& report);

// Aggregate relative performance per fraction.
std::string SweepMarkdown(const SweepReport& report);

struct DatasetAttribution {
  Attribution attribution;
  DimensionVerdicts verdicts;
};

// (dataset, dim, score_without, delta, verdict)
std::string AttributionCsv(std::span<const DatasetAttribution> datasets);

// Inverse of AttributionCsv, grouped by dataset in first-appearance order.
std::vector<DatasetAttribution> ParseAttributionCsv(const std::string& text);

struct NamedCurve {
  std::string task;
  std::vector<CurvePoint> points;
};

// (task, fraction, n_removed, score, relative)
std::string CurveCsv(std::span<const NamedCurve> curves);

// (fraction, mean_rho, std_rho, n_queries)
std::string RankAgreementCsv(const RankAgreementCurve& curve);

// (trial, removed_set_hash, score)
std::string ControlTrialCsv(const OutlierTrialReport& report);

// (task, metric, full_score, pca_score, pca_relative, random_mean_relative,
// random_std_relative); Markdown puts the two relative columns side by side.
std::string PcaComparisonCsv(const PcaComparison& comparison);
std::string PcaComparisonMarkdown(const PcaComparison& comparison);

// | model | # outliers | outlier score | control mean ± std |
std::string OutlierMarkdown(const std::string& model, const OutlierTrialReport& report);

}  // namespace embdim::report
