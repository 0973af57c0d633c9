// Copyright 2026 The summpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUMMPIPE_REPORT_HPP
#define SUMMPIPE_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "summpipe/corpus.hpp"
#include "summpipe/selection.hpp"

namespace summpipe {

enum class ChartKind { scatter, radar };

struct ChartAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
};

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // scatter: (x, y); radar: (axis idx, value)
};

/// Renderer-independent chart description. Scatter: one point per
/// evaluated instance. Radar: one value per axis per series.
struct ChartSpec {
  ChartKind kind = ChartKind::scatter;
  std::string title;
  std::vector<ChartAxis> axes;
  std::vector<ChartSeries> series;
};

/// Per-instance scores of every survivor on one metric of the final
/// round; values are read back from the ScoreMatrix, never recomputed.
ChartSpec build_scatter(const SelectionResult& result, const std::string& metric);

/// A radar chart needs at least 3 metrics; below that the chart is absent
/// and `table_text` carries a plain bar table plus a warning line.
struct RadarOutcome {
  std::optional<ChartSpec> chart;
  std::string table_text;
};
RadarOutcome build_radar(const SelectionResult& result);

/// Standalone SVG 1.1 with legend; byte-identical output for identical
/// specs.
std::string render_svg(const ChartSpec& chart);
void render_svg_file(const ChartSpec& chart, const std::string& path);

/// Raw chart values as a JSON sidecar so the chart can be re-plotted.
std::string chart_json(const ChartSpec& chart);

/// JSONL with one line per instance:
///   {"document": ..., "reference": ..., "preds:<model>": ...}
/// outputs maps model name -> one summary per instance.
void export_summvis(const std::vector<SummInstance>& instances,
                    const std::map<std::string, std::vector<std::string>>& outputs,
                    const std::string& path);

/// Plain-language description of a model, metric or dataset; metric
/// descriptions state the score direction. Unknown names raise DataError
/// with the closest registered names.
std::string describe(const std::string& name);

/// All names describe() accepts, grouped for `list`.
std::vector<std::string> describable_models();
std::vector<std::string> describable_metrics();
std::vector<std::string> describable_datasets();

/// Final-round survivor table, means per metric, plus the audit trail.
std::string summary_table(const SelectionResult& result);

}  // namespace summpipe

#endif  // SUMMPIPE_REPORT_HPP
