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

#include "summpipe/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "summpipe/errors.hpp"
#include "summpipe/metrics.hpp"

namespace summpipe {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Fixed two-decimal formatting keeps SVG bytes identical across runs and
/// platforms.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const SelectionRound& final_round(const SelectionResult& result) {
  if (result.rounds.empty()) {
    throw DataError("selection result has no rounds");
  }
  return result.rounds.back();
}

double round_mean(const SelectionRound& round, const std::string& id,
                  const std::string& metric) {
  auto row = round.scores.means.find(id);
  if (row == round.scores.means.end()) {
    throw DataError("no scores recorded for survivor '" + id + "'");
  }
  auto cell = row->second.find(metric);
  if (cell == row->second.end()) {
    throw DataError("survivor '" + id + "' has no score for '" + metric + "'");
  }
  return cell->second;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct NamedDescription {
  std::string name;
  std::string text;
};

const std::vector<NamedDescription>& model_descriptions() {
  static const std::vector<NamedDescription> models = {
      {"textrank",
       "TextRank: graph-based extractive ranker; sentences become nodes, "
       "normalized word overlap becomes edges, and a damped random walk "
       "scores salience. Strengths: fast, deterministic, training-free, "
       "output sentences are verbatim source text. Weaknesses: cannot "
       "paraphrase, favors long sentences, repetitive input yields "
       "redundant picks."},
      {"lexrank",
       "LexRank: extractive summarizer scoring sentences by centrality in a "
       "TF-IDF cosine similarity graph; built for multi-document input but "
       "works on single documents. Strengths: robust to noisy near-"
       "duplicate content, deterministic. Weaknesses: extract-only, needs "
       "enough sentences to form a useful graph."},
      {"bart",
       "BART: sequence-to-sequence autoencoder pretrained with denoising "
       "objectives; a bidirectional encoder feeds a left-to-right decoder, "
       "fine-tunable into a strong abstractive summarizer. Strengths: "
       "fluent, compressive summaries. Weaknesses: bounded input length, "
       "needs GPU-class compute, may hallucinate. Served via an external "
       "adapter."},
      {"pegasus",
       "Pegasus: abstractive summarizer pretrained by reconstructing held-"
       "out gap sentences using the rest of the document, an objective "
       "aimed directly at summarization; strong in low-resource settings. "
       "Strengths: high-quality abstractive output with little fine-tuning "
       "data. Weaknesses: bounded input length, heavy inference. Served via "
       "an external adapter."},
      {"longformer",
       "Longformer: transformer using sliding-window attention plus a few "
       "global tokens to approximate full self-attention, stretching input "
       "capacity to around 16K tokens. Strengths: long reports and papers "
       "fit in one pass. Weaknesses: heavy inference; quality depends on "
       "the fine-tune. Served via an external adapter."},
      {"hmnet",
       "HMNet: hierarchical meeting summarizer that encodes each utterance, "
       "aggregates utterance encodings with a second encoder across the "
       "dialogue, and adds role vectors for speaker modeling. Strengths: "
       "built for long multi-speaker transcripts. Weaknesses: "
       "dialogue-specific, costly inference. Served via an external "
       "adapter."},
  };
  return models;
}

}  // namespace

ChartSpec build_scatter(const SelectionResult& result, const std::string& metric) {
  const SelectionRound& round = final_round(result);
  const auto& names = round.scores.metric_names;
  if (std::find(names.begin(), names.end(), metric) == names.end()) {
    throw UsageError("metric '" + metric + "' is not in the final round");
  }

  ChartSpec chart;
  chart.kind = ChartKind::scatter;
  chart.title = metric + " per instance (final round)";
  double max_x = 1.0;
  for (std::size_t index : round.instance_indices) {
    max_x = std::max(max_x, static_cast<double>(index));
  }
  chart.axes.push_back({"instance", 0.0, max_x});
  chart.axes.push_back({metric, 0.0, 1.0});

  for (const std::string& id : result.survivors) {
    auto row = round.scores.per_instance.find(id);
    if (row == round.scores.per_instance.end()) {
      throw DataError("no scores recorded for survivor '" + id + "'");
    }
    auto cell = row->second.find(metric);
    if (cell == row->second.end()) {
      throw DataError("survivor '" + id + "' has no score for '" + metric + "'");
    }
    ChartSeries series;
    series.label = id;
    for (std::size_t c = 0; c < cell->second.size(); ++c) {
      series.points.emplace_back(
          static_cast<double>(round.instance_indices[c]), cell->second[c]);
    }
    chart.series.push_back(std::move(series));
  }
  return chart;
}

RadarOutcome build_radar(const SelectionResult& result) {
  const SelectionRound& round = final_round(result);
  const auto& metrics = round.scores.metric_names;

  RadarOutcome outcome;
  std::ostringstream table;
  const std::size_t name_width = [&] {
    std::size_t w = 9;  // "candidate"
    for (const std::string& id : result.survivors) w = std::max(w, id.size());
    return w;
  }();
  table << std::left << std::setw(static_cast<int>(name_width + 2)) << "candidate";
  for (const std::string& metric : metrics) {
    table << std::setw(12) << metric;
  }
  table << "\n";
  for (const std::string& id : result.survivors) {
    table << std::setw(static_cast<int>(name_width + 2)) << id;
    for (const std::string& metric : metrics) {
      table << std::setw(12) << fmt(round_mean(round, id, metric));
    }
    table << "\n";
  }

  if (metrics.size() < 3) {
    table << "warning: radar chart needs at least 3 metrics, got "
          << metrics.size() << "; showing the score table instead\n";
    outcome.table_text = table.str();
    return outcome;
  }

  ChartSpec chart;
  chart.kind = ChartKind::radar;
  chart.title = "survivor means per metric (final round)";
  for (const std::string& metric : metrics) {
    chart.axes.push_back({metric, 0.0, 1.0});
  }
  for (const std::string& id : result.survivors) {
    ChartSeries series;
    series.label = id;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      series.points.emplace_back(static_cast<double>(m),
                                 round_mean(round, id, metrics[m]));
    }
    chart.series.push_back(std::move(series));
  }
  outcome.chart = std::move(chart);
  outcome.table_text = table.str();
  return outcome;
}

namespace {

void render_legend(std::ostringstream& svg, const ChartSpec& chart, double x,
                   double y) {
  svg << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const double row_y = y + static_cast<double>(s) * 18.0;
    svg << "    <rect x=\"" << fmt(x) << "\" y=\"" << fmt(row_y)
        << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[s % kPaletteSize] << "\"/>\n"
        << "    <text x=\"" << fmt(x + 18.0) << "\" y=\"" << fmt(row_y + 10.0)
        << "\">" << xml_escape(chart.series[s].label) << "</text>\n";
  }
  svg << "  </g>\n";
}

std::string render_scatter(const ChartSpec& chart) {
  const double width = 680.0, height = 420.0;
  const double left = 60.0, right = width - 200.0, top = 50.0, bottom = height - 50.0;
  const ChartAxis& xa = chart.axes.at(0);
  const ChartAxis& ya = chart.axes.at(1);
  const double x_span = xa.max > xa.min ? xa.max - xa.min : 1.0;
  const double y_span = ya.max > ya.min ? ya.max - ya.min : 1.0;
  auto px = [&](double x) {
    return left + (x - xa.min) / x_span * (right - left);
  };
  auto py = [&](double y) {
    return bottom - (y - ya.min) / y_span * (bottom - top);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt(width) << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 "
      << fmt(width) << " " << fmt(height) << "\">\n"
      << "  <rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << fmt(left) << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << xml_escape(chart.title) << "</text>\n"
      << "  <line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\""
      << fmt(right) << "\" y2=\"" << fmt(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "  <line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\""
      << fmt(left) << "\" y2=\"" << fmt(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double frac = static_cast<double>(t) / 4.0;
    const double xv = xa.min + frac * x_span;
    const double yv = ya.min + frac * y_span;
    svg << "    <line x1=\"" << fmt(px(xv)) << "\" y1=\"" << fmt(bottom)
        << "\" x2=\"" << fmt(px(xv)) << "\" y2=\"" << fmt(bottom + 4.0)
        << "\" stroke=\"black\"/>\n"
        << "    <text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(bottom + 16.0)
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n"
        << "    <line x1=\"" << fmt(left - 4.0) << "\" y1=\"" << fmt(py(yv))
        << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(py(yv))
        << "\" stroke=\"black\"/>\n"
        << "    <text x=\"" << fmt(left - 8.0) << "\" y=\"" << fmt(py(yv) + 3.0)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  svg << "    <text x=\"" << fmt((left + right) / 2.0) << "\" y=\""
      << fmt(height - 12.0) << "\" text-anchor=\"middle\">"
      << xml_escape(xa.name) << "</text>\n"
      << "    <text x=\"16\" y=\"" << fmt((top + bottom) / 2.0)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt((top + bottom) / 2.0) << ")\">" << xml_escape(ya.name)
      << "</text>\n"
      << "  </g>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    svg << "  <g fill=\"" << kPalette[s % kPaletteSize]
        << "\" fill-opacity=\"0.8\">\n";
    for (const auto& [x, y] : chart.series[s].points) {
      svg << "    <circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
          << "\" r=\"3\"/>\n";
    }
    svg << "  </g>\n";
  }
  render_legend(svg, chart, right + 16.0, top);
  svg << "</svg>\n";
  return svg.str();
}

std::string render_radar(const ChartSpec& chart) {
  const double width = 680.0, height = 460.0;
  const double cx = 240.0, cy = 240.0, radius = 160.0;
  const std::size_t n = chart.axes.size();
  auto vertex = [&](std::size_t axis, double value) {
    const double angle =
        -M_PI / 2.0 + 2.0 * M_PI * static_cast<double>(axis) / static_cast<double>(n);
    const ChartAxis& ax = chart.axes[axis];
    const double span = ax.max > ax.min ? ax.max - ax.min : 1.0;
    const double r = (value - ax.min) / span * radius;
    return std::make_pair(cx + r * std::cos(angle), cy + r * std::sin(angle));
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt(width) << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 "
      << fmt(width) << " " << fmt(height) << "\">\n"
      << "  <rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"white\"/>\n"
      << "  <text x=\"24\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << xml_escape(chart.title) << "</text>\n";

  // Concentric grid rings at quarter levels plus the axis spokes.
  svg << "  <g stroke=\"#cccccc\" fill=\"none\">\n";
  for (int ring = 1; ring <= 4; ++ring) {
    const double level = static_cast<double>(ring) / 4.0;
    svg << "    <polygon points=\"";
    for (std::size_t a = 0; a < n; ++a) {
      const ChartAxis& ax = chart.axes[a];
      const auto [x, y] = vertex(a, ax.min + level * (ax.max - ax.min));
      svg << fmt(x) << "," << fmt(y) << (a + 1 < n ? " " : "");
    }
    svg << "\"/>\n";
  }
  for (std::size_t a = 0; a < n; ++a) {
    const auto [x, y] = vertex(a, chart.axes[a].max);
    svg << "    <line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(cy) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(y) << "\"/>\n";
  }
  svg << "  </g>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (std::size_t a = 0; a < n; ++a) {
    const auto [x, y] = vertex(a, chart.axes[a].max);
    const double lx = cx + (x - cx) * 1.12;
    const double ly = cy + (y - cy) * 1.12;
    svg << "    <text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly + 4.0)
        << "\" text-anchor=\"middle\">" << xml_escape(chart.axes[a].name)
        << "</text>\n";
  }
  svg << "  </g>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    svg << "  <polygon fill=\"" << kPalette[s % kPaletteSize]
        << "\" fill-opacity=\"0.25\" stroke=\"" << kPalette[s % kPaletteSize]
        << "\" stroke-width=\"2\" points=\"";
    const auto& points = chart.series[s].points;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto [x, y] =
          vertex(static_cast<std::size_t>(points[i].first), points[i].second);
      svg << fmt(x) << "," << fmt(y) << (i + 1 < points.size() ? " " : "");
    }
    svg << "\"/>\n";
  }
  render_legend(svg, chart, 470.0, 60.0);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string render_svg(const ChartSpec& chart) {
  if (chart.kind == ChartKind::scatter) {
    if (chart.axes.size() != 2) {
      throw UsageError("scatter chart needs exactly 2 axes");
    }
    return render_scatter(chart);
  }
  if (chart.axes.size() < 3) {
    throw UsageError("radar chart needs at least 3 axes");
  }
  for (const ChartSeries& series : chart.series) {
    if (series.points.size() != chart.axes.size()) {
      throw UsageError("radar series '" + series.label +
                       "' must have one value per axis");
    }
  }
  return render_radar(chart);
}

void render_svg_file(const ChartSpec& chart, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write chart file: " + path);
  out << render_svg(chart);
  if (!out) throw DataError("failed writing chart file: " + path);
}

std::string chart_json(const ChartSpec& chart) {
  ordered_json doc;
  doc["kind"] = chart.kind == ChartKind::scatter ? "scatter" : "radar";
  doc["title"] = chart.title;
  doc["axes"] = ordered_json::array();
  for (const ChartAxis& axis : chart.axes) {
    doc["axes"].push_back(
        {{"name", axis.name}, {"min", axis.min}, {"max", axis.max}});
  }
  doc["series"] = ordered_json::array();
  for (const ChartSeries& series : chart.series) {
    ordered_json points = ordered_json::array();
    for (const auto& [x, y] : series.points) {
      points.push_back({x, y});
    }
    doc["series"].push_back({{"label", series.label}, {"points", points}});
  }
  return doc.dump(2) + "\n";
}

void export_summvis(const std::vector<SummInstance>& instances,
                    const std::map<std::string, std::vector<std::string>>& outputs,
                    const std::string& path) {
  for (const auto& [model, summaries] : outputs) {
    if (summaries.size() != instances.size()) {
      throw DataError("model '" + model + "' has " +
                      std::to_string(summaries.size()) + " outputs for " +
                      std::to_string(instances.size()) + " instances");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write export file: " + path);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    ordered_json line;
    line["document"] = source_as_text(instances[i].source);
    line["reference"] = instances[i].reference.value_or("");
    for (const auto& [model, summaries] : outputs) {
      line["preds:" + model] = summaries[i];
    }
    out << line.dump() << "\n";
  }
  if (!out) throw DataError("failed writing export file: " + path);
}

std::string describe(const std::string& name) {
  for (const NamedDescription& model : model_descriptions()) {
    if (model.name == name) return model.text;
  }
  for (const std::string& metric : metric_names()) {
    if (metric == name) return metric_info(name).description;
  }
  for (const MetricInfo& family : metric_families()) {
    if (family.name == name) return family.description;
  }
  for (const DatasetInfo& info : dataset_registry()) {
    if (info.name == name) {
      std::ostringstream text;
      text << info.name << ": " << info.domain << " dataset, "
           << info.size << " examples, average source length "
           << info.src_length << ", average summary length " << info.tgt_length
           << ". Attributes:" << (info.flags.is_query_based ? " query-based" : "")
           << (info.flags.is_multi_document ? " multi-document" : "")
           << (info.flags.is_dialogue_based ? " dialogue" : "");
      if (!info.flags.is_query_based && !info.flags.is_multi_document &&
          !info.flags.is_dialogue_based) {
        text << " single-document";
      }
      text << ". Languages:";
      for (const std::string& lang : info.languages) text << " " << lang;
      text << ".";
      return text.str();
    }
  }

  // Unknown: suggest the closest registered names.
  std::vector<std::string> all;
  for (const NamedDescription& model : model_descriptions()) all.push_back(model.name);
  for (const std::string& metric : metric_names()) all.push_back(metric);
  for (const DatasetInfo& info : dataset_registry()) all.push_back(info.name);
  std::sort(all.begin(), all.end(), [&name](const std::string& a, const std::string& b) {
    const std::size_t da = edit_distance(name, a);
    const std::size_t db = edit_distance(name, b);
    if (da != db) return da < db;
    return a < b;
  });
  std::string msg = "nothing registered under '" + name + "'; closest names:";
  for (std::size_t i = 0; i < std::min<std::size_t>(3, all.size()); ++i) {
    msg += " " + all[i];
  }
  throw DataError(msg);
}

std::vector<std::string> describable_models() {
  std::vector<std::string> out;
  for (const NamedDescription& model : model_descriptions()) {
    out.push_back(model.name);
  }
  return out;
}

std::vector<std::string> describable_metrics() { return metric_names(); }

std::vector<std::string> describable_datasets() {
  std::vector<std::string> out;
  for (const DatasetInfo& info : dataset_registry()) out.push_back(info.name);
  return out;
}

std::string summary_table(const SelectionResult& result) {
  const SelectionRound& last = final_round(result);
  const auto& metrics = last.scores.metric_names;
  std::ostringstream out;

  std::size_t name_width = 9;
  for (const std::string& id : result.survivors) {
    name_width = std::max(name_width, id.size());
  }
  out << "survivors (final-round means):\n  " << std::left
      << std::setw(static_cast<int>(name_width + 2)) << "candidate";
  for (const std::string& metric : metrics) out << std::setw(12) << metric;
  out << "\n";
  for (const std::string& id : result.survivors) {
    out << "  " << std::setw(static_cast<int>(name_width + 2)) << id;
    for (const std::string& metric : metrics) {
      out << std::setw(12) << fmt(round_mean(last, id, metric));
    }
    out << "\n";
  }

  out << "\naudit trail:\n";
  for (const SelectionRound& round : result.rounds) {
    out << "  round " << round.round << ": " << round.sample_size
        << " instance" << (round.sample_size == 1 ? "" : "s") << ", seed "
        << round.sample_seed << ", eliminated " << round.eliminated.size()
        << ", failed " << round.failed.size() << "\n";
    for (const Elimination& e : round.eliminated) {
      out << "    - " << e.id << " dominated by " << e.dominated_by << "\n";
    }
    for (const CandidateFailure& f : round.failed) {
      out << "    - " << f.id << " failed: " << f.reason << "\n";
    }
  }
  return out.str();
}

}  // namespace summpipe
