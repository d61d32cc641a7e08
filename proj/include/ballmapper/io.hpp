#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ballmapper/analysis.hpp"
#include "ballmapper/csv.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/graph.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/nerve.hpp"

namespace ballmapper {

// Thrown for a cell that is not a number; row and column are 1-based
// (row = line number in the file).
class CsvCellError : public DataError {
 public:
  CsvCellError(std::size_t row, std::size_t column, std::string_view cell)
      : DataError("non-numeric cell '" + std::string(cell) + "' at (" + std::to_string(row) +
                  "," + std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_, column_;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = false;
  // Columns kept as attributes instead of coordinates: header names, or
  // 0-based column numbers when there is no header.
  std::vector<std::string> attribute_columns;
};

inline PointCloud read_points_csv(const std::string& path, const CsvOptions& opt = {}) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw DataError("'" + path + "' is empty");

  std::size_t first = 0;
  std::vector<std::string> names;
  if (opt.has_header) {
    for (auto cell : csv::split(lines[0].text, opt.delimiter)) names.emplace_back(cell);
    first = 1;
    if (lines.size() == 1) throw DataError("'" + path + "' has a header but no rows");
  }
  const std::size_t width = opt.has_header ? names.size()
                                           : csv::split(lines[0].text, opt.delimiter).size();

  std::vector<char> is_attribute(width, 0);
  std::vector<std::size_t> attribute_index;
  for (const auto& col : opt.attribute_columns) {
    std::size_t idx = width;
    if (opt.has_header) {
      idx = static_cast<std::size_t>(std::find(names.begin(), names.end(), col) - names.begin());
    } else {
      std::size_t parsed = 0;
      const auto [ptr, ec] = std::from_chars(col.data(), col.data() + col.size(), parsed);
      if (ec == std::errc{} && ptr == col.data() + col.size()) idx = parsed;
    }
    if (idx >= width) throw ParameterError("unknown attribute column '" + col + "'");
    if (!is_attribute[idx]) attribute_index.push_back(idx);
    is_attribute[idx] = 1;
  }
  const std::size_t dim = width - attribute_index.size();
  if (dim == 0) throw ParameterError("no coordinate columns left after removing attributes");

  std::vector<double> coords;
  std::vector<Attribute> attributes;
  for (std::size_t idx : attribute_index)
    attributes.push_back({opt.has_header ? names[idx] : "column" + std::to_string(idx), {}});

  for (std::size_t li = first; li < lines.size(); ++li) {
    const auto cells = csv::split(lines[li].text, opt.delimiter);
    if (cells.size() != width)
      throw DataError("ragged row at line " + std::to_string(lines[li].number) + ": " +
                      std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = csv::parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) throw CsvCellError(lines[li].number, c + 1, cells[c]);
      if (!is_attribute[c]) coords.push_back(*v);
    }
    for (std::size_t a = 0; a < attribute_index.size(); ++a)
      attributes[a].values.push_back(*csv::parse_double(cells[attribute_index[a]]));
  }
  return PointCloud(dim, std::move(coords), std::move(attributes));
}

struct DistanceMatrixInput {
  MetricSpec metric;
  PointCloud cloud;  // ids only
};

inline DistanceMatrixInput read_distance_matrix_csv(const std::string& path, char delimiter = ',') {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw DataError("'" + path + "' is empty");
  const std::size_t n = lines.size();
  std::vector<double> matrix;
  matrix.reserve(n * n);
  for (const auto& line : lines) {
    const auto cells = csv::split(line.text, delimiter);
    if (cells.size() != n)
      throw DataError("distance matrix is not square: line " + std::to_string(line.number) +
                      " has " + std::to_string(cells.size()) + " entries, expected " +
                      std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      const auto v = csv::parse_double(cells[c]);
      if (!v) throw CsvCellError(line.number, c + 1, cells[c]);
      matrix.push_back(*v);
    }
  }
  return {MetricSpec::precomputed(n, std::move(matrix)), PointCloud::ids_only(n)};
}

// Shortest decimal that reads back as the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline constexpr std::string_view kGraphFormatVersion = "ballmapper-graph/1";

// What write_graph_json serializes: a graph plus metadata and colorings.
struct GraphDocument {
  std::string version{kGraphFormatVersion};
  std::string metric = "euclidean";
  BMGraph graph;
  std::vector<VertexColoring> colorings;
  bool include_covered = false;

  friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

inline nlohmann::json graph_to_json(const GraphDocument& doc) {
  using nlohmann::json;
  json j;
  j["format"] = doc.version;
  j["metric"] = doc.metric;
  j["epsilon"] = doc.graph.epsilon;
  j["point_count"] = doc.graph.point_count;
  j["partial"] = doc.graph.partial;
  j["covered_included"] = doc.include_covered;
  json colorings = json::array();
  for (const auto& c : doc.colorings) {
    if (c.values.size() != doc.graph.vertex_count())
      throw ParameterError("coloring '" + c.attribute + "' does not match the graph");
    colorings.push_back({{"attribute", c.attribute}, {"aggregator", std::string(to_string(c.aggregator))}});
  }
  j["colorings"] = std::move(colorings);
  json vertices = json::array();
  for (const auto& v : doc.graph.vertices) {
    json jv{{"id", v.id}, {"center", v.center}, {"size", v.size}};
    if (doc.include_covered) jv["covered"] = v.covered;
    if (!doc.colorings.empty()) {
      json colors = json::array();
      for (const auto& c : doc.colorings) colors.push_back(c.values[v.id]);
      jv["colors"] = std::move(colors);
    }
    vertices.push_back(std::move(jv));
  }
  j["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const auto& e : doc.graph.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  j["edges"] = std::move(edges);
  return j;
}

// Keys sorted, two-space indent, newline-terminated.
inline std::string serialize_graph_json(const GraphDocument& doc) {
  return graph_to_json(doc).dump(2) + "\n";
}

inline GraphDocument parse_graph_json(std::string_view text) {
  using nlohmann::json;
  GraphDocument doc;
  try {
    const json j = json::parse(text);
    doc.version = j.at("format").get<std::string>();
    if (doc.version != kGraphFormatVersion)
      throw DataError("unsupported graph format '" + doc.version + "'");
    doc.metric = j.at("metric").get<std::string>();
    doc.graph.epsilon = j.at("epsilon").get<double>();
    doc.graph.point_count = j.at("point_count").get<std::size_t>();
    doc.graph.partial = j.at("partial").get<bool>();
    doc.include_covered = j.at("covered_included").get<bool>();
    for (const auto& c : j.at("colorings"))
      doc.colorings.push_back({c.at("attribute").get<std::string>(),
                               parse_aggregator(c.at("aggregator").get<std::string>()),
                               {}});
    for (const auto& jv : j.at("vertices")) {
      BMVertex v;
      v.id = jv.at("id").get<std::size_t>();
      v.center = jv.at("center").get<std::size_t>();
      v.size = jv.at("size").get<std::size_t>();
      if (jv.contains("covered")) v.covered = jv.at("covered").get<std::vector<std::size_t>>();
      if (!doc.colorings.empty()) {
        const auto& colors = jv.at("colors");
        if (colors.size() != doc.colorings.size()) throw DataError("vertex color count mismatch");
        for (std::size_t k = 0; k < colors.size(); ++k)
          doc.colorings[k].values.push_back(colors[k].get<double>());
      }
      doc.graph.vertices.push_back(std::move(v));
    }
    for (const auto& je : j.at("edges"))
      doc.graph.edges.push_back({je.at("u").get<std::size_t>(), je.at("v").get<std::size_t>(),
                                 je.at("weight").get<std::size_t>()});
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed graph JSON: ") + e.what());
  }
  return doc;
}

namespace detail {

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline void write_graph_json(const GraphDocument& doc, const std::string& path) {
  detail::write_text(path, serialize_graph_json(doc));
}

inline GraphDocument read_graph_json(const std::string& path) {
  return parse_graph_json(detail::read_text(path));
}

// Sequential 9-stop ramp (light yellow to dark red) used for DOT fill colors.
inline constexpr std::string_view kColorRamp[9] = {"#ffffcc", "#ffeda0", "#fed976",
                                                   "#feb24c", "#fd8d3c", "#fc4e2a",
                                                   "#e31a1c", "#bd0026", "#800026"};

// Ramp entry for value within [lo, hi]; a constant coloring maps to stop 0.
inline std::string_view ramp_color(double value, double lo, double hi) {
  if (!(hi > lo)) return kColorRamp[0];
  const double t = (value - lo) / (hi - lo);
  const auto idx = static_cast<std::size_t>(std::clamp(std::floor(t * 9.0), 0.0, 8.0));
  return kColorRamp[idx];
}

struct DotOptions {
  bool edge_weights = false;
};

// Undirected DOT; node label "center:size", width 0.2 * sqrt(size) inches.
inline std::string serialize_dot(const BMGraph& g, const VertexColoring* coloring = nullptr,
                                 const DotOptions& opt = {}) {
  if (coloring && coloring->values.size() != g.vertex_count())
    throw ParameterError("coloring does not match the graph");
  double lo = 0.0, hi = 0.0;
  if (coloring && !coloring->values.empty()) {
    const auto [mn, mx] = std::minmax_element(coloring->values.begin(), coloring->values.end());
    lo = *mn;
    hi = *mx;
  }
  std::string out = "graph ballmapper {\n  node [shape=circle, fixedsize=true];\n";
  for (const auto& v : g.vertices) {
    out += "  " + std::to_string(v.id) + " [label=\"" + std::to_string(v.center) + ":" +
           std::to_string(v.size) + "\", width=" +
           format_double(0.2 * std::sqrt(static_cast<double>(v.size)));
    if (coloring)
      out += ", style=filled, fillcolor=\"" +
             std::string(ramp_color(coloring->values[v.id], lo, hi)) + "\"";
    out += "];\n";
  }
  for (const auto& e : g.edges) {
    out += "  " + std::to_string(e.u) + " -- " + std::to_string(e.v);
    if (opt.edge_weights)
      out += " [weight=" + std::to_string(e.weight) + ", label=\"" + std::to_string(e.weight) + "\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

inline void write_dot(const BMGraph& g, const VertexColoring* coloring, const std::string& path,
                      const DotOptions& opt = {}) {
  detail::write_text(path, serialize_dot(g, coloring, opt));
}

namespace detail {

inline constexpr std::string_view kHtmlHead = R"(<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>Ball Mapper graph</title>
<style>
body { font-family: sans-serif; margin: 0; }
#info { position: absolute; top: 8px; left: 8px; background: #fffe; padding: 4px 8px; }
svg { width: 100vw; height: 100vh; display: block; }
line { stroke: #999; stroke-opacity: 0.7; }
circle { stroke: #333; stroke-width: 0.5; }
</style>
</head>
<body>
<div id="info"></div>
<svg id="view"></svg>
<script type="application/json" id="graph-data">
)";

inline constexpr std::string_view kHtmlTail = R"(
</script>
<script>
(function () {
  var doc = JSON.parse(document.getElementById("graph-data").textContent);
  var ramp = ["#ffffcc", "#ffeda0", "#fed976", "#feb24c", "#fd8d3c",
              "#fc4e2a", "#e31a1c", "#bd0026", "#800026"];
  var nodes = doc.vertices.map(function (v, i) {
    var a = 2 * Math.PI * i / Math.max(1, doc.vertices.length);
    return { v: v, x: Math.cos(a) * 200, y: Math.sin(a) * 200, dx: 0, dy: 0 };
  });
  var edges = doc.edges;
  var maxSize = Math.max.apply(null, nodes.map(function (n) { return n.v.size; }).concat([1]));
  var color = function (n) { return "#9ecae1"; };
  if (doc.colorings.length > 0) {
    var vals = nodes.map(function (n) { return n.v.colors[0]; });
    var lo = Math.min.apply(null, vals), hi = Math.max.apply(null, vals);
    color = function (n) {
      if (!(hi > lo)) return ramp[0];
      var k = Math.floor((n.v.colors[0] - lo) / (hi - lo) * 9);
      return ramp[Math.max(0, Math.min(8, k))];
    };
  }
  // Fruchterman-Reingold style layout, fixed iteration count.
  var k = 40, temp = 100;
  for (var it = 0; it < 300; ++it) {
    nodes.forEach(function (n) { n.dx = 0; n.dy = 0; });
    for (var i = 0; i < nodes.length; ++i)
      for (var j = i + 1; j < nodes.length; ++j) {
        var a = nodes[i], b = nodes[j];
        var dx = a.x - b.x, dy = a.y - b.y, d = Math.sqrt(dx * dx + dy * dy) + 0.01;
        var f = k * k / d;
        a.dx += dx / d * f; a.dy += dy / d * f; b.dx -= dx / d * f; b.dy -= dy / d * f;
      }
    edges.forEach(function (e) {
      var a = nodes[e.u], b = nodes[e.v];
      var dx = a.x - b.x, dy = a.y - b.y, d = Math.sqrt(dx * dx + dy * dy) + 0.01;
      var f = d * d / k;
      a.dx -= dx / d * f; a.dy -= dy / d * f; b.dx += dx / d * f; b.dy += dy / d * f;
    });
    nodes.forEach(function (n) {
      var d = Math.sqrt(n.dx * n.dx + n.dy * n.dy) + 0.01;
      n.x += n.dx / d * Math.min(d, temp); n.y += n.dy / d * Math.min(d, temp);
    });
    temp *= 0.98;
  }
  var xs = nodes.map(function (n) { return n.x; }), ys = nodes.map(function (n) { return n.y; });
  var minX = Math.min.apply(null, xs) - 40, minY = Math.min.apply(null, ys) - 40;
  var w = Math.max.apply(null, xs) - minX + 40, h = Math.max.apply(null, ys) - minY + 40;
  var ns = "http://www.w3.org/2000/svg", svg = document.getElementById("view");
  svg.setAttribute("viewBox", [minX, minY, Math.max(w, 1), Math.max(h, 1)].join(" "));
  edges.forEach(function (e) {
    var l = document.createElementNS(ns, "line");
    l.setAttribute("x1", nodes[e.u].x); l.setAttribute("y1", nodes[e.u].y);
    l.setAttribute("x2", nodes[e.v].x); l.setAttribute("y2", nodes[e.v].y);
    svg.appendChild(l);
  });
  nodes.forEach(function (n) {
    var c = document.createElementNS(ns, "circle");
    c.setAttribute("cx", n.x); c.setAttribute("cy", n.y);
    c.setAttribute("r", 4 + 16 * Math.sqrt(n.v.size / maxSize));
    c.setAttribute("fill", color(n));
    var t = document.createElementNS(ns, "title");
    t.textContent = "center " + n.v.center + ", size " + n.v.size;
    c.appendChild(t);
    svg.appendChild(c);
  });
  document.getElementById("info").textContent =
      "epsilon " + doc.epsilon + ", " + nodes.length + " vertices, " + edges.length + " edges" +
      (doc.colorings.length ? ", colored by " + doc.colorings[0].attribute : "");
})();
</script>
</body>
</html>
)";

}  // namespace detail

// Self-contained page: embedded GraphDocument plus an inline SVG layout.
inline std::string serialize_html(const GraphDocument& doc) {
  std::string data = graph_to_json(doc).dump();
  for (std::size_t pos = 0; (pos = data.find("</", pos)) != std::string::npos; pos += 3)
    data.replace(pos, 2, "<\\/");
  return std::string(detail::kHtmlHead) + data + std::string(detail::kHtmlTail);
}

inline void write_html(const GraphDocument& doc, const std::string& path) {
  detail::write_text(path, serialize_html(doc));
}

// "radius,mean_degree" plus rep_k columns when there is more than one repetition.
inline std::string serialize_sweep_csv(const DegreeSweep& sweep) {
  const bool reps = sweep.repetitions > 1;
  std::string out = "radius,mean_degree";
  if (reps)
    for (std::size_t r = 0; r < sweep.per_repetition.size(); ++r) out += ",rep_" + std::to_string(r);
  out += "\n";
  for (std::size_t i = 0; i < sweep.radii.size(); ++i) {
    out += format_double(sweep.radii[i]) + "," + format_double(sweep.mean_degree[i]);
    if (reps)
      for (const auto& row : sweep.per_repetition) out += "," + format_double(row[i]);
    out += "\n";
  }
  return out;
}

inline void write_sweep_csv(const DegreeSweep& sweep, const std::string& path) {
  detail::write_text(path, serialize_sweep_csv(sweep));
}

inline std::string serialize_nerve_json(const NerveComplex& nerve) {
  nlohmann::json j;
  j["max_dim"] = nerve.max_dim;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [s, f] : nerve.simplices) list.push_back({{"vertices", s}, {"filtration", f}});
  j["simplices"] = std::move(list);
  return j.dump(2) + "\n";
}

inline void write_nerve_json(const NerveComplex& nerve, const std::string& path) {
  detail::write_text(path, serialize_nerve_json(nerve));
}

}  // namespace ballmapper
