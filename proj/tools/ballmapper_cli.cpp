// ballmapper: build, compare and clean Ball Mapper graphs from the shell.
//
//   ballmapper build --gen circle:n=500 --seed 1 --net maxmin --epsilon 0.4
//   ballmapper multiscale --gen iris --radii 0.5,0.9,1.6,1.8 --out-json iris.json
//   ballmapper dimension --gen cube:n=5000,side=10 --dims 2,3,4 --reps 5 --radii 2,2.5,3
//   ballmapper denoise --gen x_noise:noise=1 --seed 3 --epsilon 1 --denoise-quantile 0.25
//
// Exit codes: 0 ok, 1 usage, 2 bad data, 3 internal invariant violated.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ballmapper/ballmapper.hpp"

namespace bm = ballmapper;

namespace {

struct Input {
  std::string csv;
  std::string matrix;
  std::string gen;
  bool header = false;
  std::string delimiter = ",";
  std::vector<std::string> attributes;
  std::string metric = "euclidean";
  std::optional<std::uint64_t> seed;
};

struct Net {
  std::string algorithm = "greedy";
  std::optional<double> epsilon;
  std::size_t k = 0;
  std::optional<std::size_t> max_centers;
  std::size_t kmeans_iters = 100;
  std::string centers_file;
};

struct Outputs {
  std::string json, dot, html, csv, nerve;
  std::vector<std::string> color;
  std::string color_agg = "mean";
  bool include_covered = false;
  bool edge_weights = false;
  std::size_t max_dim = bm::kDefaultMaxDim;
  std::size_t cover_guard = bm::kDefaultCoverGuard;
};

struct Denoise {
  std::optional<std::size_t> min_size;
  std::optional<double> quantile;
};

struct Config {
  Input input;
  Net net;
  Outputs out;
  Denoise denoise;
  std::vector<double> radii;
  std::vector<std::size_t> dims;
  std::size_t reps = 1;
  std::string graph;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct Loaded {
  bm::PointCloud cloud;
  bm::MetricSpec metric;
  std::string metric_name;
};

// "kind" or "kind:key=value,key=value".
struct GenSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::string path;
};

GenSpec parse_gen(const std::string& text) {
  GenSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  for (auto item : bm::csv::split(std::string_view(text).substr(colon + 1), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw bm::ParameterError("generator parameter '" + std::string(item) + "' has no value");
    const std::string key(bm::csv::trim(item.substr(0, eq)));
    const auto value = item.substr(eq + 1);
    if (key == "path" || key == "dir") {
      spec.path = std::string(bm::csv::trim(value));
      continue;
    }
    const auto v = bm::csv::parse_double(value);
    if (!v) throw bm::ParameterError("generator parameter '" + key + "' is not a number");
    spec.params[key] = *v;
  }
  return spec;
}

class Params {
 public:
  explicit Params(const GenSpec& spec) : spec_(spec) {}

  double real(const std::string& key, double fallback) {
    used_.push_back(key);
    const auto it = spec_.params.find(key);
    return it == spec_.params.end() ? fallback : it->second;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const double v = real(key, static_cast<double>(fallback));
    if (!(v >= 0.0) || v != std::floor(v))
      throw bm::ParameterError("generator parameter '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  void finish() const {
    for (const auto& [key, v] : spec_.params)
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw bm::ParameterError("generator '" + spec_.kind + "' has no parameter '" + key + "'");
  }

 private:
  const GenSpec& spec_;
  std::vector<std::string> used_;
};

std::uint64_t generator_seed(Params& p, const Input& in) {
  const double fallback = in.seed ? static_cast<double>(*in.seed) : -1.0;
  const double s = p.real("seed", fallback);
  if (s < 0.0) throw bm::ParameterError("synthetic generators need a seed (--seed or seed=)");
  return static_cast<std::uint64_t>(s);
}

bm::PointCloud generate(const GenSpec& spec, const Input& in) {
  Params p(spec);
  bm::PointCloud cloud;
  if (spec.kind == "iris") {
    cloud = bm::load_iris(spec.path.empty() ? std::string(BALLMAPPER_DATA_DIR) + "/iris.csv" : spec.path);
  } else if (spec.kind == "images") {
    if (spec.path.empty()) throw bm::ParameterError("images generator needs dir=<directory>");
    const std::size_t w = p.count("width", 128), h = p.count("height", 128);
    cloud = bm::load_raw_images(spec.path, w, h);
  } else if (spec.kind == "cube") {
    const std::size_t n = p.count("n", 1000), d = p.count("d", 2);
    const double side = p.real("side", 10.0);
    cloud = bm::sample_cube(n, d, side, generator_seed(p, in));
  } else if (spec.kind == "torus") {
    const std::size_t n = p.count("n", 1300);
    const double R = p.real("R", 2.0), r = p.real("r", 1.0);
    cloud = bm::sample_torus(n, R, r, generator_seed(p, in));
  } else if (spec.kind == "circle") {
    const std::size_t n = p.count("n", 500), dim = p.count("dim", 3);
    const double radius = p.real("radius", 1.0);
    cloud = bm::sample_circle(n, radius, dim, generator_seed(p, in));
  } else if (spec.kind == "y_junction") {
    const std::size_t n = p.count("n", 1000);
    const double arm = p.real("arm", 1.0);
    cloud = bm::sample_y_junction(n, arm, generator_seed(p, in));
  } else if (spec.kind == "window") {
    const std::size_t n = p.count("n", 2000);
    const double outer = p.real("outer", 10.0), inner = p.real("inner", 5.0);
    cloud = bm::sample_window(n, outer, inner, generator_seed(p, in));
  } else if (spec.kind == "x_noise") {
    const std::size_t n = p.count("n", 1000);
    const double noise = p.real("noise", 1.0), box = p.real("box", 10.0);
    cloud = bm::sample_x_with_noise(n, noise, box, generator_seed(p, in));
  } else {
    throw bm::ParameterError("unknown generator '" + spec.kind + "'");
  }
  p.finish();
  return cloud;
}

char single_char(const std::string& s) {
  if (s.size() != 1) throw bm::ParameterError("delimiter must be one character");
  return s[0];
}

Loaded load_input(const Config& cfg) {
  const Input& in = cfg.input;
  Loaded out;
  if (!in.matrix.empty()) {
    if (in.metric != "euclidean" && in.metric != "precomputed")
      throw bm::ParameterError("--distance-matrix implies the precomputed metric");
    auto dm = bm::read_distance_matrix_csv(in.matrix, single_char(in.delimiter));
    out.cloud = std::move(dm.cloud);
    out.metric = std::move(dm.metric);
    out.metric_name = "precomputed";
    return out;
  }
  const auto kind = bm::parse_metric_kind(in.metric);
  if (kind == bm::MetricKind::precomputed)
    throw bm::ParameterError("the precomputed metric needs --distance-matrix");
  out.metric = bm::MetricSpec(kind);
  out.metric_name = in.metric;
  if (!in.csv.empty()) {
    bm::CsvOptions opt;
    opt.delimiter = single_char(in.delimiter);
    opt.has_header = in.header;
    opt.attribute_columns = in.attributes;
    out.cloud = bm::read_points_csv(in.csv, opt);
  } else {
    out.cloud = generate(parse_gen(in.gen), in);
  }
  return out;
}

std::vector<std::size_t> read_centers(const std::string& path) {
  std::vector<std::size_t> centers;
  for (const auto& line : bm::csv::read_lines(path))
    for (auto cell : bm::csv::split(line.text, ',')) {
      cell = bm::csv::trim(cell);
      if (cell.empty()) continue;
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw bm::DataError("center file line " + std::to_string(line.number) + ": '" +
                            std::string(cell) + "' is not an index");
      centers.push_back(v);
    }
  return centers;
}

bm::NetParams net_params(const Net& net, const Input& in, std::optional<double> epsilon) {
  bm::NetParams p;
  p.algorithm = bm::parse_net_algorithm(net.algorithm);
  p.epsilon = epsilon;
  p.max_centers = net.max_centers;
  p.k = net.k;
  p.seed = in.seed.value_or(0);
  p.kmeans_max_iters = net.kmeans_iters;
  if (p.max_centers && p.algorithm != bm::NetAlgorithm::maxmin)
    throw bm::ParameterError("--max-centers applies to the maxmin net only");
  if (p.algorithm == bm::NetAlgorithm::kmeans && epsilon)
    throw bm::ParameterError("k-means picks its own radius; drop --epsilon");
  return p;
}

bm::CoverVector build_cover(const Loaded& data, const Config& cfg, bm::Exec exec) {
  if (!cfg.net.centers_file.empty()) {
    if (!cfg.net.epsilon) throw bm::ParameterError("--centers-file needs --epsilon");
    return bm::recover(data.cloud, data.metric, read_centers(cfg.net.centers_file), *cfg.net.epsilon, exec);
  }
  return bm::build_net(data.cloud, data.metric, net_params(cfg.net, cfg.input, cfg.net.epsilon), exec);
}

std::vector<bm::VertexColoring> colorings(const bm::BMGraph& g, const bm::PointCloud& cloud,
                                          const Outputs& out) {
  std::vector<bm::VertexColoring> result;
  const auto agg = bm::parse_aggregator(out.color_agg);
  for (const auto& name : out.color)
    result.push_back(bm::vertex_coloring(g, name, cloud.attribute(name).values, agg));
  return result;
}

std::string summary(const bm::BMGraph& g) {
  return "V=" + std::to_string(g.vertex_count()) + " E=" + std::to_string(g.edge_count()) +
         " CC=" + std::to_string(bm::connected_components(g).count) +
         " cycle_rank=" + std::to_string(bm::cycle_rank(g));
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void export_graph(const bm::BMGraph& g, std::vector<bm::VertexColoring> cols,
                  const std::string& metric, const Outputs& out, const std::string& suffix) {
  bm::GraphDocument doc;
  doc.metric = metric;
  doc.graph = g;
  doc.colorings = std::move(cols);
  doc.include_covered = out.include_covered;
  if (!out.json.empty()) bm::write_graph_json(doc, with_suffix(out.json, suffix));
  if (!out.html.empty()) bm::write_html(doc, with_suffix(out.html, suffix));
  if (!out.dot.empty())
    bm::write_dot(g, doc.colorings.empty() ? nullptr : &doc.colorings.front(),
                  with_suffix(out.dot, suffix), bm::DotOptions{out.edge_weights});
}

std::size_t denoise_threshold(const bm::BMGraph& g, const Denoise& d) {
  if (d.min_size) return *d.min_size;
  return bm::suggest_density_threshold(g, d.quantile.value_or(bm::kDefaultDensityQuantile));
}

// Drops coloring values for vertices that filter_low_density removes.
std::vector<bm::VertexColoring> filter_colorings(const bm::BMGraph& g, std::vector<bm::VertexColoring> cols,
                                                 std::size_t n_min) {
  for (auto& c : cols) {
    std::vector<double> kept;
    for (const auto& v : g.vertices)
      if (v.size >= n_min) kept.push_back(c.values[v.id]);
    c.values = std::move(kept);
  }
  return cols;
}

bool denoise_requested(const Denoise& d) { return d.min_size || d.quantile; }

int cmd_build(const Config& cfg) {
  const bm::Exec exec{cfg.threads};
  const Loaded data = load_input(cfg);
  const bm::CoverVector cover = build_cover(data, cfg, exec);
  bm::verify_cover(data.cloud, data.metric, cover);
  bm::BMGraph g = bm::build_bm_graph(cover, exec);
  bm::verify_graph(g);
  if (!cfg.out.nerve.empty())
    bm::write_nerve_json(bm::build_nerve(cover, cfg.out.max_dim, cfg.out.cover_guard), cfg.out.nerve);
  if (denoise_requested(cfg.denoise)) {
    const std::size_t n_min = denoise_threshold(g, cfg.denoise);
    const std::size_t before = g.vertex_count();
    g = bm::filter_low_density(g, n_min);
    std::cout << "removed " << before - g.vertex_count() << "\n";
  }
  export_graph(g, colorings(g, data.cloud, cfg.out), data.metric_name, cfg.out, "");
  std::cout << "epsilon=" << bm::format_double(g.epsilon) << "\n" << summary(g) << "\n";
  return 0;
}

int cmd_multiscale(const Config& cfg) {
  const bm::Exec exec{cfg.threads};
  if (cfg.radii.empty()) throw bm::ParameterError("--radii is required");
  const Loaded data = load_input(cfg);
  bm::MultiScaleBM ms;
  if (!cfg.net.centers_file.empty()) {
    ms = bm::multiscale_from_centers(data.cloud, data.metric, read_centers(cfg.net.centers_file),
                                     cfg.radii, exec);
  } else {
    ms = bm::multiscale_bm(data.cloud, data.metric, cfg.radii,
                           net_params(cfg.net, cfg.input, cfg.net.epsilon), exec);
  }
  for (std::size_t i = 0; i < ms.graphs.size(); ++i) {
    const auto& g = ms.graphs[i];
    bm::verify_graph(g);
    export_graph(g, colorings(g, data.cloud, cfg.out), data.metric_name, cfg.out,
                 "_r" + std::to_string(i));
    std::cout << "r" << i << " epsilon=" << bm::format_double(g.epsilon) << " " << summary(g) << "\n";
  }
  const auto report = bm::check_inclusions(ms);
  if (!report.pass) {
    std::cout << "inclusions: FAIL " << report.first_violation << "\n";
    return 3;
  }
  std::cout << "inclusions: pass\n";
  return 0;
}

int cmd_dimension(const Config& cfg) {
  if (cfg.radii.empty()) throw bm::ParameterError("--radii is required");
  if (cfg.input.gen.empty()) throw bm::ParameterError("dimension needs a --gen cube:... input");
  const GenSpec spec = parse_gen(cfg.input.gen);
  if (spec.kind != "cube") throw bm::ParameterError("dimension sweeps sample the cube generator");
  Params p(spec);
  const std::size_t n = p.count("n", 5000);
  const double side = p.real("side", 10.0);
  const std::size_t gen_d = p.count("d", 2);
  const std::uint64_t seed = generator_seed(p, cfg.input);
  p.finish();
  const auto kind = bm::parse_metric_kind(cfg.input.metric);
  if (kind == bm::MetricKind::precomputed) throw bm::ParameterError("dimension sweeps need coordinates");
  const bm::MetricSpec metric(kind);

  const std::vector<std::size_t> dims = cfg.dims.empty() ? std::vector<std::size_t>{gen_d} : cfg.dims;
  bm::SweepOptions opt;
  opt.repetitions = cfg.reps;
  opt.seed = seed;
  opt.net = net_params(cfg.net, cfg.input, std::nullopt);
  opt.cube_side = side;
  opt.exec = bm::Exec{cfg.threads};
  for (std::size_t d : dims) {
    if (d == 0) throw bm::ParameterError("dimension must be >= 1");
    const bm::Sampler sampler = [&](std::uint64_t s) { return bm::sample_cube(n, d, side, s); };
    const auto sweep = bm::dimension_sweep(sampler, metric, cfg.radii, opt);
    if (!cfg.out.csv.empty())
      bm::write_sweep_csv(sweep, dims.size() > 1 ? with_suffix(cfg.out.csv, "_d" + std::to_string(d)) : cfg.out.csv);
    std::cout << "d=" << d << " plateau=" << bm::format_double(bm::plateau_degree(sweep));
    // Interior averages are undefined once the 2 eps margin covers the cube.
    const auto& im = sweep.interior_mean_degree;
    if (std::all_of(im.begin(), im.end(), [](double v) { return std::isfinite(v); }))
      std::cout << " interior_plateau=" << bm::format_double(bm::plateau_value(im));
    std::cout << "\n";
  }
  return 0;
}

int cmd_denoise(const Config& cfg) {
  const bm::Exec exec{cfg.threads};
  bm::BMGraph g;
  std::vector<bm::VertexColoring> cols;
  std::string metric_name;
  if (!cfg.graph.empty()) {
    auto doc = bm::read_graph_json(cfg.graph);
    if (!cfg.out.color.empty()) throw bm::ParameterError("--color needs point data, not --graph");
    g = std::move(doc.graph);
    cols = std::move(doc.colorings);
    metric_name = doc.metric;
  } else {
    const Loaded data = load_input(cfg);
    const bm::CoverVector cover = build_cover(data, cfg, exec);
    bm::verify_cover(data.cloud, data.metric, cover);
    g = bm::build_bm_graph(cover, exec);
    bm::verify_graph(g);
    cols = colorings(g, data.cloud, cfg.out);
    metric_name = data.metric_name;
  }
  const std::size_t n_min = denoise_threshold(g, cfg.denoise);
  const bm::BMGraph filtered = bm::filter_low_density(g, n_min);
  export_graph(filtered, filter_colorings(g, std::move(cols), n_min), metric_name, cfg.out, "");
  std::cout << "threshold=" << n_min << "\n";
  std::cout << "removed " << g.vertex_count() - filtered.vertex_count() << "\n";
  std::cout << summary(filtered) << "\n";
  return 0;
}

void add_input(CLI::App* app, Config& cfg, bool sources) {
  if (sources) {
    auto* csv = app->add_option("--input", cfg.input.csv, "CSV of points, one row per point");
    auto* dm = app->add_option("--distance-matrix", cfg.input.matrix, "CSV of an N x N distance matrix");
    auto* gen = app->add_option("--gen", cfg.input.gen,
                                "generator: cube|torus|circle|y_junction|window|x_noise|iris|images"
                                "[:key=value,...]");
    csv->excludes(dm)->excludes(gen);
    dm->excludes(gen);
    app->add_flag("--header", cfg.input.header, "first CSV row holds column names");
    app->add_option("--delimiter", cfg.input.delimiter, "CSV delimiter")->capture_default_str();
    app->add_option("--attributes", cfg.input.attributes, "CSV columns kept as attributes")->delimiter(',');
  } else {
    app->add_option("--gen", cfg.input.gen, "cube[:n=...,side=...,d=...]");
  }
  app->add_option("--metric", cfg.input.metric, "euclidean|manhattan|chebyshev|precomputed")
      ->capture_default_str();
  app->add_option("--seed", cfg.input.seed, "seed for generators and k-means");
  app->add_option("--threads", cfg.threads, "worker cap")->check(CLI::PositiveNumber);
}

void add_net(CLI::App* app, Config& cfg, bool epsilon, bool centers) {
  app->add_option("--net", cfg.net.algorithm, "greedy|maxmin|kmeans")->capture_default_str();
  if (epsilon) app->add_option("--epsilon", cfg.net.epsilon, "ball radius");
  app->add_option("--k", cfg.net.k, "number of k-means centers");
  app->add_option("--max-centers", cfg.net.max_centers, "stop maxmin after this many centers");
  app->add_option("--kmeans-iters", cfg.net.kmeans_iters, "Lloyd iterations")->capture_default_str();
  if (centers) app->add_option("--centers-file", cfg.net.centers_file, "precomputed center indices");
}

void add_outputs(CLI::App* app, Config& cfg) {
  app->add_option("--out-json", cfg.out.json, "graph JSON");
  app->add_option("--out-dot", cfg.out.dot, "Graphviz DOT");
  app->add_option("--out-html", cfg.out.html, "standalone HTML view");
  app->add_option("--color", cfg.out.color, "attribute to color vertices by");
  app->add_option("--color-agg", cfg.out.color_agg, "mean|min|max")->capture_default_str();
  app->add_flag("--include-covered", cfg.out.include_covered, "list covered points in JSON");
  app->add_flag("--edge-weights", cfg.out.edge_weights, "label DOT edges with witness counts");
}

void add_denoise(CLI::App* app, Config& cfg) {
  auto* m = app->add_option("--denoise-min", cfg.denoise.min_size, "drop vertices covering fewer points");
  auto* q = app->add_option("--denoise-quantile", cfg.denoise.quantile,
                            "drop vertices below this quantile of sizes");
  m->excludes(q);
}

bool has_source(const Input& in) { return !in.csv.empty() || !in.matrix.empty() || !in.gen.empty(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ball Mapper graphs from point clouds"};
  app.require_subcommand(1);
  Config cfg;

  auto* build = app.add_subcommand("build", "net, graph, optional denoise, exports");
  add_input(build, cfg, true);
  add_net(build, cfg, true, true);
  add_outputs(build, cfg);
  add_denoise(build, cfg);
  build->add_option("--out-nerve", cfg.out.nerve, "filtered nerve JSON");
  build->add_option("--max-dim", cfg.out.max_dim, "nerve dimension cap")->capture_default_str();
  build->add_option("--cover-guard", cfg.out.cover_guard, "max balls per point in the nerve")
      ->capture_default_str();

  auto* multi = app.add_subcommand("multiscale", "one graph per radius over fixed centers");
  add_input(multi, cfg, true);
  add_net(multi, cfg, false, true);
  add_outputs(multi, cfg);
  multi->add_option("--radii", cfg.radii, "nondecreasing radii; the first builds the net")->delimiter(',');

  auto* dim = app.add_subcommand("dimension", "average degree against radius in [0, side]^d");
  add_input(dim, cfg, false);
  add_net(dim, cfg, false, false);
  dim->add_option("--radii", cfg.radii, "nondecreasing radii")->delimiter(',');
  dim->add_option("--dims", cfg.dims, "dimensions to sample")->delimiter(',');
  dim->add_option("--reps", cfg.reps, "repetitions per dimension")->capture_default_str();
  dim->add_option("--out-csv", cfg.out.csv, "sweep CSV (suffixed _d<d> for several dims)");

  auto* den = app.add_subcommand("denoise", "drop low-density vertices");
  add_input(den, cfg, true);
  add_net(den, cfg, true, true);
  add_outputs(den, cfg);
  add_denoise(den, cfg);
  auto* graph_opt = den->add_option("--graph", cfg.graph, "graph JSON to filter instead of building");
  for (const char* name : {"--input", "--distance-matrix", "--gen"}) graph_opt->excludes(den->get_option(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const bool needs_source = sub != den || cfg.graph.empty();
  if (needs_source && !has_source(cfg.input)) {
    std::cerr << "error: one of --input, --distance-matrix or --gen is required\n\n" << sub->help();
    return 1;
  }

  try {
    if (sub == build) return cmd_build(cfg);
    if (sub == multi) return cmd_multiscale(cfg);
    if (sub == dim) return cmd_dimension(cfg);
    return cmd_denoise(cfg);
  } catch (const bm::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const bm::InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const bm::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
