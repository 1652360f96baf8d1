#include "flexsndp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "flexsndp/errors.hpp"
#include "flexsndp/rng.hpp"
#include "flexsndp/verify.hpp"
#include "json.hpp"

namespace flexsndp {

using Json = nlohmann::ordered_json;

namespace {

const Json& field(const Json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw PreconditionError(std::string("instance: missing field \"") + name + "\"");
  return *it;
}

int as_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw PreconditionError("instance: " + what + " must be an integer");
  return v.get<int>();
}

}  // namespace

FlexGraph parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw PreconditionError(std::string("instance: malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) throw PreconditionError("instance: top level must be an object");
  const int n = as_int(field(doc, "n"), "n");
  const int p = as_int(field(doc, "p"), "p");
  const int q = as_int(field(doc, "q"), "q");
  const Json& edges_json = field(doc, "edges");
  const Json& pairs_json = field(doc, "pairs");
  if (!edges_json.is_array()) throw PreconditionError("instance: edges must be an array");
  if (!pairs_json.is_array()) throw PreconditionError("instance: pairs must be an array");

  std::vector<Edge> edges;
  std::set<int> ids;
  for (const Json& e : edges_json) {
    if (!e.is_object()) throw PreconditionError("instance: every edge must be an object");
    Edge edge;
    edge.id = as_int(field(e, "id"), "edge id");
    edge.u = as_int(field(e, "u"), "edge endpoint");
    edge.v = as_int(field(e, "v"), "edge endpoint");
    const Json& cost = field(e, "cost");
    if (!cost.is_number()) throw PreconditionError("instance: edge cost must be a number");
    edge.cost = cost.get<double>();
    const Json& safe = field(e, "safe");
    if (!safe.is_boolean()) throw PreconditionError("instance: edge safe flag must be a boolean");
    edge.safe = safe.get<bool>();
    if (!ids.insert(edge.id).second) {
      throw PreconditionError("instance: duplicate edge id " + std::to_string(edge.id));
    }
    edges.push_back(edge);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].id != static_cast<int>(i)) {
      throw PreconditionError("instance: edge ids must be 0..m-1");
    }
  }
  std::vector<TerminalPair> pairs;
  for (const Json& pr : pairs_json) {
    if (!pr.is_array() || pr.size() != 2) {
      throw PreconditionError("instance: every pair must be a two-element array");
    }
    pairs.push_back(TerminalPair{as_int(pr[0], "pair vertex"), as_int(pr[1], "pair vertex")});
  }
  return FlexGraph(n, std::move(edges), std::move(pairs), p, q);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

FlexGraph load_instance(const std::string& path) { return parse_instance(load_text(path)); }

std::string instance_to_json(const FlexGraph& graph) {
  Json doc;
  doc["n"] = graph.num_vertices();
  doc["p"] = graph.p();
  doc["q"] = graph.q();
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) {
    edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"cost", e.cost}, {"safe", e.safe}});
  }
  doc["edges"] = std::move(edges);
  Json pairs = Json::array();
  for (const TerminalPair& pr : graph.pairs()) pairs.push_back({pr.s, pr.t});
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Generators.

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "random-gnm") return GeneratorKind::kRandomGnm;
  if (name == "grid") return GeneratorKind::kGrid;
  if (name == "two-terminal-layers") return GeneratorKind::kTwoTerminalLayers;
  throw PreconditionError("unknown generator kind: " + name);
}

CostModel parse_cost_model(const std::string& name) {
  if (name == "unit") return CostModel::kUnit;
  if (name == "uniform") return CostModel::kUniform;
  throw PreconditionError("unknown cost model: " + name);
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

}  // namespace

GeneratedInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.p < 1 || spec.q < 0) throw PreconditionError("generate: need p >= 1 and q >= 0");
  if (!(spec.safe_fraction >= 0.0 && spec.safe_fraction <= 1.0)) {
    throw PreconditionError("generate: safe fraction must lie in [0, 1]");
  }
  if (spec.extra_edges < 0.0) throw PreconditionError("generate: extra edges must be >= 0");
  Rng rng = make_rng(spec.seed, "generate");

  int n = 0;
  std::vector<VertexId> ring;  // backbone order
  std::vector<std::pair<VertexId, VertexId>> links;
  std::vector<TerminalPair> pairs;

  switch (spec.kind) {
    case GeneratorKind::kRandomGnm: {
      if (spec.size < 3) throw PreconditionError("generate: random-gnm needs size >= 3");
      n = spec.size;
      ring.resize(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) ring[v] = v;
      for (int i = n - 1; i > 0; --i) std::swap(ring[i], ring[uniform_int(rng, 0, i)]);
      const int extra = static_cast<int>(std::lround(spec.extra_edges * n));
      for (int i = 0; i < extra; ++i) {
        const int u = uniform_int(rng, 0, n - 1);
        int v = uniform_int(rng, 0, n - 2);
        if (v >= u) ++v;
        links.emplace_back(u, v);
      }
      break;
    }
    case GeneratorKind::kGrid: {
      if (spec.size < 2) throw PreconditionError("generate: grid needs size >= 2");
      const int side = spec.size;
      n = side * side;
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          const int v = r * side + c;
          if (c + 1 < side) links.emplace_back(v, v + 1);
          if (r + 1 < side) links.emplace_back(v, v + side);
        }
      }
      for (int r = 0; r < side; ++r) {  // boustrophedon order
        for (int c = 0; c < side; ++c) ring.push_back(r * side + (r % 2 == 0 ? c : side - 1 - c));
      }
      break;
    }
    case GeneratorKind::kTwoTerminalLayers: {
      if (spec.size < 1) throw PreconditionError("generate: two-terminal-layers needs size >= 1");
      constexpr int kWidth = 3;
      const int layers = spec.size;
      n = 2 + kWidth * layers;
      const int s = 0;
      const int t = n - 1;
      auto node = [&](int layer, int i) { return 1 + layer * kWidth + i; };
      for (int i = 0; i < kWidth; ++i) {
        links.emplace_back(s, node(0, i));
        links.emplace_back(node(layers - 1, i), t);
      }
      for (int layer = 0; layer + 1 < layers; ++layer) {
        for (int i = 0; i < kWidth; ++i) {
          for (int j = 0; j < kWidth; ++j) {
            if (i == j || uniform01(rng) < 0.5) links.emplace_back(node(layer, i), node(layer + 1, j));
          }
        }
      }
      for (int v = 0; v < n; ++v) ring.push_back(v);
      pairs.push_back(TerminalPair{s, t});
      break;
    }
  }

  if (pairs.empty()) {
    const int k = std::max(1, spec.num_pairs);
    std::set<std::pair<int, int>> used;
    const long long available = static_cast<long long>(n) * (n - 1) / 2;
    while (static_cast<int>(pairs.size()) < k && static_cast<long long>(used.size()) < available) {
      int s = uniform_int(rng, 0, n - 1);
      int t = uniform_int(rng, 0, n - 2);
      if (t >= s) ++t;
      if (used.insert(std::minmax(s, t)).second) pairs.push_back(TerminalPair{s, t});
    }
  }

  if (spec.backbone) {
    const int copies = (spec.p + spec.q + 1) / 2;
    for (int c = 0; c < copies; ++c) {
      for (int i = 0; i < n; ++i) links.emplace_back(ring[i], ring[(i + 1) % n]);
    }
  }

  std::vector<Edge> edges;
  for (const auto& [u, v] : links) {
    Edge e;
    e.id = static_cast<EdgeId>(edges.size());
    e.u = u;
    e.v = v;
    e.cost = spec.cost_model == CostModel::kUnit ? 1.0 : uniform_int(rng, 1, 10);
    e.safe = uniform01(rng) < spec.safe_fraction;
    edges.push_back(e);
  }
  GeneratedInstance out;
  out.graph = FlexGraph(n, std::move(edges), std::move(pairs), spec.p, spec.q);
  out.feasible =
      static_cast<bool>(is_flex_connected(out.graph, out.graph.all_edges(), spec.p, spec.q));
  return out;
}

std::vector<SuiteEntry> pinned_suite() {
  constexpr int kRequirements[4][2] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  std::vector<SuiteEntry> suite;
  for (int i = 0; i < 50; ++i) {
    GeneratorSpec spec;
    spec.p = kRequirements[i % 4][0];
    spec.q = kRequirements[i % 4][1];
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.safe_fraction = 0.5;
    spec.cost_model = CostModel::kUniform;
    const int copies = (spec.p + spec.q + 1) / 2;
    int n = 0;
    if (i % 10 == 7) {
      spec.kind = GeneratorKind::kTwoTerminalLayers;
      spec.size = 2 + (i / 10) % 3;  // n = 8, 11, 14
      n = 2 + 3 * spec.size;
    } else if (i % 10 == 9) {
      spec.kind = GeneratorKind::kGrid;
      spec.size = 3;
      n = 9;
    } else {
      spec.kind = GeneratorKind::kRandomGnm;
      n = 6 + (i * 7) % 9;
      spec.size = n;
      spec.num_pairs = 1 + i % 3;
      const int extra = n <= 10 ? std::min(n, 22 - copies * n) : n + n / 2;
      spec.extra_edges = static_cast<double>(std::max(0, extra)) / n;
    }
    suite.push_back(SuiteEntry{"suite-" + std::to_string(i) + "-n" + std::to_string(n) + "-p" +
                                   std::to_string(spec.p) + "q" + std::to_string(spec.q),
                               spec});
  }
  return suite;
}

// ---------------------------------------------------------------------------
// Solutions and reports.

std::string solution_to_json(const FlexGraph& graph, const EdgeSet& h) {
  Json doc;
  doc["edges"] = h;
  doc["cost"] = graph.cost(h);
  return doc.dump(2) + "\n";
}

EdgeSet parse_solution(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw PreconditionError(std::string("solution: malformed JSON: ") + err.what());
  }
  const Json* edges = nullptr;
  if (doc.is_object() && doc.contains("solution")) {
    edges = &doc["solution"];
  } else if (doc.is_object() && doc.contains("edges")) {
    edges = &doc["edges"];
  }
  if (edges == nullptr || !edges->is_array()) {
    throw PreconditionError("solution: expected an \"edges\" or \"solution\" array");
  }
  EdgeSet out;
  for (const Json& id : *edges) out.push_back(as_int(id, "solution edge id"));
  normalize(out);
  return out;
}

namespace {

Json stage_json(const StageReport& r) {
  Json j;
  j["stage"] = r.stage;
  j["lp_objective"] = r.lp_objective;
  j["lp_rounds"] = r.lp_rounds;
  j["pool_size"] = r.pool_size;
  j["theta"] = r.theta;
  j["beta_param"] = r.beta_param;
  j["num_large"] = r.num_large;
  j["short_circuit"] = r.short_circuit;
  j["t"] = r.t;
  j["t_prime"] = r.t_prime;
  j["attempts"] = r.attempts;
  j["trees_sampled"] = r.trees_sampled;
  j["roundings"] = r.roundings;
  j["beta_hat"] = r.beta_hat;
  j["max_tree_height"] =
      r.tree_heights.empty() ? 0 : *std::max_element(r.tree_heights.begin(), r.tree_heights.end());
  j["added"] = r.added;
  j["added_cost"] = r.added_cost;
  if (r.diagnostics) {
    const DiagnosticsSummary& d = *r.diagnostics;
    j["diagnostics"] = {{"violating_sets", d.violating_sets},
                        {"trees", d.trees},
                        {"min_good_fraction", d.min_good_fraction},
                        {"max_shattered", d.max_shattered},
                        {"shattered_bound", d.shattered_bound},
                        {"bound_violations", d.bound_violations},
                        {"flow_checks", d.flow_checks},
                        {"flow_violations", d.flow_violations},
                        {"enumeration_skipped", d.enumeration_skipped}};
  }
  return j;
}

}  // namespace

std::string stage_report_json(const StageReport& report) { return stage_json(report).dump(2); }

std::string run_report_json(const FlexGraph& graph, const SolveResult& result,
                            const PipelineParams& params, double wall_seconds) {
  Json doc;
  doc["feasible"] = static_cast<bool>(is_flex_connected(graph, result.h, graph.p(), graph.q()));
  doc["solution"] = result.h;
  doc["total_cost"] = result.total_cost;
  doc["base"] = result.base;
  doc["base_cost"] = result.base_cost;
  double lp_total = 0.0;
  for (const StageReport& s : result.stages) lp_total += s.lp_objective;
  doc["lp_total"] = lp_total;
  Json stages = Json::array();
  for (const StageReport& s : result.stages) stages.push_back(stage_json(s));
  doc["stages"] = std::move(stages);
  doc["seed"] = params.seed;
  doc["params"] = {{"p", graph.p()},
                   {"q", graph.q()},
                   {"c_beta", params.c_beta},
                   {"c_h", params.c_h},
                   {"c_iter", params.c_iter},
                   {"c_r", params.c_r},
                   {"phi", params.phi},
                   {"epsilon_lp", params.eps_lp},
                   {"epsilon_sep", params.eps_sep},
                   {"t", params.t_override ? Json(*params.t_override) : Json(nullptr)},
                   {"t_prime", params.t_prime_override ? Json(*params.t_prime_override) : Json(nullptr)},
                   {"retries", params.retry_cap},
                   {"diagnostics", params.diagnostics},
                   {"base", params.base == BaseSolver::kExact ? "exact" : "primal-dual"}};
  doc["wall_seconds"] = wall_seconds;
  return doc.dump(2) + "\n";
}

std::string bench_csv_header() {
  return std::string(kBenchCsvVersion) +
         "\ninstance,n,m,p,q,seed,feasible,cost,base_cost,lp_total,opt,ratio,attempts,"
         "max_beta_hat,seconds,oracle_seconds\n";
}

std::string bench_csv_row(const BenchRow& row) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << row.instance << ',' << row.n << ',' << row.m << ',' << row.p << ',' << row.q << ','
      << row.seed << ',' << (row.feasible ? "true" : "false") << ',' << row.cost << ','
      << row.base_cost << ',' << row.lp_total << ',';
  if (row.opt) {
    out << *row.opt << ',';
    if (*row.opt > 0.0) {
      out << row.cost / *row.opt;
    } else {
      out << (row.cost == 0.0 ? "1" : "inf");
    }
  } else {
    out << ',';
  }
  out << ',' << row.attempts << ',' << row.max_beta_hat << ',' << row.seconds << ','
      << row.oracle_seconds << '\n';
  return out.str();
}

}  // namespace flexsndp
