#include "netspread/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "netspread/errors.hpp"

namespace netspread {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::pair<NodeId, NodeId>> edge_pairs(const FlowNetwork& net) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(net.edge_count());
  for (const auto& e : net.edges()) out.emplace_back(e.origin, e.dest);
  return out;
}

/// Hop distances from `source`; kUnreached where unreachable.
std::vector<std::size_t> bfs_distances(const BinaryView& view, NodeId source) {
  std::vector<std::size_t> dist(view.size(), kUnreached);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : view.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

void require_connected(const BinaryView& view, std::string_view metric) {
  if (!view.connected()) {
    throw AnalysisError(std::string(metric) + " requires a " +
                        (view.is_directed() ? "strongly connected" : "connected") +
                        " network view; extract the giant component first (largest_component)");
  }
}

}  // namespace

std::string_view symbol(Metric metric) {
  switch (metric) {
    case Metric::Degree: return "DEG";
    case Metric::InDegree: return "IN.DEG";
    case Metric::OutDegree: return "OUT.DEG";
    case Metric::Strength: return "STR";
    case Metric::InStrength: return "IN.STR";
    case Metric::OutStrength: return "OUT.STR";
    case Metric::Clustering: return "C";
    case Metric::Betweenness: return "CB";
    case Metric::BetweennessPair: return "CB.PAIR";
    case Metric::Closeness: return "CC";
    case Metric::Eccentricity: return "ECC";
    case Metric::EccentricityFromRef: return "ECCFC";
    case Metric::EccentricityFromRefAbs: return "ECCFC.ABS";
  }
  return "?";
}

BinaryView::BinaryView(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges, bool directed)
    : directed_(directed), adj_(n) {
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw AnalysisError("edge endpoint outside the view");
    if (u == v) continue;
    adj_[u].push_back(v);
    if (!directed) adj_[v].push_back(u);
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

BinaryView BinaryView::undirected(const FlowNetwork& net) {
  const auto pairs = edge_pairs(net);
  return BinaryView(net.node_count(), pairs, false);
}

BinaryView BinaryView::directed(const FlowNetwork& net) {
  const auto pairs = edge_pairs(net);
  return BinaryView(net.node_count(), pairs, true);
}

bool BinaryView::connected() const {
  if (adj_.empty()) return true;
  const auto reach = [](const std::vector<std::size_t>& d) {
    return std::none_of(d.begin(), d.end(), [](std::size_t x) { return x == kUnreached; });
  };
  if (!reach(bfs_distances(*this, 0))) return false;
  if (!directed_) return true;
  // Strong connectivity: node 0 must also be reachable from everyone.
  std::vector<std::pair<NodeId, NodeId>> reversed;
  for (NodeId u = 0; u < adj_.size(); ++u) {
    for (NodeId v : adj_[u]) reversed.emplace_back(v, u);
  }
  return reach(bfs_distances(BinaryView(adj_.size(), reversed, true), 0));
}

CentralityVector degree(const FlowNetwork& net, DegreeMode mode) {
  CentralityVector out;
  out.metric = mode == DegreeMode::In ? Metric::InDegree : mode == DegreeMode::Out ? Metric::OutDegree : Metric::Degree;
  out.values.assign(net.node_count(), 0.0);
  for (const auto& e : net.edges()) {
    if (mode != DegreeMode::In) out.values[e.origin] += 1.0;
    if (mode != DegreeMode::Out) out.values[e.dest] += 1.0;
  }
  return out;
}

CentralityVector strength(const FlowNetwork& net, DegreeMode mode) {
  CentralityVector out;
  out.metric =
      mode == DegreeMode::In ? Metric::InStrength : mode == DegreeMode::Out ? Metric::OutStrength : Metric::Strength;
  out.values.assign(net.node_count(), 0.0);
  if (mode == DegreeMode::Total) {
    // Summed from the directional parts so STR == IN.STR + OUT.STR bit-exactly.
    const auto in = strength(net, DegreeMode::In);
    const auto outs = strength(net, DegreeMode::Out);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = in.values[i] + outs.values[i];
    return out;
  }
  for (const auto& e : net.edges()) {
    if (mode == DegreeMode::Out) out.values[e.origin] += e.weight;
    else out.values[e.dest] += e.weight;
  }
  return out;
}

CentralityVector clustering(const BinaryView& view) {
  if (view.is_directed()) throw AnalysisError("clustering is defined on the undirected view");
  CentralityVector out{Metric::Clustering, std::vector<double>(view.size(), 0.0)};
  for (NodeId v = 0; v < view.size(); ++v) {
    const auto nb = view.neighbors(v);
    const std::size_t k = nb.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto inner = view.neighbors(nb[i]);
      for (std::size_t j = i + 1; j < k; ++j) {
        if (std::binary_search(inner.begin(), inner.end(), nb[j])) ++links;
      }
    }
    out.values[v] = static_cast<double>(links) / (static_cast<double>(k * (k - 1)) / 2.0);
  }
  return out;
}

CentralityVector clustering(const FlowNetwork& net) { return clustering(BinaryView::undirected(net)); }

BetweennessScores betweenness_scores(const BinaryView& view) {
  require_connected(view, "betweenness");
  const std::size_t n = view.size();
  std::vector<double> raw(n, 0.0);

  std::vector<std::size_t> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;
  order.reserve(n);

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    dist[s] = 0;
    sigma[s] = 1.0;
    std::deque<NodeId> queue{s};
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (NodeId w : view.neighbors(v)) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) raw[w] += delta[w];
    }
  }

  // Undirected views count every unordered pair from both endpoints.
  const double nd = static_cast<double>(n);
  const double scale = view.is_directed() ? 1.0 : 0.5;
  const double pairs = view.is_directed() ? nd * (nd - 1.0) : nd * (nd - 1.0) / 2.0;
  const double pairs_excl = view.is_directed() ? (nd - 1.0) * (nd - 2.0) : (nd - 1.0) * (nd - 2.0) / 2.0;

  BetweennessScores out{{Metric::Betweenness, std::vector<double>(n, 0.0)},
                        {Metric::BetweennessPair, std::vector<double>(n, 0.0)}};
  for (NodeId v = 0; v < n; ++v) {
    const double through = raw[v] * scale;
    out.proportion.values[v] = pairs > 0.0 ? through / pairs : 0.0;
    out.pair_normalized.values[v] = pairs_excl > 0.0 ? through / pairs_excl : 0.0;
  }
  return out;
}

CentralityVector betweenness(const FlowNetwork& net) {
  return betweenness_scores(BinaryView::undirected(net)).proportion;
}

CentralityVector closeness(const BinaryView& view) {
  require_connected(view, "closeness");
  CentralityVector out{Metric::Closeness, std::vector<double>(view.size(), 0.0)};
  for (NodeId v = 0; v < view.size(); ++v) {
    std::size_t total = 0;
    for (std::size_t d : bfs_distances(view, v)) total += d;
    out.values[v] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
  }
  return out;
}

CentralityVector closeness(const FlowNetwork& net) { return closeness(BinaryView::undirected(net)); }

CentralityVector eccentricity(const BinaryView& view) {
  require_connected(view, "eccentricity");
  CentralityVector out{Metric::Eccentricity, std::vector<double>(view.size(), 0.0)};
  for (NodeId v = 0; v < view.size(); ++v) {
    const auto dist = bfs_distances(view, v);
    out.values[v] = static_cast<double>(*std::max_element(dist.begin(), dist.end()));
  }
  return out;
}

CentralityVector eccentricity(const FlowNetwork& net) { return eccentricity(BinaryView::undirected(net)); }

CentralityVector eccentricity_from_reference(const CentralityVector& ecc, NodeId ref, bool absolute) {
  if (ecc.metric != Metric::Eccentricity) throw AnalysisError("expected an ECC vector");
  if (ref >= ecc.values.size()) throw AnalysisError("reference node " + std::to_string(ref) + " is absent");
  CentralityVector out{absolute ? Metric::EccentricityFromRefAbs : Metric::EccentricityFromRef, ecc.values};
  const double base = ecc.values[ref];
  for (auto& v : out.values) {
    v -= base;
    if (absolute) v = std::abs(v);
  }
  return out;
}

FlowNetwork largest_component(const FlowNetwork& net) {
  const auto view = BinaryView::undirected(net);
  const std::size_t n = net.node_count();
  std::vector<std::size_t> label(n, kUnreached);
  std::size_t best_label = 0;
  std::size_t best_size = 0;
  std::size_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kUnreached) continue;
    std::size_t size = 0;
    const auto dist = bfs_distances(view, s);
    for (NodeId v = 0; v < n; ++v) {
      if (dist[v] != kUnreached) {
        label[v] = next;
        ++size;
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = next;
    }
    ++next;
  }
  std::vector<NodeId> remap(n, kUnreached);
  std::vector<NodeRecord> nodes;
  for (NodeId v = 0; v < n; ++v) {
    if (label[v] != best_label) continue;
    remap[v] = nodes.size();
    NodeRecord rec = net.node(v);
    rec.id = nodes.size();
    nodes.push_back(std::move(rec));
  }
  std::vector<FlowEdge> edges;
  for (const auto& e : net.edges()) {
    if (remap[e.origin] != kUnreached && remap[e.dest] != kUnreached) {
      edges.push_back({remap[e.origin], remap[e.dest], e.weight});
    }
  }
  return FlowNetwork(std::move(nodes), std::move(edges));
}

MetricsResult compute_all_metrics(const FlowNetwork& net, const MetricsOptions& options) {
  MetricsResult result;
  result.vectors.push_back(degree(net, DegreeMode::Total));
  result.vectors.push_back(degree(net, DegreeMode::In));
  result.vectors.push_back(degree(net, DegreeMode::Out));
  result.vectors.push_back(strength(net, DegreeMode::Total));
  result.vectors.push_back(strength(net, DegreeMode::In));
  result.vectors.push_back(strength(net, DegreeMode::Out));

  const auto undirected = BinaryView::undirected(net);
  result.vectors.push_back(clustering(undirected));
  result.notes.push_back("C: undirected binary view; nodes with fewer than 2 neighbours assigned 0");

  const BinaryView path_view = options.directed_paths ? BinaryView::directed(net) : undirected;
  const std::string view_note = options.directed_paths ? "directed binary view" : "undirected binary view";
  auto cb = betweenness_scores(path_view);
  result.vectors.push_back(std::move(cb.proportion));
  result.vectors.push_back(closeness(path_view));
  auto ecc = eccentricity(path_view);
  result.notes.push_back("CB, CC, ECC: " + view_note + ", hop-count shortest paths");
  result.notes.push_back("CB: share of all connected pairs' shortest paths; CB.PAIR: conventional pair normalization");

  if (options.reference) {
    const auto ref = net.find(*options.reference);
    if (!ref) throw AnalysisError("reference node '" + *options.reference + "' is not in the network");
    result.vectors.push_back(ecc);
    result.vectors.push_back(eccentricity_from_reference(ecc, *ref, false));
    result.vectors.push_back(eccentricity_from_reference(ecc, *ref, true));
    result.notes.push_back("ECCFC: ECC(i) - ECC(" + *options.reference + ") with ECC(" + *options.reference +
                           ") = " + std::to_string(static_cast<long long>(ecc.values[*ref])));
  } else {
    result.vectors.push_back(std::move(ecc));
  }
  result.vectors.push_back(std::move(cb.pair_normalized));
  return result;
}

void append_metrics(VariablesTable& table, const MetricsResult& metrics) {
  for (const auto& vec : metrics.vectors) {
    std::vector<Cell> cells(vec.values.begin(), vec.values.end());
    table.set_column(std::string(symbol(vec.metric)), std::move(cells));
  }
}

}  // namespace netspread
