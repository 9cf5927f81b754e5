#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netspread/network.hpp"
#include "netspread/variables.hpp"

namespace netspread {

enum class Metric {
  Degree,
  InDegree,
  OutDegree,
  Strength,
  InStrength,
  OutStrength,
  Clustering,
  Betweenness,      // fraction of all shortest paths (the default CB column)
  BetweennessPair,  // conventional (n-1)(n-2)/2 pair normalization
  Closeness,
  Eccentricity,
  EccentricityFromRef,
  EccentricityFromRefAbs,
};

/// Column symbol of a metric, e.g. "IN.DEG" or "ECCFC.ABS".
std::string_view symbol(Metric metric);

enum class DegreeMode { In, Out, Total };

/// One metric value per node id.
struct CentralityVector {
  Metric metric = Metric::Degree;
  std::vector<double> values;
};

/// Unweighted adjacency used by the path-based metrics. In the undirected
/// projection an edge exists if either direction exists in the digraph.
class BinaryView {
 public:
  BinaryView(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges, bool directed);

  static BinaryView undirected(const FlowNetwork& net);
  static BinaryView directed(const FlowNetwork& net);

  std::size_t size() const { return adj_.size(); }
  bool is_directed() const { return directed_; }

  /// Sorted, duplicate-free successors of `v`.
  std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }

  /// Connected (undirected) or strongly connected (directed).
  bool connected() const;

 private:
  bool directed_ = false;
  std::vector<std::vector<NodeId>> adj_;
};

CentralityVector degree(const FlowNetwork& net, DegreeMode mode);
CentralityVector strength(const FlowNetwork& net, DegreeMode mode);

/// Local clustering on an undirected view; nodes with fewer than two
/// neighbours get 0.
CentralityVector clustering(const BinaryView& view);
CentralityVector clustering(const FlowNetwork& net);

struct BetweennessScores {
  CentralityVector proportion;       // divided by the number of connected pairs
  CentralityVector pair_normalized;  // divided by the pairs not involving v
};

/// Brandes accumulation over per-source BFS. Throws AnalysisError when the
/// view is not connected.
BetweennessScores betweenness_scores(const BinaryView& view);
CentralityVector betweenness(const FlowNetwork& net);

/// 1 / (sum of hop distances). Throws AnalysisError when disconnected.
CentralityVector closeness(const BinaryView& view);
CentralityVector closeness(const FlowNetwork& net);

/// Maximum hop distance. Throws AnalysisError when disconnected.
CentralityVector eccentricity(const BinaryView& view);
CentralityVector eccentricity(const FlowNetwork& net);

/// ECC(i) - ECC(ref), or its magnitude. Throws AnalysisError if `ref` is out
/// of range or `ecc` is not an eccentricity vector.
CentralityVector eccentricity_from_reference(const CentralityVector& ecc, NodeId ref, bool absolute);

/// Largest connected component of the undirected projection, with node ids
/// renumbered in original order. Edges between kept nodes are preserved.
FlowNetwork largest_component(const FlowNetwork& net);

struct MetricsOptions {
  bool directed_paths = false;             // path metrics on the digraph instead
  std::optional<std::string> reference = std::string("CHN");
};

struct MetricsResult {
  std::vector<CentralityVector> vectors;
  std::vector<std::string> notes;
};

/// Every network metric in canonical column order.
MetricsResult compute_all_metrics(const FlowNetwork& net, const MetricsOptions& options = {});

/// Writes each vector as a column named by its symbol.
void append_metrics(VariablesTable& table, const MetricsResult& metrics);

}  // namespace netspread
