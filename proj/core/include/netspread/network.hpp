#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netspread {

using NodeId = std::size_t;

enum class Continent { Asia, Europe, NorthAmerica, SouthAmerica, Africa, Oceania };

std::string_view to_string(Continent continent);

/// Accepts "NorthAmerica", "North America", "north_america", ... (case-insensitive).
std::optional<Continent> parse_continent(std::string_view text);

/// A country, geo-referenced at its capital city.
struct NodeRecord {
  NodeId id = 0;
  std::string code;  // ISO 3166 alpha-3
  std::string name;
  Continent continent = Continent::Asia;
  double capital_lon = 0.0;  // [-180, 180]
  double capital_lat = 0.0;  // (-90, 90)
};

/// Annual traveller flow from `origin` to `dest`.
struct FlowEdge {
  NodeId origin = 0;
  NodeId dest = 0;
  double weight = 0.0;
};

/// Directed weighted country network. Immutable once constructed; the
/// constructor enforces unique codes, coordinate ranges, endpoint integrity,
/// no self-loops, non-negative weights and at most one edge per ordered pair.
class FlowNetwork {
 public:
  FlowNetwork() = default;

  /// Node ids must equal their position in `nodes`. Throws IngestError.
  FlowNetwork(std::vector<NodeRecord> nodes, std::vector<FlowEdge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  constexpr bool directed() const { return true; }

  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const FlowEdge> edges() const { return edges_; }
  const NodeRecord& node(NodeId id) const { return nodes_.at(id); }

  std::optional<NodeId> find(std::string_view code) const;

  /// Like find(), but throws IngestError naming the unknown code.
  NodeId id_of(std::string_view code) const;

  double total_weight() const;

  friend bool operator==(const FlowNetwork& a, const FlowNetwork& b);

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<FlowEdge> edges_;
  std::map<std::string, NodeId, std::less<>> index_;
};

/// Parses `nodes.csv` (code,name,continent,lon,lat). Ids follow row order.
std::vector<NodeRecord> parse_nodes(std::string_view text, std::string_view source = "nodes.csv");

/// Parses `edges.csv` (origin,dest,weight) against an already loaded node set.
FlowNetwork parse_edge_list(std::string_view text, std::vector<NodeRecord> nodes,
                            std::string_view source = "edges.csv");

FlowNetwork load_network(const std::string& nodes_path, const std::string& edges_path);

std::string write_nodes_csv(const FlowNetwork& net);
std::string write_edges_csv(const FlowNetwork& net);

}  // namespace netspread
