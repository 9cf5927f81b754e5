#include "netspread/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "netspread/csv.hpp"
#include "netspread/errors.hpp"

namespace netspread {

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

void lowercase_header(csv::Table& table) {
  for (auto& h : table.header) h = lower(h);
}

std::size_t require_column(const csv::Table& table, std::string_view name, std::string_view source) {
  const auto idx = table.column(name);
  if (!idx) throw IngestError(std::string(source) + ": header lacks required column '" + std::string(name) + "'");
  return *idx;
}

double require_number(const std::string& cell, std::string_view column, std::string_view source,
                      std::size_t line) {
  const auto v = csv::parse_number(cell);
  if (!v) {
    throw IngestError(where(source, line) + "column '" + std::string(column) + "' is not numeric: '" + cell + "'");
  }
  return *v;
}

}  // namespace

std::string_view to_string(Continent continent) {
  switch (continent) {
    case Continent::Asia: return "Asia";
    case Continent::Europe: return "Europe";
    case Continent::NorthAmerica: return "NorthAmerica";
    case Continent::SouthAmerica: return "SouthAmerica";
    case Continent::Africa: return "Africa";
    case Continent::Oceania: return "Oceania";
  }
  return "?";
}

std::optional<Continent> parse_continent(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-' || c == '.') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "asia") return Continent::Asia;
  if (key == "europe") return Continent::Europe;
  if (key == "northamerica") return Continent::NorthAmerica;
  if (key == "southamerica") return Continent::SouthAmerica;
  if (key == "africa") return Continent::Africa;
  if (key == "oceania") return Continent::Oceania;
  return std::nullopt;
}

FlowNetwork::FlowNetwork(std::vector<NodeRecord> nodes, std::vector<FlowEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.id != i) throw IngestError("node '" + n.code + "' has id " + std::to_string(n.id) + ", expected " + std::to_string(i));
    if (n.code.empty()) throw IngestError("node " + std::to_string(i) + " has an empty code");
    if (!(n.capital_lon >= -180.0 && n.capital_lon <= 180.0)) {
      throw IngestError("node '" + n.code + "': longitude outside [-180, 180]");
    }
    if (!(n.capital_lat > -90.0 && n.capital_lat < 90.0)) {
      throw IngestError("node '" + n.code + "': latitude outside (-90, 90)");
    }
    if (!index_.emplace(n.code, i).second) throw IngestError("duplicate node code '" + n.code + "'");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : edges_) {
    if (e.origin >= nodes_.size() || e.dest >= nodes_.size()) {
      throw IngestError("edge endpoint references a node outside the node set");
    }
    const auto& o = nodes_[e.origin].code;
    const auto& d = nodes_[e.dest].code;
    if (e.origin == e.dest) throw IngestError("self-loop on '" + o + "'");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw IngestError("edge " + o + "->" + d + " has a negative or non-finite weight");
    }
    if (!seen.emplace(e.origin, e.dest).second) throw IngestError("duplicate edge " + o + "->" + d);
  }
}

std::optional<NodeId> FlowNetwork::find(std::string_view code) const {
  const auto it = index_.find(code);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId FlowNetwork::id_of(std::string_view code) const {
  if (auto id = find(code)) return *id;
  throw IngestError("unknown node code '" + std::string(code) + "'");
}

double FlowNetwork::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += e.weight;
  return sum;
}

bool operator==(const FlowNetwork& a, const FlowNetwork& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.id != y.id || x.code != y.code || x.name != y.name || x.continent != y.continent ||
        x.capital_lon != y.capital_lon || x.capital_lat != y.capital_lat) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.origin != y.origin || x.dest != y.dest || x.weight != y.weight) return false;
  }
  return true;
}

std::vector<NodeRecord> parse_nodes(std::string_view text, std::string_view source) {
  auto table = csv::parse(text, source);
  lowercase_header(table);
  const auto c_code = require_column(table, "code", source);
  const auto c_name = require_column(table, "name", source);
  const auto c_cont = require_column(table, "continent", source);
  const auto c_lon = require_column(table, "lon", source);
  const auto c_lat = require_column(table, "lat", source);

  std::vector<NodeRecord> nodes;
  std::set<std::string, std::less<>> codes;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.line_numbers[r];
    NodeRecord rec;
    rec.id = nodes.size();
    rec.code = row[c_code];
    rec.name = row[c_name];
    if (rec.code.empty()) throw IngestError(where(source, line) + "empty country code");
    if (!codes.insert(rec.code).second) throw IngestError(where(source, line) + "duplicate country code '" + rec.code + "'");
    const auto cont = parse_continent(row[c_cont]);
    if (!cont) throw IngestError(where(source, line) + "unknown continent '" + row[c_cont] + "'");
    rec.continent = *cont;
    rec.capital_lon = require_number(row[c_lon], "lon", source, line);
    rec.capital_lat = require_number(row[c_lat], "lat", source, line);
    if (rec.capital_lon < -180.0 || rec.capital_lon > 180.0) {
      throw IngestError(where(source, line) + "longitude " + row[c_lon] + " outside [-180, 180]");
    }
    if (rec.capital_lat <= -90.0 || rec.capital_lat >= 90.0) {
      throw IngestError(where(source, line) + "latitude " + row[c_lat] + " outside (-90, 90)");
    }
    nodes.push_back(std::move(rec));
  }
  return nodes;
}

FlowNetwork parse_edge_list(std::string_view text, std::vector<NodeRecord> nodes, std::string_view source) {
  auto table = csv::parse(text, source);
  lowercase_header(table);
  const auto c_origin = require_column(table, "origin", source);
  const auto c_dest = require_column(table, "dest", source);
  const auto c_weight = require_column(table, "weight", source);

  std::map<std::string, NodeId, std::less<>> index;
  for (const auto& n : nodes) index.emplace(n.code, n.id);
  auto resolve = [&](const std::string& code, std::size_t line) {
    const auto it = index.find(code);
    if (it == index.end()) throw IngestError(where(source, line) + "unknown country code '" + code + "'");
    return it->second;
  };

  std::vector<FlowEdge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.line_numbers[r];
    FlowEdge e;
    e.origin = resolve(row[c_origin], line);
    e.dest = resolve(row[c_dest], line);
    if (e.origin == e.dest) throw IngestError(where(source, line) + "self-loop on '" + row[c_origin] + "'");
    e.weight = require_number(row[c_weight], "weight", source, line);
    if (e.weight < 0.0) throw IngestError(where(source, line) + "negative weight " + row[c_weight]);
    if (!seen.emplace(e.origin, e.dest).second) {
      throw IngestError(where(source, line) + "duplicate edge " + row[c_origin] + "->" + row[c_dest]);
    }
    edges.push_back(e);
  }
  return FlowNetwork(std::move(nodes), std::move(edges));
}

FlowNetwork load_network(const std::string& nodes_path, const std::string& edges_path) {
  auto nodes = parse_nodes(csv::read_file(nodes_path), nodes_path);
  return parse_edge_list(csv::read_file(edges_path), std::move(nodes), edges_path);
}

std::string write_nodes_csv(const FlowNetwork& net) {
  std::string out = csv::join_row({"code", "name", "continent", "lon", "lat"});
  for (const auto& n : net.nodes()) {
    out += csv::join_row({n.code, n.name, std::string(to_string(n.continent)), csv::format_number(n.capital_lon),
                          csv::format_number(n.capital_lat)});
  }
  return out;
}

std::string write_edges_csv(const FlowNetwork& net) {
  std::string out = csv::join_row({"origin", "dest", "weight"});
  for (const auto& e : net.edges()) {
    out += csv::join_row({net.node(e.origin).code, net.node(e.dest).code, csv::format_number(e.weight)});
  }
  return out;
}

}  // namespace netspread
