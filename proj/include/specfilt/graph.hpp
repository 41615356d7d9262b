#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace specfilt {

/// Undirected simple graph. Edges are stored canonically (u < v, sorted,
/// unique); adjacency lists and degrees are built on construction.
class Graph {
 public:
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(int v) const { return degrees_[v]; }
  int min_degree() const;
  double mean_degree() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> degrees_;
};

bool is_connected(const Graph& g);

// Plain-text edge list: header "n <node count>", then one "u v" line per edge.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::string& path);
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

}  // namespace specfilt
