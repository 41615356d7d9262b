#include "specfilt/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace specfilt {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 1) throw std::invalid_argument("graph: node count must be positive");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph: duplicate edge");
  edges_ = std::move(edges);

  adjacency_.assign(n_, {});
  degrees_.assign(n_, 0);
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    ++degrees_[u];
    ++degrees_[v];
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

int Graph::min_degree() const {
  return *std::min_element(degrees_.begin(), degrees_.end());
}

double Graph::mean_degree() const {
  return 2.0 * edge_count() / node_count();
}

bool is_connected(const Graph& g) {
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == n;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.node_count() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_edge_list(g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Graph read_edge_list(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n")
    throw std::runtime_error("edge list: expected header \"n <count>\"");
  std::vector<std::pair<int, int>> edges;
  int u, v;
  while (in >> u >> v) edges.emplace_back(u, v);
  if (!in.eof() && in.fail())
    throw std::runtime_error("edge list: malformed edge line");
  return Graph(n, std::move(edges));
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_edge_list(in);
}

}  // namespace specfilt
