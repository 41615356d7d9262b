#include "specfilt/graphgen.hpp"

#include <stdexcept>
#include <string>

#include "specfilt/rng.hpp"

namespace specfilt {

int LatticeSbmParams::population_count() const {
  int c = 1;
  for (int d : dims) c *= d;
  return c;
}

int LatticeSbmParams::node_count() const { return population_count() * m; }

void validate(const ErdosRenyiParams& p) {
  if (p.n < 2) throw std::invalid_argument("erdos-renyi: n must be at least 2");
  if (!(p.theta >= 0.0 && p.theta <= 1.0))
    throw std::invalid_argument("erdos-renyi: theta must lie in [0, 1]");
}

void validate(const LatticeSbmParams& p) {
  if (p.dims.empty()) throw std::invalid_argument("lattice-sbm: dims must be nonempty");
  for (int d : p.dims)
    if (d < 1) throw std::invalid_argument("lattice-sbm: every dimension must be positive");
  if (p.m < 1) throw std::invalid_argument("lattice-sbm: m must be positive");
  if (!(p.theta0 >= 0.0 && p.theta0 <= 1.0))
    throw std::invalid_argument("lattice-sbm: theta0 must lie in [0, 1]");
  if (p.thetas.size() != p.dims.size())
    throw std::invalid_argument("lattice-sbm: thetas must have one entry per dimension");
  for (double t : p.thetas)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("lattice-sbm: every theta must lie in [0, 1]");
  if (p.node_count() < 2) throw std::invalid_argument("lattice-sbm: fewer than 2 nodes");
}

Graph generate_erdos_renyi(const ErdosRenyiParams& p, std::uint64_t seed) {
  validate(p);
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(0.5 * p.theta * p.n * (p.n - 1)) + 16);
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j)
      if (rng.bernoulli(p.theta)) edges.emplace_back(i, j);
  return Graph(p.n, std::move(edges));
}

namespace {

// Population index -> lattice coordinates, dimension 0 fastest.
void population_coords(int pop, const std::vector<int>& dims, std::vector<int>& out) {
  out.resize(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out[k] = pop % dims[k];
    pop /= dims[k];
  }
}

}  // namespace

Graph generate_lattice_sbm(const LatticeSbmParams& p, std::uint64_t seed) {
  validate(p);
  const int n = p.node_count();
  const int pops = p.population_count();
  const std::size_t d = p.dims.size();

  std::vector<std::vector<int>> coords(pops);
  for (int q = 0; q < pops; ++q) population_coords(q, p.dims, coords[q]);

  // Pairwise link probability per population pair: theta0 inside, thetas[k]
  // across a unit step along dimension k, zero otherwise.
  std::vector<double> pair_prob(static_cast<std::size_t>(pops) * pops, 0.0);
  for (int a = 0; a < pops; ++a) {
    pair_prob[static_cast<std::size_t>(a) * pops + a] = p.theta0;
    for (int b = a + 1; b < pops; ++b) {
      int diff_dim = -1;
      bool linked = true;
      for (std::size_t k = 0; k < d && linked; ++k) {
        int delta = coords[a][k] - coords[b][k];
        if (delta == 0) continue;
        if ((delta == 1 || delta == -1) && diff_dim < 0)
          diff_dim = static_cast<int>(k);
        else
          linked = false;
      }
      double prob = (linked && diff_dim >= 0) ? p.thetas[diff_dim] : 0.0;
      pair_prob[static_cast<std::size_t>(a) * pops + b] = prob;
      pair_prob[static_cast<std::size_t>(b) * pops + a] = prob;
    }
  }

  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    const int pi = i / p.m;
    for (int j = i + 1; j < n; ++j) {
      const double prob = pair_prob[static_cast<std::size_t>(pi) * pops + j / p.m];
      if (rng.bernoulli(prob)) edges.emplace_back(i, j);
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace specfilt
