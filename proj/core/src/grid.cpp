#include "treesir/grid.hpp"

#include <stdexcept>

namespace treesir {

RadialGrid make_lattice_grid(int n_shells) {
  RadialGrid g;
  g.k = 1;
  g.n_shells = n_shells;
  g.geometry = Geometry::Lattice;
  g.weights.assign(static_cast<std::size_t>( 2 * n_shells + 1), 1.0);
  return g;
}

RadialGrid make_tree_grid(int k, int n_shells) {
  RadialGrid g;
  g.k = k;
  g.n_shells = n_shells;
  g.geometry = Geometry::Tree;
  g.weights.resize(static_cast<std::size_t>(n_shells));
  g.weights[0] = 1.0;
  if (n_shells >= 2) g.weights[1] = k + 1.0;
  for (std::size_t i = 2; i < g.weights.size(); ++i)
    g.weights[i] = g.weights[i - 1] * k;
  return g;
}

RadialGrid build_grid(int k, int n_shells) {
  if (k < 1) throw std::invalid_argument("build_grid: k must be >= 1");
  if (n_shells < 8) throw std::invalid_argument("build_grid: n_shells must be >= 8");
  return k == 1 ? make_lattice_grid(n_shells) : make_tree_grid(k, n_shells);
}

}  // namespace treesir
