#pragma once

#include <cstddef>
#include <vector>

namespace treesir {

enum class Geometry { Lattice, Tree };

/// Truncated spatial domain. For the lattice (k = 1) sites run over
/// -N..N with unit weights. For the tree (k >= 2) shells run over 1..N with
/// multiplicities w_1 = 1, w_2 = k+1, w_n = (k+1) k^{n-2}.
struct RadialGrid {
  int k = 1;
  int n_shells = 0;  ///< truncation length N
  Geometry geometry = Geometry::Lattice;
  std::vector<double> weights;  ///< one entry per stored site

  std::size_t size() const { return weights.size(); }
  int min_site() const { return geometry == Geometry::Lattice ? -n_shells : 1; }
  int max_site() const { return n_shells; }

  std::size_t index_of(int site) const {
    return geometry == Geometry::Lattice ? static_cast<std::size_t>(site + n_shells)
                                         : static_cast<std::size_t>(site - 1);
  }
  int site_at(std::size_t idx) const {
    return geometry == Geometry::Lattice ? static_cast<int>(idx) - n_shells
                                         : static_cast<int>(idx) + 1;
  }
};

/// k = 1 yields the two-sided lattice, k >= 2 the one-sided shell grid.
/// Throws std::invalid_argument on k < 1 or n_shells < 8.
RadialGrid build_grid(int k, int n_shells);

/// Explicit-geometry constructors; build_grid dispatches to these.
RadialGrid make_lattice_grid(int n_shells);
RadialGrid make_tree_grid(int k, int n_shells);

}  // namespace treesir
