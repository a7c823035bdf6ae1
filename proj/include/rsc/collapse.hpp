#pragma once

// Degree-zero (maximal) faces, the rational bounding test, stripping of
// bounding degree-zero faces above a cutoff dimension, and greedy elementary
// collapses through free faces.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "rsc/complex.hpp"
#include "rsc/homology.hpp"

namespace rsc {

/// Faces with no strict coface, in lexicographic order.
std::vector<Simplex> degree_zero_faces(const SimplicialComplex& complex);

/// Whether the boundary of the degree-zero face `face` is a rational boundary
/// in the complex with the open cell of `face` removed. A vertex counts as
/// bounding when another vertex remains (augmented convention).
bool is_bounding(const SimplicialComplex& complex, const Simplex& face);

struct StripResult {
  SimplicialComplex complex;
  std::vector<std::int64_t> removed_per_dim;  // index = dimension, length r+1
};

/// Removes bounding degree-zero faces of dimension > k, scanning dimensions
/// from r down to k+1 in lexicographic order and repeating until nothing
/// more can be removed. With `verify`, every removal is checked to lower
/// exactly one rational Betti number by one (ConsistencyGate otherwise).
StripResult strip_bounding(const SimplicialComplex& complex, int k, bool verify = false);

/// Elementary collapses through free faces (exactly one strict coface) until
/// none is left. Scans dimensions from the top down, lexicographically within
/// a dimension. With `verify`, rational Betti numbers are compared after
/// every collapse.
SimplicialComplex greedy_collapse(const SimplicialComplex& complex, bool verify = false);

struct CollapseReport {
  int k = 0;
  FVector f_before;
  std::vector<std::int64_t> removed_per_dim;
  FVector f_stripped;
  FVector f_core;
  int final_dim = -1;
  BettiVector betti_before;
  BettiVector betti_stripped;
  BettiVector betti_core;
  bool vanishes_above_k_q = false;
  bool vanishes_above_k_gf2 = false;
  bool success = false;

  nlohmann::json to_json() const;
};

/// strip_bounding followed by greedy_collapse. Success means the core has
/// dimension <= k and the stripped complex has no homology above k over Q and
/// GF(2). Throws ConsistencyGate if the collapse changed rational homology.
CollapseReport statement_a_probe(const SimplicialComplex& complex, int k);

}  // namespace rsc
