#pragma once

// Exact simplicial homology at desk scale. Boundary matrices follow the
// canonical (lexicographic) face order; ranks are computed by sparse column
// elimination over GF(p) or, fraction-free, over the integers for Q; integral
// homology comes from the Smith normal form of each boundary matrix.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rsc/complex.hpp"

namespace rsc {

/// (row, value) pairs sorted by row.
using SparseColumn = std::vector<std::pair<std::uint32_t, std::int64_t>>;

struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseColumn> columns;

  std::size_t nnz() const noexcept;
  /// `rows cols nnz` header, then one `row col value` line per entry
  /// (0-based indices, column-major order).
  std::string to_triplets() const;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

struct BoundaryMatrix {
  int dim = 1;
  SparseMatrix matrix;
};

/// Signed incidence of d-faces (columns) against (d-1)-faces (rows):
/// removing the vertex at position i carries sign (-1)^i.
BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int d);

/// Boundary chain of one simplex in the row order of the complex's
/// (dim-1)-face table. Every facet must be a face of the complex.
SparseColumn boundary_column(const SimplicialComplex& complex, std::span<const Vertex> face);

class Coefficients {
 public:
  static Coefficients rationals() { return Coefficients(0); }
  /// Throws NonPrimeModulus unless p is a prime below 2^31.
  static Coefficients modulo(std::uint64_t p);

  bool is_rational() const noexcept { return modulus_ == 0; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::string to_string() const;

  bool operator==(const Coefficients&) const = default;

 private:
  explicit Coefficients(std::uint32_t modulus) : modulus_(modulus) {}
  std::uint32_t modulus_;
};

std::size_t matrix_rank(const SparseMatrix& matrix, Coefficients field);

/// Whether `v` lies in the column span of `matrix` over the field.
bool in_column_space(const SparseMatrix& matrix, const SparseColumn& v, Coefficients field);

struct BettiVector {
  Coefficients field = Coefficients::rationals();
  std::vector<std::int64_t> values;  // b_0 .. b_dim

  /// 0 beyond the stored range.
  std::int64_t at(int j) const noexcept;
  std::string to_string() const;

  bool operator==(const BettiVector&) const = default;
};

/// Unreduced Betti numbers b_0..b_dim(Y); empty for the empty complex.
BettiVector betti_numbers(const SimplicialComplex& complex,
                          Coefficients field = Coefficients::rationals());

/// b_0 - 1 in degree 0, unchanged above. Throws EmptyComplex on the empty complex.
BettiVector reduced_betti(const SimplicialComplex& complex,
                          Coefficients field = Coefficients::rationals());

/// Dense work (after unit-pivot elimination) allowed per Smith normal form.
struct SnfBudget {
  std::size_t max_dense_entries = 4'000'000;
};

/// Nonzero diagonal of the Smith normal form, in divisibility order.
std::vector<mpz_class> invariant_factors(const SparseMatrix& matrix, const SnfBudget& budget = {});

struct HomologyGroup {
  std::int64_t free_rank = 0;
  std::vector<mpz_class> torsion;  // invariant factors > 1

  bool trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  /// e.g. "0", "Z", "Z^2 + Z/2".
  std::string to_string() const;
};

struct IntegralHomology {
  std::vector<HomologyGroup> groups;  // H_0 .. H_dim
};

IntegralHomology integral_homology(const SimplicialComplex& complex, const SnfBudget& budget = {});

}  // namespace rsc
