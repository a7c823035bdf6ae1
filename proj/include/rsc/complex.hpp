#pragma once

// Finite simplicial complexes on the vertex set {1, ..., n}, capped at
// dimension r. Faces are kept per dimension in lexicographically sorted flat
// tables, which doubles as the canonical face order used by boundary matrices.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsc/error.hpp"

namespace rsc {

using Vertex = std::uint32_t;

/// Nonempty, strictly increasing list of 1-based vertex ids.
class Simplex {
 public:
  explicit Simplex(std::vector<Vertex> vertices);
  Simplex(std::initializer_list<Vertex> vertices);
  explicit Simplex(std::span<const Vertex> vertices);

  int dim() const noexcept { return static_cast<int>(vertices_.size()) - 1; }
  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  Vertex front() const noexcept { return vertices_.front(); }
  Vertex back() const noexcept { return vertices_.back(); }

  std::string to_string() const;

  auto operator<=>(const Simplex&) const = default;
  bool operator==(const Simplex&) const = default;

 private:
  std::vector<Vertex> vertices_;
};

/// Sorted, duplicate-free table of faces of one dimension, stored flat with
/// stride dim + 1.
class FaceTable {
 public:
  explicit FaceTable(int dim = 0) : dim_(dim) {}

  /// Sorts and deduplicates `flat` (concatenated vertex tuples).
  static FaceTable from_unsorted(int dim, std::vector<Vertex> flat);

  int dim() const noexcept { return dim_; }
  std::size_t stride() const noexcept { return static_cast<std::size_t>(dim_) + 1; }
  std::size_t size() const noexcept { return data_.size() / stride(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const Vertex> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * stride(), stride()};
  }

  std::optional<std::size_t> find(std::span<const Vertex> face) const;
  bool contains(std::span<const Vertex> face) const { return find(face).has_value(); }

  /// Copy of the table with entry `index` dropped.
  FaceTable without(std::size_t index) const;

  const std::vector<Vertex>& flat() const noexcept { return data_; }

  bool operator==(const FaceTable&) const = default;

 private:
  int dim_;
  std::vector<Vertex> data_;
};

using FVector = std::vector<std::int64_t>;
using ExternalVector = std::vector<std::int64_t>;

class SimplicialComplex {
 public:
  /// Empty complex in the ambient simplex on n vertices with dimension cap r.
  SimplicialComplex(int n, int r);

  /// Takes per-dimension tables that are already downward closed. Range and
  /// closure are validated; throws on violation.
  static SimplicialComplex from_levels(int n, int r, std::vector<FaceTable> levels);

  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }

  /// Largest d with a d-face, or -1 for the empty complex.
  int dimension() const noexcept;
  bool empty() const noexcept { return levels_.front().empty(); }

  const FaceTable& faces(int d) const;
  std::size_t num_faces(int d) const;
  std::size_t total_faces() const noexcept;

  bool contains(std::span<const Vertex> face) const;
  bool contains(const Simplex& s) const { return contains(s.vertices()); }

  std::vector<Simplex> simplices(int d) const;

  /// Faces with no strict coface, sorted lexicographically.
  std::vector<Simplex> maximal_faces() const;
  bool is_maximal(std::span<const Vertex> face) const;

  /// Removes a maximal face; the result is still downward closed.
  SimplicialComplex without_maximal(const Simplex& s) const;

  bool operator==(const SimplicialComplex&) const = default;

 private:
  SimplicialComplex(int n, int r, std::vector<FaceTable> levels)
      : n_(n), r_(r), levels_(std::move(levels)) {}

  int n_;
  int r_;
  std::vector<FaceTable> levels_;
};

SimplicialComplex build_complex(int n, int r, std::span<const Simplex> generators);
SimplicialComplex build_complex(int n, int r, std::initializer_list<Simplex> generators);

FVector f_vector(const SimplicialComplex& complex);

/// e_i for i = 0..r: simplices of the ambient simplex outside the complex
/// whose whole boundary lies inside it. Dimension r + 1 is not counted.
ExternalVector external_face_counts(const SimplicialComplex& complex);

std::int64_t euler_characteristic(const SimplicialComplex& complex);

/// Canonical text form: header `n=<n> r=<r>` then the maximal faces in
/// lexicographic order, one per line.
std::string encode_complex(const SimplicialComplex& complex);
SimplicialComplex decode_complex(std::string_view text);

SimplicialComplex read_complex_file(const std::string& path);
void write_complex_file(const std::string& path, const SimplicialComplex& complex);

/// Sorted neighbour lists indexed by vertex id (index 0 unused).
std::vector<std::vector<Vertex>> adjacency_lists(int n, const FaceTable& edges);

/// Calls `fn(span)` once for every d-simplex (d = lower.dim() + 1) of the
/// ambient simplex whose facets all belong to `lower`. For d >= 2 the
/// candidates come from common-neighbour extension of each (d-1)-face by a
/// larger vertex; `adjacency` must come from the edge table containing the
/// 1-skeleton of `lower`.
template <class Fn>
void for_each_supported_simplex(const FaceTable& lower,
                                const std::vector<std::vector<Vertex>>& adjacency,
                                Fn&& fn);

}  // namespace rsc

#include "rsc/detail/complex_inl.hpp"
