#include "rsc/collapse.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace rsc {

namespace {

bool same_betti(const BettiVector& a, const BettiVector& b) {
  const int top = static_cast<int>(std::max(a.values.size(), b.values.size()));
  for (int j = 0; j < top; ++j) {
    if (a.at(j) != b.at(j)) return false;
  }
  return true;
}

bool vanishes_above(const BettiVector& b, int k) {
  for (int j = k + 1; j < static_cast<int>(b.values.size()); ++j) {
    if (b.at(j) != 0) return false;
  }
  return true;
}

void check_single_drop(const BettiVector& before, const BettiVector& after, int d,
                       const Simplex& face) {
  const int top = static_cast<int>(std::max(before.values.size(), after.values.size()));
  for (int j = 0; j < top; ++j) {
    const std::int64_t expected = before.at(j) - (j == d ? 1 : 0);
    if (after.at(j) != expected) {
      throw Error(ErrorCode::ConsistencyGate,
                  "removing bounding face " + face.to_string() + " changed b_" + std::to_string(j) +
                      " from " + std::to_string(before.at(j)) + " to " + std::to_string(after.at(j)));
    }
  }
}

}  // namespace

std::vector<Simplex> degree_zero_faces(const SimplicialComplex& complex) {
  return complex.maximal_faces();
}

bool is_bounding(const SimplicialComplex& complex, const Simplex& face) {
  if (!complex.contains(face)) throw Error(ErrorCode::NotAFace, face.to_string() + " is not a face");
  if (!complex.is_maximal(face.vertices())) {
    throw Error(ErrorCode::NotDegreeZero, face.to_string() + " has a strict coface");
  }
  const int d = face.dim();
  if (d == 0) return complex.num_faces(0) >= 2;

  const SimplicialComplex rest = complex.without_maximal(face);
  SparseMatrix others;
  others.rows = rest.num_faces(d - 1);
  const FaceTable& level = rest.faces(d);
  others.cols = level.size();
  others.columns.reserve(level.size());
  for (std::size_t j = 0; j < level.size(); ++j) others.columns.push_back(boundary_column(rest, level[j]));
  return in_column_space(others, boundary_column(rest, face.vertices()), Coefficients::rationals());
}

StripResult strip_bounding(const SimplicialComplex& complex, int k, bool verify) {
  if (k < 0) throw Error(ErrorCode::IndexOutOfRange, "cutoff dimension must be >= 0");
  StripResult out{complex, std::vector<std::int64_t>(static_cast<std::size_t>(complex.r()) + 1, 0)};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int d = out.complex.r(); d > k; --d) {
      for (const Simplex& face : out.complex.simplices(d)) {
        if (!out.complex.is_maximal(face.vertices()) || !is_bounding(out.complex, face)) continue;
        std::optional<BettiVector> before;
        if (verify) before = betti_numbers(out.complex);
        out.complex = out.complex.without_maximal(face);
        ++out.removed_per_dim[static_cast<std::size_t>(d)];
        changed = true;
        if (verify) check_single_drop(*before, betti_numbers(out.complex), d, face);
      }
    }
  }
  return out;
}

namespace {

/// Mutable copy of a complex with, per face, the number of cofaces one
/// dimension up.
class CollapseWorkspace {
 public:
  using Key = std::vector<Vertex>;

  explicit CollapseWorkspace(const SimplicialComplex& complex)
      : n_(complex.n()), r_(complex.r()), levels_(static_cast<std::size_t>(complex.r()) + 1) {
    for (int d = 0; d <= r_; ++d) {
      const FaceTable& table = complex.faces(d);
      for (std::size_t i = 0; i < table.size(); ++i) {
        levels_[static_cast<std::size_t>(d)].emplace(Key(table[i].begin(), table[i].end()), 0);
      }
    }
    for (int d = 1; d <= r_; ++d) {
      for (const auto& [face, count] : levels_[static_cast<std::size_t>(d)]) adjust_facets(face, +1);
    }
  }

  int top_dimension() const {
    for (int d = r_; d >= 0; --d) {
      if (!levels_[static_cast<std::size_t>(d)].empty()) return d;
    }
    return -1;
  }

  std::vector<Key> faces(int d) const {
    std::vector<Key> out;
    for (const auto& entry : levels_[static_cast<std::size_t>(d)]) out.push_back(entry.first);
    return out;
  }

  /// Collapses `face` with its unique coface if `face` is free.
  bool try_collapse(const Key& face) {
    const int d = static_cast<int>(face.size()) - 1;
    auto& level = levels_[static_cast<std::size_t>(d)];
    auto it = level.find(face);
    if (it == level.end() || it->second != 1 || d == r_) return false;
    auto& upper = levels_[static_cast<std::size_t>(d) + 1];
    Key coface(face.size() + 1);
    for (Vertex w = 1; w <= static_cast<Vertex>(n_); ++w) {
      if (std::binary_search(face.begin(), face.end(), w)) continue;
      std::merge(face.begin(), face.end(), &w, &w + 1, coface.begin());
      auto up = upper.find(coface);
      if (up == upper.end()) continue;
      if (up->second != 0) return false;
      upper.erase(up);
      adjust_facets(coface, -1);
      level.erase(face);
      adjust_facets(face, -1);
      return true;
    }
    return false;
  }

  SimplicialComplex to_complex() const {
    std::vector<FaceTable> tables;
    for (int d = 0; d <= r_; ++d) {
      std::vector<Vertex> flat;
      for (const auto& entry : levels_[static_cast<std::size_t>(d)]) {
        flat.insert(flat.end(), entry.first.begin(), entry.first.end());
      }
      tables.push_back(FaceTable::from_unsorted(d, std::move(flat)));
    }
    return SimplicialComplex::from_levels(n_, r_, std::move(tables));
  }

 private:
  void adjust_facets(const Key& face, int delta) {
    if (face.size() < 2) return;
    auto& lower = levels_[face.size() - 2];
    Key facet(face.size() - 1);
    for (std::size_t skip = 0; skip < face.size(); ++skip) {
      std::size_t pos = 0;
      for (std::size_t k = 0; k < face.size(); ++k) {
        if (k != skip) facet[pos++] = face[k];
      }
      auto it = lower.find(facet);
      if (it != lower.end()) it->second += delta;
    }
  }

  int n_;
  int r_;
  std::vector<std::map<Key, int>> levels_;
};

}  // namespace

SimplicialComplex greedy_collapse(const SimplicialComplex& complex, bool verify) {
  CollapseWorkspace work(complex);
  std::optional<BettiVector> reference;
  if (verify) reference = betti_numbers(complex);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int d = work.top_dimension() - 1; d >= 0; --d) {
      for (const auto& face : work.faces(d)) {
        if (!work.try_collapse(face)) continue;
        changed = true;
        if (verify && !same_betti(*reference, betti_numbers(work.to_complex()))) {
          throw Error(ErrorCode::ConsistencyGate,
                      "collapse through " + Simplex(face).to_string() + " changed homology");
        }
      }
    }
  }
  return work.to_complex();
}

nlohmann::json CollapseReport::to_json() const {
  return {
      {"k", k},
      {"f_before", f_before},
      {"removed_per_dim", removed_per_dim},
      {"f_stripped", f_stripped},
      {"f_core", f_core},
      {"final_dim", final_dim},
      {"betti_before", betti_before.values},
      {"betti_stripped", betti_stripped.values},
      {"betti_core", betti_core.values},
      {"vanishes_above_k_q", vanishes_above_k_q},
      {"vanishes_above_k_gf2", vanishes_above_k_gf2},
      {"success", success},
  };
}

CollapseReport statement_a_probe(const SimplicialComplex& complex, int k) {
  if (k < 0) throw Error(ErrorCode::IndexOutOfRange, "cutoff dimension must be >= 0");
  CollapseReport report;
  report.k = k;
  report.f_before = f_vector(complex);
  report.betti_before = betti_numbers(complex);

  StripResult stripped = strip_bounding(complex, k);
  report.removed_per_dim = stripped.removed_per_dim;
  report.f_stripped = f_vector(stripped.complex);
  report.betti_stripped = betti_numbers(stripped.complex);
  const BettiVector stripped_gf2 = betti_numbers(stripped.complex, Coefficients::modulo(2));

  const SimplicialComplex core = greedy_collapse(stripped.complex);
  report.f_core = f_vector(core);
  report.final_dim = core.dimension();
  report.betti_core = betti_numbers(core);
  if (!same_betti(report.betti_core, report.betti_stripped)) {
    throw Error(ErrorCode::ConsistencyGate, "greedy collapse changed rational homology");
  }

  report.vanishes_above_k_q = vanishes_above(report.betti_stripped, k);
  report.vanishes_above_k_gf2 = vanishes_above(stripped_gf2, k);
  report.success = report.final_dim <= k && report.vanishes_above_k_q && report.vanishes_above_k_gf2;
  return report;
}

}  // namespace rsc
