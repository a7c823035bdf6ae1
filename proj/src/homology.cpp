#include "rsc/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace rsc {

std::size_t SparseMatrix::nnz() const noexcept {
  std::size_t total = 0;
  for (const auto& c : columns) total += c.size();
  return total;
}

std::string SparseMatrix::to_triplets() const {
  std::ostringstream out;
  out << rows << ' ' << cols << ' ' << nnz() << '\n';
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (const auto& [row, value] : columns[j]) out << row << ' ' << j << ' ' << value << '\n';
  }
  return out.str();
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw Error(ErrorCode::InvalidConfig, "matrix shapes do not compose");
  SparseMatrix out{a.rows, b.cols, std::vector<SparseColumn>(b.cols)};
  for (std::size_t j = 0; j < b.cols; ++j) {
    std::map<std::uint32_t, std::int64_t> acc;
    for (const auto& [k, bv] : b.columns[j]) {
      for (const auto& [i, av] : a.columns[k]) acc[i] += av * bv;
    }
    for (const auto& [i, v] : acc) {
      if (v != 0) out.columns[j].emplace_back(i, v);
    }
  }
  return out;
}

SparseColumn boundary_column(const SimplicialComplex& complex, std::span<const Vertex> face) {
  const int d = static_cast<int>(face.size()) - 1;
  SparseColumn column;
  if (d < 1) return column;
  const FaceTable& lower = complex.faces(d - 1);
  std::vector<Vertex> facet(face.size() - 1);
  for (std::size_t skip = 0; skip < face.size(); ++skip) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k < face.size(); ++k) {
      if (k != skip) facet[pos++] = face[k];
    }
    const auto row = lower.find(facet);
    if (!row) throw Error(ErrorCode::NotAFace, Simplex(facet).to_string() + " missing from complex");
    column.emplace_back(static_cast<std::uint32_t>(*row), skip % 2 == 0 ? 1 : -1);
  }
  std::sort(column.begin(), column.end());
  return column;
}

BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int d) {
  if (d < 1 || d > complex.dimension()) {
    throw Error(ErrorCode::DimensionOutOfRange,
                "boundary dimension " + std::to_string(d) + " outside 1.." +
                    std::to_string(complex.dimension()));
  }
  const FaceTable& level = complex.faces(d);
  BoundaryMatrix out;
  out.dim = d;
  out.matrix.rows = complex.num_faces(d - 1);
  out.matrix.cols = level.size();
  out.matrix.columns.reserve(level.size());
  for (std::size_t j = 0; j < level.size(); ++j) {
    out.matrix.columns.push_back(boundary_column(complex, level[j]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic policies for elimination.

namespace {

struct Overflow {};

struct ModP {
  using Value = std::uint64_t;
  std::uint64_t p;

  Value from(std::int64_t v) const {
    const auto m = static_cast<std::int64_t>(p);
    return static_cast<Value>(((v % m) + m) % m);
  }
  bool zero(Value v) const { return v == 0; }
  Value add(Value a, Value b) const { return (a + b) % p; }
  Value mul(Value a, Value b) const { return (a * b) % p; }
  Value neg(Value a) const { return a == 0 ? 0 : p - a; }
  Value inverse(Value a) const {
    Value result = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
};

struct CheckedInt {
  using Value = std::int64_t;

  Value from(std::int64_t v) const { return v; }
  bool zero(Value v) const { return v == 0; }
  Value add(Value a, Value b) const {
    Value out;
    if (__builtin_add_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  Value sub(Value a, Value b) const {
    Value out;
    if (__builtin_sub_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  Value mul(Value a, Value b) const {
    Value out;
    if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  Value neg(Value a) const { return sub(0, a); }
  Value gcd(Value a, Value b) const { return std::gcd(a, b); }
  Value div(Value a, Value b) const { return a / b; }
  Value abs(Value a) const { return a < 0 ? neg(a) : a; }
  Value rem(Value a, Value b) const { return a % b; }
  bool less_abs(Value a, Value b) const { return abs(a) < abs(b); }
  bool is_unit(Value a) const { return a == 1 || a == -1; }
  mpz_class to_mpz(Value a) const { return mpz_class(static_cast<long>(a)); }
};

struct BigInt {
  using Value = mpz_class;

  Value from(std::int64_t v) const { return mpz_class(static_cast<long>(v)); }
  bool zero(const Value& v) const { return sgn(v) == 0; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value gcd(const Value& a, const Value& b) const {
    mpz_class out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
  }
  Value div(const Value& a, const Value& b) const {
    mpz_class out;
    mpz_tdiv_q(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
  }
  Value abs(const Value& a) const { return ::abs(a); }
  Value rem(const Value& a, const Value& b) const {
    mpz_class out;
    mpz_tdiv_r(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
  }
  bool less_abs(const Value& a, const Value& b) const { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
  bool is_unit(const Value& a) const { return a == 1 || a == -1; }
  mpz_class to_mpz(const Value& a) const { return a; }
};

template <class Ring>
using RingColumn = std::vector<std::pair<std::uint32_t, typename Ring::Value>>;

template <class Ring>
RingColumn<Ring> convert(const Ring& ring, const SparseColumn& column) {
  RingColumn<Ring> out;
  out.reserve(column.size());
  for (const auto& [row, value] : column) {
    auto v = ring.from(value);
    if (!ring.zero(v)) out.emplace_back(row, std::move(v));
  }
  return out;
}

// a*x + b*y over sorted sparse columns, dropping zeros.
template <class Ring>
RingColumn<Ring> combine(const Ring& ring, const typename Ring::Value& a, const RingColumn<Ring>& x,
                         const typename Ring::Value& b, const RingColumn<Ring>& y) {
  RingColumn<Ring> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, ring.mul(a, x[i].second));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, ring.mul(b, y[j].second));
      ++j;
    } else {
      auto v = ring.add(ring.mul(a, x[i].second), ring.mul(b, y[j].second));
      if (!ring.zero(v)) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Column reduction keyed by the lowest nonzero row. Over the integers every
/// step is c <- (p_low/g) c - (c_low/g) p followed by division by the content
/// of c, so entries stay integral and small.
template <class Ring>
class ColumnReducer {
 public:
  using Column = RingColumn<Ring>;

  ColumnReducer(Ring ring, std::size_t rows) : ring_(std::move(ring)), pivots_(rows) {}

  Column reduce(Column c) const {
    while (!c.empty()) {
      const Column& pivot = pivots_[c.back().first];
      if (pivot.empty()) break;
      c = eliminate(c, pivot);
    }
    return c;
  }

  bool add(Column c) {
    c = reduce(std::move(c));
    if (c.empty()) return false;
    const auto low = c.back().first;
    pivots_[low] = std::move(c);
    ++rank_;
    return true;
  }

  std::size_t rank() const noexcept { return rank_; }

 private:
  Column eliminate(const Column& c, const Column& pivot) const {
    if constexpr (std::is_same_v<Ring, ModP>) {
      const auto factor = ring_.mul(c.back().second, ring_.inverse(pivot.back().second));
      return combine(ring_, typename Ring::Value(1), c, ring_.neg(factor), pivot);
    } else {
      const auto& cv = c.back().second;
      const auto& pv = pivot.back().second;
      const auto g = ring_.gcd(cv, pv);
      Column out = combine(ring_, ring_.div(pv, g), c, ring_.neg(ring_.div(cv, g)), pivot);
      typename Ring::Value content = 0;
      for (const auto& entry : out) {
        content = ring_.gcd(content, entry.second);
        if (ring_.is_unit(content)) break;
      }
      if (!out.empty() && !ring_.is_unit(content)) {
        for (auto& entry : out) entry.second = ring_.div(entry.second, content);
      }
      return out;
    }
  }

  Ring ring_;
  std::vector<Column> pivots_;
  std::size_t rank_ = 0;
};

template <class Ring>
std::size_t rank_with(const Ring& ring, const SparseMatrix& matrix) {
  ColumnReducer<Ring> reducer(ring, matrix.rows);
  for (const auto& column : matrix.columns) reducer.add(convert(ring, column));
  return reducer.rank();
}

template <class Ring>
bool contains_with(const Ring& ring, const SparseMatrix& matrix, const SparseColumn& v) {
  ColumnReducer<Ring> reducer(ring, matrix.rows);
  for (const auto& column : matrix.columns) reducer.add(convert(ring, column));
  return reducer.reduce(convert(ring, v)).empty();
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

Coefficients Coefficients::modulo(std::uint64_t p) {
  if (!is_prime(p) || p >= (std::uint64_t{1} << 31)) {
    throw Error(ErrorCode::NonPrimeModulus, std::to_string(p) + " is not a supported prime");
  }
  return Coefficients(static_cast<std::uint32_t>(p));
}

std::string Coefficients::to_string() const {
  return is_rational() ? "Q" : "GF(" + std::to_string(modulus_) + ")";
}

std::size_t matrix_rank(const SparseMatrix& matrix, Coefficients field) {
  if (!field.is_rational()) return rank_with(ModP{field.modulus()}, matrix);
  try {
    return rank_with(CheckedInt{}, matrix);
  } catch (const Overflow&) {
    return rank_with(BigInt{}, matrix);
  }
}

bool in_column_space(const SparseMatrix& matrix, const SparseColumn& v, Coefficients field) {
  if (!field.is_rational()) return contains_with(ModP{field.modulus()}, matrix, v);
  try {
    return contains_with(CheckedInt{}, matrix, v);
  } catch (const Overflow&) {
    return contains_with(BigInt{}, matrix, v);
  }
}

std::int64_t BettiVector::at(int j) const noexcept {
  if (j < 0 || j >= static_cast<int>(values.size())) return 0;
  return values[static_cast<std::size_t>(j)];
}

std::string BettiVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(values[i]);
  }
  return out;
}

BettiVector betti_numbers(const SimplicialComplex& complex, Coefficients field) {
  BettiVector out;
  out.field = field;
  const int top = complex.dimension();
  if (top < 0) return out;
  // ranks[d] = rank of the boundary map out of dimension d; ranks[0] = 0.
  std::vector<std::int64_t> ranks(static_cast<std::size_t>(top) + 2, 0);
  for (int d = 1; d <= top; ++d) {
    ranks[static_cast<std::size_t>(d)] =
        static_cast<std::int64_t>(matrix_rank(boundary_matrix(complex, d).matrix, field));
  }
  for (int d = 0; d <= top; ++d) {
    out.values.push_back(static_cast<std::int64_t>(complex.num_faces(d)) -
                         ranks[static_cast<std::size_t>(d)] - ranks[static_cast<std::size_t>(d) + 1]);
  }
  return out;
}

BettiVector reduced_betti(const SimplicialComplex& complex, Coefficients field) {
  if (complex.empty()) throw Error(ErrorCode::EmptyComplex, "reduced homology of the empty complex");
  BettiVector out = betti_numbers(complex, field);
  out.values.front() -= 1;
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form.

namespace {

template <class Ring>
class SmithReducer {
 public:
  using Value = typename Ring::Value;

  SmithReducer(const SparseMatrix& matrix, const SnfBudget& budget) : budget_(budget) {
    rows_.resize(matrix.rows);
    col_rows_.resize(matrix.cols);
    for (std::size_t j = 0; j < matrix.cols; ++j) {
      for (const auto& [row, value] : matrix.columns[j]) {
        if (value == 0) continue;
        rows_[row][static_cast<std::uint32_t>(j)] = ring_.from(value);
        col_rows_[j].insert(row);
      }
    }
  }

  std::vector<mpz_class> run() {
    std::vector<mpz_class> factors;
    const std::size_t units = eliminate_unit_pivots();
    factors.assign(units, mpz_class(1));
    for (auto& v : dense_diagonal()) factors.push_back(ring_.to_mpz(ring_.abs(v)));
    return factors;
  }

 private:
  // Eliminates +-1 pivots with sparse row operations; each contributes an
  // invariant factor 1 and drops one row and one column.
  std::size_t eliminate_unit_pivots() {
    std::size_t units = 0;
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t c = 0; c < col_rows_.size(); ++c) {
        if (col_rows_[c].empty()) continue;
        std::uint32_t best = 0;
        std::size_t best_size = SIZE_MAX;
        for (std::uint32_t r : col_rows_[c]) {
          const auto& value = rows_[r].at(static_cast<std::uint32_t>(c));
          if (ring_.is_unit(value) && rows_[r].size() < best_size) {
            best = r;
            best_size = rows_[r].size();
          }
        }
        if (best_size == SIZE_MAX) continue;
        pivot(best, static_cast<std::uint32_t>(c));
        ++units;
        progress = true;
      }
    }
    return units;
  }

  void pivot(std::uint32_t pr, std::uint32_t pc) {
    const Value unit = rows_[pr].at(pc);
    const std::vector<std::uint32_t> others(col_rows_[pc].begin(), col_rows_[pc].end());
    for (std::uint32_t k : others) {
      if (k == pr) continue;
      const Value factor = ring_.mul(rows_[k].at(pc), unit);
      auto& target = rows_[k];
      for (const auto& [j, v] : rows_[pr]) {
        auto it = target.find(j);
        Value updated = ring_.neg(ring_.mul(factor, v));
        if (it != target.end()) updated = ring_.add(it->second, updated);
        if (ring_.zero(updated)) {
          if (it != target.end()) target.erase(it);
          col_rows_[j].erase(k);
        } else {
          if (it != target.end()) {
            it->second = std::move(updated);
          } else {
            target.emplace(j, std::move(updated));
            col_rows_[j].insert(k);
          }
        }
      }
    }
    for (const auto& entry : rows_[pr]) col_rows_[entry.first].erase(pr);
    rows_[pr].clear();
  }

  std::vector<Value> dense_diagonal() {
    std::vector<std::uint32_t> live_rows;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!rows_[r].empty()) live_rows.push_back(static_cast<std::uint32_t>(r));
    }
    std::vector<std::uint32_t> live_cols;
    std::vector<std::size_t> col_index(col_rows_.size(), SIZE_MAX);
    for (std::size_t c = 0; c < col_rows_.size(); ++c) {
      if (!col_rows_[c].empty()) {
        col_index[c] = live_cols.size();
        live_cols.push_back(static_cast<std::uint32_t>(c));
      }
    }
    const std::size_t m = live_rows.size(), n = live_cols.size();
    if (m == 0 || n == 0) return {};
    if (m * n > budget_.max_dense_entries) {
      throw Error(ErrorCode::BudgetExceeded, "Smith normal form residual " + std::to_string(m) + "x" +
                                                 std::to_string(n) + " exceeds budget");
    }
    std::vector<Value> a(m * n, Value(0));
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [c, v] : rows_[live_rows[i]]) a[i * n + col_index[c]] = v;
    }
    auto at = [&](std::size_t i, std::size_t j) -> Value& { return a[i * n + j]; };
    auto swap_rows = [&](std::size_t x, std::size_t y) {
      if (x == y) return;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(x, j), at(y, j));
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
      if (x == y) return;
      for (std::size_t i = 0; i < m; ++i) std::swap(at(i, x), at(i, y));
    };

    std::vector<Value> diagonal;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
      // Smallest nonzero magnitude in the trailing block becomes the pivot.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (!ring_.zero(at(i, j)) && (pi == m || ring_.less_abs(at(i, j), at(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == m) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      while (true) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (ring_.zero(at(i, t))) continue;
          const Value q = ring_.div(at(i, t), at(t, t));
          for (std::size_t j = t; j < n; ++j) {
            if (!ring_.zero(at(t, j))) at(i, j) = ring_.sub(at(i, j), ring_.mul(q, at(t, j)));
          }
          if (!ring_.zero(at(i, t))) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (ring_.zero(at(t, j))) continue;
          const Value q = ring_.div(at(t, j), at(t, t));
          for (std::size_t i = t; i < m; ++i) {
            if (!ring_.zero(at(i, t))) at(i, j) = ring_.sub(at(i, j), ring_.mul(q, at(i, t)));
          }
          if (!ring_.zero(at(t, j))) clean = false;
        }
        if (!clean) {
          std::size_t bi = t, bj = t;
          for (std::size_t i = t + 1; i < m; ++i) {
            if (!ring_.zero(at(i, t)) && ring_.less_abs(at(i, t), at(bi, bj))) {
              bi = i;
              bj = t;
            }
          }
          for (std::size_t j = t + 1; j < n; ++j) {
            if (!ring_.zero(at(t, j)) && ring_.less_abs(at(t, j), at(bi, bj))) {
              bi = t;
              bj = j;
            }
          }
          swap_rows(t, bi);
          swap_cols(t, bj);
          continue;
        }
        // Pivot must divide the whole trailing block.
        std::size_t bad = m;
        for (std::size_t i = t + 1; i < m && bad == m; ++i) {
          for (std::size_t j = t + 1; j < n; ++j) {
            if (!ring_.zero(ring_.rem(at(i, j), at(t, t)))) {
              bad = i;
              break;
            }
          }
        }
        if (bad == m) break;
        for (std::size_t j = t; j < n; ++j) at(t, j) = ring_.add(at(t, j), at(bad, j));
      }
      diagonal.push_back(at(t, t));
    }
    return diagonal;
  }

  Ring ring_;
  SnfBudget budget_;
  std::vector<std::map<std::uint32_t, Value>> rows_;
  std::vector<std::set<std::uint32_t>> col_rows_;
};

}  // namespace

std::vector<mpz_class> invariant_factors(const SparseMatrix& matrix, const SnfBudget& budget) {
  try {
    return SmithReducer<CheckedInt>(matrix, budget).run();
  } catch (const Overflow&) {
    return SmithReducer<BigInt>(matrix, budget).run();
  }
}

std::string HomologyGroup::to_string() const {
  if (trivial()) return "0";
  std::string out;
  if (free_rank > 0) out = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
  for (const auto& t : torsion) {
    if (!out.empty()) out += " + ";
    out += "Z/" + t.get_str();
  }
  return out;
}

IntegralHomology integral_homology(const SimplicialComplex& complex, const SnfBudget& budget) {
  IntegralHomology out;
  const int top = complex.dimension();
  if (top < 0) return out;
  std::vector<std::vector<mpz_class>> factors(static_cast<std::size_t>(top) + 2);
  for (int d = 1; d <= top; ++d) {
    factors[static_cast<std::size_t>(d)] = invariant_factors(boundary_matrix(complex, d).matrix, budget);
  }
  for (int d = 0; d <= top; ++d) {
    HomologyGroup group;
    const auto& incoming = factors[static_cast<std::size_t>(d) + 1];
    group.free_rank = static_cast<std::int64_t>(complex.num_faces(d)) -
                      static_cast<std::int64_t>(factors[static_cast<std::size_t>(d)].size()) -
                      static_cast<std::int64_t>(incoming.size());
    for (const auto& f : incoming) {
      if (f > 1) group.torsion.push_back(f);
    }
    out.groups.push_back(std::move(group));
  }
  return out;
}

}  // namespace rsc
