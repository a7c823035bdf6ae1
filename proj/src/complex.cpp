#include "rsc/complex.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace rsc {

namespace {

void check_increasing(std::span<const Vertex> vs) {
  if (vs.empty()) throw Error(ErrorCode::MalformedSimplex, "simplex has no vertices");
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (vs[i - 1] >= vs[i]) {
      throw Error(ErrorCode::MalformedSimplex, "vertices must be strictly increasing");
    }
  }
}

void check_ambient(int n, int r) {
  if (n < 0) throw Error(ErrorCode::InvalidConfig, "n must be nonnegative");
  if (r < 0) throw Error(ErrorCode::InvalidConfig, "r must be nonnegative");
}

void check_face_fits(int n, int r, std::span<const Vertex> face) {
  if (static_cast<int>(face.size()) - 1 > r) {
    throw Error(ErrorCode::DimensionExceedsR,
                Simplex(face).to_string() + " has dimension above r=" + std::to_string(r));
  }
  if (face.front() < 1 || face.back() > static_cast<Vertex>(n)) {
    throw Error(ErrorCode::VertexOutOfRange,
                Simplex(face).to_string() + " not within 1.." + std::to_string(n));
  }
}

}  // namespace

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  check_increasing(vertices_);
}

Simplex::Simplex(std::initializer_list<Vertex> vertices) : vertices_(vertices) {
  check_increasing(vertices_);
}

Simplex::Simplex(std::span<const Vertex> vertices)
    : vertices_(vertices.begin(), vertices.end()) {
  check_increasing(vertices_);
}

std::string Simplex::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(vertices_[i]);
  }
  return out + "}";
}

FaceTable FaceTable::from_unsorted(int dim, std::vector<Vertex> flat) {
  FaceTable table(dim);
  const std::size_t stride = table.stride();
  const std::size_t count = flat.size() / stride;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return std::span<const Vertex>(flat.data() + i * stride, stride); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto x = row(a), y = row(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  table.data_.reserve(flat.size());
  for (std::size_t k = 0; k < count; ++k) {
    auto face = row(order[k]);
    if (k > 0 && std::ranges::equal(face, row(order[k - 1]))) continue;
    table.data_.insert(table.data_.end(), face.begin(), face.end());
  }
  return table;
}

std::optional<std::size_t> FaceTable::find(std::span<const Vertex> face) const {
  if (face.size() != stride()) return std::nullopt;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto entry = (*this)[mid];
    if (std::lexicographical_compare(entry.begin(), entry.end(), face.begin(), face.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::ranges::equal((*this)[lo], face)) return lo;
  return std::nullopt;
}

FaceTable FaceTable::without(std::size_t index) const {
  FaceTable out(dim_);
  out.data_ = data_;
  auto first = out.data_.begin() + static_cast<std::ptrdiff_t>(index * stride());
  out.data_.erase(first, first + static_cast<std::ptrdiff_t>(stride()));
  return out;
}

SimplicialComplex::SimplicialComplex(int n, int r) : n_(n), r_(r) {
  check_ambient(n, r);
  levels_.reserve(static_cast<std::size_t>(r) + 1);
  for (int d = 0; d <= r; ++d) levels_.emplace_back(d);
}

SimplicialComplex SimplicialComplex::from_levels(int n, int r, std::vector<FaceTable> levels) {
  check_ambient(n, r);
  if (levels.size() != static_cast<std::size_t>(r) + 1) {
    throw Error(ErrorCode::DimensionExceedsR, "expected r+1 face tables");
  }
  std::vector<Vertex> facet;
  for (int d = 0; d <= r; ++d) {
    const FaceTable& level = levels[static_cast<std::size_t>(d)];
    if (level.dim() != d) throw Error(ErrorCode::InvalidConfig, "face table dimension mismatch");
    for (std::size_t i = 0; i < level.size(); ++i) {
      auto face = level[i];
      check_increasing(face);
      check_face_fits(n, r, face);
      if (d == 0) continue;
      const FaceTable& lower = levels[static_cast<std::size_t>(d) - 1];
      for (std::size_t skip = 0; skip < face.size(); ++skip) {
        facet.clear();
        for (std::size_t k = 0; k < face.size(); ++k) {
          if (k != skip) facet.push_back(face[k]);
        }
        if (!lower.contains(facet)) {
          throw Error(ErrorCode::InvalidConfig,
                      "face table is not downward closed at " + Simplex(face).to_string());
        }
      }
    }
  }
  return SimplicialComplex(n, r, std::move(levels));
}

int SimplicialComplex::dimension() const noexcept {
  for (int d = r_; d >= 0; --d) {
    if (!levels_[static_cast<std::size_t>(d)].empty()) return d;
  }
  return -1;
}

const FaceTable& SimplicialComplex::faces(int d) const {
  if (d < 0 || d > r_) {
    throw Error(ErrorCode::DimensionOutOfRange, "dimension " + std::to_string(d) + " outside 0..r");
  }
  return levels_[static_cast<std::size_t>(d)];
}

std::size_t SimplicialComplex::num_faces(int d) const {
  if (d < 0 || d > r_) return 0;
  return levels_[static_cast<std::size_t>(d)].size();
}

std::size_t SimplicialComplex::total_faces() const noexcept {
  std::size_t total = 0;
  for (const auto& level : levels_) total += level.size();
  return total;
}

bool SimplicialComplex::contains(std::span<const Vertex> face) const {
  if (face.empty() || static_cast<int>(face.size()) - 1 > r_) return false;
  return levels_[face.size() - 1].contains(face);
}

std::vector<Simplex> SimplicialComplex::simplices(int d) const {
  std::vector<Simplex> out;
  if (d < 0 || d > r_) return out;
  const FaceTable& level = levels_[static_cast<std::size_t>(d)];
  out.reserve(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) out.emplace_back(level[i]);
  return out;
}

std::vector<Simplex> SimplicialComplex::maximal_faces() const {
  std::vector<Simplex> out;
  std::vector<Vertex> facet;
  for (int d = 0; d <= r_; ++d) {
    const FaceTable& level = levels_[static_cast<std::size_t>(d)];
    std::vector<char> covered(level.size(), 0);
    if (d < r_) {
      const FaceTable& upper = levels_[static_cast<std::size_t>(d) + 1];
      for (std::size_t i = 0; i < upper.size(); ++i) {
        auto face = upper[i];
        for (std::size_t skip = 0; skip < face.size(); ++skip) {
          facet.clear();
          for (std::size_t k = 0; k < face.size(); ++k) {
            if (k != skip) facet.push_back(face[k]);
          }
          if (auto idx = level.find(facet)) covered[*idx] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (!covered[i]) out.emplace_back(level[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SimplicialComplex::is_maximal(std::span<const Vertex> face) const {
  if (!contains(face)) return false;
  if (static_cast<int>(face.size()) - 1 == r_) return true;
  const FaceTable& upper = levels_[face.size()];
  std::vector<Vertex> coface(face.size() + 1);
  for (Vertex w = 1; w <= static_cast<Vertex>(n_); ++w) {
    if (std::binary_search(face.begin(), face.end(), w)) continue;
    std::merge(face.begin(), face.end(), &w, &w + 1, coface.begin());
    if (upper.contains(coface)) return false;
  }
  return true;
}

SimplicialComplex SimplicialComplex::without_maximal(const Simplex& s) const {
  if (!contains(s)) throw Error(ErrorCode::NotAFace, s.to_string() + " is not a face");
  if (!is_maximal(s.vertices())) {
    throw Error(ErrorCode::NotDegreeZero, s.to_string() + " has a strict coface");
  }
  auto levels = levels_;
  auto& level = levels[static_cast<std::size_t>(s.dim())];
  level = level.without(*level.find(s.vertices()));
  return SimplicialComplex(n_, r_, std::move(levels));
}

SimplicialComplex build_complex(int n, int r, std::span<const Simplex> generators) {
  check_ambient(n, r);
  std::vector<std::vector<Vertex>> flat(static_cast<std::size_t>(r) + 1);
  std::vector<Vertex> subset;
  for (const Simplex& g : generators) {
    check_face_fits(n, r, g.vertices());
    const auto vs = g.vertices();
    const std::uint64_t masks = std::uint64_t{1} << vs.size();
    for (std::uint64_t mask = 1; mask < masks; ++mask) {
      subset.clear();
      for (std::size_t k = 0; k < vs.size(); ++k) {
        if (mask & (std::uint64_t{1} << k)) subset.push_back(vs[k]);
      }
      auto& bucket = flat[subset.size() - 1];
      bucket.insert(bucket.end(), subset.begin(), subset.end());
    }
  }
  std::vector<FaceTable> levels;
  levels.reserve(flat.size());
  for (int d = 0; d <= r; ++d) {
    levels.push_back(FaceTable::from_unsorted(d, std::move(flat[static_cast<std::size_t>(d)])));
  }
  return SimplicialComplex::from_levels(n, r, std::move(levels));
}

SimplicialComplex build_complex(int n, int r, std::initializer_list<Simplex> generators) {
  return build_complex(n, r, std::span<const Simplex>(generators.begin(), generators.size()));
}

FVector f_vector(const SimplicialComplex& complex) {
  FVector f(static_cast<std::size_t>(complex.r()) + 1);
  for (int d = 0; d <= complex.r(); ++d) {
    f[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(complex.num_faces(d));
  }
  return f;
}

std::vector<std::vector<Vertex>> adjacency_lists(int n, const FaceTable& edges) {
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto e = edges[i];
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

ExternalVector external_face_counts(const SimplicialComplex& complex) {
  ExternalVector e(static_cast<std::size_t>(complex.r()) + 1, 0);
  e[0] = complex.n() - static_cast<std::int64_t>(complex.num_faces(0));
  if (complex.r() == 0) return e;
  const auto adjacency = adjacency_lists(complex.n(), complex.faces(1));
  for (int i = 1; i <= complex.r(); ++i) {
    const FaceTable& level = complex.faces(i);
    std::int64_t count = 0;
    for_each_supported_simplex(complex.faces(i - 1), adjacency, [&](std::span<const Vertex> s) {
      if (!level.contains(s)) ++count;
    });
    e[static_cast<std::size_t>(i)] = count;
  }
  return e;
}

std::int64_t euler_characteristic(const SimplicialComplex& complex) {
  std::int64_t chi = 0;
  for (int d = 0; d <= complex.r(); ++d) {
    const auto f = static_cast<std::int64_t>(complex.num_faces(d));
    chi += (d % 2 == 0) ? f : -f;
  }
  return chi;
}

std::string encode_complex(const SimplicialComplex& complex) {
  std::string out = "n=" + std::to_string(complex.n()) + " r=" + std::to_string(complex.r()) + "\n";
  for (const Simplex& s : complex.maximal_faces()) {
    const auto vs = s.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(vs[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
bool parse_int(std::string_view token, Int& value) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

SimplicialComplex decode_complex(std::string_view text) {
  std::optional<std::pair<int, int>> header;
  std::vector<Simplex> generators;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> tokens;
    while (!line.empty()) {
      const auto sp = line.find_first_of(" \t");
      tokens.push_back(line.substr(0, sp));
      line = (sp == std::string_view::npos) ? std::string_view{} : trim(line.substr(sp));
    }

    if (!header) {
      int n = -1, r = -1;
      if (tokens.size() != 2 || !tokens[0].starts_with("n=") || !tokens[1].starts_with("r=") ||
          !parse_int(tokens[0].substr(2), n) || !parse_int(tokens[1].substr(2), r) || n < 0 ||
          r < 0) {
        parse_fail(line_no, "expected header 'n=<n> r=<r>'");
      }
      header.emplace(n, r);
      continue;
    }

    std::vector<Vertex> vs;
    for (auto token : tokens) {
      Vertex v = 0;
      if (!parse_int(token, v)) parse_fail(line_no, "invalid vertex id '" + std::string(token) + "'");
      vs.push_back(v);
    }
    for (std::size_t i = 1; i < vs.size(); ++i) {
      if (vs[i - 1] >= vs[i]) parse_fail(line_no, "vertices must be strictly increasing");
    }
    const auto [n, r] = *header;
    if (static_cast<int>(vs.size()) - 1 > r || vs.front() < 1 || vs.back() > static_cast<Vertex>(n)) {
      throw Error(ErrorCode::HeaderMismatch,
                  "line " + std::to_string(line_no) + ": face violates n=" + std::to_string(n) +
                      " r=" + std::to_string(r));
    }
    generators.emplace_back(std::move(vs));
  }
  if (!header) parse_fail(line_no, "missing header");
  return build_complex(header->first, header->second, generators);
}

SimplicialComplex read_complex_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return decode_complex(buffer.str());
}

void write_complex_file(const std::string& path, const SimplicialComplex& complex) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
  out << encode_complex(complex);
}

}  // namespace rsc
