#pragma once

#include <algorithm>
#include <iterator>

namespace rsc {

template <class Fn>
void for_each_supported_simplex(const FaceTable& lower,
                                const std::vector<std::vector<Vertex>>& adjacency,
                                Fn&& fn) {
  const int d = lower.dim() + 1;
  std::vector<Vertex> candidate(static_cast<std::size_t>(d) + 1);

  if (d == 1) {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      for (std::size_t j = i + 1; j < lower.size(); ++j) {
        candidate[0] = lower[i][0];
        candidate[1] = lower[j][0];
        fn(std::span<const Vertex>(candidate));
      }
    }
    return;
  }

  std::vector<Vertex> common;
  std::vector<Vertex> scratch;
  std::vector<Vertex> facet(static_cast<std::size_t>(d));
  for (std::size_t t = 0; t < lower.size(); ++t) {
    const auto tau = lower[t];
    const auto& first = adjacency[tau[0]];
    common.assign(std::upper_bound(first.begin(), first.end(), tau.back()), first.end());
    for (std::size_t k = 1; k < tau.size() && !common.empty(); ++k) {
      const auto& nbrs = adjacency[tau[k]];
      scratch.clear();
      std::set_intersection(common.begin(), common.end(), nbrs.begin(), nbrs.end(),
                            std::back_inserter(scratch));
      common.swap(scratch);
    }
    std::copy(tau.begin(), tau.end(), candidate.begin());
    for (Vertex w : common) {
      candidate.back() = w;
      bool supported = true;
      // Facets dropping one vertex of tau; for d == 2 these are edges already
      // guaranteed by the adjacency lists.
      if (d >= 3) {
        for (std::size_t skip = 0; skip < tau.size() && supported; ++skip) {
          std::size_t pos = 0;
          for (std::size_t k = 0; k < candidate.size(); ++k) {
            if (k != skip) facet[pos++] = candidate[k];
          }
          supported = lower.contains(facet);
        }
      }
      if (supported) fn(std::span<const Vertex>(candidate));
    }
  }
}

}  // namespace rsc
