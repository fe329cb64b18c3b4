#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diglab/scc.hpp"

namespace diglab {

/// Exact reachability over the condensation, stored as packed bit arrays.
/// Memory is quadratic in the number of condensation nodes, so construction
/// is refused beyond valid_size_limit; callers fall back to capped BFS.
class ReachClosure {
 public:
  static constexpr std::size_t kDefaultLimit = 20000;

  ReachClosure(const SccDecomposition& scc,
               std::size_t size_limit = kDefaultLimit)
      : scc_(&scc), num_nodes_(scc.num_components()) {
    if (num_nodes_ > size_limit) {
      throw std::runtime_error(
          "reach_closure: condensation has " + std::to_string(num_nodes_) +
          " nodes, above the limit of " + std::to_string(size_limit) +
          "; use capped estimates instead");
    }
    words_ = (num_nodes_ + 63) / 64;
    desc_.assign(num_nodes_ * words_, 0);
    anc_.assign(num_nodes_ * words_, 0);

    // Component ids are already topological; sweep in reverse for
    // descendants, forward for ancestors.
    for (std::size_t c = num_nodes_; c-- > 0;) {
      set_bit(desc_, c, c);
      for (std::uint32_t d : scc.condensation[c]) or_row(desc_, c, d);
    }
    for (std::size_t c = 0; c < num_nodes_; ++c) {
      set_bit(anc_, c, c);
      for (std::uint32_t d : scc.condensation[c]) or_row_into(anc_, d, c);
    }

    desc_mass_.assign(num_nodes_, 0);
    anc_mass_.assign(num_nodes_, 0);
    for (std::size_t c = 0; c < num_nodes_; ++c) {
      for (std::size_t d = 0; d < num_nodes_; ++d) {
        if (test(desc_, c, d)) desc_mass_[c] += scc.comp_sizes[d];
        if (test(anc_, c, d)) anc_mass_[c] += scc.comp_sizes[d];
      }
    }
  }

  std::size_t num_nodes() const { return num_nodes_; }

  bool reaches(std::uint32_t from_comp, std::uint32_t to_comp) const {
    return test(desc_, from_comp, to_comp);
  }

  /// Exact |C+| of any vertex in component c, in vertices.
  std::size_t out_component_size(std::uint32_t c) const {
    return desc_mass_[c];
  }
  std::size_t in_component_size(std::uint32_t c) const { return anc_mass_[c]; }

  std::size_t forward_size(Vertex v) const {
    return desc_mass_[scc_->comp_of[v]];
  }
  std::size_t backward_size(Vertex v) const {
    return anc_mass_[scc_->comp_of[v]];
  }

 private:
  void set_bit(std::vector<std::uint64_t>& rows, std::size_t r,
               std::size_t c) {
    rows[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  static bool test_row(const std::uint64_t* row, std::size_t c) {
    return (row[c / 64] >> (c % 64)) & 1;
  }
  bool test(const std::vector<std::uint64_t>& rows, std::size_t r,
            std::size_t c) const {
    return test_row(rows.data() + r * words_, c);
  }
  // rows[dst] |= rows[src]
  void or_row(std::vector<std::uint64_t>& rows, std::size_t dst,
              std::size_t src) {
    std::uint64_t* d = rows.data() + dst * words_;
    const std::uint64_t* s = rows.data() + src * words_;
    for (std::size_t w = 0; w < words_; ++w) d[w] |= s[w];
  }
  void or_row_into(std::vector<std::uint64_t>& rows, std::size_t dst,
                   std::size_t src) {
    or_row(rows, dst, src);
  }

  const SccDecomposition* scc_;
  std::size_t num_nodes_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> desc_, anc_;
  std::vector<std::size_t> desc_mass_, anc_mass_;
};

inline ReachClosure reach_closure(const SccDecomposition& scc,
                                  std::size_t size_limit =
                                      ReachClosure::kDefaultLimit) {
  return ReachClosure(scc, size_limit);
}

}  // namespace diglab
