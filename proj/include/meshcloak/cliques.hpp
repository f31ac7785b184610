#ifndef MESHCLOAK_CLIQUES_HPP
#define MESHCLOAK_CLIQUES_HPP

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "meshcloak/constraint_graph.hpp"
#include "meshcloak/query.hpp"

namespace meshcloak {

inline constexpr std::size_t kDefaultCliqueLimit = 1'000'000;

// A family of cliques with a per-node membership index. Member lists are
// stored in ascending id order; slots are recycled so membership indices
// stay stable across removals.
class CliqueSet {
 public:
  using Clique = std::vector<QueryId>;

  bool empty() const { return count_ == 0; }
  std::size_t size() const { return count_; }
  bool contains_node(QueryId v) const;

  // All cliques, each ascending, the list in lexicographic order.
  std::vector<Clique> canonical_list() const;
  std::vector<Clique> cliques_containing(QueryId v) const;

  // Largest clique containing v; ties go to the lexicographically smallest
  // member list. Empty when v belongs to no clique.
  std::optional<Clique> largest_containing(QueryId v) const;

  // `members` must be non-empty and strictly ascending.
  void insert(Clique members);
  void clear();

 private:
  friend void incremental_add_node(CliqueSet&, const ConstraintGraph&,
                                   QueryId, std::size_t);
  friend void incremental_remove_node(CliqueSet&, QueryId);

  std::vector<std::size_t> slots_containing(QueryId v) const;
  void erase_slot(std::size_t slot);

  std::vector<Clique> slots_;  // empty vector marks a free slot
  std::vector<std::size_t> free_slots_;
  std::unordered_map<QueryId, std::vector<std::size_t>> index_;
  std::size_t count_ = 0;
};

// Maximal cliques of the subgraph of g induced by `nodes` (ascending ids),
// via Bron-Kerbosch with Tomita pivoting: the pivot maximizes |N(u) ∩ P|
// over P ∪ X, ties to the lowest id. Throws EngineError once more than
// `limit` cliques have been emitted. Empty `nodes` yields no cliques.
std::vector<CliqueSet::Clique> maximal_cliques(
    const ConstraintGraph& g, const std::vector<QueryId>& nodes,
    std::size_t limit = kDefaultCliqueLimit);

CliqueSet all_maximal_cliques(const ConstraintGraph& g,
                              std::size_t limit = kDefaultCliqueLimit);

// Updates `s` from the maximal cliques of g-without-v to those of g. The
// node v must already be in g (with its edges) and in no clique of s.
void incremental_add_node(CliqueSet& s, const ConstraintGraph& g, QueryId v,
                          std::size_t limit = kDefaultCliqueLimit);

// Updates `s` from the maximal cliques of a graph containing v to those of
// the graph without v. Needs no adjacency: reduced cliques survive exactly
// when no remaining clique contains them.
void incremental_remove_node(CliqueSet& s, QueryId v);

}  // namespace meshcloak

#endif  // MESHCLOAK_CLIQUES_HPP
