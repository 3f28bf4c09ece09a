#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bintope/binomial.hpp"
#include "bintope/intlinalg.hpp"
#include "bintope/lpkernel.hpp"

namespace bintope {

/// Sorted, duplicate-free index set into a point set.
using Node = std::vector<std::size_t>;

Node canonical(Node node);

struct NodeHash {
  std::size_t operator()(const Node& node) const noexcept;
};

/// Concurrent set of nodes keyed by the full index set.
///
/// `insert` is an atomic check-and-insert. `claim`/`owner` support the
/// deterministic two-phase form used inside a round: every producer claims
/// its node with a ticket, and after a barrier the smallest ticket of the
/// round owns a node that was not present before.
class NodeStore {
 public:
  explicit NodeStore(std::size_t shards = 64);

  /// True exactly once per distinct canonical node.
  bool insert(const Node& node);
  bool contains(const Node& node) const;
  std::size_t size() const;

  void claim(const Node& node, std::size_t round, std::size_t ticket);
  /// True iff `ticket` won the claim for `node` in `round`.
  bool owner(const Node& node, std::size_t round, std::size_t ticket) const;

  /// Optional payload, e.g. a cell id, attached by the owner.
  void set_tag(const Node& node, std::size_t tag);
  std::optional<std::size_t> tag(const Node& node) const;

 private:
  struct Entry {
    std::size_t round;
    std::size_t ticket;
    std::size_t tag;
  };
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_map<Node, Entry, NodeHash> map;
  };
  Shard& shard_of(const Node& node);
  const Shard& shard_of(const Node& node) const;

  std::vector<Shard> shards_;
};

/// Canonicalizes `node` and inserts it; true iff it was not present.
bool dedup_insert(NodeStore& store, const Node& node);

struct Cell {
  Node indices;                // d+1 points
  std::vector<Rational> normal;  // alpha of the inner normal (alpha, 1)
  Integer nvol;                // |det(a_1 - a_0, ..., a_d - a_0)|
};

struct SubdivisionStats {
  std::size_t lps = 0;
  std::size_t extension_lps = 0;
  std::size_t pivots = 0;
  std::size_t nodes_explored = 0;
  std::size_t pruned = 0;
  std::size_t relifts = 0;
  std::size_t rounds = 0;
  std::size_t exact_fallbacks = 0;
};

/// Nodes the extension process decided, for checking pruning soundness.
struct ExtensionTrace {
  std::vector<Node> feasible;
  std::vector<Node> infeasible;
};

struct SubdivideOptions {
  unsigned workers = 1;
  LpMode mode = LpMode::Float;
  bool pivoting = true;
  /// With pivoting on, a node whose certificate cell is already known is
  /// not extended further: pivoting reaches every cell from it.
  bool pruning = true;
  unsigned max_relifts = 32;
  /// Seeds the random choice of facets to pivot across.
  std::uint64_t seed = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  ExtensionTrace* trace = nullptr;
};

struct Subdivision {
  std::vector<Cell> cells;  // sorted by indices
  LiftedPointSet lifted;    // the lifting actually used, after any re-lift
  std::uint64_t lifting_seed = 0;
  Integer total_volume = 0;
  /// False when the deadline stopped the search; total_volume is then a
  /// lower bound.
  bool complete = true;
  SubdivisionStats stats;
};

/// All lower facets of the lifted hull of S, i.e. the regular subdivision.
/// On a degenerate lifting the points are re-lifted with seeds derived from
/// S.seed(); after max_relifts failures a DegeneracyError is thrown. Throws
/// DimensionError if S does not span R^d affinely.
Subdivision subdivide(const LiftedPointSet& S, const SubdivideOptions& options = {});

/// Seed of the k-th re-lift.
std::uint64_t relift_seed(std::uint64_t base, unsigned attempt);

/// Columns of P_0 plus the origin.
std::vector<LiftedPointSet::Point> degree_support(const SolutionStructure& structure);

struct DegreeOptions {
  std::uint64_t lifting_seed = 0;
  SubdivideOptions subdivide;
  AnalyzeOptions analyze;
};

struct DegreeResult {
  SolutionStructure structure;
  /// Degree of each component; 1 when the components are points.
  Integer degree;
  std::optional<Subdivision> subdivision;
};

/// Throws InconsistentSystemError when the system has no solution.
DegreeResult degree(const BinomialSystem& sys, const DegreeOptions& options = {});

}  // namespace bintope
