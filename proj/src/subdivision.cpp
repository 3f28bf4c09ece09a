#include "bintope/subdivision.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "bintope/errors.hpp"
#include "bintope/parallel.hpp"

namespace bintope {

Node canonical(Node node) {
  std::sort(node.begin(), node.end());
  node.erase(std::unique(node.begin(), node.end()), node.end());
  return node;
}

std::size_t NodeHash::operator()(const Node& node) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : node) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

NodeStore::NodeStore(std::size_t shards) : shards_(std::max<std::size_t>(1, shards)) {}

NodeStore::Shard& NodeStore::shard_of(const Node& node) {
  return shards_[(NodeHash{}(node) >> 7) % shards_.size()];
}

const NodeStore::Shard& NodeStore::shard_of(const Node& node) const {
  return shards_[(NodeHash{}(node) >> 7) % shards_.size()];
}

bool NodeStore::insert(const Node& node) {
  Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  return s.map.emplace(node, Entry{0, 0, 0}).second;
}

bool NodeStore::contains(const Node& node) const {
  const Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  return s.map.count(node) != 0;
}

std::size_t NodeStore::size() const {
  std::size_t total = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mutex);
    total += s.map.size();
  }
  return total;
}

void NodeStore::claim(const Node& node, std::size_t round, std::size_t ticket) {
  Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  auto [it, fresh] = s.map.emplace(node, Entry{round, ticket, 0});
  if (!fresh && it->second.round == round) {
    it->second.ticket = std::min(it->second.ticket, ticket);
  }
}

bool NodeStore::owner(const Node& node, std::size_t round, std::size_t ticket) const {
  const Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  auto it = s.map.find(node);
  return it != s.map.end() && it->second.round == round && it->second.ticket == ticket;
}

void NodeStore::set_tag(const Node& node, std::size_t tag) {
  Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  s.map.at(node).tag = tag;
}

std::optional<std::size_t> NodeStore::tag(const Node& node) const {
  const Shard& s = shard_of(node);
  std::lock_guard lock(s.mutex);
  auto it = s.map.find(node);
  if (it == s.map.end()) return std::nullopt;
  return it->second.tag;
}

bool dedup_insert(NodeStore& store, const Node& node) { return store.insert(canonical(node)); }

std::uint64_t relift_seed(std::uint64_t base, unsigned attempt) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(attempt) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct RestartLift {};

struct Waiting {
  Node node;
  Node certificate;
};

struct CellState {
  Node indices;
  std::vector<char> tried;
  std::size_t untried;
};

struct Task {
  bool pivot;
  std::size_t parent;  // waiting index or cell id
  std::size_t arg;     // candidate point, or position of the leaving point
};

class Search {
 public:
  Search(const LiftedPointSet& S, const SubdivideOptions& options, SubdivisionStats& stats)
      : S_(S), opt_(options), stats_(stats), d_(S.dim()) {}

  // Cells found, or throws RestartLift. Sets complete = false on deadline.
  std::vector<Node> run(bool& complete) {
    LpAnswer root = any_lower_facet(S_, opt_.mode);
    count(root, false);
    if (root.status == LpStatus::Degenerate) throw RestartLift{};
    if (!root.feasible()) throw StateError("subdivide: no lower facet found");
    add_root_cell(root.basis);

    std::vector<Waiting> waiting{{Node{}, root.basis}};
    for (std::size_t round = 1;; ++round) {
      if (opt_.deadline && std::chrono::steady_clock::now() > *opt_.deadline) {
        complete = false;
        break;
      }
      std::vector<Task> tasks = schedule(waiting, round);
      if (tasks.empty()) break;
      ++stats_.rounds;

      std::vector<LpAnswer> results(tasks.size());
      parallel_for(tasks.size(), opt_.workers, [&](std::size_t t) {
        results[t] = execute(waiting, tasks[t]);
      }, 16);
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        count(results[t], tasks[t].pivot);
        if (results[t].status == LpStatus::Degenerate) throw RestartLift{};
        if (results[t].status == LpStatus::ParentInfeasible) {
          throw StateError("subdivide: a feasible node was reported infeasible");
        }
      }
      waiting = check_unique(waiting, tasks, results, round);
    }
    std::vector<Node> out;
    out.reserve(cells_.size());
    for (auto& c : cells_) out.push_back(std::move(c.indices));
    return out;
  }

 private:
  void count(const LpAnswer& a, bool pivot) {
    ++stats_.lps;
    if (pivot) {
      ++stats_.pivots;
    } else {
      ++stats_.extension_lps;
    }
    if (a.used_exact && opt_.mode != LpMode::Exact) ++stats_.exact_fallbacks;
  }

  void add_root_cell(const Node& basis) {
    cell_store_.claim(basis, 0, 0);
    cell_store_.set_tag(basis, 0);
    cells_.push_back({basis, std::vector<char>(d_ + 1, 0), d_ + 1});
  }

  Node extended(const Node& node, std::size_t c) const {
    Node out = node;
    out.insert(std::upper_bound(out.begin(), out.end(), c), c);
    return out;
  }

  std::vector<Task> schedule(const std::vector<Waiting>& waiting, std::size_t round) {
    std::vector<Task> tasks;
    for (std::size_t w = 0; w < waiting.size(); ++w) {
      const Waiting& item = waiting[w];
      if (!item.node.empty() && opt_.pivoting && opt_.pruning &&
          cell_store_.contains(item.certificate)) {
        ++stats_.pruned;
        continue;
      }
      ++stats_.nodes_explored;
      // Candidates above the largest index: every face is reached through
      // its sorted prefixes, all of which are faces as well.
      const std::size_t first = item.node.empty() ? 0 : item.node.back() + 1;
      for (std::size_t c = first; c < S_.size(); ++c) tasks.push_back({false, w, c});
    }
    if (opt_.pivoting) {
      const std::size_t ell = std::min<std::size_t>(d_ + 1, 10);
      for (std::size_t id = 0; id < cells_.size(); ++id) {
        CellState& cell = cells_[id];
        if (cell.untried == 0) continue;
        std::vector<std::size_t> open;
        for (std::size_t p = 0; p <= d_; ++p) {
          if (!cell.tried[p]) open.push_back(p);
        }
        std::mt19937_64 rng(relift_seed(opt_.seed ^ (round * 0x100000001b3ULL), static_cast<unsigned>(id)));
        std::shuffle(open.begin(), open.end(), rng);
        open.resize(std::min(open.size(), ell));
        std::sort(open.begin(), open.end());
        for (auto p : open) tasks.push_back({true, id, p});
      }
    }
    return tasks;
  }

  LpAnswer execute(const std::vector<Waiting>& waiting, const Task& task) const {
    if (task.pivot) {
      const Node& cell = cells_[task.parent].indices;
      return pivot_step(S_, cell, cell[task.arg], opt_.mode);
    }
    const Waiting& item = waiting[task.parent];
    return extend_feasible(S_, item.node, task.arg, opt_.mode, &item.certificate);
  }

  void mark_tried(std::size_t id, std::size_t point) {
    CellState& cell = cells_[id];
    auto it = std::find(cell.indices.begin(), cell.indices.end(), point);
    const std::size_t p = static_cast<std::size_t>(it - cell.indices.begin());
    if (!cell.tried[p]) {
      cell.tried[p] = 1;
      --cell.untried;
    }
  }

  std::vector<Waiting> check_unique(const std::vector<Waiting>& waiting,
                                    const std::vector<Task>& tasks,
                                    const std::vector<LpAnswer>& results, std::size_t round) {
    std::vector<Node> new_nodes(tasks.size());
    parallel_for(tasks.size(), opt_.workers, [&](std::size_t t) {
      if (!results[t].feasible()) return;
      cell_store_.claim(results[t].basis, round, t);
      if (!tasks[t].pivot) {
        Node node = extended(waiting[tasks[t].parent].node, tasks[t].arg);
        if (node.size() <= d_) {
          node_store_.claim(node, round, t);
          new_nodes[t] = std::move(node);
        }
      }
    }, 64);
    std::vector<char> new_cell(tasks.size(), 0), new_node(tasks.size(), 0);
    parallel_for(tasks.size(), opt_.workers, [&](std::size_t t) {
      if (!results[t].feasible()) return;
      new_cell[t] = cell_store_.owner(results[t].basis, round, t);
      if (!new_nodes[t].empty()) new_node[t] = node_store_.owner(new_nodes[t], round, t);
    }, 64);

    std::vector<Waiting> next;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const Task& task = tasks[t];
      const LpAnswer& r = results[t];
      if (task.pivot) mark_tried(task.parent, cells_[task.parent].indices[task.arg]);
      if (opt_.trace && !task.pivot) {
        Node node = extended(waiting[task.parent].node, task.arg);
        (r.feasible() ? opt_.trace->feasible : opt_.trace->infeasible).push_back(node);
      }
      if (!r.feasible()) continue;

      std::size_t id;
      if (new_cell[t]) {
        id = cells_.size();
        cells_.push_back({r.basis, std::vector<char>(d_ + 1, 0), d_ + 1});
        cell_store_.set_tag(r.basis, id);
      } else {
        id = *cell_store_.tag(r.basis);
      }
      if (task.pivot) {
        // The facet just crossed, seen from the other side.
        const Node& from = cells_[task.parent].indices;
        for (auto v : cells_[id].indices) {
          if (!std::binary_search(from.begin(), from.end(), v)) mark_tried(id, v);
        }
      } else if (new_node[t]) {
        next.push_back({std::move(new_nodes[t]), r.basis});
      }
    }
    return next;
  }

  const LiftedPointSet& S_;
  const SubdivideOptions& opt_;
  SubdivisionStats& stats_;
  const std::size_t d_;
  NodeStore cell_store_;
  NodeStore node_store_;
  std::vector<CellState> cells_;
};

void check_full_dimension(const LiftedPointSet& S) {
  IntMatrix M(S.size(), S.dim() + 1);
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t k = 0; k < S.dim(); ++k) M(i, k) = S.point(i)[k];
    M(i, S.dim()) = 1;
  }
  if (rank_exact(M) != S.dim() + 1) {
    throw DimensionError("subdivide: points do not span R^" + std::to_string(S.dim()) +
                         " affinely");
  }
}

// Exact normal, independent certificate check and normalized volume.
bool finalize(const LiftedPointSet& S, const std::vector<Node>& found, unsigned workers,
              std::vector<Cell>& cells) {
  const std::size_t d = S.dim();
  cells.assign(found.size(), Cell{});
  std::vector<char> ok(found.size(), 1);
  parallel_for(found.size(), workers, [&](std::size_t c) {
    Cell& cell = cells[c];
    cell.indices = found[c];
    std::vector<Rational> x = exact_vertex(S, cell.indices);
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (!std::binary_search(cell.indices.begin(), cell.indices.end(), i) &&
          sgn(S.slack(i, x)) <= 0) {
        ok[c] = 0;
      }
    }
    x.resize(d);
    cell.normal = std::move(x);
    IntMatrix E(d, d);
    const auto& a0 = S.point(cell.indices[0]);
    for (std::size_t r = 1; r <= d; ++r) {
      const auto& a = S.point(cell.indices[r]);
      for (std::size_t k = 0; k < d; ++k) E(r - 1, k) = a[k] - a0[k];
    }
    cell.nvol = abs(det_exact(E));
  }, 8);
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.indices < b.indices; });
  return std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
}

}  // namespace

Subdivision subdivide(const LiftedPointSet& S, const SubdivideOptions& options) {
  if (S.size() < S.dim() + 1) {
    throw DimensionError("subdivide: need at least d+1 points");
  }
  check_full_dimension(S);
  SubdivisionStats stats;
  LiftedPointSet current = S;
  for (unsigned attempt = 0;; ++attempt) {
    try {
      bool complete = true;
      Search search(current, options, stats);
      std::vector<Node> found = search.run(complete);
      Subdivision out{{}, current, current.seed(), 0, complete, stats};
      if (!finalize(current, found, options.workers, out.cells)) {
        if (options.mode == LpMode::Exact) {
          throw StateError("subdivide: a cell failed its exact certificate check");
        }
        SubdivideOptions exact = options;
        exact.mode = LpMode::Exact;
        return subdivide(current, exact);
      }
      for (const auto& c : out.cells) out.total_volume += c.nvol;
      out.stats = stats;
      return out;
    } catch (const RestartLift&) {
      if (attempt >= options.max_relifts) {
        throw DegeneracyError("subdivide: lifting still degenerate after " +
                              std::to_string(options.max_relifts) + " re-lifts");
      }
      ++stats.relifts;
      if (options.trace) *options.trace = {};
      current = S.relifted(relift_seed(S.seed(), attempt));
    }
  }
}

std::vector<LiftedPointSet::Point> degree_support(const SolutionStructure& structure) {
  const IntMatrix P0 = structure.snf.P_0();
  std::vector<LiftedPointSet::Point> points;
  points.reserve(P0.cols() + 1);
  for (std::size_t j = 0; j < P0.cols(); ++j) {
    LiftedPointSet::Point p(P0.rows());
    for (std::size_t k = 0; k < P0.rows(); ++k) {
      if (!P0(k, j).fits_slong_p()) throw DomainError("degree: exponent out of range");
      p[k] = P0(k, j).get_si();
    }
    points.push_back(std::move(p));
  }
  points.emplace_back(P0.rows(), 0L);
  return points;
}

DegreeResult degree(const BinomialSystem& sys, const DegreeOptions& options) {
  SolutionStructure structure = analyze(sys, options.analyze);
  if (!structure.consistent) {
    throw InconsistentSystemError("degree: the system has no solution in the torus");
  }
  if (structure.dimension == 0) {
    return DegreeResult{std::move(structure), Integer(1), std::nullopt};
  }
  LiftedPointSet S =
      LiftedPointSet::with_random_lifting(degree_support(structure), options.lifting_seed);
  Subdivision sub = subdivide(S, options.subdivide);
  Integer deg = sub.total_volume;
  return DegreeResult{std::move(structure), std::move(deg), std::move(sub)};
}

}  // namespace bintope
