#include "crn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace crn {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

ComplexPartition groups(DisjointSets& ds, std::size_t n) {
  std::vector<std::vector<std::size_t>> by_root(n);
  for (std::size_t i = 0; i < n; ++i) by_root[ds.find(i)].push_back(i);
  ComplexPartition out;
  for (auto& g : by_root)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

std::vector<std::vector<std::size_t>> adjacency(const ReactionNetwork& net) {
  std::vector<std::vector<std::size_t>> adj(net.complexes().size());
  for (std::size_t r = 0; r < net.reaction_count(); ++r) adj[net.source_index(r)].push_back(net.target_index(r));
  return adj;
}

}  // namespace

ComplexPartition linkage_classes(const ReactionNetwork& net) {
  const std::size_t n = net.complexes().size();
  DisjointSets ds(n);
  for (std::size_t r = 0; r < net.reaction_count(); ++r) ds.unite(net.source_index(r), net.target_index(r));
  return groups(ds, n);
}

ComplexPartition strong_components(const ReactionNetwork& net) {
  const auto adj = adjacency(net);
  const std::size_t n = adj.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  ComplexPartition sccs;

  // Iterative Tarjan: frames of (vertex, next edge position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        std::size_t w = adj[v][pos++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        sccs.push_back(std::move(comp));
      }
      std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[finished]);
    }
  }
  std::sort(sccs.begin(), sccs.end());
  return sccs;
}

bool is_reversible(const ReactionNetwork& net) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) edges.emplace(net.source_index(r), net.target_index(r));
  for (auto [a, b] : edges)
    if (!edges.count({b, a})) return false;
  return true;
}

bool is_weakly_reversible(const ReactionNetwork& net) {
  // Each linkage class is one SCC exactly when the two partitions have equal size.
  return strong_components(net).size() == linkage_classes(net).size();
}

std::size_t exact_rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  // Scale every row to integers, then Bareiss elimination stays in Z.
  std::vector<std::vector<Integer>> m;
  for (const auto& row : rows) {
    Integer l = 1;
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Integer> irow;
    for (const auto& q : row) irow.push_back(q.get_num() * (l / q.get_den()));
    m.push_back(std::move(irow));
  }
  const std::size_t nrows = m.size();
  std::size_t rank = 0;
  Integer prev_pivot = 1;
  for (std::size_t c = 0; c < cols && rank < nrows; ++c) {
    std::size_t pivot = rank;
    while (pivot < nrows && m[pivot][c] == 0) ++pivot;
    if (pivot == nrows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t i = rank + 1; i < nrows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev_pivot.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev_pivot = m[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t stoich_rank(const ReactionNetwork& net) {
  std::vector<RationalVector> rows;
  for (const auto& r : net.reactions()) rows.push_back(r.vector());
  return exact_rank(std::move(rows));
}

long deficiency(const ReactionNetwork& net) {
  return static_cast<long>(net.complexes().size()) - static_cast<long>(linkage_classes(net).size()) -
         static_cast<long>(stoich_rank(net));
}

long deficiency_via_condensation(const ReactionNetwork& net) {
  auto sccs = strong_components(net);
  std::vector<std::size_t> comp_of(net.complexes().size());
  for (std::size_t k = 0; k < sccs.size(); ++k)
    for (auto v : sccs[k]) comp_of[v] = k;
  DisjointSets ds(sccs.size());
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    ds.unite(comp_of[net.source_index(r)], comp_of[net.target_index(r)]);
  std::size_t classes = groups(ds, sccs.size()).size();
  return static_cast<long>(net.complexes().size()) - static_cast<long>(classes) - static_cast<long>(stoich_rank(net));
}

StructureReport analyze_structure(const ReactionNetwork& net) {
  StructureReport rep;
  rep.num_complexes = net.complexes().size();
  rep.linkage_classes = linkage_classes(net);
  rep.reversible = is_reversible(net);
  rep.weakly_reversible = is_weakly_reversible(net);
  rep.stoich_rank = stoich_rank(net);
  rep.deficiency = static_cast<long>(rep.num_complexes) - static_cast<long>(rep.linkage_classes.size()) -
                   static_cast<long>(rep.stoich_rank);
  return rep;
}

}  // namespace crn
