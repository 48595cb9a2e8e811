#pragma once

// Decorated dual graphs of stable curves: enumeration, canonical forms,
// automorphisms, contractions, quasi-stable models and cycle bases.
//
// A stable graph of type (g,n) has vertices carrying a genus and a set of
// marking labels (legs), and a multiset of edges (loops allowed). Each edge
// has two distinguishable half-edge slots: slot 0 sits at edges[e].first,
// slot 1 at edges[e].second. Flows are stored in the slot-0 -> slot-1
// orientation.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "logdr/rational.hpp"

namespace logdr {

struct GraphVertex {
  int genus = 0;
  std::vector<int> legs;  // sorted marking labels from {1..n}
  bool operator==(const GraphVertex&) const = default;
};

struct StableGraph {
  int g = 0, n = 0;
  std::vector<GraphVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // (u,v) with u <= v; loops u == v

  int num_vertices() const { return (int)vertices.size(); }
  int num_edges() const { return (int)edges.size(); }
  int h1() const { return num_edges() - num_vertices() + 1; }

  int valence(int v) const {
    int d = 0;
    for (auto& e : edges) {
      if (e.first == v) ++d;
      if (e.second == v) ++d;
    }
    return d;
  }
  bool is_loop(int e) const { return edges[e].first == edges[e].second; }

  bool operator==(const StableGraph&) const = default;
};

// Flat integer encoding; the canonical representative minimizes it.
inline std::vector<long long> graph_encoding(const StableGraph& gr) {
  std::vector<long long> enc;
  enc.push_back(gr.g);
  enc.push_back(gr.n);
  enc.push_back(gr.num_vertices());
  for (auto& v : gr.vertices) {
    enc.push_back(v.genus);
    enc.push_back((long long)v.legs.size());
    for (int l : v.legs) enc.push_back(l);
  }
  enc.push_back(gr.num_edges());
  auto es = gr.edges;
  std::sort(es.begin(), es.end());
  for (auto& e : es) {
    enc.push_back(e.first);
    enc.push_back(e.second);
  }
  return enc;
}

inline std::string graph_key(const StableGraph& gr) {
  std::string s;
  for (long long x : graph_encoding(gr)) {
    s += std::to_string(x);
    s += ',';
  }
  return s;
}

inline bool graph_connected(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  if (nv == 0) return false;
  std::vector<int> seen(nv, 0), stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto& e : gr.edges) {
      int w = -1;
      if (e.first == v) w = e.second;
      else if (e.second == v) w = e.first;
      if (w >= 0 && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (int s : seen)
    if (!s) return false;
  return true;
}

// Full invariant check (connectivity, genus bookkeeping, markings, stability).
inline bool graph_valid(const StableGraph& gr) {
  if (gr.vertices.empty()) return false;
  for (auto& e : gr.edges)
    if (e.first > e.second || e.first < 0 || e.second >= gr.num_vertices()) return false;
  if (!graph_connected(gr)) return false;
  int genus_sum = 0;
  std::vector<int> seen_mark(gr.n + 1, 0);
  for (auto& v : gr.vertices) {
    if (v.genus < 0) return false;
    genus_sum += v.genus;
    for (int l : v.legs) {
      if (l < 1 || l > gr.n) return false;
      seen_mark[l]++;
    }
  }
  for (int i = 1; i <= gr.n; ++i)
    if (seen_mark[i] != 1) return false;
  if (genus_sum + gr.h1() != gr.g) return false;
  for (int v = 0; v < gr.num_vertices(); ++v) {
    int deg = 2 * gr.vertices[v].genus - 2 + gr.valence(v) + (int)gr.vertices[v].legs.size();
    if (deg <= 0) return false;
  }
  return true;
}

// Applies a vertex permutation (old index -> new index) and re-sorts edges.
// Returns the relabeled graph together with the edge permutation
// (old edge index -> new edge index).
inline std::pair<StableGraph, std::vector<int>> graph_relabel(const StableGraph& gr,
                                                              const std::vector<int>& vperm) {
  StableGraph out;
  out.g = gr.g;
  out.n = gr.n;
  out.vertices.resize(gr.num_vertices());
  for (int v = 0; v < gr.num_vertices(); ++v) out.vertices[vperm[v]] = gr.vertices[v];
  std::vector<std::pair<std::pair<int, int>, int>> tagged;
  for (int e = 0; e < gr.num_edges(); ++e) {
    int a = vperm[gr.edges[e].first], b = vperm[gr.edges[e].second];
    tagged.push_back({{std::min(a, b), std::max(a, b)}, e});
  }
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](auto& x, auto& y) { return x.first < y.first; });
  std::vector<int> eperm(gr.num_edges());
  for (int i = 0; i < (int)tagged.size(); ++i) {
    out.edges.push_back(tagged[i].first);
    eperm[tagged[i].second] = i;
  }
  return {out, eperm};
}

struct CanonicalForm {
  StableGraph graph;        // the canonical representative
  std::vector<int> vperm;   // input vertex -> canonical vertex
  std::vector<int> eperm;   // input edge -> canonical edge
};

// Canonical form by minimizing the encoding over all vertex orderings.
// Desk-scale graphs are tiny, so the exponential worst case is acceptable.
inline CanonicalForm canonical_form(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  std::vector<int> idx(nv);
  std::iota(idx.begin(), idx.end(), 0);
  std::optional<CanonicalForm> best;
  std::vector<long long> best_enc;
  // idx is the inverse permutation: position i holds the old vertex placed at i.
  std::sort(idx.begin(), idx.end());
  do {
    std::vector<int> vperm(nv);
    for (int i = 0; i < nv; ++i) vperm[idx[i]] = i;
    auto [cand, eperm] = graph_relabel(gr, vperm);
    auto enc = graph_encoding(cand);
    if (!best || enc < best_enc) {
      best = CanonicalForm{cand, vperm, eperm};
      best_enc = enc;
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return *best;
}

inline StableGraph canonical(const StableGraph& gr) { return canonical_form(gr).graph; }

// An automorphism: vertex permutation, edge permutation, and a half-edge flip
// per edge. For a non-loop edge the flip is forced by the vertex images; for a
// loop both half-edge assignments are genuine automorphisms.
struct GraphAut {
  std::vector<int> vperm;
  std::vector<int> eperm;
  std::vector<bool> flip;
};

namespace detail {
inline void aut_extend_edges(const StableGraph& gr, const std::vector<int>& vperm,
                             std::vector<std::vector<int>>& classes,
                             std::vector<std::vector<int>>& images, std::size_t ci,
                             std::vector<int>& eperm, std::vector<bool>& flip,
                             std::vector<GraphAut>& out) {
  if (ci == classes.size()) {
    // Expand loop flips over all loop edges.
    std::vector<int> loops;
    for (int e = 0; e < gr.num_edges(); ++e)
      if (gr.is_loop(e)) loops.push_back(e);
    for (std::uint64_t mask = 0; mask < (1ull << loops.size()); ++mask) {
      auto f = flip;
      for (std::size_t i = 0; i < loops.size(); ++i)
        if (mask & (1ull << i)) f[loops[i]] = true;
      out.push_back({vperm, eperm, f});
    }
    return;
  }
  auto& src = classes[ci];
  auto& dst = images[ci];
  std::vector<int> perm(dst.begin(), dst.end());
  std::sort(perm.begin(), perm.end());
  do {
    for (std::size_t i = 0; i < src.size(); ++i) {
      int e = src[i], t = perm[i];
      eperm[e] = t;
      // flip for non-loops: half 0 of e sits at edges[e].first; its image
      // vertex is vperm[first]; if that is the second slot of the target,
      // the edge is traversed backwards.
      flip[e] = !gr.is_loop(e) && vperm[gr.edges[e].first] != gr.edges[t].first;
    }
    aut_extend_edges(gr, vperm, classes, images, ci + 1, eperm, flip, out);
  } while (std::next_permutation(perm.begin(), perm.end()));
}
}  // namespace detail

// Full automorphism group (legs fixed pointwise). Includes half-edge swaps on
// loops, so e.g. a single loop has automorphism group of order 2.
inline std::vector<GraphAut> automorphism_group(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  std::vector<int> idx(nv);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<GraphAut> out;
  std::sort(idx.begin(), idx.end());
  do {
    std::vector<int> vperm(nv);
    bool ok = true;
    for (int i = 0; i < nv && ok; ++i) {
      vperm[i] = idx[i];
      ok = gr.vertices[i] == gr.vertices[idx[i]];
    }
    if (!ok) continue;
    // group edges by unordered endpoint pair and match classes under vperm
    std::map<std::pair<int, int>, std::vector<int>> by_pair;
    for (int e = 0; e < gr.num_edges(); ++e) by_pair[gr.edges[e]].push_back(e);
    std::vector<std::vector<int>> classes, images;
    for (auto& [pr, es] : by_pair) {
      int a = vperm[pr.first], b = vperm[pr.second];
      auto it = by_pair.find({std::min(a, b), std::max(a, b)});
      if (it == by_pair.end() || it->second.size() != es.size()) {
        ok = false;
        break;
      }
      classes.push_back(es);
      images.push_back(it->second);
    }
    if (!ok) continue;
    std::vector<int> eperm(gr.num_edges(), -1);
    std::vector<bool> flip(gr.num_edges(), false);
    detail::aut_extend_edges(gr, vperm, classes, images, 0, eperm, flip, out);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

struct GraphContraction {
  StableGraph source;
  std::vector<int> contracted;       // edge indices of source
  StableGraph target;                // canonical
  std::vector<int> edge_injection;   // E(target) -> E(source)
  std::vector<int> vertex_surjection;  // V(source) -> V(target)
};

// Contracts a subset of edges. A loop contraction raises the vertex genus by
// one; more generally a merged vertex gains the first Betti number of the
// contracted subgraph on its component.
inline GraphContraction contract_edges(const StableGraph& gr, const std::vector<int>& e0) {
  for (int e : e0)
    if (e < 0 || e >= gr.num_edges()) throw std::invalid_argument("contract_edges: unknown edge");
  std::vector<bool> drop(gr.num_edges(), false);
  for (int e : e0) drop[e] = true;

  // union-find over contracted edges
  std::vector<int> parent(gr.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e : e0) parent[find(gr.edges[e].first)] = find(gr.edges[e].second);

  std::map<int, int> root_to_new;
  StableGraph mid;
  mid.g = gr.g;
  mid.n = gr.n;
  std::vector<int> vmap(gr.num_vertices());
  for (int v = 0; v < gr.num_vertices(); ++v) {
    int r = find(v);
    if (!root_to_new.count(r)) {
      root_to_new[r] = (int)mid.vertices.size();
      mid.vertices.push_back({});
    }
    vmap[v] = root_to_new[r];
  }
  // genus: sum of genera + h1 of the contracted subgraph per component
  std::vector<int> comp_vertices(mid.vertices.size(), 0), comp_edges(mid.vertices.size(), 0);
  for (int v = 0; v < gr.num_vertices(); ++v) {
    mid.vertices[vmap[v]].genus += gr.vertices[v].genus;
    for (int l : gr.vertices[v].legs) mid.vertices[vmap[v]].legs.push_back(l);
    comp_vertices[vmap[v]]++;
  }
  for (int e : e0) comp_edges[vmap[gr.edges[e].first]]++;
  for (std::size_t c = 0; c < mid.vertices.size(); ++c) {
    mid.vertices[c].genus += comp_edges[c] - comp_vertices[c] + 1;
    std::sort(mid.vertices[c].legs.begin(), mid.vertices[c].legs.end());
  }
  std::vector<int> mid_edge_src;  // mid edge index -> source edge index
  for (int e = 0; e < gr.num_edges(); ++e) {
    if (drop[e]) continue;
    int a = vmap[gr.edges[e].first], b = vmap[gr.edges[e].second];
    mid.edges.push_back({std::min(a, b), std::max(a, b)});
    mid_edge_src.push_back(e);
  }
  auto cf = canonical_form(mid);
  GraphContraction out;
  out.source = gr;
  out.contracted = e0;
  std::sort(out.contracted.begin(), out.contracted.end());
  out.target = cf.graph;
  out.edge_injection.resize(cf.graph.num_edges());
  for (int me = 0; me < (int)mid_edge_src.size(); ++me)
    out.edge_injection[cf.eperm[me]] = mid_edge_src[me];
  out.vertex_surjection.resize(gr.num_vertices());
  for (int v = 0; v < gr.num_vertices(); ++v) out.vertex_surjection[v] = cf.vperm[vmap[v]];
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

inline long long default_graph_cap() {
  if (const char* cap = std::getenv("LOGDR_CAP")) return std::atoll(cap);
  return 50000;
}

// All isomorphism classes of stable graphs of type (g,n), canonical
// representatives in a deterministic order.
inline std::vector<StableGraph> enumerate_stable_graphs(int g, int n,
                                                        long long cap = default_graph_cap()) {
  if (2 * g - 2 + n <= 0)
    throw std::invalid_argument("enumerate_stable_graphs: 2g-2+n must be positive");
  std::map<std::vector<long long>, StableGraph> found;
  const int max_v = 2 * g - 2 + n;

  // enumerate genus vectors summing to gs over nv vertices
  std::function<void(StableGraph&, int, int)> place_edges_and_legs;
  auto emit = [&](const StableGraph& cand) {
    if (!graph_valid(cand)) return;
    auto cf = canonical_form(cand);
    auto enc = graph_encoding(cf.graph);
    if (!found.count(enc)) {
      found[enc] = cf.graph;
      if ((long long)found.size() > cap)
        throw std::runtime_error("enumerate_stable_graphs: cap exceeded for (" +
                                 std::to_string(g) + "," + std::to_string(n) + ")");
    }
  };

  for (int nv = 1; nv <= max_v; ++nv) {
    // vertex-pair list (i <= j)
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < nv; ++i)
      for (int j = i; j < nv; ++j) pairs.push_back({i, j});

    std::vector<int> genera(nv, 0);
    std::function<void(int, int)> genus_rec = [&](int pos, int left) {
      if (pos == nv) {
        int ne = left + nv - 1;  // left over genus = h1
        if (ne < 0) return;
        // multisets of size ne over pairs
        std::vector<int> mult(pairs.size(), 0);
        std::function<void(std::size_t, int)> edge_rec = [&](std::size_t pi, int rem) {
          if (pi == pairs.size()) {
            if (rem != 0) return;
            StableGraph base;
            base.g = g;
            base.n = n;
            base.vertices.resize(nv);
            for (int v = 0; v < nv; ++v) base.vertices[v].genus = genera[v];
            for (std::size_t p = 0; p < pairs.size(); ++p)
              for (int m = 0; m < mult[p]; ++m) base.edges.push_back(pairs[p]);
            if (!graph_connected(base)) return;
            // leg assignments
            std::vector<int> at(n, 0);
            std::function<void(int)> leg_rec = [&](int li) {
              if (li == n) {
                StableGraph cand = base;
                for (int i = 0; i < n; ++i) cand.vertices[at[i]].legs.push_back(i + 1);
                for (auto& v : cand.vertices) std::sort(v.legs.begin(), v.legs.end());
                emit(cand);
                return;
              }
              for (int v = 0; v < nv; ++v) {
                at[li] = v;
                leg_rec(li + 1);
              }
            };
            leg_rec(0);
            return;
          }
          for (int m = 0; m <= rem; ++m) {
            mult[pi] = m;
            edge_rec(pi + 1, rem - m);
          }
          mult[pi] = 0;
        };
        edge_rec(0, ne);
        return;
      }
      for (int gv = 0; gv <= left; ++gv) {
        genera[pos] = gv;
        genus_rec(pos + 1, left - gv);
      }
    };
    genus_rec(0, g);
  }
  std::vector<StableGraph> out;
  for (auto& [enc, gr] : found) out.push_back(gr);
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-stable models

// A quasi-stable model: the base graph with a subset of edges subdivided once.
// Derived layout: stable vertices first (base order), then one exceptional
// vertex per subdivided edge (in increasing base-edge order). Derived edges
// follow the base order, a subdivided edge contributing its two halves
// consecutively: (u, x) then (x, v).
struct QuasiStableGraph {
  StableGraph base;
  std::vector<int> subdivided;  // sorted base edge indices

  int num_stable_vertices = 0;
  std::vector<std::pair<int, int>> edges;   // derived edges
  std::vector<int> edge_origin;             // derived edge -> base edge
  std::vector<int> edge_half;               // 0 whole, 1 first half, 2 second half
  std::vector<int> exceptional_of_edge;     // base edge -> exceptional vertex or -1

  int num_vertices() const { return num_stable_vertices + (int)subdivided.size(); }
  int num_edges() const { return (int)edges.size(); }
  int h1() const { return num_edges() - num_vertices() + 1; }
  bool is_exceptional(int v) const { return v >= num_stable_vertices; }
  bool is_loop(int e) const { return edges[e].first == edges[e].second; }

  int valence(int v) const {
    int d = 0;
    for (auto& e : edges) {
      if (e.first == v) ++d;
      if (e.second == v) ++d;
    }
    return d;
  }
  int vertex_genus(int v) const { return is_exceptional(v) ? 0 : base.vertices[v].genus; }
  const std::vector<int>& vertex_legs(int v) const {
    static const std::vector<int> none;
    return is_exceptional(v) ? none : base.vertices[v].legs;
  }
};

inline QuasiStableGraph make_quasi_stable(const StableGraph& base, std::vector<int> subdivided) {
  std::sort(subdivided.begin(), subdivided.end());
  QuasiStableGraph q;
  q.base = base;
  q.subdivided = subdivided;
  q.num_stable_vertices = base.num_vertices();
  q.exceptional_of_edge.assign(base.num_edges(), -1);
  for (std::size_t i = 0; i < subdivided.size(); ++i)
    q.exceptional_of_edge[subdivided[i]] = q.num_stable_vertices + (int)i;
  for (int e = 0; e < base.num_edges(); ++e) {
    int x = q.exceptional_of_edge[e];
    if (x < 0) {
      q.edges.push_back(base.edges[e]);
      q.edge_origin.push_back(e);
      q.edge_half.push_back(0);
    } else {
      q.edges.push_back({base.edges[e].first, x});
      q.edge_origin.push_back(e);
      q.edge_half.push_back(1);
      q.edges.push_back({x, base.edges[e].second});
      q.edge_origin.push_back(e);
      q.edge_half.push_back(2);
    }
  }
  return q;
}

// All 2^{|E|} subdivision patterns; the empty pattern first.
inline std::vector<QuasiStableGraph> quasi_stable_models(const StableGraph& gr) {
  std::vector<QuasiStableGraph> out;
  const int ne = gr.num_edges();
  for (std::uint64_t mask = 0; mask < (1ull << ne); ++mask) {
    std::vector<int> sub;
    for (int e = 0; e < ne; ++e)
      if (mask & (1ull << e)) sub.push_back(e);
    out.push_back(make_quasi_stable(gr, sub));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flows and cycle bases on quasi-stable graphs

// A flow assigns an integer to every derived edge, read in the slot-0 -> slot-1
// orientation; the reversed orientation carries the negated value.
using Flow = std::vector<long long>;

inline std::vector<long long> flow_divisor(const QuasiStableGraph& q, const Flow& f) {
  std::vector<long long> div(q.num_vertices(), 0);
  for (int e = 0; e < q.num_edges(); ++e) {
    div[q.edges[e].second] += f[e];
    div[q.edges[e].first] -= f[e];
  }
  return div;
}

// Spanning tree edges (BFS in canonical order); loops are never tree edges.
inline std::vector<int> spanning_tree(const QuasiStableGraph& q) {
  std::vector<int> tree;
  std::vector<bool> seen(q.num_vertices(), false);
  seen[0] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e = 0; e < q.num_edges(); ++e) {
      auto [a, b] = q.edges[e];
      if (seen[a] != seen[b]) {
        tree.push_back(e);
        seen[a] = seen[b] = true;
        grew = true;
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

// Basis of integer cycle flows (div = 0), one per non-tree edge.
inline std::vector<Flow> cycle_space_basis(const QuasiStableGraph& q) {
  auto tree = spanning_tree(q);
  std::vector<bool> in_tree(q.num_edges(), false);
  for (int e : tree) in_tree[e] = true;

  // parent pointers from BFS over the tree rooted at 0
  std::vector<int> parent_edge(q.num_vertices(), -1), parent_vertex(q.num_vertices(), -1);
  std::vector<int> order{0};
  std::vector<bool> seen(q.num_vertices(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    for (int e : tree) {
      int w = -1;
      if (q.edges[e].first == v) w = q.edges[e].second;
      else if (q.edges[e].second == v) w = q.edges[e].first;
      if (w >= 0 && !seen[w]) {
        seen[w] = true;
        parent_edge[w] = e;
        parent_vertex[w] = v;
        order.push_back(w);
      }
    }
  }
  auto path_to_root = [&](int v, Flow& f, long long sign) {
    while (v != 0) {
      int e = parent_edge[v];
      // the arc v -> parent follows slot order iff v is slot 0
      f[e] += (q.edges[e].first == v) ? sign : -sign;
      v = parent_vertex[v];
    }
  };
  std::vector<Flow> basis;
  for (int e = 0; e < q.num_edges(); ++e) {
    if (in_tree[e]) continue;
    Flow f(q.num_edges(), 0);
    f[e] = 1;  // slot0 -> slot1
    if (!q.is_loop(e)) {
      // close up: from slot1 back to slot0 through the tree
      path_to_root(q.edges[e].second, f, 1);
      path_to_root(q.edges[e].first, f, -1);
    }
    basis.push_back(f);
  }
  return basis;
}

// A flow is acyclic when no directed cycle has nonnegative values throughout
// and a positive value somewhere. Zero edges may be traversed both ways.
inline bool flow_is_acyclic(const QuasiStableGraph& q, const Flow& f) {
  // arcs: positive edges one-way, zero edges both ways
  const int nv = q.num_vertices();
  std::vector<std::vector<int>> adj(nv);
  std::vector<std::pair<int, int>> pos_arcs;
  for (int e = 0; e < q.num_edges(); ++e) {
    auto [a, b] = q.edges[e];
    if (f[e] > 0) {
      if (a == b) return false;  // positive loop
      adj[a].push_back(b);
      pos_arcs.push_back({a, b});
    } else if (f[e] < 0) {
      if (a == b) return false;
      adj[b].push_back(a);
      pos_arcs.push_back({b, a});
    } else {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  if (pos_arcs.empty()) return true;
  // a bad cycle exists iff some positive arc (a,b) admits a return path b->a
  for (auto [a, b] : pos_arcs) {
    std::vector<bool> seen(nv, false);
    std::vector<int> stack{b};
    seen[b] = true;
    bool found = false;
    while (!stack.empty() && !found) {
      int v = stack.back();
      stack.pop_back();
      if (v == a) found = true;
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    if (found) return false;
  }
  return true;
}

}  // namespace logdr
