#include "qtiling/tiling.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "qtiling/errors.hpp"

namespace qt {

Quasitiling::Quasitiling(Group tag, std::vector<FinSet> shapes,
                         std::vector<std::vector<GroupElement>> centers)
    : tag_(tag), shapes_(std::move(shapes)), centers_(std::move(centers)) {
  if (shapes_.size() != centers_.size())
    throw PreconditionError("Quasitiling: shapes/centers length mismatch");
  for (auto& cs : centers_) std::sort(cs.begin(), cs.end());
}

std::size_t Quasitiling::tile_count() const {
  std::size_t n = 0;
  for (const auto& cs : centers_) n += cs.size();
  return n;
}

std::vector<TileId> Quasitiling::tiles() const {
  std::vector<TileId> out;
  out.reserve(tile_count());
  for (std::size_t s = 0; s < centers_.size(); ++s)
    for (const auto& c : centers_[s]) out.emplace_back(static_cast<int>(s), c);
  return out;
}

FinSet Quasitiling::tile_set(const TileId& t) const {
  return set_translate(shapes_.at(static_cast<std::size_t>(t.first)), t.second);
}

FinSet Quasitiling::union_of_tiles() const {
  std::vector<GroupElement> out;
  for (const auto& t : tiles())
    for (const auto& g : tile_set(t)) out.push_back(g);
  return FinSet(tag_, std::move(out));
}

void Quasitiling::set_provenance(const GroupElement& center,
                                 TileProvenance p) {
  provenance_[center] = p;
}

std::optional<TileProvenance> Quasitiling::provenance(
    const GroupElement& center) const {
  auto it = provenance_.find(center);
  if (it == provenance_.end()) return std::nullopt;
  return it->second;
}

void Quasitiling::validate() const {
  std::unordered_set<GroupElement, GroupElementHash> seen_centers;
  for (const auto& cs : centers_)
    for (const auto& c : cs)
      if (!seen_centers.insert(c).second)
        throw CorruptTilingError("center " + to_string(c) +
                                 " claimed by two shapes");
  std::set<std::vector<GroupElement>> tile_sets;
  for (const auto& t : tiles()) {
    const FinSet cells = tile_set(t);
    if (!tile_sets.insert(cells.elements()).second)
      throw CorruptTilingError("(shape, center) -> tile not injective at " +
                               to_string(t.second));
  }
}

std::map<GroupElement, int> encode_symbolic(const Quasitiling& T,
                                            const FinSet& window) {
  std::map<GroupElement, int> out;
  for (std::size_t s = 0; s < T.centers().size(); ++s)
    for (const auto& c : T.centers()[s]) {
      if (!window.contains(c)) continue;
      auto [it, fresh] = out.emplace(c, static_cast<int>(s));
      if (!fresh)
        throw CorruptTilingError("center " + to_string(c) +
                                 " claimed by two shapes");
    }
  return out;
}

Quasitiling decode_symbolic(const std::map<GroupElement, int>& pattern,
                            Group tag, const std::vector<FinSet>& shapes) {
  std::vector<std::vector<GroupElement>> centers(shapes.size());
  for (const auto& [g, s] : pattern) {
    if (s < 0 || static_cast<std::size_t>(s) >= shapes.size())
      throw CorruptTilingError("unknown shape index " + std::to_string(s));
    centers[static_cast<std::size_t>(s)].push_back(g);
  }
  return Quasitiling(tag, shapes, std::move(centers));
}

bool is_disjoint(const Quasitiling& T) {
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (const auto& t : T.tiles())
    for (const auto& g : T.tile_set(t))
      if (!seen.insert(g).second) return false;
  return true;
}

bool check_witness(const Quasitiling& T, const DisjointnessWitness& W,
                   const Rat& eps) {
  std::unordered_set<GroupElement, GroupElementHash> used;
  for (const auto& t : T.tiles()) {
    auto it = W.cores.find(t);
    if (it == W.cores.end())
      throw PreconditionError("witness missing a tile at " +
                              to_string(t.second));
    const FinSet& core = it->second;
    FinSet tile = T.tile_set(t);
    if (!is_subset(core, tile)) return false;
    if (Rat(Int(core.size())) < (Rat(1) - eps) * Rat(Int(tile.size())))
      return false;
    for (const auto& g : core)
      if (!used.insert(g).second) return false;
  }
  return true;
}

namespace {

// Dinic max-flow on a small integer-capacity graph.
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<std::size_t>(n), -1) {}

  void add_edge(int u, int v, long long cap) {
    edges_.push_back({v, head_[static_cast<std::size_t>(u)], cap});
    head_[static_cast<std::size_t>(u)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[static_cast<std::size_t>(v)], 0});
    head_[static_cast<std::size_t>(v)] = static_cast<int>(edges_.size()) - 1;
  }

  long long max_flow(int s, int t) {
    long long total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (long long f = dfs(s, t, LLONG_MAX)) total += f;
    }
    return total;
  }

  long long edge_flow(int idx) const {
    return edges_[static_cast<std::size_t>(idx) * 2 + 1].cap;
  }

 private:
  struct Edge {
    int to;
    int next;
    long long cap;
  };
  std::vector<Edge> edges_;
  std::vector<int> head_, iter_, level_;

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[static_cast<std::size_t>(u)]; e != -1;
           e = edges_[static_cast<std::size_t>(e)].next) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
          level_[static_cast<std::size_t>(ed.to)] =
              level_[static_cast<std::size_t>(u)] + 1;
          q.push(ed.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  long long dfs(int u, int t, long long f) {
    if (u == t) return f;
    for (int& e = iter_[static_cast<std::size_t>(u)]; e != -1;
         e = edges_[static_cast<std::size_t>(e)].next) {
      Edge& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] ==
                            level_[static_cast<std::size_t>(u)] + 1) {
        long long d = dfs(ed.to, t, std::min(f, ed.cap));
        if (d > 0) {
          ed.cap -= d;
          edges_[static_cast<std::size_t>(e ^ 1)].cap += d;
          return d;
        }
      }
    }
    return 0;
  }
};

}  // namespace

FlowCheckResult eps_disjoint_flow_check(const Quasitiling& T, const Rat& eps) {
  auto tiles = T.tiles();
  std::vector<FinSet> tile_sets;
  tile_sets.reserve(tiles.size());
  for (const auto& t : tiles) tile_sets.push_back(T.tile_set(t));

  // Element universe.
  std::unordered_map<GroupElement, int, GroupElementHash> elem_id;
  std::vector<GroupElement> elems;
  for (const auto& ts : tile_sets)
    for (const auto& g : ts)
      if (elem_id.emplace(g, static_cast<int>(elems.size())).second)
        elems.push_back(g);

  int ne = static_cast<int>(elems.size());
  int nt = static_cast<int>(tiles.size());
  int source = ne + nt, sink = ne + nt + 1;
  Dinic flow(ne + nt + 2);

  // Edge ids are in insertion order: first ne source->element edges, then
  // element->tile edges, then tile->sink edges.
  for (int i = 0; i < ne; ++i) flow.add_edge(source, i, 1);
  std::vector<std::pair<int, int>> assign_edges;  // (edge idx, tile idx)
  int edge_count = ne;
  for (int t = 0; t < nt; ++t)
    for (const auto& g : tile_sets[static_cast<std::size_t>(t)]) {
      flow.add_edge(elem_id.at(g), ne + t, 1);
      assign_edges.emplace_back(edge_count++, t);
    }
  long long total_demand = 0;
  for (int t = 0; t < nt; ++t) {
    Int d = rat_ceil((Rat(1) - eps) *
                     Rat(Int(tile_sets[static_cast<std::size_t>(t)].size())));
    long long dl = d.convert_to<long long>();
    flow.add_edge(ne + t, sink, dl);
    total_demand += dl;
  }

  long long got = flow.max_flow(source, sink);
  FlowCheckResult res;
  res.feasible = (got == total_demand);
  if (!res.feasible) return res;

  DisjointnessWitness w;
  std::vector<std::vector<GroupElement>> cores(
      static_cast<std::size_t>(nt));
  // Recover assignments from saturated element->tile edges.
  std::size_t k = 0;
  for (int t = 0; t < nt; ++t)
    for (const auto& g : tile_sets[static_cast<std::size_t>(t)]) {
      if (flow.edge_flow(assign_edges[k].first) > 0)
        cores[static_cast<std::size_t>(t)].push_back(g);
      ++k;
    }
  for (int t = 0; t < nt; ++t)
    w.cores.emplace(tiles[static_cast<std::size_t>(t)],
                    FinSet(T.tag(), std::move(cores[static_cast<std::size_t>(t)])));
  res.witness = std::move(w);
  return res;
}

Rat covering_on_window(const Quasitiling& T, const FinSet& F,
                       const FinSet& window) {
  return banach_density_window(T.union_of_tiles(), F, window);
}

}  // namespace qt
