#include "rvg/rvg.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <stdexcept>

namespace rvg {

double edgeCost(const EdgeWeight& w, double alpha, double beta) {
  if (w.translation < 0 || w.rotation < 0) throw std::invalid_argument("negative edge weight");
  if (alpha < 0 || beta < 0) throw std::invalid_argument("negative cost coefficient");
  return alpha * w.translation + beta * w.rotation;
}

std::vector<std::pair<int, int>> RvgGraph::dictionary(int l) const {
  std::vector<std::pair<int, int>> out;
  for (int v : D_[l]) out.push_back({vertices_[v].originLayer, vertices_[v].originIndex});
  return out;
}

int RvgGraph::vertexAt(int layer, Point2 p) const {
  if (layer < 0 || layer >= n_) return -1;
  auto it = index_[layer].find(p);
  return it == index_[layer].end() ? -1 : it->second;
}

void RvgGraph::buildIndex() {
  D_.assign(static_cast<std::size_t>(n_), {});
  index_.assign(static_cast<std::size_t>(n_), {});
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    D_[vertices_[v].layer].push_back(v);
    index_[vertices_[v].layer].emplace(vertices_[v].pos, v);
  }
}

void RvgGraph::buildAdjacency() {
  const std::size_t nv = vertices_.size();
  offsets_.assign(nv + 1, 0);
  for (const RvgEdge& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  for (std::size_t i = 0; i < nv; ++i) offsets_[i + 1] += offsets_[i];
  arcs_.assign(static_cast<std::size_t>(offsets_[nv]), {});
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    arcs_[fill[edges_[e].a]++] = {edges_[e].b, e};
    arcs_[fill[edges_[e].b]++] = {edges_[e].a, e};
  }
  for (std::size_t i = 0; i < nv; ++i)
    std::sort(arcs_.begin() + offsets_[i], arcs_.begin() + offsets_[i + 1],
              [](const Arc& x, const Arc& y) { return x.to < y.to || (x.to == y.to && x.edge < y.edge); });
}

RvgGraph RvgGraph::fromParts(int n, std::vector<RvgVertex> vertices, std::vector<RvgEdge> edges) {
  if (n < 2) throw std::invalid_argument("resolution must be at least 2");
  RvgGraph g;
  g.n_ = n;
  g.vertices_ = std::move(vertices);
  g.edges_ = std::move(edges);
  for (const RvgVertex& v : g.vertices_)
    if (v.layer < 0 || v.layer >= n) throw std::invalid_argument("vertex layer out of range");
  for (const RvgEdge& e : g.edges_) {
    const int nv = static_cast<int>(g.vertices_.size());
    if (e.a < 0 || e.b < 0 || e.a >= nv || e.b >= nv) throw std::invalid_argument("edge endpoint out of range");
    edgeCost(e.weight, 0, 0);
  }
  g.buildIndex();
  g.buildAdjacency();
  return g;
}

bool crossLayerEligible(Point2 v, Point2 vPrime, const Layer& target, const VisibilityRegion& regionOfVPrime) {
  if (v == vPrime) return true;
  return regionOfVPrime.contains(v) && isBitangent(v, vPrime, target.free);
}

namespace detail {

class Propagator {
 public:
  Propagator(const std::vector<Layer>& layers, const PropagationOptions& options)
      : layers_(layers), n_(static_cast<int>(layers.size())), maxHops_(options.maxHops) {
    g_.n_ = n_;
    g_.D_.assign(static_cast<std::size_t>(n_), {});
    g_.index_.assign(static_cast<std::size_t>(n_), {});
  }

  RvgGraph run() {
    for (int l = 0; l < n_; ++l)
      for (int j = 0; j < static_cast<int>(layers_[l].vertices.size()); ++j) add(l, layers_[l].vertices[j], l, j, 0);
    while (!queue_.empty()) {
      const int x = queue_.front();
      queue_.pop_front();
      expand(x);
    }
    connect();
    regions_.clear();
    g_.buildAdjacency();
    return std::move(g_);
  }

 private:
  const std::vector<Layer>& layers_;
  int n_;
  int maxHops_;
  RvgGraph g_;
  std::deque<int> queue_;
  std::vector<std::unique_ptr<VisibilityRegion>> regions_;

  std::vector<int> neighbourLayers(int l) const {
    const int a = (l + 1) % n_, b = (l + n_ - 1) % n_;
    if (a == b) return {a};
    return {a, b};
  }

  int add(int layer, Point2 pos, int originLayer, int originIndex, int hops) {
    const int id = static_cast<int>(g_.vertices_.size());
    g_.vertices_.push_back({pos, layer, layers_[layer].interval, originLayer, originIndex, hops});
    g_.D_[layer].push_back(id);
    g_.index_[layer].emplace(pos, id);
    regions_.emplace_back();
    if (hops > 0) ++g_.stats_.substitutes;
    queue_.push_back(id);
    return id;
  }

  const VisibilityRegion& region(int v) {
    auto& slot = regions_[v];
    if (!slot) {
      const RvgVertex& x = g_.vertices_[v];
      if (x.native()) return layers_[x.layer].cache[x.originIndex];
      slot = std::make_unique<VisibilityRegion>(visibilityQuery(x.pos, layers_[x.layer].free));
    }
    return *slot;
  }

  bool eligible(Point2 p, int w) {
    ++g_.stats_.eligibilityChecks;
    const RvgVertex& y = g_.vertices_[w];
    return crossLayerEligible(p, y.pos, layers_[y.layer], region(w));
  }

  // A copy of the same position reached through a shorter chain inherits the shorter depth.
  void improve(int v, int hops) {
    RvgVertex& x = g_.vertices_[v];
    if (hops >= x.hops) return;
    x.hops = hops;
    queue_.push_back(v);
  }

  void expand(int x) {
    const RvgVertex vx = g_.vertices_[x];
    for (int s : neighbourLayers(vx.layer)) {
      if (vx.hops < maxHops_) {
        const int there = g_.vertexAt(s, vx.pos);
        if (there >= 0) {
          improve(there, vx.hops + 1);
        } else if (!layers_[s].free.empty() && layers_[s].free.classify(vx.pos) != Containment::Outside) {
          const std::vector<int> targets = g_.D_[s];
          for (int w : targets) {
            if (region(w).mayContain(vx.pos) && eligible(vx.pos, w)) {
              ++g_.stats_.crossConnections;
              add(s, vx.pos, vx.originLayer, vx.originIndex, vx.hops + 1);
              break;
            }
          }
        }
      }
      const VisibilityRegion& rx = region(x);
      const std::vector<int> sources = g_.D_[s];
      for (int y : sources) {
        const RvgVertex vy = g_.vertices_[y];
        if (vy.hops >= maxHops_ || !rx.mayContain(vy.pos)) continue;
        const int here = g_.vertexAt(vx.layer, vy.pos);
        if (here >= 0) {
          improve(here, vy.hops + 1);
        } else if (eligible(vy.pos, x)) {
          ++g_.stats_.crossConnections;
          add(vx.layer, vy.pos, vy.originLayer, vy.originIndex, vy.hops + 1);
        }
      }
    }
  }

  void connect() {
    auto addEdge = [&](int a, int b, EdgeWeight w) { g_.edges_.push_back({std::min(a, b), std::max(a, b), w}); };
    for (int l = 0; l < n_; ++l) {
      const Layer& layer = layers_[l];
      const auto& reg = g_.D_[l];
      for (auto [i, j] : layer.edges) {
        const int a = g_.vertexAt(l, layer.vertices[i]), b = g_.vertexAt(l, layer.vertices[j]);
        addEdge(a, b, {distance(layer.vertices[i], layer.vertices[j]), 0.0});
      }
      for (std::size_t k = 0; k < reg.size(); ++k) {
        const int x = reg[k];
        if (g_.vertices_[x].native()) continue;
        for (std::size_t m = 0; m < reg.size(); ++m) {
          const int y = reg[m];
          if (y == x || (!g_.vertices_[y].native() && m < k)) continue;
          const Point2 a = g_.vertices_[x].pos, b = g_.vertices_[y].pos;
          if (!region(x).mayContain(b)) continue;
          if (region(x).contains(b) && isBitangent(a, b, layer.free)) addEdge(x, y, {distance(a, b), 0.0});
        }
      }
    }
    for (int v = 0; v < static_cast<int>(g_.vertices_.size()); ++v) {
      const RvgVertex& x = g_.vertices_[v];
      const int next = (x.layer + 1) % n_;
      if (n_ == 2 && next < x.layer) continue;
      const int u = g_.vertexAt(next, x.pos);
      if (u >= 0) addEdge(v, u, {0.0, circularDistance(x.interval.mean(), layers_[next].interval.mean())});
    }
    std::sort(g_.edges_.begin(), g_.edges_.end(), [](const RvgEdge& p, const RvgEdge& q) {
      return p.a < q.a || (p.a == q.a && p.b < q.b);
    });
  }
};

}  // namespace detail

RvgGraph propagate(const std::vector<Layer>& layers, const PropagationOptions& options) {
  if (layers.size() < 2) throw std::invalid_argument("propagation needs at least two layers");
  if (options.maxHops < 0) throw std::invalid_argument("maxHops must be non-negative");
  return detail::Propagator(layers, options).run();
}

}  // namespace rvg
