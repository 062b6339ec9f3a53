#include "rvg/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace rvg {

namespace {

inline int nx(int i) { return i == 2 ? 0 : i + 1; }
inline int pv(int i) { return i == 0 ? 2 : i - 1; }

inline int edgeIndexOf(const Triangulation::Tri& tr, int a, int b) {
  for (int i = 0; i < 3; ++i) {
    const int p = tr.v[nx(i)], q = tr.v[pv(i)];
    if ((p == a && q == b) || (p == b && q == a)) return i;
  }
  return -1;
}

inline std::uint64_t edgeKey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

class TriangulationBuilder {
 public:
  using Tri = Triangulation::Tri;

  explicit TriangulationBuilder(Triangulation& out) : T(out) {}

  void build(const std::vector<std::vector<Point2>>& rings);

 private:
  Triangulation& T;
  std::vector<Tri>& tris() { return T.tris_; }
  std::vector<Point2>& pts() { return T.pts_; }
  std::vector<int> freeSlots_;
  int lastTri_ = 0;

  int newTri(int a, int b, int c) {
    Tri t;
    t.v = {a, b, c};
    t.nbr = {-1, -1, -1};
    t.fixed = {0, 0, 0};
    int id;
    if (!freeSlots_.empty()) {
      id = freeSlots_.back();
      freeSlots_.pop_back();
      tris()[id] = t;
    } else {
      id = static_cast<int>(tris().size());
      tris().push_back(t);
    }
    T.vtri_[a] = T.vtri_[b] = T.vtri_[c] = id;
    return id;
  }

  void kill(int t) {
    tris()[t].v = {-1, -1, -1};
    freeSlots_.push_back(t);
  }

  // Points the edge {p, q} of triangle nb at newT.
  void relink(int nb, int p, int q, int newT) {
    if (nb < 0) return;
    Tri& tn = tris()[nb];
    for (int k = 0; k < 3; ++k) {
      const int a = tn.v[nx(k)], b = tn.v[pv(k)];
      if ((a == p && b == q) || (a == q && b == p)) {
        tn.nbr[k] = newT;
        return;
      }
    }
  }

  int orientAt(int a, int b, int c) { return orient2d(pts()[a], pts()[b], pts()[c]); }

  int locate(int p, int hint);
  void insertPoint(int p);
  void legalize(std::vector<std::pair<int, int>>& stack);
  void flip(int t, int i);
  void insertConstraint(int a, int b);
  bool findEdge(int a, int b, int& t, int& i);
  void triangulatePseudo(int a, int b, const std::vector<int>& chain, std::vector<int>& created);
  void markInside();
  void compact();
};

int TriangulationBuilder::locate(int p, int hint) {
  const Point2 q = pts()[p];
  int t = hint;
  if (t < 0 || t >= static_cast<int>(tris().size()) || tris()[t].v[0] < 0) t = lastTri_;
  if (tris()[t].v[0] < 0) {
    for (t = 0; tris()[t].v[0] < 0; ++t) {
    }
  }
  int start = 0;
  const std::size_t limit = 4 * tris().size() + 16;
  for (std::size_t steps = 0; steps < limit; ++steps) {
    const Tri& tr = tris()[t];
    bool moved = false;
    for (int k = 0; k < 3; ++k) {
      const int i = (k + start) % 3;
      if (orient2d(pts()[tr.v[nx(i)]], pts()[tr.v[pv(i)]], q) < 0) {
        t = tr.nbr[i];
        moved = true;
        break;
      }
    }
    if (!moved) return t;
    start = (start + 1) % 3;
  }
  for (int s = 0; s < static_cast<int>(tris().size()); ++s) {
    const Tri& tr = tris()[s];
    if (tr.v[0] < 0) continue;
    if (orientAt(tr.v[0], tr.v[1], p) >= 0 && orientAt(tr.v[1], tr.v[2], p) >= 0 &&
        orientAt(tr.v[2], tr.v[0], p) >= 0)
      return s;
  }
  throw std::runtime_error("triangulation: point location failed");
}

void TriangulationBuilder::insertPoint(int p) {
  const int t = locate(p, lastTri_);
  const Tri old = tris()[t];
  int o[3];
  int zeros = 0, zk = -1;
  for (int i = 0; i < 3; ++i) {
    o[i] = orientAt(old.v[nx(i)], old.v[pv(i)], p);
    if (o[i] == 0) {
      ++zeros;
      zk = i;
    }
  }
  if (zeros > 1) throw std::runtime_error("triangulation: duplicate point");
  std::vector<std::pair<int, int>> stack;
  if (zeros == 0) {
    const int a = old.v[0], b = old.v[1], c = old.v[2];
    kill(t);
    const int t0 = newTri(p, b, c);
    const int t1 = newTri(p, c, a);
    const int t2 = newTri(p, a, b);
    tris()[t0].nbr = {old.nbr[0], t1, t2};
    tris()[t1].nbr = {old.nbr[1], t2, t0};
    tris()[t2].nbr = {old.nbr[2], t0, t1};
    relink(old.nbr[0], b, c, t0);
    relink(old.nbr[1], c, a, t1);
    relink(old.nbr[2], a, b, t2);
    stack = {{t0, 0}, {t1, 0}, {t2, 0}};
    lastTri_ = t0;
  } else {
    const int k = zk;
    const int c = old.v[k], a = old.v[nx(k)], b = old.v[pv(k)];
    const int u = old.nbr[k];
    const Tri ou = tris()[u];
    const int ku = (ou.v[0] != a && ou.v[0] != b) ? 0 : (ou.v[1] != a && ou.v[1] != b) ? 1 : 2;
    const int d = ou.v[ku];
    const int nCA = old.nbr[pv(k)];  // opposite b
    const int nBC = old.nbr[nx(k)];  // opposite a
    // In u = (d, b, a): edge (d,b) is opposite a, edge (a,d) is opposite b.
    int nDB = -1, nAD = -1;
    for (int i = 0; i < 3; ++i) {
      if (ou.v[i] == a) nDB = ou.nbr[i];
      if (ou.v[i] == b) nAD = ou.nbr[i];
    }
    kill(t);
    kill(u);
    const int t1 = newTri(c, a, p);
    const int t2 = newTri(c, p, b);
    const int u1 = newTri(d, b, p);
    const int u2 = newTri(d, p, a);
    tris()[t1].nbr = {u2, t2, nCA};
    tris()[t2].nbr = {u1, nBC, t1};
    tris()[u1].nbr = {t2, u2, nDB};
    tris()[u2].nbr = {t1, nAD, u1};
    relink(nCA, c, a, t1);
    relink(nBC, b, c, t2);
    relink(nDB, d, b, u1);
    relink(nAD, a, d, u2);
    stack = {{t1, 2}, {t2, 1}, {u1, 2}, {u2, 1}};
    lastTri_ = t1;
  }
  legalize(stack);
}

// Each stack entry (t, i) names triangle t whose vertex v[i] is the new point.
void TriangulationBuilder::legalize(std::vector<std::pair<int, int>>& stack) {
  while (!stack.empty()) {
    auto [t, i] = stack.back();
    stack.pop_back();
    const Tri& tr = tris()[t];
    const int u = tr.nbr[i];
    if (u < 0 || tr.fixed[i]) continue;
    const int p = tr.v[i], a = tr.v[nx(i)], b = tr.v[pv(i)];
    const Tri& tu = tris()[u];
    int d = -1;
    for (int k = 0; k < 3; ++k)
      if (tu.v[k] != a && tu.v[k] != b) d = tu.v[k];
    if (incircle(pts()[p], pts()[a], pts()[b], pts()[d]) <= 0) continue;
    flip(t, i);
    // After flip t = (p, a, d) and u = (p, d, b).
    stack.push_back({t, 0});
    stack.push_back({u, 0});
  }
}

void TriangulationBuilder::flip(int t, int i) {
  const Tri ot = tris()[t];
  const int u = ot.nbr[i];
  const Tri ou = tris()[u];
  const int p = ot.v[i], a = ot.v[nx(i)], b = ot.v[pv(i)];
  int d = -1, nAD = -1, nDB = -1;
  std::uint8_t fAD = 0, fDB = 0;
  for (int k = 0; k < 3; ++k) {
    if (ou.v[k] != a && ou.v[k] != b) d = ou.v[k];
    if (ou.v[k] == b) {
      nAD = ou.nbr[k];
      fAD = ou.fixed[k];
    }
    if (ou.v[k] == a) {
      nDB = ou.nbr[k];
      fDB = ou.fixed[k];
    }
  }
  const int nPB = ot.nbr[nx(i)];  // opposite a: edge (b, p)
  const int nPA = ot.nbr[pv(i)];  // opposite b: edge (p, a)
  const std::uint8_t fPB = ot.fixed[nx(i)], fPA = ot.fixed[pv(i)];
  Tri& nt = tris()[t];
  nt.v = {p, a, d};
  nt.nbr = {nAD, u, nPA};
  nt.fixed = {fAD, 0, fPA};
  Tri& nu = tris()[u];
  nu.v = {p, d, b};
  nu.nbr = {nDB, nPB, t};
  nu.fixed = {fDB, fPB, 0};
  relink(nAD, a, d, t);
  relink(nPB, p, b, u);
  T.vtri_[p] = T.vtri_[a] = T.vtri_[d] = t;
  T.vtri_[b] = u;
}

bool TriangulationBuilder::findEdge(int a, int b, int& t, int& i) {
  const int start = T.vtri_[a];
  int cur = start;
  do {
    const Tri& tr = tris()[cur];
    int ia = 0;
    while (tr.v[ia] != a) ++ia;
    if (tr.v[nx(ia)] == b) {
      t = cur;
      i = pv(ia);
      return true;
    }
    if (tr.v[pv(ia)] == b) {
      t = cur;
      i = nx(ia);
      return true;
    }
    cur = tr.nbr[nx(ia)];
  } while (cur != start && cur >= 0);
  return false;
}

void TriangulationBuilder::triangulatePseudo(int a, int b, const std::vector<int>& chain,
                                             std::vector<int>& created) {
  if (chain.empty()) return;
  std::size_t ci = 0;
  for (std::size_t j = 1; j < chain.size(); ++j) {
    if (incircle(pts()[a], pts()[b], pts()[chain[ci]], pts()[chain[j]]) > 0) ci = j;
  }
  const int c = chain[ci];
  std::vector<int> left(chain.begin(), chain.begin() + static_cast<long>(ci));
  std::vector<int> right(chain.begin() + static_cast<long>(ci) + 1, chain.end());
  triangulatePseudo(a, c, left, created);
  triangulatePseudo(c, b, right, created);
  created.push_back(newTri(a, b, c));
}

void TriangulationBuilder::insertConstraint(int a, int b) {
  while (a != b) {
    int et, ei;
    if (findEdge(a, b, et, ei)) {
      tris()[et].fixed[ei] += 1;
      const int u = tris()[et].nbr[ei];
      if (u >= 0) {
        for (int k = 0; k < 3; ++k)
          if (tris()[u].nbr[k] == et) tris()[u].fixed[k] += 1;
      }
      return;
    }
    const Point2 pa = pts()[a], pb = pts()[b];
    // Find the triangle around a whose wedge contains the direction to b.
    int start = T.vtri_[a], cur = start, first = -1, x = -1, y = -1;
    int collinear = -1;
    do {
      const Tri& tr = tris()[cur];
      int ia = 0;
      while (tr.v[ia] != a) ++ia;
      const int vx = tr.v[nx(ia)], vy = tr.v[pv(ia)];
      const int ox = orient2d(pa, pts()[vx], pb);
      const int oy = orient2d(pa, pts()[vy], pb);
      if (ox == 0 && dot(pts()[vx] - pa, pb - pa) > 0) {
        collinear = vx;
        break;
      }
      if (oy == 0 && dot(pts()[vy] - pa, pb - pa) > 0) {
        collinear = vy;
        break;
      }
      if (ox > 0 && oy < 0) {
        first = cur;
        x = vx;
        y = vy;
        break;
      }
      cur = tr.nbr[nx(ia)];
    } while (cur != start && cur >= 0);
    if (collinear >= 0) {
      insertConstraint(a, collinear);
      a = collinear;
      continue;
    }
    if (first < 0) throw std::runtime_error("triangulation: constraint start not found");

    std::vector<int> cavity{first};
    std::vector<int> rightChain{x}, leftChain{y};
    int t = first;
    int end = b;
    while (true) {
      const Tri& tr = tris()[t];
      const int k = edgeIndexOf(tr, x, y);
      if (tr.fixed[k]) throw std::runtime_error("triangulation: crossing constraints");
      const int u = tr.nbr[k];
      const Tri& tu = tris()[u];
      int w = -1;
      for (int j = 0; j < 3; ++j)
        if (tu.v[j] != x && tu.v[j] != y) w = tu.v[j];
      cavity.push_back(u);
      t = u;
      if (w == b) break;
      const int o = orient2d(pa, pb, pts()[w]);
      if (o == 0) {
        end = w;
        break;
      }
      if (o < 0) {
        rightChain.push_back(w);
        x = w;
      } else {
        leftChain.push_back(w);
        y = w;
      }
    }

    // Boundary edges of the cavity, keyed by directed edge as seen from inside.
    std::unordered_map<std::uint64_t, std::pair<int, std::uint8_t>> boundary;
    for (int c : cavity) {
      const Tri& tr = tris()[c];
      for (int j = 0; j < 3; ++j) {
        const int nb = tr.nbr[j];
        if (std::find(cavity.begin(), cavity.end(), nb) != cavity.end()) continue;
        boundary[edgeKey(tr.v[nx(j)], tr.v[pv(j)])] = {nb, tr.fixed[j]};
      }
    }
    for (int c : cavity) kill(c);

    std::vector<int> created;
    triangulatePseudo(a, end, leftChain, created);
    std::vector<int> rightReversed(rightChain.rbegin(), rightChain.rend());
    triangulatePseudo(end, a, rightReversed, created);

    std::unordered_map<std::uint64_t, std::pair<int, int>> inner;
    for (int c : created) {
      Tri& tr = tris()[c];
      for (int j = 0; j < 3; ++j) {
        const int p = tr.v[nx(j)], q = tr.v[pv(j)];
        auto bit = boundary.find(edgeKey(p, q));
        if (bit != boundary.end()) {
          tr.nbr[j] = bit->second.first;
          tr.fixed[j] = bit->second.second;
          continue;
        }
        auto iit = inner.find(edgeKey(q, p));
        if (iit != inner.end()) {
          const auto [ot, oj] = iit->second;
          tr.nbr[j] = ot;
          tris()[ot].nbr[oj] = c;
          if ((p == a && q == end) || (p == end && q == a)) {
            tr.fixed[j] += 1;
            tris()[ot].fixed[oj] += 1;
          }
          inner.erase(iit);
        } else {
          inner[edgeKey(p, q)] = {c, j};
        }
      }
    }
    for (int c : created) {
      const Tri& tr = tris()[c];
      for (int j = 0; j < 3; ++j) {
        const int nb = tr.nbr[j];
        if (nb < 0) continue;
        if (std::find(created.begin(), created.end(), nb) != created.end()) continue;
        Tri& tn = tris()[nb];
        const int p = tr.v[nx(j)], q = tr.v[pv(j)];
        for (int m = 0; m < 3; ++m) {
          if (tn.v[nx(m)] == q && tn.v[pv(m)] == p) tn.nbr[m] = c;
        }
      }
    }
    lastTri_ = created.front();
    a = end;
  }
}

void TriangulationBuilder::markInside() {
  std::vector<int> parity(tris().size(), -1);
  std::deque<int> queue;
  for (int t = 0; t < static_cast<int>(tris().size()); ++t) {
    const Tri& tr = tris()[t];
    if (tr.v[0] < 0) continue;
    if (T.isSuper(tr.v[0]) || T.isSuper(tr.v[1]) || T.isSuper(tr.v[2])) {
      parity[t] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    const Tri& tr = tris()[t];
    for (int j = 0; j < 3; ++j) {
      const int nb = tr.nbr[j];
      if (nb < 0 || parity[nb] >= 0) continue;
      parity[nb] = parity[t] ^ (tr.fixed[j] & 1);
      queue.push_back(nb);
    }
  }
  for (int t = 0; t < static_cast<int>(tris().size()); ++t) {
    if (tris()[t].v[0] >= 0) tris()[t].inside = parity[t] == 1;
  }
}

void TriangulationBuilder::compact() {
  std::vector<int> remap(tris().size(), -1);
  std::vector<Tri> out;
  out.reserve(tris().size());
  for (int t = 0; t < static_cast<int>(tris().size()); ++t) {
    if (tris()[t].v[0] < 0) continue;
    remap[t] = static_cast<int>(out.size());
    out.push_back(tris()[t]);
  }
  for (Tri& tr : out) {
    for (int j = 0; j < 3; ++j)
      if (tr.nbr[j] >= 0) tr.nbr[j] = remap[tr.nbr[j]];
  }
  tris() = std::move(out);
  for (int t = 0; t < static_cast<int>(tris().size()); ++t) {
    for (int v : tris()[t].v) T.vtri_[v] = t;
  }
}

void TriangulationBuilder::build(const std::vector<std::vector<Point2>>& rings) {
  std::map<Point2, int> ids;
  T.ringIds_.clear();
  for (const auto& ring : rings) {
    std::vector<int> r;
    r.reserve(ring.size());
    for (const Point2& p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("triangulation: non-finite coordinate");
      auto [it, inserted] = ids.emplace(p, static_cast<int>(pts().size()));
      if (inserted) pts().push_back(p);
      r.push_back(it->second);
    }
    T.ringIds_.push_back(std::move(r));
  }
  const int n = static_cast<int>(pts().size());
  T.nReal_ = n;
  if (n < 3) throw std::invalid_argument("triangulation: fewer than three points");
  const BBox bb = bbox(pts());
  const double span = std::max({bb.maxx - bb.minx, bb.maxy - bb.miny, 1.0});
  const double cx = 0.5 * (bb.minx + bb.maxx), cy = 0.5 * (bb.miny + bb.maxy);
  pts().push_back({cx - 64.0 * span, cy - 32.0 * span});
  pts().push_back({cx + 64.0 * span, cy - 32.0 * span});
  pts().push_back({cx, cy + 64.0 * span});
  T.vtri_.assign(pts().size(), -1);
  tris().clear();
  const int s0 = newTri(n, n + 1, n + 2);
  lastTri_ = s0;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(0x5eed5eedULL);
  std::shuffle(order.begin(), order.end(), rng);
  for (int p : order) insertPoint(p);

  for (const auto& r : T.ringIds_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      const int a = r[i], b = r[(i + 1) % r.size()];
      if (a != b) insertConstraint(a, b);
    }
  }
  compact();
  markInside();
}

Triangulation Triangulation::fromRings(const std::vector<std::vector<Point2>>& rings) {
  Triangulation t;
  TriangulationBuilder(t).build(rings);
  return t;
}

int Triangulation::vertexAt(Point2 p) const {
  for (int i = 0; i < nReal_; ++i)
    if (pts_[i] == p) return i;
  return -1;
}

int Triangulation::edgeIndex(int t, int a, int b) const {
  const Tri& tr = tris_[t];
  for (int i = 0; i < 3; ++i) {
    const int p = tr.v[nx(i)], q = tr.v[pv(i)];
    if ((p == a && q == b) || (p == b && q == a)) return i;
  }
  return -1;
}

int Triangulation::locate(Point2 p, int hint) const {
  int t = (hint >= 0 && hint < static_cast<int>(tris_.size())) ? hint : 0;
  int start = 0;
  const std::size_t limit = 4 * tris_.size() + 16;
  for (std::size_t steps = 0; steps < limit; ++steps) {
    const Tri& tr = tris_[t];
    bool moved = false;
    for (int k = 0; k < 3; ++k) {
      const int i = (k + start) % 3;
      if (orient2d(pts_[tr.v[nx(i)]], pts_[tr.v[pv(i)]], p) < 0) {
        if (tr.nbr[i] < 0) return -1;
        t = tr.nbr[i];
        moved = true;
        break;
      }
    }
    if (!moved) return t;
    start = (start + 1) % 3;
  }
  for (int s = 0; s < static_cast<int>(tris_.size()); ++s) {
    const Tri& tr = tris_[s];
    if (orient2d(pts_[tr.v[0]], pts_[tr.v[1]], p) >= 0 &&
        orient2d(pts_[tr.v[1]], pts_[tr.v[2]], p) >= 0 &&
        orient2d(pts_[tr.v[2]], pts_[tr.v[0]], p) >= 0)
      return s;
  }
  return -1;
}

std::vector<int> Triangulation::incident(int v) const {
  std::vector<int> out;
  const int start = vtri_[v];
  int cur = start;
  do {
    out.push_back(cur);
    const Tri& tr = tris_[cur];
    int iv = 0;
    while (tr.v[iv] != v) ++iv;
    cur = tr.nbr[nx(iv)];
  } while (cur != start && cur >= 0);
  return out;
}

std::size_t Triangulation::insideCount() const {
  return static_cast<std::size_t>(
      std::count_if(tris_.begin(), tris_.end(), [](const Tri& t) { return t.inside; }));
}

double Triangulation::insideArea() const {
  double a = 0.0;
  for (const Tri& t : tris_) {
    if (!t.inside) continue;
    a += 0.5 * cross(pts_[t.v[1]] - pts_[t.v[0]], pts_[t.v[2]] - pts_[t.v[0]]);
  }
  return a;
}

}  // namespace rvg
