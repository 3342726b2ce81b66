#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mls/free_group.hpp"
#include "mls/fundamental_group.hpp"
#include "mls/hull.hpp"
#include "mls/metric.hpp"
#include "mls/word_calculus.hpp"

namespace mls {

// Structured refusal raised inside the reconstruction pipeline; `code` is the
// machine-readable reason printed after `verdict REJECT`.
class Rejection : public std::runtime_error {
 public:
  Rejection(std::string code, std::string detail)
      : std::runtime_error(code + (detail.empty() ? "" : " " + detail)), code_(std::move(code)), detail_(std::move(detail)) {}
  [[nodiscard]] const std::string& code() const { return code_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

// Two cyclically reduced loops based at p.start that run together along p and
// separate at both of its ends.
struct DistinguishedPair {
  EdgePath p;
  EdgePath gamma1;
  EdgePath gamma2;
  Rational length1;
  Rational length2;
  Rational length21;  // cyclic length of gamma2 followed by gamma1 reversed
  bool loop_case = false;  // gamma1 == p twice

  [[nodiscard]] Rational certified_length() const { return (length1 + length2 - length21) / Rational(2); }
};

namespace detail {

// Shortest non-backtracking walk whose first step is `first` and last step is
// `last`, by breadth-first search over directed edges.
inline std::optional<std::vector<DirectedEdge>> nonbacktracking_walk(const MetricGraph& g, DirectedEdge first,
                                                                     DirectedEdge last) {
  if (first == last) return std::vector<DirectedEdge>{first};
  auto slot = [&](DirectedEdge d) { return 2 * g.edge_index(d.edge()) + (d.is_reversed() ? 1 : 0); };
  std::vector<std::optional<DirectedEdge>> parent(2 * g.edge_count());
  std::vector<bool> seen(2 * g.edge_count(), false);
  std::queue<DirectedEdge> frontier;
  seen[slot(first)] = true;
  frontier.push(first);
  while (!frontier.empty()) {
    const DirectedEdge d = frontier.front();
    frontier.pop();
    for (DirectedEdge e : g.out_edges(g.head(d))) {
      if (e == d.reverse() || seen[slot(e)]) continue;
      seen[slot(e)] = true;
      parent[slot(e)] = d;
      if (e == last) {
        std::vector<DirectedEdge> walk{e};
        while (walk.back() != first) walk.push_back(*parent[slot(walk.back())]);
        std::reverse(walk.begin(), walk.end());
        return walk;
      }
      frontier.push(e);
    }
  }
  return std::nullopt;
}

inline std::vector<DirectedEdge> outgoing_except(const MetricGraph& g, VertexId v, std::initializer_list<DirectedEdge> banned) {
  std::vector<DirectedEdge> out;
  for (DirectedEdge d : g.out_edges(v)) {
    if (std::find(banned.begin(), banned.end(), d) == banned.end()) out.push_back(d);
  }
  return out;
}

inline std::optional<DistinguishedPair> certify_pair(const MetricGraph& core, const EdgePath& p, EdgePath g1, EdgePath g2,
                                                     bool loop_case) {
  if (!is_cyclically_reduced(g1) || !is_cyclically_reduced(g2)) return std::nullopt;
  DistinguishedPair pair{p, std::move(g1), std::move(g2), {}, {}, {}, loop_case};
  pair.length1 = path_length(core, pair.gamma1);
  pair.length2 = path_length(core, pair.gamma2);
  pair.length21 = path_length(core, cyclically_reduce(core, then(pair.gamma2, reverse(pair.gamma1))).core_loop);
  if (pair.length21 != pair.length1 + pair.length2 - Rational(2) * path_length(core, p)) return std::nullopt;
  return pair;
}

}  // namespace detail

// Certified distinguishing pairs for p, in a fixed order, at most `limit`.
// The first one is the canonical pair: extension edges are the least
// admissible directed edges at each end.
inline std::vector<DistinguishedPair> distinguishing_pairs(const CoreDecomposition& c, const EdgePath& p,
                                                           std::size_t limit) {
  if (c.empty()) throw std::invalid_argument("distinguishing pair in an empty core");
  if (c.branch_points.empty()) throw std::invalid_argument("core is a circle: no branch points to distinguish from");
  if (p.empty() || !is_reduced(p)) throw std::invalid_argument("distinguished path must be non-empty and reduced");
  if (!c.is_branch_point(p.start) || !c.is_branch_point(p.end)) {
    throw std::invalid_argument("path " + format_path(p) + " does not join branch points");
  }
  const MetricGraph& core = c.core;
  for (DirectedEdge d : p.steps) {
    if (!core.has_edge(d.edge())) throw std::invalid_argument("path leaves the core at e" + std::to_string(d.edge()));
  }
  std::vector<DistinguishedPair> out;
  const VertexId x = p.start;
  const VertexId y = p.end;

  if (p.is_closed() && is_cyclically_reduced(p)) {
    const EdgePath square = then(p, p);
    const auto cand = detail::outgoing_except(core, x, {p.front(), p.back().reverse()});
    for (DirectedEdge o : cand) {
      for (DirectedEdge s : cand) {
        if (out.size() >= limit) return out;
        auto w = detail::nonbacktracking_walk(core, o, s.reverse());
        if (!w) continue;
        EdgePath g2 = then(p, EdgePath{x, x, *w});
        if (auto pair = detail::certify_pair(core, p, square, std::move(g2), true)) out.push_back(std::move(*pair));
      }
    }
  }

  const auto outs = detail::outgoing_except(core, y, {p.back().reverse()});
  const auto ins = detail::outgoing_except(core, x, {p.front()});
  for (std::size_t o1 = 0; o1 < outs.size(); ++o1) {
    for (std::size_t o2 = 0; o2 < outs.size(); ++o2) {
      if (o1 == o2) continue;
      for (std::size_t s1 = 0; s1 < ins.size(); ++s1) {
        for (std::size_t s2 = 0; s2 < ins.size(); ++s2) {
          if (s1 == s2) continue;
          if (out.size() >= limit) return out;
          auto w1 = detail::nonbacktracking_walk(core, outs[o1], ins[s1].reverse());
          auto w2 = detail::nonbacktracking_walk(core, outs[o2], ins[s2].reverse());
          if (!w1 || !w2) continue;
          auto pair = detail::certify_pair(core, p, then(p, EdgePath{y, x, *w1}), then(p, EdgePath{y, x, *w2}), false);
          if (pair) out.push_back(std::move(*pair));
        }
      }
    }
  }
  return out;
}

inline DistinguishedPair distinguishing_pair(const CoreDecomposition& c, const EdgePath& p) {
  auto pairs = distinguishing_pairs(c, p, 1);
  if (pairs.empty()) throw std::logic_error("no distinguishing pair found for " + format_path(p));
  return std::move(pairs.front());
}

// Words of the two loops (and of gamma2 gamma1^-1) in basis b, conjugated to
// the basepoint along a shortest path.
struct PairWords {
  GroupWord w1;
  GroupWord w2;
  GroupWord w21;
};

inline PairWords pair_words(const Basis& b, const DistinguishedPair& pair) {
  const EdgePath alpha = shortest_path(b.graph(), b.basepoint(), pair.p.start);
  auto word = [&](const EdgePath& loop) { return loop_to_word(b, then(then(alpha, loop), reverse(alpha))); };
  PairWords w{word(pair.gamma1), word(pair.gamma2), {}};
  w.w21 = w.w2 * w.w1.inverse();
  return w;
}

// l(p) read from three spectrum values of the target.
inline Rational recovered_length(const Basis& b1, const Basis& b2, const GroupHom& phi, const DistinguishedPair& pair) {
  const PairWords w = pair_words(b1, pair);
  return (marked_length(b2, apply_hom(phi, w.w1)) + marked_length(b2, apply_hom(phi, w.w2)) -
          marked_length(b2, apply_hom(phi, w.w21))) /
         Rational(2);
}

// Image of the distinguished path under phi: the overlap of the axes of the
// two image loops, read off in the target graph.
inline EdgePath phi_path(const Basis& b1, const Basis& b2, const CoreDecomposition& core2, const GroupHom& phi,
                         const DistinguishedPair& pair) {
  const PairWords w = pair_words(b1, pair);
  const GroupWord v1 = apply_hom(phi, w.w1);
  const GroupWord v2 = apply_hom(phi, w.w2);
  const GroupWord v21 = apply_hom(phi, w.w21);
  const Rational l1 = marked_length(b2, v1);
  const Rational l2 = marked_length(b2, v2);
  const Rational l21 = marked_length(b2, v21);
  for (const auto& [src, got] : {std::pair{&w.w1, &l1}, std::pair{&w.w2, &l2}, std::pair{&w.w21, &l21}}) {
    const Rational want = marked_length(b1, *src);
    if (want != *got) {
      throw Rejection("spectrum-mismatch", format_word(*src) + " l1=" + want.str() + " l2=" + got->str());
    }
  }
  const Rational recovered = (l1 + l2 - l21) / Rational(2);

  const MetricGraph& g2 = b2.graph();
  const EdgePath eta1 = word_to_loop(b2, v1);
  const EdgePath eta2 = word_to_loop(b2, v2);
  const auto c1 = cyclically_reduce(g2, eta1);
  const auto c2 = cyclically_reduce(g2, eta2);
  const bool first_longer = c1.conjugator.size() >= c2.conjugator.size();
  const EdgePath& big = first_longer ? c1.conjugator : c2.conjugator;
  const EdgePath& small = first_longer ? c2.conjugator : c1.conjugator;
  if (!std::equal(small.steps.begin(), small.steps.end(), big.steps.begin())) {
    throw Rejection("conjugator-containment", "conjugators [" + format_path(c1.conjugator) + "] and [" +
                                              format_path(c2.conjugator) + "] are not nested");
  }
  const EdgePath zeta1 = reduce_path(then(then(reverse(big), eta1), big));
  const EdgePath zeta2 = reduce_path(then(then(reverse(big), eta2), big));
  if (!is_cyclically_reduced(zeta1) || !is_cyclically_reduced(zeta2)) {
    throw Rejection("conjugator-containment", "image loops are not cyclically reduced at the common basepoint");
  }
  const std::size_t n1 = zeta1.size();
  const std::size_t n2 = zeta2.size();
  std::size_t pre = 0;
  while (pre < n1 && pre < n2 && zeta1.steps[pre] == zeta2.steps[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < n1 && suf < n2 && zeta1.steps[n1 - 1 - suf] == zeta2.steps[n2 - 1 - suf]) ++suf;
  if (pre + suf >= std::min(n1, n2)) {
    throw Rejection("overlap-length", "image loops overlap along a whole loop");
  }
  const EdgePath nu = then(subpath(g2, zeta1, n1 - suf, suf), subpath(g2, zeta1, 0, pre));
  const Rational got = path_length(g2, nu);
  if (got != recovered || nu.empty()) {
    throw Rejection("overlap-length", "overlap " + format_path(nu) + " has length " + got.str() + ", expected " +
                                         recovered.str());
  }
  if (!core2.is_branch_point(nu.start) || !core2.is_branch_point(nu.end)) {
    throw Rejection("overlap-endpoints", "image path " + format_path(nu) + " does not join branch points");
  }
  return nu;
}

struct DistanceRow {
  VertexId x = 0;
  VertexId y = 0;
  Rational d1;
  Rational d2;
};

struct SegmentMatch {
  std::size_t from = 0;
  std::size_t to = 0;
  bool reversed = false;
  Rational length1;
  Rational length2;
};

struct GeneratorRow {
  std::uint32_t generator = 0;
  GroupWord induced;   // f#(g_k)
  GroupWord expected;  // phi(g_k)
  bool ok = false;
};

struct IsometryCertificate {
  bool accepted = false;
  std::string code;    // reason code when rejected
  std::string detail;  // human-readable context
  std::size_t sweep_length = 0;
  bool circle = false;
  std::optional<Rational> circumference1;
  std::optional<Rational> circumference2;
  std::map<VertexId, VertexId> branch_map;
  std::vector<DistanceRow> distances;
  std::vector<std::string> incidence;  // incidence option per branch point
  std::vector<SegmentMatch> segments;  // indexed by source segment
  std::optional<GroupWord> tau;
  std::vector<GeneratorRow> generators;
};

namespace detail {

// Paths out of x that are images-defining for f(x): a shortest path to every
// other branch point, then every loop segment at x.
inline std::vector<EdgePath> paths_from(const CoreDecomposition& c, VertexId x) {
  std::vector<EdgePath> out;
  for (VertexId y : c.branch_points) {
    if (y != x) out.push_back(shortest_path(c.core, x, y));
  }
  for (const auto& s : c.segments) {
    if (s.is_loop() && s.x == x) out.push_back(s.path);
  }
  return out;
}

// Based loops meeting cyclically at their common basepoint with no
// cancellation at either junction.
inline bool cyclic_concat_reduced(const EdgePath& a, const EdgePath& b) {
  return !a.empty() && !b.empty() && a.back() != b.front().reverse() && b.back() != a.front().reverse();
}

inline std::string incidence_option(const CoreDecomposition& c, VertexId x, const EdgePath& p, const EdgePath& p2) {
  const EdgePath p1 = reverse(p);  // ends at x
  if (is_reduced(then(p1, p2))) return "geodesic";
  const DistinguishedPair gp = distinguishing_pair(c, p1);
  const DistinguishedPair ep = distinguishing_pair(c, p2);
  const std::size_t k = p1.size();
  EdgePath g2x{x, x, {}};
  g2x.steps.assign(gp.gamma2.steps.begin() + static_cast<std::ptrdiff_t>(k), gp.gamma2.steps.end());
  g2x.steps.insert(g2x.steps.end(), gp.gamma2.steps.begin(), gp.gamma2.steps.begin() + static_cast<std::ptrdiff_t>(k));
  if (cyclic_concat_reduced(g2x, ep.gamma1)) return "a";
  if (cyclic_concat_reduced(g2x, ep.gamma2)) return "b";
  return "none";
}

struct BranchMap {
  std::map<VertexId, VertexId> f;
  std::map<std::pair<VertexId, VertexId>, EdgePath> images;  // shortest path x->y mapped
};

inline BranchMap branch_map(const Basis& b1, const CoreDecomposition& c1, const Basis& b2, const CoreDecomposition& c2,
                            const GroupHom& phi) {
  BranchMap out;
  for (VertexId x : c1.branch_points) {
    std::optional<VertexId> fx;
    for (const EdgePath& p : paths_from(c1, x)) {
      const EdgePath nu = phi_path(b1, b2, c2, phi, distinguishing_pair(c1, p));
      if (fx && *fx != nu.start) {
        throw Rejection("branch-map-inconsistent", "paths out of " + std::to_string(x) + " start at " +
                                                       std::to_string(*fx) + " and " + std::to_string(nu.start));
      }
      fx = nu.start;
      if (!p.is_closed()) out.images[{x, p.end}] = nu;
    }
    if (!fx) throw Rejection("branch-map-inconsistent", "no distinguished path out of " + std::to_string(x));
    out.f[x] = *fx;
  }
  for (const auto& [key, nu] : out.images) {
    if (nu.end != out.f.at(key.second)) {
      throw Rejection("branch-map-inconsistent", "image of a path " + std::to_string(key.first) + "->" +
                                                     std::to_string(key.second) + " ends at " + std::to_string(nu.end) +
                                                     " instead of " + std::to_string(out.f.at(key.second)));
    }
  }
  return out;
}

}  // namespace detail

// Branch-point map with its distance ledger. Bijectivity is certified with
// the map built from the inverse hom.
inline IsometryCertificate branch_isometry(const Basis& b1, const CoreDecomposition& c1, const Basis& b2,
                                           const CoreDecomposition& c2, const HomPair& phi) {
  if (c1.branch_points.size() != c2.branch_points.size()) {
    throw Rejection("not-bijective", std::to_string(c1.branch_points.size()) + " vs " +
                                         std::to_string(c2.branch_points.size()) + " branch points");
  }
  IsometryCertificate cert;
  const auto fwd = detail::branch_map(b1, c1, b2, c2, phi.forward);
  cert.branch_map = fwd.f;
  for (std::size_t i = 0; i < c1.branch_points.size(); ++i) {
    for (std::size_t j = i + 1; j < c1.branch_points.size(); ++j) {
      const VertexId x = c1.branch_points[i];
      const VertexId y = c1.branch_points[j];
      DistanceRow row{x, y, distance(c1.core, x, y), distance(c2.core, fwd.f.at(x), fwd.f.at(y))};
      const bool equal = row.d1 == row.d2;
      cert.distances.push_back(row);
      if (!equal) {
        throw Rejection("distance-mismatch", std::to_string(x) + " " + std::to_string(y) + " " + row.d1.str() + " " +
                                                 row.d2.str());
      }
    }
  }
  const auto back = detail::branch_map(b2, c2, b1, c1, phi.inverse);
  for (const auto& [x, fx] : fwd.f) {
    if (back.f.at(fx) != x) {
      throw Rejection("not-bijective", "inverse map sends " + std::to_string(fx) + " to " +
                                           std::to_string(back.f.at(fx)) + ", not " + std::to_string(x));
    }
  }
  for (const auto& [y, gy] : back.f) {
    if (fwd.f.at(gy) != y) throw Rejection("not-bijective", "branch point " + std::to_string(y) + " is missed");
  }
  for (VertexId x : c1.branch_points) {
    const auto ps = detail::paths_from(c1, x);
    if (ps.size() >= 2) {
      cert.incidence.push_back(std::to_string(x) + " " + detail::incidence_option(c1, x, ps[0], ps[1]));
    }
  }
  return cert;
}

// Matches every source segment with a target segment through phi_path.
inline void extend_isometry(const Basis& b1, const CoreDecomposition& c1, const Basis& b2, const CoreDecomposition& c2,
                            const GroupHom& phi, IsometryCertificate& cert) {
  if (c1.segments.size() != c2.segments.size()) {
    throw Rejection("not-bijective", std::to_string(c1.segments.size()) + " vs " + std::to_string(c2.segments.size()) +
                                         " segments");
  }
  std::vector<bool> hit(c2.segments.size(), false);
  cert.segments.clear();
  for (std::size_t i = 0; i < c1.segments.size(); ++i) {
    const Segment& s = c1.segments[i];
    const EdgePath nu = phi_path(b1, b2, c2, phi, distinguishing_pair(c1, s.path));
    const auto pos = c2.segment_of.find(nu.front().edge());
    if (pos == c2.segment_of.end()) throw Rejection("segment-unmatched", std::to_string(i));
    const std::size_t j = pos->second.segment;
    const Segment& t = c2.segments[j];
    bool reversed = false;
    if (nu.steps != t.path.steps) {
      if (nu.steps != reverse(t.path).steps) {
        throw Rejection("segment-unmatched", std::to_string(i) + " image " + format_path(nu));
      }
      reversed = true;
    }
    cert.segments.push_back(SegmentMatch{i, j, reversed, s.length, t.length});
    if (s.length != t.length) {
      throw Rejection("segment-length-mismatch", std::to_string(i) + " " + s.length.str() + " " + t.length.str());
    }
    if (nu.start != cert.branch_map.at(s.x) || nu.end != cert.branch_map.at(s.y)) {
      throw Rejection("segment-endpoint-mismatch", std::to_string(i));
    }
    if (hit[j]) throw Rejection("not-bijective", "target segment " + std::to_string(j) + " hit twice");
    hit[j] = true;
  }
}

struct InducedCheck {
  bool ok = false;
  std::optional<GroupWord> tau;
  std::vector<GeneratorRow> rows;
  std::string failure;
};

namespace detail {

// The certificate's map on a core loop at a branch point, segment by segment.
inline std::optional<EdgePath> map_core_loop(const CoreDecomposition& c1, const CoreDecomposition& c2,
                                             const IsometryCertificate& cert, const EdgePath& loop) {
  EdgePath image{cert.branch_map.at(loop.start), cert.branch_map.at(loop.start), {}};
  std::size_t i = 0;
  VertexId at = loop.start;
  while (i < loop.size()) {
    const auto pos = c1.segment_of.find(loop.steps[i].edge());
    if (pos == c1.segment_of.end()) return std::nullopt;
    const Segment& s = c1.segments[pos->second.segment];
    const std::size_t n = s.path.size();
    if (i + n > loop.size()) return std::nullopt;
    const auto here = loop.steps.begin() + static_cast<std::ptrdiff_t>(i);
    bool backward = false;
    if (at == s.x && std::equal(s.path.steps.begin(), s.path.steps.end(), here)) {
      backward = false;
    } else if (const EdgePath r = reverse(s.path); at == s.y && std::equal(r.steps.begin(), r.steps.end(), here)) {
      backward = true;
    } else {
      return std::nullopt;
    }
    const SegmentMatch& m = cert.segments.at(pos->second.segment);
    EdgePath piece = c2.segments.at(m.to).path;
    if (m.reversed != backward) piece = reverse(piece);
    if (piece.start != image.end) return std::nullopt;
    image = then(image, piece);
    at = backward ? s.x : s.y;
    i += n;
  }
  if (image.end != image.start) return std::nullopt;
  return image;
}

inline std::size_t primitive_period(const GroupWord& c) {
  const std::size_t n = c.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d == 0 && rotate_word(c, d) == c) return d;
  }
  return n;
}

}  // namespace detail

// Computes f# from the certificate and checks f#(g) == tau phi(g) tau^-1 for
// every generator, solving for tau unless one is supplied.
inline InducedCheck verify_induces_phi(const Basis& b1, const CoreDecomposition& c1, const Basis& b2,
                                       const CoreDecomposition& c2, const IsometryCertificate& cert,
                                       const GroupHom& phi, const std::optional<GroupWord>& supplied_tau = std::nullopt) {
  InducedCheck out;
  if (c1.branch_points.empty()) {
    // Rank one: every conjugation is trivial.
    out.tau = supplied_tau.value_or(GroupWord{});
    for (std::uint32_t k = 1; k <= b1.rank(); ++k) {
      out.rows.push_back(GeneratorRow{k, apply_hom(phi, GroupWord::generator(k)), apply_hom(phi, GroupWord::generator(k)), true});
    }
    out.ok = true;
    return out;
  }
  const VertexId anchor = c1.branch_points.front();
  const EdgePath alpha1 = shortest_path(b1.graph(), b1.basepoint(), anchor);
  const EdgePath t = shortest_path(b2.graph(), b2.basepoint(), cert.branch_map.at(anchor));
  for (std::uint32_t k = 1; k <= b1.rank(); ++k) {
    const EdgePath m = reduce_path(then(then(reverse(alpha1), b1.generator_loop(k)), alpha1));
    const auto image = detail::map_core_loop(c1, c2, cert, m);
    if (!image) {
      out.failure = "g" + std::to_string(k) + " does not map through the segment correspondence";
      return out;
    }
    out.rows.push_back(GeneratorRow{k, loop_to_word(b2, then(then(t, *image), reverse(t))),
                                    apply_hom(phi, GroupWord::generator(k)), false});
  }
  auto check = [&](const GroupWord& tau) {
    const GroupWord tinv = tau.inverse();
    return std::all_of(out.rows.begin(), out.rows.end(),
                       [&](const GeneratorRow& r) { return r.induced == tau * r.expected * tinv; });
  };
  std::optional<GroupWord> tau;
  if (supplied_tau) {
    if (check(*supplied_tau)) tau = free_reduce(*supplied_tau);
  } else if (!out.rows.empty()) {
    const WordConjugacy x = cyclically_reduce_word(out.rows.front().induced);
    const WordConjugacy y = cyclically_reduce_word(out.rows.front().expected);
    const std::size_t n = y.core.size();
    std::size_t total = 0;
    for (const auto& r : out.rows) total += r.induced.size() + r.expected.size();
    const std::size_t period = std::max<std::size_t>(1, detail::primitive_period(y.core));
    const int reach = static_cast<int>(2 + total / period);
    const GroupWord root(std::vector<Letter>(y.core.letters().begin(),
                                             y.core.letters().begin() + static_cast<std::ptrdiff_t>(std::min(period, n))));
    const GroupWord z = y.conjugator * root * y.conjugator.inverse();
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1) && !tau; ++i) {
      if (rotate_word(y.core, i) != x.core) continue;
      const GroupWord r(std::vector<Letter>(y.core.letters().begin(), y.core.letters().begin() + static_cast<std::ptrdiff_t>(i)));
      const GroupWord tau0 = x.conjugator * r.inverse() * y.conjugator.inverse();
      for (int m = 0; m <= reach && !tau; ++m) {
        for (int sign : {1, -1}) {
          if (m == 0 && sign < 0) continue;
          const GroupWord cand = tau0 * power(z, sign * m);
          if (check(cand)) {
            tau = cand;
            break;
          }
        }
      }
    }
  } else {
    tau = GroupWord{};
  }
  const GroupWord use = tau.value_or(GroupWord{});
  for (auto& r : out.rows) r.ok = tau && r.induced == use * r.expected * use.inverse();
  out.tau = tau;
  out.ok = tau.has_value();
  if (!out.ok) {
    for (const auto& r : out.rows) {
      if (!r.ok) {
        out.failure = "g" + std::to_string(r.generator) + " induced [" + format_word(r.induced) + "] vs phi [" +
                      format_word(r.expected) + "]";
        break;
      }
    }
    if (out.failure.empty()) out.failure = "no conjugating word found";
  }
  return out;
}

struct ReconstructOptions {
  std::size_t sweep_length = 4;           // up-front spectrum check, 0 disables
  std::size_t sweep_word_limit = 300'000;  // shorten the sweep beyond this many words
};

// Full pipeline: cores, hom certification, spectrum sweep, circle case, then
// branch map, segment matching and the induced-hom check.
inline IsometryCertificate reconstruct(const MetricGraph& g1, const MetricGraph& g2, const HomPair& phi,
                                       const ReconstructOptions& options = {}) {
  IsometryCertificate cert;
  try {
    const Basis b1 = spanning_tree(g1);
    const Basis b2 = spanning_tree(g2);
    const CoreDecomposition c1 = compute_core(g1);
    const CoreDecomposition c2 = compute_core(g2);
    if (c1.empty() || c2.empty()) {
      throw Rejection("empty-hull", c1.empty() ? "first graph is contractible" : "second graph is contractible");
    }
    if (!phi.has_inverse) throw Rejection("not-isomorphism", "no inverse supplied");
    if (phi.forward.source_rank() != b1.rank() || phi.inverse.source_rank() != b2.rank()) {
      throw Rejection("not-isomorphism", "ranks " + std::to_string(b1.rank()) + " and " + std::to_string(b2.rank()) +
                                             " do not match the hom (" + std::to_string(phi.forward.source_rank()) +
                                             ", " + std::to_string(phi.inverse.source_rank()) + " generators)");
    }
    if (!certifies_isomorphism(phi.forward, phi.inverse)) {
      throw Rejection("not-isomorphism", "compositions are not the identity on generators");
    }

    std::size_t len = options.sweep_length;
    while (len > 1 && reduced_word_count(b1.rank(), len) > options.sweep_word_limit) --len;
    cert.sweep_length = len;
    if (len > 0) {
      for_each_reduced_word(b1.rank(), len, [&](const GroupWord& w) {
        const Rational l1 = marked_length(b1, w);
        const Rational l2 = marked_length(b2, apply_hom(phi.forward, w));
        if (l1 != l2) throw Rejection("spectrum-mismatch", format_word(w) + " l1=" + l1.str() + " l2=" + l2.str());
      });
    }

    const auto r1 = is_circle(c1);
    const auto r2 = is_circle(c2);
    if (r1 || r2) {
      cert.circle = true;
      cert.circumference1 = r1;
      cert.circumference2 = r2;
      if (!r1 || !r2) throw Rejection("circle-mismatch", r1 ? "only the first core is a circle" : "only the second core is a circle");
      if (*r1 != *r2) throw Rejection("circumference-mismatch", r1->str() + " " + r2->str());
      const InducedCheck induced = verify_induces_phi(b1, c1, b2, c2, cert, phi.forward);
      cert.tau = induced.tau;
      cert.generators = induced.rows;
      cert.accepted = true;
      return cert;
    }

    IsometryCertificate partial = branch_isometry(b1, c1, b2, c2, phi);
    partial.sweep_length = cert.sweep_length;
    cert = std::move(partial);
    extend_isometry(b1, c1, b2, c2, phi.forward, cert);
    const InducedCheck induced = verify_induces_phi(b1, c1, b2, c2, cert, phi.forward);
    cert.generators = induced.rows;
    cert.tau = induced.tau;
    if (!induced.ok) throw Rejection("induced-hom-mismatch", induced.failure);
    cert.accepted = true;
  } catch (const Rejection& r) {
    cert.accepted = false;
    cert.code = r.code();
    cert.detail = r.detail();
  }
  return cert;
}

inline std::string format_certificate(const IsometryCertificate& cert) {
  std::ostringstream out;
  if (cert.sweep_length > 0) out << "sweep " << cert.sweep_length << '\n';
  if (cert.circle) {
    out << "circle " << (cert.circumference1 ? cert.circumference1->str() : "-") << ' '
        << (cert.circumference2 ? cert.circumference2->str() : "-") << '\n';
  }
  for (const auto& [x, y] : cert.branch_map) out << "branch " << x << " -> " << y << '\n';
  for (const auto& d : cert.distances) out << "distance " << d.x << ' ' << d.y << ' ' << d.d1 << ' ' << d.d2 << '\n';
  for (const auto& s : cert.incidence) out << "incidence " << s << '\n';
  for (const auto& s : cert.segments) {
    out << "segment " << s.from << " -> " << s.to << (s.reversed ? " reversed" : "") << '\n';
  }
  for (const auto& s : cert.segments) out << "length " << s.from << ' ' << s.length1 << ' ' << s.length2 << '\n';
  for (const auto& g : cert.generators) {
    out << "generator g" << g.generator << " induced [" << format_word(g.induced) << "] phi [" << format_word(g.expected)
        << "] " << (g.ok ? "ok" : "fail") << '\n';
  }
  if (cert.tau) out << "tau " << format_word(*cert.tau) << '\n';
  if (cert.accepted) {
    out << "verdict ACCEPT\n";
  } else {
    out << "verdict REJECT " << cert.code << (cert.detail.empty() ? "" : " " + cert.detail) << '\n';
  }
  return out.str();
}

}  // namespace mls
