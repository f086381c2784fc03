#include "seamix/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <string>

namespace seamix {

double edge_weight(double a_ij, double b_ij, double a_kl, double b_kl) {
  return std::abs(a_ij - b_ij) + std::abs(a_kl - b_kl);
}

namespace {

struct EdgeSpec {
  std::int32_t u, v;
  double cap_uv, cap_vu;
};

FlowNetwork assemble(std::size_t frames, std::size_t bins,
                     const std::vector<EdgeSpec>& edges, double terminal_cap) {
  FlowNetwork net;
  net.frames = frames;
  net.bins = bins;
  net.source = static_cast<std::int32_t>(frames * bins);
  net.sink = net.source + 1;
  net.terminal_cap = terminal_cap;

  const std::size_t nodes = net.node_count();
  std::vector<std::int32_t> degree(nodes, 0);
  for (const auto& e : edges) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  net.first_arc.resize(nodes + 1);
  net.first_arc[0] = 0;
  for (std::size_t i = 0; i < nodes; ++i) net.first_arc[i + 1] = net.first_arc[i] + degree[i];

  const std::size_t arc_count = static_cast<std::size_t>(net.first_arc[nodes]);
  net.arc_head.resize(arc_count);
  net.arc_rev.resize(arc_count);
  net.arc_cap.resize(arc_count);

  std::vector<std::int32_t> next(net.first_arc.begin(), net.first_arc.end() - 1);
  for (const auto& e : edges) {
    const std::int32_t a = next[static_cast<std::size_t>(e.u)]++;
    const std::int32_t b = next[static_cast<std::size_t>(e.v)]++;
    net.arc_head[a] = e.v;
    net.arc_cap[a] = e.cap_uv;
    net.arc_rev[a] = b;
    net.arc_head[b] = e.u;
    net.arc_cap[b] = e.cap_vu;
    net.arc_rev[b] = a;
  }
  return net;
}

}  // namespace

FlowNetwork build_grid_network(std::size_t frames, std::size_t bins,
                               const std::vector<double>& time_caps,
                               const std::vector<double>& freq_caps,
                               double terminal_cap) {
  if (frames < 2) throw Error(errc::too_short, "grid needs at least 2 frames");
  if (bins < 1) throw Error(errc::shape, "grid needs at least 1 bin");
  if (time_caps.size() != (frames - 1) * bins || freq_caps.size() != frames * (bins - 1)) {
    throw Error(errc::shape, "capacity matrices do not match the grid dimensions");
  }

  double total = 0.0;
  for (double c : time_caps) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(errc::range, "capacities must be finite and non-negative");
    total += c;
  }
  for (double c : freq_caps) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(errc::range, "capacities must be finite and non-negative");
    total += c;
  }
  if (terminal_cap <= 0.0) terminal_cap = 1.0 + total;

  std::vector<EdgeSpec> edges;
  edges.reserve(time_caps.size() + freq_caps.size() + 2 * bins);
  const auto node = [bins](std::size_t t, std::size_t b) {
    return static_cast<std::int32_t>(t * bins + b);
  };
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < bins; ++b) {
      if (t + 1 < frames) {
        const double c = time_caps[t * bins + b];
        edges.push_back({node(t, b), node(t + 1, b), c, c});
      }
      if (b + 1 < bins) {
        const double c = freq_caps[t * (bins - 1) + b];
        edges.push_back({node(t, b), node(t, b + 1), c, c});
      }
    }
  }
  const auto source = static_cast<std::int32_t>(frames * bins);
  const auto sink = source + 1;
  for (std::size_t b = 0; b < bins; ++b) {
    edges.push_back({source, node(0, b), terminal_cap, 0.0});
  }
  for (std::size_t b = 0; b < bins; ++b) {
    edges.push_back({node(frames - 1, b), sink, terminal_cap, 0.0});
  }
  return assemble(frames, bins, edges, terminal_cap);
}

// Weights below this are numeric noise (near-identical cells), not musical
// difference. Flooring them to zero keeps the solver off the pathological
// regime where millions of arcs carry epsilon capacities that each need
// their own augmentation.
constexpr double kCapacityNoiseFloor = 1e-6;

FlowNetwork build_grid_graph(const DbSpectrogram& db_a, const DbSpectrogram& db_b) {
  if (db_a.frames != db_b.frames || db_a.bins != db_b.bins) {
    throw Error(errc::shape, "segment shapes differ");
  }
  if (db_a.frames < 2) throw Error(errc::too_short, "need at least 2 overlap frames");

  const auto weight = [&](std::size_t t0, std::size_t b0, std::size_t t1, std::size_t b1) {
    const double w = edge_weight(db_a.at(t0, b0), db_b.at(t0, b0), db_a.at(t1, b1), db_b.at(t1, b1));
    return w < kCapacityNoiseFloor ? 0.0 : w;
  };

  const std::size_t frames = db_a.frames, bins = db_a.bins;
  std::vector<double> time_caps((frames - 1) * bins);
  std::vector<double> freq_caps(frames * (bins - 1));
  for (std::size_t t = 0; t + 1 < frames; ++t) {
    for (std::size_t b = 0; b < bins; ++b) {
      time_caps[t * bins + b] = weight(t, b, t + 1, b);
    }
  }
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b + 1 < bins; ++b) {
      freq_caps[t * (bins - 1) + b] = weight(t, b, t, b + 1);
    }
  }
  return build_grid_network(frames, bins, time_caps, freq_caps);
}

namespace {

// Boykov-Kolmogorov max flow: two search trees rooted at the terminals with
// grow / augment / adopt phases. Active nodes and orphans are FIFO queues,
// arcs are scanned in index order, so the solve is fully deterministic.
class BkSolver {
 public:
  explicit BkSolver(const FlowNetwork& net)
      : net_(net),
        res_(net.arc_cap),
        tree_(net.node_count(), kFree),
        parent_(net.node_count(), -1),
        dist_(net.node_count(), 0),
        stamp_(net.node_count(), 0),
        in_active_(net.node_count(), 0) {}

  double solve() {
    tree_[net_.source] = kSource;
    tree_[net_.sink] = kSink;
    stamp_[net_.source] = stamp_[net_.sink] = time_;
    push_active(net_.source);
    push_active(net_.sink);

    while (true) {
      const std::int32_t connector = grow();
      if (connector < 0) break;
      ++time_;
      augment(connector);
      adopt();
    }
    return flow_;
  }

  /// Source-reachable set of the residual graph, grid nodes only.
  std::vector<CutSide> reachable_labels() const {
    std::vector<std::uint8_t> seen(net_.node_count(), 0);
    std::deque<std::int32_t> queue{net_.source};
    seen[net_.source] = 1;
    while (!queue.empty()) {
      const std::int32_t u = queue.front();
      queue.pop_front();
      for (std::int32_t a = net_.first_arc[u]; a < net_.first_arc[u + 1]; ++a) {
        const std::int32_t v = net_.arc_head[a];
        if (!seen[v] && res_[a] > 0.0) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    std::vector<CutSide> labels(net_.frames * net_.bins);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = seen[i] ? CutSide::source : CutSide::sink;
    }
    return labels;
  }

 private:
  static constexpr std::uint8_t kFree = 0, kSource = 1, kSink = 2;

  std::int32_t tail_of(std::int32_t arc) const { return net_.arc_head[net_.arc_rev[arc]]; }

  void push_active(std::int32_t v) {
    if (in_active_[v]) {
      if (v == last_grow_) last_grow_ = -1;
      return;
    }
    in_active_[v] = 1;
    active_.push_back(v);
  }

  std::int32_t next_active() {
    while (!active_.empty()) {
      const std::int32_t v = active_.front();
      if (parent_[v] < 0 && v != net_.source && v != net_.sink) {
        active_.pop_front();
        in_active_[v] = 0;
        if (v == last_grow_) last_grow_ = -1;
        continue;
      }
      return v;
    }
    return -1;
  }

  void finish_front(std::int32_t v) {
    active_.pop_front();
    in_active_[v] = 0;
    if (v == last_grow_) last_grow_ = -1;
  }

  bool closer_to_terminal(std::int32_t via, std::int32_t node) const {
    return stamp_[node] <= stamp_[via] && dist_[node] > dist_[via] + 1;
  }

  // Walks the parent chain of v; true when it ends at the tree's terminal.
  // Distances and timestamps along the walk are memoized for this phase.
  bool origin_valid(std::int32_t v, std::uint8_t kind) {
    const std::int32_t terminal = kind == kSource ? net_.source : net_.sink;
    path_.clear();
    std::int32_t cur = v;
    while (stamp_[cur] != time_) {
      path_.push_back(cur);
      const std::int32_t pa = parent_[cur];
      if (pa < 0) {
        if (cur != terminal) return false;
        stamp_[cur] = time_;
        dist_[cur] = 0;
        break;
      }
      cur = kind == kSource ? tail_of(pa) : net_.arc_head[pa];
    }
    std::int32_t d = dist_[cur];
    for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
      stamp_[*it] = time_;
      dist_[*it] = ++d;
    }
    return true;
  }

  // Expands both trees from the active nodes. Returns an arc with residual
  // capacity leading from the source tree into the sink tree, or -1 when no
  // augmenting path remains.
  std::int32_t grow() {
    std::int32_t u;
    while ((u = next_active()) >= 0) {
      if (u != last_grow_) {
        last_grow_ = u;
        grow_arc_ = net_.first_arc[u];
      }
      const std::int32_t end = net_.first_arc[u + 1];
      if (tree_[u] == kSource) {
        for (; grow_arc_ < end; ++grow_arc_) {
          const std::int32_t a = grow_arc_;
          if (res_[a] <= 0.0) continue;
          const std::int32_t v = net_.arc_head[a];
          if (tree_[v] == kFree) {
            tree_[v] = kSource;
            parent_[v] = a;
            dist_[v] = dist_[u] + 1;
            stamp_[v] = stamp_[u];
            push_active(v);
          } else if (tree_[v] == kSource) {
            if (closer_to_terminal(u, v)) {
              parent_[v] = a;
              dist_[v] = dist_[u] + 1;
              stamp_[v] = stamp_[u];
            }
          } else {
            return a;  // v sits in the sink tree: a is the connecting arc
          }
        }
      } else {
        for (; grow_arc_ < end; ++grow_arc_) {
          const std::int32_t a = grow_arc_;
          const std::int32_t ra = net_.arc_rev[a];  // arc v -> u
          if (res_[ra] <= 0.0) continue;
          const std::int32_t v = net_.arc_head[a];
          if (tree_[v] == kFree) {
            tree_[v] = kSink;
            parent_[v] = ra;
            dist_[v] = dist_[u] + 1;
            stamp_[v] = stamp_[u];
            push_active(v);
          } else if (tree_[v] == kSink) {
            if (closer_to_terminal(u, v)) {
              parent_[v] = ra;
              dist_[v] = dist_[u] + 1;
              stamp_[v] = stamp_[u];
            }
          } else {
            return ra;  // v is source-side: v -> u crosses the trees
          }
        }
      }
      finish_front(u);
    }
    return -1;
  }

  // Pushes the bottleneck along source path + connector + sink path.
  // Saturated parent arcs orphan their children, queued FIFO.
  void augment(std::int32_t connector) {
    double bottleneck = res_[connector];
    for (std::int32_t cur = tail_of(connector); parent_[cur] >= 0;) {
      const std::int32_t pa = parent_[cur];
      bottleneck = std::min(bottleneck, res_[pa]);
      cur = tail_of(pa);
    }
    for (std::int32_t cur = net_.arc_head[connector]; parent_[cur] >= 0;) {
      const std::int32_t pa = parent_[cur];
      bottleneck = std::min(bottleneck, res_[pa]);
      cur = net_.arc_head[pa];
    }

    res_[connector] -= bottleneck;
    res_[net_.arc_rev[connector]] += bottleneck;
    // Orphans are queued nearest-terminal first; adopting those first keeps
    // their detached descendants adoptable instead of cascading.
    scratch_.clear();
    for (std::int32_t cur = tail_of(connector); parent_[cur] >= 0;) {
      const std::int32_t pa = parent_[cur];
      res_[pa] -= bottleneck;
      res_[net_.arc_rev[pa]] += bottleneck;
      const std::int32_t next = tail_of(pa);
      if (res_[pa] == 0.0) {
        parent_[cur] = -1;
        scratch_.push_back(cur);
      }
      cur = next;
    }
    for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) orphans_.push_back(*it);
    scratch_.clear();
    for (std::int32_t cur = net_.arc_head[connector]; parent_[cur] >= 0;) {
      const std::int32_t pa = parent_[cur];
      res_[pa] -= bottleneck;
      res_[net_.arc_rev[pa]] += bottleneck;
      const std::int32_t next = net_.arc_head[pa];
      if (res_[pa] == 0.0) {
        parent_[cur] = -1;
        scratch_.push_back(cur);
      }
      cur = next;
    }
    for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) orphans_.push_back(*it);
    flow_ += bottleneck;
  }

  // Finds new valid parents for orphans, or detaches them and reactivates
  // their neighborhood.
  void adopt() {
    while (!orphans_.empty()) {
      const std::int32_t u = orphans_.front();
      orphans_.pop_front();
      const std::uint8_t kind = tree_[u];
      const std::int32_t begin = net_.first_arc[u], end = net_.first_arc[u + 1];

      std::int32_t best_arc = -1;
      std::int32_t best_dist = std::numeric_limits<std::int32_t>::max();
      for (std::int32_t a = begin; a < end; ++a) {
        const std::int32_t v = net_.arc_head[a];
        if (tree_[v] != kind) continue;
        const std::int32_t pa = kind == kSource ? net_.arc_rev[a] : a;
        if (res_[pa] <= 0.0) continue;
        if (!origin_valid(v, kind)) continue;
        if (dist_[v] < best_dist) {
          best_dist = dist_[v];
          best_arc = pa;
        }
      }

      if (best_arc >= 0) {
        parent_[u] = best_arc;
        dist_[u] = best_dist + 1;
        stamp_[u] = time_;
        continue;
      }

      const std::int32_t terminal = kind == kSource ? net_.source : net_.sink;
      for (std::int32_t a = begin; a < end; ++a) {
        const std::int32_t v = net_.arc_head[a];
        if (tree_[v] != kind || v == terminal) continue;
        const std::int32_t toward_u = kind == kSource ? net_.arc_rev[a] : a;
        if (res_[toward_u] > 0.0) push_active(v);
        if (parent_[v] >= 0) {
          const std::int32_t v_parent =
              kind == kSource ? tail_of(parent_[v]) : net_.arc_head[parent_[v]];
          if (v_parent == u) {
            parent_[v] = -1;
            orphans_.push_back(v);
          }
        }
      }
      tree_[u] = kFree;
    }
  }

  const FlowNetwork& net_;
  std::vector<double> res_;
  std::vector<std::uint8_t> tree_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> dist_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> in_active_;
  std::deque<std::int32_t> active_;
  std::deque<std::int32_t> orphans_;
  std::vector<std::int32_t> path_;
  std::vector<std::int32_t> scratch_;
  std::int32_t last_grow_ = -1;
  std::int32_t grow_arc_ = 0;
  std::uint32_t time_ = 1;
  double flow_ = 0.0;
};

}  // namespace

CutLabeling max_flow_min_cut(const FlowNetwork& net) {
  BkSolver solver(net);
  CutLabeling labels;
  labels.frames = net.frames;
  labels.bins = net.bins;
  labels.cut_cost = solver.solve();
  labels.labels = solver.reachable_labels();
  return labels;
}

double labeling_boundary_cost(const FlowNetwork& net, const CutLabeling& labels) {
  const auto side = [&](std::int32_t node) {
    if (node == net.source) return CutSide::source;
    if (node == net.sink) return CutSide::sink;
    return labels.labels[static_cast<std::size_t>(node)];
  };

  double cost = 0.0;
  const std::size_t nodes = net.node_count();
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::int32_t a = net.first_arc[u]; a < net.first_arc[u + 1]; ++a) {
      if (a >= net.arc_rev[a]) continue;  // visit each pair once
      const std::int32_t v = net.arc_head[a];
      if (side(static_cast<std::int32_t>(u)) == side(v)) continue;
      cost += std::max(net.arc_cap[a], net.arc_cap[net.arc_rev[a]]);
    }
  }
  return cost;
}

Seam extract_seam(const CutLabeling& labels) {
  Seam seam;
  seam.flips_per_bin.resize(labels.bins);
  for (std::size_t b = 0; b < labels.bins; ++b) {
    auto& flips = seam.flips_per_bin[b];
    for (std::size_t t = 1; t < labels.frames; ++t) {
      if (labels.at(t, b) != labels.at(t - 1, b)) flips.push_back(static_cast<int>(t));
    }
  }
  return seam;
}

void dump_network(const FlowNetwork& net, std::ostream& out) {
  const std::size_t nodes = net.node_count();
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::int32_t a = net.first_arc[u]; a < net.first_arc[u + 1]; ++a) {
      const std::int32_t r = net.arc_rev[a];
      if (a >= r) continue;
      // print the direction that carries the capacity
      if (net.arc_cap[a] == 0.0 && net.arc_cap[r] > 0.0) {
        out << net.arc_head[a] << ' ' << u << ' ' << net.arc_cap[r] << '\n';
      } else {
        out << u << ' ' << net.arc_head[a] << ' ' << net.arc_cap[a] << '\n';
      }
    }
  }
}

void dump_labeling(const CutLabeling& labels, std::ostream& out) {
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out << i << ' ' << (labels.labels[i] == CutSide::source ? 0 : 1) << '\n';
  }
}

}  // namespace seamix
