#ifndef SEAMIX_MINCUT_HPP
#define SEAMIX_MINCUT_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "seamix/spectral.hpp"

namespace seamix {

/// Capacity grid over the overlap region plus the two terminals. Grid node
/// (t, b) has id t * bins + b; the source and sink follow. Each undirected
/// grid edge is stored as two antiparallel residual arcs of equal capacity;
/// terminal links are directed (reverse capacity zero).
struct FlowNetwork {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::int32_t source = 0;
  std::int32_t sink = 0;
  double terminal_cap = 0.0;

  std::vector<std::int32_t> first_arc;  // size node_count() + 1
  std::vector<std::int32_t> arc_head;
  std::vector<std::int32_t> arc_rev;
  std::vector<double> arc_cap;

  std::size_t node_count() const { return frames * bins + 2; }
  std::int32_t grid_node(std::size_t frame, std::size_t bin) const {
    return static_cast<std::int32_t>(frame * bins + bin);
  }
};

enum class CutSide : std::uint8_t { source, sink };

/// Binary partition of the grid after the max-flow solve. source means the
/// node keeps track A's content, sink means track B's.
struct CutLabeling {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<CutSide> labels;  // row-major, frames x bins
  double cut_cost = 0.0;

  CutSide at(std::size_t frame, std::size_t bin) const { return labels[frame * bins + bin]; }
};

/// Per-bin ordered frame indices where the labeling flips along the time
/// axis. Rows start on the source side and end on the sink side, so each
/// list has odd length; the first entry is the bin's primary transition.
struct Seam {
  std::vector<std::vector<int>> flips_per_bin;  // outer index = bin
};

/// Capacity of the grid edge between time-frequency cells (i,j) and (k,l):
/// |A_ij - B_ij| + |A_kl - B_kl|.
double edge_weight(double a_ij, double b_ij, double a_kl, double b_kl);

/// Assembles the 4-connected grid network from explicit capacity matrices.
/// time_caps is (frames-1) x bins (edge (t,b)-(t+1,b)), freq_caps is
/// frames x (bins-1) (edge (t,b)-(t,b+1)). terminal_cap <= 0 selects the
/// default 1 + sum of all grid capacities.
FlowNetwork build_grid_network(std::size_t frames, std::size_t bins,
                               const std::vector<double>& time_caps,
                               const std::vector<double>& freq_caps,
                               double terminal_cap = 0.0);

/// Builds the transition network from the two dB segment matrices: one node
/// per cell, edge_weight on every 4-neighbor pair, source anchored to frame
/// 0 and sink to the last frame.
FlowNetwork build_grid_graph(const DbSpectrogram& db_a, const DbSpectrogram& db_b);

/// Boykov-Kolmogorov max-flow. Labels are the source-reachable set of the
/// residual graph; cut_cost is the max-flow value. The input network is not
/// modified.
CutLabeling max_flow_min_cut(const FlowNetwork& net);

/// Sum of capacities of edges whose endpoints carry different labels,
/// counting each undirected edge once. Terminal links use the labels
/// source/sink for the terminals themselves.
double labeling_boundary_cost(const FlowNetwork& net, const CutLabeling& labels);

Seam extract_seam(const CutLabeling& labels);

/// Line-oriented debug dump, one edge per line: "u v cap". Arc pairs are
/// collapsed to a single undirected line; terminal links appear once.
void dump_network(const FlowNetwork& net, std::ostream& out);

/// One line per grid node: "node_id label" with 0 = source side, 1 = sink.
void dump_labeling(const CutLabeling& labels, std::ostream& out);

}  // namespace seamix

#endif  // SEAMIX_MINCUT_HPP
