#pragma once

#include <map>
#include <utility>
#include <vector>

namespace stdg {

// One time slab I_n = (t_start, t_end). Elements without an entry in
// local_partitions use the whole slab as their single sub-step.
struct TimeSlab {
  int index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  // element id -> strictly increasing breakpoints, first == t_start,
  // last == t_end
  std::map<int, std::vector<double>> local_partitions;

  double tau() const { return t_end - t_start; }
  int substeps(int element_id) const {
    auto it = local_partitions.find(element_id);
    return it == local_partitions.end() ? 1 : int(it->second.size()) - 1;
  }
  std::pair<double, double> substep_interval(int element_id, int j) const {
    auto it = local_partitions.find(element_id);
    if (it == local_partitions.end()) return {t_start, t_end};
    return {it->second[j], it->second[j + 1]};
  }
  const std::vector<double>* breakpoints(int element_id) const {
    auto it = local_partitions.find(element_id);
    return it == local_partitions.end() ? nullptr : &it->second;
  }
};

struct TimeGrid {
  double T = 0.0;
  std::vector<TimeSlab> slabs;

  int num_slabs() const { return int(slabs.size()); }
  // Slab containing t; at an interior node the `minus` flag picks the slab
  // ending there.
  int locate(double t, bool minus) const;
};

// N slabs of length T/N.
TimeGrid uniform_partition(double T, int N);

// Geometrically graded grid towards t=0: t_0 = 0, t_n = sigma^(N-n) * T.
TimeGrid geometric_partition(double T, int N, double sigma);

// Replaces the element's local partition within one slab by k equal
// sub-intervals. num_elements bounds the valid element ids.
TimeGrid refine_locally(TimeGrid grid, int slab_index, int element_id, int k,
                        int num_elements);

}  // namespace stdg
