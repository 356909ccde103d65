#include "stdg/timegrid.hpp"

#include <cmath>
#include <stdexcept>

namespace stdg {

int TimeGrid::locate(double t, bool minus) const {
  if (slabs.empty()) return -1;
  double tol = 1e-12 * T;
  if (t < -tol || t > T + tol) return -1;
  for (const TimeSlab& s : slabs) {
    if (minus ? (t <= s.t_end + tol && t > s.t_start + tol)
              : (t < s.t_end - tol && t >= s.t_start - tol))
      return s.index;
  }
  return minus ? 0 : num_slabs() - 1;  // t pinned to an endpoint of (0,T)
}

TimeGrid uniform_partition(double T, int N) {
  if (!(T > 0.0)) throw std::invalid_argument("uniform_partition: T must be > 0");
  if (N < 1) throw std::invalid_argument("uniform_partition: N must be >= 1");
  TimeGrid grid;
  grid.T = T;
  grid.slabs.resize(N);
  for (int n = 0; n < N; ++n) {
    grid.slabs[n].index = n;
    grid.slabs[n].t_start = T * n / N;
    grid.slabs[n].t_end = (n + 1 == N) ? T : T * (n + 1) / N;
  }
  return grid;
}

TimeGrid geometric_partition(double T, int N, double sigma) {
  if (!(T > 0.0)) throw std::invalid_argument("geometric_partition: T must be > 0");
  if (N < 1) throw std::invalid_argument("geometric_partition: N must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("geometric_partition: sigma must be in (0,1)");
  TimeGrid grid;
  grid.T = T;
  grid.slabs.resize(N);
  double prev = 0.0;
  for (int n = 1; n <= N; ++n) {
    double t = (n == N) ? T : std::pow(sigma, N - n) * T;
    grid.slabs[n - 1].index = n - 1;
    grid.slabs[n - 1].t_start = prev;
    grid.slabs[n - 1].t_end = t;
    prev = t;
  }
  return grid;
}

TimeGrid refine_locally(TimeGrid grid, int slab_index, int element_id, int k,
                        int num_elements) {
  if (k < 2) throw std::invalid_argument("refine_locally: k must be >= 2");
  if (slab_index < 0 || slab_index >= grid.num_slabs())
    throw std::invalid_argument("refine_locally: unknown slab index");
  if (element_id < 0 || element_id >= num_elements)
    throw std::invalid_argument("refine_locally: unknown element id");
  TimeSlab& slab = grid.slabs[slab_index];
  std::vector<double> pts(k + 1);
  for (int j = 0; j <= k; ++j)
    pts[j] = (j == k) ? slab.t_end : slab.t_start + slab.tau() * j / k;
  slab.local_partitions[element_id] = std::move(pts);  // replacement semantics
  return grid;
}

}  // namespace stdg
