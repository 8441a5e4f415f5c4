#include "katolab/error.hpp"
#include "katolab/manifold.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace katolab {

ScalarField geodesic_distance(const DiscreteManifold& m, int source) {
  const int n = m.vertexCount();
  if (source < 0 || source >= n) throw InputError("geodesic source vertex out of range");
  constexpr double inf = std::numeric_limits<double>::infinity();
  ScalarField dist = ScalarField::Constant(n, inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& nb : m.edgeGraph()[v]) {
      const double cand = d + nb.length;
      if (cand < dist[nb.vertex]) {
        dist[nb.vertex] = cand;
        queue.emplace(cand, nb.vertex);
      }
    }
  }
  if (!dist.allFinite())
    throw MeshError(MeshError::Kind::Disconnected, "mesh is disconnected: some vertices unreachable from " +
                                                       std::to_string(source));
  return dist;
}

std::vector<int> farthest_point_samples(const DiscreteManifold& m, int count) {
  count = std::clamp(count, 1, m.vertexCount());
  std::vector<int> samples{0};
  ScalarField nearest = geodesic_distance(m, 0);
  while (static_cast<int>(samples.size()) < count) {
    Eigen::Index next = 0;
    if (nearest.maxCoeff(&next) <= 0.0) break;
    samples.push_back(static_cast<int>(next));
    nearest = nearest.cwiseMin(geodesic_distance(m, static_cast<int>(next)));
  }
  return samples;
}

double diameter(const DiscreteManifold& m) {
  double best = 0.0;
  for (int s : farthest_point_samples(m, 16)) best = std::max(best, geodesic_distance(m, s).maxCoeff());
  return best;
}

} // namespace katolab
