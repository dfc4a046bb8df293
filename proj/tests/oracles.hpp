#pragma once

// Test-only reference computations. Nothing here calls into the quantile
// sweep, so these stay independent of the code they check.

#include "lsnw/estimator.hpp"
#include "lsnw/simulate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace lsnw::oracle {

//! Min-cost flow transport between integer-mass measures with cost |x - y|.
//! Successive shortest paths with Bellman-Ford; fine for tiny instances.
inline double transport_cost(const std::vector<double>& xs,
                             const std::vector<int>& supply,
                             const std::vector<double>& ys,
                             const std::vector<int>& demand)
{
  const int n = static_cast<int>(xs.size());
  const int m = static_cast<int>(ys.size());
  const int src = n + m;
  const int snk = n + m + 1;
  const int nodes = n + m + 2;

  struct Edge
  {
    int to;
    int cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> g(nodes);
  auto add = [&](int a, int b, int cap, double cost) {
    g[a].push_back({ b, cap, cost, static_cast<int>(g[b].size()) });
    g[b].push_back({ a, 0, -cost, static_cast<int>(g[a].size()) - 1 });
  };
  for (int i = 0; i < n; ++i)
    add(src, i, supply[i], 0.0);
  for (int j = 0; j < m; ++j)
    add(n + j, snk, demand[j], 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      add(i, n + j, std::numeric_limits<int>::max() / 2, std::abs(xs[i] - ys[j]));

  double total = 0.0;
  while (true) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(nodes, -1);
    std::vector<int> prev_edge(nodes, -1);
    dist[src] = 0.0;
    for (int it = 0; it < nodes; ++it) {
      bool changed = false;
      for (int v = 0; v < nodes; ++v) {
        if (!std::isfinite(dist[v]))
          continue;
        for (int e = 0; e < static_cast<int>(g[v].size()); ++e) {
          const auto& ed = g[v][e];
          if (ed.cap > 0 && dist[v] + ed.cost < dist[ed.to] - 1e-15) {
            dist[ed.to] = dist[v] + ed.cost;
            prev_node[ed.to] = v;
            prev_edge[ed.to] = e;
            changed = true;
          }
        }
      }
      if (!changed)
        break;
    }
    if (!std::isfinite(dist[snk]))
      break;
    int push = std::numeric_limits<int>::max();
    for (int v = snk; v != src; v = prev_node[v])
      push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    for (int v = snk; v != src; v = prev_node[v]) {
      auto& ed = g[prev_node[v]][prev_edge[v]];
      ed.cap -= push;
      g[v][ed.rev].cap += push;
    }
    total += push * dist[snk];
  }
  return total;
}

//! Canonical measure with 1..max_support atoms and weights k / 2^bits.
inline DiscreteMeasure random_dyadic_measure(std::mt19937_64& rng,
                                             int max_support,
                                             int bits,
                                             std::vector<int>* units = nullptr)
{
  const int total = 1 << bits;
  std::uniform_int_distribution<int> size_dist(1, max_support);
  const int s = size_dist(rng);
  // Distinct support points on a coarse grid so ties between measures occur.
  std::vector<double> grid;
  for (int k = -10; k <= 10; ++k)
    grid.push_back(0.5 * k);
  std::shuffle(grid.begin(), grid.end(), rng);
  std::vector<double> pts(grid.begin(), grid.begin() + s);
  std::sort(pts.begin(), pts.end());
  // Random composition of `total` into s positive parts.
  std::vector<int> cuts;
  std::vector<int> pool;
  for (int k = 1; k < total; ++k)
    pool.push_back(k);
  std::shuffle(pool.begin(), pool.end(), rng);
  cuts.assign(pool.begin(), pool.begin() + (s - 1));
  cuts.push_back(0);
  cuts.push_back(total);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> u(s);
  DiscreteMeasure m;
  m.support.resize(s);
  m.weights.resize(s);
  for (int i = 0; i < s; ++i) {
    u[i] = cuts[i + 1] - cuts[i];
    m.support(i) = pts[i];
    m.weights(i) = static_cast<double>(u[i]) / total;
  }
  if (units)
    *units = u;
  return m;
}

//! Canonical measure with continuous random atoms and Dirichlet-like weights.
inline DiscreteMeasure random_measure(std::mt19937_64& rng, int max_support)
{
  std::uniform_int_distribution<int> size_dist(1, max_support);
  std::normal_distribution<double> atom(0.0, 2.0);
  std::exponential_distribution<double> gamma1(1.0);
  const int s = size_dist(rng);
  Eigen::VectorXd v(s), w(s);
  for (int i = 0; i < s; ++i) {
    v(i) = atom(rng);
    w(i) = gamma1(rng) + 1e-3;
  }
  w /= w.sum();
  return DiscreteMeasure::canonical(v, w);
}

//! W1 as the integral of |F - G| evaluated on a fine merged grid of the
//! step functions, computed by direct evaluation of both CDFs.
inline double w1_by_cdf_evaluation(const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu)
{
  std::vector<double> pts(mu.support.data(), mu.support.data() + mu.size());
  pts.insert(pts.end(), nu.support.data(), nu.support.data() + nu.size());
  std::sort(pts.begin(), pts.end());
  auto cdf = [](const DiscreteMeasure& m, double y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (m.support(i) <= y)
        s += m.weights(i);
    return s;
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    total += (pts[k + 1] - pts[k]) * std::abs(cdf(mu, pts[k]) - cdf(nu, pts[k]));
  return total;
}

// A random estimation problem; kernels drawn from the non-negative families.
struct Instance
{
  Series series;
  LagEmbedding data;
  int t;
  Eigen::VectorXd x;
  KernelSpec k_time;
  KernelSpec k_space;
  double h;
};

inline Instance random_instance(std::mt19937_64& rng)
{
  static const std::array<KernelFamily, 6> fams{
    KernelFamily::Uniform,      KernelFamily::Rectangle, KernelFamily::Triangle,
    KernelFamily::Epanechnikov, KernelFamily::Tricube,   KernelFamily::Gaussian
  };
  std::uniform_int_distribution<int> len(6, 60);
  std::uniform_int_distribution<int> dd(1, 2);
  std::uniform_int_distribution<int> fam(0, 5);
  std::uniform_real_distribution<double> hh(0.2, 2.0);
  std::normal_distribution<double> z(0.0, 1.0);

  const int T = len(rng);
  Eigen::VectorXd v(T);
  for (int i = 0; i < T; ++i)
    v(i) = std::round(4.0 * z(rng)) / 4.0; // coarse grid forces ties
  Instance in{ Series(v), {}, 0, {}, KernelSpec(fams[fam(rng)]),
               KernelSpec(fams[fam(rng)]), hh(rng) };
  const int d = dd(rng);
  in.data = lag_embed(in.series, d);
  in.t = std::uniform_int_distribution<int>(1, T)(rng);
  in.x.resize(d);
  for (int j = 0; j < d; ++j)
    in.x(j) = z(rng);
  return in;
}

} // namespace lsnw::oracle
