#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace egocap {

// Gauss-Legendre nodes and weights remapped to [0, 1].
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};

inline Quadrature make_gauss_legendre(int n) {
  Quadrature q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Root of P_n by Newton from the Chebyshev-like initial guess.
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double step = p1 / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // Fill in ascending node order (the Newton guesses come out descending).
    q.x[n - 1 - i] = 0.5 * (1.0 + xi);
    q.w[n - 1 - i] = 1.0 / ((1.0 - xi * xi) * dp * dp);
  }
  return q;
}

inline const Quadrature& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Quadrature> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace egocap
