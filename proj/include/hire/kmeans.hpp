#pragma once

#include <vector>

#include "hire/rng.hpp"
#include "hire/tensor.hpp"

namespace hire {

struct KMeansResult {
  std::vector<std::size_t> assignment;
  Matrix centroids;
  /// Within-cluster sum of squared distances on the normalized rows.
  double objective = 0.0;
  /// Objective after each Lloyd update of the winning restart.
  std::vector<double> trace;
};

/// Rows scaled to unit L2 norm; zero rows stay zero.
Matrix l2_normalize_rows(const Matrix& x);

/// Sum of squared distances from each row to the mean of its cluster.
double clustering_objective(const Matrix& x, const std::vector<std::size_t>& assignment, std::size_t k);

/// k-means++ seeding and Lloyd iterations on L2-normalized rows, repeated for
/// `restarts` seeded runs; the lowest objective wins (earliest on ties).
KMeansResult kmeans(const Matrix& embeddings, std::size_t k, Rng& rng, std::size_t max_iters = 300,
                    std::size_t restarts = 10);

}  // namespace hire
