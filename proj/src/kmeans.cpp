#include "hire/kmeans.hpp"

#include <cmath>
#include <limits>

#include "hire/error.hpp"

namespace hire {

Matrix l2_normalize_rows(const Matrix& x) {
  Matrix out = x;
  for (std::size_t i = 0; i < x.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) s += x(i, j) * x(i, j);
    if (s == 0.0) continue;
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) *= inv;
  }
  return out;
}

namespace {

double sq_dist(const Matrix& a, std::size_t i, const Matrix& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols; ++c) {
    const double d = a(i, c) - b(j, c);
    s += d * d;
  }
  return s;
}

Matrix centroids_of(const Matrix& x, const std::vector<std::size_t>& assignment, std::size_t k,
                    std::vector<std::size_t>& sizes) {
  Matrix c(k, x.cols, 0.0);
  sizes.assign(k, 0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    ++sizes[assignment[i]];
    for (std::size_t j = 0; j < x.cols; ++j) c(assignment[i], j) += x(i, j);
  }
  for (std::size_t q = 0; q < k; ++q) {
    if (sizes[q] == 0) continue;
    for (std::size_t j = 0; j < x.cols; ++j) c(q, j) /= static_cast<double>(sizes[q]);
  }
  return c;
}

Matrix plus_plus_seeds(const Matrix& x, std::size_t k, Rng& rng) {
  Matrix centers(k, x.cols, 0.0);
  auto copy_row = [&](std::size_t from, std::size_t to) {
    for (std::size_t j = 0; j < x.cols; ++j) centers(to, j) = x(from, j);
  };
  copy_row(rng.below(x.rows), 0);
  std::vector<double> d2(x.rows, std::numeric_limits<double>::infinity());
  for (std::size_t q = 1; q < k; ++q) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      d2[i] = std::min(d2[i], sq_dist(x, i, centers, q - 1));
      total += d2[i];
    }
    std::size_t pick = x.rows - 1;
    if (total <= 0.0) {
      pick = rng.below(x.rows);
    } else {
      double r = rng.uniform() * total;
      for (std::size_t i = 0; i < x.rows; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    }
    copy_row(pick, q);
  }
  return centers;
}

KMeansResult lloyd(const Matrix& x, std::size_t k, Rng& rng, std::size_t max_iters) {
  KMeansResult res;
  Matrix centers = plus_plus_seeds(x, k, rng);
  res.assignment.assign(x.rows, k);
  std::vector<std::size_t> sizes;
  for (std::size_t it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < x.rows; ++i) {
      std::size_t best = 0;
      double best_d = sq_dist(x, i, centers, 0);
      for (std::size_t q = 1; q < k; ++q) {
        const double d = sq_dist(x, i, centers, q);
        if (d < best_d) {
          best_d = d;
          best = q;
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    centers = centroids_of(x, res.assignment, k, sizes);
    // Re-seed empty clusters with the point farthest from its centroid.
    for (std::size_t q = 0; q < k; ++q) {
      if (sizes[q] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < x.rows; ++i) {
        if (sizes[res.assignment[i]] < 2) continue;
        const double d = sq_dist(x, i, centers, res.assignment[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d < 0.0) break;
      res.assignment[far] = q;
      centers = centroids_of(x, res.assignment, k, sizes);
    }
    res.trace.push_back(clustering_objective(x, res.assignment, k));
  }
  res.centroids = centroids_of(x, res.assignment, k, sizes);
  res.objective = clustering_objective(x, res.assignment, k);
  return res;
}

}  // namespace

double clustering_objective(const Matrix& x, const std::vector<std::size_t>& assignment, std::size_t k) {
  std::vector<std::size_t> sizes;
  const Matrix c = centroids_of(x, assignment, k, sizes);
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) s += sq_dist(x, i, c, assignment[i]);
  return s;
}

KMeansResult kmeans(const Matrix& embeddings, std::size_t k, Rng& rng, std::size_t max_iters, std::size_t restarts) {
  if (k == 0) throw ConfigError("kmeans needs k >= 1");
  if (embeddings.rows < k) {
    throw DegenerateInputError("kmeans: " + std::to_string(embeddings.rows) + " points for k = " + std::to_string(k));
  }
  const Matrix x = l2_normalize_rows(embeddings);
  KMeansResult best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    KMeansResult run = lloyd(x, k, rng, std::max<std::size_t>(max_iters, 1));
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

}  // namespace hire
