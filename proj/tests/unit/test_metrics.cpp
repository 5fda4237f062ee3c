#include <cmath>
#include <functional>

#include "doctest.h"
#include "gradcheck.hpp"
#include "hire/error.hpp"
#include "hire/kmeans.hpp"
#include "hire/metrics.hpp"

using namespace hire;

namespace {

using Labels = std::vector<std::size_t>;

// Every set partition of n items as restricted-growth strings.
std::vector<Labels> all_partitions(std::size_t n) {
  std::vector<Labels> out;
  Labels cur(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      cur[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return out;
}

std::size_t clusters(const Labels& a) {
  std::size_t k = 0;
  for (std::size_t v : a) k = std::max(k, v + 1);
  return k;
}

// Mutual information and entropies straight from the probability definitions.
double nmi_oracle(const Labels& a, const Labels& b) {
  const std::size_t n = a.size(), ka = clusters(a), kb = clusters(b);
  if (ka == 1 && kb == 1) return 1.0;
  double mi = 0.0, ha = 0.0, hb = 0.0;
  for (std::size_t i = 0; i < ka; ++i) {
    double pi = 0.0;
    for (std::size_t x : a) pi += x == i;
    pi /= static_cast<double>(n);
    if (pi > 0) ha -= pi * std::log(pi);
    for (std::size_t j = 0; j < kb; ++j) {
      double pj = 0.0, pij = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        pj += b[t] == j;
        pij += a[t] == i && b[t] == j;
      }
      pj /= static_cast<double>(n);
      pij /= static_cast<double>(n);
      if (pij > 0) mi += pij * std::log(pij / (pi * pj));
    }
  }
  for (std::size_t j = 0; j < kb; ++j) {
    double pj = 0.0;
    for (std::size_t x : b) pj += x == j;
    pj /= static_cast<double>(n);
    if (pj > 0) hb -= pj * std::log(pj);
  }
  const double norm = 0.5 * (ha + hb);
  return norm > 0 ? mi / norm : 0.0;
}

// Adjusted Rand index by enumerating every unordered pair.
double ari_oracle(const Labels& a, const Labels& b) {
  double both = 0.0, in_a = 0.0, in_b = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
      pairs += 1.0;
    }
  if (pairs == 0.0) return 1.0;
  const double expected = in_a * in_b / pairs;
  const double max_index = 0.5 * (in_a + in_b);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

Labels relabel(const Labels& a, const Labels& perm) {
  Labels out;
  for (std::size_t v : a) out.push_back(perm[v]);
  return out;
}

}  // namespace

TEST_CASE("micro and macro F1") {
  const Labels gold = {0, 0, 1, 2}, pred = {0, 1, 1, 1};
  const F1Scores s = micro_macro_f1(pred, gold, 3);
  CHECK(s.micro == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.f1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Class 1: tp 1, fp 2, fn 0.
  CHECK(s.f1[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.f1[2] == 0.0);
  CHECK(s.macro == doctest::Approx(7.0 / 18.0).epsilon(1e-15));
  CHECK(s.precision[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s.recall[0] == doctest::Approx(0.5).epsilon(1e-15));
  const F1Scores same = micro_macro_f1(gold, gold, 3);
  CHECK(same.micro == 1.0);
  CHECK(same.macro == 1.0);
  const Labels ones = {0, 0, 0};
  const F1Scores single = micro_macro_f1(ones, ones, 1);
  CHECK(single.micro == 1.0);
  CHECK(single.macro == 1.0);
  const F1Scores absent = micro_macro_f1(ones, ones, 2);
  CHECK(absent.f1[1] == 0.0);
  CHECK(absent.macro == 0.5);
  CHECK_THROWS_AS(micro_macro_f1(Labels{}, Labels{}, 2), DegenerateInputError);
  CHECK_THROWS_AS(micro_macro_f1(Labels{3}, Labels{0}, 2), ValidationError);
  CHECK_THROWS_AS(micro_macro_f1(Labels{0, 1}, Labels{0}, 2), ShapeError);
}

TEST_CASE("F1 is invariant under a consistent class relabeling") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Labels gold(20), pred(20);
    for (std::size_t i = 0; i < 20; ++i) {
      gold[i] = rng.below(4);
      pred[i] = rng.below(4);
    }
    Labels perm = {0, 1, 2, 3};
    rng.shuffle(std::span<std::size_t>(perm));
    const F1Scores a = micro_macro_f1(pred, gold, 4);
    const F1Scores b = micro_macro_f1(relabel(pred, perm), relabel(gold, perm), 4);
    CHECK(a.micro == doctest::Approx(b.micro).epsilon(1e-14));
    CHECK(a.macro == doctest::Approx(b.macro).epsilon(1e-14));
  }
}

TEST_CASE("nmi examples") {
  CHECK(nmi(Labels{0, 0, 1, 1, 2}, Labels{2, 2, 0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nmi(Labels{0, 0, 0, 0}, Labels{0, 1, 1, 2}) == 0.0);
  CHECK(nmi(Labels{3, 3}, Labels{1, 1}) == 1.0);
  const double v = nmi(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1});
  CHECK(v == doctest::Approx(0.3437110184854508).epsilon(1e-12));
  CHECK(v == doctest::Approx(nmi_oracle({0, 0, 1, 1}, {0, 1, 1, 1})).epsilon(1e-14));
  CHECK_THROWS_AS(nmi(Labels{}, Labels{}), DegenerateInputError);
}

TEST_CASE("ari examples") {
  CHECK(ari(Labels{0, 0, 1, 1, 2}, Labels{1, 1, 2, 2, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ari(Labels{0, 0, 0, 0}, Labels{0, 1, 1, 2}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ari(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1}) == doctest::Approx(ari_oracle({0, 0, 1, 1}, {0, 1, 1, 1})));
  CHECK(std::abs(ari(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1})) < 1e-15);
  CHECK_THROWS_AS(ari(Labels{}, Labels{}), DegenerateInputError);
}

TEST_CASE("nmi and ari match definitional oracles on every partition pair up to six points") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::vector<Labels> parts = all_partitions(n);
    double worst_nmi = 0.0, worst_ari = 0.0;
    for (const Labels& a : parts)
      for (const Labels& b : parts) {
        worst_nmi = std::max(worst_nmi, std::abs(nmi(a, b) - nmi_oracle(a, b)));
        worst_ari = std::max(worst_ari, std::abs(ari(a, b) - ari_oracle(a, b)));
        CHECK(nmi(a, b) >= 0.0);
        CHECK(nmi(a, b) <= 1.0);
        CHECK(ari(a, b) <= 1.0 + 1e-12);
      }
    INFO("n = " << n);
    CHECK(worst_nmi < 1e-12);
    CHECK(worst_ari < 1e-12);
  }
  CHECK(all_partitions(6).size() == 203);
}

TEST_CASE("nmi and ari are symmetric and relabeling invariant") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Labels a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng.below(3);
      b[i] = rng.below(4);
    }
    Labels pa = {0, 1, 2}, pb = {0, 1, 2, 3};
    rng.shuffle(std::span<std::size_t>(pa));
    rng.shuffle(std::span<std::size_t>(pb));
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-13));
    CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-13));
    CHECK(nmi(relabel(a, pa), b) == doctest::Approx(nmi(a, b)).epsilon(1e-13));
    CHECK(nmi(a, relabel(b, pb)) == doctest::Approx(nmi(a, b)).epsilon(1e-13));
    CHECK(ari(relabel(a, pa), relabel(b, pb)) == doctest::Approx(ari(a, b)).epsilon(1e-13));
  }
}

TEST_CASE("ari is near zero on average for random labelings") {
  Rng rng(1);
  double total = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Labels a(200), b(200);
    for (std::size_t i = 0; i < 200; ++i) {
      a[i] = rng.below(3);
      b[i] = rng.below(3);
    }
    total += ari(a, b);
  }
  CHECK(std::abs(total / 200.0) < 0.01);
}

TEST_CASE("kmeans with one cluster") {
  Rng rng(0);
  const Matrix x = hire::testing::random_matrix(7, 3, rng);
  const KMeansResult r = kmeans(x, 1, rng);
  for (std::size_t a : r.assignment) CHECK(a == 0);
  CHECK_THROWS_AS(kmeans(x, 8, rng), DegenerateInputError);
  CHECK_THROWS_AS(kmeans(x, 0, rng), ConfigError);
}

TEST_CASE("kmeans separates antipodal groups") {
  Rng noise(3);
  Matrix x(20, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    const double sign = i < 10 ? 1.0 : -1.0;
    const double angle = noise.uniform(-0.2, 0.2);
    x(i, 0) = sign * std::cos(angle) * noise.uniform(0.5, 3.0);
    x(i, 1) = sign * std::sin(angle);
  }
  Rng rng(0);
  const KMeansResult r = kmeans(x, 2, rng);
  for (std::size_t i = 1; i < 10; ++i) CHECK(r.assignment[i] == r.assignment[0]);
  for (std::size_t i = 11; i < 20; ++i) CHECK(r.assignment[i] == r.assignment[10]);
  CHECK(r.assignment[0] != r.assignment[10]);
}

TEST_CASE("kmeans reaches the exhaustive optimum on a ten-point fixture") {
  Rng pts(0);
  Matrix x(10, 3);
  const double centers[3][3] = {{1, 0.2, 0}, {0, 1, 0.3}, {0.2, 0, 1}};
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = centers[i % 3][j] + 0.35 * pts.normal();
  const Matrix xn = l2_normalize_rows(x);
  double best = std::numeric_limits<double>::infinity();
  Labels lab(10, 0);
  for (std::size_t code = 0; code < 59049; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < 10; ++i) {
      lab[i] = c % 3;
      c /= 3;
    }
    best = std::min(best, clustering_objective(xn, lab, 3));
  }
  Rng rng(0);
  const KMeansResult r = kmeans(x, 3, rng);
  CHECK(std::abs(r.objective - best) <= 1e-9);
}

TEST_CASE("kmeans objective never increases across Lloyd updates") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Matrix x = hire::testing::random_matrix(60, 4, rng);
    const KMeansResult r = kmeans(x, 5, rng, 300, 1);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1] + 1e-12);
  }
}

TEST_CASE("kmeans is deterministic and normalizes rows") {
  Rng a(5), b(5), pts(2);
  Matrix x = hire::testing::random_matrix(30, 3, pts);
  for (std::size_t j = 0; j < 3; ++j) x(4, j) = 0.0;
  CHECK(kmeans(x, 3, a).assignment == kmeans(x, 3, b).assignment);
  const Matrix n = l2_normalize_rows(x);
  for (std::size_t j = 0; j < 3; ++j) CHECK(n(4, j) == 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < 3; ++j) s += n(0, j) * n(0, j);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  Matrix scaled = x;
  for (std::size_t i = 0; i < scaled.rows; ++i)
    for (std::size_t j = 0; j < 3; ++j) scaled(i, j) *= static_cast<double>(i + 1);
  Rng c(5), d(5);
  CHECK(kmeans(x, 3, c).assignment == kmeans(scaled, 3, d).assignment);
}

TEST_CASE("kmeans re-seeds empty clusters") {
  // Duplicate points force k-means++ into coincident seeds.
  Matrix x(6, 2, 0.0);
  for (std::size_t i = 0; i < 5; ++i) x(i, 0) = 1.0;
  x(5, 1) = 1.0;
  Rng rng(0);
  const KMeansResult r = kmeans(x, 3, rng);
  std::vector<int> used(3, 0);
  for (std::size_t a : r.assignment) used[a] = 1;
  CHECK(used[0] + used[1] + used[2] == 3);
}
