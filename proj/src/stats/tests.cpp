// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "surprisal/error.hpp"
#include "surprisal/stats.hpp"

namespace surprisal::stats {

namespace {

void require_pairs(std::span<const double> x, std::span<const double> y, std::size_t min_n,
                   const char* what) {
  if (x.size() != y.size()) fail(ErrorCode::invalid_argument, std::string(what) + ": series lengths differ");
  if (x.size() < min_n) {
    fail(ErrorCode::sample_size, std::string(what) + ": needs at least " + std::to_string(min_n) +
                                     " pairs, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(ErrorCode::domain, std::string(what) + ": non-finite value");
  }
}

double normal_sf(double z) {
  static const boost::math::normal_distribution<double> std_normal;
  return boost::math::cdf(boost::math::complement(std_normal, z));
}

// Two-sided p for a correlation coefficient via Student's t with n-2 df.
double t_p_value(double r, std::size_t n) {
  const double df = static_cast<double>(n) - 2.0;
  if (df <= 0) return 1.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(df / ((1.0 - r) * (1.0 + r)));
  const boost::math::students_t_distribution<double> dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double correlation(std::span<const double> x, std::span<const double> y, const char* what) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::domain, std::string(what) + ": a series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool has_ties(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

double factorial(std::size_t n) {
  double f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double poly(std::span<const double> c, double x) {
  double r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

}  // namespace

Series::Series(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::domain, "series '" + label_ + "' holds a non-finite value");
  }
}

Descriptive descriptive(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::sample_size, "descriptive statistics of an empty sample");
  Descriptive d;
  d.n = values.size();
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(d.n);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  d.min = *lo;
  d.max = *hi;
  if (d.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.sd = std::sqrt(ss / static_cast<double>(d.n - 1));
  }
  return d;
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

TestResult shapiro_wilk(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < kShapiroMinN || n > kShapiroMaxN) {
    fail(ErrorCode::sample_size, "shapiro_wilk: n must lie in 3..5000, got " + std::to_string(n));
  }
  for (double v : data) {
    if (!std::isfinite(v)) fail(ErrorCode::domain, "shapiro_wilk: non-finite value");
  }
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (range <= 0) fail(ErrorCode::domain, "shapiro_wilk: all values are identical");

  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> a(half + 1);  // a[1..half]
  if (n == 3) {
    a[1] = std::sqrt(0.5);
  } else {
    static const boost::math::normal_distribution<double> std_normal;
    std::vector<double> m(half + 1);
    double summ2 = 0;
    for (std::size_t i = 1; i <= half; ++i) {
      m[i] = boost::math::quantile(std_normal, (static_cast<double>(i) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[1] / ssumm2;
    std::size_t i1;
    double fac;
    if (n > 5) {
      i1 = 3;
      const double a2 = -m[2] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[1] * m[1] - 2.0 * m[2] * m[2]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[2] = a2;
    } else {
      i1 = 2;
      fac = std::sqrt((summ2 - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1));
    }
    a[1] = a1;
    for (std::size_t i = i1; i <= half; ++i) a[i] = -m[i] / fac;
  }

  // W is the squared correlation between the ordered sample and the
  // antisymmetric coefficient vector.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 1; i <= half; ++i) {
    coef[i - 1] = -a[i];
    coef[n - i] = a[i];
  }
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / an;
  double sax = 0, saa = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (x[i] - mean) / range;
    sax += coef[i] * dx;
    saa += coef[i] * coef[i];
    sxx += dx * dx;
  }
  const double w = std::min(1.0, sax * sax / (saa * sxx));
  const double w1 = 1.0 - w;

  double p;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274, stqr = 1.04719755119660;
    p = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else if (w1 <= 0) {
    p = 1.0;
  } else {
    double y = std::log(w1);
    double mu, sigma;
    if (n <= 11) {
      const double gamma = poly(g, an);
      if (y >= gamma) return {w, 0.0, "shapiro_wilk", n};
      y = -std::log(gamma - y);
      mu = poly(c3, an);
      sigma = std::exp(poly(c4, an));
    } else {
      const double xx = std::log(an);
      mu = poly(c5, xx);
      sigma = std::exp(poly(c6, xx));
    }
    p = normal_sf((y - mu) / sigma);
  }
  return {w, std::clamp(p, 0.0, 1.0), "shapiro_wilk", n};
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y, 3, "pearson");
  const double r = correlation(x, y, "pearson");
  return {r, t_p_value(r, x.size()), "pearson", x.size()};
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y, 3, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double rho = correlation(rx, ry, "spearman");
  const std::size_t n = x.size();
  if (n >= kExactBelow || has_ties(x) || has_ties(y)) {
    return {rho, t_p_value(rho, n), "spearman", n};
  }
  // Exact: enumerate all rank permutations of y, compare |n(n^2-1) - 6 D|.
  auto to_int = [](double r) { return static_cast<long>(std::lround(r)); };
  const long big = static_cast<long>(n * (n * n - 1));
  long d_obs = 0;
  for (std::size_t i = 0; i < n; ++i) d_obs += (to_int(rx[i]) - to_int(ry[i])) * (to_int(rx[i]) - to_int(ry[i]));
  const long stat_obs = std::labs(big - 6 * d_obs);
  std::vector<long> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<long> ix(n);
  for (std::size_t i = 0; i < n; ++i) ix[i] = to_int(rx[i]);
  double hits = 0, total = 0;
  do {
    long d = 0;
    for (std::size_t i = 0; i < n; ++i) d += (ix[i] - perm[i]) * (ix[i] - perm[i]);
    if (std::labs(big - 6 * d) >= stat_obs) ++hits;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {rho, hits / total, "spearman", n};
}

TestResult kendall_tau(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y, 3, "kendall_tau");
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0) ++concordant;
      else if (s < 0) ++discordant;
    }
  }
  // Tie groups.
  auto tie_sums = [](std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    double pairs = 0, t0 = 0, t1 = 0;  // sum t(t-1)/2, t(t-1)(t-2), t(t-1)(2t+5)
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      const double t = static_cast<double>(j - i);
      pairs += t * (t - 1) / 2;
      t0 += t * (t - 1) * (t - 2);
      t1 += t * (t - 1) * (2 * t + 5);
      i = j;
    }
    return std::array<double, 3>{pairs, t0, t1};
  };
  const auto tx = tie_sums(x), ty = tie_sums(y);
  const double nn = static_cast<double>(n);
  const double n0 = nn * (nn - 1) / 2;
  const double denom = std::sqrt((n0 - tx[0]) * (n0 - ty[0]));
  if (denom == 0) fail(ErrorCode::domain, "kendall_tau: a series is constant");
  const double s = static_cast<double>(concordant - discordant);
  const double tau = std::clamp(s / denom, -1.0, 1.0);

  if (n < kExactBelow && tx[0] == 0 && ty[0] == 0) {
    // Distribution of inversions (Mahonian numbers), two-sided.
    const auto total_pairs = static_cast<long long>(n0);
    const long long c = std::min(discordant, total_pairs - discordant);
    std::vector<double> counts(static_cast<std::size_t>(total_pairs) + 1, 0.0);
    counts[0] = 1;
    for (std::size_t k = 2; k <= n; ++k) {
      std::vector<double> next(counts.size(), 0.0);
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        for (std::size_t add = 0; add < k && i + add < next.size(); ++add) next[i + add] += counts[i];
      }
      counts = std::move(next);
    }
    double tail = 0;
    for (long long i = 0; i <= c; ++i) tail += counts[static_cast<std::size_t>(i)];
    const double p = std::min(1.0, 2.0 * tail / factorial(n));
    return {tau, p, "kendall_tau", n};
  }

  const double m = nn * (nn - 1);
  const double var = (m * (2 * nn + 5) - tx[2] - ty[2]) / 18.0 + (2.0 * (2 * tx[0]) * (2 * ty[0])) / m +
                     tx[1] * ty[1] / (9.0 * m * (nn - 2));
  const double p = var > 0 ? std::min(1.0, 2.0 * normal_sf(std::abs(s) / std::sqrt(var))) : 1.0;
  return {tau, p, "kendall_tau", n};
}

double cohens_kappa(std::span<const std::int64_t> r1, std::span<const std::int64_t> r2) {
  if (r1.size() != r2.size()) fail(ErrorCode::invalid_argument, "cohens_kappa: rating vectors differ in length");
  if (r1.empty()) fail(ErrorCode::sample_size, "cohens_kappa: no ratings");
  const double n = static_cast<double>(r1.size());
  std::map<std::int64_t, double> m1, m2;
  double agree = 0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    m1[r1[i]] += 1;
    m2[r2[i]] += 1;
    if (r1[i] == r2[i]) agree += 1;
  }
  const double po = agree / n;
  double pe = 0;
  for (const auto& [cat, c] : m1) {
    if (auto it = m2.find(cat); it != m2.end()) pe += (c / n) * (it->second / n);
  }
  if (po == 1.0) return 1.0;
  return (po - pe) / (1.0 - pe);
}

}  // namespace surprisal::stats
