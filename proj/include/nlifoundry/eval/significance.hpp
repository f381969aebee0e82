// Copyright 2026 The nlifoundry Authors.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"

namespace nlif::eval {

struct TestResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;  // chi-square tests
  std::size_t n_a = 0, n_b = 0;
};

inline json to_json(const TestResult& t) {
  json j{{"method", t.method}, {"statistic", t.statistic}, {"p_value", t.p_value}};
  if (t.df > 0) j["df"] = t.df;
  if (t.n_a || t.n_b) j["n"] = {t.n_a, t.n_b};
  return j;
}

namespace detail {

// Regularized lower incomplete gamma by its power series (x < a + 1).
inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz's continued fraction (x >= a + 1).
inline double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Q(a, x) = Γ(a, x) / Γ(a).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DomainError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_fraction(a, x);
}

inline double chi2_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return std::clamp(gamma_q(df / 2.0, x / 2.0), 0.0, 1.0);
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// correct[i][j]: classifier j got item i right (0 or 1).
inline TestResult cochran_q(const std::vector<std::vector<int>>& correct) {
  if (correct.empty()) throw DomainError("cochran_q needs at least one item");
  const std::size_t L = correct.front().size();
  if (L < 2) throw DomainError("cochran_q needs at least two classifiers");
  std::vector<double> G(L, 0.0);
  double T = 0.0, sum_r2 = 0.0;
  for (std::size_t i = 0; i < correct.size(); ++i) {
    if (correct[i].size() != L) throw DomainError("ragged correctness matrix");
    double r = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      const int v = correct[i][j];
      if (v != 0 && v != 1) throw DomainError("correctness entries must be 0 or 1");
      G[j] += v;
      r += v;
    }
    T += r;
    sum_r2 += r * r;
  }
  double sum_g2 = 0.0;
  for (double g : G) sum_g2 += g * g;
  const double l = static_cast<double>(L);
  TestResult t;
  t.method = "cochran_q";
  t.df = l - 1.0;
  const double denom = l * T - sum_r2;
  if (denom == 0.0) return t;
  t.statistic = (l - 1.0) * (l * sum_g2 - T * T) / denom;
  t.p_value = chi2_sf(t.statistic, t.df);
  return t;
}

// Without continuity correction.
inline TestResult mcnemar(const std::vector<int>& a_correct, const std::vector<int>& b_correct) {
  if (a_correct.size() != b_correct.size()) throw DomainError("mcnemar: length mismatch");
  double b = 0.0, c = 0.0;
  for (std::size_t i = 0; i < a_correct.size(); ++i) {
    b += a_correct[i] == 1 && b_correct[i] == 0;
    c += a_correct[i] == 0 && b_correct[i] == 1;
  }
  TestResult t;
  t.method = "mcnemar";
  t.df = 1.0;
  if (b + c == 0.0) return t;
  t.statistic = (b - c) * (b - c) / (b + c);
  t.p_value = chi2_sf(t.statistic, 1.0);
  return t;
}

enum class MwuMode { Auto, Exact, Normal };

namespace detail {

// Midranks (1-based) of the pooled sample, a first then b.
inline std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> rank(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace detail

inline constexpr std::size_t kMwuExactLimit = 10000;

// Two-sided test. U is reported as min(U_a, U_b).
inline TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                                 MwuMode mode = MwuMode::Auto) {
  if (a.empty() || b.empty()) throw DomainError("mann_whitney_u needs two non-empty samples");
  for (double v : a)
    if (std::isnan(v)) throw DomainError("NaN in sample");
  for (double v : b)
    if (std::isnan(v)) throw DomainError("NaN in sample");
  const std::size_t n = a.size(), m = b.size(), N = n + m;
  if (mode == MwuMode::Exact && n * m > kMwuExactLimit)
    throw DomainError("exact mode requires n*m <= " + std::to_string(kMwuExactLimit));
  const bool exact = mode == MwuMode::Exact || (mode == MwuMode::Auto && n * m <= 400);

  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto rank = detail::midranks(pooled);
  double ra = 0.0;
  for (std::size_t i = 0; i < n; ++i) ra += rank[i];
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double ua = ra - dn * (dn + 1.0) / 2.0;
  const double mean = dn * dm / 2.0;

  TestResult t;
  t.n_a = n;
  t.n_b = m;
  t.statistic = std::min(ua, dn * dm - ua);
  const double dev = std::abs(ua - mean);

  if (exact) {
    t.method = "mann_whitney_u_exact";
    // Distribution of the doubled rank sum of a size-n subset of the pooled
    // midranks; doubling keeps half ranks integral.
    std::vector<long> r2(N);
    long total2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      r2[i] = std::lround(2.0 * rank[i]);
      total2 += r2[i];
    }
    // ways[k][s]: number of k-subsets with doubled sum s.
    std::vector<std::vector<double>> ways(n + 1, std::vector<double>(total2 + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = std::min(n, i + 1); k >= 1; --k)
        for (long s = total2; s >= r2[i]; --s) ways[k][s] += ways[k - 1][s - r2[i]];
    double all = 0.0, extreme = 0.0;
    const double base2 = dn * (dn + 1.0);  // doubled minimum rank sum offset
    for (long s = 0; s <= total2; ++s) {
      const double w = ways[n][s];
      if (w == 0.0) continue;
      all += w;
      const double u = (static_cast<double>(s) - base2) / 2.0;
      if (std::abs(u - mean) >= dev - 1e-9) extreme += w;
    }
    t.p_value = std::clamp(extreme / all, 0.0, 1.0);
    return t;
  }

  t.method = "mann_whitney_u_normal";
  double tie_sum = 0.0;
  {
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < N;) {
      std::size_t j = i;
      while (j < N && sorted[j] == sorted[i]) ++j;
      const double tt = static_cast<double>(j - i);
      tie_sum += tt * tt * tt - tt;
      i = j;
    }
  }
  const double dN = static_cast<double>(N);
  const double var = dn * dm / 12.0 * ((dN + 1.0) - tie_sum / (dN * (dN - 1.0)));
  if (var <= 0.0) return t;
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  t.p_value = std::clamp(2.0 * normal_sf(z), 0.0, 1.0);
  return t;
}

}  // namespace nlif::eval
