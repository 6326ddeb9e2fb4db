// Independent reference implementations used only to cross-check the library
// kernels. Everything here deliberately takes the most literal route
// available (full enumeration, textbook formulas, quadrature) and shares no
// code with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Fractional rank: 1 + (#strictly smaller) + (#equal - 1) / 2.
inline std::vector<double> fractional_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t smaller = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(smaller) + (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return ranks;
}

// Raw-moment Pearson formula.
inline double pearson_raw(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

inline double spearman_rank_then_pearson(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  return pearson_raw(fractional_ranks(x), fractional_ranks(y));
}

// Exact two-sided Wilcoxon signed-rank p-value by enumerating every sign
// assignment. Zero differences are dropped first.
inline double wilcoxon_exact_p(const std::vector<double>& diffs) {
  std::vector<double> abs_d;
  for (double d : diffs)
    if (d != 0.0) abs_d.push_back(std::fabs(d));
  const std::size_t m = abs_d.size();
  const auto ranks = fractional_ranks(abs_d);

  double w_obs = 0.0;
  {
    std::size_t k = 0;
    for (double d : diffs) {
      if (d == 0.0) continue;
      if (d > 0.0) w_obs += ranks[k];
      ++k;
    }
  }

  std::uint64_t below = 0, above = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) w += ranks[i];
    if (w <= w_obs) ++below;
    if (w >= w_obs) ++above;
  }
  const double p =
      2.0 * static_cast<double>(std::min(below, above)) / static_cast<double>(total);
  return std::min(p, 1.0);
}

struct KendallCounts {
  std::int64_t concordant = 0, discordant = 0;
  std::int64_t tied_x_only = 0, tied_y_only = 0, tied_both = 0;
};

inline double kendall_tau_b_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  KendallCounts c;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool xe = x[i] == x[j], ye = y[i] == y[j];
      if (xe && ye)
        ++c.tied_both;
      else if (xe)
        ++c.tied_x_only;
      else if (ye)
        ++c.tied_y_only;
      else if ((x[i] < x[j] && y[i] < y[j]) || (x[i] > x[j] && y[i] > y[j]))
        ++c.concordant;
      else
        ++c.discordant;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double dx = pairs - static_cast<double>(c.tied_x_only + c.tied_both);
  const double dy = pairs - static_cast<double>(c.tied_y_only + c.tied_both);
  return static_cast<double>(c.concordant - c.discordant) / std::sqrt(dx * dy);
}

// Exact two-sided Mann-Whitney p: over all ways of labelling the pooled
// sample, the fraction whose U deviates from n1*n2/2 at least as much as the
// observed U. Works on doubled ranks so every comparison is integral.
inline double mann_whitney_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = fractional_ranks(pooled);
  std::vector<std::int64_t> r2(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) r2[i] = std::llround(2.0 * ranks[i]);

  const std::int64_t n1 = static_cast<std::int64_t>(a.size());
  const std::int64_t n2 = static_cast<std::int64_t>(b.size());
  std::int64_t r2_obs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) r2_obs += r2[i];
  const std::int64_t dev_obs = std::llabs(r2_obs - n1 * (n1 + 1) - n1 * n2);

  std::uint64_t extreme = 0, count = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> recurse = [&](std::size_t next) {
    if (static_cast<std::int64_t>(chosen.size()) == n1) {
      std::int64_t sum = 0;
      for (std::size_t idx : chosen) sum += r2[idx];
      if (std::llabs(sum - n1 * (n1 + 1) - n1 * n2) >= dev_obs) ++extreme;
      ++count;
      return;
    }
    if (next >= r2.size()) return;
    if (r2.size() - next < a.size() - chosen.size()) return;
    chosen.push_back(next);
    recurse(next + 1);
    chosen.pop_back();
    recurse(next + 1);
  };
  recurse(0);
  return static_cast<double>(extreme) / static_cast<double>(count);
}

// Exact Kruskal-Wallis permutation p: fraction of group assignments whose
// sum(R_j^2 / n_j) reaches the observed one. Scaled by prod(n_j) to stay in
// integers.
inline double kruskal_wallis_exact_p(const std::vector<std::vector<double>>& groups) {
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    sizes.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const auto ranks = fractional_ranks(pooled);
  std::vector<std::int64_t> r2(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) r2[i] = std::llround(2.0 * ranks[i]);

  std::int64_t size_product = 1;
  for (std::size_t s : sizes) size_product *= static_cast<std::int64_t>(s);

  auto key_of = [&](const std::vector<std::int64_t>& sums) {
    std::int64_t key = 0;
    for (std::size_t g = 0; g < sums.size(); ++g)
      key += sums[g] * sums[g] * (size_product / static_cast<std::int64_t>(sizes[g]));
    return key;
  };

  std::vector<std::int64_t> obs_sums(groups.size(), 0);
  {
    std::size_t offset = 0;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t i = 0; i < sizes[g]; ++i) obs_sums[g] += r2[offset++];
  }
  const std::int64_t obs_key = key_of(obs_sums);

  std::uint64_t extreme = 0, count = 0;
  std::vector<std::size_t> remaining(sizes);
  std::vector<std::int64_t> sums(groups.size(), 0);
  std::function<void(std::size_t)> assign = [&](std::size_t idx) {
    if (idx == r2.size()) {
      if (key_of(sums) >= obs_key) ++extreme;
      ++count;
      return;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (remaining[g] == 0) continue;
      --remaining[g];
      sums[g] += r2[idx];
      assign(idx + 1);
      sums[g] -= r2[idx];
      ++remaining[g];
    }
  };
  assign(0);
  return static_cast<double>(extreme) / static_cast<double>(count);
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

// Two-sided Student-t p by integrating the density over [-|t|, |t|].
inline double student_t_two_sided_quadrature(double t, double dof) {
  const double c =
      std::exp(std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0)) / std::sqrt(dof * M_PI);
  auto density = [&](double u) {
    return c * std::pow(1.0 + u * u / dof, -(dof + 1.0) / 2.0);
  };
  return 1.0 - 2.0 * integrate(density, 0.0, std::fabs(t));
}

// Upper chi-squared p by integrating the density over [0, x]; dof >= 2 keeps
// the integrand bounded at the origin.
inline double chi_squared_upper_quadrature(double x, double dof) {
  const double half = dof / 2.0;
  auto density = [&](double u) {
    if (u <= 0.0) return half == 1.0 ? 0.5 : 0.0;
    return std::exp((half - 1.0) * std::log(u) - u / 2.0 - half * std::log(2.0) -
                    std::lgamma(half));
  };
  return 1.0 - integrate(density, 0.0, x);
}

// Upper F p by integrating the density over [0, f]; d1 >= 2 keeps the
// integrand bounded at the origin.
inline double f_upper_quadrature(double f, double d1, double d2) {
  const double ln_norm = std::lgamma((d1 + d2) / 2.0) - std::lgamma(d1 / 2.0) -
                         std::lgamma(d2 / 2.0) + (d1 / 2.0) * std::log(d1 / d2);
  auto density = [&](double u) {
    if (u <= 0.0) return d1 == 2.0 ? std::exp(ln_norm) : 0.0;
    return std::exp(ln_norm + (d1 / 2.0 - 1.0) * std::log(u) -
                    (d1 + d2) / 2.0 * std::log(1.0 + d1 * u / d2));
  };
  return 1.0 - integrate(density, 0.0, f);
}

}  // namespace oracle
