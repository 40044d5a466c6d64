#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "billspec/rotation.hpp"

namespace billspec {

namespace {

constexpr double kPi = std::numbers::pi;

struct Band {
  double lo, hi;
};

// Union of [L - eps, L + eps] over the levels, as disjoint sorted bands.
std::vector<Band> merged_bands(const std::vector<double>& levels, double eps, double fmin, double fmax) {
  std::vector<Band> bands;
  for (double L : levels)
    if (L + eps >= fmin && L - eps <= fmax) bands.push_back({L - eps, L + eps});
  std::sort(bands.begin(), bands.end(), [](Band a, Band b) { return a.lo < b.lo; });
  std::vector<Band> out;
  for (Band b : bands) {
    if (!out.empty() && b.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, b.hi);
    else out.push_back(b);
  }
  return out;
}

// Measure of { x in [x0, x1] : linear f in some band }.
double cell_measure(const std::vector<Band>& bands, double x0, double x1, double f0, double f1) {
  const double lo = std::min(f0, f1), hi = std::max(f0, f1);
  auto first = std::lower_bound(bands.begin(), bands.end(), lo, [](Band b, double v) { return b.hi < v; });
  if (hi == lo) {
    for (auto it = first; it != bands.end() && it->lo <= hi; ++it)
      if (it->lo <= lo && lo <= it->hi) return x1 - x0;
    return 0.0;
  }
  double covered = 0.0;
  for (auto it = first; it != bands.end() && it->lo <= hi; ++it)
    covered += std::max(0.0, std::min(hi, it->hi) - std::max(lo, it->lo));
  return (x1 - x0) * covered / (hi - lo);
}

bool cell_has_edge(const std::vector<Band>& bands, double f0, double f1) {
  const double lo = std::min(f0, f1), hi = std::max(f0, f1);
  auto first = std::lower_bound(bands.begin(), bands.end(), lo, [](Band b, double v) { return b.hi < v; });
  for (auto it = first; it != bands.end() && it->lo <= hi; ++it)
    if ((it->lo >= lo && it->lo <= hi) || (it->hi >= lo && it->hi <= hi)) return true;
  return false;
}

constexpr std::size_t kChunk = 4096;

// Sums chunk partials in chunk order so the serial and OpenMP paths agree bitwise.
template <class CellFn>
double chunked_sum(std::size_t cells, CellFn&& cell, Execution exec) {
  const std::size_t chunks = (cells + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  auto run_chunk = [&](std::size_t c) {
    double s = 0.0;
    const std::size_t end = std::min(cells, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) s += cell(i);
    partial[c] = s;
  };
  if (exec == Execution::Parallel) {
    const auto n = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t c = 0; c < n; ++c) run_chunk(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

RotationProfile make_rotation_profile(const std::function<double(double)>& f, double lo, double hi,
                                      std::size_t count) {
  if (count < 2 || !(hi > lo)) throw Error(ErrorCode::ConfigError, "profile needs count >= 2 and hi > lo");
  RotationProfile p;
  p.eta.resize(count);
  p.f.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    p.eta[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    p.f[i] = f(p.eta[i]);
  }
  p.min_abs_derivative = std::numeric_limits<double>::infinity();
  p.max_abs_derivative = 0.0;
  // interior cells only; the end cells may touch a square-root singularity
  for (std::size_t i = 1; i + 2 < count; ++i) {
    const double d = std::abs((p.f[i + 1] - p.f[i]) / (p.eta[i + 1] - p.eta[i]));
    p.min_abs_derivative = std::min(p.min_abs_derivative, d);
    p.max_abs_derivative = std::max(p.max_abs_derivative, d);
  }
  return p;
}

std::vector<double> rational_levels(int n) {
  std::vector<double> levels;
  for (int l = 1; l <= n; ++l)
    for (int k = 0; k <= n; ++k)
      if (std::gcd(k, l) == 1) levels.push_back(2.0 * kPi * k / l);
  std::sort(levels.begin(), levels.end());
  return levels;
}

double periodic_measure_1d(const RotationProfile& f, int n, double eps, Execution exec) {
  if (f.eta.size() != f.f.size() || f.eta.size() < 2)
    throw Error(ErrorCode::ConfigError, "rotation profile needs matching eta and f samples");
  if (eps < 0) throw Error(ErrorCode::ConfigError, "eps must be nonnegative");
  const auto [mn, mx] = std::minmax_element(f.f.begin(), f.f.end());
  const auto bands = merged_bands(rational_levels(n), eps, *mn, *mx);
  return chunked_sum(
      f.eta.size() - 1,
      [&](std::size_t i) { return cell_measure(bands, f.eta[i], f.eta[i + 1], f.f[i], f.f[i + 1]); }, exec);
}

double periodic_measure_1d(const std::function<double(double)>& fn, double lo, double hi, int n, double eps,
                           std::size_t grid, Execution exec) {
  grid = std::max<std::size_t>(grid, 100000);
  const RotationProfile base = make_rotation_profile(fn, lo, hi, grid + 1);
  const auto [mn, mx] = std::minmax_element(base.f.begin(), base.f.end());
  const auto bands = merged_bands(rational_levels(n), eps, *mn, *mx);
  constexpr int kRefine = 32;
  return chunked_sum(
      grid,
      [&](std::size_t i) {
        const double x0 = base.eta[i], x1 = base.eta[i + 1];
        if (!cell_has_edge(bands, base.f[i], base.f[i + 1]))
          return cell_measure(bands, x0, x1, base.f[i], base.f[i + 1]);
        double s = 0.0, fa = base.f[i];
        for (int j = 1; j <= kRefine; ++j) {
          const double xa = x0 + (x1 - x0) * (j - 1) / kRefine;
          const double xb = j == kRefine ? x1 : x0 + (x1 - x0) * j / kRefine;
          const double fb = j == kRefine ? base.f[i + 1] : fn(xb);
          s += cell_measure(bands, xa, xb, fa, fb);
          fa = fb;
        }
        return s;
      },
      exec);
}

BoundaryState sample_boundary_state(const Domain& domain, CounterRng& rng) {
  double u = 0.0;
  if (std::holds_alternative<Polygon>(domain)) {
    u = rng.uniform() * parameter_period(domain);
  } else {
    // uniform in arc length of the outer wall by rejection on the speed
    double a = 1.0, b = 1.0;
    if (const auto* e = std::get_if<Ellipse>(&domain)) a = e->a, b = e->b;
    if (const auto* c = std::get_if<ConfocalAnnulus>(&domain)) a = c->a2, b = c->b2;
    const double vmax = std::max(a, b);
    for (;;) {
      u = rng.uniform() * 2.0 * kPi;
      const double speed = std::hypot(a * std::sin(u), b * std::cos(u));
      if (rng.uniform() * vmax <= speed) break;
    }
  }
  // density proportional to cos(phi) on (-pi/2, pi/2)
  const double phi = std::asin(2.0 * rng.uniform() - 1.0);
  return state_from_incidence(domain, u, phi);
}

PhaseMeasureEstimate near_periodic_phase_measure(const Domain& domain, double T, double eps,
                                                 std::int64_t samples, std::uint64_t seed, Execution exec) {
  if (samples < 1000) throw Error(ErrorCode::ConfigError, "need at least 1000 samples");
  if (!(T > 0) || !(eps >= 0)) throw Error(ErrorCode::ConfigError, "T must be positive and eps nonnegative");
  const double t_min = 1e-9 * diameter(domain);

  // 0 = miss, 1 = hit, 2 = exceptional
  auto classify = [&](std::int64_t i) -> int {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    BoundaryState s0;
    try {
      s0 = sample_boundary_state(domain, rng);
    } catch (const Error&) {
      return 2;
    }
    BoundaryState s = s0;
    double t = 0.0;
    for (;;) {
      ReturnResult r;
      try {
        r = boundary_map(domain, s);
      } catch (const Error&) {
        return 2;
      }
      t += r.time;
      if (t > T) return 0;
      if (t > t_min) {
        const Vec2 dp = r.state.p - s0.p, dx = r.state.xi - s0.xi;
        if (std::sqrt(dot(dp, dp) + dot(dx, dx)) <= eps) return 1;
      }
      s = r.state;
    }
  };

  std::int64_t hits = 0, exceptional = 0;
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : hits, exceptional) num_threads(thread_count())
    for (std::int64_t i = 0; i < samples; ++i) {
      const int c = classify(i);
      hits += c == 1;
      exceptional += c == 2;
    }
  } else {
    for (std::int64_t i = 0; i < samples; ++i) {
      const int c = classify(i);
      hits += c == 1;
      exceptional += c == 2;
    }
  }
  PhaseMeasureEstimate est;
  est.samples = samples;
  est.hits = hits;
  est.exceptional = exceptional;
  const auto valid = static_cast<double>(samples - exceptional);
  if (valid > 0) {
    est.estimate = static_cast<double>(hits) / valid;
    est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / valid);
  }
  return est;
}

namespace {

// Linear interpolation of a sampled profile and its first two derivatives;
// nullopt outside the sampled range.
struct Jet {
  double f, d1, d2;
};

std::optional<Jet> profile_jet(const RotationProfile& p, double eta) {
  const auto n = p.eta.size();
  if (n < 5 || eta < p.eta.front() || eta > p.eta.back()) return std::nullopt;
  auto it = std::upper_bound(p.eta.begin(), p.eta.end(), eta);
  std::size_t i = static_cast<std::size_t>(std::distance(p.eta.begin(), it));
  i = std::clamp<std::size_t>(i, 2, n - 2) - 1;  // cell [i, i+1] with neighbours
  const double h = p.eta[i + 1] - p.eta[i];
  const double w = (eta - p.eta[i]) / h;
  Jet j;
  j.f = p.f[i] + w * (p.f[i + 1] - p.f[i]);
  j.d1 = (p.f[i + 1] - p.f[i]) / h;
  j.d2 = (p.f[i + 2] - 2 * p.f[i + 1] + p.f[i]) / (h * h);
  return j;
}

}  // namespace

DiophantineReport diophantine_check(const std::vector<RotationProfile>& profiles, int n_max, int K) {
  if (profiles.empty() || n_max < 1 || K < 1)
    throw Error(ErrorCode::ConfigError, "need profiles, n_max >= 1 and K >= 1");
  DiophantineReport rep;
  rep.all_decreasing = rep.all_increasing = true;
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i + 1 < p.f.size(); ++i) {
      const double d = p.f[i + 1] - p.f[i];
      if (d > 0) rep.all_decreasing = false;
      if (d < 0) rep.all_increasing = false;
    }
  }

  // scan grid: the widest profile's range, at most 2000 points
  const RotationProfile* widest = &profiles.front();
  for (const auto& p : profiles)
    if (p.eta.back() - p.eta.front() > widest->eta.back() - widest->eta.front()) widest = &p;
  const std::size_t stride = std::max<std::size_t>(1, widest->eta.size() / 2000);
  const int orders = std::min(K, 3);
  const std::size_t m = profiles.size();

  rep.min_proxy = std::numeric_limits<double>::infinity();
  std::vector<int> n(m, 0);
  std::vector<std::optional<Jet>> jets(m);
  for (std::size_t gi = 0; gi < widest->eta.size(); gi += stride) {
    const double eta = widest->eta[gi];
    for (std::size_t j = 0; j < m; ++j) jets[j] = profile_jet(profiles[j], eta);
    // odometer over n in {0..n_max}^m, inaccessible layers pinned to 0
    std::fill(n.begin(), n.end(), 0);
    for (;;) {
      std::size_t j = 0;
      while (j < m) {
        if (!jets[j] || n[j] == n_max) {
          n[j] = 0;
          ++j;
        } else {
          ++n[j];
          break;
        }
      }
      if (j == m) break;
      double s0 = 0.0, s1 = 0.0, s2 = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (!jets[k] || n[k] == 0) continue;
        s0 += n[k] * jets[k]->f;
        s1 += n[k] * jets[k]->d1;
        s2 += n[k] * jets[k]->d2;
      }
      for (int q = 1; q <= K; ++q) {
        double proxy = std::abs(s0 - 2.0 * kPi * q);
        if (orders > 1) proxy += std::abs(s1);
        if (orders > 2) proxy += std::abs(s2);
        if (proxy < rep.min_proxy) {
          rep.min_proxy = proxy;
          rep.argmin_eta = eta;
          rep.argmin_n = n;
          rep.argmin_q = q;
        }
      }
    }
  }
  if (rep.all_decreasing) rep.verdict = "shared monotonicity: all f_j nonincreasing (+ sign)";
  else if (rep.all_increasing) rep.verdict = "shared monotonicity: all f_j nondecreasing (- sign)";
  else rep.verdict = "no shared monotonicity sign; diophantine scan minimum " + std::to_string(rep.min_proxy);
  return rep;
}

}  // namespace billspec
