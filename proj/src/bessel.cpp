#include <cmath>
#include <numbers>
#include <vector>

#include "billspec/error.hpp"
#include "billspec/spectra.hpp"

namespace billspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kAsymptoticFrom = 25.0;

// J_0 .. J_{n} at x by Miller's downward recurrence, normalized with
// J_0 + 2 sum J_{2k} = 1.
std::vector<double> miller_sequence(int n, double x) {
  const double s = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(s + 25.0 + 10.0 * std::cbrt(s));
  if (start % 2) ++start;
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  for (int k = start; k >= 0; --k) {
    if (k <= n) out[static_cast<std::size_t>(k)] = j;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * j;
    if (k == 0) break;
    const double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      jp1 *= 1e-250;
      j *= 1e-250;
      norm *= 1e-250;
      for (double& v : out) v *= 1e-250;
    }
  }
  for (double& v : out) v /= norm;
  return out;
}

double series_j(int m, double x) {
  // x small: sum (-1)^k (x/2)^{2k+m} / (k! (k+m)!)
  const double q = -0.25 * x * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= 0.5 * x / i;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

struct Hankel {
  double j, y;
};

Hankel hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0, term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  return {amp * (p * std::cos(chi) - q * std::sin(chi)), amp * (p * std::sin(chi) + q * std::cos(chi))};
}

struct YPair {
  double y0, y1;
};

// Neumann series for Y_0 and its derivative, from the Miller sequence.
YPair neumann_y01(double x) {
  const int n = static_cast<int>(x) + 40;
  const auto J = miller_sequence(n + 1, x);
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0, s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= n; ++k) {
    const double sign = (k % 2) ? -1.0 : 1.0;
    s0 += sign * J[static_cast<std::size_t>(2 * k)] / k;
    s1 += sign * (J[static_cast<std::size_t>(2 * k - 1)] - J[static_cast<std::size_t>(2 * k + 1)]) / k;
  }
  const double y0 = 2.0 / kPi * lg * J[0] - 4.0 / kPi * s0;
  const double y1 = 2.0 / kPi * (lg * J[1] - J[0] / x) + 2.0 / kPi * s1;
  return {y0, y1};
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0) throw Error(ErrorCode::OutOfRange, "bessel order must be nonnegative");
  if (x < 0) throw Error(ErrorCode::OutOfRange, "bessel_j needs x >= 0");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x < 1.0) return series_j(m, x);
  if (x >= kAsymptoticFrom && m < x) {
    // upward recurrence is stable while the order stays below x
    double jm1 = hankel_asymptotic(0, x).j, j = hankel_asymptotic(1, x).j;
    if (m == 0) return jm1;
    for (int k = 1; k < m; ++k) {
      const double jp1 = 2.0 * k / x * j - jm1;
      jm1 = j;
      j = jp1;
    }
    return j;
  }
  return miller_sequence(m, x)[static_cast<std::size_t>(m)];
}

double bessel_y(int m, double x) {
  if (m < 0) throw Error(ErrorCode::OutOfRange, "bessel order must be nonnegative");
  if (!(x > 0)) throw Error(ErrorCode::OutOfRange, "bessel_y needs x > 0");
  double y0, y1;
  if (x >= kAsymptoticFrom) {
    y0 = hankel_asymptotic(0, x).y;
    y1 = hankel_asymptotic(1, x).y;
  } else {
    const YPair p = neumann_y01(x);
    y0 = p.y0;
    y1 = p.y1;
  }
  if (m == 0) return y0;
  for (int k = 1; k < m; ++k) {
    const double y2 = 2.0 * k / x * y1 - y0;
    y0 = y1;
    y1 = y2;
    if (std::isinf(y1)) break;
  }
  return y1;
}

double bessel(BesselKind kind, int m, double x) { return kind == BesselKind::J ? bessel_j(m, x) : bessel_y(m, x); }

double bessel_j_prime(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

double bessel_y_prime(int m, double x) {
  if (m == 0) return -bessel_y(1, x);
  return 0.5 * (bessel_y(m - 1, x) - bessel_y(m + 1, x));
}

}  // namespace billspec
