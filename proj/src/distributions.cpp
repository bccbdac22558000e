// Copyright 2026 The ccrkit Authors.
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

#include "ccr/distributions.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr::dist {

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double BetaContinuedFraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericError(fmt::format("incomplete beta did not converge (a={}, b={}, x={})", a, b, x));
}

}  // namespace

double IncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw NumericError(fmt::format("incomplete beta needs a, b > 0 (a={}, b={})", a, b));
  if (std::isnan(x) || x < 0.0 || x > 1.0)
    throw NumericError(fmt::format("incomplete beta argument {} outside [0, 1]", x));
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

namespace {

// P(T > t) for t >= 0.
double UpperTail(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return 0.5 * IncompleteBeta(0.5 * df, 0.5, df / (df + t * t));
}

}  // namespace

double StudentTCdf(double t, double df) {
  if (!(df > 0.0)) throw NumericError(fmt::format("t distribution needs df > 0, got {}", df));
  if (std::isnan(t)) return t;
  double tail = UpperTail(std::fabs(t), df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double StudentTTwoSidedP(double t, double df) {
  if (!(df > 0.0)) throw NumericError(fmt::format("t distribution needs df > 0, got {}", df));
  double p = 2.0 * UpperTail(std::fabs(t), df);
  return p > 1.0 ? 1.0 : p;
}

double StudentTQuantile(double p, double df) {
  if (!(df > 0.0)) throw NumericError(fmt::format("t distribution needs df > 0, got {}", df));
  if (!(p > 0.0 && p < 1.0)) throw NumericError(fmt::format("t quantile needs p in (0,1), got {}", p));
  if (p == 0.5) return 0.0;
  const double q = p > 0.5 ? 1.0 - p : p;  // upper-tail mass of |quantile|

  double lo = 0.0, hi = 1.0;
  while (UpperTail(hi, df) > q) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("t quantile bracket overflow");
  }
  for (int i = 0; i < 400 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
    double mid = 0.5 * (lo + hi);
    if (UpperTail(mid, df) > q)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  return p > 0.5 ? t : -t;
}

double FSurvival(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw NumericError(fmt::format("F distribution needs positive df ({}, {})", d1, d2));
  if (std::isnan(f)) return f;
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return IncompleteBeta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

}  // namespace ccr::dist
