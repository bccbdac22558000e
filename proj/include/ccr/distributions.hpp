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

#pragma once

namespace ccr::dist {

/// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
double IncompleteBeta(double a, double b, double x);

double StudentTCdf(double t, double df);

/// P(|T| >= |t|) for T ~ t(df).
double StudentTTwoSidedP(double t, double df);

/// Inverse of StudentTCdf by bisection on the incomplete-beta tail;
/// absolute tolerance 1e-10 on the returned quantile. p in (0, 1).
double StudentTQuantile(double p, double df);

/// P(F > f) for F ~ F(d1, d2).
double FSurvival(double f, double d1, double d2);

}  // namespace ccr::dist
