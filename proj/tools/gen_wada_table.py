#!/usr/bin/env python3
# Copyright 2026 The foundtts Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the WADA-SNR lookup table in include/foundtts/quality/wada_snr.hpp.

Clean speech is modeled as Gamma(0.4)-distributed amplitudes with a random
sign and the noise as unit Gaussian. For each integer SNR from -20 to 100 dB
the table holds beta = log E|x| - E log|x| of the mixture, computed by
quadrature rather than simulation.
"""

import numpy as np
from scipy import integrate, interpolate, special, stats

SHAPE = 0.4
SNR_DB = range(-20, 101)


def expected_log_abs(a):
    """E log|a + z| for z ~ N(0, 1)."""
    if a > 12:
        return np.log(a) - 1 / (2 * a * a) - 3 / (4 * a**4) - 5 / (2 * a**6)
    f = lambda z: np.log(abs(a + z)) * stats.norm.pdf(z)
    left = integrate.quad(f, -a - 14, -a, limit=500, epsabs=1e-13)[0]
    right = integrate.quad(f, -a, -a + 14, limit=500, epsabs=1e-13)[0]
    return left + right


_GRID = np.linspace(-14, np.log(12), 3000)
_SPLINE = interpolate.CubicSpline(_GRID, [expected_log_abs(np.exp(x)) for x in _GRID])


def smooth_expected_log_abs(a):
    if a <= np.exp(-14):
        return (-np.euler_gamma - np.log(2)) / 2
    if a >= 12:
        return expected_log_abs(a)
    return float(_SPLINE(np.log(a)))


def expected_abs(a):
    """E|a + z| for z ~ N(0, 1)."""
    return a * (2 * stats.norm.cdf(a) - 1) + 2 * stats.norm.pdf(a)


def beta(snr_db):
    # Speech amplitude scale giving the requested power ratio against unit noise.
    theta = np.sqrt(10 ** (snr_db / 10) / (SHAPE * (SHAPE + 1)))
    # Substituting g = v^(1/SHAPE) turns the Gamma density into a smooth weight on v.
    weight = lambda v: np.exp(-(v ** (1 / SHAPE))) / (SHAPE * special.gamma(SHAPE))
    knee = theta ** -SHAPE
    points = [p for p in sorted({knee * 0.1, knee, knee * 10}) if p < 6]
    opts = dict(points=points, limit=1000, epsabs=1e-14, epsrel=1e-12)
    e_abs = integrate.quad(lambda v: weight(v) * expected_abs(theta * v ** (1 / SHAPE)), 0, 6, **opts)[0]
    e_log = integrate.quad(lambda v: weight(v) * smooth_expected_log_abs(theta * v ** (1 / SHAPE)), 0, 6, **opts)[0]
    return np.log(e_abs) - e_log


def main():
    table = [beta(s) for s in SNR_DB]
    if not np.all(np.diff(table) > 0):
        raise SystemExit("table is not strictly increasing")
    print(", ".join("%.8f" % t for t in table))


if __name__ == "__main__":
    main()
