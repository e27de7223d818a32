"""Independent reference values for the unit tests.

Dense state vectors via scipy.linalg.expm, closed forms via mpmath at 30 digits.
Run once and commit the generated header; the tests never call this script.
"""
import math
import sys

import mpmath as mp
import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq, minimize_scalar

mp.mp.dps = 30


def spin_ops(n):
    j = n / 2
    m = j - np.arange(n + 1)
    jp = np.zeros((n + 1, n + 1))
    for k in range(1, n + 1):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    return jx, jy, np.diag(m).astype(complex)


def prepared(n, chi_t, alpha):
    jx, jy, jz = spin_ops(n)
    top = np.zeros(n + 1, complex)
    top[0] = 1.0
    psi = expm(-1j * (math.pi / 2) * jy) @ top  # |j, j> turned onto +x
    psi = expm(-1j * chi_t * jz @ jz) @ psi
    return expm(-1j * alpha * jx) @ psi


def ev(op, psi):
    return float(np.real(np.vdot(psi, op @ psi)))


def xi_exact(n, chi_t, alpha):
    jx, jy, _ = spin_ops(n)
    psi = prepared(n, chi_t, alpha)
    vy = ev(jy @ jy, psi) - ev(jy, psi) ** 2
    return math.sqrt(n * vy) / ev(jx, psi)


def readout(n, chi_t, alpha, phi):
    jx, _, jz = spin_ops(n)
    psi = expm(-1j * phi * jz) @ prepared(n, chi_t, alpha)
    r = expm(1j * (math.pi / 2) * jx)
    obs = r.conj().T @ jz @ r
    mean = ev(obs, psi)
    second = ev(obs @ obs, psi)
    slope = ev(1j * (jz @ obs - obs @ jz), psi)
    return mean, second, slope


def alpha_opt_exact(n, chi_t):
    grid = np.linspace(-math.pi / 2, math.pi / 2, 2001)
    vals = [xi_exact(n, chi_t, a) if xi_exact(n, chi_t, a) > 0 else 1e9 for a in grid]
    k = int(np.argmin(vals))
    res = minimize_scalar(lambda a: xi_exact(n, chi_t, a), bracket=(grid[k - 1], grid[k], grid[k + 1]),
                          tol=1e-13)
    return res.x


def main(out):
    v = {}
    n = 12
    t12 = float(mp.cbrt(3) * mp.power(12, mp.mpf(-2) / 3))
    a12 = alpha_opt_exact(n, t12)
    v["kTopt12"] = t12
    v["kAlphaOpt12"] = a12
    v["kXiOpt12"] = xi_exact(n, t12, a12)
    a01 = alpha_opt_exact(n, 0.1)
    v["kAlphaOpt12Chi01"] = a01
    m, s, _ = readout(n, 0.1, a01, 0.3)
    v["kMeanJz12Chi01Phi03"] = m
    v["kMeanJz2_12Chi01Phi03"] = s
    m, s, d = readout(n, 0.1, a01, 0.4)
    v["kPhaseUnc12Chi01Phi04"] = math.sqrt(s - m * m) / abs(d)
    v["kAlphaOpt12Chi02"] = alpha_opt_exact(n, 0.2)
    v["kTopt200"] = float(mp.cbrt(3) * mp.power(200, mp.mpf(-2) / 3))
    v["kAnsatzXi200s02"] = float(mp.mpf("0.2") * mp.exp(mp.mpf(1) / 16))
    v["kHalfNormalMean01"] = float(mp.mpf("0.1") * mp.sqrt(2 / mp.pi))
    v["kUniformStdPi"] = float(mp.pi / mp.sqrt(3))
    v["kGravPhase"] = float(mp.mpf("1.61e7") * mp.mpf("9.8") * mp.mpf("4.55e-4") ** 2)
    v["kClockT1"] = float(mp.mpf("0.141") / mp.mpf("1.3") ** 5)
    v["kPrecision015_200_50"] = float(mp.mpf("0.15") / (mp.sqrt(200) * mp.sqrt(50)))
    s1, s2 = mp.mpf("0.3"), mp.mpf("0.4")
    v["kGaussProductStd"] = float(1 / mp.sqrt(s1 ** -2 + s2 ** -2))
    # ansatz width for xi = 0.15 at N = 200 on the s^2 N > 1 branch, then the reshaped sigma
    f = lambda s: s * math.exp(1 / (2 * s * s * 200)) - 0.15
    s015 = brentq(f, math.sqrt(1 / 200) * 1.0000001, 0.15, xtol=1e-15)
    amp = mp.mpf(100) * mp.exp(-1 / (2 * mp.mpf(s015) ** 2 * 200))
    v["kAnsatzAmp015"] = float(amp)
    v["kReshapedSigma015"] = float(amp * mp.sqrt(mp.mpf("0.15") ** 2 / 200 + mp.mpf("9e-4")))

    with open(out, "w") as fh:
        fh.write("#pragma once\n\n// Generated by tests/oracle/make_oracles.py; do not edit.\n\n")
        fh.write("namespace oracle_values {\n\n")
        for k, x in v.items():
            fh.write(f"inline constexpr double {k} = {float(x)!r};\n")
        fh.write("\n}  // namespace oracle_values\n")
    for k, x in v.items():
        print(k, repr(float(x)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "oracle_values.hpp")
