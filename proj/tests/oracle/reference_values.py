"""Independent reference values from scipy (z-basis Condon-Shortley
matrices, dense expm, adaptive quadrature). Regenerate with

    python3 tests/oracle/reference_values.py > tests/golden/reference_values.json
"""
import json

import numpy as np
import scipy.linalg as sl
from scipy.integrate import quad
from scipy.optimize import minimize_scalar


def spin_ops(F):
    d = int(round(2 * F + 1))
    m = np.array([F - k for k in range(d)])
    jz = np.diag(m).astype(complex)
    jp = np.zeros((d, d), complex)
    for k in range(1, d):
        jp[k - 1, k] = np.sqrt(F * (F + 1) - m[k] * (m[k] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / (2j)
    # polarize along x: relabel (x, y, z) <- (z, x, y)
    return jz, jx, jy


F = 4
fx, fy, fz = spin_ops(F)
T = fy @ fz + fz @ fy
d = fx.shape[0]


def chi0(K):
    s = sl.expm(-1j * K * T)[:, 0]
    return 2 * (s.conj() @ fz @ fz @ s).real / F


def v(K):
    U = sl.expm(-1j * K * T)
    return (U.conj().T @ fz @ U)[1:, 0].imag


def chi2(K, kt):
    return chi0(K) - (2 / F) * v(K)[0] ** 2 / (1 + kt ** -2)


def chi3(Kt, kt):
    # information form: gamma^-1 = 1 + (2 kt^2 / F) int_0^1 v v^T ds
    n = d - 1
    M = np.zeros((n, n))
    for a in range(n):
        for b in range(a, n):
            M[a, b] = M[b, a] = quad(lambda s: v(Kt * s)[a] * v(Kt * s)[b], 0, 1,
                                     epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    g = np.linalg.inv(np.eye(n) + (2 * kt ** 2 / F) * M)
    vv = v(Kt)
    return (2 / F) * vv @ g @ vv


r = minimize_scalar(chi0, bounds=(0.05, 0.4), method="bounded", options={"xatol": 1e-12})
Ks = np.linspace(0, 1, 400)
c0 = np.array([chi0(K) for K in Ks])
c2 = np.array([chi2(K, 2.0) for K in Ks])

out = {
    "F": F,
    "chi0_min": r.fun,
    "chi0_argmin": r.x,
    "chi0_at_0.05": chi0(0.05),
    "chi0_grid_argmin_index": int(np.argmin(c0)),
    "chi2_grid_argmin_index": int(np.argmin(c2)),
    "chi2_at_0.3_kt2": chi2(0.3, 2.0),
    "chi3_K1_kt2": chi3(1.0, 2.0),
    "chi3_K0.3_kt2": chi3(0.3, 2.0),
}
print(json.dumps(out, indent=2))
