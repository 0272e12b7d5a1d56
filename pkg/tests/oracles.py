"""Independent high-precision oracles used by the test suite.

Everything here is built on mpmath (and brute-force summation), deliberately
sharing no code with the package internals: Bessel values, weight-function
Fourier coefficients by singular quadrature, circle operator eigenvalues by
separation of variables, kernel diagonal limits by Richardson extrapolation
of the off-diagonal formulas in 50-digit arithmetic, and O(N^2) discrete
transforms.
"""

from __future__ import annotations

import numpy as np
import mpmath as mp

# ----------------------------------------------------------------------
# curves in mpmath (mirrors of the package's built-in shapes)
# ----------------------------------------------------------------------


def mp_curve(name):
    """Return (point, d1) callables producing mpmath 2-vectors."""
    if name == "circle":

        def point(t):
            return [mp.cos(t), mp.sin(t)]

        def d1(t):
            return [-mp.sin(t), mp.cos(t)]

    elif name == "kite":

        def point(t):
            return [mp.cos(t) + mp.mpf("0.65") * mp.cos(2 * t) - mp.mpf("0.65"),
                    mp.mpf("1.5") * mp.sin(t)]

        def d1(t):
            return [-mp.sin(t) - mp.mpf("1.3") * mp.sin(2 * t),
                    mp.mpf("1.5") * mp.cos(t)]

    elif name == "cavity":
        s = mp.mpf("1.35")
        b = mp.mpf("0.35") * s

        def point(t):
            return [s * mp.cos(t) - b * mp.cos(2 * t) - b,
                    s * mp.sin(t) - b * mp.sin(2 * t)]

        def d1(t):
            return [-s * mp.sin(t) + 2 * b * mp.sin(2 * t),
                    s * mp.cos(t) - 2 * b * mp.cos(2 * t)]

    else:
        raise ValueError(name)
    return point, d1


# ----------------------------------------------------------------------
# off-diagonal kernel factors in mpmath
# ----------------------------------------------------------------------


def _mp_r(point, s, t):
    xs, xt = point(s), point(t)
    return mp.sqrt((xs[0] - xt[0]) ** 2 + (xs[1] - xt[1]) ** 2)


def mp_kernel_a(name, k, s, t):
    point, _ = mp_curve(name)
    return -mp.besselj(0, k * _mp_r(point, s, t)) / (4 * mp.pi)


def mp_kernel_b(name, k, s, t):
    point, _ = mp_curve(name)
    r = _mp_r(point, s, t)
    h0 = mp.besselj(0, k * r) + 1j * mp.bessely(0, k * r)
    log_term = mp.log(mp.sin((s - t) / 2) ** 2)
    return 0.25j * h0 + mp.besselj(0, k * r) * log_term / (4 * mp.pi)


def mp_kernel_a_tilde(name, k, s, t):
    point, _ = mp_curve(name)
    r = _mp_r(point, s, t)
    return (1 - mp.besselj(0, k * r)) / (4 * mp.pi * mp.sin((s - t) / 2) ** 2)


def _mp_delta_dot_m(name, s, t):
    point, d1 = mp_curve(name)
    xs, xt = point(s), point(t)
    dt = d1(t)
    return (xs[0] - xt[0]) * dt[1] - (xs[1] - xt[1]) * dt[0]


def mp_kernel_c(name, k, s, t):
    point, _ = mp_curve(name)
    r = _mp_r(point, s, t)
    dm = _mp_delta_dot_m(name, s, t)
    return -(k / (4 * mp.pi)) * dm * mp.besselj(1, k * r) / (
        r * mp.sin((s - t) / 2) ** 2
    )


def mp_kernel_d(name, k, s, t):
    point, _ = mp_curve(name)
    r = _mp_r(point, s, t)
    dm = _mp_delta_dot_m(name, s, t)
    h1 = mp.besselj(1, k * r) + 1j * mp.bessely(1, k * r)
    full = 0.25j * k * h1 * dm / r
    sub = mp_kernel_c(name, k, s, t) * mp.sin((s - t) / 2) ** 2 * mp.log(
        mp.sin((s - t) / 2) ** 2
    )
    return full - sub


def richardson_diagonal(fn, s, j_lo=10, j_hi=20, dps=50):
    """Richardson limit of fn(s, s +- h) as h -> 0, h = 2^-j.

    Averages the two one-sided values to kill odd orders, then runs a Neville
    table in h^2.  Returns an mpmath complex number.
    """
    with mp.workdps(dps):
        hs = [mp.mpf(2) ** (-j) for j in range(j_lo, j_hi + 1)]
        vals = [(fn(s, s + h) + fn(s, s - h)) / 2 for h in hs]
        x = [h * h for h in hs]
        table = list(vals)
        m = len(table)
        for level in range(1, m):
            for i in range(m - level):
                num = x[i] * table[i + 1] - x[i + level] * table[i]
                table[i] = num / (x[i] - x[i + level])
        return table[0]


# ----------------------------------------------------------------------
# weight-coefficient quadrature oracle
# ----------------------------------------------------------------------


def mp_psi_hat(m, n, dps=30):
    """(1/2pi) int_0^{2pi} psi_m(t) cos(n t) dt by singular quadrature.

    The weights are even about pi, and tanh-sinh quadrature handles the log
    endpoint; the interval is split so each panel sees at most a few
    oscillations of cos(n t).
    """
    n = abs(int(n))
    with mp.workdps(dps):
        if m == 0:
            return mp.mpf(1 if n == 0 else 0)

        def psi(t):
            L = mp.log(mp.sin(t / 2) ** 2)
            return L if m == 1 else mp.sin(t / 2) ** 2 * L

        pieces = max(2, 2 * n)
        knots = [mp.pi * j / pieces for j in range(pieces + 1)]
        total = mp.mpf(0)
        for a, b in zip(knots[:-1], knots[1:]):
            total += mp.quad(lambda t: psi(t) * mp.cos(n * t), [a, b])
        return 2 * total / (2 * mp.pi)


# ----------------------------------------------------------------------
# circle eigenvalues by separation of variables
# ----------------------------------------------------------------------


def mp_circle_eigs(k, n, dps=40):
    """Eigenvalues (V, K, Kt, H) of the unit-circle operators on e_n."""
    n = abs(int(n))
    with mp.workdps(dps):
        k = mp.mpf(k)
        j = mp.besselj(n, k)
        y = mp.bessely(n, k)
        jp = (mp.besselj(n - 1, k) - mp.besselj(n + 1, k)) / 2
        yp = (mp.bessely(n - 1, k) - mp.bessely(n + 1, k)) / 2
        h = j + 1j * y
        hp = jp + 1j * yp
        lam_v = 0.5j * mp.pi * j * h
        lam_k = 0.5j * mp.pi * k * jp * h - mp.mpf(1) / 2
        lam_kt = 0.5j * mp.pi * k * j * hp + mp.mpf(1) / 2
        lam_h = 0.5j * mp.pi * k * k * jp * hp
        return lam_v, lam_k, lam_kt, lam_h


def mp_bessel_row(z, dps=30):
    """(J0, J1, Y0, Y1) at z with dps digits."""
    with mp.workdps(dps):
        z = mp.mpf(z)
        return (mp.besselj(0, z), mp.besselj(1, z),
                mp.bessely(0, z), mp.bessely(1, z))


# ----------------------------------------------------------------------
# brute-force discrete transforms
# ----------------------------------------------------------------------


def brute_dft(samples):
    """O(N^2) interpolation coefficients c_n, n = -N+1..N (index order)."""
    samples = np.asarray(samples, dtype=complex)
    two_n = samples.size
    N = two_n // 2
    tj = np.arange(two_n) * np.pi / N
    ns = list(range(-N + 1, N + 1))
    return {
        n: np.sum(samples * np.exp(-1j * n * tj)) / two_n for n in ns
    }


def brute_weighted_conv(m, samples, psi_hat_fn):
    """O(N^2) product quadrature sum_n 2 pi psihat_m(n) c_n e_n(s_j)."""
    samples = np.asarray(samples, dtype=complex)
    two_n = samples.size
    N = two_n // 2
    tj = np.arange(two_n) * np.pi / N
    coeffs = brute_dft(samples)
    out = np.zeros(two_n, dtype=complex)
    for n, c in coeffs.items():
        out += 2.0 * np.pi * psi_hat_fn(m, n) * c * np.exp(1j * n * tj)
    return out
