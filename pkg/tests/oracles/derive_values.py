"""Independent high-precision oracles for the frozen values in the test suite.

Run ``python tests/oracles/derive_values.py`` to regenerate.  Nothing here
imports ``capregion``; every quantity is rebuilt from first principles with
mpmath at 40 digits.
"""

import itertools

import mpmath as mp

mp.mp.dps = 40


def spectrum(f, beta, T=1):
    f = abs(mp.mpf(f))
    lo = (1 - mp.mpf(beta)) / (2 * T)
    hi = (1 + mp.mpf(beta)) / (2 * T)
    if f <= lo:
        return mp.mpf(T)
    if f > hi:
        return mp.mpf(0)
    return T / mp.mpf(2) * (1 + mp.cos(mp.pi * T / beta * (f - lo)))


def autocorr_by_fourier(t, beta, T=1):
    # g(t) = int G(f) cos(2 pi f t) df over the support, split at the band edges
    lo = (1 - mp.mpf(beta)) / (2 * T)
    hi = (1 + mp.mpf(beta)) / (2 * T)
    return 2 * mp.quad(lambda f: spectrum(f, beta, T) * mp.cos(2 * mp.pi * f * t), [0, lo, hi])


def autocorr(t, beta, T=1):
    t = mp.mpf(t)
    if t == 0:
        return mp.mpf(1)
    den = 1 - (2 * beta * t / T) ** 2
    if abs(den) < mp.mpf(10) ** -30:
        return mp.pi / 4 * mp.sinc(mp.pi / (2 * beta))
    return mp.sinc(mp.pi * t / T) * mp.cos(mp.pi * beta * t / T) / den


def folded(lam, beta, delta, T=1):
    dT = delta * T
    return sum(spectrum((lam - n) / dT, beta, T) for n in range(-3, 4)) / dT


def cross(lam, beta, delta, dtau, T=1):
    dT = delta * T
    return sum(spectrum((lam - n) / dT, beta, T) * mp.expj(2 * mp.pi * dtau * (lam - n) / dT)
               for n in range(-3, 4)) / dT


def gmat(n, beta, delta, shift=0):
    return mp.matrix([[autocorr((i - j) * delta + shift, mp.mpf(beta)) for j in range(n)]
                      for i in range(n)])


def log2det(m):
    return mp.log(mp.det(m), 2)


def main():
    b = mp.mpf("0.25")
    print("g(0.5), beta=0.25 by inverse FT:", mp.nstr(autocorr_by_fourier(mp.mpf("0.5"), b), 20))
    print("g(T/2beta), beta=0.3 limit:", mp.nstr(mp.limit(lambda t: autocorr(t, mp.mpf("0.3")), 1 / mp.mpf("0.6")), 20))
    print("G(0.5), beta=0.25:", mp.nstr(spectrum(mp.mpf("0.5"), b), 20))
    print("G_0.8(0.5):", mp.nstr(folded(mp.mpf("0.5"), b, mp.mpf("0.8")), 20))
    print("G_0.8(0.45):", mp.nstr(folded(mp.mpf("0.45"), b, mp.mpf("0.8")), 20))
    c = cross(mp.mpf("0.3"), b, mp.mpf("0.9"), mp.mpf("0.45"))
    print("G12_0.9(0.3), dtau=0.45:", mp.nstr(c.real, 20), mp.nstr(c.imag, 20))
    c = cross(mp.mpf("0.3"), b, mp.mpf("0.9"), mp.mpf("-0.45"))
    print("G12_0.9(0.3), dtau=-0.45:", mp.nstr(c.real, 20), mp.nstr(c.imag, 20))

    # N=4 interference entries, delta=0.8, tau2-tau1=0.4 (dtau=-0.4)
    g12 = gmat(4, b, mp.mpf("0.8"), mp.mpf("-0.4"))
    print("G12 first row:", [mp.nstr(g12[0, j], 17) for j in range(4)])
    print("G12 first column:", [mp.nstr(g12[i, 0], 17) for i in range(4)])

    # single-user rate, N=4, delta=0.9, R = c G^{-1}, c so that tr(G R) = N dT P
    d = mp.mpf("0.9")
    P = mp.mpf(100)
    G = gmat(4, b, d)
    R = mp.inverse(G) * (d * P)          # tr(G R) = 4 dT P
    su = log2det(mp.eye(4) + G * R) / 8
    print("single-user rate N=4 (R = dT P G^-1):", mp.nstr(su, 20))

    # sum rate, N=4, delta=0.9, dtau=-0.45, diagonal covariances
    d1 = [mp.mpf(v) for v in ("30", "120", "75", "135")]
    d2 = [mp.mpf(v) for v in ("90", "10", "160", "100")]
    g12 = gmat(4, b, d, mp.mpf("-0.45"))
    gt = mp.matrix(8, 8)
    for i in range(4):
        for j in range(4):
            gt[i, j] = G[i, j]
            gt[i + 4, j + 4] = G[i, j]
            gt[i, j + 4] = g12[i, j]
            gt[i + 4, j] = g12[j, i]
    rt = mp.diag(d1 + d2)
    print("sum rate N=4 (diag covariances):", mp.nstr(log2det(mp.eye(8) + gt * rt) / 8, 20))

    # flat spectra at delta=1, beta=0.25, dtau=-0.5, S = P = 100 (sigma0^2 = 1)
    def integrand(lam):
        x = P
        ratio = abs(cross(lam, b, 1, mp.mpf("-0.5"))) ** 2 / folded(lam, b, 1) ** 2
        return mp.log(1 + 2 * x + x * x * (1 - ratio), 2)
    edges = [-0.5, -0.375, 0, 0.375, 0.5]
    print("flat-spectrum r_sum (delta=1, dtau=-0.5):", mp.nstr(mp.quad(integrand, edges) / 2, 20))
    print("flat-spectrum r1:", mp.nstr(mp.log(1 + P, 2) / 2, 20))

    # N=2 brute force over a 50^4 grid on the budget simplex faces
    brute_force_n2()


def brute_force_n2(grid=50):
    import numpy as np
    beta, delta, dtau = 0.25, 0.9, -0.45
    g = np.array([[float(autocorr((i - j) * delta, mp.mpf(beta))) for j in range(2)] for i in range(2)])
    g12 = np.array([[float(autocorr((i - j) * delta + dtau, mp.mpf(beta))) for j in range(2)] for i in range(2)])
    w, v = np.linalg.eigh(g)
    gi = (v / np.sqrt(w)) @ v.T
    s = np.linalg.svd(gi @ g12 @ gi, compute_uv=False)
    k = 1 - s ** 2
    budget = 2 * delta * 100.0
    # psi_10, psi_11, psi_20, psi_21 each on a 50-point grid in [0, budget]
    ticks = np.linspace(0.0, budget, grid)
    a, b_, c, d = np.meshgrid(ticks, ticks, ticks, ticks, indexing="ij")
    ok = (a + b_ <= budget * (1 + 1e-12)) & (c + d <= budget * (1 + 1e-12))
    x0, x1, y0, y1 = a[ok], b_[ok], c[ok], d[ok]
    r1 = (np.log2(1 + x0) + np.log2(1 + x1)) / 4
    r2 = (np.log2(1 + y0) + np.log2(1 + y1)) / 4
    rs = (np.log2(1 + x0 + y0 + k[0] * x0 * y0) + np.log2(1 + x1 + y1 + k[1] * x1 * y1)) / 4
    print("N=2 coupling:", k.tolist())
    for theta in np.linspace(0, np.pi / 2, 9):
        m1, m2 = np.cos(theta), np.sin(theta)
        val = np.maximum(m1 * r1 + m2 * (rs - r1), m1 * (rs - r2) + m2 * r2).max()
        print(f"N=2 theta={theta:.6f} best weighted (bits/symbol): {val:.12f}")


if __name__ == "__main__":
    main()
