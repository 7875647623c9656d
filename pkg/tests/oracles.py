"""Independent reference implementations used only by the tests.

Everything here is written from scratch in mpmath at high precision and does
not import the package, so agreement with the package is a real cross-check.
"""

import mpmath as mp

mp.mp.dps = 40


def _pauli_rho(z):
    x, y, w = z
    return mp.matrix([[(1 + w) / 2, (x - 1j * y) / 2], [(x + 1j * y) / 2, (1 - w) / 2]])


def qubit_fidelity(a, b):
    """Uhlmann fidelity of two qubit states given as Bloch vectors."""
    dot = sum(p * q for p, q in zip(a, b))
    na = sum(p * p for p in a)
    nb = sum(q * q for q in b)
    return (1 + dot + mp.sqrt(max(mp.mpf(0), (1 - na) * (1 - nb)))) / 2


def bures_fisher(path, x, h=mp.mpf("1e-12")):
    """Fisher information from the Bures metric, ``F = 8 (1 - sqrt(Fid(x-h, x+h))) / (2h)^2``."""
    x = mp.mpf(x)
    fid = qubit_fidelity(path(x - h), path(x + h))
    return 8 * (1 - mp.sqrt(fid)) / (2 * h) ** 2


def _sqrtm_herm(m):
    ev, U = mp.eighe(m)
    d = mp.diag([mp.sqrt(max(e, mp.mpf(0))) for e in ev])
    return U * d * U.transpose_conj()


def wy_skew(path, x, h=mp.mpf("1e-15")):
    """Skew information metric ``4 Tr[(d sqrt(rho))^2]`` by a central difference of ``sqrt(rho)``."""
    x = mp.mpf(x)
    d = (_sqrtm_herm(_pauli_rho(path(x + h))) - _sqrtm_herm(_pauli_rho(path(x - h)))) / (2 * h)
    return mp.re(4 * sum((d * d)[i, i] for i in range(2)))


def unruh_zeta(r, theta, phi):
    c, s = mp.cos(r), mp.sin(r)
    return (
        c * mp.sin(theta) * mp.cos(phi),
        -c * mp.sin(theta) * mp.sin(phi),
        c**2 * mp.cos(theta) - s**2,
    )


def qnd_zeta_display(r, theta, phi, gamma, omega0, t):
    f = mp.exp(-(omega0**2) * gamma / 4)
    c, s = mp.cos(r), mp.sin(r)
    return (
        c * mp.sin(theta) * mp.cos(phi + omega0 * t) * f,
        -c * mp.sin(theta) * mp.sin(phi + omega0 * t) * f,
        c**2 * mp.cos(theta) - s**2,
    )


def gamma_literal(t, T, s, a=0, wc=100, g0=mp.mpf("0.1")):
    """Ohmic squeezed-bath decoherence function, transcribed term by term."""
    t, T, s, a = map(mp.mpf, (t, T, s, a))
    pre = g0 * T / (mp.pi * wc)
    thermal = 2 * wc * t * mp.atan(wc * t) + mp.log(1 / (1 + wc**2 * t**2))
    sq = (
        4 * wc * (t - a) * mp.atan(2 * wc * (t - a))
        - 4 * wc * (t - 2 * a) * mp.atan(wc * (t - 2 * a))
        + 4 * a * wc * mp.atan(2 * a * wc)
        + mp.log((1 + wc**2 * (t - 2 * a) ** 2) ** 2 / (1 + 4 * wc**2 * (t - a) ** 2))
        + mp.log(1 / (1 + 4 * a**2 * wc**2))
    )
    return pre * mp.cosh(2 * s) * thermal - pre / 2 * mp.sinh(2 * s) * sq


def sgad_literal(t, T, s, omega0=mp.mpf("0.1"), g0=mp.mpf("0.1")):
    """N, squeezing amplitude, A-D and both p2 roots exactly as displayed."""
    t, T, s = map(mp.mpf, (t, T, s))
    nth = 1 / (mp.exp(omega0 / T) - 1) if T > 0 else mp.mpf(0)
    N = nth * (mp.cosh(s) ** 2 + mp.sinh(s) ** 2) + mp.sinh(s) ** 2
    a = mp.sinh(2 * s) * (2 * nth + 1)
    k = g0 * (2 * N + 1) * t
    A = (2 * N + 1) / (2 * N) * mp.sinh(g0 * a * t / 2) ** 2 / mp.sinh(k / 2) * mp.exp(-k / 2)
    B = N / (2 * N + 1) * (1 - mp.exp(-k))
    C = A + B + mp.exp(-k)
    D = mp.cosh(g0 * a * t / 2) ** 2 * mp.exp(-k)
    bracket = A**2 * B + C**2 + A * (B**2 - C - B * (1 + C) - D) - (1 + B) * D - C * (B + D - 1)
    root = 2 * mp.sqrt(D * (B - A * B + (A - 1) * C + D) * (A - A * B + (B - 1) * C + D))
    den = (A + B - C - 1) ** 2 - 4 * D
    return {
        "N": N, "a": a, "A": A, "B": B, "C": C, "D": D, "E": mp.exp(-k),
        "p2+": (bracket + root) / den, "p2-": (bracket - root) / den,
    }


def sgad_weights(lit, p2):
    """mu, nu, alpha for a chosen root."""
    p1 = 1 - p2
    mu = lit["A"] / p2
    nu = lit["B"] / p2
    alpha = (1 - p2 * (mu + nu) - lit["E"]) / p1
    return p1, alpha, mu, nu


def sgad_zeta_display(r, theta, phi, p1, p2, alpha, mu, nu, phi_s=0):
    c, s = mp.cos(r), mp.sin(r)
    eta = p1 * mp.sqrt(1 - alpha) + p2 * mp.sqrt((1 - mu) * (1 - nu))
    kap = p2 * mp.sqrt(mu * nu)
    ch2, sh2 = mp.cos(theta / 2) ** 2, mp.sin(theta / 2) ** 2
    return (
        c * mp.sin(theta) * (eta * mp.cos(phi) + kap * mp.cos(phi - phi_s)),
        -c * mp.sin(theta) * (eta * mp.sin(phi) - kap * mp.sin(phi - phi_s)),
        (1 - 2 * p1 * alpha - 2 * p2 * mu) * c**2 * ch2 - (1 - 2 * p2 * nu) * (s**2 * ch2 + sh2),
    )
