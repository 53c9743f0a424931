#!/usr/bin/env python3
"""Regenerates the frozen reference values in crates/core/tests/data/.

Everything here is computed with mpmath at 50 digits, independently of the
Rust code: special functions from their defining series or integrals, roots
from mpmath.polyroots, closed-form quantities by summing over those roots,
and one Laplace inversion by Talbot's method.
"""
import csv
import os

import mpmath as mp

mp.mp.dps = 50
OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "data")
A, B, C = mp.mpf("1.3"), mp.mpf("2.6"), mp.mpf("3.4")


def W(z):
    return mp.exp(z * z) * mp.erfc(-z)


def ml_series(alpha, beta, z, terms=400):
    return mp.fsum(z**k * mp.rgamma(alpha * k + beta) for k in range(terms))


def ml_deriv_series(alpha, beta, k, z, terms=500):
    return mp.fsum(
        mp.factorial(j + k) * z**j / (mp.factorial(j) * mp.gamma(alpha * j + alpha * k + beta))
        for j in range(terms)
    )


def fresnel_quad(x):
    # split at u = sqrt(k) where the phase pi u^2 / 2 advances by pi/2
    nodes = [mp.sqrt(k) for k in range(int(x * x) + 1)] + [x]
    s = mp.quad(lambda u: mp.sin(mp.pi * u * u / 2), nodes)
    c = mp.quad(lambda u: mp.cos(mp.pi * u * u / 2), nodes)
    assert abs(s - mp.fresnels(x)) < mp.mpf(10) ** -30
    assert abs(c - mp.fresnelc(x)) < mp.mpf(10) ** -30
    return s, c


def j0_series(x, terms=80):
    return mp.fsum((-1) ** k * (x / 2) ** (2 * k) / mp.factorial(k) ** 2 for k in range(terms))


def w_quad(z):
    """exp(z^2) erfc(-z) by quadrature on the path s^2 = z^2 + v, v >= 0,
    where the integrand exp(-v) / sqrt(z^2 + v) does not oscillate."""
    if z.real < 0:
        return mp.quad(lambda v: mp.exp(-v) / mp.sqrt(z * z + v), [0, 1, 10, mp.inf]) / mp.sqrt(mp.pi)
    # reflection W(z) = 2 exp(z^2) - W(-z)
    return 2 * mp.exp(z * z) - w_quad(-z)


def special_rows():
    rows = []
    for x in ["1", "0.5", "-0.5", "2.5", "-3.7", "7.2", "12.5"]:
        rows.append(("rgamma", x, "0", mp.rgamma(mp.mpf(x)), 0, "1e-13"))
    for re, im in [("1", "1"), ("0.3", "-0.2"), ("-2", "0.5"), ("-10", "0"), ("2.2", "-1.7"),
                   ("-0.7", "4.1"), ("5", "5"), ("-15", "3")]:
        z = mp.mpc(re, im)
        w = w_quad(z)
        assert abs(w - W(z)) < mp.mpf(10) ** -25 * abs(w)
        rows.append(("scaled_erfc", re, im, w.real, w.imag, "1e-12"))
    for x in ["0.3", "1", "2.7", "4.4", "7.9", "50"]:
        s, c = fresnel_quad(mp.mpf(x))
        rows.append(("fresnel_s", x, "0", s, 0, "1e-12"))
        rows.append(("fresnel_c", x, "0", c, 0, "1e-12"))
    for x in ["0.5", "2.404825557695773", "5", "7.9", "8.1", "20", "63.2"]:
        v = j0_series(mp.mpf(x), 200)
        assert abs(v - mp.besselj(0, mp.mpf(x))) < mp.mpf(10) ** -20
        rows.append(("bessel_j0", x, "0", v, 0, "1e-12"))
    for al, be, re, im in [("0.5", "2.7", "-3", "0"), ("0.5", "1", "1.2", "-2.1"), ("0.8", "1.3", "-2", "1"),
                           ("1.7", "0.4", "2.5", "0"), ("0.5", "-0.5", "-1.5", "0.5"), ("0.5", "0", "2", "2")]:
        v = ml_series(mp.mpf(al), mp.mpf(be), mp.mpc(re, im))
        rows.append((f"ml:{al}:{be}", re, im, v.real, v.imag, "1e-10"))
    for al, be, k, z in [("0.5", "2", 2, "-1"), ("0.5", "3.5", 1, "-2.5"), ("0.5", "5", 3, "-4"),
                         ("0.5", "2", 0, "-6.3")]:
        v = ml_deriv_series(mp.mpf(al), mp.mpf(be), k, mp.mpf(z))
        rows.append((f"mld:{al}:{be}:{k}", z, "0", v, 0, "1e-9"))
    return rows


def closed_form_rows():
    roots = sorted(mp.polyroots([A, B, 0, 0, C], maxsteps=200, extraprec=200), key=lambda r: (r.real, r.imag))
    d = [4 * A * r + 3 * B for r in roots]
    rows = []
    for i, r in enumerate(roots):
        rows.append((f"root_re_{i}", 0, r.real, "1e-14"))
        rows.append((f"root_im_{i}", 0, r.imag, "1e-14"))
    for ell in [-3, 1, 2]:
        v = mp.fsum(r**ell / q for r, q in zip(roots, d)).real
        rows.append((f"weight_a_{ell}", 0, v, "1e-13"))
    om = mp.mpf("2.5")
    for m in [-1, 0, 1, 2]:
        v = mp.fsum(r**m / (q * (om**2 + r**4)) for r, q in zip(roots, d)).real
        rows.append((f"weight_b_{m}", om, v, "1e-13"))

    def kern(t):
        return mp.fsum(W(r * mp.sqrt(t)) / (q * r) for r, q in zip(roots, d)).real

    def yc(t, y0, v0):
        return mp.fsum((A * r + B) * (r * r * y0 + v0) / (q * r * r) * W(r * mp.sqrt(t))
                       for r, q in zip(roots, d)).real

    def step(t):
        return mp.fsum((W(r * mp.sqrt(t)) - 1) / (r**3 * q) for r, q in zip(roots, d)).real

    for t in ["0.1", "1", "4", "9.5"]:
        rows.append(("kernel", t, kern(mp.mpf(t)), "1e-12"))
    for t in ["0.5", "1", "2", "8", "100"]:
        rows.append(("yc_11", t, yc(mp.mpf(t), 1, 1), "1e-11"))
    for t in ["2", "5", "30"]:
        rows.append(("yf_constant_1", t, step(mp.mpf(t)), "1e-11"))
    # sinusoid through the convolution of the kernel, integrated directly
    for t in ["2", "3"]:
        tt = mp.mpf(t)
        v = mp.quad(lambda u: mp.sin(om * (tt - u)) * kern(u), [0, tt / 2, tt])
        rows.append(("yf_sin_1_2.5", t, v, "1e-10"))
    # 1 + sqrt(t) through the convolution of the kernel
    for t in ["2", "6"]:
        tt = mp.mpf(t)
        v = mp.quad(lambda u: (1 + mp.sqrt(tt - u)) * kern(u), [0, tt / 2, tt])
        rows.append(("yf_one_plus_sqrt", t, v, "1e-10"))
    # Talbot inversion of s^{-1} / (a s^2 + b s^{3/2} + c)
    F = lambda s: 1 / (s * (A * s**2 + B * s ** mp.mpf(1.5) + C))
    for t in ["1", "3"]:
        rows.append(("laplace_step", t, mp.invertlaplace(F, mp.mpf(t), method="talbot"), "1e-12"))
    return rows


def fmt(x):
    return mp.nstr(mp.mpf(x), 20) if not isinstance(x, str) else x


def main():
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "special_golden.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "re_in", "im_in", "re_out", "im_out", "tol"])
        for f, ri, ii, ro, io, tol in special_rows():
            w.writerow([f, ri, ii, fmt(ro), fmt(io), tol])
    with open(os.path.join(OUT, "closed_form_golden.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "param", "value", "tol"])
        for q, p, v, tol in closed_form_rows():
            w.writerow([q, fmt(p) if not isinstance(p, str) else p, fmt(v), tol])


if __name__ == "__main__":
    main()
