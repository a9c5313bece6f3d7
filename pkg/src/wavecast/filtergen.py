"""Construct the shipped wavelet filter coefficients from first principles.

This module exists so that ``_coeffs.py`` (the frozen fixture the package
actually loads) can be regenerated and audited:

    python3 -m wavecast.filtergen --write

Orthogonal families (db, sym, coif) come out of spectral factorization of
the Daubechies half-band polynomial, followed by a Gauss-Newton polish on
the defining equations (normalization, orthonormality at even lags,
highpass moment conditions) so every frozen digit is meaningful.  Symlets
pick the root subset with the flattest phase instead of the extremal one.
The coiflet is found by Gauss-Newton on its full defining system from a
seeded multistart, since no closed form exists.  Biorthogonal spline pairs
are exact binomial/Bezout constructions evaluated in rational arithmetic
and only rounded once, at freeze time.

All lowpass filters are normalized so their taps sum to sqrt(2).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

SQRT2 = math.sqrt(2.0)


# ----------------------------------------------------------------------
# shared helpers


def _binom_row(n):
    return [math.comb(n, k) for k in range(n + 1)]


def _halfband_poly(n_moments):
    # P(y) = sum_{k<N} C(N-1+k, k) y^k ; |m0|^2 = (1-y)^N P(y), y = sin^2(w/2)
    return [math.comb(n_moments - 1 + k, k) for k in range(n_moments)]


def _y_roots_to_z_pairs(n_moments):
    """Roots of P(y) mapped to reciprocal pairs (z, 1/z) in the z plane.

    Returns a list of groups; each group is a pair (inside, outside) where
    each element is itself a tuple of one or two complex roots (a real root
    alone, or a conjugate pair kept together so coefficients stay real).
    """
    coeffs = _halfband_poly(n_moments)
    yr = np.roots(coeffs[::-1]) if n_moments > 1 else np.array([])
    groups = []
    used = np.zeros(len(yr), dtype=bool)
    for i, y in enumerate(yr):
        if used[i]:
            continue
        used[i] = True
        mates = [y]
        if abs(y.imag) > 1e-12:
            # pull in the conjugate partner
            j = int(np.argmin(np.abs(yr - y.conjugate()) + used * 1e9))
            used[j] = True
            mates.append(yr[j])
        ins, outs = [], []
        for ym in mates:
            b = 2.0 - 4.0 * ym
            disc = np.sqrt(b * b - 4.0 + 0j)
            z1, z2 = (b + disc) / 2.0, (b - disc) / 2.0
            if abs(z1) > abs(z2):
                z1, z2 = z2, z1
            ins.append(z1)
            outs.append(z2)
        groups.append((tuple(ins), tuple(outs)))
    return groups


def _filter_from_roots(n_moments, z_roots):
    h = np.array([1.0])
    for _ in range(n_moments):
        h = np.convolve(h, [0.5, 0.5])
    if len(z_roots):
        q = np.poly(np.array(z_roots))
        if np.max(np.abs(q.imag)) > 1e-9:
            raise RuntimeError("complex coefficients from unmatched roots")
        h = np.convolve(h, q.real)
    return h * (SQRT2 / h.sum())


def _orient(h):
    """Deterministic orientation: heavier mass in the front half."""
    n = len(h)
    front = np.sum(np.arange(n) * h * h)
    back = np.sum(np.arange(n)[::-1] * h * h)
    return h if front <= back else h[::-1]


def _orth_residuals(h, n_moments):
    L = len(h)
    c = 0.5 * (L - 1)
    res = [h.sum() - SQRT2]
    for lag in range(0, L // 2):
        r = float(np.dot(h[: L - 2 * lag], h[2 * lag :]))
        res.append(r - (1.0 if lag == 0 else 0.0))
    k = np.arange(L)
    alt = (-1.0) ** k
    for m in range(n_moments):
        res.append(float(np.sum(alt * (k - c) ** m * h)))
    return np.array(res)


def _orth_jacobian(h, n_moments):
    L = len(h)
    c = 0.5 * (L - 1)
    rows = [np.ones(L)]
    for lag in range(0, L // 2):
        row = np.zeros(L)
        for j in range(L):
            if j + 2 * lag < L:
                row[j] += h[j + 2 * lag]
            if j - 2 * lag >= 0:
                row[j] += h[j - 2 * lag]
        rows.append(row)
    k = np.arange(L)
    alt = (-1.0) ** k
    for m in range(n_moments):
        rows.append(alt * (k - c) ** m)
    return np.vstack(rows)


def refine_orthogonal(h, n_moments, iters=60):
    """Gauss-Newton polish of an orthogonal lowpass on its defining system."""
    h = np.asarray(h, dtype=float).copy()
    for _ in range(iters):
        F = _orth_residuals(h, n_moments)
        if np.max(np.abs(F)) < 1e-15:
            break
        J = _orth_jacobian(h, n_moments)
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        h = h + step
        if np.max(np.abs(step)) < 1e-16:
            break
    return h


def _phase_flatness(h):
    w = np.linspace(0.05, math.pi - 0.35, 701)
    H = np.exp(-1j * np.outer(w, np.arange(len(h)))) @ h
    phi = np.unwrap(np.angle(H))
    A = np.vstack([np.ones_like(w), w]).T
    fit, *_ = np.linalg.lstsq(A, phi, rcond=None)
    return float(np.max(np.abs(phi - A @ fit)))


# ----------------------------------------------------------------------
# orthogonal families


def daubechies(n_moments):
    """Extremal-phase orthogonal filter with the given moment count."""
    groups = _y_roots_to_z_pairs(n_moments)
    roots = [z for ins, _ in groups for z in ins]
    h = _orient(_filter_from_roots(n_moments, roots))
    return refine_orthogonal(h, n_moments)


def symlet(n_moments):
    """Least-asymmetric variant: root subset with the flattest phase."""
    groups = _y_roots_to_z_pairs(n_moments)
    best = None
    for pick in range(1 << len(groups)):
        roots = []
        for gi, (ins, outs) in enumerate(groups):
            roots.extend(ins if (pick >> gi) & 1 == 0 else outs)
        h = _orient(_filter_from_roots(n_moments, roots))
        score = _phase_flatness(h)
        if best is None or score < best[0] - 1e-12:
            best = (score, h)
    return refine_orthogonal(best[1], n_moments)


def _coif_residuals(h, k0):
    L = len(h)
    k = np.arange(L) + k0
    alt = (-1.0) ** k
    res = [h.sum() - SQRT2]
    for lag in range(0, L // 2):
        r = float(np.dot(h[: L - 2 * lag], h[2 * lag :]))
        res.append(r - (1.0 if lag == 0 else 0.0))
    for m in range(0, 4):            # wavelet side: 4 vanishing moments
        res.append(float(np.sum(alt * k ** m * h)))
    for m in range(1, 4):            # scaling side: centered moments vanish
        res.append(float(np.sum(k ** m * h)))
    return np.array(res)


def coiflet2(seed=20260814, starts=600):
    """12-tap coiflet (4 wavelet moments, 3 scaling moments), taps at k0..k0+11.

    Solved by seeded multistart Gauss-Newton on the defining system; among
    the solutions the flattest-phase one is kept, which is the usual
    near-symmetric representative.  Returns (h, k0).
    """
    rng = np.random.default_rng(seed)
    found = []
    for k0 in (-4, -6):
        kk = np.arange(12) + k0
        for _ in range(starts):
            h = rng.standard_normal(12) * np.exp(-0.25 * (kk - 0.5) ** 2)
            h += SQRT2 / 12.0
            ok = True
            for _ in range(120):
                F = _coif_residuals(h, k0)
                if not np.all(np.isfinite(F)):
                    ok = False
                    break
                if np.max(np.abs(F)) < 1e-13:
                    break
                J = _num_jac(lambda v: _coif_residuals(v, k0), h)
                step, *_ = np.linalg.lstsq(J, -F, rcond=None)
                if not np.all(np.isfinite(step)):
                    ok = False
                    break
                # damped step keeps the iteration from bouncing between basins
                sc = min(1.0, 0.5 / max(np.max(np.abs(step)), 1e-30))
                h = h + sc * step
            F = _coif_residuals(h, k0)
            if ok and np.max(np.abs(F)) < 1e-12:
                for prev, _ in found:
                    if prev.shape == h.shape and np.max(np.abs(prev - h)) < 1e-6:
                        break
                else:
                    found.append((h.copy(), k0))
        if found:
            break
    if not found:
        raise RuntimeError("coiflet solve failed to converge")
    best = min(found, key=lambda hs: _phase_flatness(hs[0]))
    h, k0 = best
    for _ in range(4):
        F = _coif_residuals(h, k0)
        J = _num_jac(lambda v: _coif_residuals(v, k0), h)
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        h = h + step
    return h, k0


def _num_jac(f, x, eps=1e-7):
    f0 = f(x)
    J = np.zeros((len(f0), len(x)))
    for j in range(len(x)):
        xp = x.copy()
        xp[j] += eps
        xm = x.copy()
        xm[j] -= eps
        J[:, j] = (f(xp) - f(xm)) / (2 * eps)
    return J


# ----------------------------------------------------------------------
# biorthogonal spline (CDF) families, exact rational arithmetic


def _frac_conv(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def spline_biorthogonal(n_spline, n_dual):
    """CDF pair: short synthesis spline of order n_spline, long analysis side.

    Returns ((h, k0), (ht, kt0)) where h is the analysis lowpass and ht the
    synthesis lowpass, both scaled so taps sum to sqrt(2); offsets give the
    index of the first tap.  n_spline + n_dual must be even.
    """
    if (n_spline + n_dual) % 2:
        raise ValueError("spline orders must have equal parity")
    q = (n_spline + n_dual) // 2

    spline = [Fraction(math.comb(n_spline, k), 2 ** n_spline)
              for k in range(n_spline + 1)]
    kt0 = -(n_spline // 2)

    # Bezout half: Q(y) = sum_{m<q} C(q-1+m, m) y^m with y = (2 - z - 1/z)/4
    y = [Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 4)]   # offset -1..1
    Q = [Fraction(0)] * (2 * q - 1)
    term = [Fraction(1)]
    for m in range(q):
        c = Fraction(math.comb(q - 1 + m, m))
        off = (len(Q) - len(term)) // 2
        for i, t in enumerate(term):
            Q[off + i] += c * t
        term = _frac_conv(term, y)
    binom = [Fraction(math.comb(n_dual, k), 2 ** n_dual)
             for k in range(n_dual + 1)]
    dual = _frac_conv(binom, Q)
    k0 = -(n_dual // 2) - (q - 1)

    # exact duality check: sum_k a[k] b[k+2l] = delta_l / 2 in rational terms
    for lag in range(-(len(dual) // 2), len(dual) // 2 + 1):
        acc = Fraction(0)
        for i, d in enumerate(dual):
            k = k0 + i
            j = k + 2 * lag - kt0
            if 0 <= j < len(spline):
                acc += d * spline[j]
        want = Fraction(1, 2) if lag == 0 else Fraction(0)
        if acc != want:
            raise RuntimeError(
                f"duality violated at lag {lag} for spline pair "
                f"({n_spline},{n_dual})")

    h = np.array([float(fr) for fr in dual]) * SQRT2
    ht = np.array([float(fr) for fr in spline]) * SQRT2
    return (h, k0), (ht, kt0)


# ----------------------------------------------------------------------
# fixture assembly


def build_all():
    """Return {family: dict} for every shipped family."""
    out = {}
    for n in (4, 6, 8):
        h = daubechies(n)
        out[f"db{n}"] = dict(orthogonal=True, moments=n,
                             h=h, h_k0=0, ht=h, ht_k0=0)
    for n in (4, 7):
        h = symlet(n)
        out[f"sym{n}"] = dict(orthogonal=True, moments=n,
                              h=h, h_k0=0, ht=h, ht_k0=0)
    h, k0 = coiflet2()
    out["coif2"] = dict(orthogonal=True, moments=4,
                        h=h, h_k0=k0, ht=h, ht_k0=k0)
    for ns, nd in ((2, 8), (3, 7), (3, 9)):
        (h, k0), (ht, kt0) = spline_biorthogonal(ns, nd)
        out[f"bior{ns}.{nd}"] = dict(orthogonal=False, moments=ns,
                                     h=h, h_k0=k0, ht=ht, ht_k0=kt0)
    return out


def render_module(banks):
    lines = [
        '"""Frozen wavelet filter coefficients.',
        "",
        "Generated by ``python3 -m wavecast.filtergen --write``; do not edit",
        "by hand.  Offsets (*_k0) give the integer index of the first tap.",
        '"""',
        "",
        "COEFFS = {",
    ]
    for fam in sorted(banks):
        b = banks[fam]
        lines.append(f"    {fam!r}: {{")
        lines.append(f"        'orthogonal': {b['orthogonal']},")
        lines.append(f"        'moments': {b['moments']},")
        lines.append(f"        'h_k0': {b['h_k0']},")
        lines.append("        'h': [")
        for v in b["h"]:
            lines.append(f"            {float(v)!r},")
        lines.append("        ],")
        lines.append(f"        'ht_k0': {b['ht_k0']},")
        lines.append("        'ht': [")
        for v in b["ht"]:
            lines.append(f"            {float(v)!r},")
        lines.append("        ],")
        lines.append("    },")
    lines.append("}")
    lines.append("")
    return "\n".join(lines)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write", action="store_true",
                    help="write _coeffs.py next to this module")
    args = ap.parse_args(argv)
    banks = build_all()
    for fam in sorted(banks):
        b = banks[fam]
        res = np.max(np.abs(_orth_residuals(np.asarray(b["h"]), 0)[:1]))
        print(f"{fam:8s} len={len(b['h']):3d} k0={b['h_k0']:3d} "
              f"sum-res={res:.2e}")
    if args.write:
        import pathlib
        path = pathlib.Path(__file__).with_name("_coeffs.py")
        path.write_text(render_module(banks))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
