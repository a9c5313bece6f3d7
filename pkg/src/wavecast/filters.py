"""First-generation wavelet filter banks and the classical DWT/IDWT.

A :class:`FilterBank` carries the analysis pair (h, g) and the synthesis
pair (h_dual, g_dual) as tap arrays plus the integer index of each first
tap.  Lowpass taps sum to sqrt(2); the highpass filters are derived by the
usual alternating-flip quadrature rule, so perfect reconstruction holds by
construction and is enforced by the test suite rather than trusted.

Boundary handling:

* orthogonal families run periodized (non-expansive, bands of ceil(n/2),
  odd lengths edge-padded and trimmed again on inversion);
* biorthogonal families run on a half-sample symmetric extension.  That
  transform is expansive: every coefficient whose window touches the
  extended signal is kept, which makes inversion exact for arbitrary taps
  at the cost of bands slightly longer than n/2.

Band names follow the convention a (residue after the deepest level) and
d1..dJ with d1 the finest detail.
"""

from __future__ import annotations

import json
import math
import pathlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._coeffs import COEFFS
from .errors import (BadLevels, DataError, InconsistentPyramid, IoError,
                     TooShort, UnknownBand, UnknownFamily)

FAMILIES = tuple(sorted(COEFFS))

_MODES = ("periodic", "symmetric")


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Analysis/synthesis quadruple with explicit tap offsets."""

    family: str
    orthogonal: bool
    vanishing_moments: int
    h: np.ndarray          # analysis lowpass
    h_k0: int
    g: np.ndarray          # analysis highpass
    g_k0: int
    h_dual: np.ndarray     # synthesis lowpass
    h_dual_k0: int
    g_dual: np.ndarray     # synthesis highpass
    g_dual_k0: int

    @property
    def boundary_mode(self):
        return "periodic" if self.orthogonal else "symmetric"


def _alternating_flip(taps, k0):
    """g[k] = (-1)^k f[1-k] for a filter f with first tap at k0."""
    k1 = k0 + len(taps) - 1
    gk0 = 1 - k1
    out = np.empty(len(taps))
    for i in range(len(taps)):
        k = gk0 + i
        out[i] = (-1.0) ** (k & 1) * taps[(1 - k) - k0]
    return out, gk0


def _freeze(arr):
    arr = np.asarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _build_bank(family, h, h_k0, ht, ht_k0, orthogonal, moments):
    g, g_k0 = _alternating_flip(np.asarray(ht, float), ht_k0)
    gd, gd_k0 = _alternating_flip(np.asarray(h, float), h_k0)
    return FilterBank(
        family=family, orthogonal=orthogonal, vanishing_moments=moments,
        h=_freeze(h), h_k0=h_k0, g=_freeze(g), g_k0=g_k0,
        h_dual=_freeze(ht), h_dual_k0=ht_k0,
        g_dual=_freeze(gd), g_dual_k0=gd_k0)


@lru_cache(maxsize=None)
def filter_bank(family):
    """Look up one of the nine shipped families by its identifier."""
    try:
        spec = COEFFS[family]
    except KeyError:
        raise UnknownFamily(
            f"unknown wavelet family {family!r}; expected one of "
            f"{', '.join(FAMILIES)}") from None
    return _build_bank(family, spec["h"], spec["h_k0"], spec["ht"],
                       spec["ht_k0"], spec["orthogonal"], spec["moments"])


def haar_bank():
    """Orthonormal 2-tap bank, used for cross-checks against lifting."""
    h = [1.0 / math.sqrt(2.0)] * 2
    return _build_bank("haar", h, 0, h, 0, True, 1)


# ----------------------------------------------------------------------
# single-level analysis / synthesis


def _analyze_periodic(x, taps, k0):
    n = len(x)
    half = n // 2
    out = np.zeros(half)
    base = np.arange(half) * 2
    for i, c in enumerate(taps):
        out += c * x[(base + (k0 + i)) % n]
    return out


def _synthesize_periodic(n, band, taps, k0):
    out = np.zeros(n)
    base = np.arange(len(band)) * 2
    for i, c in enumerate(taps):
        out[(base + (k0 + i)) % n] += c * band
    return out


def _sym_geometry(n, bank):
    k_lo = min(bank.h_k0, bank.g_k0)
    k_hi = max(bank.h_k0 + len(bank.h), bank.g_k0 + len(bank.g)) - 1
    kd_lo = min(bank.h_dual_k0, bank.g_dual_k0)
    kd_hi = max(bank.h_dual_k0 + len(bank.h_dual),
                bank.g_dual_k0 + len(bank.g_dual)) - 1
    e1 = max(kd_hi - k_hi, k_lo - kd_lo, 0) + 2
    e2 = e1 + (k_hi - k_lo) + 2
    i_min = math.ceil((-e1 - k_hi) / 2)
    i_max = math.floor((n - 1 + e1 - k_lo) / 2)
    # every synthesis window that reaches a sample in [0, n) must be kept
    assert i_min <= math.ceil((0 - kd_hi) / 2)
    assert i_max >= math.floor((n - 1 - kd_lo) / 2)
    # and every kept analysis window must stay inside the extension
    assert 2 * i_min + k_lo >= -e2 and 2 * i_max + k_hi <= n - 1 + e2
    return e1, e2, i_min, i_max


def _analyze_symmetric(x, bank):
    n = len(x)
    _, e2, i_min, i_max = _sym_geometry(n, bank)
    ext = np.pad(x, e2, mode="symmetric")
    nb = i_max - i_min + 1

    def corr(taps, k0):
        out = np.zeros(nb)
        for i, c in enumerate(taps):
            start = 2 * i_min + (k0 + i) + e2
            out += c * ext[start:start + 2 * nb:2]
        return out

    return corr(bank.h, bank.h_k0), corr(bank.g, bank.g_k0), i_min


def _synthesize_symmetric(n, a, d, bank):
    _, _, i_min, i_max = _sym_geometry(n, bank)
    kd_lo = min(bank.h_dual_k0, bank.g_dual_k0)
    kd_hi = max(bank.h_dual_k0 + len(bank.h_dual),
                bank.g_dual_k0 + len(bank.g_dual)) - 1
    p0 = 2 * i_min + kd_lo
    out = np.zeros(2 * i_max + kd_hi - p0 + 1)
    base = (np.arange(i_min, i_max + 1)) * 2 - p0
    for i, c in enumerate(bank.h_dual):
        out[base + (bank.h_dual_k0 + i)] += c * a
    for i, c in enumerate(bank.g_dual):
        out[base + (bank.g_dual_k0 + i)] += c * d
    return out[-p0:n - p0]


def _step_lengths(n, bank):
    """(a-band length, band offset) for one analysis level of length n."""
    if bank.boundary_mode == "periodic":
        return (n + 1) // 2, 0
    _, _, i_min, i_max = _sym_geometry(n, bank)
    return i_max - i_min + 1, i_min


# ----------------------------------------------------------------------
# pyramids


@dataclass(frozen=True)
class CoefficientPyramid:
    """Residue plus detail bands d1..dJ (finest first) with the geometry
    needed to invert: per-level input lengths and band index offsets."""

    family: str
    levels: int
    boundary_mode: str
    original_length: int
    residue: np.ndarray
    details: tuple
    level_lengths: tuple   # input length at each level, level_lengths[0] = n
    level_offsets: tuple   # first kept coefficient index at each level

    def band(self, name):
        if name == "a":
            return self.residue
        if name.startswith("d"):
            try:
                j = int(name[1:])
            except ValueError:
                j = 0
            if 1 <= j <= self.levels:
                return self.details[j - 1]
        raise UnknownBand(f"no band {name!r} in a {self.levels}-level pyramid")

    def band_names(self):
        return ["a"] + [f"d{j}" for j in range(1, self.levels + 1)]

    def dyadic_position(self, level, t):
        """Array position in the level-`level` bands of original sample t."""
        pos = float(t)
        for j in range(level):
            pos = pos / 2.0 - self.level_offsets[j]
        return pos


def dwt(x, bank, levels, mode=None):
    """Multi-level analysis of a 1-D signal."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError(f"expected a 1-D signal, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("signal contains non-finite values")
    if levels < 1:
        raise BadLevels(f"levels must be >= 1, got {levels}")
    if len(x) < 2 ** levels:
        raise TooShort(
            f"signal of length {len(x)} cannot support {levels} levels")
    mode = mode or bank.boundary_mode
    if mode not in _MODES:
        raise DataError(f"unknown boundary mode {mode!r}")

    details, lengths, offsets = [], [], []
    cur = x
    for _ in range(levels):
        n = len(cur)
        lengths.append(n)
        if mode == "periodic":
            work = cur if n % 2 == 0 else np.append(cur, cur[-1])
            a = _analyze_periodic(work, bank.h, bank.h_k0)
            d = _analyze_periodic(work, bank.g, bank.g_k0)
            offsets.append(0)
        else:
            a, d, i_min = _analyze_symmetric(cur, bank)
            offsets.append(i_min)
        details.append(d)
        cur = a
    return CoefficientPyramid(
        family=bank.family, levels=levels, boundary_mode=mode,
        original_length=len(x), residue=cur, details=tuple(details),
        level_lengths=tuple(lengths), level_offsets=tuple(offsets))


def idwt(pyr, bank=None):
    """Invert :func:`dwt`; the pyramid must be structurally consistent."""
    if bank is None:
        bank = filter_bank(pyr.family)
    if bank.family != pyr.family:
        raise InconsistentPyramid(
            f"pyramid built with {pyr.family!r}, bank is {bank.family!r}")
    if len(pyr.details) != pyr.levels or len(pyr.level_lengths) != pyr.levels:
        raise InconsistentPyramid("level count does not match band count")
    if pyr.level_lengths[0] != pyr.original_length:
        raise InconsistentPyramid("level_lengths[0] != original_length")
    for j in range(pyr.levels):
        n = pyr.level_lengths[j]
        want, _ = _step_lengths(n, bank)
        if j + 1 < pyr.levels and pyr.level_lengths[j + 1] != want:
            raise InconsistentPyramid(f"length chain breaks at level {j + 1}")
        if len(pyr.details[j]) != want:
            raise InconsistentPyramid(f"detail band {j + 1} has wrong length")
    if len(pyr.residue) != _step_lengths(pyr.level_lengths[-1], bank)[0]:
        raise InconsistentPyramid("residue band has wrong length")

    cur = np.asarray(pyr.residue, dtype=float)
    for j in range(pyr.levels - 1, -1, -1):
        n = pyr.level_lengths[j]
        d = np.asarray(pyr.details[j], dtype=float)
        if pyr.boundary_mode == "periodic":
            work_n = n + (n % 2)
            rec = (_synthesize_periodic(work_n, cur, bank.h_dual,
                                        bank.h_dual_k0)
                   + _synthesize_periodic(work_n, d, bank.g_dual,
                                          bank.g_dual_k0))
            cur = rec[:n]
        else:
            cur = _synthesize_symmetric(n, cur, d, bank)
    return cur


def approximation_band(pyr, level, bank=None):
    """Reconstruct the approximation band a_level (input of level+1).

    level = pyr.levels returns the residue itself; level = 1 gives the
    half-rate smooth band even when the pyramid was taken much deeper.
    """
    if not 1 <= level <= pyr.levels:
        raise BadLevels(f"level {level} outside 1..{pyr.levels}")
    if level == pyr.levels:
        return np.asarray(pyr.residue, dtype=float)
    if bank is None:
        bank = filter_bank(pyr.family)
    cur = np.asarray(pyr.residue, dtype=float)
    for j in range(pyr.levels - 1, level - 1, -1):
        n = pyr.level_lengths[j]
        d = np.asarray(pyr.details[j], dtype=float)
        if pyr.boundary_mode == "periodic":
            work_n = n + (n % 2)
            rec = (_synthesize_periodic(work_n, cur, bank.h_dual,
                                        bank.h_dual_k0)
                   + _synthesize_periodic(work_n, d, bank.g_dual,
                                          bank.g_dual_k0))
            cur = rec[:n]
        else:
            cur = _synthesize_symmetric(n, cur, d, bank)
    return cur


def threshold_bands(pyr, keep):
    """Zero every band not named in `keep`; structure is preserved."""
    keep = set(keep)
    valid = set(pyr.band_names())
    bad = keep - valid
    if bad:
        raise UnknownBand(
            f"unknown band(s) {sorted(bad)}; valid: {sorted(valid)}")
    residue = pyr.residue if "a" in keep else np.zeros_like(pyr.residue)
    details = tuple(
        d if f"d{j + 1}" in keep else np.zeros_like(d)
        for j, d in enumerate(pyr.details))
    return CoefficientPyramid(
        family=pyr.family, levels=pyr.levels,
        boundary_mode=pyr.boundary_mode,
        original_length=pyr.original_length,
        residue=residue, details=details,
        level_lengths=pyr.level_lengths, level_offsets=pyr.level_offsets)


# ----------------------------------------------------------------------
# on-disk form: one CSV per band plus a small JSON manifest


def export_pyramid(pyr, directory):
    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in pyr.band_names():
        vals = pyr.band(name)
        lines = ["index,value"]
        lines += [f"{i},{float(v)!r}" for i, v in enumerate(vals)]
        (directory / f"band_{name}.csv").write_text("\n".join(lines) + "\n")
    manifest = {
        "family": pyr.family,
        "levels": pyr.levels,
        "boundary_mode": pyr.boundary_mode,
        "original_length": pyr.original_length,
        "level_lengths": list(pyr.level_lengths),
        "level_offsets": list(pyr.level_offsets),
    }
    (directory / "pyramid.json").write_text(
        json.dumps(manifest, indent=2) + "\n")


def load_pyramid(directory):
    directory = pathlib.Path(directory)
    try:
        manifest = json.loads((directory / "pyramid.json").read_text())
    except FileNotFoundError as exc:
        raise IoError(f"no pyramid manifest under {directory}") from exc
    levels = manifest["levels"]

    def read_band(name):
        path = directory / f"band_{name}.csv"
        try:
            rows = path.read_text().strip().splitlines()
        except FileNotFoundError as exc:
            raise IoError(f"missing band file {path}") from exc
        if rows[:1] != ["index,value"]:
            raise IoError(f"{path}: unexpected header")
        return np.array([float(r.split(",")[1]) for r in rows[1:]])

    return CoefficientPyramid(
        family=manifest["family"], levels=levels,
        boundary_mode=manifest["boundary_mode"],
        original_length=manifest["original_length"],
        residue=read_band("a"),
        details=tuple(read_band(f"d{j}") for j in range(1, levels + 1)),
        level_lengths=tuple(manifest["level_lengths"]),
        level_offsets=tuple(manifest["level_offsets"]))
