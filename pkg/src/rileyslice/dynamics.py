"""Numerical dynamics of word polynomials.

Roots come from an Aberth-Ehrlich simultaneous iteration.  The iteration
only needs the Newton ratio f/f', so the same solver handles an integer
polynomial (Horner) and an iterate ``p^n(z) - z`` evaluated by composition
without ever expanding its coefficients.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from .algebra import IntPolynomial, poly_add
from .words import word_polynomial

CLUSTER_TOL = 1e-5
PERIOD_TOL = 1e-6
DEGREE_CAP = 3**5
ESCAPE_LIMIT = 1e150


class RootFindingError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------


def _scaled_coeffs(p: IntPolynomial) -> np.ndarray:
    """Float coefficients (ascending) divided by a power of two so they fit in a double."""
    bits = max(abs(c).bit_length() for c in p.coeffs)
    shift = max(0, bits - 900)
    return np.array([complex(c >> shift if c >= 0 else -((-c) >> shift)) for c in p.coeffs])


def _horner_ratio(coeffs: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised z -> p(z)/p'(z) for ascending coefficients.

    For |z| > 1 the reversed polynomial in w = 1/z is used instead, so large
    starting circles cannot overflow: p/p' = z r(w) / (n r(w) - w r'(w)).
    """
    rev = coeffs[::-1]
    n = len(coeffs) - 1

    def horner(cs, x):
        val = np.full_like(x, cs[0])
        der = np.zeros_like(x)
        for c in cs[1:]:
            der = der * x + val
            val = val * x + c
        return val, der

    def ratio(z):
        z = np.asarray(z, dtype=complex)
        out = np.empty_like(z)
        inner = np.abs(z) <= 1
        if inner.any():
            val, der = horner(rev, z[inner])
            out[inner] = val / der
        if not inner.all():
            zo = z[~inner]
            w = 1 / zo
            val, der = horner(coeffs, w)
            out[~inner] = zo * val / (n * val - w * der)
        return out

    return ratio


def cauchy_radius(coeffs: Sequence[complex]) -> float:
    """1 + max |c_k / c_n|: every root lies inside."""
    lead = abs(coeffs[-1])
    return 1.0 + max(abs(c) / lead for c in coeffs[:-1])


def aberth(
    ratio: Callable[[np.ndarray], np.ndarray],
    degree: int,
    radius: float,
    max_iter: int | None = None,
    tol: float = 1e-15,
) -> np.ndarray:
    """Aberth-Ehrlich iteration for ``degree`` simultaneous roots.

    ``ratio(z)`` must return f(z)/f'(z) elementwise.  Starting points sit on a
    circle of the given radius, rotated off the real axis.  Far from the roots
    each step shrinks |z| only by about 1 - 1/degree, so the default iteration
    cap grows with ``degree * log(radius)``.
    """
    if max_iter is None:
        max_iter = 2000 + int(2 * degree * math.log(max(radius, 1.0)))
    k = np.arange(degree)
    z = radius * np.exp(1j * (2 * np.pi * k / degree + 0.4))
    if degree == 1:
        for _ in range(max_iter):
            step = ratio(z)
            z = z - step
            if abs(step[0]) <= tol * max(1.0, abs(z[0])):
                break
        return z
    eye = np.eye(degree, dtype=bool)
    stall, best = 0, np.inf
    for _ in range(max_iter):
        with np.errstate(all="ignore"):
            w = ratio(z)
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            step = w / (1.0 - w * inv.sum(axis=1))
        bad = ~np.isfinite(step)
        if bad.any():
            # coincident approximations or overflow: nudge and retry
            step[bad] = 1e-3 * radius * np.exp(1j * k[bad])
        z = z - step
        size = np.abs(step) / np.maximum(1.0, np.abs(z))
        if size.max() <= tol:
            break
        # multiple roots converge linearly and stall around sqrt(eps); stop
        # once steps are small and no longer shrinking
        top = size.max()
        if top < 0.9 * best:
            best, stall = top, 0
        else:
            stall += 1
        if best < 1e-6 and stall > 25:
            break
    if not np.all(np.isfinite(z)):
        raise RootFindingError("Aberth iteration diverged")
    return z


def cluster_roots(z: np.ndarray, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group approximations closer than ``tol * scale``; return (centroid, multiplicity)."""
    scale = max(1.0, float(np.abs(z).max())) if len(z) else 1.0
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [(complex(np.mean(z[idx])), len(idx)) for idx in sorted(groups.values())]


def _polish_mp(p: IntPolynomial, r: complex, steps: int = 3, dps: int = 40) -> complex:
    with mpmath.workdps(dps):
        x = mpmath.mpc(r)
        coeffs = [mpmath.mpf(c) for c in reversed(p.coeffs)]
        for _ in range(steps):
            val, der = mpmath.polyval(coeffs, x, derivative=True)
            if der == 0:
                break
            x = x - val / der
        return complex(x)


def _polish(ratio, r: complex, steps: int = 2) -> complex:
    x = np.array([r])
    for _ in range(steps):
        with np.errstate(all="ignore"):
            step = ratio(x)
        if not np.isfinite(step[0]):
            break
        x = x - step
    return complex(x[0])


def roots(p: IntPolynomial) -> list[complex]:
    """All deg p roots with multiplicity.

    Approximations closer than 1e-5 are treated as one repeated root and
    returned as identical values.  Each root is Newton-polished, a repeated
    one on the matching derivative: double precision for small degrees,
    40 digits through mpmath for degree > 50.
    """
    if p.is_zero or p.degree < 1:
        raise ValueError("roots requires a polynomial of degree >= 1")
    # factor out z^k exactly
    low = next(k for k, c in enumerate(p.coeffs) if c)
    q = IntPolynomial(p.coeffs[low:])
    out: list[complex] = [0j] * low
    if q.degree == 0:
        return out
    coeffs = _scaled_coeffs(q)
    ratio = _horner_ratio(coeffs)
    approx = aberth(ratio, q.degree, cauchy_radius(coeffs))
    for centre, mult in cluster_roots(approx):
        # an m-fold root is a simple root of the (m-1)-th derivative
        target = q
        for _ in range(mult - 1):
            target = target.derivative()
        if q.degree > 50:
            centre = _polish_mp(target, centre)
        else:
            centre = _polish(_horner_ratio(_scaled_coeffs(target)), centre)
        out.extend([centre] * mult)
    bad = [r for r in out[low:] if not residual_ok(q, r)]
    if bad:
        raise RootFindingError(f"{len(bad)} of {q.degree} roots did not converge")
    return out


def residual_ok(p: IntPolynomial, r: complex, rel: float = 1e-10) -> bool:
    try:
        bound = rel * max(abs(c) for c in p.coeffs) * max(1.0, abs(r)) ** p.degree
        return abs(p(complex(r))) <= bound
    except OverflowError:
        return False


def preimages(p: IntPolynomial, target: complex) -> list[complex]:
    """Roots of p(z) - target."""
    target = complex(target)
    if p.is_zero or p.degree < 1:
        raise ValueError("preimages requires a polynomial of degree >= 1")
    if target.imag == 0 and target.real == int(target.real):
        return roots(poly_add(p, IntPolynomial((-int(target.real),))))
    coeffs = np.array([complex(c) for c in p.coeffs])
    coeffs[0] -= target
    low = 0
    out: list[complex] = []
    if coeffs[0] == 0:
        low = 1
        out.append(0j)
    coeffs = coeffs[low:]
    if len(coeffs) == 1:
        return out
    ratio = _horner_ratio(coeffs)
    approx = aberth(ratio, len(coeffs) - 1, cauchy_radius(coeffs))
    for centre, mult in cluster_roots(approx):
        if mult == 1:
            centre = _polish(ratio, centre)
        out.extend([centre] * mult)
    scale = np.abs(coeffs).max()
    for r in out[low:]:
        bound = 1e-10 * scale * max(1.0, abs(r)) ** (len(coeffs) - 1)
        if not abs(eval_poly(coeffs, r)) <= bound:
            raise RootFindingError(f"preimage {r} of {target} did not converge")
    return out


# ---------------------------------------------------------------------------
# orbits and periodic points
# ---------------------------------------------------------------------------


def _float_poly(p: IntPolynomial) -> np.ndarray:
    return np.array([float(c) for c in p.coeffs])


def eval_poly(coeffs: np.ndarray, z):
    acc = np.zeros_like(np.asarray(z, dtype=complex)) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


@dataclass
class Orbit:
    points: list[complex]
    escaped: bool = False
    eventually_periodic: bool = False
    preperiod: int | None = None
    period: int | None = None


def iterate(p: IntPolynomial, z0: complex, n: int, tol: float = 1e-9) -> Orbit:
    """Forward orbit z0, p(z0), ..., p^n(z0).

    The first revisit (within ``tol``) of an earlier orbit point sets the
    eventual-periodicity flag; the orbit stops early once |z| > 1e150.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    z = complex(z0)
    orbit = Orbit([z])
    for _ in range(n):
        try:
            z = complex(p(z))
        except OverflowError:
            orbit.escaped = True
            break
        if not math.isfinite(abs(z)) or abs(z) > ESCAPE_LIMIT:
            orbit.escaped = True
            break
        if not orbit.eventually_periodic:
            for j, w in enumerate(orbit.points):
                if abs(z - w) <= tol * max(1.0, abs(w)):
                    orbit.eventually_periodic = True
                    orbit.preperiod = j
                    orbit.period = len(orbit.points) - j
                    break
        orbit.points.append(z)
    return orbit


@dataclass
class Cycle:
    points: list[complex]
    period: int

    def max_error(self, p: IntPolynomial) -> float:
        """Largest |p(z_i) - z_{i+1}| / max(1, |z_{i+1}|) around the cycle."""
        pts = self.points
        err = 0.0
        for i, z in enumerate(pts):
            nxt = pts[(i + 1) % len(pts)]
            err = max(err, abs(complex(p(z)) - nxt) / max(1.0, abs(nxt)))
        return err

    def to_json(self) -> dict:
        return {"period": self.period, "points": [[z.real, z.imag] for z in self.points]}


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def iterate_minus_identity_ratio(coeffs: np.ndarray, n: int):
    """z -> (p^n(z) - z) / ((p^n)'(z) - 1) evaluated by composition."""
    dcoeffs = coeffs[1:] * np.arange(1, len(coeffs))

    def ratio(z):
        w = z
        dw = np.ones_like(z)
        for _ in range(n):
            dw = dw * eval_poly(dcoeffs, w)
            w = eval_poly(coeffs, w)
        return (w - z) / (dw - 1.0)

    return ratio


def escape_radius(p: IntPolynomial) -> float:
    """1 + sum |c_k| / |lead|; orbits leaving this disk go to infinity."""
    lead = abs(p.leading)
    return 1.0 + sum(abs(c) for c in p.coeffs) / lead


def periodic_points(
    p: IntPolynomial, n: int, exact: bool = False, cap: int = DEGREE_CAP
) -> list[Cycle]:
    """Cycles of p whose period divides n (only period n when ``exact``).

    Roots of ``p^n(z) - z`` are sorted by minimal period with a 1e-6
    test against each proper divisor, then grouped into orbits.
    """
    if p.is_zero or p.degree < 2:
        raise ValueError("periodic_points requires degree >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    degree = p.degree**n
    if degree > cap:
        raise ValueError(f"degree {p.degree}^{n} = {degree} exceeds the cap of {cap}")
    coeffs = _float_poly(p)
    ratio = iterate_minus_identity_ratio(coeffs, n)
    approx = aberth(ratio, degree, escape_radius(p))
    points = []
    for centre, mult in cluster_roots(approx):
        if mult == 1:
            centre = _polish(ratio, centre)
        points.append(centre)

    def min_period(z):
        w = z
        for d in range(1, n + 1):
            w = complex(p(w))
            if n % d == 0 and abs(w - z) <= PERIOD_TOL * max(1.0, abs(z)):
                return d
        return n

    periods = [min_period(z) for z in points]
    used = [False] * len(points)
    cycles = []
    for i, z in enumerate(points):
        if used[i]:
            continue
        d = periods[i]
        orbit = [z]
        used[i] = True
        w = z
        for _ in range(d - 1):
            w = complex(p(w))
            # snap to the independently computed root, which is more accurate
            j = min(
                (k for k in range(len(points)) if not used[k] and periods[k] == d),
                key=lambda k: abs(points[k] - w),
                default=None,
            )
            if j is not None and abs(points[j] - w) <= PERIOD_TOL * max(1.0, abs(w)):
                used[j] = True
                w = points[j]
            orbit.append(w)
        if exact and d != n:
            continue
        cycles.append(Cycle(orbit, d))
    cycles.sort(key=lambda c: (c.period, [(round(z.real, 9), round(z.imag, 9)) for z in c.points]))
    return cycles


# ---------------------------------------------------------------------------
# semigroup sample, backward orbits
# ---------------------------------------------------------------------------


@dataclass
class PolynomialSystem:
    """A finite set of generators of the word-polynomial semigroup."""

    generators: list[tuple[tuple[int, ...], IntPolynomial]]

    @classmethod
    def from_words(cls, words: Sequence[Sequence[int]]) -> "PolynomialSystem":
        return cls([(tuple(s), word_polynomial(s)) for s in words])

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a polynomial system needs at least one generator")
        for s, p in self.generators:
            if word_polynomial(s) != p:
                raise ValueError(f"{p} is not the word polynomial of {s}")


DEFAULT_SYSTEM_WORDS = ((1,), (1, 1))


@dataclass
class PointCloud:
    points: np.ndarray
    words: list[tuple[int, ...]] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    failures: int = 0

    def to_csv(self) -> str:
        lines = ["re,im"]
        lines += [f"{z.real:.17g},{z.imag:.17g}" for z in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PointCloud":
        rows = text.strip().splitlines()
        if rows[0].strip() != "re,im":
            raise ValueError("point cloud CSV must start with header 're,im'")
        pts = [complex(float(a), float(b)) for a, b in (r.split(",") for r in rows[1:])]
        return cls(np.array(pts, dtype=complex))


def _dedupe_mask(points: np.ndarray, tol: float) -> np.ndarray:
    keep = np.ones(len(points), dtype=bool)
    if len(points) < 2:
        return keep
    tree = cKDTree(np.column_stack([points.real, points.imag]))
    for i, j in sorted(tree.query_pairs(tol)):
        if keep[i] and keep[j]:
            keep[j] = False
    return keep


def _chain(system, target, count, rng, burn_in):
    pts, words, depths = [], [], []
    failures = 0
    z = complex(target)
    depth = 0
    while len(pts) < count:
        k = rng.integers(len(system.generators))
        s, p = system.generators[k]
        try:
            pre = preimages(p, z)
        except RootFindingError:
            failures += 1
            if failures > 100 + count:
                break
            continue
        z = pre[rng.integers(len(pre))]
        depth += 1
        if depth > burn_in:
            pts.append(z)
            words.append(s)
            depths.append(depth)
    return pts, words, depths, failures


def backward_orbit(
    system: PolynomialSystem,
    target: complex,
    samples: int,
    seed: int = 0,
    burn_in: int = 20,
    chains: int = 1,
    threads: int = 1,
    dedupe_tol: float = 1e-9,
) -> PointCloud:
    """Random inverse-branch iteration ("chaos game") from ``target``.

    Each step picks a generator and one of its preimage branches uniformly
    at random.  ``chains`` independent chains with seeds spawned from
    ``seed`` are merged in chain order, so the output does not depend on
    ``threads``.  Points closer than ``dedupe_tol`` are merged; the cloud is
    topped up until ``samples`` distinct points are collected.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if chains < 1:
        raise ValueError("chains must be >= 1")
    if all(p.degree < 2 for _, p in system.generators):
        raise ValueError("need a generator of degree >= 2")
    seeds = np.random.SeedSequence(seed).spawn(chains)
    rngs = [np.random.default_rng(sq) for sq in seeds]
    starts = [complex(target)] * chains
    all_pts: list[complex] = []
    all_words: list = []
    all_depths: list[int] = []
    failures = 0
    need = samples
    rounds = 0
    while need > 0 and rounds < 20:
        per_chain = -(-need // chains)
        jobs = [(system, starts[c], per_chain, rngs[c], burn_in if rounds == 0 else 0) for c in range(chains)]
        if threads > 1 and chains > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda a: _chain(*a), jobs))
        else:
            results = [_chain(*a) for a in jobs]
        for c, (pts, words, depths, fails) in enumerate(results):
            all_pts += pts
            all_words += words
            all_depths += depths
            failures += fails
            if pts:
                starts[c] = pts[-1]
        arr = np.array(all_pts, dtype=complex)
        keep = _dedupe_mask(arr, dedupe_tol)
        need = samples - int(keep.sum())
        rounds += 1
    arr = np.array(all_pts, dtype=complex)
    keep = np.flatnonzero(_dedupe_mask(arr, dedupe_tol))[:samples]
    return PointCloud(
        arr[keep],
        [all_words[i] for i in keep],
        [all_depths[i] for i in keep],
        failures,
    )


# ---------------------------------------------------------------------------
# escape-time rasters
# ---------------------------------------------------------------------------


@dataclass
class Raster:
    """Escape counts, row-major, row 0 at ``im_max``; 0 means never escaped."""

    window: tuple[float, float, float, float]
    width: int
    height: int
    data: np.ndarray
    max_iter: int = 0
    bailout: float = 0.0

    def __post_init__(self):
        if self.data.shape != (self.height, self.width):
            raise ValueError("raster data shape does not match width/height")

    def pixel_centres(self) -> np.ndarray:
        return pixel_grid(self.window, self.width, self.height)

    def pixel_of(self, z: complex) -> tuple[int, int]:
        """(row, col) of the cell containing z; cells are closed on their high side."""
        re_min, re_max, im_min, im_max = self.window
        dx = (re_max - re_min) / self.width
        dy = (im_max - im_min) / self.height
        col = min(self.width - 1, max(0, math.ceil((z.real - re_min) / dx) - 1))
        row = min(self.height - 1, max(0, math.ceil((im_max - z.imag) / dy) - 1))
        return row, col

    def escaping(self) -> np.ndarray:
        return self.data > 0

    def boundary_mask(self) -> np.ndarray:
        """Pixels whose 3x3 neighbourhood holds both escaping and non-escaping pixels."""
        esc = self.escaping()
        pad_e = np.pad(esc, 1, mode="edge")
        pad_k = np.pad(~esc, 1, mode="edge")
        any_e = np.zeros_like(esc)
        any_k = np.zeros_like(esc)
        h, w = esc.shape
        for di in range(3):
            for dj in range(3):
                any_e |= pad_e[di : di + h, dj : dj + w]
                any_k |= pad_k[di : di + h, dj : dj + w]
        return any_e & any_k

    def boundary_points(self) -> np.ndarray:
        return self.pixel_centres()[self.boundary_mask()]

    @property
    def pixel_diagonal(self) -> float:
        re_min, re_max, im_min, im_max = self.window
        return math.hypot((re_max - re_min) / self.width, (im_max - im_min) / self.height)

    def to_pgm(self) -> bytes:
        """Binary P5, counts clamped to 255."""
        body = np.clip(self.data, 0, 255).astype(np.uint8)
        header = f"P5\n{self.width} {self.height}\n255\n".encode()
        return header + body.tobytes()


def pixel_grid(window, width: int, height: int) -> np.ndarray:
    re_min, re_max, im_min, im_max = window
    if not (re_max > re_min and im_max > im_min):
        raise ValueError(f"window {window} has zero area")
    if width < 1 or height < 1:
        raise ValueError("raster needs positive width and height")
    xs = re_min + (np.arange(width) + 0.5) * (re_max - re_min) / width
    ys = im_max - (np.arange(height) + 0.5) * (im_max - im_min) / height
    return xs[None, :] + 1j * ys[:, None]


def escape_time(p: IntPolynomial, z: complex, max_iter: int, bailout: float) -> int:
    """First n >= 1 with |p^n(z)| > bailout, or 0."""
    coeffs = _float_poly(p)
    out = _escape_counts(coeffs, np.array([complex(z)]), max_iter, bailout)
    return int(out[0])


def _escape_counts(coeffs, grid, max_iter, bailout):
    flat = grid.ravel().copy()
    counts = np.zeros(flat.shape, dtype=np.int64)
    idx = np.arange(flat.size)
    z = flat
    with np.errstate(all="ignore"):
        for it in range(1, max_iter + 1):
            z = eval_poly(coeffs, z)
            esc = ~(np.abs(z) <= bailout)
            if esc.any():
                counts[idx[esc]] = it
                keep = ~esc
                idx = idx[keep]
                z = z[keep]
            if not idx.size:
                break
    return counts.reshape(grid.shape)


def escape_raster(
    p: IntPolynomial,
    window=(-1.0, 3.0, -2.0, 2.0),
    width: int = 512,
    height: int = 512,
    max_iter: int = 256,
    bailout: float | None = None,
    threads: int = 1,
) -> Raster:
    """Escape-time counts of p over a pixel grid (pixel centres sampled)."""
    if p.is_zero or p.degree < 2:
        raise ValueError("escape_raster requires degree >= 2")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    radius = escape_radius(p)
    if bailout is None:
        bailout = 1.0 + sum(abs(c) for c in p.coeffs)
    if bailout < radius:
        raise ValueError(f"bailout {bailout} is below the escape radius {radius}")
    grid = pixel_grid(window, width, height)
    coeffs = _float_poly(p)
    if threads > 1:
        bands = np.array_split(np.arange(height), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda rows: _escape_counts(coeffs, grid[rows], max_iter, bailout), bands))
        data = np.vstack(parts)
    else:
        data = _escape_counts(coeffs, grid, max_iter, bailout)
    return Raster(tuple(float(v) for v in window), width, height, data, max_iter, float(bailout))


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two complex point sets."""
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    d1 = cKDTree(pb).query(pa)[0].max()
    d2 = cKDTree(pa).query(pb)[0].max()
    return float(max(d1, d2))
