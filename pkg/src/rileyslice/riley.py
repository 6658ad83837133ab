"""Certificates and constructive witnesses on the Riley slice parameter plane.

Everything is phrased in the slice parameter ``z = gamma(f, phi)``, the
lower-left entry of the second parabolic generator ``g = [[1, 0], [z, 1]]``.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import IntPolynomial, poly_iterate
from .dynamics import Cycle, RootFindingError, periodic_points, preimages, roots
from .words import (
    F_NUM,
    FreeWord,
    good_word,
    inv2,
    phi_matrix,
    polynomial_classes,
    principal_character,
    star_power,
    word_matrix,
    word_polynomial,
)

SLICE_REAL = 4.0
SLICE_IMAG = 2.0
WITNESS_TOL = 1e-9
BRANCH_TOL = 2e-9
PARABOLIC_TOL = 1e-9


@dataclass(frozen=True)
class Landmark:
    name: str
    z: complex
    description: str

    def to_json(self) -> dict:
        return {"name": self.name, "re": self.z.real, "im": self.z.imag, "description": self.description}


def triangle_landmark(p: int) -> Landmark:
    if p < 3:
        raise ValueError("triangle groups need p >= 3")
    return Landmark(
        f"triangle-{p}",
        complex(-4 * math.cos(math.pi / p) ** 2, 0.0),
        f"({p}, inf, inf) triangle group",
    )


FIGURE_EIGHT = Landmark("figure-eight", complex(0.5, math.sqrt(3) / 2), "figure-eight knot group, 2-bridge slope 5/3")

LANDMARKS: tuple[Landmark, ...] = (
    FIGURE_EIGHT,
    Landmark("whitehead", complex(1, 1), "Whitehead link group, 2-bridge slope 8/3"),
    Landmark("link-10/3", complex(1.5, math.sqrt(3) / 2), "2-bridge link of slope 10/3"),
    Landmark("link-12/5", complex(0.5, math.sqrt(7) / 2), "2-bridge link of slope 12/5"),
) + tuple(triangle_landmark(p) for p in range(3, 9))


def landmark(name: str) -> Landmark:
    for lm in LANDMARKS:
        if lm.name == name:
            return lm
    raise KeyError(f"unknown landmark {name!r}")


# ---------------------------------------------------------------------------
# region certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionCertificate:
    kind: str  # "certified_slice" | "certified_complement" | "unknown"
    witness: str


def _is_real(z: complex, tol: float) -> bool:
    return abs(z.imag) <= tol * max(1.0, abs(z))


def _is_imaginary(z: complex, tol: float) -> bool:
    return abs(z.real) <= tol * max(1.0, abs(z))


def in_certified_slice(z: complex, tol: float = 1e-9) -> bool:
    """Real with |z| > 4, or imaginary with |Im z| > 2."""
    z = complex(z)
    return (_is_real(z, tol) and abs(z.real) > SLICE_REAL) or (
        _is_imaginary(z, tol) and abs(z.imag) > SLICE_IMAG
    )


def certify_region(
    z: complex,
    tol: float = 1e-9,
    cycle: Cycle | None = None,
    poly: IntPolynomial | None = None,
) -> RegionCertificate:
    """Conservative classification using only axis facts, landmarks and bounded cycles.

    The slice tests run first, so the two certified kinds never overlap.
    """
    z = complex(z)
    if _is_real(z, tol) and abs(z.real) > SLICE_REAL:
        return RegionCertificate("certified_slice", f"real axis, |z| = {abs(z.real):.6g} > 4")
    if _is_imaginary(z, tol) and abs(z.imag) > SLICE_IMAG:
        return RegionCertificate("certified_slice", f"imaginary axis, |Im z| = {abs(z.imag):.6g} > 2")
    if z == 0:
        return RegionCertificate("unknown", "z = 0 is the reducible point")
    if _is_real(z, tol):
        return RegionCertificate("certified_complement", f"real axis, 0 < |z| <= 4")
    if _is_imaginary(z, tol):
        return RegionCertificate("certified_complement", f"imaginary axis, 0 < |Im z| <= 2")
    for lm in LANDMARKS:
        if abs(z - lm.z) <= tol * max(1.0, abs(z)):
            return RegionCertificate("certified_complement", f"landmark {lm.name}")
    if cycle is not None and poly is not None:
        on_cycle = any(abs(z - w) <= tol * max(1.0, abs(z)) for w in cycle.points)
        if on_cycle and cycle.max_error(poly) <= WITNESS_TOL:
            return RegionCertificate(
                "certified_complement", f"point of a verified period-{cycle.period} cycle of {poly}"
            )
    return RegionCertificate("unknown", "no certificate applies")


# ---------------------------------------------------------------------------
# screens and audits
# ---------------------------------------------------------------------------


@dataclass
class ScreenResult:
    z: complex
    status: str  # "nondiscrete_certified" | "inconclusive"
    chain: list[tuple[tuple[int, ...], complex]] = field(default_factory=list)


def sl_screen(z: complex, steps: int = 5) -> ScreenResult:
    """Squaring screen: for 0 < |z| < 1 the words (1), (1)*(1), ... give traces z^(2^k) -> 0.

    One-sided: |z| >= 1 is inconclusive.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z = 0 is the reducible (elementary) point")
    if abs(z) >= 1:
        return ScreenResult(z, "inconclusive")
    chain = [((), z)]
    value = z
    for k in range(1, steps + 1):
        value = value * value
        chain.append((star_power((1,), k), value))
    return ScreenResult(z, "nondiscrete_certified", chain)


@dataclass
class AuditReport:
    word: tuple[int, ...] | None
    passed: bool
    roots: list[complex]
    moduli: list[float]
    violations: list[complex]


def root_location_audit(p: IntPolynomial, word: Sequence[int] | None = None, tol: float = 1e-8) -> AuditReport:
    """Word polynomials have no roots in the certified slice region."""
    rts = roots(p)
    bad = [r for r in rts if in_certified_slice(r, tol)]
    return AuditReport(
        tuple(word) if word is not None else None,
        not bad,
        rts,
        [abs(r) for r in rts],
        bad,
    )


SAMPLE_SLICE_POINTS = (5 + 0j, -4.5 + 0j, 3j, -2.5j)


@dataclass
class BatchAudit:
    words: int
    root_failures: list[tuple[int, ...]]
    value_failures: list[tuple[tuple[int, ...], complex, complex]]
    min_modulus: float

    @property
    def passed(self) -> bool:
        return not self.root_failures and not self.value_failures


def batch_audit(
    words: Iterable[Sequence[int]],
    points: Sequence[complex] = SAMPLE_SLICE_POINTS + tuple(lm.z for lm in LANDMARKS),
    zero_tol: float = 1e-9,
) -> BatchAudit:
    """Root audit plus |p(z)| >= 1 - 1e-9 (or p(z) = 0) at each sample point."""
    n = 0
    root_fail, value_fail = [], []
    min_mod = math.inf
    for s in words:
        n += 1
        p = word_polynomial(s)
        if not root_location_audit(p, s).passed:
            root_fail.append(tuple(s))
        for z in points:
            v = complex(p(complex(z)))
            scale = max(1.0, abs(z)) ** p.degree
            if abs(v) <= zero_tol * scale:
                continue
            min_mod = min(min_mod, abs(v))
            if abs(v) < 1 - 1e-9:
                value_fail.append((tuple(s), complex(z), v))
    return BatchAudit(n, root_fail, value_fail, min_mod)


# ---------------------------------------------------------------------------
# matrix-level verification
# ---------------------------------------------------------------------------


def conjugate_word(s: Sequence[int]) -> FreeWord:
    """w f w^-1 as a word; it always has an even number of b-letters."""
    w = good_word(s)
    return w + FreeWord((("a", 1),)) + w.inverse()


def _character_residual(s, zeta, z0, branch):
    phi = phi_matrix(zeta, branch)
    W = word_matrix(s, phi)
    G = W @ F_NUM @ inv2(W)
    chi = principal_character(F_NUM, G)
    target = complex(z0) ** 2
    res = max(
        abs(chi.gamma - target) / max(1.0, abs(target)),
        abs(chi.beta_a),
        abs(chi.beta_b),
    )
    return chi, res


@dataclass
class WitnessReport:
    target: complex
    lam: complex
    word: tuple[int, ...] | None
    zeta: complex | None
    distance: float
    residual: float = math.inf
    preimage_residual: float = math.inf
    branch_check: float = math.inf
    parity_even: bool = False
    accepted: bool = False
    searched: int = 0
    diagnostics: str = ""

    def to_json(self) -> dict:
        def c(z):
            return None if z is None else [z.real, z.imag]

        return {
            "target": c(self.target),
            "lambda": c(self.lam),
            "word": list(self.word) if self.word is not None else None,
            "zeta": c(self.zeta),
            "distance": self.distance,
            "residual": self.residual,
            "preimage_residual": self.preimage_residual,
            "branch_check": self.branch_check,
            "parity_even": self.parity_even,
            "accepted": self.accepted,
            "searched": self.searched,
            "diagnostics": self.diagnostics,
        }


def verify_witness(s: Sequence[int], zeta: complex, z0: complex, lam: complex = 0j) -> WitnessReport:
    """Check at matrix level that <f, W f W^-1> has character (z0^2, 0, 0) at phi_zeta."""
    s = tuple(s)
    p = word_polynomial(s)
    pre_res = abs(complex(p(zeta)) - z0) / max(1.0, abs(z0))
    chi_p, res_p = _character_residual(s, zeta, z0, +1)
    chi_m, res_m = _character_residual(s, zeta, z0, -1)
    branch = abs(chi_p.gamma - chi_m.gamma) / max(1.0, abs(z0) ** 2)
    parity = conjugate_word(s).count("b") % 2 == 0
    res = max(res_p, res_m)
    ok = pre_res <= WITNESS_TOL and res <= WITNESS_TOL and branch <= BRANCH_TOL and parity
    diag = "" if ok else (
        f"preimage residual {pre_res:.3g}, character residual {res:.3g}, "
        f"branch difference {branch:.3g}, even parity {parity}"
    )
    return WitnessReport(complex(z0), complex(lam), s, complex(zeta), abs(zeta - lam), res, pre_res, branch, parity, ok, 0, diag)


def _best_preimage(s, z0, lam):
    try:
        pre = preimages(word_polynomial(s), z0)
    except RootFindingError:
        return None
    zeta = min(pre, key=lambda w: abs(w - lam))
    return abs(zeta - lam), zeta


def supergroup_witness(
    z0: complex,
    lam: complex,
    max_len: int = 3,
    max_exp: int = 2,
    limit: int | None = None,
    threads: int = 1,
) -> WitnessReport:
    """Search words for a preimage zeta of z0 closest to lam, then verify it.

    At an accepted zeta, ``<f, phi_zeta f phi_zeta^-1>`` contains a conjugate
    of the two-parabolic group with parameter z0.
    """
    z0, lam = complex(z0), complex(lam)
    if z0 == 0:
        raise ValueError("z0 must be non-zero")
    words = list(polynomial_classes(max_len, max_exp, limit))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(lambda s: _best_preimage(s, z0, lam), words))
    else:
        found = [_best_preimage(s, z0, lam) for s in words]
    best = None
    for s, hit in zip(words, found):
        if hit is not None and (best is None or hit[0] < best[1]):
            best = (s, hit[0], hit[1])
    if best is None:
        return WitnessReport(z0, lam, None, None, math.inf, searched=len(words), diagnostics="no preimage found")
    report = verify_witness(best[0], best[2], z0, lam)
    report.searched = len(words)
    return report


def density_trend(
    z0: complex, lam: complex, limits: Sequence[int], max_len: int = 6, max_exp: int = 3
) -> list[float]:
    """Best |zeta - lam| after the first n candidate words, for each n in ``limits``.

    Budgets are prefixes of one enumeration, so the sequence never increases.
    """
    z0, lam = complex(z0), complex(lam)
    checkpoints = sorted(set(limits))
    out = {}
    best = math.inf
    count = 0
    for s in polynomial_classes(max_len, max_exp, checkpoints[-1]):
        hit = _best_preimage(s, z0, lam)
        if hit is not None:
            best = min(best, hit[0])
        count += 1
        if count in checkpoints:
            out[count] = best
    return [out.get(n, best) for n in limits]


# ---------------------------------------------------------------------------
# Nielsen classes and non-freeness
# ---------------------------------------------------------------------------


def distinct_count(values: Sequence[complex], tol: float = 1e-8) -> int:
    reps: list[complex] = []
    for v in values:
        if all(abs(v - r) > tol for r in reps):
            reps.append(v)
    return len(reps)


@dataclass
class NielsenCycle:
    cycle: Cycle
    gamma_squares: list[complex]
    distinct: int
    cycle_error: float


@dataclass
class NielsenReport:
    word: tuple[int, ...]
    N: int
    cycles: list[NielsenCycle]
    achieving: list[NielsenCycle]
    matrix_check: list[tuple[int, float]] = field(default_factory=list)
    note: str = ""

    @property
    def found(self) -> bool:
        return bool(self.achieving)

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "N": self.N,
            "cycles": [
                {
                    "points": [[z.real, z.imag] for z in c.cycle.points],
                    "gamma_squares": [[v.real, v.imag] for v in c.gamma_squares],
                    "distinct": c.distinct,
                    "cycle_error": c.cycle_error,
                }
                for c in self.cycles
            ],
            "achieving": len(self.achieving),
            "matrix_check": [{"i": i, "error": e} for i, e in self.matrix_check],
            "note": self.note,
        }


def matrix_iterate_check(s: Sequence[int], gamma: complex, depth: int) -> list[tuple[int, float]]:
    """Relative error between gamma(f, w_{*^i s}) at phi_gamma and p^(i)(gamma), i = 1..depth.

    ``gamma(f, W)`` is evaluated as tr(f W f^-1 W^-1) - 2 on the numeric matrices.
    """
    p = word_polynomial(s)
    phi = phi_matrix(gamma)
    out = []
    value = complex(gamma)
    for i in range(1, depth + 1):
        value = complex(p(value))
        W = word_matrix(star_power(s, i), phi)
        W = W / cmath.sqrt(W[0, 0] * W[1, 1] - W[0, 1] * W[1, 0])
        g = principal_character(F_NUM, W).gamma
        out.append((i, abs(g - value) / max(1.0, abs(value))))
    return out


def nielsen_witness(s: Sequence[int], N: int, verify_depth: int | None = None) -> NielsenReport:
    """Period-2N cycles of p_s and the number of distinct gamma^2 values on each.

    A cycle with at least N distinct squares gives a group with at least N
    Nielsen classes of parabolic generating pairs.
    """
    s = tuple(s)
    if N < 1:
        raise ValueError("N must be >= 1")
    p = word_polynomial(s)
    if p.degree < 2:
        raise ValueError("word polynomial must have degree >= 2")
    cycles = periodic_points(p, 2 * N, exact=True)
    entries = []
    for c in cycles:
        squares = [z * z for z in c.points]
        entries.append(NielsenCycle(c, squares, distinct_count(squares), c.max_error(p)))
    achieving = [e for e in entries if e.distinct >= N]
    report = NielsenReport(s, N, entries, achieving)
    if not cycles:
        report.note = f"no cycle of exact period {2 * N}"
        return report
    pick = achieving[0] if achieving else entries[0]
    depth = verify_depth if verify_depth is not None else 2 * N
    report.matrix_check = matrix_iterate_check(s, pick.cycle.points[0], depth)
    return report


@dataclass
class NonfreeCertificate:
    z: complex
    word: tuple[int, ...]
    value: complex
    fixed_residual: float
    trace_residual: float
    searched: int

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "word": list(self.word),
            "value": [self.value.real, self.value.imag],
            "fixed_residual": self.fixed_residual,
            "trace_residual": self.trace_residual,
            "searched": self.searched,
        }


def nonfree_certificate(
    z: complex, max_len: int = 3, max_exp: int = 3, limit: int | None = None
) -> NonfreeCertificate | None:
    """Search for a word polynomial fixing z; a hit proves Gamma_z is not free.

    ``None`` only means nothing was found within the budget.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z must be non-zero")
    tol = WITNESS_TOL * max(1.0, abs(z))
    searched = 0
    phi = phi_matrix(z)
    gamma_phi = principal_character(F_NUM, phi).gamma
    for s in polynomial_classes(max_len, max_exp, limit):
        searched += 1
        value = complex(word_polynomial(s)(z))
        if abs(value - z) > tol:
            continue
        W = word_matrix(s, phi)
        gamma_w = principal_character(F_NUM, W).gamma
        trace_res = abs(gamma_w - gamma_phi) / max(1.0, abs(z))
        if trace_res <= WITNESS_TOL:
            return NonfreeCertificate(z, s, value, abs(value - z), trace_res, searched)
    return None


def iterate_polynomial(s: Sequence[int], n: int) -> IntPolynomial:
    return poly_iterate(word_polynomial(s), n)
