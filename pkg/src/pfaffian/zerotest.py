"""Probabilistic zero testing of expressions.

An expression is first simplified; if that yields the constant 0 the answer
is a structural zero.  Otherwise it is evaluated at seeded random points of a
box domain.  One value that is clearly nonzero is a certificate (a witness);
if every probe is below tolerance the verdict is *probably zero*.

For a nonzero polynomial of total degree ``D`` sampled on a grid of ``S``
values per variable, one probe vanishes with probability at most ``D / S``
(Schwartz-Zippel), so ``K`` independent probes give a false accept with
probability at most ``(D / S) ** K``.  We model double-precision uniform
sampling as ``S = 2**32`` distinct values; see :func:`false_accept_bound`.
"""

from __future__ import annotations

import enum
import zlib
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from pfaffian.expr import Const, Expr, EvaluationError, evaluate, free_symbols, polynomial_degree, simplify
from pfaffian.tape import compile_tape, run_tape

__all__ = [
    "Verdict", "ZeroVerdict", "Domain", "ZeroConfig", "IndeterminateError",
    "is_zero", "equals", "weakest", "false_accept_bound", "DEFAULT_CONFIG",
]

SAMPLE_GRID = 2.0 ** 32


class IndeterminateError(RuntimeError):
    """The domain is (almost) everywhere singular for the expression."""


class Verdict(enum.Enum):
    STRUCTURAL_ZERO = "StructuralZero"
    PROBABLY_ZERO = "ProbablyZero"
    NONZERO = "NonZero"


@dataclass(frozen=True)
class ZeroVerdict:
    kind: Verdict
    probes: int = 0
    tol: float = 0.0
    seed: int | None = None
    label: int | None = None
    witness: Mapping[str, float] | None = None
    value: float | None = None
    bound: float | None = None      # false-accept bound, polynomial inputs only
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return self.kind is not Verdict.NONZERO

    @property
    def structural(self) -> bool:
        return self.kind is Verdict.STRUCTURAL_ZERO

    def __bool__(self):
        raise TypeError("use .is_zero to read a ZeroVerdict")

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind.value}
        if self.kind is Verdict.PROBABLY_ZERO:
            out.update(probes=self.probes, tol=self.tol, seed=self.seed, label=self.label)
            if self.bound is not None:
                out["false_accept_bound"] = self.bound
        elif self.kind is Verdict.NONZERO:
            out["witness"] = {k: float(v) for k, v in sorted((self.witness or {}).items())}
            out["value"] = self.value
        if self.note:
            out["note"] = self.note
        return out


STRUCTURAL = ZeroVerdict(Verdict.STRUCTURAL_ZERO)
_RANK = {Verdict.STRUCTURAL_ZERO: 0, Verdict.PROBABLY_ZERO: 1, Verdict.NONZERO: 2}


def weakest(verdicts) -> ZeroVerdict:
    """Combine verdicts of a conjunction: any NonZero wins, then ProbablyZero."""
    out = STRUCTURAL
    for v in verdicts:
        if _RANK[v.kind] > _RANK[out.kind]:
            out = v
            if v.kind is Verdict.NONZERO:
                break
    return out


@dataclass(frozen=True)
class Domain:
    """Box sampling domain with an optional rejection predicate.

    ``exclude`` receives a mapping of variable name to sampled numpy column
    and returns a boolean mask of points to drop.
    """

    intervals: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    default: tuple[float, float] = (-2.0, 2.0)
    exclude: Callable[[Mapping[str, np.ndarray]], np.ndarray] | None = None

    def __post_init__(self):
        for name, (lo, hi) in list(self.intervals.items()) + [("<default>", self.default)]:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError(f"bad interval for {name}: ({lo}, {hi})")

    def interval(self, name: str) -> tuple[float, float]:
        return tuple(self.intervals.get(name, self.default))

    def with_intervals(self, extra: Mapping[str, tuple[float, float]]) -> "Domain":
        merged = dict(self.intervals)
        merged.update(extra)
        return Domain(merged, self.default, self.exclude)


@dataclass(frozen=True)
class ZeroConfig:
    probes: int = 32
    tol: float = 1e-9
    seed: int = 0
    retry_factor: int = 100

    def __post_init__(self):
        if self.probes < 1 or self.tol <= 0 or self.seed < 0 or self.retry_factor < 1:
            raise ValueError("probes, tol, retry_factor must be positive; seed >= 0")


DEFAULT_CONFIG = ZeroConfig()
DEFAULT_DOMAIN = Domain()


def false_accept_bound(degree: int, probes: int, grid: float = SAMPLE_GRID) -> float:
    """Upper bound on accepting a nonzero degree-``degree`` polynomial."""
    if degree <= 0:
        return 0.0
    return float(min(1.0, degree / grid) ** probes)


def _label(e: Expr) -> int:
    return zlib.crc32(repr(e.key).encode())


def _sample(rng, names, domain: Domain, n: int) -> np.ndarray:
    cols = []
    for name in names:
        lo, hi = domain.interval(name)
        cols.append(rng.uniform(lo, hi, size=n))
    pts = np.column_stack(cols) if cols else np.zeros((n, 0))
    if domain.exclude is not None and names:
        mask = np.asarray(domain.exclude({nm: pts[:, i] for i, nm in enumerate(names)}), dtype=bool)
        pts = pts[~mask]
    return pts


def is_zero(e: Expr, domain: Domain | None = None, config: ZeroConfig | None = None,
            label: int | None = None) -> ZeroVerdict:
    """Decide whether ``e`` vanishes identically on ``domain``.

    The random stream is derived from ``config.seed`` and ``label`` (by
    default a checksum of the simplified expression), so verdicts are
    reproducible and independent of call order.
    """
    domain = domain or DEFAULT_DOMAIN
    config = config or DEFAULT_CONFIG
    s = simplify(e)
    if isinstance(s, Const):
        if s.value == 0:
            return STRUCTURAL
        return ZeroVerdict(Verdict.NONZERO, witness={}, value=float(s.value))
    names = tuple(sorted(free_symbols(s)))
    if label is None:
        label = _label(s)
    rng = np.random.default_rng([config.seed, label])
    tape = compile_tape(s, names)
    need = config.probes
    budget = config.retry_factor * config.probes
    tried = 0
    accepted = 0
    while accepted < need:
        if tried >= budget:
            raise IndeterminateError(
                f"only {accepted} of {need} probes were regular after {tried} samples")
        batch = min(budget - tried, max(need - accepted, 8) * 2)
        pts = _sample(rng, names, domain, batch)
        tried += batch
        if len(pts) == 0:
            continue
        values, mags, ok = run_tape(tape, pts)
        for i in np.flatnonzero(ok):
            if accepted >= need:
                break
            accepted += 1
            threshold = config.tol * max(1.0, mags[i])
            if abs(values[i]) >= threshold:
                point = {nm: float(pts[i, j]) for j, nm in enumerate(names)}
                try:
                    value = evaluate(s, point)
                except EvaluationError:
                    continue
                if abs(value) >= threshold:
                    return ZeroVerdict(Verdict.NONZERO, probes=accepted, tol=config.tol,
                                       seed=config.seed, label=label,
                                       witness=point, value=value)
    degree = polynomial_degree(s)
    bound = None if degree is None else false_accept_bound(degree, need)
    return ZeroVerdict(Verdict.PROBABLY_ZERO, probes=need, tol=config.tol,
                       seed=config.seed, label=label, bound=bound)


def equals(a: Expr, b: Expr, domain: Domain | None = None,
           config: ZeroConfig | None = None) -> ZeroVerdict:
    """Equality by zero testing the difference."""
    return is_zero(a - b, domain, config)
