"""Cartan class and normal-form classification of a single Pfaffian form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from pfaffian.expr import Expr, _coerce, add, differentiate, evaluate, mul, simplify
from pfaffian.forms import Chart, DiffForm, d, form_is_zero, forms_equal, wedge, wedge_power
from pfaffian.zerotest import Domain, Verdict, ZeroConfig, ZeroVerdict, weakest

__all__ = [
    "ZeroFormError", "SingularPointError", "InconsistentSequence",
    "SequenceEntry", "IntegrabilitySequence", "PfaffReport", "FrobeniusResult",
    "DecompositionResult", "integrability_sequence", "cartan_class",
    "frobenius_test", "verify_decomposition", "annihilator_basis",
    "canonical_tag", "normal_form", "DECOMPOSITION_KINDS",
]


class ZeroFormError(ValueError):
    """The zero 1-form has no class."""


class SingularPointError(ValueError):
    """The covector vanishes at the requested point."""


class InconsistentSequence(RuntimeError):
    """dI_{2k-2} disagreed with (dω)^k; indicates a bug, never expected."""


@dataclass(frozen=True)
class SequenceEntry:
    index: int
    form: DiffForm
    verdict: ZeroVerdict
    reason: str = "symbolic"          # "symbolic" or "dimensional"
    consistency: ZeroVerdict | None = None

    @property
    def vanishes(self) -> bool:
        return self.verdict.is_zero

    def to_json(self) -> dict:
        out = {"p": self.index, "degree": self.index + 1, "form": self.form.render(),
               "reason": self.reason, **self.verdict.to_json()}
        if self.consistency is not None:
            out["power_check"] = self.consistency.kind.value
        return out


@dataclass(frozen=True)
class IntegrabilitySequence:
    entries: tuple[SequenceEntry, ...]

    def __getitem__(self, p: int) -> SequenceEntry:
        return self.entries[p]

    def __len__(self):
        return len(self.entries)

    @property
    def first_vanishing(self) -> int:
        return self.entries[-1].index


_TAGS = {1: ("Exact", "dλ"), 2: ("IntegratingFactor", "μdν"),
         3: ("ContactLike", "dλ+μdν"), 4: ("EvenSum", "μ₁dν¹+μ₂dν²")}


def canonical_tag(p: int) -> str:
    if p in _TAGS:
        return _TAGS[p][0]
    return "GeneralizedOdd" if p % 2 else "GeneralizedEven"


def normal_form(p: int) -> str:
    """Normal form of a class-``p`` form, as a short string."""
    if p in _TAGS:
        return _TAGS[p][1]
    m = (p + 1) // 2
    if p % 2:
        return f"dλ+Σ_{{h=1}}^{{{m - 1}}} μ_h dν^h"
    return f"Σ_{{h=1}}^{{{m}}} μ_h dν^h"


@dataclass(frozen=True)
class PfaffReport:
    dimension: int
    class_: int
    codimension: int
    max_integral_dimension: int
    tag: str
    normal_form: str
    weakest: ZeroVerdict
    sequence: IntegrabilitySequence

    @property
    def exactness(self) -> str:
        """"exact" when the class rests only on structural/dimensional zeros."""
        return "probabilistic" if self.weakest.kind is Verdict.PROBABLY_ZERO else "exact"

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "class": self.class_,
            "codimension": self.codimension,
            "max_integral_dimension": self.max_integral_dimension,
            "canonical_tag": self.tag,
            "normal_form": self.normal_form,
            "verdict_strength": self.exactness,
            "weakest_verdict": self.weakest.to_json(),
            "sequence": [e.to_json() for e in self.sequence.entries],
        }


def integrability_sequence(omega: DiffForm, domain: Domain | None = None,
                           config: ZeroConfig | None = None) -> IntegrabilitySequence:
    """I_0 = ω, I_{2k-1} = dI_{2k-2}, I_{2k} = ω ∧ I_{2k-1}, up to the first zero."""
    if omega.degree != 1:
        raise ValueError("integrability_sequence needs a 1-form")
    v0 = form_is_zero(omega, domain, config)
    if v0.is_zero:
        raise ZeroFormError("the zero form has no class")
    n = omega.chart.dim
    entries = [SequenceEntry(0, omega, v0)]
    dw = d(omega)
    prev = omega
    p = 1
    while True:
        if p + 1 > n:
            entries.append(SequenceEntry(p, DiffForm.zero(omega.chart, p + 1),
                                         ZeroVerdict(Verdict.STRUCTURAL_ZERO), "dimensional"))
            break
        check = None
        if p % 2:
            current = d(prev)
            k = (p + 1) // 2
            check = forms_equal(current, wedge_power(dw, k), domain, config)
            if not check.is_zero:
                raise InconsistentSequence(f"I_{p} differs from (dω)^{k}")
        else:
            current = wedge(omega, prev)
        v = form_is_zero(current, domain, config)
        entries.append(SequenceEntry(p, current, v, "symbolic", check))
        if v.is_zero:
            break
        prev = current
        p += 1
    return IntegrabilitySequence(tuple(entries))


def cartan_class(omega: DiffForm, domain: Domain | None = None,
                 config: ZeroConfig | None = None) -> PfaffReport:
    seq = integrability_sequence(omega, domain, config)
    p = seq.first_vanishing
    m = (p + 1) // 2
    n = omega.chart.dim
    verdicts = [e.verdict for e in seq.entries if e.vanishes]
    verdicts += [e.consistency for e in seq.entries if e.consistency is not None]
    return PfaffReport(
        dimension=n, class_=p, codimension=m, max_integral_dimension=n - m,
        tag=canonical_tag(p), normal_form=normal_form(p),
        weakest=weakest(verdicts), sequence=seq,
    )


@dataclass(frozen=True)
class FrobeniusResult:
    form: DiffForm                 # ω ∧ dω
    verdict: ZeroVerdict
    component: Expr | None         # classical three-variable expression, n == 3 only

    @property
    def integrable(self) -> bool:
        return self.verdict.is_zero

    def to_json(self) -> dict:
        out = {"frobenius_form": self.form.render(), "integrable": self.integrable,
               **self.verdict.to_json()}
        if self.component is not None:
            out["classical_expression"] = str(self.component)
        return out


def frobenius_test(omega: DiffForm, domain: Domain | None = None,
                   config: ZeroConfig | None = None) -> FrobeniusResult:
    if omega.degree != 1:
        raise ValueError("frobenius_test needs a 1-form")
    three = wedge(omega, d(omega))
    verdict = form_is_zero(three, domain, config)
    component = None
    if omega.chart.dim == 3:
        x1, x2, x3 = omega.chart.names
        w1, w2, w3 = (omega.coeff(i) for i in range(3))
        dd = differentiate
        component = simplify(add(
            mul(w1, dd(w2, x3) - dd(w3, x2)),
            mul(w2, dd(w3, x1) - dd(w1, x3)),
            mul(w3, dd(w1, x2) - dd(w2, x1)),
        ))
    return FrobeniusResult(three, verdict, component)


DECOMPOSITION_KINDS = {
    "exact": (("lambda",), 1),
    "integrating-factor": (("mu", "nu"), 2),
    "contact": (("lambda", "mu", "nu"), 3),
    "even-sum": (("mu1", "nu1", "mu2", "nu2"), 4),
}


@dataclass(frozen=True)
class DecompositionResult:
    kind: str
    built: DiffForm
    verdict: ZeroVerdict
    implied_class: int
    analyzed_class: int

    @property
    def valid(self) -> bool:
        return self.verdict.is_zero

    @property
    def class_consistent(self) -> bool:
        return self.implied_class == self.analyzed_class

    def to_json(self) -> dict:
        return {"kind": self.kind, "built": self.built.render(), "valid": self.valid,
                "implied_class": self.implied_class, "analyzed_class": self.analyzed_class,
                "class_consistent": self.class_consistent, **self.verdict.to_json()}


def _exterior_d0(chart: Chart, f: Expr) -> DiffForm:
    return d(chart.scalar(f))


def verify_decomposition(omega: DiffForm, kind: str, functions: Mapping[str, Expr],
                         domain: Domain | None = None,
                         config: ZeroConfig | None = None) -> DecompositionResult:
    """Check ``ω`` against a user-supplied normal form of the given kind.

    ``kind`` is one of ``exact`` {lambda}, ``integrating-factor`` {mu, nu},
    ``contact`` {lambda, mu, nu} or ``even-sum`` {mu1, nu1, mu2, nu2}.
    """
    if kind not in DECOMPOSITION_KINDS:
        raise ValueError(f"unknown decomposition kind {kind!r}")
    names, implied = DECOMPOSITION_KINDS[kind]
    chart = omega.chart
    if implied > chart.dim:
        raise ValueError(f"a {kind} normal form needs at least {implied} coordinates")
    missing = [n for n in names if n not in functions]
    if missing:
        raise ValueError(f"missing candidate functions {missing}")
    f = {n: _coerce(functions[n]) for n in names}
    dd = lambda e: _exterior_d0(chart, e)  # noqa: E731
    if kind == "exact":
        built = dd(f["lambda"])
    elif kind == "integrating-factor":
        built = dd(f["nu"]).scale(f["mu"])
    elif kind == "contact":
        built = dd(f["lambda"]) + dd(f["nu"]).scale(f["mu"])
    else:
        built = dd(f["nu1"]).scale(f["mu1"]) + dd(f["nu2"]).scale(f["mu2"])
    verdict = forms_equal(omega, built, domain, config)
    analyzed = cartan_class(omega, domain, config).class_
    return DecompositionResult(kind, built, verdict, implied, analyzed)


def annihilator_basis(omega: DiffForm, point: Mapping[str, float],
                      tol: float = 1e-12) -> list[np.ndarray]:
    """Basis of the hyperplane killed by ω at ``point``.

    Uses the largest component as pivot: ``e_j - (ω_j / ω_k) e_k``, which keeps
    basis vectors aligned with coordinate directions where possible.
    """
    if omega.degree != 1:
        raise ValueError("annihilator_basis needs a 1-form")
    n = omega.chart.dim
    covector = np.array([evaluate(omega.coeff(i), point) for i in range(n)])
    k = int(np.argmax(np.abs(covector)))
    if abs(covector[k]) <= tol:
        raise SingularPointError(f"ω vanishes at {dict(point)}")
    basis = []
    for j in range(n):
        if j == k:
            continue
        v = np.zeros(n)
        v[j] = 1.0
        v[k] = -covector[j] / covector[k]
        basis.append(v)
    return basis
