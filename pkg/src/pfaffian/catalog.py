"""Built-in worked examples, each stored as a CLI invocation plus the
report fields it is expected to produce."""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Any, Mapping

__all__ = ["Example", "CATALOG", "catalog", "get_example", "lookup"]


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    argv: tuple[str, ...]
    expected: Mapping[str, Any]     # dotted path in the result -> value


_ENTRIES = [
    Example(
        "rolling-tire",
        "Rolling without slipping: sin(psi) dx + cos(psi) dy on (x, y, theta, psi).",
        ("analyze", "--chart", "x,y,theta,psi", "--form", "sin(psi)*dx + cos(psi)*dy"),
        {"class": 3, "codimension": 2, "max_integral_dimension": 2,
         "canonical_tag": "ContactLike", "verdict_strength": "exact"},
    ),
    Example(
        "thermo-U",
        "Internal energy U(V, S) = exp(S)/V: contact form and Legendrian section.",
        ("thermo", "--potential", "U", "--function", "exp(S)/V"),
        {"pfaff.class": 5, "pfaff.max_integral_dimension": 2,
         "section.legendrian.verdict": "StructuralZero",
         "section.maxwell.verdict": "StructuralZero"},
    ),
    Example(
        "drag-linear",
        "Linear viscous drag on the kinematic chart (t, x, v).",
        ("drag", "--kind", "linear"),
        {"class": 6, "codimension": 3, "max_integral_dimension": 4, "det": "1",
         "table_match.verdict": "StructuralZero"},
    ),
    Example(
        "drag-kinetic",
        "Kinetic friction with alpha = mu_k N / |v|.",
        ("drag", "--kind", "kinetic"),
        {"class": 5, "codimension": 3, "max_integral_dimension": 4,
         "det_check.verdict": "ProbablyZero"},
    ),
    Example(
        "drag-nonlinear",
        "Quadratic drag with alpha = C_D A rho |v| / 2.",
        ("drag", "--kind", "nonlinear"),
        {"class": 6, "codimension": 3, "max_integral_dimension": 4,
         "det_check.verdict": "ProbablyZero"},
    ),
    Example(
        "contact-3d",
        "Contact form df - p dx on the first jet chart (x, f, p).",
        ("analyze", "--chart", "x,f,p", "--form", "df - p*dx"),
        {"class": 3, "codimension": 2, "max_integral_dimension": 1,
         "canonical_tag": "ContactLike"},
    ),
    Example(
        "canonical-theta",
        "Canonical 1-form p1 dx1 + p2 dx2 on a 4-dimensional cotangent chart.",
        ("analyze", "--chart", "x1,x2,p1,p2", "--form", "p1*dx1 + p2*dx2"),
        {"class": 4, "codimension": 2, "max_integral_dimension": 2, "canonical_tag": "EvenSum"},
    ),
    Example(
        "gauge-rank2",
        "Gauge potential x dy: decomposable field strength.",
        ("gauge", "--chart", "x,y,z,w", "--form", "x*dy", "--shift", "sin(x)"),
        {"rank": 2, "F": "dx^dy", "chern_simons": "0", "pfaff.class": 2,
         "gauge_invariance.verdict": "StructuralZero"},
    ),
    Example(
        "gauge-rank4",
        "Gauge potential x dy + z dw: field strength of rank four.",
        ("gauge", "--chart", "x,y,z,w", "--form", "x*dy + z*dw"),
        {"rank": 4, "F_wedge_F": "2*dx^dy^dz^dw", "pfaff.class": 4,
         "second_chern_integrand": "1/2*pi^(-2)*dx^dy^dz^dw"},
    ),
    Example(
        "clebsch-flow",
        "Covelocity dpsi + mu dlam with independent Clebsch variables.",
        ("vorticity", "--chart", "psi,mu,lam", "--form", "dpsi + mu*dlam"),
        {"flow": "ClebschFlow", "pfaff.class": 3},
    ),
    Example(
        "rigid-rotation",
        "Rigid rotation -y dx + x dy: vorticity 2 d/dz, integrating-factor flow.",
        ("vorticity", "--chart", "x,y,z", "--form", "-y*dx + x*dy"),
        {"flow": "IntegratingFactor", "vorticity_vector": "2*d/dz", "frobenius_scalar": "0"},
    ),
    Example(
        "oscillator",
        "Harmonic oscillator H = (p^2 + x^2)/2 on a 2-dimensional cotangent chart.",
        ("mech", "--n", "1", "--hamiltonian", "(p^2 + x^2)/2"),
        {"equations.x": "p", "equations.p": "-x", "conservation.verdict": "StructuralZero"},
    ),
]

CATALOG: dict[str, Example] = {e.name: e for e in _ENTRIES}


def catalog() -> list[Example]:
    return list(_ENTRIES)


def get_example(name: str) -> Example:
    try:
        return CATALOG[name]
    except KeyError:
        close = difflib.get_close_matches(name, CATALOG, n=3)
        hint = f"; did you mean {', '.join(close)}?" if close else ""
        raise KeyError(f"unknown example {name!r}{hint}") from None


def lookup(result: Mapping, path: str):
    node: Any = result
    for part in path.split("."):
        if not isinstance(node, Mapping) or part not in node:
            raise KeyError(path)
        node = node[part]
    return node
