"""Exterior algebra over a coordinate chart.

A :class:`DiffForm` of degree ``k`` stores one coefficient per strictly
increasing index tuple of length ``k``.  Coefficients are simplified on
construction and those that simplify to ``0`` are dropped, so the zero form is
the empty mapping.  Forms whose degree exceeds the chart dimension can only be
zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from pfaffian.expr import ONE, ZERO, Const, Expr, _coerce, add, differentiate, free_symbols, mul, power, simplify, substitute
from pfaffian.render import render_coefficient_term
from pfaffian.zerotest import Domain, ZeroConfig, ZeroVerdict, Verdict, is_zero, weakest

__all__ = [
    "Chart", "DiffForm", "VectorField", "SmoothMap", "VolumeElement",
    "ChartMismatch", "DegenerateVolume",
    "wedge", "wedge_all", "d", "partial_d", "interior", "pullback", "wedge_power",
    "poincare_dual_vector", "poincare_dual_form", "rank_of_two_form",
    "form_is_zero", "forms_equal", "sort_sign",
]


class ChartMismatch(ValueError):
    pass


class DegenerateVolume(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    names: tuple[str, ...]

    def __init__(self, names: Iterable[str] | str):
        if isinstance(names, str):
            names = [n for n in names.replace(",", " ").split() if n]
        names = tuple(names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        object.__setattr__(self, "names", names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a coordinate of {self}") from None

    def __contains__(self, name) -> bool:
        return name in self.names

    def coords(self) -> tuple[Expr, ...]:
        from pfaffian.expr import Sym
        return tuple(Sym(n) for n in self.names)

    def d(self, name: str) -> "DiffForm":
        """Basis 1-form ``d name``."""
        return DiffForm(self, 1, {(self.index(name),): ONE})

    def scalar(self, e) -> "DiffForm":
        return DiffForm(self, 0, {(): _coerce(e)})

    def __str__(self):
        return "(" + ", ".join(self.names) + ")"


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (0 on repeats)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class DiffForm:
    """Homogeneous differential form of fixed degree on a chart."""

    __slots__ = ("chart", "degree", "_terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping | Iterable = ()):
        if degree < 0:
            raise ValueError("negative degree")
        self.chart = chart
        self.degree = degree
        acc: dict[tuple[int, ...], list] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = chart.dim
        for key, coeff in items:
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"index tuple {key} does not have length {degree}")
            if any(not 0 <= i < n for i in key):
                raise IndexError(f"index out of range in {key}")
            sign, skey = sort_sign(key)
            if sign == 0:
                continue
            c = _coerce(coeff)
            acc.setdefault(skey, []).append(c if sign > 0 else -c)
        out = {}
        for key in sorted(acc):
            c = simplify(add(*acc[key]))
            if not (isinstance(c, Const) and c.value == 0):
                out[key] = c
        self._terms = out

    # -- access
    @property
    def terms(self) -> dict[tuple[int, ...], Expr]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, *names_or_indices) -> Expr:
        """Coefficient on the basis element given by coordinate names or indices."""
        idx = [self.chart.index(x) if isinstance(x, str) else x for x in names_or_indices]
        sign, key = sort_sign(idx)
        if sign == 0:
            return ZERO
        c = self._terms.get(key, ZERO)
        return c if sign > 0 else simplify(-c)

    @property
    def is_structurally_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DiffForm":
        return cls(chart, degree, {})

    # -- linear structure
    def _check(self, other: "DiffForm") -> None:
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart} vs {other.chart}")
        if self.degree != other.degree:
            raise ValueError(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        return DiffForm(self.chart, self.degree, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.chart, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def scale(self, factor) -> "DiffForm":
        f = _coerce(factor)
        return DiffForm(self.chart, self.degree, {k: mul(f, c) for k, c in self._terms.items()})

    def __rmul__(self, factor) -> "DiffForm":
        if isinstance(factor, DiffForm):
            return NotImplemented
        return self.scale(factor)

    def __mul__(self, factor) -> "DiffForm":
        if isinstance(factor, DiffForm):
            return NotImplemented
        return self.scale(factor)

    def __xor__(self, other: "DiffForm") -> "DiffForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.chart == other.chart and self.degree == other.degree
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.chart, self.degree, tuple(self._terms.items())))

    def basis_name(self, key: tuple[int, ...]) -> str:
        return "^".join("d" + self.chart.names[i] for i in key)

    def render(self) -> str:
        """Text in the form-parser syntax, e.g. ``sin(psi)*dx + cos(psi)*dy``."""
        if not self._terms:
            return "0"
        parts = []
        for key, c in self._terms.items():
            sign, body = render_coefficient_term(c, self.basis_name(key))
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"DiffForm<{self.degree}>({self.render()})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "text": self.render(),
            "terms": [
                {"basis": [self.chart.names[i] for i in key], "coefficient": str(c)}
                for key, c in self._terms.items()
            ],
        }


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple[Expr, ...]

    def __init__(self, chart: Chart, components: Sequence | Mapping):
        if isinstance(components, Mapping):
            comps = [ZERO] * chart.dim
            for name, val in components.items():
                comps[chart.index(name)] = _coerce(val)
        else:
            comps = [_coerce(c) for c in components]
        if len(comps) != chart.dim:
            raise ValueError(f"expected {chart.dim} components, got {len(comps)}")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", tuple(simplify(c) for c in comps))

    def __getitem__(self, name_or_index) -> Expr:
        if isinstance(name_or_index, str):
            return self.components[self.chart.index(name_or_index)]
        return self.components[name_or_index]

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart} vs {other.chart}")
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)

    def scale(self, factor) -> "VectorField":
        f = _coerce(factor)
        return VectorField(self.chart, [f * c for c in self.components])

    def __rmul__(self, factor):
        return self.scale(factor)

    def apply(self, f: Expr) -> Expr:
        """Directional derivative X(f)."""
        return simplify(add(*(mul(c, differentiate(f, n))
                              for c, n in zip(self.components, self.chart.names))))

    def render(self) -> str:
        parts = []
        for c, n in zip(self.components, self.chart.names):
            if c == ZERO:
                continue
            parts.append(render_coefficient_term(c, f"d/d{n}"))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"components": {n: str(c) for n, c in zip(self.chart.names, self.components)},
                "text": self.render()}


@dataclass(frozen=True)
class SmoothMap:
    """Coordinate expression of a map from ``source`` into ``target``."""

    source: Chart
    target: Chart
    components: tuple[Expr, ...]

    def __init__(self, source: Chart, target: Chart, components: Sequence | Mapping):
        if isinstance(components, Mapping):
            missing = [n for n in target.names if n not in components]
            if missing:
                raise ValueError(f"missing components for {missing}")
            comps = [_coerce(components[n]) for n in target.names]
        else:
            comps = [_coerce(c) for c in components]
        if len(comps) != target.dim:
            raise ValueError(f"expected {target.dim} components")
        comps = [simplify(c) for c in comps]
        stray = set().union(*(free_symbols(c) for c in comps)) & (set(target.names) - set(source.names))
        if stray:
            raise ValueError(f"components use target coordinates {sorted(stray)}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", tuple(comps))

    def __getitem__(self, name: str) -> Expr:
        return self.components[self.target.index(name)]

    def substitution(self) -> dict[str, Expr]:
        return dict(zip(self.target.names, self.components))


@dataclass(frozen=True)
class VolumeElement:
    form: DiffForm

    def __init__(self, form: DiffForm):
        n = form.chart.dim
        if form.degree != n or len(form) != 1:
            raise ValueError("a volume element is a top-degree form with one coefficient")
        object.__setattr__(self, "form", form)

    @classmethod
    def standard(cls, chart: Chart) -> "VolumeElement":
        return cls(DiffForm(chart, chart.dim, {tuple(range(chart.dim)): ONE}))

    @property
    def chart(self) -> Chart:
        return self.form.chart

    @property
    def coefficient(self) -> Expr:
        return next(iter(self.form.items()))[1]


# ---------------------------------------------------------------- operations

def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")
    deg = a.degree + b.degree
    if deg > a.chart.dim:
        return DiffForm.zero(a.chart, deg)
    acc = []
    for ka, ca in a.items():
        sa = set(ka)
        for kb, cb in b.items():
            if sa.intersection(kb):
                continue
            acc.append((ka + kb, mul(ca, cb)))
    return DiffForm(a.chart, deg, acc)


def wedge_all(*forms: DiffForm) -> DiffForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def wedge_power(a: DiffForm, k: int) -> DiffForm:
    if k < 1:
        raise ValueError("k must be positive")
    if k * a.degree > a.chart.dim:
        return DiffForm.zero(a.chart, k * a.degree)
    out = a
    for _ in range(k - 1):
        out = wedge(out, a)
    return out


def _d_over(a: DiffForm, active: Iterable[int]) -> DiffForm:
    deg = a.degree + 1
    if deg > a.chart.dim:
        return DiffForm.zero(a.chart, deg)
    names = a.chart.names
    acc = []
    for key, c in a.items():
        syms = free_symbols(c)
        for j in active:
            if j in key or names[j] not in syms:
                continue
            acc.append(((j,) + key, differentiate(c, names[j])))
    return DiffForm(a.chart, deg, acc)


def d(a: DiffForm) -> DiffForm:
    """Exterior derivative."""
    return _d_over(a, range(a.chart.dim))


def partial_d(a: DiffForm, active: Iterable[str]) -> DiffForm:
    """Exterior derivative summing only over the ``active`` coordinates."""
    return _d_over(a, sorted(a.chart.index(n) for n in active))


def interior(X: VectorField, a: DiffForm) -> DiffForm:
    """Contraction of ``X`` into the first slot of ``a``."""
    if X.chart != a.chart:
        raise ChartMismatch(f"{X.chart} vs {a.chart}")
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    acc = []
    for key, c in a.items():
        for pos, i in enumerate(key):
            comp = X.components[i]
            if comp == ZERO:
                continue
            sign = -1 if pos % 2 else 1
            acc.append((key[:pos] + key[pos + 1:], mul(Const(sign), comp, c)))
    return DiffForm(a.chart, a.degree - 1, acc)


def pullback(m: SmoothMap, a: DiffForm) -> DiffForm:
    if a.chart != m.target:
        raise ChartMismatch(f"form lives on {a.chart}, map targets {m.target}")
    src = m.source
    sub = m.substitution()
    differentials = {}

    def dx(i: int) -> DiffForm:
        if i not in differentials:
            comp = m.components[i]
            differentials[i] = DiffForm(src, 1, [((j,), differentiate(comp, u))
                                                  for j, u in enumerate(src.names)])
        return differentials[i]

    if a.degree > src.dim:
        return DiffForm.zero(src, a.degree)
    total = DiffForm.zero(src, a.degree)
    for key, c in a.items():
        piece = src.scalar(substitute(c, sub))
        for i in key:
            piece = wedge(piece, dx(i))
        total = total + piece
    return total


def poincare_dual_vector(X: VectorField, vol: VolumeElement) -> DiffForm:
    """``#X = i_X vol``."""
    return interior(X, vol.form)


def poincare_dual_form(a: DiffForm, vol: VolumeElement, domain: Domain | None = None,
                       config: ZeroConfig | None = None) -> VectorField:
    """Inverse of :func:`poincare_dual_vector` on forms of degree ``n - 1``."""
    n = vol.chart.dim
    if a.chart != vol.chart:
        raise ChartMismatch(f"{a.chart} vs {vol.chart}")
    if a.degree != n - 1:
        raise ValueError(f"expected a form of degree {n - 1}")
    c = vol.coefficient
    if is_zero(c, domain, config).is_zero:
        raise DegenerateVolume("volume coefficient vanishes on the domain")
    inv = power(c, -1)
    comps = []
    for i in range(n):
        key = tuple(j for j in range(n) if j != i)
        sign = -1 if i % 2 else 1
        comps.append(mul(Const(sign), a.coeff(*key), inv))
    return VectorField(a.chart, comps)


def form_is_zero(a: DiffForm, domain: Domain | None = None,
                 config: ZeroConfig | None = None) -> ZeroVerdict:
    """Weakest verdict over all coefficients; NonZero names the component."""
    verdicts = []
    for key, c in a.items():
        v = is_zero(c, domain, config)
        if v.kind is Verdict.NONZERO:
            return ZeroVerdict(v.kind, v.probes, v.tol, v.seed, v.label, v.witness,
                               v.value, note=f"component {a.basis_name(key)}")
        verdicts.append(v)
    return weakest(verdicts)


def forms_equal(a: DiffForm, b: DiffForm, domain: Domain | None = None,
                config: ZeroConfig | None = None) -> ZeroVerdict:
    return form_is_zero(a - b, domain, config)


def rank_of_two_form(omega: DiffForm, domain: Domain | None = None,
                     config: ZeroConfig | None = None) -> int:
    """``2m`` for the largest ``m`` with a nonvanishing ``m``-th wedge power."""
    if omega.degree != 2:
        raise ValueError("rank_of_two_form needs a 2-form")
    m = 0
    power_k = omega
    k = 1
    while 2 * k <= omega.chart.dim:
        if form_is_zero(power_k, domain, config).is_zero:
            break
        m = k
        k += 1
        power_k = wedge(power_k, omega)
    return 2 * m
