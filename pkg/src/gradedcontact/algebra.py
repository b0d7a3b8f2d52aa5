"""Exact graded-commutative polynomial algebra over charts.

Functions are polynomials in the chart generators with rational
coefficients, times an optional integer power of a formal exponential
e^t in the time coordinate.  Monomials are kept in a normal form
(generators sorted by chart declaration order) and every reordering
during arithmetic contributes the Koszul sign, one factor of -1 per
transposition of two odd generators.  Total degree = weight + form
degree governs all signs.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import (
    ChartMismatch,
    DuplicateName,
    NegativeWeight,
    UnknownCoordinate,
)

Scalar = Union[int, Fraction]

#: Reported by the degree queries when a value is not homogeneous.
MIXED = "mixed"

KINDS = ("base", "momentum", "theta", "time", "form-shift")


class Coordinate(NamedTuple):
    name: str
    weight: int
    kind: str = "base"
    shift_of: Optional[str] = None

    @property
    def form_degree(self) -> int:
        return 1 if self.kind == "form-shift" else 0

    @property
    def total_degree(self) -> int:
        return self.weight + self.form_degree

    @property
    def is_odd(self) -> bool:
        return self.total_degree % 2 == 1


class Chart:
    """An ordered list of graded coordinates; the global generator order."""

    def __init__(self, coordinates: Sequence[Coordinate]):
        coords = tuple(coordinates)
        seen = set()
        for c in coords:
            if c.name in seen:
                raise DuplicateName(f"coordinate {c.name!r} declared twice")
            seen.add(c.name)
            if c.weight < 0:
                raise NegativeWeight(f"coordinate {c.name!r} has weight {c.weight}")
            if c.kind not in KINDS:
                raise ValueError(f"unknown coordinate kind {c.kind!r}")
        self.coordinates = coords
        self.names = tuple(c.name for c in coords)
        self._index = {c.name: i for i, c in enumerate(coords)}
        self.weights = tuple(c.weight for c in coords)
        self.form_degrees = tuple(c.form_degree for c in coords)
        self.total_degrees = tuple(c.total_degree for c in coords)
        self.odd_indices = tuple(i for i, c in enumerate(coords) if c.is_odd)
        self._odd_mask = tuple(c.is_odd for c in coords)
        self.form_indices = tuple(
            i for i, c in enumerate(coords) if c.kind == "form-shift"
        )
        self.time_index = next(
            (i for i, c in enumerate(coords) if c.kind == "time"), None
        )

    def __len__(self) -> int:
        return len(self.coordinates)

    def __iter__(self):
        return iter(self.coordinates)

    def __eq__(self, other) -> bool:
        return isinstance(other, Chart) and self.coordinates == other.coordinates

    def __hash__(self) -> int:
        return hash(self.coordinates)

    def __repr__(self) -> str:
        inner = ", ".join(f"{c.name}:{c.weight}" for c in self.coordinates)
        return f"Chart({inner})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCoordinate(f"no coordinate {name!r} in {self!r}") from None

    def coordinate(self, name: str) -> Coordinate:
        return self.coordinates[self.index(name)]

    @property
    def has_forms(self) -> bool:
        return bool(self.form_indices)

    def shift_partner(self, index: int) -> Optional[int]:
        """Index of the form-shift generator attached to coordinate `index`."""
        name = self.coordinates[index].name
        for j in self.form_indices:
            if self.coordinates[j].shift_of == name:
                return j
        return None

    def dimension_profile(self) -> dict:
        """Number of non-form coordinates per weight."""
        profile: dict = {}
        for c in self.coordinates:
            if c.kind != "form-shift":
                profile[c.weight] = profile.get(c.weight, 0) + 1
        return profile

    # -- polynomial builders ------------------------------------------------

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def constant(self, value: Scalar) -> "GradedPolynomial":
        value = Fraction(value)
        if value == 0:
            return self.zero()
        return GradedPolynomial(self, {((0,) * len(self), 0): value})

    def one(self) -> "GradedPolynomial":
        return self.constant(1)

    def var(self, name: str) -> "GradedPolynomial":
        i = self.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(self)))
        return GradedPolynomial(self, {(exps, 0): Fraction(1)})

    def exp_t(self, power: int = 1) -> "GradedPolynomial":
        if self.time_index is None:
            raise UnknownCoordinate("chart has no time coordinate for e^t")
        return GradedPolynomial(self, {((0,) * len(self), power): Fraction(1)})

    def term(
        self,
        coeff: Scalar,
        factors: Mapping[str, int] | None = None,
        exp_power: int = 0,
    ) -> "GradedPolynomial":
        """One monomial written directly in normal order (no Koszul sign)."""
        exps = [0] * len(self)
        for name, e in (factors or {}).items():
            exps[self.index(name)] = e
        key = (tuple(exps), exp_power)
        _validate_key(self, key)
        coeff = Fraction(coeff)
        return GradedPolynomial(self, {key: coeff} if coeff else {})


def make_chart(spec: Iterable[tuple]) -> Chart:
    """Build a chart from (name, weight, kind) entries, in declaration order.

    Form-shift generators cannot be declared here; they are created by
    `form_extension`, interleaved directly after their base coordinate.
    """
    coords = []
    for entry in spec:
        name, weight, kind = entry
        if kind == "form-shift":
            raise ValueError("form-shift generators are created by form_extension")
        coords.append(Coordinate(str(name), int(weight), kind))
    return Chart(coords)


@lru_cache(maxsize=None)
def form_extension(chart: Chart) -> Chart:
    """The shifted-tangent chart: one odd-shifted generator d<c> per coordinate."""
    coords = []
    for c in chart:
        if c.kind == "form-shift":
            raise ValueError("chart already carries form-shift generators")
        coords.append(c)
        coords.append(Coordinate("d" + c.name, c.weight, "form-shift", c.name))
    return Chart(coords)


def extend_with_time(chart: Chart, name: str = "t") -> Chart:
    if chart.time_index is not None:
        raise DuplicateName("chart already has a time coordinate")
    return Chart(tuple(chart.coordinates) + (Coordinate(name, 0, "time"),))


# -- monomial keys ----------------------------------------------------------
#
# A monomial is (exps, exp_power): a dense exponent tuple over the chart
# generators plus the integer k of e^{kt}.

Key = tuple


def _validate_key(chart: Chart, key: Key) -> None:
    exps, k = key
    if len(exps) != len(chart):
        raise ChartMismatch("exponent tuple does not match chart size")
    for i, e in enumerate(exps):
        if e < 0:
            raise ValueError(f"negative exponent for {chart.names[i]}")
        if e > 1 and chart._odd_mask[i]:
            raise ValueError(f"odd generator {chart.names[i]} squared")
    if k != 0 and chart.time_index is None:
        raise ChartMismatch("e^t factor on a chart without a time coordinate")


def key_weight(chart: Chart, key: Key) -> int:
    exps, _ = key
    return sum(e * w for e, w in zip(exps, chart.weights))


def key_form_degree(chart: Chart, key: Key) -> int:
    exps, _ = key
    return sum(e * f for e, f in zip(exps, chart.form_degrees))


def key_total_degree(chart: Chart, key: Key) -> int:
    exps, _ = key
    return sum(e * t for e, t in zip(exps, chart.total_degrees))


def _merge_keys(chart: Chart, k1: Key, k2: Key):
    """Koszul-normalized product of two normal-form monomials.

    Returns (sign, key) or None when an odd generator repeats.
    """
    exps1, e1 = k1
    exps2, e2 = k2
    odd1 = [i for i in chart.odd_indices if exps1[i]]
    odd2 = [j for j in chart.odd_indices if exps2[j]]
    inversions = 0
    for j in odd2:
        if exps1[j]:
            return None
        for i in odd1:
            if i > j:
                inversions += 1
    sign = -1 if inversions % 2 else 1
    return sign, (tuple(a + b for a, b in zip(exps1, exps2)), e1 + e2)


class GradedPolynomial:
    """Finite map monomial -> nonzero exact rational, over one chart.

    Values are immutable after construction; all arithmetic returns new
    objects.  Multiplication is graded-commutative with respect to total
    degree: a*b = (-1)^{|a||b|} b*a for homogeneous a, b.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[Key, Fraction]):
        self.chart = chart
        self.terms = {k: v for k, v in terms.items() if v != 0}

    # -- predicates and degrees --------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _degree_over(self, measure) -> Union[int, str]:
        degrees = {measure(self.chart, k) for k in self.terms}
        if not degrees:
            return 0
        if len(degrees) > 1:
            return MIXED
        return degrees.pop()

    def weight(self) -> Union[int, str]:
        return self._degree_over(key_weight)

    def form_degree(self) -> Union[int, str]:
        return self._degree_over(key_form_degree)

    def total_degree(self) -> Union[int, str]:
        return self._degree_over(key_total_degree)

    def weight_components(self) -> dict:
        """Split into weight-homogeneous parts, keyed by weight."""
        parts: dict = {}
        for k, v in self.terms.items():
            w = key_weight(self.chart, k)
            parts.setdefault(w, {})[k] = v
        return {w: GradedPolynomial(self.chart, t) for w, t in parts.items()}

    # -- arithmetic ----------------------------------------------------------

    def _require_same_chart(self, other: "GradedPolynomial") -> None:
        if self.chart != other.chart:
            raise ChartMismatch(
                f"operands live on different charts: {self.chart!r} vs {other.chart!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.constant(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        self._require_same_chart(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = terms.get(k, 0) + v
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return GradedPolynomial(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.constant(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return self.chart.zero()
            return GradedPolynomial(self.chart, {k: v * q for k, v in self.terms.items()})
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        self._require_same_chart(other)
        terms: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                merged = _merge_keys(self.chart, k1, k2)
                if merged is None:
                    continue
                sign, key = merged
                s = terms.get(key, 0) + sign * c1 * c2
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return GradedPolynomial(self.chart, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers of polynomials")
        out = self.chart.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedPolynomial)
            and self.chart == other.chart
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        from .exprs import print_polynomial

        return print_polynomial(self)


def multiply(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    """Koszul-normalized product; operator form of `a * b`."""
    if not isinstance(b, GradedPolynomial):
        raise ChartMismatch("multiply expects two polynomials")
    return a * b


# -- left derivations --------------------------------------------------------


def left_derivation(
    p: GradedPolynomial,
    op_degree: int,
    images: Sequence[Optional[GradedPolynomial]],
    exp_image: Optional[GradedPolynomial] = None,
) -> GradedPolynomial:
    """Apply the left graded derivation determined by its generator images.

    `images[i]` is the image of generator i (None meaning zero) and
    `op_degree` the operator's total degree, so that on products
    D(ab) = (Da)b + (-1)^{op_degree*|a|} a(Db).  `exp_image`, when given,
    is the extra factor produced per unit of exp_power: the monomial
    m*e^{kt} contributes k * (m*e^{kt}) * exp_image at the right end.
    """
    chart = p.chart
    n = len(chart)
    odd_op = op_degree % 2
    out = chart.zero()
    for (exps, k), coeff in p.terms.items():
        prefix_degree = 0
        for i, e in enumerate(exps):
            img = images[i]
            if e and img is not None and not img.is_zero():
                pre = tuple(exps[j] if j < i else 0 for j in range(n))
                suf = tuple(
                    exps[j] if j > i else (e - 1 if j == i else 0) for j in range(n)
                )
                sign = -1 if odd_op and prefix_degree % 2 else 1
                pre_poly = GradedPolynomial(chart, {(pre, 0): Fraction(sign * e) * coeff})
                suf_poly = GradedPolynomial(chart, {(suf, k): Fraction(1)})
                out = out + pre_poly * img * suf_poly
            prefix_degree += e * chart.total_degrees[i]
        if k != 0 and exp_image is not None and not exp_image.is_zero():
            sign = -1 if odd_op and prefix_degree % 2 else 1
            mono = GradedPolynomial(chart, {(exps, k): coeff * sign * k})
            out = out + mono * exp_image
    return out


def partial_derivative(p: GradedPolynomial, coordinate: str) -> GradedPolynomial:
    """Left partial derivative: a derivation of total degree -|c|."""
    chart = p.chart
    i = chart.index(coordinate)
    images: list = [None] * len(chart)
    images[i] = chart.one()
    exp_image = None
    if chart.time_index == i:
        exp_image = chart.one()
    return left_derivation(p, -chart.total_degrees[i], images, exp_image)


def euler_apply(p: GradedPolynomial) -> GradedPolynomial:
    """Weight-Euler operator: scales each weight-k component by k."""
    terms = {}
    for key, coeff in p.terms.items():
        w = key_weight(p.chart, key)
        if w:
            terms[key] = coeff * w
    return GradedPolynomial(p.chart, terms)


# -- degree queries (operation names from the public surface) ----------------


def weight_of(p: GradedPolynomial) -> Union[int, str]:
    return p.weight()


def form_degree_of(p: GradedPolynomial) -> Union[int, str]:
    return p.form_degree()


def total_degree_of(p: GradedPolynomial) -> Union[int, str]:
    return p.total_degree()


# -- chart embeddings --------------------------------------------------------


def embed(p: GradedPolynomial, target: Chart) -> GradedPolynomial:
    """Transfer a polynomial to a chart sharing its generators by name.

    The target must preserve the relative declaration order of the shared
    generators; otherwise reordering would silently change Koszul signs.
    """
    if p.chart == target:
        return p
    positions = []
    mapping = {}
    for i, name in enumerate(p.chart.names):
        if name in target._index:
            j = target.index(name)
            mapping[i] = j
            positions.append(j)
    if positions != sorted(positions):
        raise ChartMismatch("target chart reorders shared generators")
    if (p.chart.time_index is not None) and (target.time_index is None):
        if any(k != 0 for (_, k) in p.terms):
            raise ChartMismatch("target chart has no time coordinate for e^t")
    terms = {}
    for (exps, k), coeff in p.terms.items():
        new = [0] * len(target)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if i not in mapping:
                raise ChartMismatch(
                    f"generator {p.chart.names[i]!r} is absent from the target chart"
                )
            new[mapping[i]] = e
        terms[(tuple(new), k)] = coeff
    return GradedPolynomial(target, terms)
