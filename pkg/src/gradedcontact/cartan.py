"""Cartan calculus on the shifted tangent chart.

Differential forms are plain polynomials on `form_extension(chart)`;
the wedge is the ordinary Koszul product.  The three commutation
relations implemented and property-tested here are

    L_X = iota_X d + (-1)^{|X|} d iota_X,
    iota_[X,Y] = L_X iota_Y - (-1)^{|X|(|Y|-1)} iota_Y L_X,
    iota_X iota_Y = (-1)^{(|X|-1)(|Y|-1)} iota_Y iota_X,

with d and iota acting as left derivations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .algebra import (
    Chart,
    GradedPolynomial,
    MIXED,
    embed,
    form_extension,
    left_derivation,
    partial_derivative,
)
from .errors import ChartMismatch, NonHomogeneousField


class VectorField:
    """Graded derivation given by one coefficient polynomial per coordinate.

    The coefficients act from the left: X(f) = sum_c X_c * df/dc.  The
    field is homogeneous of degree d when total_degree(X_c) - |c| = d for
    every nonzero component; `degree` is None otherwise (or must be given
    explicitly for the zero field).
    """

    __slots__ = ("chart", "components", "degree")

    def __init__(
        self,
        chart: Chart,
        components: Mapping[str, GradedPolynomial],
        degree: Optional[int] = None,
    ):
        comps = {}
        degrees = set()
        for name, poly in components.items():
            i = chart.index(name)
            if poly.chart != chart:
                raise ChartMismatch(f"component {name!r} lives on the wrong chart")
            if poly.is_zero():
                continue
            comps[name] = poly
            d = poly.total_degree()
            if d == MIXED:
                degrees.add(MIXED)
            else:
                degrees.add(d - chart.total_degrees[i])
        self.chart = chart
        self.components = comps
        if MIXED in degrees or len(degrees) > 1:
            self.degree = None
        elif degrees:
            inferred = degrees.pop()
            if degree is not None and degree != inferred:
                raise NonHomogeneousField(
                    f"declared degree {degree} but components have degree {inferred}"
                )
            self.degree = inferred
        else:
            self.degree = degree

    def component(self, name: str) -> GradedPolynomial:
        self.chart.index(name)
        return self.components.get(name, self.chart.zero())

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.chart != other.chart:
            raise ChartMismatch("vector fields live on different charts")
        comps = dict(self.components)
        for name, poly in other.components.items():
            comps[name] = comps.get(name, self.chart.zero()) + poly
        degree = self.degree if self.degree == other.degree else None
        if self.is_zero():
            degree = other.degree
        if other.is_zero():
            degree = self.degree
        return VectorField(self.chart, comps, degree)

    def __neg__(self):
        return VectorField(
            self.chart, {n: -p for n, p in self.components.items()}, self.degree
        )

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, left):
        """Left multiplication by a function or scalar: (f*X)_c = f * X_c."""
        if isinstance(left, (int, Fraction)):
            left = self.chart.constant(left)
        if not isinstance(left, GradedPolynomial):
            return NotImplemented
        comps = {n: left * p for n, p in self.components.items()}
        d = left.total_degree()
        degree = None
        if self.degree is not None and isinstance(d, int):
            degree = self.degree + d
        if left.is_zero():
            degree = self.degree
        return VectorField(self.chart, comps, degree)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorField)
            and self.chart == other.chart
            and self.components == other.components
        )

    def __repr__(self) -> str:
        if self.is_zero():
            return "VectorField(0)"
        parts = [f"({poly!r}) d/d{name}" for name, poly in sorted(self.components.items())]
        return "VectorField(" + " + ".join(parts) + ")"

    def require_homogeneous(self) -> int:
        if self.degree is None:
            raise NonHomogeneousField("vector field is not homogeneous")
        return self.degree


def zero_field(chart: Chart, degree: int) -> VectorField:
    return VectorField(chart, {}, degree)


def coordinate_field(chart: Chart, name: str) -> VectorField:
    """d/d<name> as a vector field."""
    i = chart.index(name)
    return VectorField(chart, {name: chart.one()}, -chart.total_degrees[i])


def apply_vf(X: VectorField, f: GradedPolynomial) -> GradedPolynomial:
    """X(f) = sum_c X_c * df/dc, coefficients acting from the left."""
    if f.chart != X.chart:
        raise ChartMismatch("function and field live on different charts")
    out = f.chart.zero()
    for name, poly in X.components.items():
        out = out + poly * partial_derivative(f, name)
    return out


def exterior_derivative(omega: GradedPolynomial) -> GradedPolynomial:
    """d: total degree +1, weight 0; d(c) = d<c>, d(d<c>) = 0, d(e^{kt}) = k e^{kt} dt."""
    chart = omega.chart
    if not chart.has_forms:
        raise ChartMismatch("exterior derivative needs the form-extended chart")
    images: list = [None] * len(chart)
    for i, c in enumerate(chart):
        if c.kind != "form-shift":
            j = chart.shift_partner(i)
            if j is None:
                raise ChartMismatch(f"coordinate {c.name!r} has no shifted partner")
            images[i] = chart.var(chart.names[j])
    exp_image = None
    if chart.time_index is not None:
        dt = chart.shift_partner(chart.time_index)
        if dt is None:
            raise ChartMismatch("time coordinate has no shifted partner")
        exp_image = chart.var(chart.names[dt])
    return left_derivation(omega, 1, images, exp_image)


def _form_chart_of(X: VectorField, omega: GradedPolynomial) -> Chart:
    if omega.chart == form_extension(X.chart):
        return omega.chart
    raise ChartMismatch("form does not live on the shifted tangent chart of the field")


def interior_product(X: VectorField, omega: GradedPolynomial) -> GradedPolynomial:
    """Left derivation of total degree |X|-1 with d<c> -> X_c and c -> 0."""
    degree = X.require_homogeneous()
    fchart = _form_chart_of(X, omega)
    images: list = [None] * len(fchart)
    for j in fchart.form_indices:
        comp = X.components.get(fchart.coordinates[j].shift_of)
        if comp is not None:
            images[j] = embed(comp, fchart)
    return left_derivation(omega, degree - 1, images, None)


def lie_derivative(X: VectorField, omega: GradedPolynomial) -> GradedPolynomial:
    """L_X = iota_X d + (-1)^{|X|} d iota_X; on functions it is X itself."""
    degree = X.require_homogeneous()
    if omega.chart == X.chart:
        return apply_vf(X, omega)
    sign = -1 if degree % 2 else 1
    first = interior_product(X, exterior_derivative(omega))
    second = exterior_derivative(interior_product(X, omega))
    return first + sign * second


def vf_commutator(X: VectorField, Y: VectorField) -> VectorField:
    """Graded commutator X Y - (-1)^{|X||Y|} Y X, as a derivation on functions."""
    dx = X.require_homogeneous()
    dy = Y.require_homogeneous()
    if X.chart != Y.chart:
        raise ChartMismatch("vector fields live on different charts")
    sign = -1 if (dx * dy) % 2 else 1
    comps = {}
    for name in X.chart.names:
        value = apply_vf(X, Y.component(name)) - sign * apply_vf(Y, X.component(name))
        if not value.is_zero():
            comps[name] = value
    return VectorField(X.chart, comps, dx + dy)


def one_form_coefficients(nu: GradedPolynomial) -> dict:
    """Write a 1-form uniquely as sum_c A_c * d<c>; returns {name: A_c}.

    Each monomial must contain exactly one form-shift generator; the
    generator is moved to the right end, picking up the Koszul sign.
    """
    chart = nu.chart
    coeffs: dict = {}
    for (exps, k), coeff in nu.terms.items():
        present = [i for i in chart.form_indices if exps[i]]
        if len(present) != 1:
            raise ValueError("polynomial is not of pure form degree 1")
        i = present[0]
        suffix_degree = sum(
            exps[j] * chart.total_degrees[j] for j in range(i + 1, len(chart))
        )
        sign = -1 if (chart.total_degrees[i] % 2) and (suffix_degree % 2) else 1
        stripped = tuple(0 if j == i else e for j, e in enumerate(exps))
        name = chart.coordinates[i].shift_of
        entry = coeffs.setdefault(name, {})
        s = entry.get((stripped, k), 0) + sign * coeff
        if s:
            entry[(stripped, k)] = s
        else:
            entry.pop((stripped, k), None)
    return {
        name: GradedPolynomial(chart, terms)
        for name, terms in coeffs.items()
        if terms
    }
