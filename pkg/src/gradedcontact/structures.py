"""Darboux symplectic models, contact models, and their vector-field calculus.

Symplectic structures are accepted only in Darboux form sum_i dp_i dq_i,
which makes the Hamiltonian equation df = (-1)^{|X|-1} iota_X omega an
exact triangular substitution.  Contact structures are represented by the
canonical model N x R[n] with

    lambda = (1/n) iota_eps omega,      alpha = lambda + (1/n) d theta,

and every solver re-substitutes its result into the defining equations
before returning, so any sign regression raises immediately instead of
propagating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .algebra import (
    Chart,
    Coordinate,
    GradedPolynomial,
    MIXED,
    embed,
    euler_apply,
    form_extension,
    make_chart,
)
from .cartan import (
    VectorField,
    apply_vf,
    exterior_derivative,
    interior_product,
    lie_derivative,
    one_form_coefficients,
    zero_field,
)
from .errors import (
    ChartMismatch,
    DegreeZero,
    ModelCorrupt,
    NonHomogeneous,
    NotContact,
    WrongMultidegree,
)
from .exprs import print_polynomial
from .report import Report


@dataclass(frozen=True)
class DarbouxSymplectic:
    """A degree-n symplectic N-manifold in canonical coordinate pairs."""

    chart: Chart
    fchart: Chart
    pairs: Tuple[Tuple[str, str], ...]  # (q_i, p_i) with |q_i| + |p_i| = n
    n: int
    omega: GradedPolynomial  # sum_i dp_i dq_i on fchart


def darboux_symplectic(chart: Chart, pairs: Sequence[Tuple[str, str]]) -> DarbouxSymplectic:
    """Build sum_i dp_i dq_i and validate closedness and nondegeneracy."""
    pairs = tuple((q, p) for q, p in pairs)
    used = [name for qp in pairs for name in qp]
    if sorted(used) != sorted(chart.names):
        raise ChartMismatch("Darboux pairs must cover every chart coordinate once")
    degrees = {chart.coordinate(q).weight + chart.coordinate(p).weight for q, p in pairs}
    if len(degrees) != 1:
        raise ChartMismatch("all Darboux pairs must have the same total weight")
    n = degrees.pop()
    fchart = form_extension(chart)
    omega = fchart.zero()
    for q, p in pairs:
        omega = omega + fchart.var("d" + p) * fchart.var("d" + q)
    if not exterior_derivative(omega).is_zero():
        raise ModelCorrupt("Darboux form is not closed")
    s = DarbouxSymplectic(chart, fchart, pairs, n, omega)
    if _pairing_determinant(s) == 0:
        raise ModelCorrupt("coordinate pairing of omega is singular")
    return s


def _pairing_determinant(s: DarbouxSymplectic) -> Fraction:
    """Determinant of omega paired on coordinate directions (rational entries)."""
    from .cartan import coordinate_field

    names = s.chart.names
    size = len(names)
    rows = []
    for a in names:
        row = []
        for b in names:
            value = interior_product(
                coordinate_field(s.chart, b),
                interior_product(coordinate_field(s.chart, a), s.omega),
            )
            entry = Fraction(0)
            for key, coeff in value.terms.items():
                if any(key[0]):
                    raise ModelCorrupt("pairing entry is not constant")
                entry = coeff
            row.append(entry)
        rows.append(row)
    # fraction-free Gaussian elimination on a tiny matrix
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] * inv
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


def _as_function(p: GradedPolynomial, chart: Chart) -> GradedPolynomial:
    """Restrict a form-degree-0 polynomial back to the coordinate chart."""
    return embed(p, chart)


def _solve_pairs(
    s: DarbouxSymplectic,
    target_fchart: Chart,
    rhs: GradedPolynomial,
) -> dict:
    """Solve iota_X omega = rhs for the pair components of X.

    Components are returned as functions on `target_fchart` stripped of
    form generators; coefficients of d-generators outside the pairs are
    rejected by the caller via the exactness re-check.
    """
    coeffs = one_form_coefficients(rhs) if not rhs.is_zero() else {}
    comps = {}
    for q, p in s.pairs:
        wq = s.chart.coordinate(q).weight
        wp = s.chart.coordinate(p).weight
        sign = -1 if ((wp + 1) * (wq + 1)) % 2 else 1
        a_q = coeffs.pop(q, None)
        a_p = coeffs.pop(p, None)
        if a_q is not None:
            comps[p] = a_q
        if a_p is not None:
            comps[q] = sign * a_p
    if coeffs:
        leftover = ", ".join(sorted(coeffs))
        raise ModelCorrupt(f"interior-product equation has no solution (d{leftover} terms)")
    return comps


def hamiltonian_vf(f: GradedPolynomial, s: DarbouxSymplectic) -> VectorField:
    """The unique X with df = (-1)^{|X|-1} iota_X omega."""
    weight = f.weight()
    if weight == MIXED:
        raise NonHomogeneous("Hamiltonian functions must be weight-homogeneous")
    degree = weight - s.n
    if f.chart == s.chart:
        f_on_forms = embed(f, s.fchart)
    elif f.chart == s.fchart:
        f_on_forms = f
    else:
        raise ChartMismatch("function does not live on the symplectic chart")
    sign = -1 if (degree - 1) % 2 else 1
    rhs = sign * exterior_derivative(f_on_forms)
    comps = _solve_pairs(s, s.fchart, rhs)
    X = VectorField(
        s.chart, {n: _as_function(p, s.chart) for n, p in comps.items()}, degree
    )
    if interior_product(X, s.omega) != rhs:
        raise ModelCorrupt("Hamiltonian solve failed re-substitution")
    return X


def poisson_bracket(
    f: GradedPolynomial, g: GradedPolynomial, s: DarbouxSymplectic
) -> GradedPolynomial:
    """{f, g} = X_f(g); a bracket of degree -n."""
    return apply_vf(hamiltonian_vf(f, s), g)


# -- multivector fields via the degree-1 cotangent model ---------------------


@dataclass(frozen=True)
class MultivectorAlgebra:
    """T*[1]M over a weight-0 base; weight-k functions are k-vector fields."""

    base_names: Tuple[str, ...]
    chart: Chart
    fchart: Chart
    darboux: DarbouxSymplectic

    def momentum_degree(self, p: GradedPolynomial):
        momentum = [
            i
            for i, c in enumerate(self.chart.coordinates)
            if c.kind == "momentum"
        ]
        degrees = {sum(key[0][i] for i in momentum) for key in p.terms}
        if not degrees:
            return 0
        if len(degrees) > 1:
            return MIXED
        return degrees.pop()


def multivector_algebra(base_names: Sequence[str]) -> MultivectorAlgebra:
    names = tuple(base_names)
    spec = [(x, 0, "base") for x in names] + [("p_" + x, 1, "momentum") for x in names]
    chart = make_chart(spec)
    darboux = darboux_symplectic(chart, [(x, "p_" + x) for x in names])
    return MultivectorAlgebra(names, chart, darboux.fchart, darboux)


def liouville_form(alg: MultivectorAlgebra) -> GradedPolynomial:
    """lambda = sum_i p_i dx_i, with d(lambda) the canonical omega."""
    lam = alg.fchart.zero()
    for x in alg.base_names:
        lam = lam + alg.fchart.var("p_" + x) * alg.fchart.var("d" + x)
    if exterior_derivative(lam) != alg.darboux.omega:
        raise ModelCorrupt("Liouville form does not differentiate to omega")
    return lam


def schouten(
    a: GradedPolynomial, b: GradedPolynomial, alg: MultivectorAlgebra
) -> GradedPolynomial:
    """Schouten bracket as the degree -1 Poisson bracket of T*[1]M."""
    if a.weight() == MIXED or b.weight() == MIXED:
        raise NonHomogeneous("Schouten arguments must be homogeneous")
    return poisson_bracket(a, b, alg.darboux)


# -- the canonical contact model N x R[n] -------------------------------------


def euler_field(chart: Chart) -> VectorField:
    """The weight-Euler vector field sum_c |c| c d/dc."""
    comps = {
        c.name: c.weight * chart.var(c.name) for c in chart if c.weight > 0
    }
    return VectorField(chart, comps, 0)


@dataclass(frozen=True)
class ContactModel:
    base: DarbouxSymplectic
    chart: Chart  # base coordinates plus theta
    fchart: Chart
    n: int
    theta_name: str
    omega: GradedPolynomial  # base omega on the model form chart
    lam: GradedPolynomial  # (1/n) iota_eps omega
    alpha: GradedPolynomial  # lam + (1/n) d theta

    @property
    def theta(self) -> GradedPolynomial:
        return self.chart.var(self.theta_name)


def contact_model(base: DarbouxSymplectic, theta_name: str = "theta") -> ContactModel:
    n = base.n
    if n < 1:
        raise DegreeZero("contact models need symplectic degree n >= 1")
    chart = Chart(tuple(base.chart.coordinates) + (Coordinate(theta_name, n, "theta"),))
    fchart = form_extension(chart)
    omega = embed(base.omega, fchart)
    eps = euler_field(chart)
    lam = Fraction(1, n) * interior_product(eps, omega)
    alpha = lam + Fraction(1, n) * fchart.var("d" + theta_name)
    model = ContactModel(base, chart, fchart, n, theta_name, omega, lam, alpha)
    _validate_contact_model(model)
    return model


def _validate_contact_model(m: ContactModel) -> None:
    rho = VectorField(m.chart, {m.theta_name: m.chart.constant(m.n)}, -m.n)
    if interior_product(rho, m.alpha) != m.fchart.one():
        raise ModelCorrupt("iota_rho alpha != 1")
    dalpha = exterior_derivative(m.alpha)
    if not interior_product(rho, dalpha).is_zero():
        raise ModelCorrupt("iota_rho d alpha != 0")
    if dalpha != m.omega:
        raise ModelCorrupt("d alpha differs from the base symplectic form")
    profile = m.chart.dimension_profile()
    if max(profile) > m.n:
        raise ModelCorrupt("coordinates of weight above n in a degree-n model")
    if profile.get(m.n, 0) != profile.get(0, 0) + 1:
        raise ModelCorrupt("dimension profile violates dim_n = dim_0 + 1")
    for i in range(1, m.n):
        if profile.get(i, 0) != profile.get(m.n - i, 0):
            raise ModelCorrupt("dimension profile violates dim_i = dim_{n-i}")


def reeb(m: ContactModel) -> VectorField:
    """The unique rho with iota_rho d alpha = 0 and iota_rho alpha = 1.

    With alpha = lambda + (1/n) d theta this is n d/d theta.
    """
    rho = VectorField(m.chart, {m.theta_name: m.chart.constant(m.n)}, -m.n)
    if interior_product(rho, m.alpha) != m.fchart.one():
        raise ModelCorrupt("Reeb normalization failed")
    if not interior_product(rho, exterior_derivative(m.alpha)).is_zero():
        raise ModelCorrupt("Reeb field does not annihilate d alpha")
    return rho


def euler_function(m: ContactModel) -> GradedPolynomial:
    """theta = iota_eps alpha; must reproduce the model coordinate."""
    value = _as_function(interior_product(euler_field(m.chart), m.alpha), m.chart)
    if value != m.theta:
        raise ModelCorrupt("Euler function differs from the theta coordinate")
    return value


def _homogeneous_weight(h: GradedPolynomial) -> int:
    w = h.weight()
    if w == MIXED:
        raise NonHomogeneous("argument must be weight-homogeneous")
    return w


def decompose_one_form(
    h: GradedPolynomial, m: ContactModel
) -> Tuple[GradedPolynomial, GradedPolynomial]:
    """Split dh = beta + f alpha with iota_rho beta = 0.

    f = (-1)^{(n-1)|h|} rho(h) and beta = dh - f alpha.
    """
    k = _homogeneous_weight(h)
    rho = reeb(m)
    rho_h = apply_vf(rho, embed(h, m.chart))
    sign = -1 if ((m.n - 1) * k) % 2 else 1
    f = sign * rho_h
    beta = exterior_derivative(embed(h, m.fchart)) - embed(f, m.fchart) * m.alpha
    if not interior_product(rho, beta).is_zero():
        raise ModelCorrupt("decomposition left a Reeb component in beta")
    return beta, f


def contact_vf_from_function(h: GradedPolynomial, m: ContactModel) -> VectorField:
    """The unique X_h with iota_X alpha = h, iota_X d alpha = (-1)^{|h|-n+1} beta."""
    k = _homogeneous_weight(h)
    beta, f = decompose_one_form(h, m)
    sign = -1 if (k - m.n + 1) % 2 else 1
    rhs = sign * beta
    comps = _solve_pairs(m.base, m.fchart, rhs)
    components = {name: _as_function(p, m.chart) for name, p in comps.items()}
    Y = VectorField(m.chart, components, k - m.n)
    u = _as_function(interior_product(Y, m.lam), m.chart)
    theta_comp = m.n * (embed(h, m.chart) - u)
    if not theta_comp.is_zero():
        components[m.theta_name] = theta_comp
    X = VectorField(m.chart, components, k - m.n)
    _check_contact_solution(X, h, rhs, f, m)
    return X


def _check_contact_solution(X, h, rhs, f, m: ContactModel) -> None:
    if interior_product(X, m.alpha) != embed(h, m.fchart):
        raise ModelCorrupt("contact solve failed iota_X alpha = h")
    if interior_product(X, exterior_derivative(m.alpha)) != rhs:
        raise ModelCorrupt("contact solve failed iota_X d alpha equation")
    sign = -1 if (X.degree or 0) % 2 else 1
    if lie_derivative(X, m.alpha) != sign * (embed(f, m.fchart) * m.alpha):
        raise ModelCorrupt("contact solve failed L_X alpha = (-1)^{|X|} f alpha")


def contact_rescaler(X: VectorField, m: ContactModel) -> GradedPolynomial:
    """The g with L_X alpha = g alpha; raises NotContact when none exists."""
    X.require_homogeneous()
    lie = lie_derivative(X, m.alpha)
    a_theta = one_form_coefficients(lie).get(m.theta_name) if not lie.is_zero() else None
    g = (m.n * a_theta) if a_theta is not None else m.fchart.zero()
    if lie != g * m.alpha:
        raise NotContact("L_X alpha is not a multiple of alpha")
    return _as_function(g, m.chart)


def contact_function_from_vf(X: VectorField, m: ContactModel) -> GradedPolynomial:
    """iota_X alpha, defined for contact fields; inverse of the solver."""
    contact_rescaler(X, m)
    return _as_function(interior_product(X, m.alpha), m.chart)


def split_checks(m: ContactModel, lam: Optional[GradedPolynomial] = None) -> Report:
    """Verify that lambda is basic and the model splits off R[n]."""
    lam = m.lam if lam is None else lam
    rho = reeb(m)
    report = Report()

    def record(name: str, residual: GradedPolynomial) -> None:
        report.add(name, residual.is_zero(), print_polynomial(residual))

    record("iota_rho_lambda", interior_product(rho, lam))
    record("lie_rho_lambda", lie_derivative(rho, lam))
    record("d_lambda_minus_omega", exterior_derivative(lam) - m.omega)
    record("d_alpha_minus_omega", exterior_derivative(m.alpha) - m.omega)
    square = vf_commutator_residual(rho)
    record("reeb_self_commutator", square)
    return report


def vf_commutator_residual(X: VectorField) -> GradedPolynomial:
    """Sum of the components of [X, X], as a single residual polynomial."""
    from .cartan import vf_commutator

    bracket = vf_commutator(X, X)
    out = X.chart.zero()
    for comp in bracket.components.values():
        out = out + comp
    return out
