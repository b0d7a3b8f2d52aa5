"""Symplectization, Hamiltonian/homological lifts, xi, and Poissonization.

The symplectization of the canonical contact model carries

    omega~ = d(e^t alpha) = e^t (dt alpha + d alpha),

and the diffeomorphism xi with xi* f = e^{|f| t} f relates omega~ to the
canonical symplectic form omega + dt dtheta of T*[1](M x R), under which
theta is read as the momentum conjugate to t.  Poissonization is computed
along both routes of the commuting square and the routes must agree
exactly; validity of the input (Q^2 = 0, Poisson residual 0) is reported
separately from agreement of the constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .algebra import (
    Chart,
    Coordinate,
    GradedPolynomial,
    embed,
    extend_with_time,
    form_extension,
)
from .cartan import (
    VectorField,
    apply_vf,
    exterior_derivative,
    interior_product,
    one_form_coefficients,
)
from .errors import ModelCorrupt, PathMismatch, WrongDegree
from .exprs import print_polynomial
from .jacobi import JacobiStructure, build_h, build_q, model_of
from .report import Report
from .structures import (
    ContactModel,
    DarbouxSymplectic,
    contact_rescaler,
    darboux_symplectic,
    euler_field,
    poisson_bracket,
    vf_commutator_residual,
)

TIME_NAME = "t"


@dataclass(frozen=True)
class Symplectization:
    model: ContactModel
    chart: Chart  # model chart extended by t
    fchart: Chart
    alpha: GradedPolynomial  # contact form on the extended form chart
    omega_tilde: GradedPolynomial  # e^t (dt alpha + d alpha)
    canonical: DarbouxSymplectic  # omega + dt dtheta, pairs extended by (t, theta)


def symplectize(m: ContactModel) -> Symplectization:
    """Extend by t, build omega~ both ways, and witness nondegeneracy."""
    chart = extend_with_time(m.chart, TIME_NAME)
    fchart = form_extension(chart)
    alpha = embed(m.alpha, fchart)
    e_t = fchart.exp_t(1)
    dt = fchart.var("d" + TIME_NAME)

    omega_exact = exterior_derivative(e_t * alpha)
    omega_expanded = e_t * (dt * alpha + exterior_derivative(alpha))
    if omega_exact != omega_expanded:
        raise ModelCorrupt("omega~ = d(e^t alpha) differs from e^t(dt alpha + d alpha)")
    if omega_exact.weight() != m.n or omega_exact.form_degree() != 2:
        raise ModelCorrupt("omega~ has the wrong bidegree")

    canonical = darboux_symplectic(
        chart, tuple(m.base.pairs) + ((TIME_NAME, m.theta_name),)
    )
    symp = Symplectization(m, chart, fchart, alpha, omega_exact, canonical)
    for c in chart.names:
        _hamiltonian_solve(symp, chart.var(c))
    return symp


def _hamiltonian_solve(symp: Symplectization, f: GradedPolynomial) -> VectorField:
    """Solve df = (-1)^{|X|-1} iota_X omega~; triangular in the model.

    Used as the nondegeneracy witness.  The dt coefficient determines
    iota_X alpha, the dtheta coefficient determines the t component, the
    base coefficients reduce to the Darboux solve, and the theta component
    closes the triangle.
    """
    m = symp.model
    n = m.n
    degree = f.weight() - n
    sign = -1 if (degree - 1) % 2 else 1
    nu = sign * exterior_derivative(embed(f, symp.fchart))
    coeffs = one_form_coefficients(nu) if not nu.is_zero() else {}

    e_minus = symp.fchart.exp_t(-1)
    zero = symp.fchart.zero()

    a_t = coeffs.get("t", zero)
    a_theta = coeffs.get(m.theta_name, zero)
    u_sign = -1 if (n + 1) % 2 else 1
    u = u_sign * (e_minus * a_t)  # iota_X alpha
    x_t = n * (e_minus * a_theta)

    base_form = zero
    for q, p in m.base.pairs:
        for name in (q, p):
            a = coeffs.get(name)
            if a is not None:
                base_form = base_form + a * symp.fchart.var("d" + name)
    lam = embed(m.lam, symp.fchart)
    mu = e_minus * base_form - x_t * lam

    from .structures import _solve_pairs

    comps = _solve_pairs(m.base, symp.fchart, mu)
    components = {name: embed(p, symp.chart) for name, p in comps.items()}
    Y = VectorField(symp.chart, components, degree)
    x_theta = n * (embed(u, symp.chart) - embed(interior_product(Y, lam), symp.chart))
    if not x_theta.is_zero():
        components[m.theta_name] = x_theta
    if not x_t.is_zero():
        components[TIME_NAME] = embed(x_t, symp.chart)
    X = VectorField(symp.chart, components, degree)
    if interior_product(X, symp.omega_tilde) != nu:
        raise ModelCorrupt("symplectization Hamiltonian solve failed re-substitution")
    return X


def hamiltonian_lift(
    X: VectorField, m: ContactModel
) -> Tuple[VectorField, GradedPolynomial]:
    """Lift a contact field to a Hamiltonian field of the symplectization.

    With g the factor in L_X alpha = g alpha, the lift is X - g d/dt and
    its Hamiltonian function is H_X = e^t iota_X alpha; the equation
    dH = (-1)^{|X|-1} iota_{X~} omega~ is verified exactly before returning.
    """
    g = contact_rescaler(X, m)  # raises NotContact
    symp = symplectize(m)
    components = {name: embed(p, symp.chart) for name, p in X.components.items()}
    if not g.is_zero():
        components[TIME_NAME] = -embed(g, symp.chart)
    lifted = VectorField(symp.chart, components, X.degree)

    h = embed(
        interior_product(X, m.alpha), m.chart
    )  # iota_X alpha as a function on the model
    H = symp.chart.exp_t(1) * embed(h, symp.chart)
    _verify_hamiltonian(symp, lifted, H)
    return lifted, H


def _verify_hamiltonian(symp: Symplectization, X: VectorField, H: GradedPolynomial):
    degree = X.require_homogeneous()
    sign = -1 if (degree - 1) % 2 else 1
    lhs = exterior_derivative(embed(H, symp.fchart))
    rhs = sign * interior_product(X, symp.omega_tilde)
    if lhs != rhs:
        raise ModelCorrupt("lift fails dH = (-1)^{|X|-1} iota_X omega~")


def homological_lift_check(Q: VectorField, m: ContactModel) -> Report:
    """Check Q^2, Q(phi), and the square of the lifted Hamiltonian field."""
    if Q.require_homogeneous() != 1:
        raise WrongDegree("homological candidates must have degree 1")
    g = contact_rescaler(Q, m)  # raises NotContact
    phi = -g  # L_Q alpha = -phi alpha
    lifted, _ = hamiltonian_lift(Q, m)

    report = Report()
    q_sq = vf_commutator_residual(Q)
    report.add("q_squared_zero", q_sq.is_zero(), print_polynomial(q_sq))
    q_phi = apply_vf(Q, phi)
    report.add("q_phi_zero", q_phi.is_zero(), print_polynomial(q_phi))
    lift_sq = vf_commutator_residual(lifted)
    report.add("lift_squared_zero", lift_sq.is_zero(), print_polynomial(lift_sq))
    return report


# -- the xi change of coordinates ---------------------------------------------


def _base_of_form_chart(fchart: Chart) -> Chart:
    return Chart(tuple(c for c in fchart if c.kind != "form-shift"))


def xi_pullback(v: GradedPolynomial) -> GradedPolynomial:
    """xi* f = e^{|f| t} f on functions; e^{|b| t}(b + dt iota_eps b) on forms."""
    chart = v.chart
    if not chart.has_forms:
        out = chart.zero()
        for w, part in v.weight_components().items():
            out = out + chart.exp_t(w) * part
        return out
    base = _base_of_form_chart(chart)
    eps = euler_field(base)
    dt_index = base.time_index
    if dt_index is None:
        raise ModelCorrupt("xi needs a time coordinate")
    dt = chart.var("d" + base.names[dt_index])
    out = chart.zero()
    for w, part in v.weight_components().items():
        out = out + chart.exp_t(w) * (part + dt * interior_product(eps, part))
    return out


def xi_pushforward(f: GradedPolynomial) -> GradedPolynomial:
    """xi_* f = e^{-|f| t} f per weight component; inverse to xi* on functions."""
    chart = f.chart
    out = chart.zero()
    for w, part in f.weight_components().items():
        out = out + chart.exp_t(-w) * part
    return out


# -- Poissonization -----------------------------------------------------------


@dataclass(frozen=True)
class PoissonizationResult:
    pi: GradedPolynomial  # e^{-t}(Lambda + theta R) on the extended chart
    residual: GradedPolynomial  # schouten(pi, pi) on T*[1](M x R)
    symp: Symplectization


def poissonize(j: JacobiStructure) -> PoissonizationResult:
    """Compute the Poisson bivector along both routes and require equality."""
    m = model_of(j)
    symp = symplectize(m)
    q = build_q(j)
    _, H = hamiltonian_lift(q, m)

    h = build_h(j)
    expected_H = symp.chart.exp_t(1) * embed(h, symp.chart)
    if H != expected_H:
        raise ModelCorrupt("H_Q differs from e^t (Lambda + theta R)")

    pi_lifted = xi_pushforward(H)
    pi_direct = symp.chart.exp_t(-1) * embed(h, symp.chart)
    if pi_lifted != pi_direct:
        raise PathMismatch("Poissonization paths disagree")

    residual = poisson_bracket(pi_direct, pi_direct, symp.canonical)
    return PoissonizationResult(pi_direct, residual, symp)


def verify_diagram(j: JacobiStructure) -> Report:
    """End-to-end check of the commuting square, on one structure.

    Construction identities (path equality, xi relating the forms, the
    Hamiltonian equation) must hold for every input; the validity verdicts
    (Q^2, Poisson residual) hold exactly for Jacobi structures.
    """
    from .jacobi import is_jacobi
    from .structfile import dump_structure

    m = model_of(j)
    symp = symplectize(m)
    report = Report()

    def record(name: str, residual: GradedPolynomial) -> None:
        report.add(name, residual.is_zero(), print_polynomial(residual))

    e_t = symp.fchart.exp_t(1)
    dt = symp.fchart.var("dt")
    expanded = e_t * (dt * symp.alpha + exterior_derivative(symp.alpha))
    record("omega_tilde_identity", symp.omega_tilde - expanded)
    record(
        "xi_pullback_omega",
        xi_pullback(symp.canonical.omega) - symp.omega_tilde,
    )

    q = build_q(j)
    lifted, H = hamiltonian_lift(q, m)
    degree = lifted.require_homogeneous()
    sign = -1 if (degree - 1) % 2 else 1
    ham_residual = exterior_derivative(embed(H, symp.fchart)) - sign * interior_product(
        lifted, symp.omega_tilde
    )
    record("hamiltonian_equation_q", ham_residual)

    h = build_h(j)
    record("hamiltonian_function_form", H - symp.chart.exp_t(1) * embed(h, symp.chart))

    pi_lifted = xi_pushforward(H)
    pi_direct = symp.chart.exp_t(-1) * embed(h, symp.chart)
    record("paths_agree", pi_lifted - pi_direct)

    lift_report = homological_lift_check(q, m)
    for v in lift_report.verdicts:
        report.add(v.name, v.passed, v.residual)

    residual = poisson_bracket(pi_direct, pi_direct, symp.canonical)
    record("poisson_residual", residual)

    valid, _ = is_jacobi(j)
    report.add(
        "jacobi_iff_poisson_residual",
        valid == residual.is_zero(),
        "equivalence holds" if valid == residual.is_zero() else "equivalence FAILED",
    )
    report.echo = dump_structure(j)
    return report


CONSTRUCTION_VERDICTS = (
    "omega_tilde_identity",
    "xi_pullback_omega",
    "hamiltonian_equation_q",
    "hamiltonian_function_form",
    "paths_agree",
    "jacobi_iff_poisson_residual",
)

VALIDITY_VERDICTS = (
    "q_squared_zero",
    "q_phi_zero",
    "lift_squared_zero",
    "poisson_residual",
)
