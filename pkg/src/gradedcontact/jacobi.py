"""Jacobi structures and the homological contact field of the degree-1 model.

A pair (Lambda, R) of a bivector and a vector field on M corresponds to
the degree-2 function h = Lambda + theta R on T*[1]M x R[1]; its contact
vector field has the closed form

    Q = X_Lambda + theta X_R - R eps - (Lambda + theta R) d/dtheta,

and Q^2 = 0 exactly when [Lambda, Lambda] = 2 R Lambda and [R, Lambda] = 0.
Both routes to the obstruction are computed and must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import GradedPolynomial, MIXED, embed
from .cartan import VectorField, apply_vf, interior_product, lie_derivative, vf_commutator
from .errors import ModelCorrupt, WrongMultidegree
from .structures import (
    ContactModel,
    MultivectorAlgebra,
    contact_model,
    euler_field,
    hamiltonian_vf,
    schouten,
)


@dataclass(frozen=True)
class JacobiStructure:
    alg: MultivectorAlgebra
    bivector: GradedPolynomial  # Lambda, momentum degree 2
    vector: GradedPolynomial  # R, momentum degree 1


def jacobi_structure(
    alg: MultivectorAlgebra,
    bivector: GradedPolynomial,
    vector: GradedPolynomial,
) -> JacobiStructure:
    for poly, expected, label in ((bivector, 2, "bivector"), (vector, 1, "vector")):
        if poly.is_zero():
            continue
        if alg.momentum_degree(poly) != expected or poly.weight() != expected:
            raise WrongMultidegree(
                f"{label} must be homogeneous of multivector degree {expected}"
            )
    return JacobiStructure(alg, bivector, vector)


def model_of(j: JacobiStructure) -> ContactModel:
    return contact_model(j.alg.darboux)


def build_h(j: JacobiStructure) -> GradedPolynomial:
    """h = Lambda + theta R, the weight-2 function of the structure."""
    m = model_of(j)
    return embed(j.bivector, m.chart) + m.theta * embed(j.vector, m.chart)


def build_q(j: JacobiStructure) -> VectorField:
    """The closed-form homological candidate; re-verified against eqns of X_h."""
    m = model_of(j)
    chart = m.chart
    lam_poly = embed(j.bivector, chart)
    r_poly = embed(j.vector, chart)
    theta = m.theta

    x_lam = _lift_field(hamiltonian_vf(j.bivector, j.alg.darboux), chart, 1)
    x_r = _lift_field(hamiltonian_vf(j.vector, j.alg.darboux), chart, 0)
    h = lam_poly + theta * r_poly

    q = x_lam + theta * x_r + (-(r_poly)) * euler_field(chart)
    comps = dict(q.components)
    theta_comp = comps.get(m.theta_name, chart.zero()) - h
    if theta_comp.is_zero():
        comps.pop(m.theta_name, None)
    else:
        comps[m.theta_name] = theta_comp
    q = VectorField(chart, comps, 1)
    _verify_q(q, j, m, h)
    return q


def _lift_field(X: VectorField, chart, degree: int) -> VectorField:
    comps = {name: embed(p, chart) for name, p in X.components.items()}
    return VectorField(chart, comps, X.degree if not X.is_zero() else degree)


def _verify_q(q: VectorField, j: JacobiStructure, m: ContactModel, h) -> None:
    h_f = embed(h, m.fchart)
    if interior_product(q, m.alpha) != h_f:
        raise ModelCorrupt("Q fails iota_Q alpha = Lambda + theta R")
    from .cartan import exterior_derivative

    lam_f = embed(j.bivector, m.fchart)
    r_f = embed(j.vector, m.fchart)
    theta_f = embed(m.theta, m.fchart)
    rhs = (
        exterior_derivative(lam_f)
        - theta_f * exterior_derivative(r_f)
        - r_f * m.lam
    )
    if interior_product(q, exterior_derivative(m.alpha)) != rhs:
        raise ModelCorrupt("Q fails iota_Q d alpha = d Lambda - theta dR - R lambda")
    if lie_derivative(q, m.alpha) != -(r_f * m.alpha):
        raise ModelCorrupt("Q fails L_Q alpha = -R alpha")


@dataclass(frozen=True)
class JacobiResiduals:
    """The two bracket residuals and the independently computed obstruction."""

    lambda_lambda: GradedPolynomial  # [Lambda, Lambda] - 2 R Lambda
    r_lambda: GradedPolynomial  # [R, Lambda]
    obstruction: GradedPolynomial  # iota_{[Q,Q]} alpha

    @property
    def all_zero(self) -> bool:
        return (
            self.lambda_lambda.is_zero()
            and self.r_lambda.is_zero()
            and self.obstruction.is_zero()
        )


def q_squared_residuals(j: JacobiStructure) -> JacobiResiduals:
    """Compute the Jacobi residuals and check them against iota_{[Q,Q]} alpha."""
    res_ll = schouten(j.bivector, j.bivector, j.alg) - 2 * j.vector * j.bivector
    res_rl = schouten(j.vector, j.bivector, j.alg)

    m = model_of(j)
    q = build_q(j)
    square = vf_commutator(q, q)
    obstruction = embed(interior_product(square, m.alpha), m.chart)

    recomposed = embed(res_ll, m.chart) + 2 * m.theta * embed(res_rl, m.chart)
    if obstruction != recomposed:
        raise ModelCorrupt(
            "obstruction disagrees with [Lambda,Lambda] - 2R Lambda + 2 theta [R,Lambda]"
        )
    return JacobiResiduals(res_ll, res_rl, obstruction)


def is_jacobi(j: JacobiStructure):
    """True iff both residuals vanish; cross-checked against Q.Q on generators.

    Returns (verdict, residuals).
    """
    residuals = q_squared_residuals(j)
    by_residuals = residuals.lambda_lambda.is_zero() and residuals.r_lambda.is_zero()

    q = build_q(j)
    square = vf_commutator(q, q)
    by_generators = square.is_zero()
    by_obstruction = residuals.obstruction.is_zero()
    if not (by_residuals == by_generators == by_obstruction):
        raise ModelCorrupt("the three Q^2 tests disagree")
    return by_residuals, residuals
