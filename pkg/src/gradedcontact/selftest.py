"""Seeded randomized identity suites and their generators.

Random values are drawn from charts with weights <= 3, with at most six
terms per polynomial and exponents at most 3, so reports are reproducible
byte-for-byte for a fixed seed and run at desk scale.
"""

from __future__ import annotations

import random
from typing import List, Optional

from .algebra import Chart, GradedPolynomial, embed, form_extension, make_chart
from .cartan import (
    VectorField,
    apply_vf,
    exterior_derivative,
    interior_product,
    lie_derivative,
    vf_commutator,
    zero_field,
)
from .errors import GradedContactError
from .exprs import print_polynomial
from .jacobi import build_h, build_q, is_jacobi, jacobi_structure
from .report import Report
from .sympoiss import poissonize, xi_pullback, xi_pushforward
from .structures import (
    MultivectorAlgebra,
    contact_model,
    contact_vf_from_function,
    multivector_algebra,
    poisson_bracket,
    schouten,
)

SUITES = ("cartan", "structures", "all")


# -- random generators --------------------------------------------------------


def monomial_keys_of_degree(
    chart: Chart, total_degree: int, max_exp: int = 3
) -> List[tuple]:
    """All exponent tuples of the given total degree, exponents capped."""
    keys: List[tuple] = []

    def rec(i: int, remaining: int, exps: List[int]) -> None:
        if i == len(chart):
            if remaining == 0:
                keys.append(tuple(exps))
            return
        td = chart.total_degrees[i]
        cap = 1 if chart.total_degrees[i] % 2 else max_exp
        for e in range(cap + 1):
            if td > 0 and e * td > remaining:
                break
            exps[i] = e
            rec(i + 1, remaining - e * td, exps)
        exps[i] = 0

    rec(0, total_degree, [0] * len(chart))
    return keys


def random_homogeneous(
    rng: random.Random,
    chart: Chart,
    total_degree: int,
    max_terms: int = 4,
    max_exp: int = 3,
) -> GradedPolynomial:
    keys = monomial_keys_of_degree(chart, total_degree, max_exp)
    if not keys:
        return chart.zero()
    count = rng.randint(1, min(max_terms, len(keys)))
    chosen = rng.sample(keys, count)
    poly = chart.zero()
    for key in chosen:
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        poly = poly + chart.term(coeff, dict(zip(chart.names, key)))
    return poly


def random_polynomial(
    rng: random.Random,
    chart: Chart,
    max_terms: int = 6,
    max_exp: int = 3,
    exp_powers=(0,),
) -> GradedPolynomial:
    poly = chart.zero()
    for _ in range(rng.randint(1, max_terms)):
        exps = []
        for i in range(len(chart)):
            cap = 1 if chart.total_degrees[i] % 2 else max_exp
            exps.append(rng.randint(0, min(cap, 2)))
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        poly = poly + chart.term(
            coeff, dict(zip(chart.names, exps)), rng.choice(exp_powers)
        )
    return poly


def random_vector_field(
    rng: random.Random, chart: Chart, degree: Optional[int] = None
) -> VectorField:
    if degree is None:
        degree = rng.randint(-3, 3)
    comps = {}
    for i, c in enumerate(chart.coordinates):
        if rng.random() < 0.3:
            continue
        poly = random_homogeneous(rng, chart, degree + chart.total_degrees[i], 3)
        if not poly.is_zero():
            comps[c.name] = poly
    if not comps:
        return zero_field(chart, degree)
    return VectorField(chart, comps, degree)


def random_jacobi_pair(rng: random.Random, alg: MultivectorAlgebra):
    """A random (Lambda, R) with coefficient degree <= 2; not usually Jacobi."""
    chart = alg.chart
    names = alg.base_names

    def coefficient() -> GradedPolynomial:
        poly = chart.zero()
        for _ in range(rng.randint(0, 2)):
            exps = {x: 0 for x in names}
            for _ in range(rng.randint(0, 2)):
                exps[rng.choice(names)] += 1
            poly = poly + chart.term(rng.choice([-2, -1, 1, 2]), exps)
        return poly

    bivector = chart.zero()
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            bivector = bivector + coefficient() * chart.var(
                "p_" + names[a]
            ) * chart.var("p_" + names[b])
    vector = chart.zero()
    for x in names:
        vector = vector + coefficient() * chart.var("p_" + x)
    return jacobi_structure(alg, bivector, vector)


# -- identity suites -----------------------------------------------------------


class _Tally:
    """Aggregates per-identity trial outcomes into report verdicts."""

    def __init__(self) -> None:
        self.failures: dict = {}
        self.names: List[str] = []

    def check(self, name: str, trial: int, residual) -> None:
        if name not in self.names:
            self.names.append(name)
        ok = residual.is_zero() if hasattr(residual, "is_zero") else not residual
        if not ok and name not in self.failures:
            text = (
                print_polynomial(residual)
                if isinstance(residual, GradedPolynomial)
                else repr(residual)
            )
            self.failures[name] = f"trial {trial}: {text}"

    def into(self, report: Report) -> None:
        for name in self.names:
            failure = self.failures.get(name)
            report.add(name, failure is None, failure or "0")


_CARTAN_CHARTS = (
    (("x", 0, "base"), ("p", 1, "momentum")),
    (("x", 0, "base"), ("y", 0, "base"), ("p_x", 1, "momentum"), ("p_y", 1, "momentum")),
    (("u", 1, "base"), ("v", 2, "base"), ("w", 3, "base")),
)


def cartan_suite(seed: int, trials: int) -> Report:
    """The convention commutation relations and d^2 = 0 on random triples."""
    rng = random.Random(seed)
    tally = _Tally()
    charts = [make_chart(spec) for spec in _CARTAN_CHARTS]
    for trial in range(trials):
        chart = charts[trial % len(charts)]
        fchart = form_extension(chart)
        X = random_vector_field(rng, chart)
        Y = random_vector_field(rng, chart)
        omega = random_polynomial(rng, fchart)
        dx, dy = X.degree, Y.degree

        sign = -1 if dx % 2 else 1
        lie = interior_product(X, exterior_derivative(omega)) + sign * (
            exterior_derivative(interior_product(X, omega))
        )
        tally.check("cartan/lie_is_iota_d_commutator", trial, lie_derivative(X, omega) - lie)

        sign = -1 if (dx * (dy - 1)) % 2 else 1
        lhs = interior_product(vf_commutator(X, Y), omega)
        rhs = lie_derivative(X, interior_product(Y, omega)) - sign * (
            interior_product(Y, lie_derivative(X, omega))
        )
        tally.check("cartan/interior_of_commutator", trial, lhs - rhs)

        sign = -1 if ((dx - 1) * (dy - 1)) % 2 else 1
        lhs = interior_product(X, interior_product(Y, omega))
        rhs = sign * interior_product(Y, interior_product(X, omega))
        tally.check("cartan/interior_anticommutation", trial, lhs - rhs)

        tally.check(
            "cartan/d_squared", trial, exterior_derivative(exterior_derivative(omega))
        )

        f = random_polynomial(rng, chart)
        tally.check(
            "cartan/lie_on_functions_is_apply",
            trial,
            lie_derivative(X, f) - apply_vf(X, f),
        )

    report = Report(seed=seed, echo={"suite": "cartan", "trials": trials})
    tally.into(report)
    return report


def structures_suite(seed: int, trials: int) -> Report:
    """Bracket laws, the contact solver, and the Poissonization square."""
    rng = random.Random(seed)
    tally = _Tally()
    r2 = multivector_algebra(["x", "y"])
    r3 = multivector_algebra(["x", "y", "z"])
    model2 = contact_model(r2.darboux)

    for trial in range(trials):
        alg = r3 if trial % 3 == 2 else r2
        s = alg.darboux
        f = random_homogeneous(rng, alg.chart, rng.randint(0, 3))
        g = random_homogeneous(rng, alg.chart, rng.randint(0, 3))
        h = random_homogeneous(rng, alg.chart, rng.randint(0, 3))
        df, dg = f.weight(), g.weight()

        sign = -1 if ((df - 1) * (dg - 1)) % 2 else 1
        tally.check(
            "structures/poisson_skew",
            trial,
            poisson_bracket(f, g, s) + sign * poisson_bracket(g, f, s),
        )

        sign = -1 if ((df - 1) * (dg - 1)) % 2 else 1
        jacobi_residual = (
            poisson_bracket(f, poisson_bracket(g, h, s), s)
            - poisson_bracket(poisson_bracket(f, g, s), h, s)
            - sign * poisson_bracket(g, poisson_bracket(f, h, s), s)
        )
        tally.check("structures/poisson_jacobi", trial, jacobi_residual)

        sign = -1 if ((df - 1) * dg) % 2 else 1
        leibniz = (
            schouten(f, g * h, alg)
            - schouten(f, g, alg) * h
            - sign * (g * schouten(f, h, alg))
        )
        tally.check("structures/schouten_leibniz", trial, leibniz)

    for trial in range(trials):
        h = random_homogeneous(rng, model2.chart, 2, max_terms=5)
        X = contact_vf_from_function(h, model2)
        tally.check(
            "structures/contact_solver_alpha",
            trial,
            interior_product(X, model2.alpha) - embed(h, model2.fchart),
        )

    heavy = max(10, min(trials, 60))
    for trial in range(heavy):
        alg = r3 if trial % 4 == 3 else r2
        j = random_jacobi_pair(rng, alg)
        q = build_q(j)
        solved = contact_vf_from_function(build_h(j), contact_model(alg.darboux))
        same = q == solved
        tally.check("structures/q_closed_form_matches_solver", trial, 0 if same else 1)

        result = poissonize(j)
        valid, _ = is_jacobi(j)
        tally.check(
            "structures/poisson_residual_iff_jacobi",
            trial,
            0 if result.residual.is_zero() == valid else 1,
        )

        symp = result.symp
        fn = random_polynomial(rng, symp.chart, max_terms=4, exp_powers=(-1, 0, 1))
        tally.check(
            "structures/xi_roundtrip",
            trial,
            xi_pushforward(xi_pullback(fn)) - fn,
        )
        tally.check(
            "structures/xi_relates_symplectic_forms",
            trial,
            xi_pullback(symp.canonical.omega) - symp.omega_tilde,
        )

    report = Report(seed=seed, echo={"suite": "structures", "trials": trials})
    tally.into(report)
    return report


def run_selftest(suite: str, seed: int, trials: int) -> Report:
    if suite not in SUITES:
        raise GradedContactError(f"unknown suite {suite!r}")
    if suite == "cartan":
        return cartan_suite(seed, trials)
    if suite == "structures":
        return structures_suite(seed, trials)
    merged = Report(seed=seed, echo={"suite": "all", "trials": trials})
    for part in (cartan_suite(seed, trials), structures_suite(seed, trials)):
        merged.verdicts.extend(part.verdicts)
    return merged
