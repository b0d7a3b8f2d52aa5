"""The jacobi/1 JSON structure file format.

A structure file declares the base coordinates of M and the components of
the pair (Lambda, R) as indexed term lists:

    {
      "format": "jacobi/1",
      "base_coordinates": ["x", "y", "z"],
      "lambda_terms": [{"coeff": "z", "i": 0, "j": 1}, ...],
      "r_terms": [{"coeff": "1", "i": 2}, ...]
    }

Coefficients are expressions over the base coordinates.  Antisymmetry is
normalized structurally: a term with i > j is re-indexed as (j, i) with
the coefficient negated, and i == j is rejected.
"""

from __future__ import annotations

import json
from typing import Sequence

from .algebra import Chart, Coordinate, GradedPolynomial
from .errors import IndexOutOfRange, SchemaError, UnknownIdentifier
from .exprs import parse_polynomial, print_polynomial
from .jacobi import JacobiStructure, jacobi_structure
from .structures import MultivectorAlgebra, multivector_algebra

FORMAT_NAME = "jacobi/1"

_RESERVED = {"t", "theta", "E1"}


def _validate_names(names: Sequence[str]) -> None:
    if not names:
        raise SchemaError("base_coordinates must be a nonempty list of names")
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name.isidentifier():
            raise SchemaError(f"bad coordinate name {name!r}")
        if name in _RESERVED:
            raise SchemaError(f"{name!r} is reserved for generated coordinates")
        if name.startswith("p_") or name.startswith("d"):
            raise SchemaError(
                f"{name!r} collides with generated momentum or form names"
            )
        if name in seen:
            raise SchemaError(f"duplicate coordinate name {name!r}")
        seen.add(name)


def _coefficient(text, base_chart: Chart) -> GradedPolynomial:
    if not isinstance(text, str):
        raise SchemaError(f"coefficient must be a string, got {text!r}")
    try:
        return parse_polynomial(text, base_chart)
    except UnknownIdentifier as exc:
        raise SchemaError(str(exc)) from exc


def _index(value, size: int, label: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{label} index must be an integer, got {value!r}")
    if not 0 <= value < size:
        raise IndexOutOfRange(f"{label} index {value} out of range for {size} coordinates")
    return value


def structure_from_dict(data: dict) -> JacobiStructure:
    if not isinstance(data, dict):
        raise SchemaError("structure file must contain a JSON object")
    if data.get("format") != FORMAT_NAME:
        raise SchemaError(f"unsupported format {data.get('format')!r}")
    names = data.get("base_coordinates")
    if not isinstance(names, list):
        raise SchemaError("base_coordinates must be a list")
    _validate_names(names)
    base_chart = Chart(tuple(Coordinate(n, 0, "base") for n in names))
    alg = multivector_algebra(names)
    size = len(names)

    bivector = alg.chart.zero()
    for entry in data.get("lambda_terms", []):
        if not isinstance(entry, dict):
            raise SchemaError("lambda_terms entries must be objects")
        i = _index(entry.get("i"), size, "lambda")
        j = _index(entry.get("j"), size, "lambda")
        if i == j:
            raise SchemaError(f"lambda term with i = j = {i}")
        coeff = _coefficient(entry.get("coeff"), base_chart)
        if j < i:
            i, j = j, i
            coeff = -coeff
        term = (
            _lift(coeff, alg)
            * alg.chart.var("p_" + names[i])
            * alg.chart.var("p_" + names[j])
        )
        bivector = bivector + term

    vector = alg.chart.zero()
    for entry in data.get("r_terms", []):
        if not isinstance(entry, dict):
            raise SchemaError("r_terms entries must be objects")
        i = _index(entry.get("i"), size, "r")
        coeff = _coefficient(entry.get("coeff"), base_chart)
        vector = vector + _lift(coeff, alg) * alg.chart.var("p_" + names[i])

    return jacobi_structure(alg, bivector, vector)


def _lift(p: GradedPolynomial, alg: MultivectorAlgebra) -> GradedPolynomial:
    from .algebra import embed

    return embed(p, alg.chart)


def load_structure(path) -> JacobiStructure:
    """Read and validate a jacobi/1 file; OSError propagates for I/O failures."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return structure_from_dict(data)


def dump_structure(j: JacobiStructure) -> dict:
    """Canonical dict form: terms sorted by index, coefficients canonical."""
    names = list(j.alg.base_names)
    base_chart = Chart(tuple(Coordinate(n, 0, "base") for n in names))
    momentum_positions = {
        j.alg.chart.index("p_" + name): k for k, name in enumerate(names)
    }

    def split(poly: GradedPolynomial, count: int) -> dict:
        buckets: dict = {}
        for (exps, k), coeff in poly.terms.items():
            indices = tuple(
                momentum_positions[pos]
                for pos in momentum_positions
                if exps[pos]
            )
            if len(indices) != count or k != 0:
                raise SchemaError("structure has terms outside the schema")
            stripped = tuple(
                0 if pos in momentum_positions else e for pos, e in enumerate(exps)
            )
            bucket = buckets.setdefault(indices, {})
            bucket[(stripped, 0)] = coeff
        return buckets

    lambda_terms = []
    lambda_buckets = split(j.bivector, 2)
    for indices in sorted(lambda_buckets):
        coeff = _restrict(GradedPolynomial(j.alg.chart, lambda_buckets[indices]), base_chart)
        lambda_terms.append(
            {"coeff": print_polynomial(coeff), "i": indices[0], "j": indices[1]}
        )
    r_terms = []
    r_buckets = split(j.vector, 1)
    for indices in sorted(r_buckets):
        coeff = _restrict(GradedPolynomial(j.alg.chart, r_buckets[indices]), base_chart)
        r_terms.append({"coeff": print_polynomial(coeff), "i": indices[0]})

    return {
        "format": FORMAT_NAME,
        "base_coordinates": names,
        "lambda_terms": lambda_terms,
        "r_terms": r_terms,
    }


def _restrict(p: GradedPolynomial, target: Chart) -> GradedPolynomial:
    from .algebra import embed

    return embed(p, target)


def save_structure(j: JacobiStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(dump_structure(j), handle, indent=2, ensure_ascii=False)
        handle.write("\n")
