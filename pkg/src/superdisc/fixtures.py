"""JSON fixtures: parsing by kind and one-off evaluation of named operations."""
from __future__ import annotations

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .errors import FixtureError
from .grassmann import GrassmannElement, g_exp, g_inverse, g_pow
from .disc import DiscPoint, GroupElement, LieElement, check_pseudounitary, is_in_disc, lift, moebius, phi, phi_rearranged
from .quantize import MonomialSection, central_term, fhat, rho, weight
from .supermatrix import SpaceShape, SuperMatrix, sm_dagger, sm_exp, sm_inverse, sm_pow, sm_sdet, sm_str, sm_str_J
from .symplectic import cocycle, cocycle_blocks, moment_map, omega, vector_field

KINDS = ("grassmann", "matrix", "disc_point", "group_element", "lie_element", "section")


def infer_kind(obj: Any) -> str:
    if isinstance(obj, list):
        return "section"
    if not isinstance(obj, dict):
        raise FixtureError("fixture must be a JSON object or a list of section terms")
    if "kind" in obj:
        return obj["kind"]
    if "coeffs" in obj:
        return "grassmann"
    if "entries" in obj:
        return "matrix"
    raise FixtureError("cannot infer fixture kind; pass it explicitly")


def load_fixture(obj: Any, kind: Optional[str] = None):
    kind = kind or infer_kind(obj)
    if kind not in KINDS:
        raise FixtureError(f"unknown fixture kind {kind!r}")
    if kind == "grassmann":
        return GrassmannElement.from_json(obj)
    if kind == "matrix":
        return SuperMatrix.from_json(obj)
    if kind == "disc_point":
        return DiscPoint.from_json(obj)
    if kind == "group_element":
        return GroupElement.from_json(obj)
    if kind == "lie_element":
        return LieElement.from_json(obj)
    return MonomialSection.from_json(obj)


def _matrix_out(M: SuperMatrix, shape: Optional[SpaceShape] = None) -> dict:
    return M.to_json(shape)


def _shape_of(M: SuperMatrix) -> Optional[SpaceShape]:
    if M.row_kinds != M.col_kinds:
        return None
    k = M.row_kinds
    shape = SpaceShape(k.count("-"), k.count("+"), k.count("o"), M.n_pairs)
    return shape if shape.kinds == k else None


# op name -> (input kinds, function(inputs, k) -> JSON-able)
OPS: Dict[str, Tuple[Tuple[str, ...], Callable[[list, int], Any]]] = {
    "star": (("grassmann",), lambda a, k: a[0].star().to_json()),
    "g_inverse": (("grassmann",), lambda a, k: g_inverse(a[0]).to_json()),
    "g_exp": (("grassmann",), lambda a, k: g_exp(a[0]).to_json()),
    "g_sqrt": (("grassmann",), lambda a, k: g_pow(a[0], 0.5).to_json()),
    "g_mul": (("grassmann", "grassmann"), lambda a, k: (a[0] * a[1]).to_json()),
    "sdet": (("matrix",), lambda a, k: sm_sdet(a[0]).to_json()),
    "str": (("matrix",), lambda a, k: sm_str(a[0]).to_json()),
    "str_J": (("matrix",), lambda a, k: sm_str_J(a[0]).to_json()),
    "inverse": (("matrix",), lambda a, k: _matrix_out(sm_inverse(a[0]), _shape_of(a[0]))),
    "dagger": (("matrix",), lambda a, k: _matrix_out(sm_dagger(a[0]), _shape_of(a[0]))),
    "exp": (("matrix",), lambda a, k: _matrix_out(sm_exp(a[0]), _shape_of(a[0]))),
    "sqrt": (("matrix",), lambda a, k: _matrix_out(sm_pow(a[0], 0.5), _shape_of(a[0]))),
    "mul": (("matrix", "matrix"), lambda a, k: _matrix_out(a[0] @ a[1], _shape_of(a[0] @ a[1]))),
    "phi": (("disc_point",), lambda a, k: phi(a[0]).to_json(a[0].shape)),
    "phi_rearranged": (("disc_point",), lambda a, k: phi_rearranged(a[0]).to_json(a[0].shape)),
    "lift": (("disc_point",), lambda a, k: lift(a[0]).to_json()),
    "in_disc": (("disc_point",), lambda a, k: dict(zip(("inside", "margin"), is_in_disc(a[0])))),
    "weight": (("disc_point",), lambda a, k: weight(a[0], k).to_json()),
    "moebius": (("group_element", "disc_point"), lambda a, k: moebius(a[0], a[1]).to_json()),
    "pseudounitary": (("group_element",), lambda a, k: {"residual": check_pseudounitary(a[0])}),
    "central_term": (("group_element", "group_element"), lambda a, k: central_term(a[0], a[1], k).to_json()),
    "vector_field": (("lie_element", "disc_point"), lambda a, k: vector_field(a[0], a[1]).dZ.to_json()),
    "omega": (("lie_element", "lie_element", "disc_point"), lambda a, k: omega(a[0], a[1], a[2]).to_json()),
    "moment_map": (("lie_element", "disc_point"), lambda a, k: moment_map(a[0], a[1]).to_json()),
    "cocycle": (("lie_element", "lie_element"), lambda a, k: cocycle(a[0], a[1]).to_json()),
    "cocycle_blocks": (("lie_element", "lie_element"), lambda a, k: cocycle_blocks(a[0], a[1]).to_json()),
    "section": (("section", "disc_point"), lambda a, k: a[0](a[1]).to_json()),
    "fhat": (("lie_element", "section", "disc_point"), lambda a, k: fhat(a[0], a[1], k)(a[2]).to_json()),
    "rho": (("group_element", "section", "disc_point"), lambda a, k: rho(a[0], a[1], k)(a[2]).to_json()),
}


def eval_fixture(op: str, objects: Sequence[Any], kinds: Optional[Sequence[Optional[str]]] = None, k: int = 1):
    """Parse the fixture objects and apply ``op``; returns a JSON-able result."""
    if op not in OPS:
        raise FixtureError(f"unknown operation {op!r}; choose from {', '.join(sorted(OPS))}")
    want, fn = OPS[op]
    if len(objects) != len(want):
        raise FixtureError(f"{op} takes {len(want)} input(s) ({', '.join(want)}), got {len(objects)}")
    kinds = list(kinds or [])
    if len(kinds) == 1:
        kinds = kinds * len(objects)
    elif kinds and len(kinds) != len(objects):
        raise FixtureError("give one --kind for all inputs or one per input")
    parsed: List[Any] = []
    for i, (obj, expected) in enumerate(zip(objects, want)):
        tagged = isinstance(obj, dict) and "kind" in obj
        kind = obj["kind"] if tagged else (kinds[i] if kinds else None) or infer_kind(obj)
        if kind != expected:
            raise FixtureError(f"{op} expects a {expected} fixture as input {i + 1}, got {kind}")
        parsed.append(load_fixture(obj, kind))
    return fn(parsed, k)
