"""JSON files describing sheaf presentations.

    {
      "n": 2,
      "field": "Q",                  # or a prime such as "F7" / 7; optional, default Q
      "targets": [0],                # twists b_j
      "sources": [-1, -1],           # twists a_i
      "matrix": [                    # one row per target, one entry per source
        [ [[1, [1, 0, 0]]],  [[1, [0, 1, 0]]] ]
      ]
    }

Each matrix entry is a list of ``[coefficient, exponents]`` terms.
Coefficients are integers or strings such as "3/4".  An empty list is 0.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .exact_linalg import field_from_name
from .proj_quiver import PresentationError, TwistPresentation


def _coef(x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise PresentationError(f"coefficient {x!r} must be an integer or a fraction string")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise PresentationError(f"coefficient {x!r}: {exc}") from exc


def presentation_from_dict(data: dict) -> TwistPresentation:
    try:
        n = int(data["n"])
        targets = [int(b) for b in data["targets"]]
        sources = [int(a) for a in data.get("sources", [])]
        raw = data.get("matrix", [[] for _ in targets])
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"malformed presentation: {exc}") from exc
    fld = field_from_name(str(data.get("field", "Q")))
    matrix = []
    for row in raw:
        if not isinstance(row, list):
            raise PresentationError("matrix rows must be lists")
        entries = []
        for entry in row:
            if not isinstance(entry, list):
                raise PresentationError("matrix entries must be lists of [coef, exponents] terms")
            terms = []
            for term in entry:
                if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], list)):
                    raise PresentationError(f"bad term {term!r}")
                terms.append((_coef(term[0]), tuple(int(e) for e in term[1])))
            entries.append(tuple(terms))
        matrix.append(tuple(entries))
    return TwistPresentation(n, tuple(targets), tuple(sources), tuple(matrix), fld)


def _coef_out(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else str(c)
    return int(c)


def presentation_to_dict(P: TwistPresentation) -> dict:
    return {
        "n": P.n,
        "field": P.field.name,
        "targets": list(P.targets),
        "sources": list(P.sources),
        "matrix": [
            [[[_coef_out(c), list(e)] for c, e in entry] for entry in row] for row in P.matrix
        ],
    }


def load_presentation(path: Union[str, Path]) -> TwistPresentation:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PresentationError(f"{path}: not valid JSON ({exc})") from exc
    return presentation_from_dict(data)


def dump_presentation(P: TwistPresentation, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(presentation_to_dict(P), indent=2) + "\n")


__all__ = ["presentation_from_dict", "presentation_to_dict", "load_presentation", "dump_presentation"]
