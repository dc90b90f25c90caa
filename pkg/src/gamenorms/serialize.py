"""Canonical JSON documents for games, Bell functionals and behaviors.

One document per object:

``{"kind": "game", "nx": ., "ny": ., "na": ., "nb": .,
   "pi": [[...]], "v": [[[[...]]]]}``

``{"kind": "bell", ..., "g": [[[[...]]]]}``

``{"kind": "behavior", ..., "p": [[[[...]]]], "nonneg": bool,
   "normalized": bool}``

``pi`` is indexed ``[x][y]``; the 4-deep arrays ``v``/``g``/``p`` are all
indexed ``[x][a][y][b]`` (note that the in-memory predicate of a
:class:`~gamenorms.games.Game` is ``(x, y, a, b)`` and is reordered on
the wire).  Numbers are decimal with shortest-round-trip printing, so
``parse(emit(obj))`` reproduces IEEE-754 doubles bit-exactly.  ``emit``
output is canonical (sorted keys, fixed separators): equal objects
always serialize to equal bytes.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import SchemaError
from .games import BehaviorTensor, BellFunctional, Game

_KINDS = ("game", "bell", "behavior")


def emit(obj: Game | BellFunctional | BehaviorTensor) -> str:
    """Serialize an object to its canonical JSON document."""
    if isinstance(obj, Game):
        doc: dict[str, Any] = {
            "kind": "game",
            "nx": obj.nx,
            "ny": obj.ny,
            "na": obj.na,
            "nb": obj.nb,
            "pi": obj.pi.tolist(),
            "v": obj.v.transpose(0, 2, 1, 3).tolist(),
        }
    elif isinstance(obj, BellFunctional):
        doc = {
            "kind": "bell",
            "nx": obj.nx,
            "ny": obj.ny,
            "na": obj.na,
            "nb": obj.nb,
            "g": obj.g.tolist(),
        }
    elif isinstance(obj, BehaviorTensor):
        doc = {
            "kind": "behavior",
            "nx": obj.nx,
            "ny": obj.ny,
            "na": obj.na,
            "nb": obj.nb,
            "p": obj.p.tolist(),
            "nonneg": obj.nonneg,
            "normalized": obj.normalized,
        }
    else:
        raise SchemaError(f"cannot serialize object of type {type(obj).__name__}")
    return json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def _field(doc: dict, name: str, kind: str) -> Any:
    if name not in doc:
        raise SchemaError(f"{kind} document is missing field {name!r}")
    return doc[name]


def _dim(doc: dict, name: str, kind: str) -> int:
    value = _field(doc, name, kind)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SchemaError(f"field {name!r} must be a positive integer")
    return value


def _array(doc: dict, name: str, shape: tuple[int, ...], kind: str) -> np.ndarray:
    raw = _field(doc, name, kind)
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field {name!r} is not a numeric array: {exc}") from exc
    if arr.shape != shape:
        raise SchemaError(
            f"field {name!r} has shape {arr.shape}, expected {shape}"
        )
    return arr


def parse(text: str, allow_unnormalized: bool = False):
    """Parse a document back into a Game, BellFunctional or BehaviorTensor.

    A game whose distribution does not sum to one is rejected unless
    ``allow_unnormalized`` is set, in which case it is renormalized.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("document root must be a JSON object")
    kind = _field(doc, "kind", "any")
    if kind not in _KINDS:
        raise SchemaError(f"unknown kind {kind!r}, expected one of {_KINDS}")
    nx = _dim(doc, "nx", kind)
    ny = _dim(doc, "ny", kind)
    na = _dim(doc, "na", kind)
    nb = _dim(doc, "nb", kind)
    if kind == "game":
        pi = _array(doc, "pi", (nx, ny), kind)
        v = _array(doc, "v", (nx, na, ny, nb), kind).transpose(0, 2, 1, 3)
        return Game(pi, v, renormalize=allow_unnormalized)
    if kind == "bell":
        return BellFunctional(_array(doc, "g", (nx, na, ny, nb), kind))
    p = _array(doc, "p", (nx, na, ny, nb), kind)
    nonneg = _field(doc, "nonneg", kind)
    normalized = _field(doc, "normalized", kind)
    if not isinstance(nonneg, bool) or not isinstance(normalized, bool):
        raise SchemaError("behavior tags 'nonneg'/'normalized' must be booleans")
    return BehaviorTensor(p, nonneg=nonneg, normalized=normalized)


def parse_file(path: str, allow_unnormalized: bool = False):
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read(), allow_unnormalized=allow_unnormalized)


def emit_file(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(emit(obj))
