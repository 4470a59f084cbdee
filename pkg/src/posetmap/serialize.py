"""JSON wire format for elements.

Document shape::

    {"dim": 3,
     "pieces": [{"box": [[lo, hi], ...], "perm": [..], "shift": [..]}],
     "holes": [[x1, x2, x3], ...],
     "patch": [[[x1, x2, x3], [y1, y2, y3]], ...]}

``hi`` is ``null`` for an unbounded side; ``perm`` lists 1-based target
positions.  Only integers appear.  Output is canonical: pieces, holes and
patch entries are sorted and keys are emitted in a fixed order.
"""
from __future__ import annotations

import json

from .errors import PosetMapError, RepresentationError
from .pmap import PiecewiseMap, Rule, from_parts
from .regions import UNBOUNDED, Box

SCHEMA_VERSION = 1


class FormatError(PosetMapError, ValueError):
    """Malformed document; ``where`` is a field path or ``line N``."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def to_document(alpha: PiecewiseMap) -> dict:
    pieces = []
    for box, rule in sorted(alpha.pieces, key=lambda br: (br[0], br[1].key())):
        pieces.append({
            "box": [[lo, None if hi == UNBOUNDED else hi] for lo, hi in zip(box.lo, box.hi)],
            "perm": [t + 1 for t in rule.perm],
            "shift": list(rule.shift),
        })
    return {
        "dim": alpha.dim,
        "pieces": pieces,
        "holes": [list(h) for h in sorted(alpha.holes)],
        "patch": [[list(p), list(q)] for p, q in sorted(alpha.patch)],
    }


def dumps(alpha: PiecewiseMap) -> str:
    return json.dumps(to_document(alpha), separators=(",", ":")) + "\n"


def _int(v, where: str, minimum: int | None = None) -> int:
    if type(v) is not int:
        raise FormatError(where, f"expected an integer, got {json.dumps(v)}")
    if minimum is not None and v < minimum:
        raise FormatError(where, f"must be >= {minimum}")
    return v


def _list(v, where: str, length: int | None = None) -> list:
    if not isinstance(v, list):
        raise FormatError(where, "expected an array")
    if length is not None and len(v) != length:
        raise FormatError(where, f"expected {length} entries, got {len(v)}")
    return v


def _point(v, where: str, dim: int) -> tuple:
    return tuple(_int(c, f"{where}[{i}]", 1) for i, c in enumerate(_list(v, where, dim)))


def from_document(doc) -> PiecewiseMap:
    if not isinstance(doc, dict):
        raise FormatError("$", "expected an object")
    extra = set(doc) - {"dim", "pieces", "holes", "patch"}
    if extra:
        raise FormatError("$", f"unknown field(s) {sorted(extra)}")
    if "dim" not in doc:
        raise FormatError("dim", "missing")
    dim = _int(doc["dim"], "dim", 1)
    pieces = []
    for k, pc in enumerate(_list(doc.get("pieces", []), "pieces")):
        at = f"pieces[{k}]"
        if not isinstance(pc, dict):
            raise FormatError(at, "expected an object")
        missing = {"box", "perm", "shift"} - set(pc)
        if missing:
            raise FormatError(at, f"missing field(s) {sorted(missing)}")
        if set(pc) - {"box", "perm", "shift"}:
            raise FormatError(at, f"unknown field(s) {sorted(set(pc) - {'box', 'perm', 'shift'})}")
        lo, hi = [], []
        for i, iv in enumerate(_list(pc["box"], f"{at}.box", dim)):
            iv = _list(iv, f"{at}.box[{i}]", 2)
            lo.append(_int(iv[0], f"{at}.box[{i}][0]", 1))
            hi.append(UNBOUNDED if iv[1] is None else _int(iv[1], f"{at}.box[{i}][1]", 1))
        perm = [_int(t, f"{at}.perm[{i}]", 1) - 1
                for i, t in enumerate(_list(pc["perm"], f"{at}.perm", dim))]
        if sorted(perm) != list(range(dim)):
            raise FormatError(f"{at}.perm", f"not a permutation of 1..{dim}")
        shift = [_int(s, f"{at}.shift[{i}]")
                 for i, s in enumerate(_list(pc["shift"], f"{at}.shift", dim))]
        pieces.append((Box(tuple(lo), tuple(hi)), Rule(tuple(perm), tuple(shift))))
    holes = [_point(h, f"holes[{k}]", dim) for k, h in enumerate(_list(doc.get("holes", []), "holes"))]
    patch = {}
    for k, e in enumerate(_list(doc.get("patch", []), "patch")):
        e = _list(e, f"patch[{k}]", 2)
        p = _point(e[0], f"patch[{k}][0]", dim)
        if p in patch:
            raise FormatError(f"patch[{k}]", f"duplicate source point {p}")
        patch[p] = _point(e[1], f"patch[{k}][1]", dim)
    try:
        return from_parts(dim, pieces, holes, patch)
    except RepresentationError as exc:
        raise FormatError(exc.invariant, str(exc)) from exc


def loads(text: str) -> PiecewiseMap:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}", f"column {exc.colno}: {exc.msg}") from exc
    return from_document(doc)


def load(path: str) -> PiecewiseMap:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc.where}", str(exc).split(": ", 1)[-1]) from exc


def dump(alpha: PiecewiseMap, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(alpha))
