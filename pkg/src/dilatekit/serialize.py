"""JSON wire formats for rationals, matrices, sequence elements, operators.

Rationals serialize as bare integers when the denominator is 1 and as
"p/q" strings otherwise; matrices as row-major arrays of arrays; finitely
supported families as {"domain", "dim", "support"} objects with sorted
support. Parsing is strict: floats are rejected, a zero denominator raises
DenominatorZero, and every ParseError carries the JSON path of the bad
node.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, IO, Union

from .finsupp import Domain, FsVec
from .matrix import Mat, Vec

_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


class ParseError(ValueError):
    """Malformed input; `where` is the JSON path of the offending node."""

    def __init__(self, message: str, where: str = "$"):
        super().__init__(f"{where}: {message}")
        self.where = where


class DenominatorZero(ParseError):
    def __init__(self, where: str = "$"):
        super().__init__("denominator is zero", where)


# ----------------------------------------------------------------------
# rationals


def rat_to_json(q: Fraction) -> Union[int, str]:
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def rat_from_json(value: Any, where: str = "$") -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got {value!r}", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ParseError(f"malformed rational string {value!r}", where)
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise DenominatorZero(where)
        return Fraction(num, den)
    if isinstance(value, float):
        raise ParseError("floats are not accepted; use \"p/q\" strings", where)
    raise ParseError(f"expected a rational, got {type(value).__name__}", where)


# ----------------------------------------------------------------------
# vectors and matrices


def vec_to_json(v: Vec) -> list:
    return [rat_to_json(x) for x in v]


def vec_from_json(value: Any, where: str = "$") -> Vec:
    if not isinstance(value, list):
        raise ParseError(f"expected an array, got {type(value).__name__}", where)
    return tuple(rat_from_json(x, f"{where}[{i}]") for i, x in enumerate(value))


def mat_to_json(m: Mat) -> list[list]:
    return [[rat_to_json(x) for x in row] for row in m.entries]


def mat_from_json(value: Any, where: str = "$") -> Mat:
    if not isinstance(value, list) or not value:
        raise ParseError("expected a nonempty array of rows", where)
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise ParseError("expected a nonempty row array", f"{where}[{i}]")
        rows.append([rat_from_json(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("ragged rows", where)
    return Mat(rows)


# ----------------------------------------------------------------------
# finitely supported families

_DOMAIN_TAGS = {d.value: d for d in Domain}


def fsvec_to_json(x: FsVec) -> dict:
    return {
        "domain": x.domain.value,
        "dim": x.dim,
        "support": [
            {"index": list(k) if isinstance(k, tuple) else k, "value": vec_to_json(v)}
            for k, v in x.items()
        ],
    }


def fsvec_from_json(value: Any, where: str = "$") -> FsVec:
    if not isinstance(value, dict):
        raise ParseError(f"expected an object, got {type(value).__name__}", where)
    tag = value.get("domain")
    if tag not in _DOMAIN_TAGS:
        raise ParseError(f"unknown domain {tag!r}", f"{where}.domain")
    domain = _DOMAIN_TAGS[tag]
    dim = value.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"bad dimension {dim!r}", f"{where}.dim")
    raw_support = value.get("support", [])
    if not isinstance(raw_support, list):
        raise ParseError("support must be an array", f"{where}.support")
    items = []
    for i, entry in enumerate(raw_support):
        loc = f"{where}.support[{i}]"
        if not isinstance(entry, dict) or "index" not in entry or "value" not in entry:
            raise ParseError("support entries need index and value", loc)
        raw_index = entry["index"]
        if isinstance(raw_index, list):
            if len(raw_index) != 2 or not all(
                isinstance(k, int) and not isinstance(k, bool) for k in raw_index
            ):
                raise ParseError(f"bad grid index {raw_index!r}", f"{loc}.index")
            index = (raw_index[0], raw_index[1])
        elif isinstance(raw_index, int) and not isinstance(raw_index, bool):
            index = raw_index
        else:
            raise ParseError(f"bad index {raw_index!r}", f"{loc}.index")
        items.append((index, vec_from_json(entry["value"], f"{loc}.value")))
    try:
        return FsVec(domain, dim, items)
    except ValueError as exc:
        raise ParseError(str(exc), f"{where}.support") from exc


# ----------------------------------------------------------------------
# operator descriptors (definitions live in seqops; imported lazily to
# keep serialize importable from seqops without a cycle)


def seqop_to_json(op) -> dict:
    from . import seqops as so

    if isinstance(op, so.EmbedI):
        return {"kind": "embed", "dim": op.dim, "domain": op.domain.value}
    if isinstance(op, so.CoordProj0):
        return {"kind": "coord_proj0", "dim": op.dim, "domain": op.domain.value}
    if isinstance(op, so.ShiftRight):
        return {"kind": "shift_right", "dim": op.dim}
    if isinstance(op, so.ShiftBilat):
        return {"kind": "shift_bilat", "dim": op.dim}
    if isinstance(op, so.GridDown):
        return {"kind": "grid_down", "dim": op.dim}
    if isinstance(op, so.GridRight):
        return {"kind": "grid_right", "dim": op.dim}
    if isinstance(op, so.SchafferU):
        return {"kind": "schaffer_u", "T": mat_to_json(op.T)}
    if isinstance(op, so.SchafferVInv):
        return {"kind": "schaffer_v_inv", "T": mat_to_json(op.T)}
    if isinstance(op, so.ProjStd):
        return {"kind": "proj_std", "T": mat_to_json(op.T)}
    if isinstance(op, so.ProjAndo):
        return {"kind": "proj_ando", "T": mat_to_json(op.T), "S": mat_to_json(op.S)}
    if isinstance(op, so.BlockDense):
        return {"kind": "block_dense", "dim": op.dim, "matrix": mat_to_json(op.matrix)}
    if isinstance(op, so.Componentwise):
        return {"kind": "componentwise", "S": mat_to_json(op.S)}
    if isinstance(op, so.ColumnBlocks):
        return {
            "kind": "column_blocks",
            "dim_in": op.dim_in,
            "dim_out": op.dim_out,
            "blocks": [
                {"row": r, "col": c, "block": mat_to_json(b)}
                for (r, c), b in sorted(op.blocks.items())
            ],
        }
    if isinstance(op, so.Compose):
        return {"kind": "compose", "factors": [seqop_to_json(f) for f in op.factors]}
    if isinstance(op, so.PowerOp):
        return {"kind": "power", "base": seqop_to_json(op.base), "n": op.n}
    raise TypeError(f"cannot serialize operator {op!r}")


def seqop_from_json(value: Any, where: str = "$"):
    from . import seqops as so

    if not isinstance(value, dict):
        raise ParseError(f"expected an object, got {type(value).__name__}", where)
    kind = value.get("kind")

    def need_dim() -> int:
        d = value.get("dim")
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise ParseError(f"bad dim {d!r}", f"{where}.dim")
        return d

    def need_mat(key: str) -> Mat:
        if key not in value:
            raise ParseError(f"missing {key!r}", where)
        return mat_from_json(value[key], f"{where}.{key}")

    def need_domain() -> Domain:
        tag = value.get("domain", "uninat")
        if tag not in _DOMAIN_TAGS:
            raise ParseError(f"unknown domain {tag!r}", f"{where}.domain")
        return _DOMAIN_TAGS[tag]

    if kind == "embed":
        return so.EmbedI(need_dim(), need_domain())
    if kind == "coord_proj0":
        return so.CoordProj0(need_dim(), need_domain())
    if kind == "shift_right":
        return so.ShiftRight(need_dim())
    if kind == "shift_bilat":
        return so.ShiftBilat(need_dim())
    if kind == "grid_down":
        return so.GridDown(need_dim())
    if kind == "grid_right":
        return so.GridRight(need_dim())
    if kind == "schaffer_u":
        return so.SchafferU(need_mat("T"))
    if kind == "schaffer_v_inv":
        return so.SchafferVInv(need_mat("T"))
    if kind == "proj_std":
        return so.ProjStd(need_mat("T"))
    if kind == "proj_ando":
        return so.ProjAndo(need_mat("T"), need_mat("S"))
    if kind == "block_dense":
        return so.BlockDense(need_mat("matrix"), need_dim())
    if kind == "componentwise":
        return so.Componentwise(need_mat("S"))
    if kind == "column_blocks":
        raw = value.get("blocks")
        if not isinstance(raw, list):
            raise ParseError("blocks must be an array", f"{where}.blocks")
        blocks = {}
        for i, entry in enumerate(raw):
            loc = f"{where}.blocks[{i}]"
            if not isinstance(entry, dict):
                raise ParseError("block entries must be objects", loc)
            r, c = entry.get("row"), entry.get("col")
            for label, k in (("row", r), ("col", c)):
                if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                    raise ParseError(f"bad {label} {k!r}", f"{loc}.{label}")
            blocks[(r, c)] = mat_from_json(entry.get("block"), f"{loc}.block")
        dim_in = value.get("dim_in")
        dim_out = value.get("dim_out")
        for label, d in (("dim_in", dim_in), ("dim_out", dim_out)):
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise ParseError(f"bad {label} {d!r}", f"{where}.{label}")
        try:
            return so.ColumnBlocks(blocks, dim_in=dim_in, dim_out=dim_out)
        except ValueError as exc:
            raise ParseError(str(exc), f"{where}.blocks") from exc
    if kind == "compose":
        raw = value.get("factors")
        if not isinstance(raw, list):
            raise ParseError("factors must be an array", f"{where}.factors")
        return so.Compose(
            tuple(seqop_from_json(f, f"{where}.factors[{i}]") for i, f in enumerate(raw))
        )
    if kind == "power":
        n = value.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ParseError(f"bad power {n!r}", f"{where}.n")
        return so.PowerOp(seqop_from_json(value.get("base"), f"{where}.base"), n)
    raise ParseError(f"unknown operator kind {kind!r}", f"{where}.kind")


# ----------------------------------------------------------------------
# file-level entry points

Source = Union[str, Path, IO[str]]


def _load_json(source: Source) -> Any:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", "$") from exc


def parse_instance_file(source: Source):
    """Parse a JSON instance file into a typed value.

    Arrays of arrays parse as matrices; objects with a "domain" key as
    finitely supported families; objects with a "kind" key as operators.
    """
    doc = _load_json(source)
    if isinstance(doc, list):
        return mat_from_json(doc)
    if isinstance(doc, dict):
        if "domain" in doc and "kind" not in doc:
            return fsvec_from_json(doc)
        if "kind" in doc:
            return seqop_from_json(doc)
    raise ParseError("unrecognized instance shape", "$")


def load_matrix(source: Source) -> Mat:
    value = parse_instance_file(source)
    if not isinstance(value, Mat):
        raise ParseError(f"expected a matrix, got {type(value).__name__}", "$")
    return value
