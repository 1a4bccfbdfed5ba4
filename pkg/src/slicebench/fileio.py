"""On-disk formats: function files (JSON) and graph files (plain text).

Function file keys: "n", "kind" ("slice" | "cube" | "explicit"), "k" for
slices, "members" (bit strings, rank order) for explicit domains,
"alphabet", and "table" (hex of the packed rank-order value bytes; Boolean
tables are bit-packed, low bit of each byte first).  An optional
"construction" object carries provenance and never affects identity: cache
keys hash only the core fields.

Graph file: first line "n <vertices>", then one "u v" edge per line.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import FormatError
from .slicecore import (
    Domain,
    LabeledFunction,
    SliceGraph,
    mask_to_string,
    string_to_mask,
)

_KINDS = ("slice", "cube", "explicit")


def function_to_json_obj(
    f: LabeledFunction, construction: dict | None = None
) -> dict[str, Any]:
    dom = f.domain
    obj: dict[str, Any] = {"n": dom.n, "kind": dom.kind}
    if dom.kind == "slice":
        obj["k"] = dom.k
    elif dom.kind == "explicit":
        obj["members"] = [mask_to_string(x, dom.n) for x in dom.explicit_members]
    obj["alphabet"] = [list(lab) if isinstance(lab, tuple) else lab for lab in f.alphabet]
    obj["table"] = f.packed.hex()
    if construction is not None:
        obj["construction"] = construction
    return obj


def function_from_json_obj(obj: Any) -> LabeledFunction:
    if not isinstance(obj, dict):
        raise FormatError("function file must hold a JSON object")
    try:
        n = obj["n"]
        kind = obj["kind"]
        alphabet = obj["alphabet"]
        table_hex = obj["table"]
    except KeyError as e:
        raise FormatError(f"function file lacks key {e.args[0]!r}") from None
    if kind not in _KINDS:
        raise FormatError(f"unknown domain kind {kind!r}")
    if not isinstance(n, int):
        raise FormatError("n must be an integer")
    if kind == "slice":
        if "k" not in obj:
            raise FormatError("slice function file lacks k")
        dom = Domain.slice(n, obj["k"])
    elif kind == "cube":
        dom = Domain.cube(n)
    else:
        members = obj.get("members")
        if not isinstance(members, list):
            raise FormatError("explicit function file lacks its members list")
        dom = Domain.explicit(n, (string_to_mask(s) for s in members))
    if not isinstance(alphabet, list) or not alphabet:
        raise FormatError("alphabet must be a nonempty list")
    labs = [tuple(lab) if isinstance(lab, list) else lab for lab in alphabet]
    try:
        raw = bytes.fromhex(table_hex)
    except (TypeError, ValueError):
        raise FormatError("table must be a hex string") from None
    indices = _unpack(labs, raw, dom.size)
    return LabeledFunction.from_indices(dom, labs, indices)


def _unpack(alphabet: list, raw: bytes, size: int) -> list[int]:
    if set(alphabet) == {0, 1}:
        want = (size + 7) // 8
        if len(raw) != want:
            raise FormatError(f"table holds {len(raw)} bytes, expected {want}")
        if size % 8 and raw[-1] >> (size % 8):
            raise FormatError("table sets padding bits past the domain size")
        return [raw[r >> 3] >> (r & 7) & 1 for r in range(size)]
    if len(raw) != size:
        raise FormatError(f"table holds {len(raw)} bytes, expected {size}")
    return list(raw)


def write_function(
    f: LabeledFunction, path: str | Path, construction: dict | None = None
) -> None:
    obj = function_to_json_obj(f, construction)
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_function(path: str | Path) -> LabeledFunction:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    return function_from_json_obj(obj)


def canonical_function_bytes(f: LabeledFunction) -> bytes:
    """Identity bytes for caching: core fields only, canonical JSON."""
    obj = function_to_json_obj(f)
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


# -- graphs -----------------------------------------------------------------------


def graph_to_text(g: SliceGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> SliceGraph:
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
                raise FormatError('graph file must start with "n <vertices>"', lineno)
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise FormatError(f"expected an edge line, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"edge endpoints must be integers: {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise FormatError(f"edge {u} {v} invalid on {n} vertices", lineno)
        edges.append((u, v))
    if n is None:
        raise FormatError('graph file must start with "n <vertices>"')
    return SliceGraph.from_edges(n, edges)


def write_graph(g: SliceGraph, path: str | Path) -> None:
    Path(path).write_text(graph_to_text(g))


def read_graph(path: str | Path) -> SliceGraph:
    return graph_from_text(Path(path).read_text())
