"""JSON and DOT serialisation for systems, modules, W-graphs and tables.

All writers emit deterministic bytes (sorted keys, two-space indent, one
trailing newline), so identical inputs produce identical files.  Schema
errors raise :class:`SchemaError` with the JSON path of the offending
value; syntax errors keep the line/column information of the decoder.

Conventions, shared with the CLI:

* generators are 1-based in files ("J": [1, 2], "s": 1, ...);
* an infinite bond order is encoded as 0;
* group elements are words of 1-based generator digits ("121"), the
  identity is "e"; ranks above 9 switch to dash-separated form;
* a Laurent polynomial is a {exponent: coefficient} object with string
  exponents, e.g. {"-1": 1, "0": -2, "3": 1}; a standalone polynomial
  file wraps it as {"coeffs": {...}}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .cells import CellPartition
from .coxeter import CoxeterSystem, Element
from .laurent import LaurentPoly
from .matrix import IMat, LMat, imat
from .wgraph import OmegaModule, WGraph


class SchemaError(ValueError):
    """The JSON document does not match the expected schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaError(path, message)


def _as_int(value, path: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer")
    return value


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def save_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


# -- elements ------------------------------------------------------------------


def element_to_str(x: Element) -> str:
    return str(x)


def element_from_str(system: CoxeterSystem, text: str, path: str = "element") -> Element:
    if text == "e":
        return system.identity
    parts = text.split("-") if "-" in text else list(text)
    word = []
    for token in parts:
        _expect(token.isdigit() and int(token) >= 1, path, f"bad generator token {token!r}")
        index = int(token) - 1
        _expect(index < system.rank, path, f"generator {token} exceeds the rank")
        word.append(index)
    return system.element(tuple(word))


def gens_to_json(gens: FrozenSet[int]) -> List[int]:
    return [s + 1 for s in sorted(gens)]


def gens_from_json(system: CoxeterSystem, data, path: str) -> FrozenSet[int]:
    _expect(isinstance(data, list), path, "expected a list of 1-based generators")
    out = set()
    for i, raw in enumerate(data):
        value = _as_int(raw, f"{path}[{i}]")
        _expect(1 <= value <= system.rank, f"{path}[{i}]", "generator out of range")
        out.add(value - 1)
    return frozenset(out)


# -- Coxeter systems --------------------------------------------------------------


def system_to_json(system: CoxeterSystem) -> dict:
    return {
        "rank": system.rank,
        "matrix": [list(row) for row in system.matrix],
        "weights": list(system.weights),
    }


def system_from_json(data, path: str = "system") -> CoxeterSystem:
    _expect(isinstance(data, dict), path, "expected an object")
    rank = _as_int(data.get("rank"), f"{path}.rank")
    matrix = data.get("matrix")
    _expect(isinstance(matrix, list) and len(matrix) == rank, f"{path}.matrix",
            f"expected {rank} rows")
    rows = []
    for i, row in enumerate(matrix):
        _expect(isinstance(row, list) and len(row) == rank, f"{path}.matrix[{i}]",
                f"expected {rank} entries")
        rows.append(tuple(_as_int(x, f"{path}.matrix[{i}][{j}]") for j, x in enumerate(row)))
    weights = data.get("weights")
    if weights is None:
        weights = [1] * rank
    _expect(isinstance(weights, list) and len(weights) == rank, f"{path}.weights",
            f"expected {rank} weights")
    weights = tuple(_as_int(w, f"{path}.weights[{i}]") for i, w in enumerate(weights))
    return CoxeterSystem(rows, weights)


def load_system(path: str) -> CoxeterSystem:
    return system_from_json(load_json(path), path)


def save_system(path: str, system: CoxeterSystem) -> None:
    save_text(path, dumps(system_to_json(system)))


# -- Laurent polynomials -----------------------------------------------------------


def poly_to_json(poly: LaurentPoly) -> Dict[str, int]:
    return {str(g): c for g, c in poly.items()}


def poly_from_json(data, path: str) -> LaurentPoly:
    _expect(isinstance(data, dict), path, "expected an {exponent: coefficient} object")
    coeffs = {}
    for key, value in data.items():
        try:
            exponent = int(key)
        except ValueError:
            raise SchemaError(f"{path}.{key}", "exponent keys must be integers") from None
        coeffs[exponent] = _as_int(value, f"{path}.{key}")
    return LaurentPoly(coeffs)


def save_poly(path: str, poly: LaurentPoly) -> None:
    save_text(path, dumps({"coeffs": poly_to_json(poly)}))


def load_poly(path: str) -> LaurentPoly:
    data = load_json(path)
    _expect(isinstance(data, dict) and "coeffs" in data, path, "expected {\"coeffs\": {...}}")
    return poly_from_json(data["coeffs"], f"{path}.coeffs")


def lmat_to_json(mat: LMat) -> list:
    return [[poly_to_json(entry) for entry in row] for row in mat.rows]


def lmat_from_json(data, path: str) -> LMat:
    _expect(isinstance(data, list) and data, path, "expected a nonempty matrix")
    rows = []
    for i, row in enumerate(data):
        _expect(isinstance(row, list), f"{path}[{i}]", "expected a row")
        rows.append([poly_from_json(cell, f"{path}[{i}][{j}]") for j, cell in enumerate(row)])
    return LMat(rows)


def imat_to_json(mat: IMat) -> list:
    return [list(row) for row in mat]


def imat_from_json(data, path: str) -> IMat:
    _expect(isinstance(data, list) and data, path, "expected a nonempty matrix")
    rows = []
    for i, row in enumerate(data):
        _expect(isinstance(row, list), f"{path}[{i}]", "expected a row")
        rows.append(tuple(_as_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)))
    return imat(rows)


# -- modules -------------------------------------------------------------------------


def module_to_json(module: OmegaModule) -> dict:
    e_part = {str(s + 1): imat_to_json(module.e_mat(s)) for s in sorted(module.gens)}
    x_part: Dict[str, Dict[str, list]] = {}
    for (s, g), mat in sorted(module.x.items()):
        x_part.setdefault(str(s + 1), {})[str(g)] = imat_to_json(mat)
    return {
        "J": gens_to_json(module.gens),
        "rank": module.rank,
        "E": e_part,
        "X": x_part,
    }


def module_from_json(system: CoxeterSystem, data, path: str = "module") -> OmegaModule:
    _expect(isinstance(data, dict), path, "expected an object")
    gens = gens_from_json(system, data.get("J", []), f"{path}.J")
    rank = _as_int(data.get("rank"), f"{path}.rank")
    e_data = data.get("E", {})
    _expect(isinstance(e_data, dict), f"{path}.E", "expected an object")
    e = {}
    for key, mat in e_data.items():
        s = _gen_key(system, key, f"{path}.E.{key}")
        e[s] = imat_from_json(mat, f"{path}.E.{key}")
    x_data = data.get("X", {})
    _expect(isinstance(x_data, dict), f"{path}.X", "expected an object")
    x = {}
    for key, gammas in x_data.items():
        s = _gen_key(system, key, f"{path}.X.{key}")
        _expect(isinstance(gammas, dict), f"{path}.X.{key}", "expected an object")
        for gkey, mat in gammas.items():
            try:
                gamma = int(gkey)
            except ValueError:
                raise SchemaError(f"{path}.X.{key}.{gkey}", "exponent keys must be integers") from None
            x[(s, gamma)] = imat_from_json(mat, f"{path}.X.{key}.{gkey}")
    return OmegaModule(system, gens, rank, e, x)


def _gen_key(system: CoxeterSystem, key: str, path: str) -> int:
    try:
        value = int(key)
    except ValueError:
        raise SchemaError(path, "generator keys must be 1-based integers") from None
    _expect(1 <= value <= system.rank, path, "generator out of range")
    return value - 1


# -- W-graphs ---------------------------------------------------------------------------


def wgraph_to_json(graph: WGraph) -> dict:
    edges = []
    for s in sorted(graph.edges):
        for (i, j) in sorted(graph.edges[s]):
            weights = graph.edges[s][(i, j)]
            edges.append(
                {
                    "s": s + 1,
                    "from": graph.vertices[j],
                    "to": graph.vertices[i],
                    "weights": {str(g): c for g, c in sorted(weights.items())},
                }
            )
    return {
        "J": gens_to_json(graph.gens),
        "vertices": list(graph.vertices),
        "labels": [gens_to_json(lab) for lab in graph.labels],
        "edges": edges,
    }


def wgraph_from_json(system: CoxeterSystem, data, path: str = "wgraph") -> WGraph:
    _expect(isinstance(data, dict), path, "expected an object")
    gens = gens_from_json(system, data.get("J", []), f"{path}.J")
    vertices = data.get("vertices")
    _expect(isinstance(vertices, list) and vertices, f"{path}.vertices",
            "expected a nonempty list")
    names = [str(v) for v in vertices]
    position = {name: i for i, name in enumerate(names)}
    labels_raw = data.get("labels")
    _expect(isinstance(labels_raw, list) and len(labels_raw) == len(names),
            f"{path}.labels", "expected one label list per vertex")
    labels = [gens_from_json(system, lab, f"{path}.labels[{i}]")
              for i, lab in enumerate(labels_raw)]
    edges: Dict[int, Dict[Tuple[int, int], Dict[int, int]]] = {}
    raw_edges = data.get("edges", [])
    _expect(isinstance(raw_edges, list), f"{path}.edges", "expected a list")
    for k, edge in enumerate(raw_edges):
        epath = f"{path}.edges[{k}]"
        _expect(isinstance(edge, dict), epath, "expected an object")
        s = _as_int(edge.get("s"), f"{epath}.s") - 1
        _expect(0 <= s < system.rank, f"{epath}.s", "generator out of range")
        src = edge.get("from")
        dst = edge.get("to")
        _expect(src in position, f"{epath}.from", f"unknown vertex {src!r}")
        _expect(dst in position, f"{epath}.to", f"unknown vertex {dst!r}")
        weights_raw = edge.get("weights")
        _expect(isinstance(weights_raw, dict) and weights_raw, f"{epath}.weights",
                "expected a nonempty object")
        weights = {}
        for gkey, c in weights_raw.items():
            try:
                gamma = int(gkey)
            except ValueError:
                raise SchemaError(f"{epath}.weights.{gkey}",
                                  "exponent keys must be integers") from None
            weights[gamma] = _as_int(c, f"{epath}.weights.{gkey}")
        edges.setdefault(s, {})[(position[dst], position[src])] = weights
    return WGraph(system, gens, names, labels, edges)


# -- p/mu tables ---------------------------------------------------------------------------


@dataclass
class TableData:
    """A deserialised table: plain keys, exact values."""

    gens: FrozenSet[int]
    p: Dict[str, LMat]
    mu: Dict[str, Dict[int, IMat]]


def table_to_json(table) -> dict:
    """Accepts a PMuTable or a TableData."""
    if isinstance(table, TableData):
        p_part = {key: lmat_to_json(mat) for key, mat in table.p.items()}
        mu_part = {
            key: {str(g): imat_to_json(mat) for g, mat in gammas.items()}
            for key, gammas in table.mu.items()
        }
        return {"J": gens_to_json(table.gens), "p": p_part, "mu": mu_part}
    p_part = {
        f"{x}|{z}": lmat_to_json(mat) for (x, z), mat in table.p.items()
    }
    mu_part = {}
    for (x, z, s), mat in table.mu.items():
        entry = {}
        for g in range(table.system.weight(s)):
            coeffs = mat.coeff(g)
            if any(any(row) for row in coeffs):
                entry[str(g)] = imat_to_json(coeffs)
        mu_part[f"{x}|{z}|{s + 1}"] = entry
    return {"J": gens_to_json(table.gens), "p": p_part, "mu": mu_part}


def mu_to_json(system: CoxeterSystem, gens: FrozenSet[int], mu: Mapping) -> dict:
    """Serialise a bare mu-family keyed by (x, z, s)."""
    mu_part = {}
    for (x, z, s), mat in mu.items():
        entry = {}
        for g in range(system.weight(s)):
            coeffs = mat.coeff(g)
            if any(any(row) for row in coeffs):
                entry[str(g)] = imat_to_json(coeffs)
        mu_part[f"{x}|{z}|{s + 1}"] = entry
    return {"J": gens_to_json(gens), "mu": mu_part}


def block_table_to_json(entries: Mapping) -> dict:
    """Serialise any (x, z) -> Laurent-matrix family (rho/pi tables)."""
    return {f"{x}|{z}": lmat_to_json(mat) for (x, z), mat in entries.items()}


def block_table_from_json(system: CoxeterSystem, data, path: str = "blocks") -> dict:
    _expect(isinstance(data, dict), path, "expected an object")
    out = {}
    for key, mat in data.items():
        _expect(key.count("|") == 1, f"{path}.{key}", "keys must look like 'x|z'")
        xs, zs = key.split("|")
        x = element_from_str(system, xs, f"{path}.{key}")
        z = element_from_str(system, zs, f"{path}.{key}")
        out[(x, z)] = lmat_from_json(mat, f"{path}.{key}")
    return out


def table_from_json(system: CoxeterSystem, data, path: str = "table") -> TableData:
    _expect(isinstance(data, dict), path, "expected an object")
    gens = gens_from_json(system, data.get("J", []), f"{path}.J")
    p_raw = data.get("p", {})
    _expect(isinstance(p_raw, dict), f"{path}.p", "expected an object")
    p = {}
    for key, mat in p_raw.items():
        _expect(key.count("|") == 1, f"{path}.p.{key}", "keys must look like 'x|z'")
        p[key] = lmat_from_json(mat, f"{path}.p.{key}")
    mu_raw = data.get("mu", {})
    _expect(isinstance(mu_raw, dict), f"{path}.mu", "expected an object")
    mu: Dict[str, Dict[int, IMat]] = {}
    for key, gammas in mu_raw.items():
        _expect(key.count("|") == 2, f"{path}.mu.{key}", "keys must look like 'x|z|s'")
        _expect(isinstance(gammas, dict), f"{path}.mu.{key}", "expected an object")
        entry = {}
        for gkey, mat in gammas.items():
            try:
                gamma = int(gkey)
            except ValueError:
                raise SchemaError(f"{path}.mu.{key}.{gkey}",
                                  "exponent keys must be integers") from None
            entry[gamma] = imat_from_json(mat, f"{path}.mu.{key}.{gkey}")
        mu[key] = entry
    return TableData(gens, p, mu)


# -- cells ------------------------------------------------------------------------------------


def cells_to_json(partition: CellPartition, names: List[str]) -> dict:
    return {
        "cells": [sorted(names[i] for i in block) for block in partition.blocks],
        "order": sorted([list(pair) for pair in partition.order]),
    }


# -- DOT export ---------------------------------------------------------------------------------


def wgraph_to_dot(graph: WGraph) -> str:
    lines = ["digraph wgraph {"]
    for i, name in enumerate(graph.vertices):
        label_set = ",".join(str(s + 1) for s in sorted(graph.labels[i]))
        lines.append(f'  "{name}" [label="{name}\\n{{{label_set}}}"];')
    for s in sorted(graph.edges):
        for (i, j) in sorted(graph.edges[s]):
            weights = graph.edges[s][(i, j)]
            text = ",".join(f"{g}:{c}" for g, c in sorted(weights.items()))
            lines.append(
                f'  "{graph.vertices[j]}" -> "{graph.vertices[i]}" [label="s{s + 1} {text}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cells_to_dot(partition: CellPartition, names: List[str], graph: Optional[WGraph] = None) -> str:
    lines = ["digraph cells {", "  compound=true;"]
    for b, block in enumerate(partition.blocks):
        lines.append(f"  subgraph cluster_{b} {{")
        lines.append(f'    label="cell {b}";')
        for i in sorted(block):
            lines.append(f'    "{names[i]}";')
        lines.append("  }")
    if graph is not None:
        for s in sorted(graph.edges):
            for (i, j) in sorted(graph.edges[s]):
                lines.append(f'  "{names[j]}" -> "{names[i]}" [label="s{s + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
