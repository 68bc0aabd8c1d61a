"""W-graphs and their basis-free form: finite-rank matrix modules.

An :class:`OmegaModule` over the generator subset J stores, for each s in
J, an idempotent k-matrix ``E_s`` and edge-weight k-matrices ``X_{s,g}``
for the exponents 0 <= g < L(s) (the weight-(-g) matrix equals the
weight-g one and is not stored separately).  The defining relations are

* ``E_s^2 = E_s``, ``E_s E_t = E_t E_s``,
* ``E_s X_{s,g} = X_{s,g}``, ``X_{s,g} E_s = 0``,

and the braid relations for the Laurent matrices

    T(s) = -v_s^-1 E_s + v_s (1 - E_s) + sum_g v^g X_{s,g},

where v_s = v^L(s).  :func:`validate` checks all of this by exact matrix
arithmetic.  A :class:`WGraph` is the same data with all ``E_s`` diagonal
0/1 matrices, presented as a vertex-labelled edge-weighted graph.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .coxeter import CoxeterSystem, Element
from .laurent import LaurentPoly
from .matrix import IMat, LMat, imat, imat_is_zero, imat_mul, imat_zero
from .report import Report


class OmegaModule:
    """A finite-rank matrix module for the W-graph algebra of (W_J, L).

    Immutable after construction.  ``e`` maps s -> k-matrix; ``x`` maps
    (s, g) with g >= 0 -> k-matrix (zero matrices may be omitted).
    """

    __slots__ = ("system", "gens", "rank", "e", "x", "_cache")

    def __init__(
        self,
        system: CoxeterSystem,
        gens: Iterable[int],
        rank: int,
        e: Mapping[int, IMat],
        x: Mapping[Tuple[int, int], IMat],
    ):
        self.system = system
        self.gens: FrozenSet[int] = system._subset(gens)
        self.rank = int(rank)
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        e_data: Dict[int, IMat] = {}
        for s, mat in e.items():
            if s not in self.gens:
                raise ValueError(f"idempotent for generator {s+1} outside J")
            e_data[s] = self._checked(imat(mat))
        self.e = e_data
        x_data: Dict[Tuple[int, int], IMat] = {}
        for (s, g), mat in x.items():
            if s not in self.gens:
                raise ValueError(f"edge matrix for generator {s+1} outside J")
            g = abs(int(g))
            if g >= system.weight(s):
                raise ValueError(
                    f"edge exponent {g} out of range for generator {s+1} (weight {system.weight(s)})"
                )
            mat = self._checked(imat(mat))
            previous = x_data.get((s, g))
            if previous is not None and previous != mat:
                raise ValueError(f"conflicting matrices for X_({s+1},{g}) and X_({s+1},{-g})")
            if not imat_is_zero(mat):
                x_data[(s, g)] = mat
        self.x = x_data
        self._cache: dict = {}

    def _checked(self, mat: IMat) -> IMat:
        if len(mat) != self.rank or any(len(row) != self.rank for row in mat):
            raise ValueError(f"matrix is not {self.rank}x{self.rank}")
        return mat

    # -- data access ------------------------------------------------------

    def e_mat(self, s: int) -> IMat:
        if s not in self.gens:
            raise ValueError(f"generator {s+1} not in J")
        return self.e.get(s, imat_zero(self.rank))

    def x_mat(self, s: int, gamma: int) -> IMat:
        if s not in self.gens:
            raise ValueError(f"generator {s+1} not in J")
        return self.x.get((s, abs(gamma)), imat_zero(self.rank))

    def x_poly_mat(self, s: int) -> LMat:
        """The Laurent matrix sum_g v^g X_{s,g} over -L(s) < g < L(s)."""
        rows = [[LaurentPoly.zero()] * self.rank for _ in range(self.rank)]
        for g in range(self.system.weight(s)):
            mat = self.x.get((s, g))
            if mat is None:
                continue
            for i in range(self.rank):
                for j in range(self.rank):
                    c = mat[i][j]
                    if c:
                        term = LaurentPoly({g: c} if g == 0 else {g: c, -g: c})
                        rows[i][j] = rows[i][j] + term
        return LMat(rows)

    def iota_t(self, s: int) -> LMat:
        """The Laurent matrix of the Hecke generator T_s acting on the module."""
        cached = self._cache.get(("iota_t", s))
        if cached is not None:
            return cached
        ls = self.system.weight(s)
        e_mat = LMat.from_imat(self.e_mat(s))
        one = LMat.identity(self.rank)
        result = (
            e_mat.scale(LaurentPoly.v(-ls, -1))
            + (one - e_mat).scale(LaurentPoly.v(ls))
            + self.x_poly_mat(s)
        )
        self._cache[("iota_t", s)] = result
        return result

    def hecke_matrix(self, w: Element) -> LMat:
        """The action of T_w, for w in the parabolic subgroup W_J."""
        self.system._check_same(w.system)
        if not set(w.word) <= self.gens:
            raise ValueError(f"{w} is not in the parabolic subgroup for J={sorted(self.gens)}")
        cached = self._cache.get(("hecke", w.word))
        if cached is not None:
            return cached
        result = LMat.identity(self.rank)
        for s in w.word:
            result = result @ self.iota_t(s)
        self._cache[("hecke", w.word)] = result
        return result

    # -- structure ---------------------------------------------------------

    def has_diagonal_idempotents(self) -> bool:
        for s in self.gens:
            mat = self.e_mat(s)
            for i in range(self.rank):
                for j in range(self.rank):
                    if i == j:
                        if mat[i][j] not in (0, 1):
                            return False
                    elif mat[i][j] != 0:
                        return False
        return True

    def vertex_label(self, i: int) -> FrozenSet[int]:
        return frozenset(s for s in self.gens if self.e_mat(s)[i][i] == 1)

    def conjugate(self, d: Element, K: Iterable[int]) -> "OmegaModule":
        """The module over the subset K n dJd^-1, with s acting as d^-1 s d did.

        ``d`` must conjugate each relevant generator of K into J.
        """
        K = self.system._subset(K)
        new_gens = []
        relabel = {}
        for s in K:
            t = self.system.conjugate_generator(s, d)
            if t is not None and t in self.gens:
                new_gens.append(s)
                relabel[s] = t
        e = {}
        x = {}
        for s in new_gens:
            t = relabel[s]
            if self.system.weight(s) != self.system.weight(t):
                raise ValueError("conjugate generators carry different weights")
            e[s] = self.e_mat(t)
            for g in range(self.system.weight(t)):
                mat = self.x.get((t, g))
                if mat is not None:
                    x[(s, g)] = mat
        return OmegaModule(self.system, new_gens, self.rank, e, x)

    def restrict(self, J: Iterable[int]) -> "OmegaModule":
        """Forget the generators outside J; the result is a module for J."""
        J = self.system._subset(J)
        if not J <= self.gens:
            raise ValueError("can only restrict to a subset of the module's generators")
        e = {s: mat for s, mat in self.e.items() if s in J}
        x = {(s, g): mat for (s, g), mat in self.x.items() if s in J}
        return OmegaModule(self.system, J, self.rank, e, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OmegaModule):
            return NotImplemented
        return (
            self.system == other.system
            and self.gens == other.gens
            and self.rank == other.rank
            and {s: self.e_mat(s) for s in self.gens} == {s: other.e_mat(s) for s in other.gens}
            and self.x == other.x
        )

    def __repr__(self) -> str:
        return f"OmegaModule(J={sorted(s + 1 for s in self.gens)}, rank={self.rank})"


class WGraph:
    """A vertex-labelled, edge-weighted graph presentation of a module.

    ``edges[s][(i, j)]`` is the map gamma -> weight of the s-edge from
    vertex j into vertex i (i.e. vertex i occurs in the expansion of the
    edge operator applied to vertex j).
    """

    __slots__ = ("system", "gens", "vertices", "labels", "edges")

    def __init__(
        self,
        system: CoxeterSystem,
        gens: Iterable[int],
        vertices: Iterable[str],
        labels: Iterable[Iterable[int]],
        edges: Mapping[int, Mapping[Tuple[int, int], Mapping[int, int]]],
    ):
        self.system = system
        self.gens = system._subset(gens)
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be distinct")
        self.labels = tuple(system._subset(lab) for lab in labels)
        if len(self.labels) != len(self.vertices):
            raise ValueError("one label set per vertex required")
        for lab in self.labels:
            if not lab <= self.gens:
                raise ValueError("vertex labels must be subsets of J")
        edge_data: Dict[int, Dict[Tuple[int, int], Dict[int, int]]] = {}
        n = len(self.vertices)
        for s, mat in edges.items():
            if s not in self.gens:
                raise ValueError(f"edge family for generator {s+1} outside J")
            clean: Dict[Tuple[int, int], Dict[int, int]] = {}
            for (i, j), weights in mat.items():
                if not (0 <= i < n and 0 <= j < n):
                    raise ValueError("edge endpoint out of range")
                w = {int(g): c for g, c in weights.items() if c != 0}
                for g in w:
                    if abs(g) >= system.weight(s):
                        raise ValueError("edge weight exponent out of range")
                if w:
                    clean[(i, j)] = w
            if clean:
                edge_data[s] = clean
        self.edges = edge_data

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def support_condition_report(self) -> Report:
        """Edges must go from a vertex without s in its label into one with it."""
        report = Report("wgraph support condition")
        for s, mat in self.edges.items():
            for (i, j), _ in mat.items():
                report.require(
                    s in self.labels[i] and s not in self.labels[j],
                    f"edge {self.vertices[j]} -> {self.vertices[i]} for s={s+1} "
                    f"violates the label condition",
                )
        return report

    def __eq__(self, other) -> bool:
        if not isinstance(other, WGraph):
            return NotImplemented
        return (
            self.system == other.system
            and self.gens == other.gens
            and self.vertices == other.vertices
            and self.labels == other.labels
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        n_edges = sum(len(mat) for mat in self.edges.values())
        return f"WGraph({self.rank} vertices, {n_edges} edges)"


# -- conversions ------------------------------------------------------------


def to_module(graph: WGraph) -> OmegaModule:
    """The matrix module defined by a W-graph (idempotents become diagonal)."""
    n = graph.rank
    e = {}
    for s in graph.gens:
        e[s] = tuple(
            tuple(1 if (i == j and s in graph.labels[i]) else 0 for j in range(n))
            for i in range(n)
        )
    x: Dict[Tuple[int, int], list] = {}
    for s, mat in graph.edges.items():
        for (i, j), weights in mat.items():
            for g, c in weights.items():
                key = (s, abs(g))
                if key not in x:
                    x[key] = [[0] * n for _ in range(n)]
                if x[key][i][j] == 0:
                    x[key][i][j] = c
                elif x[key][i][j] != c:
                    raise ValueError("conflicting weights for +g and -g on the same edge")
    return OmegaModule(graph.system, graph.gens, n, e, {k: imat(m) for k, m in x.items()})


def to_wgraph(module: OmegaModule, vertices: Optional[Iterable[str]] = None) -> WGraph:
    """Present a module with diagonal idempotents as a W-graph."""
    if not module.has_diagonal_idempotents():
        raise ValueError("module idempotents are not diagonal 0/1 matrices")
    n = module.rank
    names = tuple(str(v) for v in vertices) if vertices is not None else tuple(
        str(i) for i in range(n)
    )
    if len(names) != n:
        raise ValueError("need one vertex name per basis element")
    labels = [module.vertex_label(i) for i in range(n)]
    edges: Dict[int, Dict[Tuple[int, int], Dict[int, int]]] = {}
    for (s, g), mat in module.x.items():
        out = edges.setdefault(s, {})
        for i in range(n):
            for j in range(n):
                if mat[i][j]:
                    out.setdefault((i, j), {})[g] = mat[i][j]
    return WGraph(module.system, module.gens, names, labels, edges)


# -- builtin rank-1 modules ---------------------------------------------------


def sign_module(system: CoxeterSystem, gens: Iterable[int]) -> OmegaModule:
    """Rank 1, every idempotent acts as 1; T_s acts as -v_s^-1."""
    gens = system._subset(gens)
    return OmegaModule(system, gens, 1, {s: ((1,),) for s in gens}, {})


def trivial_module(system: CoxeterSystem, gens: Iterable[int]) -> OmegaModule:
    """Rank 1, every idempotent acts as 0; T_s acts as v_s."""
    gens = system._subset(gens)
    return OmegaModule(system, gens, 1, {s: ((0,),) for s in gens}, {})


# -- validation ---------------------------------------------------------------


def validate(module: OmegaModule) -> Report:
    """Check all defining relations of the module by exact arithmetic."""
    report = Report(f"module relations (J={sorted(s + 1 for s in module.gens)})")
    gens = sorted(module.gens)
    for s in gens:
        e_s = module.e_mat(s)
        report.require(imat_mul(e_s, e_s) == e_s, f"E_{s+1}^2 != E_{s+1}")
        for g in range(module.system.weight(s)):
            x_sg = module.x.get((s, g))
            if x_sg is None:
                continue
            report.require(
                imat_mul(e_s, x_sg) == x_sg, f"E_{s+1} X_({s+1},{g}) != X_({s+1},{g})"
            )
            report.require(
                imat_is_zero(imat_mul(x_sg, e_s)), f"X_({s+1},{g}) E_{s+1} != 0"
            )
    for i, s in enumerate(gens):
        for t in gens[i + 1:]:
            e_s, e_t = module.e_mat(s), module.e_mat(t)
            report.require(
                imat_mul(e_s, e_t) == imat_mul(e_t, e_s), f"E_{s+1} E_{t+1} != E_{t+1} E_{s+1}"
            )
            m = module.system.order(s, t)
            if m == 0:
                continue  # infinite bond: no braid relation
            left = LMat.identity(module.rank)
            right = LMat.identity(module.rank)
            for j in range(m):
                left = left @ module.iota_t(s if j % 2 == 0 else t)
                right = right @ module.iota_t(t if j % 2 == 0 else s)
            report.require(
                left == right, f"braid relation of length {m} fails for ({s+1},{t+1})"
            )
    return report


def restrict_check(module: OmegaModule, J: Iterable[int]) -> OmegaModule:
    """Restrict to the generators in J and re-validate the sub-data."""
    restricted = module.restrict(J)
    report = validate(restricted)
    if not report.ok:
        raise ValueError(f"restriction is not a valid module:\n{report}")
    return restricted


def conjugate_module(d: Element, module: OmegaModule, K: Iterable[int]) -> OmegaModule:
    """Relabel the action along conjugation by a double-coset representative."""
    return module.conjugate(d, K)
