"""Howlett-Yin induction of W-graph modules.

Given a module M for the W-graph algebra of a parabolic subgroup W_J, the
induced Hecke module has a canonical basis indexed by minimal coset
representatives; the base-change blocks p_{x,z} and the edge blocks
mu^s_{x,z} are computed here by the direct recursion:

* p_{z,z} = 1 and, picking a left descent t of z,

  - t x > x, tx a coset rep:     p_{x,z} = -v_t p_{tx,z}
  - t x > x, tx = x t' (t' in J): p_{x,z} = C_{t'} p_{x,tz}
                                   - sum_{x<=y<tz} p_{x,y} mu^t_{y,tz}
  - t x < x:                      p_{x,z} = p_{tx,tz} - v_t^-1 p_{x,tz}
                                   - sum_{x<=y<tz} p_{x,y} mu^t_{y,tz}

* mu^s_{x,z} is the bar-symmetric completion of the non-positive part of
  ``-R - sum_{x<y<z} p_{x,y} mu^s_{y,z}`` with R the four-case correction
  term; its exponents are confined to (-L(s), L(s)).

All values are stored as exact Laurent matrices acting on M (elements of
the parabolic W-graph algebra are never represented abstractly; the
recursion only ever multiplies by matrices it already has).  The
recursion follows the well-founded order "z up, then x down", memoised by
pairs of canonical words, so results are deterministic.

:func:`induce` assembles the induced module from a finished table;
:func:`transitivity_check`, :func:`mackey_check` and
:func:`mu_factorize_check` verify the structural identities relating
inductions along chains of parabolic subgroups, and :func:`mu_inductive`
computes mu-data along a flag of subgroups with independently computable
(and therefore parallelisable) stages.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .coxeter import (
    DEODHAR_MINUS,
    DEODHAR_PLUS,
    DEODHAR_ZERO,
    CoxeterSystem,
    DeodharClass,
    Element,
)
from .laurent import LaurentPoly
from .matrix import LMat
from .report import Report
from .wgraph import OmegaModule, conjugate_module


class RecursionInvariantError(RuntimeError):
    """A computed table entry violated one of the structural invariants."""


@dataclass
class PMuTable:
    """The computed p- and mu-blocks for (J, M) inside an ambient subset.

    ``p[(x, z)]`` is stored for every pair of coset representatives with
    x <= z; ``mu[(x, z, s)]`` only where it may be nonzero (x < z, s not a
    plus-class for x nor a minus-class for z).
    """

    system: CoxeterSystem
    gens: FrozenSet[int]
    ambient: FrozenSet[int]
    module: OmegaModule
    reps: Tuple[Element, ...]
    p: Dict[Tuple[Element, Element], LMat]
    mu: Dict[Tuple[Element, Element, int], LMat]
    _dclass: dict = field(default_factory=dict, repr=False)

    def p_at(self, x: Element, z: Element) -> LMat:
        return self.p.get((x, z), LMat.zeros(self.module.rank))

    def mu_at(self, x: Element, z: Element, s: int) -> LMat:
        return self.mu.get((x, z, s), LMat.zeros(self.module.rank))

    def deodhar(self, s: int, w: Element) -> DeodharClass:
        key = (s, w.word)
        cached = self._dclass.get(key)
        if cached is None:
            cached = self.system.deodhar_class(self.gens, s, w)
            self._dclass[key] = cached
        return cached

    def rep_index(self) -> Dict[Element, int]:
        return {w: i for i, w in enumerate(self.reps)}

    # -- invariants ---------------------------------------------------------

    def check_invariants(self) -> Report:
        """All structural identities of the table, checked exactly."""
        report = Report("p/mu table invariants")
        system = self.system
        identity = LMat.identity(self.module.rank)
        leq = system.bruhat_leq
        for (x, z), mat in self.p.items():
            if x == z:
                report.require(mat == identity, f"p({x},{z}) is not the identity")
            else:
                neg, zero, _ = mat.split()
                report.require(
                    neg.is_zero() and zero.is_zero(),
                    f"p({x},{z}) has non-positive support",
                )
        for (x, z, s) in self.mu:
            cz, cx = self.deodhar(s, z), self.deodhar(s, x)
            report.require(
                x.bruhat_lt(z)
                and cz.tag in (DEODHAR_PLUS, DEODHAR_ZERO)
                and cx.tag in (DEODHAR_ZERO, DEODHAR_MINUS),
                f"mu({x},{z},s={s+1}) stored outside its support condition",
            )
        for (x, z, s), mat in self.mu.items():
            report.require(mat.is_bar_symmetric(), f"mu({x},{z},s={s+1}) not bar-symmetric")
            ls = system.weight(s)
            exps = mat.exponents()
            report.require(
                all(-ls < g < ls for g in exps),
                f"mu({x},{z},s={s+1}) has exponents outside (-{ls},{ls})",
            )
            cx = self.deodhar(s, x)
            if cx.tag == DEODHAR_ZERO:
                e_mat = LMat.from_imat(self.module.e_mat(cx.conj))
                report.require(
                    e_mat @ mat == mat, f"E-fixing fails for mu({x},{z},s={s+1})"
                )
            cz = self.deodhar(s, z)
            if cz.tag == DEODHAR_ZERO:
                e_mat = LMat.from_imat(self.module.e_mat(cz.conj))
                report.require(
                    (mat @ e_mat).is_zero(), f"E-killing fails for mu({x},{z},s={s+1})"
                )
        # the four-case recurrence, for every pair of representatives
        c_mats = _c_matrices(self.module)
        for s in sorted(self.ambient):
            vs = LaurentPoly.v(system.weight(s))
            vs_inv = LaurentPoly.v(-system.weight(s))
            for z in self.reps:
                cz = self.deodhar(s, z)
                sz = system.mult(system.generator(s), z)
                for x in self.reps:
                    cx = self.deodhar(s, x)
                    sx = system.mult(system.generator(s), x)
                    pxz = self.p_at(x, z)
                    if cx.tag == DEODHAR_PLUS:
                        lhs = self.p_at(sx, z) - pxz.scale(vs)
                    elif cx.tag == DEODHAR_ZERO:
                        lhs = c_mats[cx.conj] @ pxz
                    else:
                        lhs = self.p_at(sx, z) - pxz.scale(vs_inv)
                    if cz.tag == DEODHAR_PLUS:
                        rhs = self.p_at(x, sz)
                        for y in self.reps:
                            if y != z and leq(x, y) and leq(y, z):
                                rhs = rhs + self.p_at(x, y) @ self.mu_at(y, z, s)
                    elif cz.tag == DEODHAR_ZERO:
                        rhs = pxz @ c_mats[cz.conj]
                        for y in self.reps:
                            if y != z and leq(x, y) and leq(y, z):
                                rhs = rhs + self.p_at(x, y) @ self.mu_at(y, z, s)
                    else:
                        rhs = -pxz.scale(vs + vs_inv)
                    report.require(
                        lhs == rhs, f"recurrence fails at (x={x}, z={z}, s={s+1})"
                    )
        return report


def _c_matrices(module: OmegaModule) -> Dict[int, LMat]:
    """C_u = T_u - v_u acting on the module, for each inner generator u."""
    out = {}
    identity = LMat.identity(module.rank)
    for u in module.gens:
        vu = LaurentPoly.v(module.system.weight(u))
        out[u] = module.iota_t(u) - identity.scale(vu)
    return out


def p_mu_table(
    J: Iterable[int],
    module: OmegaModule,
    ambient: Optional[Iterable[int]] = None,
    *,
    descent_choice: str = "min",
    max_length: Optional[int] = None,
) -> PMuTable:
    """Run the direct recursion for all pairs of coset representatives.

    ``ambient`` restricts the construction to a parabolic subgroup
    containing J (default: the whole group).  ``descent_choice`` picks the
    left descent used in the p-step ("min" or "max"); the result is
    independent of the choice, which is exercised by tests.
    """
    system = module.system
    J = system._subset(J)
    if J != module.gens:
        raise ValueError("module is defined for a different generator subset")
    ambient = system.generator_set if ambient is None else system._subset(ambient)
    if not J <= ambient:
        raise ValueError("J must be contained in the ambient subset")
    if descent_choice not in ("min", "max"):
        raise ValueError("descent_choice must be 'min' or 'max'")
    reps = system.min_coset_reps(
        J, K=ambient if ambient != system.generator_set else None, max_length=max_length
    )
    table = PMuTable(system, J, ambient, module, tuple(reps), {}, {})
    leq = system.bruhat_leq
    rank = module.rank
    identity = LMat.identity(rank)
    zero = LMat.zeros(rank)
    c_mats = _c_matrices(module)
    below: Dict[Element, List[Element]] = {}
    gens_sorted = sorted(ambient)

    for zi, z in enumerate(reps):
        below_z = [y for y in reps[: zi + 1] if leq(y, z)]
        below[z] = below_z
        table.p[(z, z)] = identity
        if len(below_z) == 1:
            continue
        if descent_choice == "min":
            t = z.word[0]  # canonical words start with the smallest left descent
        else:
            t = max(system.left_descents(z))
        t_elt = system.generator(t)
        tz = system.mult(t_elt, z)
        vt = LaurentPoly.v(system.weight(t))
        vt_inv = LaurentPoly.v(-system.weight(t))
        below_tz = below[tz]
        for x in reversed(below_z[:-1]):
            cx = table.deodhar(t, x)
            if cx.tag == DEODHAR_PLUS:
                tx = system.mult(t_elt, x)
                value = -(table.p_at(tx, z).scale(vt))
            else:
                correction = zero
                for y in below_tz:
                    if y != tz and leq(x, y):
                        mu_y = table.mu.get((y, tz, t))
                        if mu_y is not None:
                            correction = correction + table.p_at(x, y) @ mu_y
                if cx.tag == DEODHAR_ZERO:
                    value = c_mats[cx.conj] @ table.p_at(x, tz) - correction
                else:
                    tx = system.mult(t_elt, x)
                    value = (
                        table.p_at(tx, tz)
                        - table.p_at(x, tz).scale(vt_inv)
                        - correction
                    )
            table.p[(x, z)] = value

        # mu-step: x ascending or descending does not matter for p, but the
        # recursion needs mu(y, z, s) for y above x first, so keep descending.
        for x in reversed(below_z[:-1]):
            pxz = table.p[(x, z)]
            for s in gens_sorted:
                cz = table.deodhar(s, z)
                if cz.tag == DEODHAR_MINUS:
                    continue
                cx = table.deodhar(s, x)
                if cx.tag == DEODHAR_PLUS:
                    continue
                vs = LaurentPoly.v(system.weight(s))
                vs_inv = LaurentPoly.v(-system.weight(s))
                if cz.tag == DEODHAR_PLUS:
                    if cx.tag == DEODHAR_ZERO:
                        r_term = -(c_mats[cx.conj] @ pxz)
                    else:
                        r_term = pxz.scale(vs_inv)
                else:
                    if cx.tag == DEODHAR_ZERO:
                        r_term = pxz @ c_mats[cz.conj] - c_mats[cx.conj] @ pxz
                    else:
                        r_term = pxz @ c_mats[cz.conj] + pxz.scale(vs_inv)
                alpha = -r_term
                for y in below_z:
                    if y != x and y != z and leq(x, y):
                        mu_y = table.mu.get((y, z, s))
                        if mu_y is not None:
                            alpha = alpha - table.p_at(x, y) @ mu_y
                neg, const, _ = alpha.split()
                value = neg + const + neg.bar()
                if not value.is_bar_symmetric():
                    raise RecursionInvariantError(
                        f"mu({x},{z},s={s+1}) is not bar-symmetric"
                    )
                residual = value - alpha
                res_neg, res_const, _ = residual.split()
                if not (res_neg.is_zero() and res_const.is_zero()):
                    raise RecursionInvariantError(
                        f"mu({x},{z},s={s+1}) leaves a non-positive residual"
                    )
                ls = system.weight(s)
                if any(not (-ls < g < ls) for g in value.exponents()):
                    raise RecursionInvariantError(
                        f"mu({x},{z},s={s+1}) has exponents outside (-{ls},{ls})"
                    )
                if not value.is_zero():
                    table.mu[(x, z, s)] = value
    return table


# -- the induced module -------------------------------------------------------


def induce(
    J: Iterable[int],
    module: OmegaModule,
    table: PMuTable,
) -> OmegaModule:
    """Assemble the induced module on the basis (coset rep, module basis).

    The idempotent of s acts blockwise as 0 / E_{s^z} / 1 according to the
    Deodhar class of the representative, and the edge operators place the
    mu-blocks below the diagonal together with the length-increasing carry
    (weight 1 at exponent 0) and, on zero-class representatives, the inner
    edge matrices of the conjugated generator.
    """
    system = module.system
    J = system._subset(J)
    if J != table.gens or module != table.module:
        raise ValueError("table was computed for different (J, module) data")
    reps = table.reps
    r = module.rank
    n = len(reps) * r
    index = {w: i for i, w in enumerate(reps)}
    ambient = table.ambient

    def put_block(target, bi, bj, mat) -> None:
        for i in range(r):
            row = mat[i]
            trow = target[bi * r + i]
            for j in range(r):
                if row[j]:
                    trow[bj * r + j] += row[j]

    e_out: Dict[int, tuple] = {}
    x_out: Dict[Tuple[int, int], tuple] = {}
    for s in sorted(ambient):
        ls = system.weight(s)
        e_mat = [[0] * n for _ in range(n)]
        x_mats = {g: [[0] * n for _ in range(n)] for g in range(ls)}
        for zi, z in enumerate(reps):
            cls = table.deodhar(s, z)
            if cls.tag == DEODHAR_MINUS:
                for i in range(r):
                    e_mat[zi * r + i][zi * r + i] = 1
                continue
            if cls.tag == DEODHAR_ZERO:
                conj = cls.conj
                if system.weight(conj) != ls:
                    raise AssertionError("conjugate generators carry different weights")
                put_block(e_mat, zi, zi, module.e_mat(conj))
                for g in range(ls):
                    inner = module.x.get((conj, g))
                    if inner is not None:
                        put_block(x_mats[g], zi, zi, inner)
            else:  # plus: idempotent block is zero; carry to the longer rep
                sz = system.mult(system.generator(s), z)
                szi = index.get(sz)
                if szi is None:
                    raise ValueError(
                        f"carry target {sz} is not among the representatives; "
                        "the enumeration must cover the whole group"
                    )
                for i in range(r):
                    x_mats[0][szi * r + i][zi * r + i] += 1
            for x in table.reps:
                mu = table.mu.get((x, z, s))
                if mu is not None:
                    xi = index[x]
                    for g in range(ls):
                        coeffs = mu.coeff(g)
                        put_block(x_mats[g], xi, zi, coeffs)
        e_out[s] = tuple(tuple(row) for row in e_mat)
        for g, mat in x_mats.items():
            x_out[(s, g)] = tuple(tuple(row) for row in mat)
    return OmegaModule(system, ambient, n, e_out, x_out)


def canonical_matrix(J: Iterable[int], module: OmegaModule, table: PMuTable) -> LMat:
    """The block base-change matrix (p_{y,z} in block (y, z)).

    Block upper-triangular with identity diagonal in the (length, word)
    listing of the representatives, hence invertible.
    """
    system = module.system
    J = system._subset(J)
    if J != table.gens or module != table.module:
        raise ValueError("table was computed for different (J, module) data")
    zero = LMat.zeros(module.rank)
    grid = [
        [table.p.get((y, z), zero) for z in table.reps]
        for y in table.reps
    ]
    return LMat.from_blocks(grid)


def hecke_t_on_induced(table: PMuTable, s: int) -> LMat:
    """The matrix of T_s on the induced Hecke module in the tensor basis."""
    system = table.system
    module = table.module
    reps = table.reps
    r = module.rank
    index = {w: i for i, w in enumerate(reps)}
    blocks = [[LMat.zeros(r) for _ in reps] for _ in reps]
    identity = LMat.identity(r)
    vs = system.weight(s)
    for xi, x in enumerate(reps):
        cls = table.deodhar(s, x)
        if cls.tag == DEODHAR_ZERO:
            blocks[xi][xi] = module.iota_t(cls.conj)
            continue
        sx = system.mult(system.generator(s), x)
        sxi = index.get(sx)
        if sxi is None:
            raise ValueError(f"product {sx} is not among the representatives")
        blocks[sxi][xi] = identity
        if cls.tag == DEODHAR_MINUS:
            blocks[xi][xi] = identity.scale(LaurentPoly({vs: 1, -vs: -1}))
    return LMat.from_blocks(blocks)


def verify_h_linearity(
    J: Iterable[int],
    module: OmegaModule,
    table: Optional[PMuTable] = None,
    ambient: Optional[Iterable[int]] = None,
) -> Report:
    """Check that the base change intertwines C_s = T_s - v_s both ways.

    The left side acts through the induced module structure, the right
    side through the T-basis structure constants of the induced Hecke
    module.  Exact equality for every generator is the defining property
    of the construction.
    """
    if table is None:
        table = p_mu_table(J, module, ambient)
    induced = induce(J, module, table)
    cmat = canonical_matrix(J, module, table)
    report = Report("H-linearity of the base change")
    n = cmat.nrows
    big_identity = LMat.identity(n)
    for s in sorted(table.ambient):
        vs = LaurentPoly.v(table.system.weight(s))
        omega_c = induced.iota_t(s) - big_identity.scale(vs)
        hecke_c = hecke_t_on_induced(table, s) - big_identity.scale(vs)
        report.require(
            cmat @ omega_c == hecke_c @ cmat,
            f"c(C_{s+1} . ) != C_{s+1} c( . )",
        )
    return report


# -- transitivity --------------------------------------------------------------


def transitivity_check(
    J: Iterable[int],
    K: Iterable[int],
    module: OmegaModule,
    ambient: Optional[Iterable[int]] = None,
) -> Report:
    """Induce in two stages through K, reindex along (w, z) -> wz, compare."""
    system = module.system
    J = system._subset(J)
    K = system._subset(K)
    ambient = system.generator_set if ambient is None else system._subset(ambient)
    if not (J <= K <= ambient):
        raise ValueError("need J <= K <= ambient")
    report = Report(f"transitivity through K={sorted(s + 1 for s in K)}")

    table_jk = p_mu_table(J, module, ambient=K)
    inner = induce(J, module, table_jk)
    table_ks = p_mu_table(K, inner, ambient=ambient)
    nested = induce(K, inner, table_ks)

    table_js = p_mu_table(J, module, ambient=ambient)
    direct = induce(J, module, table_js)

    r = module.rank
    direct_index = {w: i for i, w in enumerate(table_js.reps)}
    perm: List[int] = []
    seen = set()
    for w in table_ks.reps:
        for z in table_jk.reps:
            wz = system.mult(w, z)
            pos = direct_index.get(wz)
            if pos is None or wz.length != w.length + z.length:
                report.fail(f"({w},{z}) does not map to a representative length-additively")
                continue
            seen.add(pos)
            for b in range(r):
                perm.append(pos * r + b)
    report.require(
        len(seen) == len(table_js.reps), "reindexing (w,z) -> wz is not a bijection"
    )
    if not report.ok:
        return report

    n = nested.rank
    for s in sorted(ambient):
        nested_e = nested.e_mat(s)
        direct_e = direct.e_mat(s)
        ok = all(
            nested_e[i][j] == direct_e[perm[i]][perm[j]]
            for i in range(n)
            for j in range(n)
        )
        report.require(ok, f"E_{s+1} differs between nested and direct induction")
        for g in range(system.weight(s)):
            nested_x = nested.x_mat(s, g)
            direct_x = direct.x_mat(s, g)
            ok = all(
                nested_x[i][j] == direct_x[perm[i]][perm[j]]
                for i in range(n)
                for j in range(n)
            )
            report.require(ok, f"X_({s+1},{g}) differs between nested and direct induction")
    return report


# -- Mackey filtration ----------------------------------------------------------


def mackey_check(
    J: Iterable[int],
    K: Iterable[int],
    module: OmegaModule,
) -> Report:
    """Filtration by double cosets: stability and exactness of subquotients.

    For each minimal double-coset representative d, the span of the basis
    vectors whose double-coset part is <= d must be closed under the
    restricted action, and the subquotient must match the induction (from
    the conjugated subset, of the conjugated module) inside W_K.
    """
    system = module.system
    J = system._subset(J)
    K = system._subset(K)
    report = Report(f"Mackey filtration for K={sorted(s + 1 for s in K)}")

    table = p_mu_table(J, module)
    induced = induce(J, module, table)
    r = module.rank
    reps = table.reps
    dcoset_reps = system.double_coset_reps(K, J)

    # double-coset part of every representative
    part: Dict[Element, Element] = {}
    for x in reps:
        w, a = system.double_coset_decompose(K, J, x)
        part[x] = a
        if a not in dcoset_reps:
            report.fail(f"decomposition of {x} gave a non-minimal part {a}")
    if not report.ok:
        return report

    for d in dcoset_reps:
        members = {
            i * r + b
            for i, x in enumerate(reps)
            if system.bruhat_leq(part[x], d)
            for b in range(r)
        }
        for s in sorted(K):
            mats = [induced.e_mat(s)]
            mats.extend(induced.x_mat(s, g) for g in range(system.weight(s)))
            for mat in mats:
                stable = all(
                    mat[i][j] == 0
                    for j in members
                    for i in range(induced.rank)
                    if i not in members
                )
                report.require(
                    stable, f"span up to d={d} is not stable under generator {s+1}"
                )

        # subquotient at exactly d vs induction of the conjugated module
        conj = conjugate_module(d, module, K)
        inner_table = p_mu_table(conj.gens, conj, ambient=K)
        compare = induce(conj.gens, conj, inner_table)
        direct_index = {w: i for i, w in enumerate(reps)}
        slice_idx: List[int] = []
        for w in inner_table.reps:
            wd = system.mult(w, d)
            pos = direct_index.get(wd)
            if pos is None or part.get(wd) != d:
                report.fail(f"{w}*{d} is not a representative with part exactly d")
                continue
            slice_idx.extend(pos * r + b for b in range(r))
        if not report.ok:
            return report
        for s in sorted(K):
            sub_e = tuple(
                tuple(induced.e_mat(s)[i][j] for j in slice_idx) for i in slice_idx
            )
            report.require(
                sub_e == compare.e_mat(s),
                f"subquotient at d={d}: E_{s+1} mismatch",
            )
            for g in range(system.weight(s)):
                big = induced.x_mat(s, g)
                sub_x = tuple(tuple(big[i][j] for j in slice_idx) for i in slice_idx)
                report.require(
                    sub_x == compare.x_mat(s, g),
                    f"subquotient at d={d}: X_({s+1},{g}) mismatch",
                )
    return report


def mackey_head_start(
    d: Element,
    K: Iterable[int],
    J: Iterable[int],
    inner_table: PMuTable,
) -> Dict[Tuple[Element, Element, int], LMat]:
    """Predict mu-entries for pairs of the form (yd, wd) from inner data.

    ``inner_table`` must be computed over the subset K n dJd^-1 inside
    W_K on the conjugated module; its mu-matrices transported along
    (y, w) -> (yd, wd) agree with the corresponding entries of the direct
    table, and may be used to seed the main recursion.  Pairs not of this
    shape are left unassigned.
    """
    system = inner_table.system
    K = system._subset(K)
    J = system._subset(J)
    out: Dict[Tuple[Element, Element, int], LMat] = {}
    for (y, w, s), mat in inner_table.mu.items():
        yd = system.mult(y, d)
        wd = system.mult(w, d)
        out[(yd, wd, s)] = mat
    return out


# -- the mu factorization corollary ---------------------------------------------


def mu_factorize_check(
    J: Iterable[int],
    K: Iterable[int],
    table_js: PMuTable,
    table_jk: PMuTable,
    table_ks: PMuTable,
) -> Report:
    """Factor mu over S through mu over K acting on the inner induction.

    ``table_ks`` must be computed on the module induced from (J, M) up to
    K (the module ``table_jk`` describes).  For representatives u, x of
    W_K-cosets and v, y of W_J-cosets inside W_K:

    * u = x: the entry at (xv, xy) equals the inner entry at (v, y) for
      the conjugated generator when s is a zero-class for x, else 0;
    * u < x: the entries at (uv, xy) for all v assemble the action of the
      outer mu-block on the inner basis vector at y;
    * otherwise every such entry vanishes.
    """
    system = table_js.system
    J = system._subset(J)
    K = system._subset(K)
    report = Report("mu factorization along J <= K")
    r = table_js.module.rank
    if table_ks.module.rank != len(table_jk.reps) * r:
        raise ValueError("table_ks is not computed on the induced module of table_jk")
    inner_index = {w: i for i, w in enumerate(table_jk.reps)}
    for x in table_ks.reps:
        for y in table_jk.reps:
            xy = system.mult(x, y)
            yi = inner_index[y]
            for s in sorted(table_js.ambient):
                for u in table_ks.reps:
                    mu_outer = table_ks.mu.get((u, x, s))
                    if u == x:
                        cls = table_ks.deodhar(s, x)
                        for v in table_jk.reps:
                            target = table_js.mu_at(system.mult(x, v), xy, s)
                            if cls.tag == DEODHAR_ZERO:
                                expected = table_jk.mu_at(v, y, cls.conj)
                            else:
                                expected = LMat.zeros(r)
                            report.require(
                                target == expected,
                                f"u=x case fails at (x={x}, v={v}, y={y}, s={s+1})",
                            )
                    elif u.bruhat_lt(x):
                        for v in table_jk.reps:
                            target = table_js.mu_at(system.mult(u, v), xy, s)
                            vi = inner_index[v]
                            if mu_outer is None:
                                expected = LMat.zeros(r)
                            else:
                                expected = mu_outer.submatrix(
                                    range(vi * r, vi * r + r),
                                    range(yi * r, yi * r + r),
                                )
                            report.require(
                                target == expected,
                                f"u<x case fails at (u={u}, x={x}, v={v}, y={y}, s={s+1})",
                            )
                    else:
                        for v in table_jk.reps:
                            target = table_js.mu.get((system.mult(u, v), xy, s))
                            report.require(
                                target is None or target.is_zero(),
                                f"entry should vanish at (u={u}, x={x}, v={v}, y={y}, s={s+1})",
                            )
    return report


# -- the flag algorithm -----------------------------------------------------------


def _level_mu_data(
    matrix: tuple,
    weights: tuple,
    j_set: tuple,
    k_prev: tuple,
    k_cur: tuple,
    module_data: tuple,
) -> dict:
    """Worker payload: mu-table of one flag level, as plain picklable data.

    Builds the induction of the base module up to the previous flag level
    from scratch (so levels are independent of each other) and then runs
    the direct recursion from the previous to the current level on it.
    """
    system = CoxeterSystem(matrix, weights)
    gens, rank, e_data, x_data = module_data
    module = OmegaModule(
        system,
        frozenset(gens),
        rank,
        {s: m for s, m in e_data},
        {key: m for key, m in x_data},
    )
    j_set = frozenset(j_set)
    k_prev = frozenset(k_prev)
    k_cur = frozenset(k_cur)
    if k_prev == j_set:
        inner = module
    else:
        inner_table = p_mu_table(j_set, module, ambient=k_prev)
        inner = induce(j_set, module, inner_table)
    level = p_mu_table(k_prev, inner, ambient=k_cur)
    return {
        (x.word, z.word, s): mat.rows for (x, z, s), mat in level.mu.items()
    }


def _module_plain_data(module: OmegaModule) -> tuple:
    return (
        tuple(sorted(module.gens)),
        module.rank,
        tuple(sorted(module.e.items())),
        tuple(sorted(module.x.items())),
    )


def mu_inductive(
    flag: Sequence[Iterable[int]],
    module: OmegaModule,
    jobs: int = 1,
) -> Dict[Tuple[Element, Element, int], LMat]:
    """Compute all mu-blocks for (J, S) along a flag J = K_0 < ... < K_n = S.

    Stage one computes, independently per level i, the mu-table from
    K_{i-1} to K_i acting on the induction of the module up to K_{i-1}
    (with ``jobs`` > 1 these run in worker processes).  Stage two stitches
    the levels together: an entry at (uv, xy) is zero unless the W_K-parts
    satisfy u <= x, is an inner entry (for the conjugated generator) when
    u = x, and is a block of the level matrix when u < x.  The output is
    identical to the mu-part of :func:`p_mu_table` and independent of
    ``jobs``.
    """
    system = module.system
    levels = [system._subset(k) for k in flag]
    if len(levels) < 2:
        raise ValueError("flag must contain at least J and the full generator set")
    if levels[0] != module.gens:
        raise ValueError("flag must start at the module's generator subset")
    if levels[-1] != system.generator_set:
        raise ValueError("flag must end at the full generator set")
    for lower, upper in zip(levels, levels[1:]):
        if not lower < upper:
            raise ValueError("flag subsets must strictly increase")
    J = levels[0]
    n_levels = len(levels) - 1

    payloads = [
        (
            system.matrix,
            system.weights,
            tuple(sorted(J)),
            tuple(sorted(levels[i - 1])),
            tuple(sorted(levels[i])),
            _module_plain_data(module),
        )
        for i in range(1, n_levels + 1)
    ]
    if jobs > 1 and n_levels > 1:
        workers = min(jobs, n_levels)
        with ProcessPoolExecutor(max_workers=workers, mp_context=_fork_context()) as pool:
            raw_levels = list(pool.map(_level_mu_data, *zip(*payloads)))
    else:
        raw_levels = [_level_mu_data(*payload) for payload in payloads]

    level_mu: List[Dict[Tuple[Element, Element, int], LMat]] = []
    for raw in raw_levels:
        level_mu.append(
            {
                (Element(xw, system), Element(zw, system), s): LMat(rows)
                for (xw, zw, s), rows in raw.items()
            }
        )

    r = module.rank
    merged: Dict[Tuple[Element, Element, int], LMat] = {}
    inner_reps: List[Element] = [system.identity]
    for i in range(1, n_levels + 1):
        k_prev, k_cur = levels[i - 1], levels[i]
        cur_reps = system.min_coset_reps(
            J, K=k_cur if k_cur != system.generator_set else None
        )
        inner_index = {w: pos for pos, w in enumerate(inner_reps)}
        new_mu: Dict[Tuple[Element, Element, int], LMat] = {}
        dclass_cache: Dict[Tuple[int, Element], DeodharClass] = {}

        def dclass(s: int, w: Element) -> DeodharClass:
            key = (s, w)
            got = dclass_cache.get(key)
            if got is None:
                got = system.deodhar_class(k_prev, s, w)
                dclass_cache[key] = got
            return got

        for z in cur_reps:
            x, y = system.factorize(J, k_prev, z)
            yi = inner_index[y]
            for w in cur_reps:
                if not w.bruhat_lt(z):
                    continue
                u, v = system.factorize(J, k_prev, w)
                for s in sorted(k_cur):
                    if u == x:
                        cls = dclass(s, x)
                        if cls.tag != DEODHAR_ZERO:
                            continue
                        value = merged.get((v, y, cls.conj))
                    elif u.bruhat_lt(x):
                        outer = level_mu[i - 1].get((u, x, s))
                        if outer is None:
                            continue
                        vi = inner_index[v]
                        value = outer.submatrix(
                            range(vi * r, vi * r + r), range(yi * r, yi * r + r)
                        )
                        if value.is_zero():
                            value = None
                    else:
                        continue
                    if value is not None:
                        new_mu[(w, z, s)] = value
        merged = new_mu
        inner_reps = cur_reps
    return merged


def _fork_context():
    import multiprocessing

    try:
        return multiprocessing.get_context("fork")
    except ValueError:  # pragma: no cover - non-POSIX fallback
        return multiprocessing.get_context()


# -- cross-checks used by the CLI -------------------------------------------------


def oracle_check(
    J: Iterable[int],
    module: OmegaModule,
    ambient: Optional[Iterable[int]] = None,
) -> Report:
    """Entrywise equality of the direct p-table with the triangular oracle.

    The oracle route expands the bar involution in the T-basis and runs
    the generic positive-part recursion; it shares no code with the p/mu
    recursion beyond the module's Hecke matrices.
    """
    from .canon import pi_recursion, rho_table  # local import: keep the paths separate

    table = p_mu_table(J, module, ambient)
    pi = pi_recursion(rho_table(J, module, ambient))
    report = Report("oracle equivalence (direct recursion vs triangular oracle)")
    keys = set(table.p) | set(pi.entries)
    for key in sorted(keys, key=lambda k: (k[1], k[0])):
        direct_val = table.p.get(key)
        oracle_val = pi.entries.get(key)
        if direct_val is None:
            report.require(
                oracle_val.is_zero(), f"oracle has extra nonzero entry at {key}"
            )
        elif oracle_val is None:
            report.require(
                direct_val.is_zero(), f"direct table has extra nonzero entry at {key}"
            )
        else:
            report.require(direct_val == oracle_val, f"p-blocks differ at {key}")
    return report


def e_fix_check(system: CoxeterSystem, J: Iterable[int]) -> Report:
    """The full idempotent product fixes the lowest basis vector.

    On the induction of the rank-1 module with all inner idempotents
    acting as 1, the product of E_s over s in J and (1 - E_s) over s
    outside J must fix the basis vector at the identity representative
    exactly.
    """
    from .matrix import imat_identity, imat_mul
    from .wgraph import sign_module

    J = system._subset(J)
    report = Report(f"idempotent product fixes 1|m0 (J={sorted(s + 1 for s in J)})")
    module = sign_module(system, J)
    table = p_mu_table(J, module)
    induced = induce(J, module, table)
    n = induced.rank
    product = imat_identity(n)
    for s in sorted(system.generator_set):
        e_s = induced.e_mat(s)
        if s in J:
            factor = e_s
        else:
            factor = tuple(
                tuple((1 if i == j else 0) - e_s[i][j] for j in range(n)) for i in range(n)
            )
        product = imat_mul(product, factor)
    column = tuple(product[i][0] for i in range(n))
    expected = tuple(1 if i == 0 else 0 for i in range(n))
    report.require(column == expected, "E_J does not fix the generating vector")
    return report


def default_jobs() -> int:
    """Worker count from the HY_JOBS environment variable (default 1)."""
    raw = os.environ.get("HY_JOBS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
