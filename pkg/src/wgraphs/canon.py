"""Triangular canonicalisation: the independent oracle for p-data.

This module computes, for coset representatives x <= z, the matrices by
which the bar involution acts blockwise on an induced module (``rho``,
assembled from the T-basis expansion of the bar involution, i.e. from
R-polynomial data), and then solves the triangular fixed-point problem

    pi_{xz} = sum_{x <= y <= z} rho_{xy} o bar(pi_{yz}),
    pi_{zz} = id,  pi_{xz} strictly positive for x < z

by the standard correction recursion: at each step the partial sum
``alpha`` is antisymmetric under bar, so its positive part is forced.

The engine :func:`canonicalise_shadow` is written against a bare poset
plus block maps; :func:`rho_table` / :func:`pi_recursion` instantiate it
with Hecke data.  This path never touches the p/mu recursion in
:mod:`wgraphs.hy`, which is what makes the two usable as cross-checks of
each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Optional, Sequence, Tuple

from .coxeter import CoxeterSystem, Element
from .laurent import LaurentPoly
from .matrix import LMat
from .report import Report
from .wgraph import OmegaModule


class CanonicalisationError(RuntimeError):
    """The input block maps do not come from an involution."""


# -- T-basis expansion of the bar involution ---------------------------------


def iota_expand(z: Element) -> Dict[Element, LaurentPoly]:
    """Coefficients of the bar image of T_z in the T-basis.

    The bar involution sends T_s to T_s^-1 = T_s - (v_s - v_s^-1); the
    image of T_z is the product of the images along any reduced word,
    expanded exactly.  The coefficient of T_z itself is 1 and all other
    contributions sit strictly below z in the Bruhat order.
    """
    system = z.system
    memo = system._cache.setdefault("iota_expand", {})
    return {Element(w, system): c for w, c in _iota_expand_words(system, z.word, memo).items()}


def _iota_expand_words(system: CoxeterSystem, zword, memo) -> Dict[tuple, LaurentPoly]:
    cached = memo.get(zword)
    if cached is not None:
        return cached
    if not zword:
        result = {(): LaurentPoly.one()}
        memo[zword] = result
        return result
    s = zword[0]
    rest = _iota_expand_words(system, zword[1:], memo)
    delta = LaurentPoly({system.weight(s): 1, -system.weight(s): -1})  # v_s - v_s^-1
    out: Dict[tuple, LaurentPoly] = {}

    def add(word, coeff):
        if word in out:
            total = out[word] + coeff
            if total.is_zero():
                del out[word]
            else:
                out[word] = total
        elif not coeff.is_zero():
            out[word] = coeff

    for word, coeff in rest.items():
        sword = system._normalize_word((s,) + word)
        if len(sword) > len(word):
            # T_s T_w = T_sw; then subtract delta T_w from the bar factor
            add(sword, coeff)
            add(word, -(delta * coeff))
        else:
            # T_s T_w = T_sw + delta T_w; the delta terms cancel
            add(sword, coeff)
    memo[zword] = out
    return out


# -- rho: blockwise action of the involution ---------------------------------


@dataclass
class RhoTable:
    """Blockwise bar-involution data r_{x,z} on coset representatives.

    ``entries[(x, z)]`` is the Laurent matrix by which the involution's
    (x, z) block acts on the underlying module; it is zero unless x <= z
    and the diagonal blocks are identities.
    """

    system: CoxeterSystem
    gens: FrozenSet[int]
    ambient: FrozenSet[int]
    module: OmegaModule
    reps: Tuple[Element, ...]
    entries: Dict[Tuple[Element, Element], LMat]

    def at(self, x: Element, z: Element) -> LMat:
        return self.entries.get((x, z), LMat.zeros(self.module.rank))


@dataclass
class PiTable:
    """The canonicalising base change: strictly positive above the diagonal."""

    system: CoxeterSystem
    gens: FrozenSet[int]
    ambient: FrozenSet[int]
    module: OmegaModule
    reps: Tuple[Element, ...]
    entries: Dict[Tuple[Element, Element], LMat]

    def at(self, x: Element, z: Element) -> LMat:
        return self.entries.get((x, z), LMat.zeros(self.module.rank))


def rho_table(
    J: Iterable[int],
    module: OmegaModule,
    ambient: Optional[Iterable[int]] = None,
    max_length: Optional[int] = None,
) -> RhoTable:
    """Assemble r_{x,z} = sum_u R_{xu,z} T_u for x, z coset reps, u in W_J.

    R are the T-basis coefficients from :func:`iota_expand`; T_u acts on
    the module through its Hecke matrices.
    """
    system = module.system
    J = system._subset(J)
    if J != module.gens:
        raise ValueError("module is defined for a different generator subset")
    ambient = system.generator_set if ambient is None else system._subset(ambient)
    if not J <= ambient:
        raise ValueError("J must be contained in the ambient subset")
    reps = system.min_coset_reps(J, K=ambient if ambient != system.generator_set else None,
                                 max_length=max_length)
    entries: Dict[Tuple[Element, Element], LMat] = {}
    for z in reps:
        blocks: Dict[Element, LMat] = {}
        for w, coeff in iota_expand(z).items():
            x, u = system.factorize(frozenset(), J, w)
            acted = module.hecke_matrix(u).scale(coeff)
            blocks[x] = blocks.get(x, LMat.zeros(module.rank)) + acted
        for x, mat in blocks.items():
            if not mat.is_zero():
                entries[(x, z)] = mat
        diag = entries.get((z, z))
        if diag != LMat.identity(module.rank):
            raise AssertionError(f"diagonal block r_({z},{z}) is not the identity")
    return RhoTable(system, J, ambient, module, tuple(reps), entries)


def check_rho(rho: RhoTable) -> Report:
    """The composition identity: sum_{x<=y<=z} r_{xy} bar(r_{yz}) = delta_{xz}."""
    report = Report("rho composition identity")
    reps = rho.reps
    rank = rho.module.rank
    identity = LMat.identity(rank)
    for zi, z in enumerate(reps):
        below = [y for y in reps[: zi + 1] if rho.system.bruhat_leq(y, z)]
        for x in below:
            total = LMat.zeros(rank)
            for y in below:
                if rho.system.bruhat_leq(x, y):
                    term = rho.entries.get((x, y))
                    upper = rho.entries.get((y, z))
                    if term is not None and upper is not None:
                        total = total + term @ upper.bar()
            expected = identity if x == z else LMat.zeros(rank)
            report.require(total == expected, f"composition fails at ({x},{z})")
    return report


# -- the generic triangular engine -------------------------------------------


def canonicalise_shadow(
    items: Sequence[Hashable],
    leq: Callable[[Hashable, Hashable], bool],
    rho_at: Callable[[Hashable, Hashable], LMat],
    rank: int,
) -> Dict[Tuple[Hashable, Hashable], LMat]:
    """Solve the triangular fixed-point problem over an abstract poset.

    ``items`` must list the poset in some linear extension.  Returns the
    complete family of blocks pi_{xz} for x <= z.  Raises
    :class:`CanonicalisationError` if the correction terms fail to be
    antisymmetric or the fixed-point equation has a nonzero residual
    (either means ``rho_at`` does not describe an involution).
    """
    items = list(items)
    identity = LMat.identity(rank)
    pi: Dict[Tuple[Hashable, Hashable], LMat] = {}
    for zi, z in enumerate(items):
        below = [y for y in items[: zi + 1] if leq(y, z)]
        pi[(z, z)] = identity
        for x in reversed(below[:-1]):
            alpha = LMat.zeros(rank)
            for y in below:
                if y != x and leq(x, y):
                    piy = pi.get((y, z))
                    if piy is not None:
                        alpha = alpha + rho_at(x, y) @ piy.bar()
            if alpha != -alpha.bar():
                raise CanonicalisationError(
                    f"correction term at ({x},{z}) is not antisymmetric"
                )
            _, _, pos = alpha.split()
            pi[(x, z)] = pos  # possibly zero; stored for every pair x <= z
        # fixed-point residual: pi_{xz} = sum_{x<=y<=z} rho_{xy} bar(pi_{yz})
        for x in below:
            total = LMat.zeros(rank)
            for y in below:
                if leq(x, y):
                    piy = pi.get((y, z))
                    if piy is not None:
                        total = total + rho_at(x, y) @ piy.bar()
            if total != pi.get((x, z), LMat.zeros(rank)):
                raise CanonicalisationError(f"fixed-point residual nonzero at ({x},{z})")
    return pi


def pi_recursion(rho: RhoTable, *, check: bool = True) -> PiTable:
    """Run the triangular recursion on Hecke rho data.

    With ``check=True`` the composition identity of ``rho`` is verified
    first (a failed identity signals an upstream bug, and the recursion
    would produce garbage from such input).
    """
    if check:
        report = check_rho(rho)
        if not report.ok:
            raise CanonicalisationError(str(report))
    entries = canonicalise_shadow(
        rho.reps,
        rho.system.bruhat_leq,
        rho.at,
        rho.module.rank,
    )
    return PiTable(rho.system, rho.gens, rho.ambient, rho.module, rho.reps, entries)
