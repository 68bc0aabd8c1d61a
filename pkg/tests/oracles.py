"""Independent oracles for the test suite.

Everything here is deliberately computed WITHOUT the package's recursion
machinery: concrete matrix/permutation models for the small groups, a
brute-force subword test for the Bruhat order, the textbook two-step
Kazhdan-Lusztig recursion (R-polynomials, then P-polynomials, in the
variable q), and a span-closure construction of cells.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, List, Tuple

# -- model groups --------------------------------------------------------------


def compose_perms(p: tuple, q: tuple) -> tuple:
    """(p o q)(i) = p(q(i)) for permutations of range(n) in one-line form."""
    return tuple(p[q[i]] for i in range(len(p)))


def sym_group_generators(n: int) -> List[tuple]:
    """Adjacent transpositions of S_n acting on positions 0..n-1."""
    gens = []
    for i in range(n - 1):
        g = list(range(n))
        g[i], g[i + 1] = g[i + 1], g[i]
        gens.append(tuple(g))
    return gens


def signed_perm_generators(n: int) -> List[tuple]:
    """Type B_n generators: sign flip on the first letter, then swaps.

    Elements are one-line tuples of nonzero signed integers; composition
    is (f o g)(k) = sign(g(k)) * f(|g(k)|).
    """
    flip = tuple(-(1) if k == 0 else k + 1 for k in range(n))
    gens = [flip]
    for i in range(n - 1):
        g = list(range(1, n + 1))
        g[i], g[i + 1] = g[i + 1], g[i]
        gens.append(tuple(g))
    return gens


def compose_signed(f: tuple, g: tuple) -> tuple:
    out = []
    for k in range(len(f)):
        image = g[k]
        value = f[abs(image) - 1]
        out.append(value if image > 0 else -value)
    return tuple(out)


def dihedral_generators(m: int) -> List[tuple]:
    """I2(m) as reflections x -> -x and x -> 1 - x of Z/m (as permutations)."""
    s = tuple((-x) % m for x in range(m))
    t = tuple((1 - x) % m for x in range(m))
    return [s, t]


def enumerate_model(
    generators: List,
    mult: Callable,
    identity,
    max_length: int | None = None,
) -> Dict[object, Tuple[int, tuple]]:
    """BFS over products; returns element -> (length, ShortLex word)."""
    table: Dict[object, Tuple[int, tuple]] = {identity: (0, ())}
    layer = [((), identity)]
    length = 0
    while layer and (max_length is None or length < max_length):
        length += 1
        nxt = []
        for word, elt in layer:  # layer is in ShortLex order
            for i, g in enumerate(generators):
                new = mult(elt, g)
                if new not in table:
                    new_word = word + (i,)
                    table[new] = (length, new_word)
                    nxt.append((new_word, new))
        nxt.sort(key=lambda pair: pair[0])
        layer = nxt
    return table


def model_for(name: str):
    """(generators, mult, identity) for the named small group."""
    if name == "a1":
        return sym_group_generators(2), compose_perms, tuple(range(2))
    if name == "a2":
        return sym_group_generators(3), compose_perms, tuple(range(3))
    if name == "a3":
        return sym_group_generators(4), compose_perms, tuple(range(4))
    if name == "b2":
        return signed_perm_generators(2), compose_signed, (1, 2)
    if name == "b3":
        return signed_perm_generators(3), compose_signed, (1, 2, 3)
    if name == "i2_5":
        return dihedral_generators(5), lambda p, q: compose_perms(p, q), tuple(range(5))
    raise KeyError(name)


def eval_word(word: Iterable[int], generators: List, mult: Callable, identity):
    out = identity
    for s in word:
        out = mult(out, generators[s])
    return out


# -- Bruhat order by brute force -------------------------------------------------


def bruhat_leq_subword(system, x, z) -> bool:
    """x <= z iff some subword of z's reduced word is a reduced word of x."""
    if x.length > z.length:
        return False
    zw = z.word
    for positions in itertools.combinations(range(len(zw)), x.length):
        candidate = tuple(zw[i] for i in positions)
        if system._normalize_word(candidate) == x.word:
            return True
    return False


# -- classical Kazhdan-Lusztig polynomials (variable q) ----------------------------


class KLOracle:
    """Textbook two-step KL recursion over the symmetric group S_n.

    Permutations are one-line tuples over range(n).  Polynomials in q are
    {degree: coefficient} dicts.  R-polynomials come first (their
    nonvanishing IS the Bruhat order), then the P-recursion
        P_{x,w} = q^(1-c) P_{xs,ws} + q^c P_{x,ws}
                  - sum_{x <= z < ws, zs < z} mu(z, ws) q^((l(w)-l(z))/2) P_{x,z}
    with s a right descent of w and c = 1 iff xs < x.
    """

    def __init__(self, n: int):
        self.n = n
        self.gens = sym_group_generators(n)
        self.perms = [tuple(p) for p in itertools.permutations(range(n))]
        self.length = {p: self._inversions(p) for p in self.perms}
        self._r: Dict[Tuple[tuple, tuple], dict] = {}
        self._p: Dict[Tuple[tuple, tuple], dict] = {}

    @staticmethod
    def _inversions(p: tuple) -> int:
        return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])

    def right_mult(self, w: tuple, i: int) -> tuple:
        return compose_perms(w, self.gens[i])

    def right_descent(self, w: tuple) -> int | None:
        for i in range(self.n - 1):
            if w[i] > w[i + 1]:
                return i
        return None

    # R-polynomials ------------------------------------------------------------

    def r_poly(self, x: tuple, w: tuple) -> dict:
        key = (x, w)
        cached = self._r.get(key)
        if cached is not None:
            return cached
        if self.length[x] > self.length[w]:
            result: dict = {}
        elif w == tuple(range(self.n)):
            result = {0: 1} if x == w else {}
        else:
            i = self.right_descent(w)
            ws = self.right_mult(w, i)
            xs = self.right_mult(x, i)
            if self.length[xs] < self.length[x]:
                result = dict(self.r_poly(xs, ws))
            else:
                # (q - 1) R_{x,ws} + q R_{xs,ws}
                result = {}
                for d, c in self.r_poly(x, ws).items():
                    result[d + 1] = result.get(d + 1, 0) + c
                    result[d] = result.get(d, 0) - c
                for d, c in self.r_poly(xs, ws).items():
                    result[d + 1] = result.get(d + 1, 0) + c
                result = {d: c for d, c in result.items() if c}
        self._r[key] = result
        return result

    def leq(self, x: tuple, w: tuple) -> bool:
        return x == w or bool(self.r_poly(x, w))

    # P-polynomials ---------------------------------------------------------------

    def p_poly(self, x: tuple, w: tuple) -> dict:
        key = (x, w)
        cached = self._p.get(key)
        if cached is not None:
            return cached
        if x == w:
            result = {0: 1}
        elif not self.leq(x, w):
            result = {}
        else:
            i = self.right_descent(w)
            ws = self.right_mult(w, i)
            xs = self.right_mult(x, i)
            c = 1 if self.length[xs] < self.length[x] else 0
            result = {}
            for d, co in self.p_poly(xs, ws).items():
                result[d + 1 - c] = result.get(d + 1 - c, 0) + co
            for d, co in self.p_poly(x, ws).items():
                result[d + c] = result.get(d + c, 0) + co
            for z in self.perms:
                if self.length[z] >= self.length[ws] or not self.leq(x, z):
                    continue
                zs = self.right_mult(z, i)
                if self.length[zs] >= self.length[z]:
                    continue
                if not self.leq(z, ws):
                    continue
                mu = self.mu(z, ws)
                if mu == 0:
                    continue
                shift = (self.length[w] - self.length[z]) // 2
                for d, co in self.p_poly(x, z).items():
                    result[d + shift] = result.get(d + shift, 0) - mu * co
            result = {d: co for d, co in result.items() if co}
        self._p[key] = result
        return result

    def mu(self, z: tuple, w: tuple) -> int:
        diff = self.length[w] - self.length[z]
        if diff <= 0 or diff % 2 == 0:
            return 0
        return self.p_poly(z, w).get((diff - 1) // 2, 0)


# -- brute-force cells ---------------------------------------------------------------


def closure_cells(module) -> List[frozenset]:
    """Cells via span closure of singletons under the edge action."""
    n = module.rank
    mats = [mat for (_, _), mat in module.x.items()]
    down: List[set] = []
    for start in range(n):
        reached = {start}
        frontier = [start]
        while frontier:
            j = frontier.pop()
            for mat in mats:
                for i in range(n):
                    if mat[i][j] != 0 and i not in reached:
                        reached.add(i)
                        frontier.append(i)
        down.append(reached)
    blocks = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        block = {j for j in down[i] if i in down[j]}
        blocks.append(frozenset(block))
        seen |= block
    return sorted(blocks, key=min)
