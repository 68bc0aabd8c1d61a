import pytest

from wgraphs.canon import (
    CanonicalisationError,
    canonicalise_shadow,
    check_rho,
    iota_expand,
    pi_recursion,
    rho_table,
    RhoTable,
)
from wgraphs.laurent import LaurentPoly, v
from wgraphs.matrix import LMat
from wgraphs.wgraph import sign_module, trivial_module


class TestIotaExpand:
    def test_identity(self, systems):
        a2 = systems["a2"]
        assert iota_expand(a2.identity) == {a2.identity: LaurentPoly.one()}

    def test_generator(self, systems):
        a2 = systems["a2"]
        s = a2.generator(0)
        assert iota_expand(s) == {
            s: LaurentPoly.one(),
            a2.identity: LaurentPoly({-1: 1, 1: -1}),
        }

    def test_weighted_generator(self, systems):
        b2u = systems["b2_unequal"]
        t = b2u.generator(1)
        assert iota_expand(t)[b2u.identity] == LaurentPoly({-2: 1, 2: -1})

    def test_st_product(self, systems):
        a2 = systems["a2"]
        s, t = a2.generator(0), a2.generator(1)
        expansion = iota_expand(s * t)
        delta = LaurentPoly({-1: 1, 1: -1})
        assert expansion[s * t] == LaurentPoly.one()
        assert expansion[s] == delta
        assert expansion[t] == delta
        assert expansion[a2.identity] == delta * delta

    def test_top_coefficient_always_one(self, systems):
        for z in systems["b2"].elements():
            assert iota_expand(z)[z] == LaurentPoly.one()

    def test_support_below_in_bruhat_order(self, systems):
        system = systems["a3"]
        for z in system.elements():
            for w in iota_expand(z):
                assert system.bruhat_leq(w, z)


class TestRhoTable:
    def test_diagonal_identity(self, systems):
        rho = rho_table({0}, sign_module(systems["a2"], {0}))
        for z in rho.reps:
            assert rho.at(z, z) == LMat.identity(1)

    def test_empty_j_scalar_r(self, systems):
        a2 = systems["a2"]
        rho = rho_table(frozenset(), trivial_module(a2, frozenset()))
        for z in rho.reps:
            expansion = iota_expand(z)
            for x in rho.reps:
                expected = expansion.get(x, LaurentPoly.zero())
                assert rho.at(x, z) == LMat([[expected]])

    def test_a1_value(self):
        from wgraphs.coxeter import CoxeterSystem

        a1 = CoxeterSystem(((1,),))
        rho = rho_table(frozenset(), trivial_module(a1, frozenset()))
        assert rho.at(a1.identity, a1.generator(0)) == LMat([[LaurentPoly({-1: 1, 1: -1})]])

    @pytest.mark.parametrize("name,j", [("a2", frozenset()), ("a2", frozenset({0})),
                                        ("b2", frozenset({1})), ("i2_5", frozenset())])
    def test_composition_identity(self, systems, name, j):
        module = sign_module(systems[name], j)
        assert check_rho(rho_table(j, module)).ok


class TestPiRecursion:
    def test_diagonal(self, systems):
        pi = pi_recursion(rho_table({0}, sign_module(systems["a2"], {0})))
        for z in pi.reps:
            assert pi.at(z, z) == LMat.identity(1)

    def test_a1_value(self):
        from wgraphs.coxeter import CoxeterSystem

        a1 = CoxeterSystem(((1,),))
        pi = pi_recursion(rho_table(frozenset(), trivial_module(a1, frozenset())))
        assert pi.at(a1.identity, a1.generator(0)) == LMat([[v(1, -1)]])

    def test_strictly_positive_above_diagonal(self, systems):
        pi = pi_recursion(rho_table(frozenset(), trivial_module(systems["b2"], frozenset())))
        for (x, z), mat in pi.entries.items():
            if x != z:
                neg, zero, _ = mat.split()
                assert neg.is_zero() and zero.is_zero()

    def test_involution_block_identity(self, systems):
        """R * bar(C) = C for the assembled block matrices."""
        a2 = systems["a2"]
        module = trivial_module(a2, frozenset())
        rho = rho_table(frozenset(), module)
        pi = pi_recursion(rho)
        zero = LMat.zeros(1)
        r_block = LMat.from_blocks(
            [[rho.entries.get((x, z), zero) for z in rho.reps] for x in rho.reps]
        )
        c_block = LMat.from_blocks(
            [[pi.entries.get((x, z), zero) for z in pi.reps] for x in pi.reps]
        )
        assert r_block @ c_block.bar() == c_block

    @staticmethod
    def _fixed_point_holds(system, rho, entries):
        for (x, z) in entries:
            total = LMat.zeros(1)
            for y in rho.reps:
                if system.bruhat_leq(x, y) and system.bruhat_leq(y, z):
                    if (y, z) in entries:
                        total = total + rho.at(x, y) @ entries[(y, z)].bar()
            if total != entries[(x, z)]:
                return False
        return True

    def test_uniqueness_by_mutation(self, systems):
        """Bar-symmetric perturbations violate the defining constraints.

        At a non-minimal entry the fixed-point equation itself breaks (the
        perturbation leaks into lower pairs); at any entry the strict
        positivity requirement breaks, since a nonzero bar-symmetric
        element always has non-positive support.
        """
        a2 = systems["a2"]
        rho = rho_table(frozenset(), trivial_module(a2, frozenset()))
        pi = pi_recursion(rho)
        bump = LMat([[LaurentPoly({-1: 1, 0: 1, 1: 1})]])
        assert self._fixed_point_holds(a2, rho, dict(pi.entries))
        for x0 in (a2.generator(0), a2.generator(1), a2.element((0, 1))):
            z0 = a2.element((0, 1, 0))
            mutated = dict(pi.entries)
            mutated[(x0, z0)] = mutated[(x0, z0)] + bump
            assert not self._fixed_point_holds(a2, rho, mutated)
        for (x0, z0) in pi.entries:
            if x0 == z0:
                continue
            mutated = dict(pi.entries)
            mutated[(x0, z0)] = mutated[(x0, z0)] + bump
            equation = self._fixed_point_holds(a2, rho, mutated)
            neg, zero, _ = mutated[(x0, z0)].split()
            positive = neg.is_zero() and zero.is_zero()
            assert not (equation and positive)

    def test_order_ideal_restriction(self, systems):
        """The recursion on a principal ideal reproduces the restricted table."""
        a2 = systems["a2"]
        module = trivial_module(a2, frozenset())
        rho = rho_table(frozenset(), module)
        full = pi_recursion(rho)
        for top in a2.elements():
            ideal = [y for y in rho.reps if a2.bruhat_leq(y, top)]
            sub_entries = {
                key: mat for key, mat in rho.entries.items()
                if key[0] in ideal and key[1] in ideal
            }
            sub_rho = RhoTable(a2, rho.gens, rho.ambient, module, tuple(ideal), sub_entries)
            sub_pi = pi_recursion(sub_rho)
            expected = {
                key: mat for key, mat in full.entries.items()
                if key[0] in ideal and key[1] in ideal
            }
            assert sub_pi.entries == expected

    def test_bad_rho_rejected(self, systems):
        a2 = systems["a2"]
        module = trivial_module(a2, frozenset())
        rho = rho_table(frozenset(), module)
        broken = dict(rho.entries)
        s = a2.generator(0)
        broken[(a2.identity, s)] = LMat([[v(1)]])  # not antisymmetric
        bad = RhoTable(a2, rho.gens, rho.ambient, module, rho.reps, broken)
        with pytest.raises(CanonicalisationError):
            pi_recursion(bad)


class TestGenericEngine:
    def test_two_element_poset(self):
        rho = {
            ("a", "a"): LMat.identity(1),
            ("b", "b"): LMat.identity(1),
            ("a", "b"): LMat([[LaurentPoly({1: 1, -1: -1})]]),
        }
        pi = canonicalise_shadow(
            ["a", "b"],
            lambda x, y: x == y or (x, y) == ("a", "b"),
            lambda x, y: rho.get((x, y), LMat.zeros(1)),
            1,
        )
        assert pi[("a", "b")] == LMat([[v(1)]])

    def test_rejects_non_involution(self):
        rho = {
            ("a", "a"): LMat.identity(1),
            ("b", "b"): LMat.identity(1),
            ("a", "b"): LMat([[v(1)]]),
        }
        with pytest.raises(CanonicalisationError):
            canonicalise_shadow(
                ["a", "b"],
                lambda x, y: x == y or (x, y) == ("a", "b"),
                lambda x, y: rho.get((x, y), LMat.zeros(1)),
                1,
            )
