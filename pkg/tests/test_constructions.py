import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (random_assoc, random_bihom, random_bihom_fd, random_lie_conformal,
                     random_lie_conformal_with_auts, random_supercommutative)

from bihomconf.algebra import DMap, check_algebra, check_associative
from bihomconf.constructions import (HypothesisError, SuperAlgebraFD, abelianization,
                                     composition_twist, cur, cur_associative, direct_sum,
                                     from_associative, power_twist, semidirect, tensor_superalgebra,
                                     yau_twist)
from bihomconf.kernel.poly import ONE, ZERO
from bihomconf.library import (dual_numbers, ex25, gl11, grassmann2, matrix_superalgebra, sl2,
                               twist_fd, virasoro_ns)
from bihomconf.representations import adjoint_module, trivial_module

seeds = st.integers(0, 100_000)
fast = settings(max_examples=10, deadline=None)


@fast
@given(seeds)
def test_cur_closure(seed):
    g = random_bihom_fd(random.Random(seed))
    assert g.check_bihom_lie().ok
    assert check_algebra(cur(g)).ok


@fast
@given(seeds)
def test_tensor_closure(seed):
    rng = random.Random(seed)
    R, B = random_lie_conformal(rng), random_supercommutative(rng)
    assert B.check_commutative_associative().ok
    assert check_algebra(tensor_superalgebra(R, B)).ok


@fast
@given(seeds)
def test_yau_twist_closure(seed):
    R, a, b = random_lie_conformal_with_auts(random.Random(seed))
    T = yau_twist(R, a, b)
    assert check_algebra(T).ok
    assert T.alpha == a and T.beta == b


@fast
@given(seeds, st.integers(0, 2))
def test_composition_twist_closure(seed, k):
    A = random_bihom(random.Random(seed))
    B = power_twist(A, k)
    assert check_algebra(B).ok
    assert B.alpha == A.alpha.power(k + 1)


@fast
@given(seeds)
def test_direct_sum_closure(seed):
    rng = random.Random(seed)
    A, B = random_bihom(rng), random_bihom(rng)
    S = direct_sum(A, B)
    assert check_algebra(S).ok
    assert S.rank == A.rank + B.rank and len(set(S.names)) == S.rank


@fast
@given(seeds)
def test_from_associative_closure(seed):
    A = random_assoc(random.Random(seed))
    assert check_associative(A).ok
    assert check_algebra(from_associative(A)).ok


@fast
@given(seeds)
def test_semidirect_closure(seed):
    A = random_bihom(random.Random(seed))
    for M in (adjoint_module(A), trivial_module(A, ("m",), ("odd",), DMap.diagonal([2]), DMap.diagonal([-1]))):
        assert check_algebra(semidirect(A, M)).ok


def test_cur_gl11_brackets():
    A = cur(gl11())
    e12, e21 = A.gen("E12"), A.gen("E21")
    assert A.render(A.bracket(e12, e21)) == "E11+E22"
    assert A.render(A.bracket(A.gen("E11"), e12)) == "E12"


def test_commutator_of_matrix_current_is_gl():
    # with identity maps the commutator construction is the plain supercommutator
    A = from_associative(cur_associative(matrix_superalgebra(1, 1)))
    assert A.equals(cur(gl11()))


def test_power_twist_zero_is_identity():
    A = ex25()
    assert power_twist(A, 0).equals(A)
    with pytest.raises(ValueError):
        power_twist(A, -1)


def test_tensor_with_dual_numbers():
    R = virasoro_ns()
    T = tensor_superalgebra(R, dual_numbers())
    assert T.names == ("L_one", "L_eps", "E_one", "E_eps")
    # [(L eps)_x (L eps)] = [L_x L] eps^2 = 0
    assert all(c.is_zero() for c in T.bracket(T.gen("L_eps"), T.gen("L_eps")))
    assert T.render(T.bracket(T.gen("L_one"), T.gen("L_eps"))) == "(d+2*x1)*L_eps"
    assert check_algebra(tensor_superalgebra(R, grassmann2())).ok


def test_abelianization():
    A = abelianization(ex25())
    assert check_algebra(A).ok
    assert all(c.is_zero() for row in A.table for v in row for c in v)


def test_rejects_non_lie_inputs():
    with pytest.raises(HypothesisError):
        yau_twist(ex25(), DMap.identity(3), DMap.identity(3))
    # E -> 2E is an automorphism here since [E_x E] = 0
    R = virasoro_ns()
    assert check_algebra(yau_twist(R, DMap.diagonal([1, 2]), DMap.identity(2))).ok
    with pytest.raises(HypothesisError):
        yau_twist(cur(sl2()), DMap.diagonal([2, 1, 1]), DMap.identity(3))
    with pytest.raises(HypothesisError):
        tensor_superalgebra(virasoro_ns(), gl11())
    with pytest.raises(HypothesisError):
        cur(SuperAlgebraFD(("a",), ("even",), {(0, 0): [1]}))


def test_rejects_non_associative():
    # twisting Mat(1|1) by a non-morphism breaks BiHom-associativity
    t = twist_fd(matrix_superalgebra(1, 1), DMap.diagonal([1, 2, 1, 1]), DMap.identity(4))
    with pytest.raises(HypothesisError):
        from_associative(cur_associative(t))


def test_semidirect_hypotheses():
    A = ex25()
    with pytest.raises(HypothesisError):
        semidirect(A, adjoint_module(virasoro_ns()))
    M = trivial_module(A, ("m",), ("even",), DMap.diagonal([1]), DMap([(ZERO,)]))
    with pytest.raises(HypothesisError):
        semidirect(A, M)


def test_composition_twist_needs_commuting_morphisms():
    A = ex25()
    with pytest.raises(HypothesisError):
        composition_twist(A, DMap.diagonal([1, 2, 1]), DMap.identity(3))


def test_semidirect_brackets():
    A = ex25()
    S = semidirect(A, adjoint_module(A))
    assert S.names == ("e1_1", "e2_1", "e3_1", "e1_2", "e2_2", "e3_2")
    # algebra acting on the module copy: [e2_x e3'] = e1'
    assert S.bracket(S.gen(1), S.gen(5)) == (ZERO,) * 3 + (ONE, ZERO, ZERO)
