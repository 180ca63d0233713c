from __future__ import annotations

from fractions import Fraction as F

import pytest

import uqbethe.weightfn as wf
from uqbethe.combinat import TypedVariables, coeff_eta
from uqbethe.errors import LengthError, TruncationError, VariantError
from uqbethe.representations import (
    evaluation_module,
    parse_recipe,
    tensor_generators,
    tensor_module,
    vector_module,
    vector_rep,
    verma2_generators,
    verma2_module,
)
from uqbethe.weightfn import (
    Method,
    adjacent_transpositions,
    check_coincidence,
    check_coproduct,
    check_qsymmetry,
    coincidence_sides,
    compute_weight,
    coproduct_sides,
    direct_modified_weight,
    first_rows,
    modified_from_plain,
    permute_positions,
    plain_from_modified,
    recurrence_modified_weight,
    tv_weight,
    generator_formula_weight,
)

VARIANTS = ["orig", "twist"]
THREE = "tensor(vec@2,vec@-5/3,vec@7/2)"
TWO = "tensor(vec@2,vec@-5/3)"


def sample(ctx, module, n, salt=11):
    return TypedVariables.sample(ctx, n, module.forbidden, salt=salt)


@pytest.mark.parametrize("variant", VARIANTS)
def test_no_excitations_gives_singular_vector(ctx, variant):
    m = parse_recipe(ctx, TWO, 3, variant)
    v = TypedVariables(3, ((), ()))
    methods = [Method.DIRECT, Method.RECURRENCE] + ([Method.TV] if variant == "twist" else [])
    for method in methods:
        assert compute_weight(m, v, method).vector == m.singular_vector


def test_single_excitation_is_one_entry(ctx):
    m = vector_module(ctx, 2, "twist", F(2))
    v = sample(ctx, m, (1,))
    t = v.t(1, 1)
    expected = m.l_entry("+", 1, 2, t).apply(m.singular_vector)
    assert direct_modified_weight(m, v).vector == expected
    assert tv_weight(m, v).vector == expected
    assert any(expected)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("recipe,N,n", [
    (THREE, 2, (1,)), (THREE, 2, (2,)), (THREE, 2, (3,)),
    (TWO, 3, (1, 0)), (TWO, 3, (1, 1)), (THREE, 3, (2, 1)), (TWO, 3, (2, 2)), (THREE, 3, (3, 2)),
    (TWO, 4, (1, 1, 1)), (TWO, 4, (2, 1, 1)),
])
def test_direct_equals_recurrence(ctx, variant, recipe, N, n):
    m = parse_recipe(ctx, recipe, N, variant)
    v = sample(ctx, m, n)
    d = direct_modified_weight(m, v).vector
    assert any(d)
    assert d == recurrence_modified_weight(m, v).vector


@pytest.mark.parametrize("variant", VARIANTS)
def test_direct_equals_recurrence_on_verma(ctx, variant):
    m = verma2_module(ctx, 3, -2, 4, F(5, 2), variant)
    for n in (1, 2, 3, 4):
        v = sample(ctx, m, (n,))
        d = direct_modified_weight(m, v).vector
        assert any(d)
        assert d == recurrence_modified_weight(m, v).vector


def test_first_rows():
    rows = first_rows((2, 1))
    assert all(r[-1] == 1 and r[0] <= 2 for r in rows)
    assert rows == sorted(set(rows))


@pytest.mark.parametrize("recipe,N,n", [(TWO, 2, (1,)), (TWO, 3, (1, 1)), (THREE, 3, (2, 1)),
                                        (TWO, 3, (2, 2)), ("tensor(vec@2,vec@-5/3,vec@7/2,vec@3)", 2, (4,))])
def test_coincidence(ctx, recipe, N, n):
    m = parse_recipe(ctx, recipe, N, "twist")
    v = sample(ctx, m, n)
    lhs, rhs = coincidence_sides(m, v)
    assert any(lhs)
    assert lhs == rhs


def test_trace_refuses_original(ctx):
    m = parse_recipe(ctx, TWO, 3, "orig")
    with pytest.raises(VariantError):
        tv_weight(m, sample(ctx, m, (1, 1)))


def test_trace_with_original_r_matrix(ctx):
    m = parse_recipe(ctx, TWO, 3, "orig")
    v = sample(ctx, m, (2, 1))
    traced = tv_weight(m, v, allow_original=True).vector
    eta = coeff_eta(ctx, v)
    assert direct_modified_weight(m, v).vector == tuple(eta * x for x in traced)


def test_plain_modified_roundtrip(ctx):
    m = parse_recipe(ctx, THREE, 3, "twist")
    v = sample(ctx, m, (2, 1))
    w = direct_modified_weight(m, v).vector
    assert modified_from_plain(m, v, plain_from_modified(m, v, w)) == w
    empty = TypedVariables(3, ((), ()))
    assert plain_from_modified(m, empty, w) == w


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("N,n", [(2, (1,)), (2, (2,)), (3, (1, 1)), (3, (2, 1)), (3, (0, 0))])
def test_coproduct(ctx, variant, N, n):
    a = vector_module(ctx, N, variant, F(2))
    b = vector_module(ctx, N, variant, F(-5, 3))
    t = tensor_module(ctx, [a, b])
    v = sample(ctx, t, n)
    lhs, rhs = coproduct_sides(ctx, a, b, v, tensor=t)
    assert lhs == rhs
    assert any(lhs)


@pytest.mark.parametrize("variant", VARIANTS)
def test_coproduct_associativity(ctx, variant):
    a, b, c = (vector_module(ctx, 3, variant, z) for z in (F(2), F(-5, 3), F(7, 2)))
    full = tensor_module(ctx, [a, b, c])
    v = sample(ctx, full, (1, 1))
    left = coproduct_sides(ctx, tensor_module(ctx, [a, b]), c, v, tensor=full)
    right = coproduct_sides(ctx, a, tensor_module(ctx, [b, c]), v, tensor=full)
    assert left[0] == left[1] == right[1]


def test_coproduct_with_verma(ctx):
    a = verma2_module(ctx, 3, -2, 4, F(5, 2), "twist")
    b = vector_module(ctx, 2, "twist", F(-5, 3))
    v = sample(ctx, tensor_module(ctx, [a, b]), (2,))
    assert check_coproduct(ctx, a, b, v)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("N,n", [(2, (2,)), (2, (3,)), (3, (2, 1)), (3, (2, 2))])
def test_qsymmetry_adjacent(ctx, variant, N, n):
    m = parse_recipe(ctx, THREE, N, variant)
    v = sample(ctx, m, n)
    swaps = adjacent_transpositions(v)
    assert swaps
    for sigma in swaps:
        assert check_qsymmetry(m, v, sigma)


def test_qsymmetry_identity_and_cycles(ctx):
    m = parse_recipe(ctx, THREE, 2, "twist")
    v = sample(ctx, m, (3,))
    assert check_qsymmetry(m, v, [0, 1, 2])
    for sigma in ([1, 2, 0], [2, 0, 1], [2, 1, 0]):
        assert check_qsymmetry(m, v, sigma)


def test_permute_positions():
    v = TypedVariables(3, ((F(1), F(2)), (F(3),)))
    assert permute_positions(v, [1, 0, 2]).values == ((F(2), F(1)), (F(3),))
    with pytest.raises(ValueError):
        permute_positions(v, [2, 1, 0])
    with pytest.raises(ValueError):
        permute_positions(v, [0, 0, 1])


@pytest.mark.parametrize("variant", VARIANTS)
def test_generator_formula_vector(ctx, variant):
    g = vector_rep(ctx, 2, variant)
    z = F(5, 2)
    m = evaluation_module(ctx, g, z)
    v = sample(ctx, m, (1,))
    assert generator_formula_weight(ctx, g, z, v, module=m).vector == direct_modified_weight(m, v).vector


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("lam", [(3, -2), (-1, 2)])
def test_generator_formula_verma(ctx, variant, lam):
    z = F(5, 2)
    g = verma2_generators(ctx, lam[0], lam[1], 4, variant)
    m = verma2_module(ctx, lam[0], lam[1], 4, z, variant)
    for n in (1, 2, 3):
        v = sample(ctx, m, (n,))
        lhs = generator_formula_weight(ctx, g, z, v, module=m).vector
        assert any(lhs)
        assert lhs == direct_modified_weight(m, v).vector


@pytest.mark.parametrize("variant", VARIANTS)
def test_generator_formula_rank_three(ctx, variant):
    g1 = vector_rep(ctx, 3, variant)
    g = tensor_generators(ctx, tensor_generators(ctx, g1, g1), g1)
    z = F(5, 2)
    m = evaluation_module(ctx, g, z)
    for n in ((1, 1), (2, 1), (2, 2), (3, 2)):
        v = sample(ctx, m, n)
        lhs = generator_formula_weight(ctx, g, z, v, module=m).vector
        assert any(lhs)
        assert lhs == direct_modified_weight(m, v).vector


def test_verma_truncation_one_matches_vector(ctx):
    for variant in VARIANTS:
        vm = verma2_module(ctx, 1, 0, 1, F(5, 2), variant)
        vv = vector_module(ctx, 2, variant, F(5, 2))
        v = sample(ctx, vm, (1,))
        assert direct_modified_weight(vm, v).vector == direct_modified_weight(vv, v).vector


def test_truncation_enforced(ctx):
    m = verma2_module(ctx, 3, -2, 2, F(5, 2), "twist")
    with pytest.raises(TruncationError):
        direct_modified_weight(m, sample(ctx, m, (3,)))


def test_rank_mismatch(ctx):
    m = vector_module(ctx, 3, "twist", F(2))
    with pytest.raises(LengthError):
        direct_modified_weight(m, TypedVariables(2, ((F(1),),)))


def test_method_parse():
    assert Method.parse("tvtrace") is Method.TV
    assert Method.parse("rec") is Method.RECURRENCE
    with pytest.raises(ValueError):
        Method.parse("nope")


def test_weight_is_deterministic(ctx):
    m = parse_recipe(ctx, THREE, 3, "twist")
    v = sample(ctx, m, (2, 1))
    a = direct_modified_weight(m, v)
    b = direct_modified_weight(parse_recipe(ctx, THREE, 3, "twist"), v)
    assert a.vector == b.vector and a.terms == b.terms


def test_mutated_prefactor_breaks_agreement(ctx, monkeypatch):
    m = parse_recipe(ctx, THREE, 3, "twist")
    v = sample(ctx, m, (2, 1))
    good = recurrence_modified_weight(m, v).vector
    real = wf.admissible_prefactor

    def skewed(c, s, n_bar):
        return real(c, s, n_bar) * (2 if s.s(2, 1) else 1)

    monkeypatch.setattr(wf, "admissible_prefactor", skewed)
    assert direct_modified_weight(m, v).vector != good


def test_mutated_r_matrix_breaks_coincidence(ctx, monkeypatch):
    m = parse_recipe(ctx, TWO, 3, "twist")
    v = sample(ctx, m, (1, 1))
    assert check_coincidence(m, v)
    real = wf.build_r

    def broken(c, variant, N, u, w):
        return real(c, variant, N, u, w).scale(2)

    monkeypatch.setattr(wf, "build_r", broken)
    assert not check_coincidence(m, v)
