from fractions import Fraction

import numpy as np
import pytest

from pathsig.lie import (
    LieElement,
    NotALieElementError,
    TruncationOverflowError,
    expand_rho,
    foliage,
    lie_bracket,
    lyndon_basis,
    lyndon_bracket_basis,
    project_from_tensor,
    render_bracket,
    rho_tree,
    sigma_tree,
)
from pathsig.tensor import TensorElement, concat_product
from pathsig.words import generate_lyndon_words


def bracket_oracle(u, v, d, m):
    """Bracket of two basis words through the tensor algebra: expand both,
    multiply both ways, project the difference."""
    a = expand_rho(LieElement(d, m, {u: Fraction(1)}))
    b = expand_rho(LieElement(d, m, {v: Fraction(1)}))
    return project_from_tensor(concat_product(a, b) - concat_product(b, a))


def test_sigma_trees_for_two_letters():
    assert sigma_tree((1,)) == 1
    assert sigma_tree((1, 2)) == (1, 2)
    assert sigma_tree((1, 1, 2)) == (1, (1, 2))
    assert sigma_tree((1, 2, 2)) == ((1, 2), 2)
    assert sigma_tree((1, 1, 1, 2)) == (1, (1, (1, 2)))
    assert sigma_tree((1, 1, 2, 2)) == (1, ((1, 2), 2))
    assert sigma_tree((1, 2, 2, 2)) == (((1, 2), 2), 2)


def test_sigma_rejects_non_lyndon():
    with pytest.raises(ValueError):
        sigma_tree((2, 1))
    with pytest.raises(ValueError):
        sigma_tree(())


def test_render_and_foliage():
    tree = sigma_tree((1, 1, 2))
    assert render_bracket(tree) == "[1,[1,2]]"
    assert foliage(tree) == (1, 1, 2)
    assert render_bracket(3) == "3"


def test_rho_of_simple_brackets():
    assert rho_tree((1, 2)) == {(1, 2): 1, (2, 1): -1}
    assert rho_tree(1) == {(1,): 1}
    assert rho_tree((1, (1, 2))) == {(1, 1, 2): 1, (1, 2, 1): -2, (2, 1, 1): 1}


def test_basis_rho_matches_tree_rho():
    basis = lyndon_basis(3, 5)
    for w in basis.words:
        assert basis.rho_word(w) == rho_tree(sigma_tree(w))


def test_rho_is_triangular():
    # expansion of a basis word touches only permutations of it, none of
    # them lexicographically below it, with unit coefficient on the word
    for d, m in [(2, 6), (3, 5)]:
        basis = lyndon_basis(d, m)
        for w in basis.words:
            expansion = basis.rho_word(w)
            assert expansion[w] == 1
            for word, c in expansion.items():
                assert sorted(word) == sorted(w)
                assert word >= w
                assert isinstance(c, int)


def test_bracket_of_generators():
    x = LieElement.generator(2, 2, 1, 3.0)
    y = LieElement.generator(2, 2, 2, 4.0)
    assert lie_bracket(x, y) == LieElement(2, 2, {(1, 2): 12.0})


def test_bracket_truncates_silently():
    x = LieElement.generator(2, 2, 1, 1.0)
    z = LieElement(2, 2, {(1, 2): 1.0})
    assert lie_bracket(x, z).is_zero()


def test_bracket_basis_overflow_raises():
    with pytest.raises(TruncationOverflowError):
        lyndon_bracket_basis((1,), (1, 2), 2, 2)


def test_bracket_basis_rejects_bad_words():
    with pytest.raises(ValueError):
        lyndon_bracket_basis((2, 1), (1,), 2, 3)
    with pytest.raises(ValueError):
        lyndon_bracket_basis((1,), (3,), 2, 3)


def test_bracket_with_larger_left_word():
    assert lyndon_bracket_basis((2,), (1, 3), 3, 3) == LieElement(3, 3, {(1, 3, 2): -1})


def test_bracket_needing_the_rewrite():
    # [sigma(3), sigma(12)]: the right factor of 12 is the letter 2 < 3, so
    # the Jacobi rewrite fires
    expected = bracket_oracle((3,), (1, 2), 3, 3)
    assert expected == LieElement(3, 3, {(1, 2, 3): -1, (1, 3, 2): -1})
    assert lyndon_bracket_basis((3,), (1, 2), 3, 3) == expected


def test_bracket_matches_tensor_oracle_exhaustively():
    for d in (2, 3):
        m = 4
        words = [w for level in generate_lyndon_words(d, m) for w in level]
        for u in words:
            for v in words:
                if len(u) + len(v) > m:
                    continue
                assert lyndon_bracket_basis(u, v, d, m) == bracket_oracle(u, v, d, m)


def test_bracket_antisymmetry():
    basis = lyndon_basis(2, 5)
    for u in basis.words:
        for v in basis.words:
            if len(u) + len(v) > 5:
                continue
            forward = basis.bracket_entries(u, v)
            backward = basis.bracket_entries(v, u)
            assert backward == tuple((w, -c) for w, c in forward)


def test_float_bracket_matches_exact():
    rng = np.random.default_rng(11)
    basis = lyndon_basis(3, 4)
    for _ in range(5):
        xs = {w: Fraction(int(rng.integers(-3, 4))) for w in basis.words}
        ys = {w: Fraction(int(rng.integers(-3, 4))) for w in basis.words}
        exact = lie_bracket(LieElement(3, 4, xs), LieElement(3, 4, ys))
        approx = lie_bracket(
            LieElement(3, 4, {w: float(c) for w, c in xs.items()}),
            LieElement(3, 4, {w: float(c) for w, c in ys.items()}),
        )
        for w in basis.words:
            assert approx.coeffs.get(w, 0.0) == pytest.approx(float(exact.coeffs.get(w, 0)), abs=1e-9)


def test_expand_project_roundtrip_exact():
    rng = np.random.default_rng(12)
    basis = lyndon_basis(3, 4)
    coeffs = {w: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for w in basis.words}
    x = LieElement(3, 4, coeffs)
    assert project_from_tensor(expand_rho(x)) == x


def test_expand_project_roundtrip_float():
    rng = np.random.default_rng(13)
    basis = lyndon_basis(2, 6)
    x = LieElement(2, 6, {w: float(v) for w, v in zip(basis.words, rng.uniform(-1, 1, len(basis.words)))})
    back = project_from_tensor(expand_rho(x))
    assert np.allclose(back.to_vector(), x.to_vector(), atol=1e-12)


def test_project_rejects_non_lie_tensor():
    t = TensorElement.from_terms(2, 2, {(1, 1): Fraction(1)}, exact=True)
    with pytest.raises(NotALieElementError) as err:
        project_from_tensor(t)
    assert err.value.residual_norm == pytest.approx(1.0)

    drifted = TensorElement.from_terms(2, 2, {(1, 2): 1.0, (2, 1): -1.0 + 1e-4})
    with pytest.raises(NotALieElementError):
        project_from_tensor(drifted)


def test_project_tolerates_float_noise():
    noisy = TensorElement.from_terms(2, 2, {(1, 2): 1.0, (2, 1): -1.0 + 1e-10})
    x = project_from_tensor(noisy)
    assert x.coeffs[(1, 2)] == pytest.approx(1.0)


def test_project_rejects_nonzero_epsilon():
    with pytest.raises(ValueError):
        project_from_tensor(TensorElement.unit(2, 2, exact=True))


def test_element_validation_and_arithmetic():
    with pytest.raises(ValueError):
        LieElement(2, 3, {(2, 1): 1})
    with pytest.raises(ValueError):
        LieElement(2, 3, {(1, 2, 2, 2): 1})
    with pytest.raises(ValueError):
        LieElement(2, 3, {(3,): 1})
    x = LieElement(2, 3, {(1,): 2.0, (1, 2): -1.0})
    y = LieElement(2, 3, {(1,): -2.0})
    assert (x + y).coeffs == {(1, 2): -1.0}
    assert (x - x).is_zero()
    assert (x * 2.0).coeffs[(1,)] == 4.0
    assert x.min_level() == 1
    assert LieElement.zero(2, 3).min_level() is None
    with pytest.raises(ValueError):
        x + LieElement.zero(2, 2)
    with pytest.raises(TypeError):
        x * y


def test_vector_roundtrip():
    basis = lyndon_basis(2, 4)
    values = np.arange(1.0, len(basis.words) + 1)
    x = LieElement.from_vector(2, 4, values)
    assert np.array_equal(x.to_vector(), values)
    with pytest.raises(ValueError):
        LieElement.from_vector(2, 4, values[:-1])


def test_basis_canonical_order():
    basis = lyndon_basis(2, 4)
    assert basis.words == [(1,), (2,), (1, 2), (1, 1, 2), (1, 2, 2), (1, 1, 1, 2), (1, 1, 2, 2), (1, 2, 2, 2)]
    assert [basis.index[w] for w in basis.words] == list(range(8))
