import pytest
from hypothesis import given

from dilatekit import Mat
from dilatekit.matrix import span_rank, unit_vec
from dilatekit.wold import (
    EXTENDED,
    STRICT,
    NotInjective,
    WoldDecomposition,
    eventual_image,
    verify_wold,
    wold_decompose,
)

from strategies import matrices

NILPOTENT2 = Mat([[0, 1], [0, 0]])


def test_eventual_image_nilpotent():
    basis, index = eventual_image(NILPOTENT2)
    assert basis == []
    assert index == 2


def test_eventual_image_invertible():
    basis, index = eventual_image(Mat([[2, 1], [1, 1]]))
    assert basis == [unit_vec(2, 0), unit_vec(2, 1)]
    assert index == 0


def test_eventual_image_projection_like():
    basis, index = eventual_image(Mat([[1, 0], [0, 0]]))
    assert basis == [unit_vec(2, 0)]
    assert index == 1


def test_strict_rejects_non_injective():
    with pytest.raises(NotInjective) as exc:
        wold_decompose(NILPOTENT2, STRICT)
    witness = exc.value.witness
    assert witness == unit_vec(2, 0)
    assert all(x == 0 for x in NILPOTENT2.apply(witness))


def test_strict_injective_is_trivial():
    w = wold_decompose(Mat([[2, 1], [1, 1]]), STRICT)
    assert w.Vs_basis == []
    assert len(w.Vb_basis) == 2
    assert w.certificates.passed
    assert w.mode == STRICT


def test_extended_nilpotent():
    w = wold_decompose(NILPOTENT2, EXTENDED)
    assert w.Vb_basis == []
    assert w.Vs_basis == [unit_vec(2, 0), unit_vec(2, 1)]
    assert w.stabilization_index == 2
    assert w.certificates.passed


def test_partial_collapse():
    w = wold_decompose(Mat([[1, 0], [0, 0]]), EXTENDED)
    assert w.Vb_basis == [unit_vec(2, 0)]
    assert w.Vs_basis == [unit_vec(2, 1)]
    assert w.certificates.passed


def test_hand_built_bad_complement_fails_direct_sum():
    T = Mat([[1, 0], [0, 0]])
    w = wold_decompose(T, EXTENDED)
    corrupted = WoldDecomposition(
        T=T,
        Vb_basis=w.Vb_basis,
        Vs_basis=list(w.Vb_basis),  # complement inside the bijective part
        stabilization_index=w.stabilization_index,
        mode=EXTENDED,
        certificates=w.certificates,
    )
    rep = verify_wold(corrupted)
    assert not rep.passed
    failed = {c.name for c in rep.failed_checks()}
    assert any("direct sum" in name for name in failed)
    for check in rep.failed_checks():
        assert check.witness is not None


def test_mode_validation():
    with pytest.raises(ValueError):
        wold_decompose(Mat([[1]]), "loose")


@given(matrices(max_dim=5))
def test_image_chain_monotone_and_certified(T):
    basis, index = eventual_image(T)
    assert index <= T.rows
    w = wold_decompose(T, EXTENDED)
    assert w.certificates.passed
    assert span_rank(list(w.Vb_basis) + list(w.Vs_basis)) == T.rows
    # T is surjective from the eventual image onto itself
    images = [T.apply(v) for v in w.Vb_basis]
    assert span_rank(images) == len(w.Vb_basis)


@given(matrices(max_dim=4))
def test_chain_dimensions_decrease(T):
    dims = []
    power = Mat.identity(T.rows)
    for _ in range(T.rows + 1):
        dims.append(power.rank())
        power = T * power
    assert all(a >= b for a, b in zip(dims, dims[1:]))
    basis, index = eventual_image(T)
    assert len(basis) == dims[min(index, len(dims) - 1)]


def test_nilpotent_jordan_chain_index_equals_dimension():
    for d in (2, 3, 4, 5):
        block = Mat([[1 if j == i + 1 else 0 for j in range(d)] for i in range(d)])
        w = wold_decompose(block, EXTENDED)
        assert w.Vb_basis == []
        assert w.stabilization_index == d
