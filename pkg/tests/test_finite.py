import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from dilatekit import Mat
from dilatekit.finite import (
    INCONCLUSIVE_VERDICT,
    NOT_SIMILAR,
    SCHUR_CLASSES,
    PreconditionFailed,
    halmos_build,
    ndilation_build,
    ndilation_verify,
    nonsimilar_pair,
    schur_build,
)
from strategies import matrices


def random_mat(rng, dim, bound=9):
    return Mat(
        [
            [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(dim)]
            for _ in range(dim)
        ]
    )


# ----------------------------------------------------------------------
# two-block dilation


def test_halmos_scalar():
    hd = halmos_build(Mat([[2]]))
    assert hd.U == Mat([[2, 1], [1, 0]])
    assert hd.U_inv == Mat([[0, 1], [1, -2]])
    assert hd.U * hd.U_inv == Mat.identity(2)


def test_halmos_zero_map_is_involution():
    hd = halmos_build(Mat.zeros(3, 3))
    assert hd.U == hd.U_inv
    assert hd.U * hd.U == Mat.identity(6)


def test_halmos_matches_dense_oracle():
    rng = random.Random(11)
    for _ in range(10):
        hd = halmos_build(random_mat(rng, 3))
        assert hd.U_inv == hd.U.inverse()


@given(matrices(max_dim=4))
def test_halmos_closed_form_always_inverts(T):
    hd = halmos_build(T)
    assert hd.U * hd.U_inv == Mat.identity(2 * T.rows)
    assert hd.U_inv * hd.U == Mat.identity(2 * T.rows)


# ----------------------------------------------------------------------
# Schur families


def test_class_i_scalar_instance():
    fam = schur_build("i", Mat([[2]]), Mat([[1]]), Mat([[1]]), Mat([[1]]))
    assert fam.schur == Mat([["1/2"]])
    oracle = Mat([[2, 1], [1, 1]]).inverse()
    assert oracle == Mat([[1, -1], [-1, 2]])
    assert fam.U_inv == oracle
    assert fam.U_inv[0, 0] == 1


def test_class_i_truncated_top_left_is_wrong():
    # Dropping the trailing C T^-1 factor from the top-left entry yields
    # 3/2 on the scalar instance; the true entry is 1. The closed form in
    # the package keeps the full sandwich, and only that version inverts U.
    T, B, C, D = (Mat([[v]]) for v in (2, 1, 1, 1))
    Ti = T.inverse()
    Si = (D - C * Ti * B).inverse()
    truncated = Ti + Ti * B * Si
    assert truncated[0, 0] == Fraction(3, 2)
    full = Ti + Ti * B * Si * C * Ti
    assert full[0, 0] == 1
    fam = schur_build("i", T, B, C, D)
    assert fam.U_inv[0, 0] == full[0, 0]
    broken = Mat.block([[truncated, -(Ti * B * Si)], [-(Si * C * Ti), Si]])
    assert fam.U * broken != Mat.identity(2)


def test_class_ii_zero_top_left():
    fam = schur_build("ii", Mat([[0]]), Mat([[1]]), Mat([[1]]), Mat([[1]]))
    assert fam.schur == Mat([[-1]])
    assert fam.U_inv == Mat([[0, 1], [1, 1]]).inverse()


def test_class_i_singular_top_left_rejected():
    with pytest.raises(PreconditionFailed) as exc:
        schur_build("i", Mat([[0]]), Mat([[1]]), Mat([[1]]), Mat([[1]]))
    assert exc.value.which == "T"


def test_class_i_singular_schur_complement_rejected():
    # D - C T^-1 B = 1 - 1 = 0
    with pytest.raises(PreconditionFailed) as exc:
        schur_build("i", Mat([[1]]), Mat([[1]]), Mat([[1]]), Mat([[1]]))
    assert "D - C T^-1 B" in exc.value.which


def test_unknown_class_rejected():
    with pytest.raises(ValueError):
        schur_build("v", Mat([[1]]), Mat([[1]]), Mat([[1]]), Mat([[1]]))


@pytest.mark.parametrize("tag", SCHUR_CLASSES)
def test_all_classes_match_dense_oracle(tag):
    rng = random.Random(hash(tag) % 1000)
    built = 0
    while built < 15:
        blocks = [random_mat(rng, rng.randint(1, 3)) for _ in range(4)]
        dim = blocks[0].rows
        blocks = [b if b.rows == dim else random_mat(rng, dim) for b in blocks]
        try:
            fam = schur_build(tag, *blocks)
        except PreconditionFailed:
            continue
        assert fam.U_inv == fam.U.inverse()
        assert fam.U * fam.U_inv == Mat.identity(2 * dim)
        built += 1


# ----------------------------------------------------------------------
# non-similar pair


def test_nonsimilar_scalar_two():
    pair = nonsimilar_pair(Mat([[2]]))
    assert pair.A1 == Mat([[2, 1], [3, 2]])
    assert pair.A2 == Mat([[2, 1], [1, 0]])
    assert (pair.trace_a1, pair.trace_a2) == (4, 2)
    assert pair.verdict == NOT_SIMILAR


def test_nonsimilar_scalar_one():
    pair = nonsimilar_pair(Mat([[1]]))
    assert (pair.trace_a1, pair.trace_a2) == (2, 1)
    assert pair.verdict == NOT_SIMILAR


def test_nonsimilar_trace_zero_inconclusive():
    pair = nonsimilar_pair(Mat([[0, 1], [0, 0]]))
    assert pair.trace_a1 == pair.trace_a2 == 0
    assert pair.verdict == INCONCLUSIVE_VERDICT


@given(matrices(max_dim=4))
def test_first_dilation_always_invertible(T):
    # the commuting-block identity T^2 - (T+I)(T-I) = I guarantees this;
    # the test only asserts that the dense inverse succeeds
    pair = nonsimilar_pair(T)
    assert pair.A1 * pair.A1_inv == Mat.identity(2 * T.rows)
    if pair.verdict == NOT_SIMILAR:
        assert pair.trace_a1 != pair.trace_a2


# ----------------------------------------------------------------------
# N-step dilation


def test_ndilation_block_pattern():
    nd = ndilation_build(Mat([[2]]), 2)
    assert nd.U == Mat([[2, 0, 1], [1, 0, 0], [0, 1, 0]])
    y = nd.U.apply((1, 0, 0))
    assert y == (2, 1, 0)
    y = nd.U.apply(y)
    assert y == (4, 2, 1)
    y = nd.U.apply(y)
    assert y == (9, 4, 2)  # first coordinate 9 != 8 = T^3


def test_ndilation_zero_map():
    nd = ndilation_build(Mat.zeros(2, 2), 3)
    y = nd.embed((1, 1))
    for _ in range(3):
        y = nd.U.apply(y)
        assert nd.first_block(y) == (0, 0)


def test_ndilation_requires_positive_n():
    with pytest.raises(ValueError):
        ndilation_build(Mat([[1]]), 0)


def test_ndilation_verify_pass_then_break():
    nd = ndilation_build(Mat([[2]]), 3)
    rep = ndilation_verify(nd, [(1,)], k_max=4)
    hard = [c for c in rep.checks if c.status == "pass"]
    assert len(hard) == 3  # k = 1, 2, 3
    assert rep.passed
    assert rep.data["breaks_at_n_plus_1"] is True


def test_ndilation_identity_map_still_breaks_beyond_n():
    # running the construction settles it: U^{N+1} I x carries first block
    # (T^{N+1} + I) x, so the compression breaks at N+1 for every nonzero
    # probe, identity map included; the break is recorded, not an error
    nd = ndilation_build(Mat.identity(2), 2)
    y = nd.embed((1, 0))
    for _ in range(3):
        y = nd.U.apply(y)
    assert nd.first_block(y) == (2, 0)
    rep = ndilation_verify(nd, [(1, 0), (0, 1), (2, 3)], k_max=5)
    assert rep.passed
    assert rep.data["breaks_at_n_plus_1"] is True


def test_ndilation_verify_empty_probes_vacuous():
    nd = ndilation_build(Mat([[2]]), 2)
    rep = ndilation_verify(nd, [], k_max=3)
    assert rep.passed
    assert "vacuous" in rep.checks[0].detail


def test_ndilation_verify_kmax_too_small():
    nd = ndilation_build(Mat([[2]]), 2)
    with pytest.raises(ValueError):
        ndilation_verify(nd, [(1,)], k_max=2)


@settings(max_examples=25)
@given(matrices(max_dim=3))
def test_ndilation_compresses_up_to_n(T):
    for n in (1, 2, 3):
        nd = ndilation_build(T, n)
        assert nd.U * nd.U_inv == Mat.identity((n + 1) * T.rows)
        assert nd.U_inv * nd.U == Mat.identity((n + 1) * T.rows)
        x = tuple(Fraction(i + 1) for i in range(T.rows))
        y = nd.embed(x)
        power = Mat.identity(T.rows)
        for _ in range(n):
            y = nd.U.apply(y)
            power = T * power
        assert nd.first_block(y) == power.apply(x)
