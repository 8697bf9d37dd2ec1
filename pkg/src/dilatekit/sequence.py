"""Dilations on infinite-dimensional sequence spaces, verified on probes.

Three constructions live here:

* the two-sided construction, an invertible U on bilateral sequences
  whose powers compress to the powers of T at coordinate 0,
* the standard minimal injective dilation on one-sided sequences,
* the two-parameter variant on doubly indexed grids for a commuting pair.

The defining identities quantify over all exponents; verification is
bounded: each identity is checked exactly up to a configurable bound on
basis and caller-supplied probes, and every report states the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .finsupp import Domain, FsVec
from .matrix import Mat, NonSquareMatrix, Vec, unit_vec, vec
from .report import Report
from .seqops import (
    CoordProj0,
    DilationQuadruple,
    EmbedI,
    GridDown,
    GridRight,
    ProjAndo,
    ProjStd,
    SchafferU,
    SchafferVInv,
    SeqOp,
    ShiftRight,
    check_inverse_pair,
)
from .serialize import fsvec_to_json, vec_to_json


class NonCommuting(ValueError):
    """The two-parameter construction needs TS = ST; carries the defect."""

    def __init__(self, defect: Mat):
        super().__init__("operators do not commute; TS - ST attached as witness")
        self.defect = defect


def _require_square(T: Mat, name: str = "T") -> Mat:
    if not T.is_square():
        raise NonSquareMatrix(f"{name} must be square, got {T.rows}x{T.cols}")
    return T


def _probe_vecs(probes: Sequence[Sequence], dim: int) -> list[Vec]:
    out = []
    for p in probes:
        v = vec(p)
        if len(v) != dim:
            raise NonSquareMatrix(f"probe has length {len(v)}, expected {dim}")
        out.append(v)
    return out


# ----------------------------------------------------------------------
# two-sided construction


@dataclass(frozen=True)
class SchafferDilation:
    """Invertible two-sided operator compressing to powers of T at index 0."""

    T: Mat
    U: SeqOp
    U_inv: SeqOp
    P: SeqOp
    I: SeqOp

    @property
    def dim(self) -> int:
        return self.T.rows


def schaffer_build(T: Mat) -> SchafferDilation:
    _require_square(T)
    d = T.rows
    return SchafferDilation(
        T=T,
        U=SchafferU(T),
        U_inv=SchafferVInv(T),
        P=CoordProj0(d, Domain.BIINT),
        I=EmbedI(d, Domain.BIINT),
    )


def schaffer_verify(
    sd: SchafferDilation,
    probes: Sequence[Sequence],
    n_max: int,
    seq_probes: Optional[Sequence[FsVec]] = None,
) -> Report:
    """Inverse pair on bilateral probes plus the compression identity.

    ``probes`` are ambient vectors for the compression check; ``seq_probes``
    are bilateral elements for the inverse check (defaults to the embedded
    probes when omitted).
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    vecs = _probe_vecs(probes, sd.dim)
    if seq_probes is None:
        seq_probes = [sd.I.apply(x) for x in vecs]

    report = Report(
        suite="schaffer_verify",
        config={"n_max": n_max, "probes": len(vecs), "seq_probes": len(seq_probes)},
    )
    inverse = check_inverse_pair(sd.U, sd.U_inv, seq_probes)
    for check in inverse.checks:
        check.name = f"inverse pair: {check.name}"
        report.checks.append(check)

    witness = None
    t_power = Mat.identity(sd.dim)
    images = [sd.I.apply(x) for x in vecs]
    for n in range(1, n_max + 1):
        t_power = sd.T * t_power
        for i, x in enumerate(vecs):
            images[i] = sd.U.apply(images[i])
            expected = sd.I.apply(t_power.apply(x))
            if witness is None and sd.P.apply(images[i]) != expected:
                witness = {
                    "n": n,
                    "probe": vec_to_json(x),
                    "projected": fsvec_to_json(sd.P.apply(images[i])),
                    "expected": fsvec_to_json(expected),
                }
    report.add(
        "compression: coordinate 0 of U^n(I x) equals T^n x (1 <= n <= bound)",
        witness is None,
        bound=n_max,
        witness=witness,
    )
    return report


# ----------------------------------------------------------------------
# standard minimal injective dilation


@dataclass(frozen=True)
class StandardDilation:
    """Minimal injective dilation on one-sided sequences.

    The embedding places a vector at index 0, the forward map is the
    one-sided shift, and the projection collapses (x_n) to sum_n T^n x_n
    at index 0.
    """

    T: Mat
    quadruple: DilationQuadruple

    @property
    def dim(self) -> int:
        return self.T.rows

    @property
    def I(self) -> SeqOp:
        return self.quadruple.embed

    @property
    def U(self) -> SeqOp:
        return self.quadruple.forward

    @property
    def P(self) -> SeqOp:
        return self.quadruple.proj


def standard_build(T: Mat) -> StandardDilation:
    _require_square(T)
    d = T.rows
    quadruple = DilationQuadruple(
        domain=Domain.UNINAT,
        dim=d,
        embed=EmbedI(d, Domain.UNINAT),
        forward=ShiftRight(d),
        proj=ProjStd(T),
    )
    return StandardDilation(T=T, quadruple=quadruple)


def standard_verify(
    sd: StandardDilation,
    probes: Sequence[Sequence],
    n_max: int,
    seq_probes: Optional[Sequence[FsVec]] = None,
) -> Report:
    """All quadruple axioms plus the dilation equation up to n_max.

    Injectivity of the embedding and the shift is structural; here it is
    witnessed on the standard basis and on the supplied probes, and the
    report says so.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    vecs = _probe_vecs(probes, sd.dim)
    if seq_probes is None:
        seq_probes = [sd.I.apply(x) for x in vecs]

    report = Report(
        suite="standard_verify",
        config={"n_max": n_max, "probes": len(vecs), "seq_probes": len(seq_probes)},
    )

    witness = None
    for i in range(sd.dim):
        image = sd.I.apply(unit_vec(sd.dim, i))
        if image.is_zero():
            witness = {"basis_index": i}
            break
    report.add(
        "embedding injective (nonzero on basis; structural for index placement)",
        witness is None,
        bound=sd.dim,
        witness=witness,
    )

    witness = None
    for x in seq_probes:
        if not x.is_zero() and sd.U.apply(x).is_zero():
            witness = {"probe": fsvec_to_json(x)}
            break
    report.add(
        "forward map injective on probes (structural for the shift)",
        witness is None,
        bound=len(seq_probes),
        witness=witness,
    )

    witness = None
    for x in seq_probes:
        once = sd.P.apply(x)
        if sd.P.apply(once) != once:
            witness = {"probe": fsvec_to_json(x), "projected": fsvec_to_json(once)}
            break
    report.add("projection idempotent on probes", witness is None, bound=len(seq_probes), witness=witness)

    witness = None
    for x in seq_probes:
        image = sd.P.apply(x)
        if any(k != 0 for k in image.indices()):
            witness = {"probe": fsvec_to_json(x), "projected": fsvec_to_json(image)}
            break
    if witness is None:
        for x in vecs:
            embedded = sd.I.apply(x)
            if sd.P.apply(embedded) != embedded:
                witness = {"vector": vec_to_json(x)}
                break
    report.add(
        "range: projection lands at index 0 and fixes embedded vectors",
        witness is None,
        bound=len(seq_probes) + len(vecs),
        witness=witness,
    )

    witness = None
    t_power = Mat.identity(sd.dim)
    images = [sd.I.apply(x) for x in vecs]
    for n in range(0, n_max + 1):
        if n > 0:
            t_power = sd.T * t_power
            for i in range(len(vecs)):
                images[i] = sd.U.apply(images[i])
        for i, x in enumerate(vecs):
            expected = sd.I.apply(t_power.apply(x))
            if witness is None and sd.P.apply(images[i]) != expected:
                witness = {
                    "n": n,
                    "probe": vec_to_json(x),
                    "projected": fsvec_to_json(sd.P.apply(images[i])),
                    "expected": fsvec_to_json(expected),
                }
    report.add(
        "dilation equation I T^n x = P U^n I x (0 <= n <= bound)",
        witness is None,
        bound=n_max,
        witness=witness,
    )
    return report


def standard_minimality_check(sd: StandardDilation, n_max: int) -> Report:
    """Certify that iterated shifts of embedded vectors reach every basis element.

    For each n <= n_max and ambient basis vector e_i, U^n I e_i must equal
    the one-sided basis element supported at n with value e_i; this shows
    the span of {U^n I x} exhausts all finitely supported sequences up to
    index n_max.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    report = Report(suite="standard_minimality", config={"n_max": n_max, "dim": sd.dim})
    witness = None
    certified = 0
    for i in range(sd.dim):
        e_i = unit_vec(sd.dim, i)
        image = sd.I.apply(e_i)
        for n in range(0, n_max + 1):
            expected = FsVec.single(Domain.UNINAT, sd.dim, n, e_i)
            if witness is None and image != expected:
                witness = {
                    "n": n,
                    "basis_index": i,
                    "got": fsvec_to_json(image),
                    "expected": fsvec_to_json(expected),
                }
            certified += 1
            image = sd.U.apply(image)
    report.add(
        "minimality: U^n I e_i equals the basis element at index n",
        witness is None,
        bound=n_max,
        witness=witness,
        detail=f"{certified} basis elements certified",
    )
    return report


# ----------------------------------------------------------------------
# two-parameter variant on grids


@dataclass(frozen=True)
class AndoVariant:
    """Commuting grid shifts dilating a commuting pair (T, S).

    U shifts rows down, V shifts columns right, the embedding places a
    vector at (0,0), and the projection collapses the grid through
    T^n S^m per cell.
    """

    T: Mat
    S: Mat
    I: SeqOp
    U: SeqOp
    V: SeqOp
    P: SeqOp

    @property
    def dim(self) -> int:
        return self.T.rows

    @property
    def quadruple(self) -> DilationQuadruple:
        return DilationQuadruple(
            domain=Domain.GRID,
            dim=self.dim,
            embed=self.I,
            forward=self.U,
            proj=self.P,
            second=self.V,
        )


def ando_build(T: Mat, S: Mat) -> AndoVariant:
    _require_square(T)
    _require_square(S, "S")
    if T.rows != S.rows:
        raise NonSquareMatrix(f"T and S act on different spaces: {T.rows} vs {S.rows}")
    if T * S != S * T:
        raise NonCommuting(T * S - S * T)
    d = T.rows
    return AndoVariant(
        T=T,
        S=S,
        I=EmbedI(d, Domain.GRID),
        U=GridDown(d),
        V=GridRight(d),
        P=ProjAndo(T, S),
    )


def prepend_zero_row(x: FsVec) -> FsVec:
    """Re-index a grid element so a zero row appears at the top."""
    if x.domain is not Domain.GRID:
        raise ValueError("prepend_zero_row expects a grid element")
    return FsVec(Domain.GRID, x.dim, [((n + 1, m), v) for (n, m), v in x.items()])


def prepend_zero_column(x: FsVec) -> FsVec:
    """Re-index a grid element so a zero column appears at the left."""
    if x.domain is not Domain.GRID:
        raise ValueError("prepend_zero_column expects a grid element")
    return FsVec(Domain.GRID, x.dim, [((n, m + 1), v) for (n, m), v in x.items()])


def ando_verify(
    av: AndoVariant,
    probes: Sequence[Sequence],
    n_max: int,
    m_max: int,
    seq_probes: Optional[Sequence[FsVec]] = None,
) -> Report:
    """Two-parameter compression, both single-parameter compressions, and
    the shift-exchange identity realized by prepending zero rows/columns."""
    if n_max < 1 or m_max < 1:
        raise ValueError("bounds must be >= 1")
    vecs = _probe_vecs(probes, av.dim)
    if seq_probes is None:
        seq_probes = [av.I.apply(x) for x in vecs]

    report = Report(
        suite="ando_verify",
        config={
            "n_max": n_max,
            "m_max": m_max,
            "probes": len(vecs),
            "seq_probes": len(seq_probes),
        },
    )

    t_powers = [Mat.identity(av.dim)]
    for _ in range(n_max):
        t_powers.append(av.T * t_powers[-1])
    s_powers = [Mat.identity(av.dim)]
    for _ in range(m_max):
        s_powers.append(av.S * s_powers[-1])

    witness = None
    for x in vecs:
        embedded = av.I.apply(x)
        row_shifted = embedded
        for n in range(0, n_max + 1):
            cell = row_shifted
            for m in range(0, m_max + 1):
                expected = av.I.apply(t_powers[n].apply(s_powers[m].apply(x)))
                if witness is None and av.P.apply(cell) != expected:
                    witness = {
                        "n": n,
                        "m": m,
                        "probe": vec_to_json(x),
                        "projected": fsvec_to_json(av.P.apply(cell)),
                        "expected": fsvec_to_json(expected),
                    }
                cell = av.V.apply(cell)
            row_shifted = av.U.apply(row_shifted)
    report.add(
        "two-parameter compression I T^n S^m x = P U^n V^m I x",
        witness is None,
        bound=max(n_max, m_max),
        witness=witness,
    )

    witness = None
    for x in vecs:
        image = av.I.apply(x)
        for n in range(1, n_max + 1):
            image = av.U.apply(image)
            expected = av.I.apply(t_powers[n].apply(x))
            if witness is None and av.P.apply(image) != expected:
                witness = {"n": n, "probe": vec_to_json(x)}
    report.add(
        "single-parameter compression P U^n I x = I T^n x",
        witness is None,
        bound=n_max,
        witness=witness,
    )

    witness = None
    for x in vecs:
        image = av.I.apply(x)
        for m in range(1, m_max + 1):
            image = av.V.apply(image)
            expected = av.I.apply(s_powers[m].apply(x))
            if witness is None and av.P.apply(image) != expected:
                witness = {"m": m, "probe": vec_to_json(x)}
    report.add(
        "single-parameter compression P V^m I x = I S^m x",
        witness is None,
        bound=m_max,
        witness=witness,
    )

    witness = None
    for x in seq_probes:
        down = av.U.apply(x)
        right = av.V.apply(x)
        if prepend_zero_column(down) != prepend_zero_row(right):
            witness = {"probe": fsvec_to_json(x), "identity": "prepend"}
            break
        if av.V.apply(down) != av.U.apply(right):
            witness = {"probe": fsvec_to_json(x), "identity": "exchange"}
            break
    report.add(
        "shift exchange: zero-column-prepended U x equals zero-row-prepended V x, and U V = V U",
        witness is None,
        bound=len(seq_probes),
        witness=witness,
    )
    return report
