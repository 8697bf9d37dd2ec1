"""Structured linear operators on finitely supported sequence spaces.

Operators are kept as structured terms and applied coordinatewise; they
are never materialized as infinite matrices, so every application of an
operator to a finitely supported element is a finite exact computation.

Naming convention for the standard quadruple pieces:

* ``EmbedI``       places an ambient vector at the origin index,
* ``ShiftRight``   moves one-sided coordinates up by one,
* ``ProjStd``      collapses a one-sided family to sum_n T^n x_n at 0,
* ``SchafferU``    acts on two-sided families by (Ux)_n = x_{n+1} + [n=0] T x_0,
* ``SchafferVInv`` is its two-sided inverse,
* ``GridDown`` / ``GridRight`` shift grid rows / columns,
* ``ProjAndo``     collapses a grid to sum_{n,m} T^n S^m x_{n,m} at (0,0).

``Componentwise``, ``ColumnBlocks`` and ``BlockDense`` express general
maps between one-sided spaces with finitely many nonzero blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .finsupp import Domain, DomainMismatch, FsVec, Index
from .matrix import Mat, Scalar, Vec, vec, vec_add, zero_vec
from .report import Report


class SeqOp:
    """Base class: a structured operator between finitely supported spaces."""

    domain: Domain

    def apply(self, x: FsVec) -> FsVec:
        raise NotImplementedError

    def power_apply(self, n: int, x: FsVec) -> FsVec:
        """n-fold application; n = 0 is the identity."""
        if n < 0:
            raise ValueError(f"power must be nonnegative, got {n}")
        for _ in range(n):
            x = self.apply(x)
        return x

    def _check_input(self, x: FsVec, dim: int, domain: Domain) -> None:
        if not isinstance(x, FsVec) or x.domain is not domain or x.dim != dim:
            raise DomainMismatch(
                f"{type(self).__name__} expects ({domain.value}, dim {dim}), got "
                f"({getattr(x, 'domain', '?')}, dim {getattr(x, 'dim', '?')})"
            )


def _accumulate(acc: dict[Index, Vec], index: Index, value: Vec) -> None:
    if index in acc:
        acc[index] = vec_add(acc[index], value)
    else:
        acc[index] = value


@dataclass(frozen=True)
class EmbedI(SeqOp):
    """Injective embedding of the ambient space at the origin index."""

    dim: int
    domain: Domain = Domain.UNINAT

    def apply(self, x: Sequence[Scalar]) -> FsVec:
        v = vec(x)
        if len(v) != self.dim:
            raise DomainMismatch(f"expected a vector of length {self.dim}, got {len(v)}")
        return FsVec.single(self.domain, self.dim, self.domain.origin, v)


@dataclass(frozen=True)
class CoordProj0(SeqOp):
    """Idempotent projection onto the origin coordinate."""

    dim: int
    domain: Domain = Domain.BIINT

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, self.domain)
        origin = self.domain.origin
        return FsVec.single(self.domain, self.dim, origin, x.coeff(origin))


@dataclass(frozen=True)
class ShiftRight(SeqOp):
    """One-sided shift (x_0, x_1, ...) -> (0, x_0, x_1, ...)."""

    dim: int
    domain = Domain.UNINAT

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.UNINAT)
        return FsVec(Domain.UNINAT, self.dim, [(k + 1, v) for k, v in x.items()])


@dataclass(frozen=True)
class ShiftBilat(SeqOp):
    """Two-sided shift moving every coordinate up by one index."""

    dim: int
    domain = Domain.BIINT

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.BIINT)
        return FsVec(Domain.BIINT, self.dim, [(k + 1, v) for k, v in x.items()])


@dataclass(frozen=True)
class GridDown(SeqOp):
    """Grid shift (n, m) -> (n+1, m): a zero row appears at the top."""

    dim: int
    domain = Domain.GRID

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.GRID)
        return FsVec(Domain.GRID, self.dim, [((n + 1, m), v) for (n, m), v in x.items()])


@dataclass(frozen=True)
class GridRight(SeqOp):
    """Grid shift (n, m) -> (n, m+1): a zero column appears at the left."""

    dim: int
    domain = Domain.GRID

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.GRID)
        return FsVec(Domain.GRID, self.dim, [((n, m + 1), v) for (n, m), v in x.items()])


def _square(T: Mat, name: str) -> Mat:
    if not T.is_square():
        raise ValueError(f"{name} must be square, got {T.rows}x{T.cols}")
    return T


@dataclass(frozen=True)
class SchafferU(SeqOp):
    """Two-sided operator with rows (Ux)_n = x_{n+1} + [n=0] T x_0."""

    T: Mat
    domain = Domain.BIINT

    def __post_init__(self):
        _square(self.T, "T")

    @property
    def dim(self) -> int:
        return self.T.rows

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.BIINT)
        acc: dict[Index, Vec] = {}
        for k, v in x.items():
            _accumulate(acc, k - 1, v)
            if k == 0:
                _accumulate(acc, 0, self.T.apply(v))
        return FsVec(Domain.BIINT, self.dim, acc)


@dataclass(frozen=True)
class SchafferVInv(SeqOp):
    """Two-sided inverse with rows (Vx)_n = x_{n-1} + [n=1] (-T) x_{-1}.

    The own-coordinate entry at the origin is zero, so the correction only
    enters at index 1.
    """

    T: Mat
    domain = Domain.BIINT

    def __post_init__(self):
        _square(self.T, "T")
        object.__setattr__(self, "_neg_T", -self.T)

    @property
    def dim(self) -> int:
        return self.T.rows

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.BIINT)
        acc: dict[Index, Vec] = {}
        for k, v in x.items():
            _accumulate(acc, k + 1, v)
            if k == -1:
                _accumulate(acc, 1, self._neg_T.apply(v))
        return FsVec(Domain.BIINT, self.dim, acc)


class _PowerCache:
    """Memoized powers of a fixed matrix.

    Writes are idempotent dict inserts, so concurrent apply calls on the
    same operator stay safe: racing threads at worst recompute the same
    immutable value.
    """

    def __init__(self, base: Mat):
        self.powers = {0: Mat.identity(base.rows)}
        self.base = base

    def get(self, n: int) -> Mat:
        cached = self.powers.get(n)
        if cached is None:
            cached = self.powers.setdefault(n, self.base ** n)
        return cached


@dataclass(frozen=True)
class ProjStd(SeqOp):
    """One-sided projection x -> e_0 (x) sum_n T^n x_n.

    Idempotent with range equal to the origin embedding of the ambient
    space.
    """

    T: Mat
    domain = Domain.UNINAT

    def __post_init__(self):
        _square(self.T, "T")
        object.__setattr__(self, "_powers", _PowerCache(self.T))

    @property
    def dim(self) -> int:
        return self.T.rows

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.UNINAT)
        total = zero_vec(self.dim)
        for n, v in x.items():
            total = vec_add(total, self._powers.get(n).apply(v))
        return FsVec(Domain.UNINAT, self.dim, [(0, total)])


@dataclass(frozen=True)
class ProjAndo(SeqOp):
    """Grid projection x -> e_(0,0) (x) sum_{n,m} T^n S^m x_{n,m}."""

    T: Mat
    S: Mat
    domain = Domain.GRID

    def __post_init__(self):
        _square(self.T, "T")
        _square(self.S, "S")
        if self.T.rows != self.S.rows:
            raise ValueError(
                f"operators act on different spaces: {self.T.rows} vs {self.S.rows}"
            )
        object.__setattr__(self, "_t_powers", _PowerCache(self.T))
        object.__setattr__(self, "_s_powers", _PowerCache(self.S))

    @property
    def dim(self) -> int:
        return self.T.rows

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.GRID)
        total = zero_vec(self.dim)
        for (n, m), v in x.items():
            total = vec_add(total, self._t_powers.get(n).apply(self._s_powers.get(m).apply(v)))
        return FsVec(Domain.GRID, self.dim, [((0, 0), total)])


@dataclass(frozen=True)
class BlockDense(SeqOp):
    """A dense matrix acting blockwise on the first K one-sided coordinates.

    The matrix is (K*dim) x (K*dim); inputs supported outside {0..K-1} are
    rejected because the operator is only defined on that finite block.
    """

    matrix: Mat
    dim: int
    domain = Domain.UNINAT

    def __post_init__(self):
        _square(self.matrix, "block matrix")
        if self.matrix.rows % self.dim:
            raise ValueError(
                f"matrix size {self.matrix.rows} is not a multiple of block dim {self.dim}"
            )

    @property
    def blocks_count(self) -> int:
        return self.matrix.rows // self.dim

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim, Domain.UNINAT)
        k = self.blocks_count
        if any(index >= k for index in x.indices()):
            raise DomainMismatch(
                f"input supported outside the {k} coordinates this operator acts on"
            )
        stacked = []
        for block in range(k):
            stacked.extend(x.coeff(block))
        image = self.matrix.apply(stacked)
        return FsVec(
            Domain.UNINAT,
            self.dim,
            [(b, image[b * self.dim : (b + 1) * self.dim]) for b in range(k)],
        )


@dataclass(frozen=True)
class Componentwise(SeqOp):
    """Coordinatewise matrix action (x_n) -> (S x_n) between one-sided spaces."""

    S: Mat
    domain = Domain.UNINAT

    @property
    def dim_in(self) -> int:
        return self.S.cols

    @property
    def dim_out(self) -> int:
        return self.S.rows

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim_in, Domain.UNINAT)
        return FsVec(Domain.UNINAT, self.dim_out, [(k, self.S.apply(v)) for k, v in x.items()])


class ColumnBlocks(SeqOp):
    """General one-sided operator given by finitely many nonzero blocks.

    ``blocks[(r, c)]`` is the (dim_out x dim_in) block sending input
    coordinate c into output coordinate r. This is the largest operator
    class the package can check exactly, and exists to express
    user-supplied candidates for the intertwining converse.
    """

    domain = Domain.UNINAT

    def __init__(self, blocks: Mapping[tuple[int, int], Mat], dim_in: int, dim_out: int):
        cleaned: dict[tuple[int, int], Mat] = {}
        for (r, c), b in blocks.items():
            if r < 0 or c < 0:
                raise ValueError(f"negative block position ({r}, {c})")
            if b.rows != dim_out or b.cols != dim_in:
                raise ValueError(
                    f"block ({r},{c}) is {b.rows}x{b.cols}, expected {dim_out}x{dim_in}"
                )
            if not b.is_zero():
                cleaned[(r, c)] = b
        self.blocks = {k: cleaned[k] for k in sorted(cleaned)}
        self.dim_in = dim_in
        self.dim_out = dim_out

    def __repr__(self) -> str:
        return f"ColumnBlocks({sorted(self.blocks)}, dim_in={self.dim_in}, dim_out={self.dim_out})"

    def apply(self, x: FsVec) -> FsVec:
        self._check_input(x, self.dim_in, Domain.UNINAT)
        acc: dict[Index, Vec] = {}
        for (r, c), b in self.blocks.items():
            v = x.support.get(c)
            if v is not None:
                _accumulate(acc, r, b.apply(v))
        return FsVec(Domain.UNINAT, self.dim_out, acc)


@dataclass(frozen=True)
class Compose(SeqOp):
    """Composition of factors, applied right to left."""

    factors: tuple[SeqOp, ...]

    def apply(self, x):
        for f in reversed(self.factors):
            x = f.apply(x)
        return x


@dataclass(frozen=True)
class PowerOp(SeqOp):
    """A fixed nonnegative power of a single operator."""

    base: SeqOp
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"power must be nonnegative, got {self.n}")

    def apply(self, x):
        return self.base.power_apply(self.n, x)


@dataclass(frozen=True)
class DilationQuadruple:
    """A dilation package: space descriptor, embedding, forward map, projection.

    ``second`` holds the second commuting forward map in the two-parameter
    variant and is None otherwise.
    """

    domain: Domain
    dim: int
    embed: SeqOp
    forward: SeqOp
    proj: SeqOp
    second: Optional[SeqOp] = None


def check_inverse_pair(a: SeqOp, b: SeqOp, probes: Sequence[FsVec]) -> Report:
    """Verify a(b(x)) = x and b(a(x)) = x exactly on every probe."""
    from .serialize import fsvec_to_json

    report = Report(suite="inverse_pair")
    for name, first, second in (("a(b(x)) = x", b, a), ("b(a(x)) = x", a, b)):
        witness = None
        for x in probes:
            y = second.apply(first.apply(x))
            if y != x:
                witness = {"probe": fsvec_to_json(x), "result": fsvec_to_json(y)}
                break
        report.add(name, witness is None, bound=len(probes), witness=witness)
    return report
