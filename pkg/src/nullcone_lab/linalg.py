"""Exact dense linear algebra over a FieldCtx.

Two elimination engines sit behind one interface: a generic one holding rows
as Scalar lists, and a characteristic-2 engine that packs each of the n
coefficient planes of a row into one Python int, so row operations become
big-int XORs.  Constraint rows are streamed into the eliminator one at a
time; the full stacked matrix is never materialised.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ContextMismatch, DimensionMismatch, NotInvertible, ParseError
from .fields import FieldCtx, Scalar

# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """An immutable matrix of Scalars over one context."""

    __slots__ = ("ctx", "rows", "nrows", "ncols", "_key")

    def __init__(self, ctx: FieldCtx, rows: Sequence[Sequence[Scalar]]):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch("ragged rows")
            for s in r:
                if s.ctx != ctx:
                    raise ContextMismatch("matrix entry from a different context")
        self._key = None

    @staticmethod
    def identity(ctx: FieldCtx, n: int) -> "Matrix":
        zero, one = ctx.zero, ctx.one
        return Matrix(ctx, [[one if i == j else zero for j in range(n)]
                            for i in range(n)])

    @staticmethod
    def from_ints(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> "Matrix":
        return Matrix(ctx, [[ctx.scalar(v) for v in r] for r in rows])

    @staticmethod
    def parse(ctx: FieldCtx, text: str) -> "Matrix":
        """Rows separated by ';', entries by ',', Scalar text entries."""
        rows = []
        for row_text in text.strip().split(";"):
            entries = [e for e in row_text.split(",")]
            if not entries or all(not e.strip() for e in entries):
                raise ParseError(f"empty matrix row in {text!r}")
            rows.append([ctx.parse(e) for e in entries])
        return Matrix(ctx, rows)

    def format(self) -> str:
        return ";".join(",".join(str(s) for s in row) for row in self.rows)

    def key(self):
        """Hashable content key (used to index group elements)."""
        if self._key is None:
            self._key = tuple(tuple(s.val for s in row) for row in self.rows)
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.ctx == self.ctx
                and other.key() == self.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Matrix({self.format()})"

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.ncols} columns vs {other.nrows} rows")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = self.ctx.zero
                for a, b in zip(row, col):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(self.ctx, out)

    def apply(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if len(vec) != self.ncols:
            raise DimensionMismatch(f"vector length {len(vec)} vs {self.ncols} columns")
        out = []
        for row in self.rows:
            acc = self.ctx.zero
            for a, b in zip(row, vec):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, list(zip(*self.rows)))

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        for i, row in enumerate(self.rows):
            for j, s in enumerate(row):
                if (i == j) != (not s.is_zero()) or (i == j and not s.is_one()):
                    return False
        return True

    def is_permutation(self) -> bool:
        if self.nrows != self.ncols:
            return False
        seen = set()
        for col in zip(*self.rows):
            hits = [i for i, s in enumerate(col) if not s.is_zero()]
            if len(hits) != 1 or not col[hits[0]].is_one():
                return False
            seen.add(hits[0])
        return len(seen) == self.nrows

    def permutation(self) -> list[int] | None:
        """pi with M e_j = e_{pi[j]}, or None if not a permutation matrix."""
        if not self.is_permutation():
            return None
        pi = []
        for col in zip(*self.rows):
            pi.append(next(i for i, s in enumerate(col) if not s.is_zero()))
        return pi

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise NotInvertible("not square")
        n = self.ncols
        work = [list(row) + list(ident_row)
                for row, ident_row in zip(self.rows, Matrix.identity(self.ctx, n).rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
            if pivot is None:
                raise NotInvertible("singular matrix")
            work[col], work[pivot] = work[pivot], work[col]
            inv = work[col][col].inverse()
            work[col] = [s * inv for s in work[col]]
            for r in range(n):
                if r != col and not work[r][col].is_zero():
                    factor = work[r][col]
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return Matrix(self.ctx, [row[n:] for row in work])

    def det(self) -> Scalar:
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.ncols
        work = [list(row) for row in self.rows]
        det = self.ctx.one
        for col in range(n):
            pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
            if pivot is None:
                return self.ctx.zero
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det = det * work[col][col]
            inv = work[col][col].inverse()
            for r in range(col + 1, n):
                if not work[r][col].is_zero():
                    factor = work[r][col] * inv
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return det


# ---------------------------------------------------------------------------
# row reduction engines
#
# Rows enter as sparse {column: Scalar} dicts.  The eliminator keeps a fully
# reduced basis (incremental Gauss-Jordan), so pivot rows are always in
# reduced row-echelon form with respect to ascending column order.


class _GenericEliminator:
    def __init__(self, ctx: FieldCtx, ncols: int):
        self.ctx = ctx
        self.ncols = ncols
        self.pivots: dict[int, list[Scalar]] = {}

    def clone(self) -> "_GenericEliminator":
        out = _GenericEliminator(self.ctx, self.ncols)
        out.pivots = {c: row[:] for c, row in self.pivots.items()}
        return out

    def add_row(self, row: dict[int, Scalar]) -> bool:
        zero = self.ctx.zero
        dense = [zero] * self.ncols
        for c, s in row.items():
            dense[c] = s
        for c in sorted(self.pivots):
            if not dense[c].is_zero():
                factor = dense[c]
                pivot = self.pivots[c]
                dense = [a - factor * b for a, b in zip(dense, pivot)]
        lead = next((c for c in range(self.ncols) if not dense[c].is_zero()), None)
        if lead is None:
            return False
        inv = dense[lead].inverse()
        dense = [s * inv for s in dense]
        for c, pivot in self.pivots.items():
            if not pivot[lead].is_zero():
                factor = pivot[lead]
                self.pivots[c] = [a - factor * b for a, b in zip(pivot, dense)]
        self.pivots[lead] = dense
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_rows(self) -> list[list[Scalar]]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    def kernel_basis(self) -> list[list[Scalar]]:
        zero, one = self.ctx.zero, self.ctx.one
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for j in free:
            vec = [zero] * self.ncols
            vec[j] = one
            for c, pivot in self.pivots.items():
                if not pivot[j].is_zero():
                    vec[c] = -pivot[j]
            basis.append(vec)
        return basis


class _PackedChar2Eliminator:
    """Rows over F_{2^n} as n bit-plane ints; column j lives at bit j."""

    def __init__(self, ctx: FieldCtx, ncols: int):
        assert ctx.p == 2 and ctx.is_finite
        self.ctx = ctx
        self.nplanes = ctx.n
        self.ncols = ncols
        self.pivots: dict[int, list[int]] = {}
        self._pivot_mask = 0

    def clone(self) -> "_PackedChar2Eliminator":
        out = _PackedChar2Eliminator(self.ctx, self.ncols)
        out.pivots = {c: planes[:] for c, planes in self.pivots.items()}
        out._pivot_mask = self._pivot_mask
        return out

    def _mul_plan(self, val) -> list[list[int]]:
        """plan[i] = input planes XORed into output plane i under mul by val."""
        plan = self.ctx._scalar_mul_planes.get(val)
        if plan is None:
            n = self.nplanes
            plan = [[] for _ in range(n)]
            for j in range(n):
                basis = (0,) * j + (1,) + (0,) * (n - 1 - j) if n > 1 else 1
                prod = self.ctx._mul(val, basis)
                coeffs = prod if n > 1 else (prod,)
                for i in range(n):
                    if coeffs[i]:
                        plan[i].append(j)
            self.ctx._scalar_mul_planes[val] = plan
        return plan

    def _scaled(self, planes: list[int], val) -> list[int]:
        if self.nplanes == 1:
            return planes[:]  # only nonzero scalar is 1
        plan = self._mul_plan(val)
        return [self._xor_all(planes, srcs) for srcs in plan]

    @staticmethod
    def _xor_all(planes: list[int], srcs: list[int]) -> int:
        acc = 0
        for j in srcs:
            acc ^= planes[j]
        return acc

    def _coeff_at(self, planes: list[int], col: int):
        if self.nplanes == 1:
            return (planes[0] >> col) & 1
        return tuple((pl >> col) & 1 for pl in planes)

    def pack(self, row: dict[int, Scalar]) -> list[int]:
        planes = [0] * self.nplanes
        if self.nplanes == 1:
            for c, s in row.items():
                if s.val:
                    planes[0] |= 1 << c
        else:
            for c, s in row.items():
                for i, bit in enumerate(s.val):
                    if bit:
                        planes[i] |= 1 << c
        return planes

    def add_row(self, row: dict[int, Scalar]) -> bool:
        planes = self.pack(row)
        support = 0
        for pl in planes:
            support |= pl
        # One pass clears every pivot column: pivot rows are zero at all
        # other pivot columns, so reductions never re-set pivot bits.
        hits = support & self._pivot_mask
        while hits:
            c = (hits & -hits).bit_length() - 1
            hits &= hits - 1
            coeff = self._coeff_at(planes, c)
            if coeff == 1 if self.nplanes == 1 else any(coeff):
                scaled = self._scaled(self.pivots[c], coeff)
                planes = [a ^ b for a, b in zip(planes, scaled)]
        support = 0
        for pl in planes:
            support |= pl
        if not support:
            return False
        lead = (support & -support).bit_length() - 1
        # normalise so the leading coefficient is 1
        coeff = self._coeff_at(planes, lead)
        if not (coeff == 1 or (isinstance(coeff, tuple) and Scalar(self.ctx, coeff).is_one())):
            inv = self.ctx._inv(coeff)
            planes = self._scaled(planes, inv)
        # Gauss-Jordan: clear this column from every existing pivot row
        for c, pivot in self.pivots.items():
            pc = self._coeff_at(pivot, lead)
            if pc == 1 or (isinstance(pc, tuple) and any(pc)):
                scaled = self._scaled(planes, pc)
                self.pivots[c] = [a ^ b for a, b in zip(pivot, scaled)]
        self.pivots[lead] = planes
        self._pivot_mask |= 1 << lead
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _unpack(self, planes: list[int]) -> list[Scalar]:
        ctx = self.ctx
        if self.nplanes == 1:
            one, zero = ctx.one, ctx.zero
            return [one if (planes[0] >> c) & 1 else zero
                    for c in range(self.ncols)]
        return [Scalar(ctx, tuple((pl >> c) & 1 for pl in planes))
                for c in range(self.ncols)]

    def pivot_rows(self) -> list[list[Scalar]]:
        return [self._unpack(self.pivots[c]) for c in sorted(self.pivots)]

    def kernel_basis(self) -> list[list[Scalar]]:
        ctx = self.ctx
        zero, one = ctx.zero, ctx.one
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for j in free:
            vec = [zero] * self.ncols
            vec[j] = one
            for c, pivot in self.pivots.items():
                coeff = self._coeff_at(pivot, j)
                if self.nplanes == 1:
                    if coeff:
                        vec[c] = one
                elif any(coeff):
                    vec[c] = Scalar(ctx, coeff)  # -x = x in characteristic 2
            basis.append(vec)
        return basis


def _make_eliminator(ctx: FieldCtx, ncols: int):
    if ctx.is_finite and ctx.p == 2:
        return _PackedChar2Eliminator(ctx, ncols)
    return _GenericEliminator(ctx, ncols)


# ---------------------------------------------------------------------------
# public entry points


def kernel(rows: Iterable[dict[int, Scalar]], ncols: int, ctx: FieldCtx) -> list[list[Scalar]]:
    """Canonical (reduced row-echelon) basis of the joint kernel of the rows.

    Rows are consumed one at a time; the kernel basis is re-reduced so the
    result is byte-reproducible whatever the row order.
    """
    elim = _make_eliminator(ctx, ncols)
    for row in rows:
        elim.add_row(row)
    raw = elim.kernel_basis()
    return rref(raw, ncols, ctx)


def rref(vectors: Iterable[Sequence[Scalar]], ncols: int, ctx: FieldCtx) -> list[list[Scalar]]:
    """Reduced row-echelon basis of the span, rows sorted by pivot column."""
    elim = _make_eliminator(ctx, ncols)
    for vec in vectors:
        elim.add_row({c: s for c, s in enumerate(vec) if not s.is_zero()})
    return elim.pivot_rows()


def rank(vectors: Iterable[Sequence[Scalar]], ncols: int, ctx: FieldCtx) -> int:
    elim = _make_eliminator(ctx, ncols)
    n = 0
    for vec in vectors:
        if elim.add_row({c: s for c, s in enumerate(vec) if not s.is_zero()}):
            n += 1
    return n


def lift_matrix(m: Matrix, target: FieldCtx) -> Matrix:
    from .fields import lift as lift_scalar
    if m.ctx == target:
        return m
    return Matrix(target, [[lift_scalar(s, target) for s in row] for row in m.rows])
