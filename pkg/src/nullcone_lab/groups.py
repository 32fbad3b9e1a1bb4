"""Finite matrix groups by closure of generators, and induced representations.

Elements live in a deterministic closure order (breadth-first from the
identity, generators in the given order), so every index-based artefact
— multiplication tables, permutation bases, reports — is reproducible.
"""

from __future__ import annotations

from typing import Sequence

from .errors import (
    CapExceeded,
    DimensionMismatch,
    GroupMismatch,
    NotInvertible,
    NotPermutationAction,
)
from .fields import FieldCtx, Scalar
from .linalg import Matrix, lift_matrix, _make_eliminator
from .poly import Polynomial, mono_basis

DEFAULT_CLOSURE_CAP = 10**6
_TABLE_LIMIT = 1024  # build the full multiplication table below this order


class MatrixGroup:
    """A finite group of invertible matrices over one context."""

    def __init__(self, ctx: FieldCtx, dim: int, generators: list[Matrix],
                 elements: list[Matrix], *, _from_closure: bool = False):
        if not _from_closure:
            raise TypeError("use MatrixGroup.closure() to build groups")
        self.ctx = ctx
        self.dim = dim
        self.generators = generators
        self.elements = elements
        self.index = {m.key(): i for i, m in enumerate(elements)}
        self.generator_indices = [self.index[g.key()] for g in generators]
        self._mul_table: list[list[int]] | None = None
        self._mul_lazy: dict[tuple[int, int], int] = {}
        self.inverse_table = [self.index[m.inverse().key()] for m in elements]
        if len(elements) <= _TABLE_LIMIT:
            self._mul_table = [
                [self.index[(a * b).key()] for b in elements] for a in elements
            ]

    @staticmethod
    def closure(generators: Sequence[Matrix],
                cap: int = DEFAULT_CLOSURE_CAP) -> "MatrixGroup":
        """Close the generators under multiplication.

        Raises CapExceeded once more than `cap` elements appear, which is
        the expected outcome for infinite groups such as unipotent matrices
        over the rationals.
        """
        if not generators:
            raise NotInvertible("at least one generator required")
        ctx = generators[0].ctx
        dim = generators[0].nrows
        gens = []
        for g in generators:
            if g.ctx != ctx:
                raise GroupMismatch("generators over different contexts")
            if g.nrows != dim or g.ncols != dim:
                raise DimensionMismatch("generators of unequal sizes")
            g.inverse()  # raises NotInvertible on singular input
            if g not in gens:
                gens.append(g)
        identity = Matrix.identity(ctx, dim)
        elements = [identity]
        seen = {identity.key()}
        frontier = [identity]
        while frontier:
            new_frontier = []
            for e in frontier:
                for g in gens:
                    m = e * g
                    k = m.key()
                    if k not in seen:
                        seen.add(k)
                        elements.append(m)
                        new_frontier.append(m)
                        if len(elements) > cap:
                            raise CapExceeded(
                                f"closure exceeded cap {cap}; the group is "
                                "infinite or larger than configured")
            frontier = new_frontier
        return MatrixGroup(ctx, dim, gens, elements, _from_closure=True)

    # -- queries -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[i][j]
        cached = self._mul_lazy.get((i, j))
        if cached is None:
            cached = self.index[(self.elements[i] * self.elements[j]).key()]
            self._mul_lazy[(i, j)] = cached
        return cached

    def inv(self, i: int) -> int:
        return self.inverse_table[i]

    def element_order(self, i: int) -> int:
        n, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            n += 1
        return n

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def is_abelian(self) -> bool:
        return all(self.mul(i, j) == self.mul(j, i)
                   for i in range(self.order) for j in range(self.order))

    def subgroup(self, generators: Sequence[Matrix],
                 cap: int = DEFAULT_CLOSURE_CAP) -> "MatrixGroup":
        sub = MatrixGroup.closure(generators, cap)
        for m in sub.elements:
            if m.key() not in self.index:
                raise GroupMismatch("generators do not lie in this group")
        return sub

    def natural_rep(self) -> "Representation":
        return Representation(self, self.elements)

    def lift(self, target: FieldCtx) -> "MatrixGroup":
        """The same group with entries embedded into an extension field."""
        if target == self.ctx:
            return self
        lifted = MatrixGroup.__new__(MatrixGroup)
        MatrixGroup.__init__(
            lifted, target, self.dim,
            [lift_matrix(g, target) for g in self.generators],
            [lift_matrix(m, target) for m in self.elements],
            _from_closure=True)
        return lifted


class Representation:
    """A matrix for every group element, indexed by closure order."""

    def __init__(self, group: MatrixGroup, matrices: Sequence[Matrix]):
        if len(matrices) != group.order:
            raise GroupMismatch("one matrix per group element required")
        self.group = group
        self.ctx = matrices[0].ctx
        self.dim = matrices[0].nrows
        self.matrices = list(matrices)
        for m in self.matrices:
            if m.nrows != self.dim or m.ncols != self.dim or m.ctx != self.ctx:
                raise DimensionMismatch("representation matrices of unequal shape")
        if not self.matrices[group.identity_index].is_identity():
            raise GroupMismatch("identity element must act as the identity matrix")
        self._perm_basis: "PermutationBasis | None | bool" = False  # unsearched
        self._inv_space_cache: dict[int, object] = {}

    def matrix(self, i: int) -> Matrix:
        return self.matrices[i]

    def inverse_matrix(self, i: int) -> Matrix:
        # rho(g)^-1 = rho(g^-1) since rho is a homomorphism
        return self.matrices[self.group.inv(i)]

    def verify_homomorphism(self) -> bool:
        g = self.group
        for i in range(g.order):
            for j in range(g.order):
                if self.matrices[i] * self.matrices[j] != self.matrices[g.mul(i, j)]:
                    return False
        return True

    def act_on_poly(self, i: int, f: Polynomial) -> Polynomial:
        """(g.f)(v) = f(g^-1 v): substitute the inverse matrix."""
        if f.nvars != self.dim:
            raise DimensionMismatch(f"{f.nvars} variables vs dimension {self.dim}")
        inv = self.inverse_matrix(i)
        pi = inv.permutation()
        if pi is not None:
            # permutation shortcut: x_i -> x_{pi^-1(i)}, i.e. e'_j = e_{pi(j)}
            terms = {tuple(e[pi[j]] for j in range(len(e))): c
                     for e, c in f.terms.items()}
            return Polynomial(f.ctx, f.nvars, terms, _trusted=True)
        return f.substitute_linear(inv)

    def is_permutation_rep(self) -> bool:
        return all(m.is_permutation() for m in self.matrices)

    def variable_permutations(self) -> list[list[int]]:
        """pi per element with rho(g) e_j = e_{pi[j]}."""
        perms = []
        for m in self.matrices:
            pi = m.permutation()
            if pi is None:
                raise NotPermutationAction("matrices do not permute coordinates")
            perms.append(pi)
        return perms

    def restrict(self, subgroup: MatrixGroup) -> "Representation":
        """Restriction along a subgroup built from this group's matrices."""
        mats = []
        for m in subgroup.elements:
            idx = self.group.index.get(m.key())
            if idx is None:
                raise GroupMismatch("not a subgroup of this representation's group")
            mats.append(self.matrices[idx])
        return Representation(subgroup, mats)

    def lift(self, target: FieldCtx) -> "Representation":
        if target == self.ctx:
            return self
        return Representation(self.group.lift(target),
                              [lift_matrix(m, target) for m in self.matrices])

    def permutation_basis(self) -> "PermutationBasis | None":
        if self._perm_basis is False:
            self._perm_basis = find_permutation_basis(self)
        return self._perm_basis


# ---------------------------------------------------------------------------
# induced representations


def dual_rep(r: Representation) -> Representation:
    """Per-element inverse transpose."""
    return Representation(r.group,
                          [r.inverse_matrix(i).transpose()
                           for i in range(r.group.order)])


def sym_power_rep(r: Representation, m: int) -> Representation:
    """Action on the degree-m monomials in the module's basis vectors.

    The column for a basis monomial is the expansion of the corresponding
    product of images of basis vectors, in graded-lex order, so the
    dimension is C(dim+m-1, m).
    """
    if m < 0:
        raise DimensionMismatch("negative symmetric power")
    ctx, dim = r.ctx, r.dim
    basis = mono_basis(dim, m)
    index = {mn.exps: k for k, mn in enumerate(basis)}
    out = []
    for g in range(r.group.order):
        mat = r.matrices[g]
        # image of basis vector j is column j
        forms = [Polynomial(ctx, dim,
                            {tuple(1 if k == i else 0 for k in range(dim)): mat[i, j]
                             for i in range(dim) if not mat[i, j].is_zero()},
                            _trusted=True)
                 for j in range(dim)]
        cols = []
        for mn in basis:
            image = Polynomial.one(ctx, dim)
            for j, e in enumerate(mn.exps):
                if e:
                    image = image * forms[j] ** e
            cols.append(image)
        zero = ctx.zero
        rows = [[zero] * len(basis) for _ in range(len(basis))]
        for col_idx, image in enumerate(cols):
            for exps, coeff in image.terms.items():
                rows[index[exps]][col_idx] = coeff
        out.append(Matrix(ctx, rows))
    return Representation(r.group, out)


def hom_rep(r: Representation, s: Representation) -> Representation:
    """Hom(R, S) = R* tensor S on row-major matrix coordinates.

    A homomorphism phi: V_R -> V_S is a dim(S) x dim(R) matrix M acted on by
    g.M = S_g M R_g^-1; coordinate (k, l) sits at index k*dim(R) + l.  When
    R = S the row-major vectorised identity map is a fixed vector.
    """
    if r.group is not s.group:
        raise GroupMismatch("representations of different groups")
    ctx = r.ctx
    dr, ds = r.dim, s.dim
    out = []
    zero = ctx.zero
    for g in range(r.group.order):
        sg = s.matrices[g]
        rginv = r.inverse_matrix(g)
        n = ds * dr
        rows = [[zero] * n for _ in range(n)]
        for k in range(ds):
            for a in range(ds):
                ska = sg[k, a]
                if ska.is_zero():
                    continue
                for l in range(dr):
                    for b in range(dr):
                        coeff = ska * rginv[b, l]
                        if not coeff.is_zero():
                            rows[k * dr + l][a * dr + b] = coeff
        out.append(Matrix(ctx, rows))
    return Representation(r.group, out)


def vectorized_identity(r: Representation) -> list[Scalar]:
    """Row-major coordinates of the identity map in Hom(R, R)."""
    out = []
    for k in range(r.dim):
        for l in range(r.dim):
            out.append(r.ctx.one if k == l else r.ctx.zero)
    return out


def regular_rep(group: MatrixGroup) -> Representation:
    """Permutation matrices of left multiplication on the element list."""
    ctx = group.ctx
    zero, one = ctx.zero, ctx.one
    n = group.order
    mats = []
    for g in range(n):
        rows = [[zero] * n for _ in range(n)]
        for j in range(n):
            rows[group.mul(g, j)][j] = one
        mats.append(Matrix(ctx, rows))
    return Representation(group, mats)


# ---------------------------------------------------------------------------
# permutation bases


class PermutationBasis:
    """A change of basis making every representing matrix a permutation.

    Slots are grouped orbit by orbit; `perms[g]` maps slot k to the slot of
    rho(g) applied to basis vector k.
    """

    def __init__(self, rep: Representation, basis_matrix: Matrix,
                 perms: list[tuple[int, ...]], orbit_slices: list[range]):
        self.rep = rep
        self.basis_matrix = basis_matrix
        self.basis_inverse = basis_matrix.inverse()
        self.perms = perms
        self.orbit_slices = orbit_slices

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(s) for s in self.orbit_slices]

    def is_free(self) -> bool:
        order = self.rep.group.order
        return all(len(s) == order for s in self.orbit_slices)

    def is_transitive(self) -> bool:
        return len(self.orbit_slices) == 1

    def fixes_no_slot(self) -> bool:
        """True when no nonidentity element fixes a basis vector."""
        return all(pi[k] != k
                   for g, pi in enumerate(self.perms) if g != 0
                   for k in range(len(pi)))

    def coordinates(self, v: Sequence[Scalar]) -> list[Scalar]:
        return self.basis_inverse.apply(v)

    def slot_coordinate_form(self, k: int, nvars: int) -> Polynomial:
        """The k-th permutation coordinate as a polynomial in the originals."""
        ctx = self.rep.ctx
        row = self.basis_inverse.rows[k]
        return Polynomial(ctx, nvars,
                          {tuple(1 if j == i else 0 for j in range(nvars)): c
                           for i, c in enumerate(row) if not c.is_zero()},
                          _trusted=True)


def find_permutation_basis(rep: Representation,
                           extra_seeds: Sequence[Sequence[Scalar]] = ()) -> PermutationBasis | None:
    """Greedy orbit search over a deterministic seed pool.

    Seeds are the standard basis vectors followed by any extra seeds (for
    symmetric powers the designated seed, the pure power of the last
    variable, is already the final standard vector).  A seed is accepted
    when its distinct orbit vectors are linearly independent jointly with
    all previously accepted orbits; the search succeeds when the accepted
    orbits span.  Failure is a value, not an error: it does not certify
    that no permutation basis exists.
    """
    ctx, dim, group = rep.ctx, rep.dim, rep.group
    zero, one = ctx.zero, ctx.one
    seeds: list[list[Scalar]] = [
        [one if i == j else zero for i in range(dim)] for j in range(dim)
    ]
    seeds.extend([list(s) for s in extra_seeds])

    orbits = []
    for pool_pos, seed in enumerate(seeds):
        images = [rep.matrices[g].apply(seed) for g in range(group.order)]
        distinct: list[list[Scalar]] = []
        reps_for_slot: list[int] = []
        keyed: dict[tuple, int] = {}
        element_to_slot: dict[int, int] = {}
        for g, vec in enumerate(images):
            key = tuple(s.val for s in vec)
            slot = keyed.get(key)
            if slot is None:
                slot = len(distinct)
                keyed[key] = slot
                distinct.append(vec)
                reps_for_slot.append(g)
            element_to_slot[g] = slot
        orbits.append((distinct, reps_for_slot, element_to_slot, pool_pos))
    # Larger orbits first: a stabilised seed (such as a fixed vector) must not
    # swallow coordinates that a free orbit needs.  Ties keep pool order.
    orbits.sort(key=lambda item: (-len(item[0]), item[3]))

    elim = _make_eliminator(ctx, dim)
    accepted_vectors: list[list[Scalar]] = []
    orbit_slices: list[range] = []
    orbit_elements: list[list[int]] = []  # representative group element per slot
    slot_of_element: list[dict[int, int]] = []  # per orbit: element index -> slot

    for distinct, reps_for_slot, element_to_slot, _ in orbits:
        if len(accepted_vectors) == dim:
            break
        if len(accepted_vectors) + len(distinct) > dim:
            continue
        # joint independence: try on a scratch copy of the eliminator state
        scratch = elim.clone()
        if all(scratch.add_row({c: s for c, s in enumerate(vec) if not s.is_zero()})
               for vec in distinct):
            elim = scratch
            base = len(accepted_vectors)
            orbit_slices.append(range(base, base + len(distinct)))
            orbit_elements.append(reps_for_slot)
            slot_of_element.append(element_to_slot)
            accepted_vectors.extend(distinct)

    if len(accepted_vectors) != dim:
        return None

    basis_matrix = Matrix(ctx, list(zip(*accepted_vectors)))  # columns = vectors
    perms = []
    for h in range(group.order):
        pi = [0] * dim
        for o, slc in enumerate(orbit_slices):
            for local, k in enumerate(slc):
                g = orbit_elements[o][local]
                target_local = slot_of_element[o][group.mul(h, g)]
                pi[k] = slc[0] + target_local
        perms.append(tuple(pi))
    pb = PermutationBasis(rep, basis_matrix, perms, orbit_slices)
    _verify_permutation_basis(pb)
    return pb


def _verify_permutation_basis(pb: PermutationBasis) -> None:
    rep = pb.rep
    ctx = rep.ctx
    binv, b = pb.basis_inverse, pb.basis_matrix
    for g, pi in enumerate(pb.perms):
        conj = binv * rep.matrices[g] * b
        expected = Matrix(ctx, [[ctx.one if pi[j] == i else ctx.zero
                                 for j in range(rep.dim)] for i in range(rep.dim)])
        if conj != expected:
            raise AssertionError("permutation basis failed conjugation check")
