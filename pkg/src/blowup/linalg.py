"""Exact linear algebra over Z, Q, F_p and Z/m.

Matrices are numpy arrays with ``dtype=object`` holding python ints (or
``Fraction`` over Q), so all arithmetic is exact and unbounded.  Matrices act
on column vectors; a map C -> C' with dim C = n and dim C' = m is an (m, n)
array.

The Smith normal form routine keeps both transforms and their inverses and
picks pivots deterministically (smallest absolute value, ties broken by
position), so repeated runs produce identical bases.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np


# rings --------------------------------------------------------------------


class Ring:
    is_field = False
    characteristic = 0

    def convert(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0

    def invert(self, x):
        raise NotImplementedError


class _Integers(Ring):
    name = "Z"

    def convert(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def __repr__(self):
        return "ZZ"


class _Rationals(Ring):
    name = "Q"
    is_field = True

    def convert(self, x):
        return Fraction(x)

    def invert(self, x):
        return 1 / Fraction(x)

    def __repr__(self):
        return "QQ"


class PrimeField(Ring):
    """F_p for a prime p; elements are canonical residues 0..p-1."""

    is_field = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F_{p}"
        self.characteristic = p

    def convert(self, x):
        return int(x) % self.p

    def invert(self, x):
        x = x % self.p
        if x == 0:
            raise ZeroDivisionError
        return pow(x, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class IntegersMod(Ring):
    """Z/m, not assumed to be a field.  Used for coefficient enumeration."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        self.m = m
        self.name = f"Z/{m}"
        self.characteristic = m

    def convert(self, x):
        return int(x) % self.m

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.m == self.m

    def __hash__(self):
        return hash(("Zmod", self.m))

    def __repr__(self):
        return f"ZMod({self.m})"


ZZ = _Integers()
QQ = _Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def ZMod(m: int) -> IntegersMod:
    return IntegersMod(m)


# matrix helpers -----------------------------------------------------------


def zeros(m: int, n: int):
    A = np.empty((m, n), dtype=object)
    A[:] = 0
    return A


def identity(n: int):
    A = zeros(n, n)
    for i in range(n):
        A[i, i] = 1
    return A


def as_matrix(rows):
    A = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            A[i, j] = x
    return A


def mat_mul(A, B):
    m, k = A.shape
    k2, n = B.shape
    assert k == k2
    C = zeros(m, n)
    for i in range(m):
        for j in range(n):
            s = 0
            for t in range(k):
                a = A[i, t]
                if a:
                    s += a * B[t, j]
            C[i, j] = s
    return C


def mat_eq(A, B) -> bool:
    return A.shape == B.shape and all(
        A[i, j] == B[i, j] for i in range(A.shape[0]) for j in range(A.shape[1])
    )


def reduce_mod(A, ring: Ring):
    B = A.copy()
    for i in range(B.shape[0]):
        for j in range(B.shape[1]):
            B[i, j] = ring.convert(B[i, j])
    return B


# field elimination --------------------------------------------------------


def field_rref(A, ring: Ring):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = reduce_mod(A, ring)
    m, n = R.shape
    pivots = []
    r = 0
    for j in range(n):
        pivot = next(
            (i for i in range(r, m) if not ring.is_zero(R[i, j])), None
        )
        if pivot is None:
            continue
        if pivot != r:
            R[[r, pivot]] = R[[pivot, r]]
        inv = ring.invert(R[r, j])
        for jj in range(j, n):
            R[r, jj] = ring.convert(R[r, jj] * inv)
        for i in range(m):
            if i != r and not ring.is_zero(R[i, j]):
                c = R[i, j]
                for jj in range(j, n):
                    R[i, jj] = ring.convert(R[i, jj] - c * R[r, jj])
        pivots.append(j)
        r += 1
        if r == m:
            break
    return R, pivots


def field_rank(A, ring: Ring) -> int:
    return len(field_rref(A, ring)[1])


def field_kernel(A, ring: Ring):
    """Basis of the right kernel as columns of an (n, k) matrix."""
    R, pivots = field_rref(A, ring)
    n = A.shape[1]
    free = [j for j in range(n) if j not in pivots]
    K = zeros(n, len(free))
    for idx, j in enumerate(free):
        K[j, idx] = ring.convert(1)
        for r, pj in enumerate(pivots):
            K[pj, idx] = ring.convert(-R[r, j])
    return K


def field_solve(A, b, ring: Ring):
    """One solution of A x = b, or None.  ``b`` may be a matrix of columns."""
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    m, n = A.shape
    aug = zeros(m, n + b.shape[1])
    aug[:, :n] = reduce_mod(A, ring)
    aug[:, n:] = reduce_mod(b, ring)
    R, pivots = field_rref(aug, ring)
    if any(j >= n for j in pivots):
        return None
    X = zeros(n, b.shape[1])
    for r, j in enumerate(pivots):
        for c in range(b.shape[1]):
            X[j, c] = R[r, n + c]
    return X


# Smith normal form --------------------------------------------------------


class SmithForm:
    """D = U A V with U, V unimodular; inverses kept alongside.

    ``diagonal`` lists the invariant factors (non-negative, each dividing the
    next, zeros last); ``rank`` counts the nonzero ones.
    """

    def __init__(self, D, U, V, Uinv, Vinv):
        self.D, self.U, self.V, self.Uinv, self.Vinv = D, U, V, Uinv, Vinv
        k = min(D.shape)
        self.diagonal = [int(D[i, i]) for i in range(k)]
        self.rank = sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(A) -> SmithForm:
    D = A.copy()
    m, n = D.shape
    U, Uinv = identity(m), identity(m)
    V, Vinv = identity(n), identity(n)

    def row_swap(i, j):
        D[[i, j]] = D[[j, i]]
        U[[i, j]] = U[[j, i]]
        Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def col_swap(i, j):
        D[:, [i, j]] = D[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]
        Vinv[[i, j]] = Vinv[[j, i]]

    def row_add(i, j, c):
        # row_i += c * row_j
        D[i] += c * D[j]
        U[i] += c * U[j]
        Uinv[:, j] -= c * Uinv[:, i]

    def col_add(i, j, c):
        # col_i += c * col_j
        D[:, i] += c * D[:, j]
        V[:, i] += c * V[:, j]
        Vinv[j] -= c * Vinv[i]

    def row_negate(i):
        D[i] *= -1
        U[i] *= -1
        Uinv[:, i] *= -1

    t = 0
    while True:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(D[i, j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        while True:
            # clear column t then row t; restart if a division leaves remainders
            dirty = False
            for i in range(t + 1, m):
                if D[i, t]:
                    q = D[i, t] // D[t, t]
                    row_add(i, t, -q)
                    if D[i, t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t, j]:
                    q = D[t, j] // D[t, t]
                    col_add(j, t, -q)
                    if D[t, j]:
                        col_swap(t, j)
                        dirty = True
            if not dirty and all(D[i, t] == 0 for i in range(t + 1, m)) and all(
                D[t, j] == 0 for j in range(t + 1, n)
            ):
                break
        # enforce divisibility of the remaining block
        culprit = next(
            (
                (i, j)
                for i in range(t + 1, m)
                for j in range(t + 1, n)
                if D[i, j] % D[t, t] != 0
            ),
            None,
        )
        if culprit is not None:
            row_add(t, culprit[0], 1)
            continue
        if D[t, t] < 0:
            row_negate(t)
        t += 1
        if t == min(m, n):
            # remaining off-corner entries are already zero by construction
            break
    # normalize signs of any trailing diagonal entries
    for i in range(min(m, n)):
        if D[i, i] < 0:
            row_negate(i)
    return SmithForm(D, U, V, Uinv, Vinv)


def integer_kernel(A):
    """Saturated basis of the integer right kernel, as columns.

    Saturated: any integer vector in the rational span of the result is an
    integer combination of the columns, so quotients computed against this
    basis see the honest torsion.
    """
    snf = smith_normal_form(A)
    n = A.shape[1]
    cols = [j for j in range(n) if j >= snf.rank]
    K = zeros(n, len(cols))
    for idx, j in enumerate(cols):
        K[:, idx] = snf.V[:, j]
    return K


def integer_solve(A, b):
    """Integer solution of A x = b (b vector or matrix), or None."""
    one_col = b.ndim == 1
    if one_col:
        b = b.reshape(-1, 1)
    snf = smith_normal_form(A)
    c = mat_mul(snf.U, b)
    m, n = A.shape
    X = zeros(n, b.shape[1])
    for col in range(b.shape[1]):
        y = zeros(n, 1)
        for i in range(m):
            d = snf.D[i, i] if i < min(m, n) else 0
            if d:
                if c[i, col] % d != 0:
                    return None
                y[i, 0] = c[i, col] // d
            elif c[i, col] != 0:
                return None
        X[:, col : col + 1] = mat_mul(snf.V, y)
    if one_col:
        return X[:, 0]
    return X


def invariant_factors_via_minors(A):
    """Invariant factors as gcds of k x k minors; independent of the
    elimination above, so it serves as a cross-check oracle."""
    from itertools import combinations

    m, n = A.shape
    factors = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, _int_det(A, rows, cols))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return factors


def _int_det(A, rows, cols):
    """Determinant of a square integer submatrix by cofactor expansion."""
    k = len(rows)
    if k == 1:
        return A[rows[0], cols[0]]
    total = 0
    sign = 1
    for idx, r in enumerate(rows):
        a = A[r, cols[0]]
        if a:
            rest = rows[:idx] + rows[idx + 1 :]
            total += sign * a * _int_det(A, rest, cols[1:])
        sign = -sign
    return total


# cohomology ---------------------------------------------------------------


class CohomologyGroup:
    """One cohomology group with enough data to express cocycles in it.

    ``free_rank`` and ``torsion`` (invariant factors > 1) describe the
    abstract group.  ``generators`` are cocycle vectors in the ambient
    cochain module: first the torsion generators (matching ``torsion``
    order), then the free ones.
    """

    def __init__(self, ring, free_rank, torsion, generators, reducer):
        self.ring = ring
        self.free_rank = free_rank
        self.torsion = tuple(torsion)
        self.generators = generators
        self._reduce = reducer

    @property
    def rank(self):
        return self.free_rank

    def coordinates(self, vec):
        """Coordinates of a cocycle's class: torsion residues, then free."""
        return self._reduce(vec)

    def same_group(self, other: "CohomologyGroup") -> bool:
        return (
            self.ring == other.ring
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        name = self.ring.name
        parts = []
        if self.free_rank:
            base = "Z" if self.ring is ZZ else name
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<{self.describe()} over {self.ring.name}>"


def _trivial_group(ring):
    return CohomologyGroup(ring, 0, (), zeros(0, 0), lambda v: [])


def cohomology_group(ring, d_out, d_in) -> CohomologyGroup:
    """ker(d_out) / im(d_in) for one degree of a cochain complex.

    ``d_out`` maps this degree forward, ``d_in`` maps into it; pass None for
    a missing matrix (degree 0, or the top of a truncation).  Matrix columns
    index the source basis.
    """
    if d_out is not None:
        n = d_out.shape[1]
    elif d_in is not None:
        n = d_in.shape[0]
    else:
        raise ValueError("need at least one differential")
    if d_in is not None and d_out is not None and d_in.shape[0] != n:
        raise ValueError("differentials do not compose")
    if n == 0:
        return _trivial_group(ring)
    if d_in is None:
        d_in = zeros(n, 0)
    if d_out is None:
        d_out = zeros(0, n)
    if ring.is_field:
        return _field_cohomology(ring, d_out, d_in)
    if ring is ZZ:
        return _integer_cohomology(d_out, d_in)
    raise ValueError(f"cohomology is not supported over {ring!r}")


def _field_cohomology(ring, d_out, d_in):
    K = field_kernel(d_out, ring)  # n x z
    z = K.shape[1]
    if z == 0:
        return _trivial_group(ring)
    # image generators inside kernel coordinates
    Y = field_solve(K, d_in, ring)
    assert Y is not None, "image is not contained in the kernel"
    R, pivots = field_rref(np.ascontiguousarray(Y.T), ring)
    # quotient basis: kernel coordinates not pivotal for the image
    free = [j for j in range(z) if j not in pivots]
    gens = zeros(K.shape[0], len(free))
    for idx, j in enumerate(free):
        gens[:, idx] = K[:, j]

    def reducer(vec, K=K, R=R, pivots=pivots, free=free):
        a = field_solve(K, np.asarray(vec, dtype=object), ring)
        if a is None:
            raise ValueError("vector is not a cocycle")
        a = [a[i, 0] for i in range(K.shape[1])]
        # subtract image parts recorded in rref rows
        for r, pj in enumerate(pivots):
            c = a[pj]
            if not ring.is_zero(c):
                for j in range(len(a)):
                    a[j] = ring.convert(a[j] - c * R[r, j])
        return [a[j] for j in free]

    return CohomologyGroup(ring, len(free), (), gens, reducer)


def _integer_cohomology(d_out, d_in):
    K = integer_kernel(d_out)  # n x z, saturated
    z = K.shape[1]
    if z == 0:
        return _trivial_group(ZZ)
    Y = integer_solve(K, d_in)
    assert Y is not None, "image is not contained in the saturated kernel"
    snf = smith_normal_form(Y)
    # coker(Y) = coker(D) via a -> Uinv-coordinates: class of K a depends on
    # (U a)_i mod D_ii
    diag = [snf.D[i, i] if i < min(snf.D.shape) else 0 for i in range(z)]
    torsion_idx = [i for i in range(z) if diag[i] not in (0, 1)]
    free_idx = [i for i in range(z) if diag[i] == 0]
    order = torsion_idx + free_idx
    KU = mat_mul(K, snf.Uinv)  # generator i of the quotient is column i
    gens = zeros(K.shape[0], len(order))
    for idx, i in enumerate(order):
        gens[:, idx] = KU[:, i]

    def reducer(vec, K=K, U=snf.U, diag=diag, order=order):
        a = integer_solve(K, np.asarray(vec, dtype=object))
        if a is None:
            raise ValueError("vector is not an integer cocycle")
        b = mat_mul(U, a.reshape(-1, 1))
        out = []
        for i in order:
            v = int(b[i, 0])
            out.append(v % diag[i] if diag[i] else v)
        return out

    return CohomologyGroup(
        ZZ, len(free_idx), [int(diag[i]) for i in torsion_idx], gens, reducer
    )


def induced_matrix(source: CohomologyGroup, target: CohomologyGroup, f):
    """Matrix of a cochain map on cohomology, columns = images of source
    generators in target coordinates."""
    cols = []
    for j in range(source.generators.shape[1]):
        image = mat_mul(f, source.generators[:, j].reshape(-1, 1))
        cols.append(target.coordinates(image[:, 0]))
    n = len(target.torsion) + target.free_rank
    M = zeros(n, len(cols))
    for j, c in enumerate(cols):
        for i in range(n):
            M[i, j] = c[i]
    return M


# ---------------------------------------------------------------------------
# sparse exact elimination

# Equalizer systems for global cochain complexes are large but extremely
# sparse (a handful of entries per constraint row), so dense Smith forms
# are out of reach while unimodular column reduction of [A; I] is cheap.


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _sparse_reduce(columns, nrows, ring):
    """Column-reduce [A; I] by unimodular operations.

    columns: list of {row: value} dicts.  Returns (acol, icol, active):
    the reduced A-parts, the accumulated I-parts, and the indices of
    columns never used as pivots (their A-part is zero).
    """
    if not (ring.is_field or ring is ZZ):
        raise ValueError(f"sparse elimination needs a field or ZZ, not {ring!r}")
    conv = ring.convert
    acol = []
    for c in columns:
        col = {}
        for r, v in c.items():
            v = conv(v)
            if not ring.is_zero(v):
                col[r] = v
        acol.append(col)
    icol = [{j: conv(1)} for j in range(len(columns))]
    byrow = {}
    for j, col in enumerate(acol):
        for r in col:
            byrow.setdefault(r, set()).add(j)

    def addmul(dst, src, q):
        if ring.is_zero(q):
            return
        col = acol[dst]
        for r, v in acol[src].items():
            nv = conv(col.get(r, 0) + q * v)
            if ring.is_zero(nv):
                if r in col:
                    del col[r]
                    byrow[r].discard(dst)
            else:
                if r not in col:
                    byrow.setdefault(r, set()).add(dst)
                col[r] = nv
        col = icol[dst]
        for r, v in icol[src].items():
            nv = conv(col.get(r, 0) + q * v)
            if ring.is_zero(nv):
                col.pop(r, None)
            else:
                col[r] = nv

    active = set(range(len(columns)))
    for r in range(nrows):
        if r not in byrow:
            continue
        cols = sorted(j for j in byrow[r] if j in active)
        if not cols:
            continue
        if ring.is_field:
            piv = cols[0]
            pv = acol[piv][r]
            for j in cols[1:]:
                addmul(j, piv, conv(-acol[j][r] * ring.invert(pv)))
            active.discard(piv)
            continue
        while len(cols) > 1:
            cols.sort(key=lambda j: (abs(acol[j][r]), j))
            piv = cols[0]
            pv = acol[piv][r]
            for j in cols[1:]:
                q = acol[j][r] // pv
                if q:
                    addmul(j, piv, -q)
            cols = sorted(j for j in byrow[r] if j in active)
        if cols:
            active.discard(cols[0])
    return acol, icol, active


def sparse_kernel(columns, nrows, ring):
    """Kernel of the sparse matrix with the given columns, as a dense
    matrix of column vectors.  Over ZZ the basis is saturated."""
    acol, icol, active = _sparse_reduce(columns, nrows, ring)
    kernel_cols = sorted(active)
    for j in kernel_cols:
        assert not acol[j]
    K = zeros(len(columns), len(kernel_cols))
    for out, j in enumerate(kernel_cols):
        for r, v in icol[j].items():
            K[r, out] = v
    return K


def sparse_solve(columns, nrows, rhs, ring):
    """One solution of A x = b for sparse columns and b: {row: value}.

    Returns a dense vector or None when no solution exists over the ring.
    """
    aug = list(columns) + [dict(rhs)]
    n = len(columns)
    acol, icol, active = _sparse_reduce(aug, nrows, ring)
    witnesses = []
    for j in sorted(active):
        t = icol[j].get(n)
        if t is not None:
            witnesses.append((t, icol[j]))
    if not witnesses:
        return None
    x = zeros(n, 1)[:, 0]
    if ring.is_field:
        t, col = witnesses[0]
        scale = ring.convert(-ring.invert(t))
        for r, v in col.items():
            if r < n:
                x[r] = ring.convert(scale * v)
        return x
    g, combo = 0, {}
    for t, col in witnesses:
        g2, a, b = _xgcd(g, t)
        merged = {}
        for r, v in combo.items():
            merged[r] = a * v
        for r, v in col.items():
            merged[r] = merged.get(r, 0) + b * v
        combo = {r: v for r, v in merged.items() if v}
        g = g2
        if abs(g) == 1:
            break
    if abs(g) != 1:
        return None
    sign = -g
    for r, v in combo.items():
        if r < n:
            x[r] = sign * v
    return x
