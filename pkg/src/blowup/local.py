"""The blown-up cochain complex attached to one chain of strata.

A weakly increasing chain c in a poset groups into blocks
s_0^[q_0] < s_1^[q_1] < ... < s_l^[q_l] (q_i counts repeats).  Its blow-up is
the tensor product

    N*(c Delta[q_0]) x ... x N*(c Delta[q_{l-1}]) x N*(Delta[q_l])

of normalized simplicial cochains, where c Delta[q] is the cone with apex
ordered after the base vertices.  A basis element is one pair (F, eps) per
block: F a subset of {0..q_i} (base vertices), eps = 1 when the apex is
included; (F, eps) has degree |F| + eps - 1 and ((), 1) is the bare apex.
The last block never sees an apex, so its eps is always 0.

Chains whose last element is not maximal get the zero complex: blown-up
cochains live only over regular simplices.

All operators here (differential, monotone pullbacks, cup product, perverse
degree) act on these bases; matrices follow the package convention of
columns indexing the source basis.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from . import linalg
from .linalg import ZZ, zeros
from .perversity import NEG_INF, Perversity, ext_add, ext_sum
from .posets import Poset, group_blocks


def _factor_elements(q: int, cone: bool):
    """All basis pairs (F, eps) of one factor, sorted by degree then shape."""
    out = []
    for size in range(q + 2):
        for F in combinations(range(q + 1), size):
            for eps in (0, 1) if cone else (0,):
                if size == 0 and eps == 0:
                    continue
                out.append((F, eps))
    out.sort(key=lambda fe: (len(fe[0]) + fe[1] - 1, fe[1], fe[0]))
    return out


def pair_degree(fe) -> int:
    F, eps = fe
    return len(F) + eps - 1


class LocalBlowup:
    """Blow-up complex of one chain; see the module docstring."""

    def __init__(self, poset: Poset, chain):
        chain = tuple(chain)
        if not chain:
            raise ValueError("chains must be nonempty")
        if not poset.is_chain(chain):
            raise ValueError(f"{chain!r} is not a chain of {poset!r}")
        self.poset = poset
        self.chain = chain
        self.blocks = group_blocks(chain)
        self.block_values = tuple(s for s, _ in self.blocks)
        self.block_sizes = tuple(q for _, q in self.blocks)
        self.regular = poset.is_regular_chain(chain)
        starts = []
        pos = 0
        for q in self.block_sizes:
            starts.append(pos)
            pos += q + 1
        self._starts = tuple(starts)
        nblocks = len(self.blocks)
        self._factors = [
            _factor_elements(q, cone=(i < nblocks - 1))
            for i, q in enumerate(self.block_sizes)
        ]
        self.total_dim = (
            sum(
                q + (1 if i < nblocks - 1 else 0)
                for i, q in enumerate(self.block_sizes)
            )
            if self.regular
            else -1
        )
        self._basis_by_degree = None
        self._index = {}
        self._diff_cache = {}
        self._sub_cache = {}

    def __eq__(self, other):
        return (
            isinstance(other, LocalBlowup)
            and self.poset == other.poset
            and self.chain == other.chain
        )

    def __hash__(self):
        return hash((self.poset, self.chain))

    def __repr__(self):
        return f"LocalBlowup({self.chain!r})"

    # basis ----------------------------------------------------------------

    def _build_basis(self):
        table = {}
        if self.regular:
            for combo in product(*self._factors):
                k = sum(pair_degree(fe) for fe in combo)
                table.setdefault(k, []).append(combo)
        self._basis_by_degree = table
        for k, elems in table.items():
            self._index[k] = {b: i for i, b in enumerate(elems)}

    def basis(self, k: int):
        if self._basis_by_degree is None:
            self._build_basis()
        return self._basis_by_degree.get(k, [])

    def basis_index(self, k: int):
        if self._basis_by_degree is None:
            self._build_basis()
        return self._index.get(k, {})

    def dim(self, k: int) -> int:
        return len(self.basis(k))

    def element_degree(self, b) -> int:
        return sum(pair_degree(fe) for fe in b)

    # differential ---------------------------------------------------------

    def differential_on_basis(self, b):
        """Coboundary of a basis element as (coefficient, element) pairs.

        Convention: (delta f)(sigma) = sum_i (-1)^i f(d_i sigma), so adding
        a vertex w to a factor costs (-1)^(position of w), with the apex in
        last position.
        """
        out = []
        koszul = 1
        for i, (F, eps) in enumerate(b):
            cone = i < len(b) - 1
            q = self.block_sizes[i]
            for w in range(q + 1):
                if w in F:
                    continue
                sign = koszul * (-1) ** sum(1 for f in F if f < w)
                newF = tuple(sorted(F + (w,)))
                out.append((sign, b[:i] + ((newF, eps),) + b[i + 1 :]))
            if cone and eps == 0:
                sign = koszul * (-1) ** len(F)
                out.append((sign, b[:i] + ((F, 1),) + b[i + 1 :]))
            koszul *= (-1) ** pair_degree((F, eps))
        return out

    def differential_matrix(self, k: int):
        """Matrix of delta from degree k to k+1 (integer entries)."""
        if k in self._diff_cache:
            return self._diff_cache[k]
        src = self.basis(k)
        tgt_index = self.basis_index(k + 1)
        D = zeros(len(tgt_index), len(src))
        for col, b in enumerate(src):
            for coeff, b2 in self.differential_on_basis(b):
                D[tgt_index[b2], col] += coeff
        self._diff_cache[k] = D
        return D

    # perverse degree ------------------------------------------------------

    def perverse_degree_basis(self, b, s):
        """Perverse degree of a basis element along the stratum s."""
        if s not in self.block_values:
            return NEG_INF
        i = self.block_values.index(s)
        if b[i][1] == 1:
            return NEG_INF
        return sum(pair_degree(fe) for fe in b[i + 1 :])

    def perverse_degree(self, coeffs, s):
        """Max over the support of a {basis: coefficient} cochain."""
        degs = [
            self.perverse_degree_basis(b, s) for b, c in coeffs.items() if c
        ]
        return max(degs, default=NEG_INF)

    def is_allowable_basis(self, b, p: Perversity) -> bool:
        return all(
            self.perverse_degree_basis(b, s) <= p(s)
            for s in self.block_values
        )

    def allowable_indices(self, k: int, p: Perversity):
        return [
            i for i, b in enumerate(self.basis(k)) if self.is_allowable_basis(b, p)
        ]

    def intersection_basis(self, k: int, p: Perversity, ring):
        """Columns spanning the degree-k intersection cochains.

        These are the p-allowable elements whose coboundary is still
        allowable, expressed in full-basis coordinates.  Over Z the basis is
        saturated; over Z/m use cocycle enumeration instead (the membership
        condition is not a direct summand there).
        """
        key = (k, p, ring)
        if key in self._sub_cache:
            return self._sub_cache[key]
        allowed = self.allowable_indices(k, p)
        n = self.dim(k)
        bad_rows = [
            i
            for i, b in enumerate(self.basis(k + 1))
            if not self.is_allowable_basis(b, p)
        ]
        D = self.differential_matrix(k)
        M = zeros(len(bad_rows), len(allowed))
        for cj, j in enumerate(allowed):
            for ri, i in enumerate(bad_rows):
                M[ri, cj] = D[i, j]
        if ring is ZZ:
            K = linalg.integer_kernel(M)
        elif ring.is_field:
            K = linalg.field_kernel(M, ring)
        else:
            raise ValueError(f"no intersection basis over {ring!r}")
        B = zeros(n, K.shape[1])
        for cj in range(K.shape[1]):
            for rj, j in enumerate(allowed):
                B[j, cj] = K[rj, cj]
        self._sub_cache[key] = B
        return B

    # monotone pullbacks ---------------------------------------------------

    def reindexed_chain(self, g):
        return tuple(self.chain[v] for v in g)

    def _block_of_position(self, pos: int) -> int:
        for i in range(len(self.blocks) - 1, -1, -1):
            if pos >= self._starts[i]:
                return i
        raise IndexError(pos)

    def pullback_on_basis(self, g, b, target: "LocalBlowup"):
        """Image of a basis element under the pullback along monotone g.

        g is a weakly increasing tuple with values in vertex positions of
        this chain; the target complex belongs to the reindexed chain.  The
        result is a list of target basis elements, each with coefficient 1:
        dropped cone blocks must carry the bare apex (else the element dies)
        and each surviving vertex is replaced by every vertex of its fiber,
        one choice at a time.
        """
        if not self.regular or not target.regular:
            return []
        assert target.chain == self.reindexed_chain(g)
        eta = {}
        fibers = {}
        for tpos, v in enumerate(g):
            j = self._block_of_position(v)
            jt = target._block_of_position(tpos)
            eta[jt] = j
            fibers.setdefault((j, v - self._starts[j]), []).append(
                tpos - target._starts[jt]
            )
        kept = set(eta.values())
        factor_terms = []
        for jt in range(len(target.blocks)):
            j = eta[jt]
            F, eps = b[j]
            if eps == 1 and jt == len(target.blocks) - 1:
                return []  # the apex never survives into a plain last factor
            choices = []
            for f in F:
                fiber = fibers.get((j, f), [])
                if not fiber:
                    return []
                choices.append(fiber)
            terms = [
                (tuple(sorted(pick)), eps) for pick in product(*choices)
            ]
            factor_terms.append(terms)
        for j in range(len(self.blocks)):
            if j not in kept and b[j] != ((), 1):
                return []
        return [tuple(combo) for combo in product(*factor_terms)]

    def pullback_matrix(self, g, k: int, target: "LocalBlowup"):
        """Degree-k matrix of the pullback along g, target basis x ours."""
        src = self.basis(k)
        tgt_index = target.basis_index(k)
        M = zeros(len(tgt_index), len(src))
        for col, b in enumerate(src):
            for b2 in self.pullback_on_basis(g, b, target):
                M[tgt_index[b2], col] += 1
        return M

    # cup product ----------------------------------------------------------

    def _vertex_positions(self, i, fe):
        """Ordered vertex list of one factor pair; the apex sorts last."""
        F, eps = fe
        verts = list(F)
        if eps:
            verts.append(self.block_sizes[i] + 1)
        return verts

    def cup_on_basis(self, a, b):
        """Cup product of two basis elements: [] or [(sign, element)].

        Factorwise front/back overlap (the last vertex of the first factor
        must be the first of the second), with the usual sign for commuting
        each second-argument factor past the later first-argument ones.
        """
        if not self.regular:
            return []
        sign = 1
        for i in range(len(a)):
            dv = pair_degree(b[i])
            if dv % 2:
                later = sum(pair_degree(a[j]) for j in range(i + 1, len(a)))
                if later % 2:
                    sign = -sign
        out = []
        for i in range(len(a)):
            q = self.block_sizes[i]
            u = self._vertex_positions(i, a[i])
            v = self._vertex_positions(i, b[i])
            if u[-1] != v[0]:
                return []
            merged = u + v[1:]
            eps = 1 if merged[-1] == q + 1 else 0
            F = tuple(w for w in merged if w <= q)
            out.append((F, eps))
        return [(sign, tuple(out))]

    def unit_coeffs(self):
        """The multiplicative unit: every vertex of the blow-up with
        coefficient 1, as a {basis: coefficient} dict in degree 0."""
        return {b: 1 for b in self.basis(0)}


@lru_cache(maxsize=None)
def local_blowup(poset: Poset, chain) -> LocalBlowup:
    return LocalBlowup(poset, chain)
