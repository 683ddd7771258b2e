"""Cylinders over the simplex direction and their cochain algebra.

Tensoring a presentation with a standard simplex leaves the stratum
poset untouched, so the end inclusions, the projection, and every
reindexing of the simplex coordinate are maps over the identity of the
poset.  On cochains this yields exact statements, not
up-to-homotopy ones: a two-point section of the restriction to the
ends, an explicit chain homotopy from the identity to either end
(found by solving one sparse linear system across all degrees), and
degreewise fillers witnessing that the cochain groups of the cylinder
tower form a contractible simplicial module.
"""

from __future__ import annotations

import numpy as np

from .complexes import (
    GlobalComplex,
    GlobalComplexError,
    PresentationMap,
    identity_col,
    induced_matrices,
    relative_complex,
)
from .linalg import mat_mul, sparse_solve, zeros
from .local import local_blowup
from .perversity import Perversity
from .presentations import (
    StratifiedPresentation,
    plain_simplex,
    product_cell_id,
    product_cells,
    normalize_product_simplex,
    tensor_with_standard,
)
from .words import face_word, identity_word


def _top_id(n: int) -> str:
    return ".".join(str(i) for i in range(n + 1))


def end_cell_ids(x: StratifiedPresentation, n: int, j: int):
    """Ids of the cells of x tensor Delta[n] lying over the vertex j."""
    return [
        product_cell_id(c.id, str(j), identity_word(c.dim), (0,) * (c.dim + 1))
        for c in x.cells.values()
    ]


class Prism:
    """A presentation tensored with Delta[n], with its global complex
    and the structure maps of the simplex direction.

    kmax defaults to the top cell dimension, which makes the complex
    complete (blow-ups of an m-cell stop in degree m), so chain
    homotopies can be solved with exact boundary conditions.
    """

    def __init__(self, x, n: int, perversity: Perversity, ring, kmax=None, **kwargs):
        self.base = x
        self.n = n
        self.presentation = tensor_with_standard(x, n)
        if kmax is None:
            kmax = self.presentation.max_dim()
        self.perversity = perversity
        self.ring = ring
        self.base_complex = GlobalComplex(
            x, perversity, ring, min(kmax, x.max_dim() + 1), **kwargs
        )
        self.complex = GlobalComplex(
            self.presentation, perversity, ring, kmax, **kwargs
        )
        self._simplex = plain_simplex(n)

    # ------------------------------------------------------------------
    # structure maps

    def inclusion(self, j: int) -> PresentationMap:
        """The end inclusion of the base at vertex j of the simplex."""
        if not 0 <= j <= self.n:
            raise GlobalComplexError(f"no vertex {j} on a {self.n}-simplex")
        assignment = {
            c.id: (
                product_cell_id(c.id, str(j), identity_word(c.dim), (0,) * (c.dim + 1)),
                None,
            )
            for c in self.base.cells.values()
        }
        return PresentationMap(self.base, self.presentation, assignment)

    def projection(self) -> PresentationMap:
        """The projection of the cylinder onto the base."""
        assignment = {}
        for cx, cy, f, g, pid in product_cells(self.base, self._simplex):
            assignment[pid] = (cx.id, f)
        return PresentationMap(self.presentation, self.base, assignment)

    def simplex_map(self, target: "Prism", word) -> PresentationMap:
        """The map of cylinders reindexing the simplex factor.

        word is a monotone map from the vertices of this prism's simplex
        to the target's; the base coordinate is untouched.
        """
        word = tuple(word)
        if len(word) != self.n + 1:
            raise GlobalComplexError(f"word must have {self.n + 1} entries")
        assignment = {}
        top = _top_id(target.n)
        for cx, cy, f, g, pid in product_cells(self.base, self._simplex):
            yverts = [int(t) for t in cy.id.split(".")]
            v = tuple(word[yverts[g[pos]]] for pos in range(len(g)))
            tid, rho = normalize_product_simplex(
                self.base, target._simplex, cx.id, f, top, v
            )
            assignment[pid] = (tid, rho)
        return PresentationMap(self.presentation, target.presentation, assignment)

    def collapse_map(self, j: int) -> PresentationMap:
        """The endomorphism squashing the simplex factor to its vertex j."""
        return self.simplex_map(self, (j,) * (self.n + 1))

    # ------------------------------------------------------------------
    # cochains of the cylinder

    def vertex_indicator(self, vertices):
        """Degree-zero cochain supported over a set of simplex vertices.

        On each cell, a basis vertex of the blow-up counts when all its
        non-apex coordinates lie over the chosen simplex vertices; apex
        coordinates are unconstrained.  Insertion into the complex checks
        allowability, so this raises for perversities that exclude it.
        """
        S = frozenset(vertices)
        family = {}
        for cx, cy, f, g, pid in product_cells(self.base, self._simplex):
            loc = local_blowup(self.presentation.poset, self.presentation.cells[pid].chain)
            if loc.dim(0) == 0:
                continue
            yverts = [int(t) for t in cy.id.split(".")]
            starts = []
            pos = 0
            for q in loc.block_sizes:
                starts.append(pos)
                pos += q + 1
            vec = zeros(loc.dim(0), 1)[:, 0]
            for idx, W in enumerate(loc.basis(0)):
                ok = True
                for b, (F, eps) in enumerate(W):
                    if not F:
                        continue
                    p = starts[b] + F[0]
                    if yverts[g[p]] not in S:
                        ok = False
                        break
                if ok:
                    vec[idx] = 1
            family[pid] = vec
        return self.complex.express_family(family, 0)

    def section(self, omega0, omega1, k: int):
        """A cochain on the cylinder restricting to the given cochains
        at the two ends; defined for n = 1 and exact on the nose."""
        if self.n != 1:
            raise GlobalComplexError("the section needs the interval cylinder")
        pi = self.projection()
        P = induced_matrices(pi, self.complex, self.base_complex, degrees=[k])[k]
        lift0 = mat_mul(P, np.asarray(omega0, dtype=object).reshape(-1, 1))[:, 0]
        lift1 = mat_mul(P, np.asarray(omega1, dtype=object).reshape(-1, 1))[:, 0]
        e0 = self.vertex_indicator([0])
        e1 = self.vertex_indicator([1])
        return self.complex.cup(e0, 0, lift0, k) + self.complex.cup(e1, 0, lift1, k)

    # ------------------------------------------------------------------
    # the chain homotopy to an end

    def chain_homotopy_to(self, j: int):
        """Degree-lowering maps G with dG + Gd = (collapse to j)* - id.

        Returned as {k: matrix of G_k} for k = 1..kmax, G_k mapping
        degree-k cochains to degree k-1.  When kmax covers the top cell
        dimension the identity holds in every degree; otherwise the top
        truncated degree is left unconstrained.  Raises when no homotopy
        with coefficients in the ring exists at this truncation.
        """
        cx = self.complex
        kmax = cx.kmax
        complete = kmax >= self.presentation.max_dim()
        psi = self.collapse_map(j)
        R = induced_matrices(psi, cx, cx)
        eqset = set(range(kmax)) | ({kmax} if complete else set())
        ranks = [cx.rank(k) for k in range(kmax + 1)]
        deltas = {k: cx.differential(k) for k in range(kmax)}

        var_off = {}
        nvars = 0
        for k in range(1, kmax + 1):
            var_off[k] = nvars
            nvars += ranks[k - 1] * ranks[k]
        eq_off = {}
        neqs = 0
        for k in sorted(eqset):
            eq_off[k] = neqs
            neqs += ranks[k] * ranks[k]

        def eq_index(k, a, b):
            return eq_off[k] + a * ranks[k] + b

        columns = [dict() for _ in range(nvars)]
        rhs = {}
        for k in sorted(eqset):
            Rk = R[k]
            for a in range(ranks[k]):
                for b in range(ranks[k]):
                    val = Rk[a, b] - (1 if a == b else 0)
                    if val != 0:
                        rhs[eq_index(k, a, b)] = val
        for k in range(1, kmax + 1):
            D = deltas[k - 1]
            off = var_off[k]
            for r in range(ranks[k - 1]):
                for c in range(ranks[k]):
                    col = columns[off + r * ranks[k] + c]
                    if k in eqset:
                        for a in range(ranks[k]):
                            v = D[a, r]
                            if v != 0:
                                col[eq_index(k, a, c)] = col.get(eq_index(k, a, c), 0) + v
                    if k - 1 in eqset:
                        for b in range(ranks[k - 1]):
                            v = D[c, b]
                            if v != 0:
                                col[eq_index(k - 1, r, b)] = (
                                    col.get(eq_index(k - 1, r, b), 0) + v
                                )
        sol = sparse_solve(columns, neqs, rhs, self.ring)
        if sol is None:
            raise GlobalComplexError(
                "no chain homotopy over this ring at this truncation"
            )
        out = {}
        for k in range(1, kmax + 1):
            G = zeros(ranks[k - 1], ranks[k])
            off = var_off[k]
            for r in range(ranks[k - 1]):
                for c in range(ranks[k]):
                    G[r, c] = sol[off + r * ranks[k] + c]
            out[k] = G
        return out


# ---------------------------------------------------------------------------
# fillers


def kan_filler(small: Prism, big: Prism, coords, k: int):
    """Fill a cochain on the n-cylinder to the (n+1)-cylinder.

    The result pulls back to the input along the zeroth face and to
    zero along every other face, provided all faces of the input vanish
    (no hypothesis needed when n = 0).
    """
    if big.n != small.n + 1:
        raise GlobalComplexError("prisms must be consecutive")
    s0 = big.simplex_map(small, tuple(max(v - 1, 0) for v in range(big.n + 1)))
    S0 = induced_matrices(s0, big.complex, small.complex, degrees=[k])[k]
    lifted = mat_mul(S0, np.asarray(coords, dtype=object).reshape(-1, 1))[:, 0]
    omega = big.vertex_indicator(range(1, big.n + 1))
    return big.complex.cup(omega, 0, lifted, k)


def face_operator(small: Prism, big: Prism, i: int, k: int):
    """Matrix of the i-th face of the cylinder tower on degree-k cochains."""
    if big.n != small.n + 1:
        raise GlobalComplexError("prisms must be consecutive")
    d = small.simplex_map(big, face_word(small.n, i))
    return induced_matrices(d, small.complex, big.complex, degrees=[k])[k]


# ---------------------------------------------------------------------------
# suspension


def suspension_complex(x, perversity: Perversity, ring, kmax: int, **kwargs):
    """Cochains on the interval cylinder vanishing at both ends."""
    prism = tensor_with_standard(x, 1)
    ends = end_cell_ids(x, 1, 0) + end_cell_ids(x, 1, 1)
    return relative_complex(prism, ends, perversity, ring, kmax, **kwargs)


def suspension_matches(x, perversity: Perversity, ring, k: int) -> bool:
    """Does collapsing the cylinder ends shift degree-k cohomology up by
    one, as an abstract group?"""
    gx = GlobalComplex(x, perversity, ring, k + 1).cohomology(k)
    pair = suspension_complex(x, perversity, ring, k + 2)
    return gx.same_group(pair.cohomology(k + 1))
