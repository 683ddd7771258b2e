"""Global blown-up intersection cochain complexes.

A global cochain assigns to every cell a local intersection cochain over
that cell's chain, compatibly with all face references: pulling the
cell's value back along a face map must give the referenced simplex's
value, pulled back along its word.  The complex is the equalizer of all
those conditions, computed degreewise as the kernel of one sparse
constraint system.  Degeneracy maps impose nothing extra because the
local complexes are normalized; the pullback machinery treats words and
honest faces uniformly.

Everything is exact: kernels over ZZ are saturated, so integer
cohomology sees honest torsion.
"""

from __future__ import annotations

import numpy as np

from .linalg import (
    ZZ,
    CohomologyGroup,
    cohomology_group,
    field_solve,
    mat_mul,
    reduce_mod,
    smith_normal_form,
    sparse_kernel,
    sparse_solve,
    zeros,
)
from .local import local_blowup
from .perversity import Perversity, pullback as perversity_pullback
from .posets import PosetMap
from .presentations import StratifiedPresentation, normalize_simplex
from .words import face_word, identity_word


class GlobalComplexError(ValueError):
    pass


class ComplexTooLarge(RuntimeError):
    pass


class _Express:
    """Coordinates of vectors against a fixed full-column-rank basis."""

    def __init__(self, B, ring):
        self.B = B
        self.ring = ring
        self.snf = None
        if ring is ZZ and B.shape[1]:
            self.snf = smith_normal_form(B)

    def __call__(self, v):
        m, n = self.B.shape
        if n == 0:
            if any(x != 0 for x in v):
                return None
            return zeros(0, 1)[:, 0]
        if self.ring is ZZ:
            c = mat_mul(self.snf.U, v.reshape(-1, 1))[:, 0]
            y = zeros(n, 1)[:, 0]
            for i in range(m):
                d = self.snf.D[i, i] if i < min(m, n) else 0
                if d:
                    if c[i] % d != 0:
                        return None
                    y[i] = c[i] // d
                elif c[i] != 0:
                    return None
            return mat_mul(self.snf.V, y.reshape(-1, 1))[:, 0]
        sol = field_solve(self.B, v.reshape(-1, 1), self.ring)
        return None if sol is None else sol[:, 0]


class GlobalComplex:
    """Degreewise model of the blown-up p-intersection cochains of a
    stratified presentation, truncated above kmax.

    Cohomology is available in degrees strictly below kmax; the top
    truncated degree lacks its outgoing differential and is refused
    rather than silently wrong.  vanish_on names a face-closed set of
    cells whose values are pinned to zero (relative complexes).
    """

    def __init__(
        self,
        presentation: StratifiedPresentation,
        perversity: Perversity,
        ring,
        kmax: int,
        vanish_on=(),
        max_generators: int = 20000,
    ):
        if presentation.restricted:
            raise GlobalComplexError("need a total presentation, not a restricted one")
        if perversity.poset != presentation.poset:
            raise GlobalComplexError("perversity lives on a different poset")
        if not (ring.is_field or ring is ZZ):
            raise GlobalComplexError(
                f"coefficients must be a field or ZZ, not {ring!r}"
            )
        if kmax < 0:
            raise GlobalComplexError("kmax must be nonnegative")
        self.presentation = presentation
        self.perversity = perversity
        self.ring = ring
        self.kmax = kmax
        vanish = frozenset(vanish_on)
        missing = vanish - set(presentation.cells)
        if missing:
            raise GlobalComplexError(f"unknown cells in vanish set: {sorted(missing)}")
        for cid in vanish:
            for ref in presentation.cells[cid].faces:
                if ref is not None and ref.cell not in vanish:
                    raise GlobalComplexError(
                        f"vanish set is not face-closed: {cid} has face {ref.cell}"
                    )
        self.vanish = vanish
        poset = presentation.poset
        self._locals = {
            cid: local_blowup(poset, c.chain)
            for cid, c in presentation.cells.items()
        }
        self._blocks = []
        self._offsets = []
        self._kernels = []
        self._kernel_cols = []
        self._diff = {}
        self._pullback_cache = {}
        for k in range(kmax + 1):
            self._build_degree(k, max_generators)

    # ------------------------------------------------------------------
    # construction

    def _build_degree(self, k: int, max_generators: int):
        blocks = []
        offsets = {}
        start = 0
        for cid, cell in self.presentation.cells.items():
            if cid in self.vanish:
                continue
            loc = self._locals[cid]
            B = loc.intersection_basis(k, self.perversity, self.ring)
            z = B.shape[1]
            if z:
                blocks.append((cid, start, B, _Express(B, self.ring), loc))
                offsets[cid] = (start, z)
                start += z
            if start > max_generators:
                raise ComplexTooLarge(
                    f"degree {k}: more than {max_generators} generators; "
                    "raise max_generators to proceed"
                )
        self._blocks.append(blocks)
        self._offsets.append(offsets)

        columns = [{} for _ in range(start)]
        nrows = 0
        for cid, cell in self.presentation.cells.items():
            if cid in self.vanish or cell.dim == 0:
                continue
            for i in range(cell.dim + 1):
                nrows = self._add_face_constraints(k, cid, cell, i, columns, nrows)
        K = sparse_kernel(columns, nrows, self.ring)
        self._kernels.append(K)
        cols = []
        for j in range(K.shape[1]):
            cols.append(
                {r: K[r, j] for r in range(K.shape[0]) if K[r, j] != 0}
            )
        self._kernel_cols.append(cols)

    def _pullback(self, chain, word, k, face_chain):
        key = (chain, word, k, face_chain)
        hit = self._pullback_cache.get(key)
        if hit is None:
            src = local_blowup(self.presentation.poset, chain)
            tgt = local_blowup(self.presentation.poset, face_chain)
            hit = src.pullback_matrix(word, k, tgt)
            self._pullback_cache[key] = hit
        return hit

    def _add_face_constraints(self, k, cid, cell, i, columns, nrows):
        x = self.presentation
        face_chain = x.face_chain(cell, i)
        face_loc = local_blowup(x.poset, face_chain)
        rows = face_loc.dim(k)
        if rows == 0:
            return nrows
        offsets = self._offsets[k]
        left = None
        if cid in offsets:
            P = self._pullback(cell.chain, face_word(cell.dim, i), k, face_chain)
            left = mat_mul(P, self._blocks_entry(k, cid)[2])
        ref = cell.faces[i]
        right = None
        rid = None
        if ref.cell not in self.vanish and ref.cell in offsets:
            tcell = x.cells[ref.cell]
            word = ref.word
            if word is None:
                word = identity_word(tcell.dim)
            P = self._pullback(tcell.chain, word, k, face_chain)
            right = mat_mul(P, self._blocks_entry(k, ref.cell)[2])
            rid = ref.cell
        if left is None and right is None:
            return nrows
        for r in range(rows):
            row_id = nrows + r
            if left is not None:
                s = offsets[cid][0]
                for c in range(left.shape[1]):
                    v = left[r, c]
                    if v != 0:
                        col = columns[s + c]
                        col[row_id] = col.get(row_id, 0) + v
            if right is not None:
                s = offsets[rid][0]
                for c in range(right.shape[1]):
                    v = right[r, c]
                    if v != 0:
                        col = columns[s + c]
                        col[row_id] = col.get(row_id, 0) - v
        return nrows + rows

    def _blocks_entry(self, k, cid):
        for entry in self._blocks[k]:
            if entry[0] == cid:
                return entry
        raise KeyError(cid)

    # ------------------------------------------------------------------
    # the complex

    def rank(self, k: int) -> int:
        self._check_degree(k)
        return self._kernels[k].shape[1]

    def ambient_rank(self, k: int) -> int:
        self._check_degree(k)
        return self._kernels[k].shape[0]

    def _check_degree(self, k: int):
        if not 0 <= k <= self.kmax:
            raise GlobalComplexError(f"degree {k} outside truncation 0..{self.kmax}")

    def differential(self, k: int):
        """Matrix of the differential rank(k) -> rank(k+1)."""
        self._check_degree(k)
        if k >= self.kmax:
            raise GlobalComplexError(
                f"differential at {k} needs degree {k + 1}; raise kmax"
            )
        if k in self._diff:
            return self._diff[k]
        K = self._kernels[k]
        D = zeros(self.rank(k + 1), self.rank(k))
        for j in range(K.shape[1]):
            image = self._differential_of_stack(K[:, j], k)
            coords = sparse_solve(
                self._kernel_cols[k + 1],
                self._kernels[k + 1].shape[0],
                {r: image[r] for r in range(len(image)) if image[r] != 0},
                self.ring,
            )
            if coords is None:
                raise GlobalComplexError(
                    "differential image left the complex; this is a bug"
                )
            D[:, j] = coords
        self._diff[k] = D
        return D

    def _differential_of_stack(self, vec, k: int):
        out = zeros(self.ambient_rank(k + 1), 1)[:, 0]
        offsets_next = self._offsets[k + 1]
        for cid, start, B, _, loc in self._blocks[k]:
            z = B.shape[1]
            c = vec[start : start + z]
            if not any(x != 0 for x in c):
                continue
            full = mat_mul(B, c.reshape(-1, 1))
            img = reduce_mod(mat_mul(loc.differential_matrix(k), full), self.ring)[:, 0]
            if cid not in offsets_next:
                if any(not self.ring.is_zero(x) for x in img):
                    raise GlobalComplexError(
                        f"differential image of {cid} misses its basis; this is a bug"
                    )
                continue
            entry = self._blocks_entry(k + 1, cid)
            coords = entry[3](img)
            if coords is None:
                raise GlobalComplexError(
                    f"differential image of {cid} misses its basis; this is a bug"
                )
            s = offsets_next[cid][0]
            out[s : s + len(coords)] += coords
        return out

    def cohomology(self, k: int) -> CohomologyGroup:
        """Intersection cohomology in degree k; needs k < kmax."""
        if k >= self.kmax:
            raise GlobalComplexError(
                f"H^{k} needs the differential into degree {k + 1}; "
                f"rebuild with kmax >= {k + 1}"
            )
        if k < 0:
            raise GlobalComplexError("negative degree")
        d_out = self.differential(k)
        d_in = self.differential(k - 1) if k >= 1 else None
        return cohomology_group(self.ring, d_out, d_in)

    # ------------------------------------------------------------------
    # cochains

    def express_family(self, family: dict, k: int):
        """Coordinates of a cochain family {cell: full local vector}.

        Raises when the family is not an allowable compatible cochain.
        """
        self._check_degree(k)
        stacked = zeros(self.ambient_rank(k), 1)[:, 0]
        seen = set()
        for cid, start, B, express, loc in self._blocks[k]:
            v = family.get(cid)
            if v is None:
                continue
            seen.add(cid)
            v = np.asarray(v, dtype=object)
            coords = express(v)
            if coords is None:
                raise GlobalComplexError(
                    f"family value on {cid} is not an allowable intersection cochain"
                )
            stacked[start : start + len(coords)] = coords
        for cid, v in family.items():
            if cid in seen:
                continue
            if cid not in self.presentation.cells:
                raise GlobalComplexError(f"unknown cell {cid}")
            if any(
                not self.ring.is_zero(self.ring.convert(x))
                for x in np.asarray(v, dtype=object)
            ):
                raise GlobalComplexError(
                    f"family value on {cid} is not an allowable intersection cochain"
                )
        coords = sparse_solve(
            self._kernel_cols[k],
            self.ambient_rank(k),
            {r: stacked[r] for r in range(len(stacked)) if stacked[r] != 0},
            self.ring,
        )
        if coords is None:
            raise GlobalComplexError("family is not compatible with the face maps")
        return coords

    def family(self, coords, k: int) -> dict:
        """Full local vectors of a cochain given in complex coordinates."""
        self._check_degree(k)
        stacked = mat_mul(
            self._kernels[k], np.asarray(coords, dtype=object).reshape(-1, 1)
        )
        out = {}
        for cid, start, B, _, loc in self._blocks[k]:
            z = B.shape[1]
            c = stacked[start : start + z, :]
            out[cid] = reduce_mod(mat_mul(B, c), self.ring)[:, 0]
        return out

    def cup(self, a, ka: int, b, kb: int):
        """Coordinates of the cup product of two cochains."""
        k = ka + kb
        self._check_degree(k)
        fa = self.family(a, ka)
        fb = self.family(b, kb)
        out = {}
        for cid, start, B, _, loc in self._blocks[k]:
            va = fa.get(cid)
            vb = fb.get(cid)
            if va is None or vb is None:
                continue
            basis_a = loc.basis(ka)
            basis_b = loc.basis(kb)
            index = loc.basis_index(k)
            vec = zeros(loc.dim(k), 1)[:, 0]
            for ia, ba in enumerate(basis_a):
                if va[ia] == 0:
                    continue
                for ib, bb in enumerate(basis_b):
                    if vb[ib] == 0:
                        continue
                    for coeff, prod in loc.cup_on_basis(ba, bb):
                        vec[index[prod]] += coeff * va[ia] * vb[ib]
            out[cid] = vec
        return self.express_family(out, k)

    def unit(self):
        """Coordinates of the multiplicative unit in degree zero."""
        family = {}
        for cid, _, _, _, loc in self._blocks[0]:
            idx = loc.basis_index(0)
            v = zeros(loc.dim(0), 1)[:, 0]
            for b, coeff in loc.unit_coeffs().items():
                v[idx[b]] = coeff
            family[cid] = v
        return self.express_family(family, 0)

    def contains(self, other: "GlobalComplex", k: int) -> bool:
        """Does this complex contain the other one's degree-k cochains?

        Both must share the presentation, ring, and truncation; this is
        the monotonicity check for comparable perversities.
        """
        if (
            other.presentation is not self.presentation
            and other.presentation != self.presentation
        ):
            raise GlobalComplexError("different presentations")
        for j in range(other.rank(k)):
            fam = other.family(identity_col(other.rank(k), j), k)
            try:
                self.express_family(fam, k)
            except GlobalComplexError:
                return False
        return True


def identity_col(n: int, j: int):
    v = zeros(n, 1)[:, 0]
    v[j] = 1
    return v


def intersection_cohomology(
    presentation: StratifiedPresentation,
    perversity: Perversity,
    ring,
    k: int,
    kmax=None,
    vanish_on=(),
) -> CohomologyGroup:
    """One intersection cohomology group, building a fresh complex."""
    if kmax is None:
        kmax = k + 1
    cx = GlobalComplex(presentation, perversity, ring, kmax, vanish_on=vanish_on)
    return cx.cohomology(k)


def relative_complex(
    presentation: StratifiedPresentation,
    subcomplex_cells,
    perversity: Perversity,
    ring,
    kmax: int,
    **kwargs,
) -> GlobalComplex:
    """Cochains vanishing on a face-closed set of cells."""
    return GlobalComplex(
        presentation, perversity, ring, kmax, vanish_on=subcomplex_cells, **kwargs
    )


# ---------------------------------------------------------------------------
# maps


class PresentationMap:
    """Stratified simplicial map between presentations.

    assignment maps each source cell id to (target cell id, word), the
    word being any monotone vertex map into the target cell; the image
    of the source cell is the target cell pulled back along the word.
    strata is the underlying poset map; omit it when both presentations
    share a poset and the map preserves chains on the nose.
    """

    def __init__(
        self,
        source: StratifiedPresentation,
        target: StratifiedPresentation,
        assignment: dict,
        strata: PosetMap = None,
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.strata = strata
        self.assignment = {}
        for cid, (tid, word) in assignment.items():
            if word is None:
                word = identity_word(target.cells[tid].dim)
            ref = normalize_simplex(target, tid, tuple(word))
            if ref is None:
                raise GlobalComplexError(
                    f"image of {cid} is missing from the target (restricted?)"
                )
            self.assignment[cid] = ref
        if check:
            self._check()

    def _check(self):
        missing = set(self.source.cells) - set(self.assignment)
        if missing:
            raise GlobalComplexError(f"cells without image: {sorted(missing)}")
        if self.strata is None and self.source.poset != self.target.poset:
            raise GlobalComplexError("different posets need an explicit poset map")
        for cid, cell in self.source.cells.items():
            ref = self.assignment[cid]
            got = self.target.chain_of_simplex(ref)
            want = cell.chain
            if self.strata is not None:
                want = tuple(self.strata(s) for s in want)
            if got != want:
                raise GlobalComplexError(
                    f"chain condition fails on {cid}: image chain {got}, expected {want}"
                )
            if cell.dim == 0:
                continue
            for i in range(cell.dim + 1):
                face = cell.faces[i]
                fw = face.word if face.word is not None else identity_word(
                    self.source.cells[face.cell].dim
                )
                img = self.assignment[face.cell]
                iw = img.word if img.word is not None else identity_word(
                    self.target.cells[img.cell].dim
                )
                via_face = normalize_simplex(
                    self.target, img.cell, tuple(iw[v] for v in fw)
                )
                via_image = self.target.face_of_simplex(ref, i)
                if via_face != via_image:
                    raise GlobalComplexError(
                        f"map is not simplicial at face {i} of {cid}: "
                        f"{via_face} != {via_image}"
                    )

    def image_ref(self, cid: str):
        return self.assignment[cid]

    def compose(self, other: "PresentationMap") -> "PresentationMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise GlobalComplexError("maps do not compose")
        assignment = {}
        for cid in other.source.cells:
            mid = other.assignment[cid]
            mw = mid.word if mid.word is not None else identity_word(
                self.source.cells[mid.cell].dim
            )
            out = self.assignment[mid.cell]
            ow = out.word if out.word is not None else identity_word(
                self.target.cells[out.cell].dim
            )
            assignment[cid] = (out.cell, tuple(ow[v] for v in mw))
        strata = None
        if self.strata is not None or other.strata is not None:
            inner = other.strata or PosetMap.identity(other.source.poset)
            outer = self.strata or PosetMap.identity(self.source.poset)
            strata = outer.compose(inner)
        return PresentationMap(
            other.source, self.target, assignment, strata=strata, check=False
        )


def induced_matrices(
    fmap: PresentationMap,
    source_complex: GlobalComplex,
    target_complex: GlobalComplex,
    degrees=None,
):
    """Pullback matrices of a map on global complexes, degree by degree.

    source_complex lives on fmap.source, target_complex on fmap.target;
    the pullback goes from the target complex to the source complex.
    The source perversity must dominate the pulled-back target
    perversity stratum by stratum.
    """
    if source_complex.presentation != fmap.source:
        raise GlobalComplexError("source complex does not match the map")
    if target_complex.presentation != fmap.target:
        raise GlobalComplexError("target complex does not match the map")
    if source_complex.ring is not target_complex.ring:
        raise GlobalComplexError("coefficient rings differ")
    p = source_complex.perversity
    q = target_complex.perversity
    strata = fmap.strata
    pulled = perversity_pullback(strata, q) if strata is not None else q
    for s in p.poset.elements:
        if not p.poset.is_maximal(s) and p(s) < pulled(s):
            raise GlobalComplexError(
                f"perversity obstruction at stratum {s}: "
                f"source allows {p(s)}, pulled-back target needs {pulled(s)}"
            )
    if degrees is None:
        degrees = range(min(source_complex.kmax, target_complex.kmax) + 1)
    out = {}
    for k in degrees:
        out[k] = _induced_matrix_degree(fmap, source_complex, target_complex, k)
    return out


def _induced_matrix_degree(fmap, source_complex, target_complex, k):
    src = source_complex
    tgt = target_complex
    M = zeros(src.rank(k), tgt.rank(k))
    for j in range(tgt.rank(k)):
        fam = tgt.family(identity_col(tgt.rank(k), j), k)
        pulled = {}
        for cid, cell in src.presentation.cells.items():
            ref = fmap.image_ref(cid)
            tcell = tgt.presentation.cells[ref.cell]
            vec = fam.get(ref.cell)
            if vec is None or not any(v != 0 for v in vec):
                continue
            word = ref.word if ref.word is not None else identity_word(tcell.dim)
            tloc = local_blowup(tgt.presentation.poset, tcell.chain)
            image_chain = tuple(tcell.chain[v] for v in word)
            floc = local_blowup(tgt.presentation.poset, image_chain)
            P = tloc.pullback_matrix(word, k, floc)
            v = mat_mul(P, vec.reshape(-1, 1))[:, 0]
            sloc = local_blowup(src.presentation.poset, cell.chain)
            if fmap.strata is not None and sloc.block_sizes != floc.block_sizes:
                # equal block sizes make the two local complexes literally
                # the same cochain groups, so values transport unchanged
                raise GlobalComplexError(
                    f"the poset map merges chain blocks on cell {cid}; "
                    "such maps are outside the supported class"
                )
            if any(x != 0 for x in v):
                pulled[cid] = v
        M[:, j] = src.express_family(pulled, k)
    return M


def induced_on_cohomology(
    fmap: PresentationMap,
    source_complex: GlobalComplex,
    target_complex: GlobalComplex,
    k: int,
):
    """Matrix of the pullback on degree-k cohomology, in the coordinate
    systems of the two cohomology groups."""
    from .linalg import induced_matrix

    M = induced_matrices(fmap, source_complex, target_complex, degrees=[k])[k]
    return induced_matrix(
        target_complex.cohomology(k), source_complex.cohomology(k), M
    )
