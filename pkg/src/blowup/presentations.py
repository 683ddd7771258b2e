"""Finite presentations of stratified simplicial sets.

A presentation lists the cells (nondegenerate simplices) of a simplicial
set together with a weakly increasing chain of strata labels per cell.
Faces of a cell may be degenerate, so a face reference is a pair
(cell, word): the target cell pulled back along a monotone surjection.
A plain reference (word None) is an honest nondegenerate face.

Restricted presentations (the image of `restrict`) keep only cells whose
chain is regular, i.e. ends at a maximal stratum; face slots whose chain
would be non-regular hold None.  `extend_n` and `extend_i` rebuild total
presentations from restricted ones in the two extreme ways.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .posets import Poset, PosetError, chain_poset, point_poset
from .words import (
    collapse_repeats,
    compose,
    epi_mono_factor,
    face_word,
    identity_word,
    is_monotone,
    is_surjective,
    joint_collapse,
    normalize_word,
)


class PresentationError(ValueError):
    pass


class FaceRef(NamedTuple):
    cell: str
    word: Optional[tuple]


def plain(cell_id: str) -> FaceRef:
    return FaceRef(cell_id, None)


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    chain: tuple
    faces: tuple

    def __post_init__(self):
        if self.dim < 0:
            raise PresentationError(f"cell {self.id}: negative dimension")
        if len(self.chain) != self.dim + 1:
            raise PresentationError(
                f"cell {self.id}: chain length {len(self.chain)} != dim+1"
            )


@dataclass
class ValidationReport:
    ok: bool
    errors: list
    n_cells: int
    cells_by_dim: dict
    maximal_cells: list
    regular_cells: list
    nonsingular_cells: list

    def __str__(self):
        lines = ["valid" if self.ok else "INVALID"]
        lines.append(f"cells: {self.n_cells} {self.cells_by_dim}")
        lines.append(f"maximal: {', '.join(self.maximal_cells) or '-'}")
        lines.append(f"regular: {len(self.regular_cells)} of {self.n_cells}")
        lines.append(f"non-singular part: {len(self.nonsingular_cells)} cells")
        lines.extend(f"error: {e}" for e in self.errors)
        return "\n".join(lines)


class StratifiedPresentation:
    """Cells indexed by id, over a fixed stratum poset."""

    def __init__(self, poset: Poset, cells, restricted: bool = False):
        self.poset = poset
        self.restricted = restricted
        self.cells = {}
        for cell in cells:
            if cell.id in self.cells:
                raise PresentationError(f"duplicate cell id {cell.id}")
            self.cells[cell.id] = cell

    def __eq__(self, other):
        return (
            isinstance(other, StratifiedPresentation)
            and self.poset == other.poset
            and self.restricted == other.restricted
            and self.cells == other.cells
        )

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell_id):
        return cell_id in self.cells

    def __repr__(self):
        kind = "RestrictedPresentation" if self.restricted else "StratifiedPresentation"
        return f"{kind}({len(self.cells)} cells over {self.poset!r})"

    def max_dim(self):
        return max((c.dim for c in self.cells.values()), default=-1)

    def cells_of_dim(self, d):
        return [c for c in self.cells.values() if c.dim == d]

    def chain_of_simplex(self, ref: FaceRef):
        cell = self.cells[ref.cell]
        if ref.word is None:
            return cell.chain
        return tuple(cell.chain[v] for v in ref.word)

    def face_chain(self, cell: Cell, i: int):
        return tuple(cell.chain[j] for j in range(cell.dim + 1) if j != i)

    def face_of_simplex(self, ref: FaceRef, i: int):
        """The i-th face of the possibly degenerate simplex (cell, word).

        Returns a normalized FaceRef, or None (restricted presentations
        only) when the face slot is missing.
        """
        cell = self.cells[ref.cell]
        if ref.word is None:
            if not 0 <= i <= cell.dim:
                raise PresentationError(f"face index {i} out of range on {cell.id}")
            return cell.faces[i]
        m = len(ref.word) - 1
        if not 0 <= i <= m:
            raise PresentationError(f"face index {i} out of range on {ref}")
        hd = compose(ref.word, face_word(m, i))
        if is_surjective(hd, cell.dim):
            return FaceRef(cell.id, normalize_word(hd, cell.dim))
        # hd misses exactly the value ref.word[i]; strip one face off cell
        t = ref.word[i]
        u = tuple(v if v < t else v - 1 for v in hd)
        inner = cell.faces[t]
        if inner is None:
            return None
        g = inner.word if inner.word is not None else identity_word(
            self.cells[inner.cell].dim
        )
        target = self.cells[inner.cell]
        return FaceRef(inner.cell, normalize_word(compose(g, u), target.dim))

    def regularity_mask(self):
        reg = self.poset.is_regular_chain
        return {cid: reg(c.chain) for cid, c in self.cells.items()}

    def validate(self) -> ValidationReport:
        errors = []
        targets = set()
        for cell in self.cells.values():
            self._validate_cell(cell, errors, targets)
        for cell in self.cells.values():
            if cell.dim < 2:
                continue
            for j in range(cell.dim + 1):
                for i in range(j):
                    if cell.faces[i] is None or cell.faces[j] is None:
                        continue
                    left = self.face_of_simplex(cell.faces[j], i)
                    right = self.face_of_simplex(cell.faces[i], j - 1)
                    if left != right:
                        errors.append(
                            f"cell {cell.id}: d_{i} d_{j} = {left} but "
                            f"d_{j - 1} d_{i} = {right}"
                        )
        by_dim = {}
        for cell in self.cells.values():
            by_dim[cell.dim] = by_dim.get(cell.dim, 0) + 1
        mask = self.regularity_mask()
        maximal = [cid for cid in self.cells if cid not in targets]
        regular = [cid for cid, ok in mask.items() if ok]
        nonsingular = [
            cid
            for cid, c in self.cells.items()
            if len(set(c.chain)) == 1 and self.poset.is_maximal(c.chain[0])
        ]
        return ValidationReport(
            ok=not errors,
            errors=errors,
            n_cells=len(self.cells),
            cells_by_dim=dict(sorted(by_dim.items())),
            maximal_cells=maximal,
            regular_cells=regular,
            nonsingular_cells=nonsingular,
        )

    def _validate_cell(self, cell, errors, targets):
        if not self.poset.is_chain(cell.chain):
            errors.append(f"cell {cell.id}: {cell.chain} is not a chain")
        if self.restricted and not self.poset.is_regular_chain(cell.chain):
            errors.append(f"cell {cell.id}: non-regular chain in restriction")
        expected = 0 if cell.dim == 0 else cell.dim + 1
        if len(cell.faces) != expected:
            errors.append(
                f"cell {cell.id}: {len(cell.faces)} face slots, expected {expected}"
            )
            return
        for i, ref in enumerate(cell.faces):
            if ref is None:
                if not self.restricted:
                    errors.append(f"cell {cell.id}: missing face {i}")
                elif self.poset.is_regular_chain(self.face_chain(cell, i)):
                    errors.append(
                        f"cell {cell.id}: face {i} has a regular chain but no reference"
                    )
                continue
            if self.restricted and not self.poset.is_regular_chain(
                self.face_chain(cell, i)
            ):
                errors.append(
                    f"cell {cell.id}: face {i} is non-regular but holds a reference"
                )
                continue
            if ref.cell not in self.cells:
                errors.append(f"cell {cell.id}: face {i} targets unknown {ref.cell}")
                continue
            target = self.cells[ref.cell]
            if ref.word is None:
                if target.dim != cell.dim - 1:
                    errors.append(
                        f"cell {cell.id}: plain face {i} has dimension {target.dim}"
                    )
            else:
                w = ref.word
                if (
                    len(w) != cell.dim
                    or not is_monotone(w)
                    or not is_surjective(w, target.dim)
                ):
                    errors.append(f"cell {cell.id}: face {i} word {w} invalid")
                    continue
                if w == identity_word(target.dim):
                    errors.append(f"cell {cell.id}: face {i} word not normalized")
            if self.chain_of_simplex(ref) != self.face_chain(cell, i):
                errors.append(
                    f"cell {cell.id}: face {i} chain {self.chain_of_simplex(ref)} "
                    f"!= {self.face_chain(cell, i)}"
                )
            targets.add(ref.cell)

    def assert_valid(self):
        report = self.validate()
        if not report.ok:
            raise PresentationError("; ".join(report.errors))
        return report


def validate(presentation: StratifiedPresentation) -> ValidationReport:
    return presentation.validate()


# ---------------------------------------------------------------------------
# basic constructors


def standard_simplex(poset: Poset, chain) -> StratifiedPresentation:
    """The simplex on a weakly increasing chain, one cell per vertex subset."""
    chain = tuple(chain)
    if not chain or not poset.is_chain(chain):
        raise PresentationError(f"{chain} is not a nonempty chain")
    n = len(chain) - 1
    subset_id = lambda s: ".".join(map(str, s))
    cells = []
    for size in range(1, n + 2):
        for subset in _subsets(n + 1, size):
            faces = tuple(
                plain(subset_id(subset[:k] + subset[k + 1 :])) for k in range(size)
            ) if size > 1 else ()
            cells.append(
                Cell(
                    id=subset_id(subset),
                    dim=size - 1,
                    chain=tuple(chain[i] for i in subset),
                    faces=faces,
                )
            )
    return StratifiedPresentation(poset, cells)


def _subsets(n, size):
    from itertools import combinations

    return [tuple(c) for c in combinations(range(n), size)]


def plain_simplex(n: int) -> StratifiedPresentation:
    return standard_simplex(point_poset(), (0,) * (n + 1))


def boundary_simplex(n: int) -> StratifiedPresentation:
    """The boundary sphere of the plain n-simplex."""
    full = plain_simplex(n)
    top = ".".join(map(str, range(n + 1)))
    cells = [c for c in full.cells.values() if c.id != top]
    return StratifiedPresentation(point_poset(), cells)


def nerve(poset: Poset, max_length=None) -> StratifiedPresentation:
    """Nondegenerate simplices are the strictly increasing chains."""
    if max_length is None:
        max_length = len(poset)
    chain_id = lambda c: "<".join(map(str, c))
    cells = []
    for chain in poset.strict_chains(max_length):
        size = len(chain)
        faces = tuple(
            plain(chain_id(chain[:k] + chain[k + 1 :])) for k in range(size)
        ) if size > 1 else ()
        cells.append(Cell(chain_id(chain), size - 1, chain, faces))
    return StratifiedPresentation(poset, cells)


def forget_stratification(x: StratifiedPresentation) -> StratifiedPresentation:
    """The same simplicial set over the one-point poset."""
    cells = [
        Cell(c.id, c.dim, (0,) * (c.dim + 1), c.faces) for c in x.cells.values()
    ]
    return StratifiedPresentation(point_poset(), cells)


# ---------------------------------------------------------------------------
# join


def join(a: StratifiedPresentation, b: StratifiedPresentation):
    """Simplicial join, stratified over the two-element chain poset.

    Both inputs must be single-stratum.  Cells of `a` become singular
    (stratum 0, the cone direction), cells of `b` regular (stratum 1).
    """
    if len(a.poset) != 1 or len(b.poset) != 1:
        raise PresentationError("join expects single-stratum presentations")
    poset = chain_poset(1)
    cells = []

    def a_ref(ref):
        return FaceRef("a." + ref.cell, ref.word)

    def b_ref(ref):
        return FaceRef("b." + ref.cell, ref.word)

    for c in a.cells.values():
        cells.append(
            Cell("a." + c.id, c.dim, (0,) * (c.dim + 1), tuple(map(a_ref, c.faces)))
        )
    for c in b.cells.values():
        cells.append(
            Cell("b." + c.id, c.dim, (1,) * (c.dim + 1), tuple(map(b_ref, c.faces)))
        )
    for x in a.cells.values():
        for y in b.cells.values():
            m = x.dim + y.dim + 1
            faces = []
            for k in range(m + 1):
                if k <= x.dim:
                    if x.dim == 0:
                        faces.append(plain("b." + y.id))
                        continue
                    tref = x.faces[k]
                    tdim = a.cells[tref.cell].dim
                    w = tref.word if tref.word is not None else identity_word(tdim)
                    word = w + tuple(tdim + 1 + t for t in range(y.dim + 1))
                    faces.append(
                        FaceRef(
                            f"{tref.cell}*{y.id}",
                            normalize_word(word, tdim + y.dim + 1),
                        )
                    )
                else:
                    if y.dim == 0:
                        faces.append(plain("a." + x.id))
                        continue
                    tref = y.faces[k - x.dim - 1]
                    tdim = b.cells[tref.cell].dim
                    w = tref.word if tref.word is not None else identity_word(tdim)
                    word = tuple(range(x.dim + 1)) + tuple(x.dim + 1 + t for t in w)
                    faces.append(
                        FaceRef(
                            f"{x.id}*{tref.cell}",
                            normalize_word(word, x.dim + tdim + 1),
                        )
                    )
            chain = (0,) * (x.dim + 1) + (1,) * (y.dim + 1)
            cells.append(Cell(f"{x.id}*{y.id}", m, chain, tuple(faces)))
    return StratifiedPresentation(poset, cells)


def cone(x: StratifiedPresentation) -> StratifiedPresentation:
    """Join with a singular apex point."""
    return join(plain_simplex(0), x)


def crac() -> StratifiedPresentation:
    """A triangle whose singular part is one of its edges."""
    return join(plain_simplex(1), plain_simplex(0))


def butterfly() -> StratifiedPresentation:
    """Two triangles glued at a single singular vertex."""
    v = lambda name, s: Cell(name, 0, (s,), ())
    e = lambda name, p, q, s: Cell(name, 1, s, (plain(q), plain(p)))
    t = lambda name, e01, e02, e12: Cell(
        name, 2, (0, 1, 1), (plain(e12), plain(e02), plain(e01))
    )
    cells = [
        v("a", 0),
        v("b", 1),
        v("c", 1),
        v("d", 1),
        v("e", 1),
        e("ab", "a", "b", (0, 1)),
        e("ac", "a", "c", (0, 1)),
        e("bc", "b", "c", (1, 1)),
        e("ad", "a", "d", (0, 1)),
        e("ae", "a", "e", (0, 1)),
        e("de", "d", "e", (1, 1)),
        t("abc", "ab", "ac", "bc"),
        t("ade", "ad", "ae", "de"),
    ]
    return StratifiedPresentation(chain_poset(1), cells)


# ---------------------------------------------------------------------------
# products


def _staircases(dx, dy):
    """All jointly injective pairs of monotone surjections onto [dx], [dy]."""
    out = []

    def walk(i, j, f, g):
        if i == dx and j == dy:
            out.append((tuple(f), tuple(g)))
        if i < dx:
            walk(i + 1, j, f + [i + 1], g + [j])
        if i < dx and j < dy:
            walk(i + 1, j + 1, f + [i + 1], g + [j + 1])
        if j < dy:
            walk(i, j + 1, f + [i], g + [j + 1])
    walk(0, 0, [0], [0])
    return out


def product_cell_id(xid, yid, f, g):
    fs = ".".join(map(str, f))
    gs = ".".join(map(str, g))
    return f"{xid}*{yid}@{fs}|{gs}"


def product_cells(x: StratifiedPresentation, y: StratifiedPresentation):
    """The cells of product(x, y), as tuples (cx, cy, f, g, id), in the
    order the product constructor creates them."""
    for cx in x.cells.values():
        for cy in y.cells.values():
            for f, g in _staircases(cx.dim, cy.dim):
                yield cx, cy, f, g, product_cell_id(cx.id, cy.id, f, g)


def normalize_simplex(x: StratifiedPresentation, cell_id: str, word) -> FaceRef:
    """The simplex word^*(cell) as a normalized reference.

    The word may be any monotone map into the cell's vertices; its
    epi-mono factorization routes the monic part through iterated faces.
    """
    image, surj = epi_mono_factor(word)
    ref = iterated_face(x, cell_id, image)
    if ref is None:
        return None
    w = ref.word if ref.word is not None else identity_word(x.cells[ref.cell].dim)
    return FaceRef(
        ref.cell, normalize_word(compose(w, surj), x.cells[ref.cell].dim)
    )


def iterated_face(x: StratifiedPresentation, cell_id: str, vertices) -> FaceRef:
    """Restrict a cell to a subset of its vertices, as a normalized reference.

    Removes the complementary vertices from the top, one face map at a time.
    Returns None if a required face slot is missing (restricted input).
    """
    cell = x.cells[cell_id]
    keep = set(vertices)
    current = list(range(cell.dim + 1))
    ref = FaceRef(cell_id, None)
    for v in sorted(current, reverse=True):
        if v in keep:
            continue
        ref = x.face_of_simplex(ref, current.index(v))
        if ref is None:
            return None
        current.remove(v)
    return ref


def normalize_product_simplex(x, y, xid, f, yid, g):
    """Express a product simplex (f^* xid, g^* yid) over a product cell.

    f and g are monotone words into the two cell dimensions, not
    necessarily surjective or jointly injective.  Returns (cell id, word).
    """
    imf, sf = epi_mono_factor(f)
    img, sg = epi_mono_factor(g)
    xref = iterated_face(x, xid, imf)
    yref = iterated_face(y, yid, img)
    xw = xref.word if xref.word is not None else identity_word(x.cells[xref.cell].dim)
    yw = yref.word if yref.word is not None else identity_word(y.cells[yref.cell].dim)
    fx = compose(xw, sf)
    gy = compose(yw, sg)
    f2, g2, rho = joint_collapse(fx, gy)
    return product_cell_id(xref.cell, yref.cell, f2, g2), rho


def product(x: StratifiedPresentation, y: StratifiedPresentation, labels: str):
    """Cartesian product; stratum chains come from one chosen factor.

    labels="first" keeps the stratification of x (y is treated as plain),
    labels="second" the other way around.
    """
    if labels not in ("first", "second"):
        raise PresentationError("labels must be 'first' or 'second'")
    poset = x.poset if labels == "first" else y.poset
    cells = []
    for cx in x.cells.values():
        for cy in y.cells.values():
            for f, g in _staircases(cx.dim, cy.dim):
                d = len(f) - 1
                chain = (
                    tuple(cx.chain[v] for v in f)
                    if labels == "first"
                    else tuple(cy.chain[v] for v in g)
                )
                faces = []
                if d > 0:
                    for i in range(d + 1):
                        phi = compose(f, face_word(d, i))
                        psi = compose(g, face_word(d, i))
                        cid, rho = normalize_product_simplex(
                            x, y, cx.id, phi, cy.id, psi
                        )
                        faces.append(FaceRef(cid, rho))
                cells.append(
                    Cell(product_cell_id(cx.id, cy.id, f, g), d, chain, tuple(faces))
                )
    return StratifiedPresentation(poset, cells)


def tensor_with_standard(x: StratifiedPresentation, n: int):
    """x times the plain n-simplex, stratified from x."""
    return product(x, plain_simplex(n), labels="first")


def product_sphere_cone(a: int, b: int):
    """Sphere times cone on a sphere, stratified by the cone coordinate."""
    return product(boundary_simplex(a + 1), cone(boundary_simplex(b + 1)), "second")


# ---------------------------------------------------------------------------
# quotient and skeleton


def quotient(x: StratifiedPresentation, collapse, vertex_id: str = "q"):
    """Collapse a face-closed set of cells, all on one constant stratum,
    to a single vertex on that stratum."""
    collapse = set(collapse)
    if not collapse:
        return StratifiedPresentation(x.poset, list(x.cells.values()))
    labels = set()
    for cid in sorted(collapse):
        if cid not in x.cells:
            raise PresentationError(f"unknown cell {cid}")
        cell = x.cells[cid]
        labels.update(cell.chain)
        for ref in cell.faces:
            if ref is not None and ref.cell not in collapse:
                raise PresentationError(
                    f"collapse set not face-closed: {cid} has face {ref.cell}"
                )
    if len(labels) != 1:
        raise PresentationError(
            f"collapsed cells span strata {sorted(labels)}, need exactly one"
        )
    label = labels.pop()
    while vertex_id in x.cells:
        vertex_id += "'"
    cells = [Cell(vertex_id, 0, (label,), ())]
    for cell in x.cells.values():
        if cell.id in collapse:
            continue
        faces = []
        for ref in cell.faces:
            if ref is not None and ref.cell in collapse:
                m = cell.dim  # the face simplex has m vertices
                faces.append(FaceRef(vertex_id, normalize_word((0,) * m, 0)))
            else:
                faces.append(ref)
        cells.append(Cell(cell.id, cell.dim, cell.chain, tuple(faces)))
    return StratifiedPresentation(x.poset, cells, restricted=x.restricted)


def skeleton(x: StratifiedPresentation, d: int):
    cells = [c for c in x.cells.values() if c.dim <= d]
    return StratifiedPresentation(x.poset, cells, restricted=x.restricted)


# ---------------------------------------------------------------------------
# restriction and its adjoints


def restrict(x: StratifiedPresentation) -> StratifiedPresentation:
    """Keep the regular-chain cells; blank out non-regular face slots."""
    reg = x.poset.is_regular_chain
    cells = []
    for cell in x.cells.values():
        if not reg(cell.chain):
            continue
        faces = tuple(
            ref if reg(x.face_chain(cell, i)) else None
            for i, ref in enumerate(cell.faces)
        )
        cells.append(Cell(cell.id, cell.dim, cell.chain, faces))
    return StratifiedPresentation(x.poset, cells, restricted=True)


def extend_n(xp: StratifiedPresentation) -> StratifiedPresentation:
    """Fill missing faces with the nerve of the singular part.

    Adds one cell per strictly increasing non-regular chain of the poset
    and redirects every missing face slot to the collapse of its chain.
    """
    if not xp.restricted:
        raise PresentationError("extend_n expects a restricted presentation")
    poset = xp.poset
    v_id = lambda c: "v:" + "<".join(map(str, c))
    cells = []
    for chain in poset.strict_chains(len(poset)):
        if poset.is_regular_chain(chain):
            continue
        size = len(chain)
        faces = tuple(
            plain(v_id(chain[:k] + chain[k + 1 :])) for k in range(size)
        ) if size > 1 else ()
        cells.append(Cell(v_id(chain), size - 1, chain, faces))
    for cell in xp.cells.values():
        faces = []
        for i, ref in enumerate(cell.faces):
            if ref is not None:
                faces.append(ref)
                continue
            core, w = collapse_repeats(xp.face_chain(cell, i))
            faces.append(FaceRef(v_id(core), normalize_word(w, len(core) - 1)))
        cells.append(Cell(cell.id, cell.dim, cell.chain, tuple(faces)))
    return StratifiedPresentation(poset, cells)


def extend_i(xp: StratifiedPresentation) -> StratifiedPresentation:
    """Freely fill missing faces, gluing only what existing faces force.

    Works on word-free restricted presentations: subsimplices (cell,
    vertex subset) are identified along the stored plain faces and the
    classes become the cells of the output.
    """
    if not xp.restricted:
        raise PresentationError("extend_i expects a restricted presentation")
    order = {cid: k for k, cid in enumerate(xp.cells)}
    for cell in xp.cells.values():
        for ref in cell.faces:
            if ref is not None and ref.word is not None:
                raise PresentationError(
                    "extend_i needs plain face references; "
                    f"cell {cell.id} has a degenerate face"
                )

    parent = {}

    def find(a):
        root = a
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(a, a) != a:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    keys = []
    for cell in xp.cells.values():
        for size in range(1, cell.dim + 2):
            for s in _subsets(cell.dim + 1, size):
                keys.append((cell.id, s))
    for cell in xp.cells.values():
        for i, ref in enumerate(cell.faces):
            if ref is None:
                continue
            fdim = xp.cells[ref.cell].dim
            for size in range(1, fdim + 2):
                for s in _subsets(fdim + 1, size):
                    lifted = tuple(v if v < i else v + 1 for v in s)
                    union((ref.cell, s), (cell.id, lifted))

    classes = {}
    for key in keys:
        classes.setdefault(find(key), []).append(key)

    def sort_key(key):
        return (order[key[0]], key[1])

    named = {}
    full_of = {}
    for root, members in classes.items():
        members.sort(key=sort_key)
        full = [
            (cid, s) for cid, s in members if len(s) == xp.cells[cid].dim + 1
        ]
        if len(full) > 1:
            raise PresentationError("inconsistent restricted presentation")
        if full:
            rep = full[0]
            name = rep[0]
        else:
            rep = members[0]
            name = f"w:{rep[0]}:" + ".".join(map(str, rep[1]))
        for m in members:
            named[m] = name
        full_of[name] = rep

    emitted = []
    for cid in xp.cells:
        emitted.append(named[(cid, tuple(range(xp.cells[cid].dim + 1)))])
    extras = sorted(
        (name for name in full_of if name.startswith("w:") and name not in emitted),
        key=lambda n: sort_key(full_of[n]),
    )
    cells = []
    seen = set()
    for name in emitted + extras:
        if name in seen:
            continue
        seen.add(name)
        cid, s = full_of[name]
        base = xp.cells[cid]
        d = len(s) - 1
        chain = tuple(base.chain[v] for v in s)
        faces = tuple(
            plain(named[(cid, s[:k] + s[k + 1 :])]) for k in range(d + 1)
        ) if d > 0 else ()
        cells.append(Cell(name, d, chain, faces))
    return StratifiedPresentation(xp.poset, cells)


def normalize(x: StratifiedPresentation) -> StratifiedPresentation:
    return extend_i(restrict(x))


# ---------------------------------------------------------------------------
# comparison up to renaming


def presentations_isomorphic(x: StratifiedPresentation, y: StratifiedPresentation):
    """Is there a cell renaming matching chains and faces exactly?"""
    if x.poset != y.poset or len(x.cells) != len(y.cells):
        return False

    def signatures(p):
        sig = {cid: (c.dim, c.chain) for cid, c in p.cells.items()}
        while True:
            nxt = {
                cid: (
                    sig[cid],
                    tuple(
                        (sig[r.cell], r.word) if r is not None else None
                        for r in c.faces
                    ),
                )
                for cid, c in p.cells.items()
            }
            if len(set(nxt.values())) == len(set(sig.values())):
                return nxt
            sig = nxt

    sx, sy = signatures(x), signatures(y)
    bx, by = {}, {}
    for cid, s in sx.items():
        bx.setdefault(s, []).append(cid)
    for cid, s in sy.items():
        by.setdefault(s, []).append(cid)
    if set(bx) != set(by):
        return False
    if any(len(bx[s]) != len(by[s]) for s in bx):
        return False

    mapping = {}

    def consistent(a, b):
        ca, cb = x.cells[a], y.cells[b]
        if ca.dim != cb.dim or ca.chain != cb.chain:
            return False
        for ra, rb in zip(ca.faces, cb.faces):
            if (ra is None) != (rb is None):
                return False
            if ra is None:
                continue
            if ra.word != rb.word:
                return False
            if ra.cell in mapping and mapping[ra.cell] != rb.cell:
                return False
        return True

    ids = sorted(x.cells, key=lambda c: (x.cells[c].dim, c))

    def assign(k, used):
        if k == len(ids):
            return True
        a = ids[k]
        if a in mapping:
            return assign(k + 1, used)
        for b in by[sx[a]]:
            if b in used or not consistent(a, b):
                continue
            mapping[a] = b
            if assign(k + 1, used | {b}):
                return True
            del mapping[a]
        return False

    return assign(0, set())
