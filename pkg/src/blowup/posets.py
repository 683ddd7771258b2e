"""Finite posets and the chain (flag) combinatorics used for stratifications.

Elements may be any hashable labels.  A *chain* is a weakly increasing tuple
of elements; chains label the simplices of everything downstream.  A chain is
*regular* when its last entry is a maximal element of the poset.  Repeated
entries are allowed and always sit in adjacent positions, so a chain groups
uniquely into blocks of equal elements.
"""

from __future__ import annotations

from itertools import combinations


class PosetError(ValueError):
    pass


class Poset:
    """Immutable finite poset given by its order relation.

    ``elements`` keeps the construction order and is the canonical iteration
    order everywhere (determinism matters: all downstream bases are sorted
    relative to it).
    """

    def __init__(self, elements, le_pairs):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate poset elements")
        self._index = {x: i for i, x in enumerate(self.elements)}
        rel = set()
        for a, b in le_pairs:
            if a not in self._index or b not in self._index:
                raise PosetError(f"relation ({a!r}, {b!r}) uses unknown elements")
            rel.add((a, b))
        for x in self.elements:
            rel.add((x, x))
        # transitive closure; posets here are tiny
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in list(combinations(rel, 2)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
                if d == a and (c, b) not in rel:
                    rel.add((c, b))
                    changed = True
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise PosetError(f"antisymmetry fails on {a!r}, {b!r}")
        self._le = frozenset(rel)
        self.maximal = tuple(
            x for x in self.elements
            if all(not self.lt(x, y) for y in self.elements)
        )

    @classmethod
    def from_covers(cls, elements, covers):
        """Build from cover relations ``(lower, upper)``."""
        return cls(elements, covers)

    def le(self, a, b) -> bool:
        return (a, b) in self._le

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self._le

    def is_maximal(self, x) -> bool:
        return x in self.maximal

    def index(self, x) -> int:
        return self._index[x]

    def __contains__(self, x) -> bool:
        return x in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self._le == other._le
        )

    def __hash__(self):
        return hash((self.elements, self._le))

    def __repr__(self):
        covers = sorted(
            (self.index(a), self.index(b)) for a, b in self.cover_pairs()
        )
        return f"Poset({list(self.elements)!r}, covers={covers!r})"

    def cover_pairs(self):
        """Pairs (a, b) with b covering a."""
        out = []
        for a in self.elements:
            for b in self.elements:
                if self.lt(a, b) and not any(
                    self.lt(a, c) and self.lt(c, b) for c in self.elements
                ):
                    out.append((a, b))
        return out

    def depth(self) -> int:
        """Length of the longest strict chain, counted in edges."""
        best = 0
        order = sorted(
            self.elements, key=lambda x: sum(self.lt(y, x) for y in self.elements)
        )
        height = {}
        for x in order:
            height[x] = max(
                (height[y] + 1 for y in self.elements if self.lt(y, x)),
                default=0,
            )
            best = max(best, height[x])
        return best

    # chain utilities ------------------------------------------------------

    def is_chain(self, chain) -> bool:
        return all(x in self for x in chain) and all(
            self.le(chain[i], chain[i + 1]) for i in range(len(chain) - 1)
        )

    def is_regular_chain(self, chain) -> bool:
        return len(chain) > 0 and self.is_chain(chain) and self.is_maximal(chain[-1])

    def strict_chains(self, max_length=None):
        """All nonempty strictly increasing chains, in deterministic order."""
        limit = len(self.elements) if max_length is None else max_length
        out = []

        def grow(prefix):
            if prefix:
                out.append(tuple(prefix))
            if len(prefix) == limit:
                return
            for x in self.elements:
                if not prefix or self.lt(prefix[-1], x):
                    prefix.append(x)
                    grow(prefix)
                    prefix.pop()

        grow([])
        return out


def alexandrov_open(poset: Poset, subset) -> bool:
    """Whether a label set is open in the Alexandrov topology (up-closed)."""
    members = set(subset)
    for x in members:
        if x not in poset:
            raise PosetError(f"{x!r} is not a poset element")
    return all(
        y in members
        for x in members
        for y in poset.elements
        if poset.le(x, y)
    )


def chain_poset(n: int) -> Poset:
    """The linear poset 0 < 1 < ... < n; the unique maximal element is n."""
    return Poset(range(n + 1), [(i, i + 1) for i in range(n)])


def codim_op_poset(n: int) -> Poset:
    """Codimension labels with reversed order: n < ... < 1 < 0.

    The maximal element is 0 (the formal codimension of the regular part),
    which is where classical perversity functions live.
    """
    return Poset(range(n + 1), [(i + 1, i) for i in range(n)])


def point_poset() -> Poset:
    return Poset((0,), [])


class PosetMap:
    """Monotone map between finite posets."""

    def __init__(self, source: Poset, target: Poset, mapping):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        for x in source.elements:
            if x not in self.mapping:
                raise PosetError(f"map not defined on {x!r}")
            if self.mapping[x] not in target:
                raise PosetError(f"{self.mapping[x]!r} is not in the target poset")
        for a in source.elements:
            for b in source.elements:
                if source.le(a, b) and not target.le(self.mapping[a], self.mapping[b]):
                    raise PosetError(f"map is not monotone on ({a!r}, {b!r})")

    def __call__(self, x):
        return self.mapping[x]

    def fiber(self, t):
        return tuple(x for x in self.source.elements if self.mapping[x] == t)

    @classmethod
    def identity(cls, poset: "Poset") -> "PosetMap":
        return cls(poset, poset, {x: x for x in poset.elements})

    def compose(self, inner: "PosetMap") -> "PosetMap":
        """self after inner."""
        if inner.target != self.source:
            raise PosetError("maps do not compose")
        return PosetMap(
            inner.source,
            self.target,
            {x: self.mapping[inner.mapping[x]] for x in inner.source.elements},
        )


def group_blocks(chain):
    """Group a chain into maximal runs of equal elements.

    Returns a list of ``(element, size)`` with ``size = q_i`` the number of
    *repeats*, so a run of length q+1 has size q.  The blown-up local complex
    of a chain depends on the chain only through this grouped form.
    """
    blocks = []
    for x in chain:
        if blocks and blocks[-1][0] == x:
            blocks[-1][1] += 1
        else:
            blocks.append([x, 0])
    return [(x, q) for x, q in blocks]
