"""Perversity functions on a stratification poset.

A perversity assigns an extended integer (an ``int`` or ``±math.inf``) to
every element of the poset and vanishes on maximal elements.  Extended
addition is biased: anything plus -inf is -inf, even +inf + (-inf).  That
bias is what makes perverse degrees of products behave (a factor that is
forbidden on a stratum stays forbidden after multiplying by anything).

Classical Goresky-MacPherson perversities live on the codimension poset
``codim_op_poset(n)``; see :func:`is_gm`, :func:`top_gm` and
:func:`complementary`.
"""

from __future__ import annotations

import math

from .posets import Poset, PosetMap, codim_op_poset

NEG_INF = -math.inf
POS_INF = math.inf


def is_ext_int(v) -> bool:
    return isinstance(v, int) or v in (NEG_INF, POS_INF)


def ext_add(a, b):
    """Extended addition; -inf absorbs everything, including +inf."""
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    if a == POS_INF or b == POS_INF:
        return POS_INF
    return a + b


def ext_sum(values):
    total = 0
    for v in values:
        total = ext_add(total, v)
    return total


class Perversity:
    """Extended-integer function on a poset, zero on maximal elements."""

    def __init__(self, poset: Poset, values):
        self.poset = poset
        table = {}
        for s in poset.elements:
            if poset.is_maximal(s):
                if s in values and values[s] != 0:
                    raise ValueError(
                        f"perversity must vanish on the maximal element {s!r}"
                    )
                table[s] = 0
            else:
                if s not in values:
                    raise ValueError(f"perversity has no value on {s!r}")
                if not is_ext_int(values[s]):
                    raise ValueError(f"bad perversity value {values[s]!r}")
                table[s] = values[s]
        extra = set(values) - set(poset.elements)
        if extra:
            raise ValueError(f"values on unknown elements: {sorted(map(repr, extra))}")
        self.values = table

    @classmethod
    def constant(cls, poset: Poset, v):
        return cls(poset, {s: v for s in poset.elements if not poset.is_maximal(s)})

    @classmethod
    def zero(cls, poset: Poset):
        return cls.constant(poset, 0)

    @classmethod
    def infinite(cls, poset: Poset):
        return cls.constant(poset, POS_INF)

    def __call__(self, s):
        return self.values[s]

    def __eq__(self, other):
        return (
            isinstance(other, Perversity)
            and self.poset == other.poset
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.poset, tuple(sorted(
            (self.poset.index(s), v) for s, v in self.values.items()
        ))))

    def __le__(self, other: "Perversity") -> bool:
        if self.poset != other.poset:
            raise ValueError("perversities on different posets")
        return all(self(s) <= other(s) for s in self.poset.elements)

    def __lt__(self, other: "Perversity") -> bool:
        return self <= other and self.values != other.values

    def __repr__(self):
        vals = {s: self.values[s] for s in self.poset.elements}
        return f"Perversity({vals!r})"

    def __add__(self, other: "Perversity") -> "Perversity":
        if self.poset != other.poset:
            raise ValueError("perversities on different posets")
        return Perversity(
            self.poset,
            {
                s: ext_add(self(s), other(s))
                for s in self.poset.elements
                if not self.poset.is_maximal(s)
            },
        )


def pullback(f: PosetMap, q: Perversity) -> Perversity:
    """Perversity on the source of ``f`` given one on the target.

    ``(f^* q)(s) = q(f(s))`` for non-maximal ``s`` (and 0 on maximal ones,
    even when ``f`` does not preserve maximality).
    """
    if q.poset != f.target:
        raise ValueError("perversity lives on the wrong poset")
    return Perversity(
        f.source,
        {
            s: q(f(s))
            for s in f.source.elements
            if not f.source.is_maximal(s)
        },
    )


def pushforward(f: PosetMap, p: Perversity) -> Perversity:
    """Perversity on the target of ``f``: infimum of ``p`` over each fiber.

    An empty fiber gets +inf (the infimum over nothing), which keeps the
    adjunction ``pushforward(f, p) <= q  iff  p <= pullback(f, q)``.
    """
    if p.poset != f.source:
        raise ValueError("perversity lives on the wrong poset")
    out = {}
    for t in f.target.elements:
        if f.target.is_maximal(t):
            continue
        fiber = f.fiber(t)
        out[t] = min((p(s) for s in fiber), default=POS_INF)
    return Perversity(f.target, out)


# Goresky-MacPherson perversities on codim_op_poset(n) ---------------------


def is_gm(p: Perversity) -> bool:
    """Classical growth condition on the codimension poset.

    Requires p(0) = p(1) = p(2) = 0 and p(i) <= p(i+1) <= p(i) + 1, all
    values finite.
    """
    P = p.poset
    n = len(P.elements) - 1
    if P != codim_op_poset(n):
        return False
    vals = [p(i) for i in range(n + 1)]
    if any(not isinstance(v, int) for v in vals):
        return False
    if any(vals[i] != 0 for i in range(min(n, 2) + 1)):
        return False
    return all(vals[i] <= vals[i + 1] <= vals[i] + 1 for i in range(n))


def top_gm(n: int) -> Perversity:
    """The top perversity t(i) = i - 2 for i >= 2 (and 0 below)."""
    P = codim_op_poset(n)
    return Perversity(P, {i: max(i - 2, 0) for i in range(1, n + 1)})


def gm_perversity(n: int, kind) -> Perversity:
    """Classical perversity on the codimension poset, by name or values.

    ``kind`` is "zero", "top", or a sequence of values indexed by
    codimension 0..n; explicit values must satisfy the growth condition.
    """
    P = codim_op_poset(n)
    if kind == "zero":
        return Perversity.zero(P)
    if kind == "top":
        return top_gm(n)
    vals = list(kind)
    if len(vals) != n + 1:
        raise ValueError(f"expected {n + 1} values, got {len(vals)}")
    for i in range(min(n, 2) + 1):
        if vals[i] != 0:
            raise ValueError(f"value at codimension {i} must be 0, got {vals[i]}")
    for i in range(n):
        if not vals[i] <= vals[i + 1] <= vals[i] + 1:
            raise ValueError(
                f"growth condition fails at codimension {i}: "
                f"{vals[i]} -> {vals[i + 1]}"
            )
    return Perversity(P, {i: vals[i] for i in range(1, n + 1)})


def complementary(p: Perversity) -> Perversity:
    """Complementary Goresky-MacPherson perversity t - p."""
    if not is_gm(p):
        raise ValueError("complement is only defined for classical perversities")
    n = len(p.poset.elements) - 1
    t = top_gm(n)
    q = Perversity(p.poset, {i: t(i) - p(i) for i in range(1, n + 1)})
    if not is_gm(q):
        raise ValueError(f"complement of {p!r} is not a classical perversity")
    return q
