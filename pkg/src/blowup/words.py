"""Monotone maps between finite ordinals, stored as value tuples.

A word g encoding a map [a] -> [b] is the tuple (g(0), ..., g(a)).  These
label degenerate simplices: a face reference (cell, g) with g a monotone
surjection stands for the degenerate simplex g^*(cell).  The identity is
normalized to None wherever references are stored.
"""

from __future__ import annotations


def identity_word(m: int):
    return tuple(range(m + 1))


def face_word(m: int, i: int):
    """d^i: [m-1] -> [m], skipping the value i."""
    if not 0 <= i <= m:
        raise ValueError(f"face index {i} out of range for dimension {m}")
    return tuple(j for j in range(m + 1) if j != i)


def degeneracy_word(m: int, j: int):
    """s^j: [m+1] -> [m], repeating the value j."""
    if not 0 <= j <= m:
        raise ValueError(f"degeneracy index {j} out of range for dimension {m}")
    return tuple(min(v, m) for v in range(j + 1)) + tuple(
        v - 1 for v in range(j + 1, m + 2)
    )


def is_monotone(g) -> bool:
    return all(g[i] <= g[i + 1] for i in range(len(g) - 1))


def is_surjective(g, target_dim: int) -> bool:
    return set(g) == set(range(target_dim + 1))


def compose(outer, inner):
    """The word of outer-after-inner."""
    return tuple(outer[v] for v in inner)


def normalize_word(g, target_dim: int):
    """None for the identity, the word itself otherwise."""
    if len(g) == target_dim + 1 and g == identity_word(target_dim):
        return None
    return g


def epi_mono_factor(g):
    """Factor a monotone word as (vertex image, surjection onto it).

    g = delta o sigma with delta the increasing tuple of values hit and
    sigma surjective; returns (delta, sigma).
    """
    image = sorted(set(g))
    rank = {v: i for i, v in enumerate(image)}
    return tuple(image), tuple(rank[v] for v in g)


def collapse_repeats(chain):
    """Strictly increasing core of a weakly increasing tuple, with the
    collapse surjection: chain = core o word."""
    core = []
    word = []
    for x in chain:
        if not core or core[-1] != x:
            core.append(x)
        word.append(len(core) - 1)
    return tuple(core), tuple(word)


def joint_collapse(f, g):
    """Remove positions where two words repeat simultaneously.

    Returns (f', g', rho) with (f, g) = (f' o rho, g' o rho), rho surjective
    and (f', g') jointly injective (no common repeats).  rho is None when
    nothing collapses.
    """
    keep = [0]
    for j in range(1, len(f)):
        if not (f[j] == f[j - 1] and g[j] == g[j - 1]):
            keep.append(j)
    if len(keep) == len(f):
        return tuple(f), tuple(g), None
    f2 = tuple(f[j] for j in keep)
    g2 = tuple(g[j] for j in keep)
    rho = []
    r = -1
    for j in range(len(f)):
        if r + 1 < len(keep) and keep[r + 1] == j:
            r += 1
        rho.append(r)
    return f2, g2, tuple(rho)
