"""Blown-up intersection cohomology of stratified simplicial sets."""

from .posets import (
    Poset,
    PosetMap,
    chain_poset,
    codim_op_poset,
    group_blocks,
    point_poset,
)
from .perversity import (
    NEG_INF,
    POS_INF,
    Perversity,
    complementary,
    ext_add,
    is_gm,
    pullback,
    pushforward,
    top_gm,
)

__all__ = [
    "Poset",
    "PosetMap",
    "chain_poset",
    "codim_op_poset",
    "group_blocks",
    "point_poset",
    "NEG_INF",
    "POS_INF",
    "Perversity",
    "complementary",
    "ext_add",
    "is_gm",
    "pullback",
    "pushforward",
    "top_gm",
]
