"""Exhaustive submodule lattices over small finite fields."""

from __future__ import annotations

import itertools

import numpy as np

from .. import exactla as la
from ..exactla import DTYPE, Subspace
from .module import Representation, generate


class LatticeCapExceeded(ValueError):
    pass


def normalized_vectors(dim: int, p: int):
    """Nonzero vectors of F_p^dim whose first nonzero entry is 1 (one per line)."""
    for lead in range(dim):
        for tail in itertools.product(range(p), repeat=dim - lead - 1):
            v = np.zeros(dim, dtype=DTYPE)
            v[lead] = 1
            v[lead + 1 :] = tail
            yield v


def cyclic_submodules(m: Representation) -> list[Subspace]:
    seen: dict[Subspace, None] = {}
    for v in normalized_vectors(m.dim, m.p):
        seen.setdefault(generate(m, v), None)
    return list(seen)


def submodule_lattice(m: Representation, cap: int = 12, max_count: int = 200_000) -> list[Subspace]:
    """All submodules of ``m`` as canonical flat subspaces, smallest dimension first.

    ``cap`` bounds the number of vectors to ``2**cap`` (so ``dim <= 12`` at p = 2).
    """
    if m.p ** m.dim > 2**cap:
        raise LatticeCapExceeded(
            f"module of dimension {m.dim} over F_{m.p} exceeds the lattice cap 2^{cap} vectors; "
            "raise the cap or use a smaller prime"
        )
    cyclic = cyclic_submodules(m)
    found: dict[Subspace, None] = {Subspace.zero(m.dim, m.p): None}
    work = []
    for c in cyclic:
        if c not in found:
            found[c] = None
            work.append(c)
    while work:
        u = work.pop()
        for c in cyclic:
            if u.contains_space(c):
                continue
            w = u + c
            if w not in found:
                found[w] = None
                work.append(w)
                if len(found) > max_count:
                    raise LatticeCapExceeded(f"more than {max_count} submodules")
    return sorted(found, key=lambda s: (s.dim, s.basis.tobytes()))
