"""Shared builders for tests: small algebras, corpus inputs and seeded random modules."""

from __future__ import annotations

import functools
import pathlib

import numpy as np

from tiltheart.exactla import DTYPE, Subspace
from tiltheart.fileformat import load
from tiltheart.quivalg import Quiver, build_path_algebra
from tiltheart.repkit import (
    Representation,
    direct_sum,
    generate,
    hom_space,
    projective_sum,
    quotient,
)

SEED = 20240917
CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

SIX = Quiver(
    ("1", "2", "3", "4", "5", "6"),
    (("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4"), ("e", "4", "5"), ("f", "5", "6")),
)
SIX_RELATIONS = ["c*a", "d*b", "f*e*c", "f*e*d"]


@functools.lru_cache(maxsize=None)
def _algebra(name: str, p: int, relations: tuple = ()):
    quivers = {
        "six": (SIX, SIX_RELATIONS),
        "a2": (Quiver(("1", "2"), (("a", "1", "2"),)), []),
        "a3": (Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3"))), []),
        "dual": (Quiver(("1",), (("x", "1", "1"),)), ["x*x"]),
        "kronecker": (Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2"))), []),
        "square": (
            Quiver(("1", "2", "3", "4"), (("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4"))),
            ["c*a - d*b"],
        ),
    }
    q, rels = quivers[name]
    return build_path_algebra(q, list(rels) + list(relations), p=p)


def six_vertex(p: int = 2):
    return _algebra("six", p)


def six_vertex_module(p: int = 2) -> Representation:
    """(1/2) + (1/3) + (1) + (4)."""
    return Representation(six_vertex(p), (3, 1, 1, 1, 0, 0), {"a": [[1, 0, 0]], "b": [[0, 1, 0]]}, name="V")


def a2(p: int = 2):
    return _algebra("a2", p)


def a3(p: int = 2, relations: tuple = ()):
    return _algebra("a3", p, tuple(relations))


def dual_numbers(p: int = 2):
    return _algebra("dual", p)


def kronecker(p: int = 2):
    return _algebra("kronecker", p)


def commutative_square(p: int = 3):
    return _algebra("square", p)


def small_algebras():
    return [
        a2(2),
        a2(3),
        a3(2),
        a3(2, ("b*a",)),
        a3(5),
        dual_numbers(2),
        dual_numbers(3),
        kronecker(2),
        commutative_square(3),
        six_vertex(2),
    ]


def corpus_files():
    return sorted(CORPUS.glob("*.toml"))


def corpus_inputs():
    """Every parseable corpus file."""
    out = []
    for path in corpus_files():
        try:
            out.append((path.name, load(str(path))))
        except ValueError:
            continue
    return out


# ---------------------------------------------------------------- random data


def random_vector(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=n).astype(DTYPE)


def random_module(alg, rng: np.random.Generator, max_summands: int = 2, max_dim: int = 8) -> Representation:
    """A quotient of a small projective sum by a randomly generated submodule."""
    nv = alg.quiver.n_vertices
    for _ in range(50):
        tops = sorted(rng.integers(0, nv, size=int(rng.integers(1, max_summands + 1))).tolist())
        proj = projective_sum(alg, tops)
        gens = [random_vector(rng, proj.dim, alg.p) for _ in range(int(rng.integers(0, 3)))]
        sub = generate(proj, np.array(gens)) if gens else Subspace.zero(proj.dim, alg.p)
        m, _, _ = quotient(proj, sub)
        if 0 < m.dim <= max_dim:
            return m
    return projective_sum(alg, [int(rng.integers(0, nv))])


def random_morphism(m: Representation, n: Representation, rng: np.random.Generator):
    hs = hom_space(m, n)
    return hs.combination(random_vector(rng, hs.dim, m.p))


def random_sum(parts, rng: np.random.Generator, max_terms: int = 3) -> Representation:
    k = int(rng.integers(1, max_terms + 1))
    picks = [parts[int(i)] for i in rng.integers(0, len(parts), size=k)]
    return direct_sum(picks).module
