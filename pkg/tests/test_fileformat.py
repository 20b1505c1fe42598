import numpy as np
import pytest

from helpers import CORPUS, corpus_files
from tiltheart.fileformat import (
    InputError,
    canonical_input,
    input_digest,
    load,
    module_toml,
    parse_input,
    quiver_toml,
)

HEADER = '[field]\np = 2\n\n[quiver]\nvertices = ["1", "2"]\narrows = [["a", "1", "2"], ["b", "2", "1"]]\nrelations = [%s]\n'


def error_of(text):
    with pytest.raises(InputError) as info:
        parse_input(text)
    return info.value


def test_corpus_examples_parse():
    d = load(str(CORPUS / "ka2_s1.toml"))
    assert d.algebra.dim == 3 and d.module.dims == (1, 0)
    d = load(str(CORPUS / "six_vertex.toml"))
    assert d.algebra.dim == 15 and d.module.dim == 6
    assert load(str(CORPUS / "six_vertex_p3.toml")).algebra.p == 3


def test_loop_without_relation_is_rejected():
    with pytest.raises(InputError) as info:
        load(str(CORPUS / "loop_no_relation.toml"))
    assert "line 8, column 1" in str(info.value)
    assert "x^64" in str(info.value)


@pytest.mark.parametrize(
    "text,line,column,fragment",
    [
        ("[field\np = 2\n", 1, 7, "Expected"),
        (HEADER.replace("p = 2", "p = 4") % '"b*a"', 2, 1, "prime"),
        (HEADER % '"b*a", "b * q"', 7, 26, "unknown arrow 'q'"),
        (HEADER % '"a*a"', 7, 15, "non-composable"),
        (HEADER % '"b*a*"', 7, 19, "dangling"),
        (HEADER % '"b*a", "a*b"' + '\n[module]\ndims = [1, 1]\nmaps = { a = [[1, 1]] }\n', 10, 1, "1x1"),
        (HEADER % '"b*a", "a*b"' + '\n[module]\ndims = [1, 1]\nmaps = { a = [[1]], b = [[1]] }\n', 10, 1, "relation b*a"),
        (HEADER.replace('["b", "2", "1"]', '["a", "2", "1"]') % "", 6, 1, "unique"),
    ],
)
def test_error_positions(text, line, column, fragment):
    err = error_of(text)
    assert (err.line, err.column) == (line, column)
    assert fragment in str(err)
    assert str(err).startswith(f"line {line}, column {column}: ")


def test_error_without_position():
    err = error_of("[field]\np = 3\n")
    assert err.line is None and "quiver" in str(err)


def test_complex_and_morphism():
    d = load(str(CORPUS / "ka2_heart.toml"))
    g = d.complexes["G"]
    assert g.c1.dims == (0, 1) and g.c0.dims == (1, 1) and g.d.rank() == 1
    assert d.morphism.is_chain_map()
    np.testing.assert_array_equal(d.morphism.phi0.flat, np.eye(2, dtype=int))


def test_non_commuting_morphism_rejected():
    text = (CORPUS / "ka2_heart.toml").read_text().replace('degree1 = [["e2"]]', 'degree1 = [["0"]]')
    assert "does not commute" in str(error_of(text))


def test_modules_list():
    d = load(str(CORPUS / "ka2_prune.toml"))
    assert [m.name for m in d.modules] == ["S1", "S2", "P1"]
    assert d.module is None


@pytest.mark.parametrize("path", [p for p in corpus_files() if "loop_no" not in p.name], ids=lambda p: p.name)
def test_writers_round_trip(path):
    d = load(str(path))
    alg = d.algebra
    text = quiver_toml(alg.quiver, list(alg.relation_text), alg.p)
    for m in d.modules + ([d.module] if d.module else []):
        back = parse_input(text + "\n" + module_toml(m)).module
        assert back.dims == m.dims
        for x, y in zip(back.maps, m.maps):
            np.testing.assert_array_equal(x, y)
    assert parse_input(canonical_input(alg, d.module)).digest == d.digest


def test_digest_ignores_formatting():
    a = load(str(CORPUS / "ka2_s1.toml"))
    b = parse_input(canonical_input(a.algebra, a.module) + "\n# trailing comment\n")
    assert a.digest == b.digest == input_digest(a.algebra, a.module)
    assert len(a.digest) == 64
