import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import closure, matrix_closure
from pgt import corpus as cp
from pgt.campaigns import run_campaign, run_item, violations
from pgt.cli import main
from pgt.gflinear import MatrixGroup
from pgt.permcore import PermGroup, Permutation, symmetric_group


def test_parse_cyclic():
    G = cp.parse_group('{"kind":"perm","degree":3,"generators":[[1,2,0]]}')
    assert isinstance(G, PermGroup) and G.degree == 3 and G.order() == 3


def test_parse_wreath():
    doc = {"kind": "constructor", "name": "wreath", "inner": {"name": "sym", "n": 2},
           "top": {"name": "sym", "n": 3}}
    G = cp.parse_group(doc)
    assert G.degree == 6 and G.order() == 48


def test_parse_monomial_matrix():
    doc = '{"kind":"matrix","p":3,"dim":2,"generators":[[[0,1],[1,0]],[[2,0],[0,1]]]}'
    H = cp.parse_group(doc)
    assert isinstance(H, MatrixGroup)
    assert H.order() == len(matrix_closure([g.entries for g in H.generators], 3)) == 8


def test_parse_from_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"kind":"constructor","name":"dihedral","n":5}')
    assert cp.parse_group(str(path)).order() == 10


@pytest.mark.parametrize("doc", [
    '{"kind":"perm","degree":3,',
    '[1, 2, 3]',
    '{"kind":"perm","generators":[[0,1]]}',
    '{"kind":"banana"}',
    '{"kind":"constructor","name":"no_such_group"}',
])
def test_malformed_documents(doc):
    with pytest.raises(ValueError):
        cp.parse_group(doc)


def test_non_bijective_generator():
    with pytest.raises(ValueError):
        cp.parse_group('{"kind":"perm","degree":3,"generators":[[0,0,1]]}')


def test_non_prime_modulus():
    with pytest.raises(ValueError):
        cp.parse_group('{"kind":"matrix","p":4,"dim":1,"generators":[[[1]]]}')


def test_singular_matrix_generator():
    with pytest.raises(ValueError):
        cp.parse_group('{"kind":"matrix","p":3,"dim":2,"generators":[[[1,2],[2,1]]]}')


@pytest.mark.parametrize("m, t", [(2, 3), (3, 2), (4, 2), (2, 4)])
def test_wreath_degree_and_order(m, t):
    G = cp.wreath(symmetric_group(m), symmetric_group(t))
    S = [1, 1, 2, 6, 24]
    assert G.degree == m * t and G.order() == S[m] ** t * S[t]


def test_constructor_orders_against_closure():
    for label, spec, _ in cp.transitive_corpus(8):
        G = cp.parse_group(spec)
        if G.order() <= 2000:
            assert len(closure(G.generators, G.degree)) == G.order(), label


@st.composite
def perm_specs(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, 3))
    gens = [draw(st.permutations(list(range(n)))) for _ in range(k)]
    return {"kind": "perm", "degree": n, "generators": [list(g) for g in gens]}


@settings(max_examples=50)
@given(perm_specs())
def test_perm_spec_round_trip(doc):
    spec = cp.load_spec(doc)
    again = cp.GroupSpec.from_json(spec.to_json())
    assert again == spec
    G = again.build()
    assert cp.spec_of(G) == spec
    assert cp.group_id(G) == cp.group_id(cp.parse_group(json.dumps(doc)))


def test_matrix_spec_round_trip():
    for label, spec in cp.monomial_corpus() + cp.repeat_corpus():
        H = cp.parse_group(spec)
        s = cp.spec_of(H)
        H2 = cp.GroupSpec.from_json(s.to_json()).build()
        assert cp.spec_of(H2) == s and cp.group_id(H2) == cp.group_id(H), label


def test_group_id_ignores_generator_order():
    a = Permutation.from_cycles(4, (0, 1))
    b = Permutation.from_cycles(4, (0, 1, 2, 3))
    assert cp.group_id(PermGroup([a, b], 4)) == cp.group_id(PermGroup([b, a], 4))
    assert cp.group_id(PermGroup([a], 4)) != cp.group_id(PermGroup([b], 4))
    assert len(cp.group_id(PermGroup([a], 4))) == 16


def test_record_round_trip():
    rec = cp.ResultRecord("abc", "base", 2, [0, 1], True, 3.5, 1.25, label="x",
                          detail={"k": [1, 2]})
    assert cp.ResultRecord.from_json(rec.to_json()) == rec


def test_cache_round_trip_and_tamper(tmp_path):
    G = symmetric_group(4)
    cache = cp.ResultCache(tmp_path)
    assert cache.get(G, "base") is None
    rec = cp.ResultRecord(cp.group_id(G), "base", 3, [0, 1, 2])
    cache.put(G, rec)
    assert cache.get(G, "base") == rec
    path = next(tmp_path.iterdir())
    doc = json.loads(path.read_text())
    doc["witness"] = [0, 1]
    doc["value"] = 2
    path.write_text(json.dumps(doc))
    assert cache.get(G, "base") is None


def test_cache_rejects_bad_coloring(tmp_path):
    G = symmetric_group(3)
    cache = cp.ResultCache(tmp_path)
    cache.put(G, cp.ResultRecord(cp.group_id(G), "dist", 2, [0, 0, 1]))
    assert cache.get(G, "dist") is None
    cache.put(G, cp.ResultRecord(cp.group_id(G), "dist", 3, [0, 1, 2]))
    assert cache.get(G, "dist").value == 3


def test_cache_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PGT_CACHE_DIR", str(tmp_path))
    assert cp.cache_dir() == tmp_path
    assert cp.ResultCache().directory == tmp_path


# command line ------------------------------------------------------------


def _lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]


def test_cli_order(capsys):
    assert main(["order", "--group", '{"kind":"constructor","name":"sym","n":5}']) == 0
    (rec,) = _lines(capsys)
    assert rec["value"] == 120 and rec["operation"] == "order"


def test_cli_base_and_dist(capsys):
    g = '{"kind":"constructor","name":"dihedral","n":4}'
    assert main(["base", "--group", g]) == 0
    assert main(["greedy", "--group", g]) == 0
    assert main(["dist", "--group", g]) == 0
    base, greedy, dist = _lines(capsys)
    assert base["value"] == 2 and greedy["value"] >= 2
    assert dist["value"] == 3


def test_cli_partition_base(capsys):
    assert main(["base", "--q", "2", "--group", '{"name":"sym","n":5}']) == 0
    assert _lines(capsys)[0]["value"] == 3


def test_cli_modulo(tmp_path, capsys):
    top = '{"kind":"constructor","name":"wreath","inner":{"name":"sym","n":2},' \
          '"top":{"name":"sym","n":3}}'
    kernel = {"kind": "perm", "degree": 6,
              "generators": [[1, 0, 2, 3, 4, 5], [0, 1, 3, 2, 4, 5], [0, 1, 2, 3, 5, 4]]}
    path = tmp_path / "n.json"
    path.write_text(json.dumps(kernel))
    assert main(["base", "--group", top, "--modulo", str(path)]) == 0
    assert _lines(capsys)[0]["value"] == 2


def test_cli_blocks_and_color(capsys):
    g = '{"name":"wreath","inner":{"name":"sym","n":3},"top":{"name":"sym","n":2}}'
    assert main(["blocks", "--group", g]) == 0
    assert main(["color", "--group", g]) == 0
    blocks, color = _lines(capsys)
    assert blocks["value"]["primitive"] is False
    assert len(blocks["value"]["blocks"]) == 2
    G = cp.parse_group(g)
    from pgt.distinguishing import is_distinguishing
    assert is_distinguishing(G, color["witness"]) and color["bound_checked"]


def test_cli_matrix_group_uses_vectors(capsys):
    assert main(["order", "--group", '{"name":"gl","p":2,"dim":2}']) == 0
    assert _lines(capsys)[0]["value"] == 6


def test_cli_errors(capsys):
    assert main(["order", "--group", '{"kind":"perm","degree":2,"generators":[[0,0]]}']) == 2
    assert main(["order"]) == 2
    assert main(["campaign", "nonsense"]) == 2
    assert main(["order", "--point-cap", "10", "--group", '{"name":"gl","p":3,"dim":3}']) == 2
    err = capsys.readouterr().err
    assert "error" in err and "unknown campaign" in err


def test_cli_out_file(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    assert main(["order", "--group", '{"name":"cyclic","n":7}', "--out", str(out)]) == 0
    assert main(["order", "--group", '{"name":"alt","n":5}', "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    recs = [cp.ResultRecord.from_json(line) for line in out.read_text().splitlines()]
    assert [r.value for r in recs] == [7, 60]


def test_cli_cache_hit(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("PGT_CACHE_DIR", str(tmp_path))
    g = '{"name":"sym","n":4}'
    assert main(["base", "--group", g]) == 0
    assert main(["base", "--group", g]) == 0
    first, second = _lines(capsys)
    assert "cached" not in first["detail"] and second["detail"]["cached"] is True
    assert second["value"] == first["value"] == 3


def test_cli_campaign(capsys):
    assert main(["campaign", "repeat", "--filter", "GL(2,2)"]) == 0
    recs = _lines(capsys)
    assert len(recs) == 3 and all(r["status"] == "pass" for r in recs)
    assert sorted(r["value"]["l"] for r in recs) == [1, 2, 3]


def test_campaign_filter_and_sort():
    recs = run_campaign("affine", filter_label="GL(1,")
    assert recs and all("GL(1," in r.label for r in recs)
    assert [r.group_id for r in recs] == sorted(r.group_id for r in recs)
    assert not violations(recs)


def test_unknown_campaign():
    with pytest.raises(ValueError):
        run_campaign("nope")


def test_cap_exceeded_is_skip():
    spec = {"kind": "constructor", "name": "gl", "p": 131, "dim": 3}
    rec = run_item("affine", ("GL(3,131)", spec))
    assert rec.status == "skip" and "reason" in rec.detail
    assert not violations([rec])


def test_parallel_matches_serial():
    a = run_campaign("affine", jobs=1, filter_label="GL(1,")
    b = run_campaign("affine", jobs=2, filter_label="GL(1,")
    assert [(r.group_id, r.value) for r in a] == [(r.group_id, r.value) for r in b]
