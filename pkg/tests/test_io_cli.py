import json

import pytest

from cechfib import build_complex, cli, star_cover, trivial_cocycle
from cechfib import io as docio

import corpus


HOLLOW_DOC = {"maximal": [["a", "b"], ["a", "c"], ["b", "c"]]}
Z2_DOC = {"order": 2, "table": [[0, 1], [1, 0]]}


def star_cover_doc(x):
    return docio.cover_to_doc(star_cover(x))


def circle_cocycle_doc(g02=1):
    cover = star_cover(corpus.HOLLOW_TRIANGLE)
    return {
        "cover": docio.cover_to_doc(cover),
        "group": Z2_DOC,
        "values": {"a|b": 0, "b|c": 0, "a|c": g02},
    }


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_complex_round_trip():
    x = corpus.RP2_SIX
    doc = docio.complex_to_doc(x)
    back = docio.complex_from_doc(doc)
    assert {tuple(sorted(map(str, s))) for s in back.maximal_simplices} == \
        {tuple(sorted(map(str, s))) for s in x.maximal_simplices}


def test_cover_round_trip():
    cover = star_cover(corpus.HOLLOW_TRIANGLE)
    doc = docio.cover_to_doc(cover)
    back = docio.cover_from_doc(doc)
    assert sorted(back.parts) == ["a", "b", "c"]
    assert back.union_is_base()


def test_group_round_trip():
    doc = docio.group_to_doc(corpus.S3)
    back = docio.group_from_doc(doc)
    assert back.table == corpus.S3.table


def test_cocycle_round_trip():
    doc = circle_cocycle_doc()
    cocycle = docio.cocycle_from_doc(doc)
    assert docio.cocycle_to_doc(cocycle)["values"] == doc["values"]


def test_gerbe_round_trip():
    from cechfib import abelian_coefficients, cech_nerve, validate_gerbe_cocycle

    cover = star_cover(corpus.BOUNDARY_3SIMPLEX)
    nerve = cech_nerve(cover)
    pairs = sorted(k for k in nerve.witnesses if len(k) == 2)
    triples = sorted(k for k in nerve.witnesses if len(k) == 3)
    data = validate_gerbe_cocycle(
        cover, abelian_coefficients(corpus.Z2),
        {p: 0 for p in pairs},
        {t: (1 if t == triples[0] else 0) for t in triples},
        nerve=nerve,
    )
    doc = docio.gerbe_to_doc(data)
    back = docio.gerbe_from_doc(doc)
    assert len(back.witnesses) == 4
    assert sum(back.witnesses.values()) == 1


def test_bundle_round_trip():
    from cechfib import regular_action, total_space, validate_cocycle

    cover = star_cover(corpus.HOLLOW_TRIANGLE)
    c = validate_cocycle(
        cover, corpus.Z2, {("a", "b"): 0, ("b", "c"): 0, ("a", "c"): 1}
    )
    bundle = total_space(c, regular_action(corpus.Z2))
    doc = docio.bundle_to_doc(bundle)
    back = docio.bundle_from_doc(doc)
    assert len(back.total.vertices) == 6
    assert len(back.fiber) == 2


def test_cli_homology_verbs(tmp_path, capsys):
    path = write(tmp_path, "x.json", HOLLOW_DOC)
    code, report = run(capsys, "homology", "--input", path)
    assert code == cli.EXIT_TRUE
    assert report["details"]["betti"] == [1, 1]
    assert report["verdict"] is True


def test_cli_validate_complex_rejects_repeat(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"maximal": [["a", "a"]]})
    code, report = run(capsys, "validate-complex", "--input", path)
    assert code == cli.EXIT_FALSE
    assert report["verdict"] is False


def test_cli_nerve(tmp_path, capsys):
    path = write(tmp_path, "cover.json", star_cover_doc(corpus.HOLLOW_TRIANGLE))
    code, report = run(capsys, "nerve", "--input", path)
    assert code == cli.EXIT_TRUE
    assert report["details"]["nerve"]["maximal"] == [
        ["a", "b"], ["a", "c"], ["b", "c"]
    ]


def test_cli_cover_check_good_and_bad(tmp_path, capsys):
    good = write(tmp_path, "good.json", star_cover_doc(corpus.HOLLOW_TRIANGLE))
    code, report = run(capsys, "cover-check", "--input", good)
    assert code == cli.EXIT_TRUE and report["verdict"] is True

    square = build_complex([["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]])
    bad_doc = {
        "base": docio.complex_to_doc(square),
        "parts": {
            "A": {"maximal": [["a", "b"], ["b", "c"]]},
            "B": {"maximal": [["c", "d"], ["a", "d"]]},
        },
    }
    bad = write(tmp_path, "bad.json", bad_doc)
    code, report = run(capsys, "cover-check", "--input", bad)
    assert code == cli.EXIT_FALSE
    assert report["details"]["failures"][0]["intersection"] == ["A", "B"]


def test_cli_cocycle_check_valid(tmp_path, capsys):
    path = write(tmp_path, "c.json", circle_cocycle_doc())
    code, report = run(capsys, "cocycle-check", "--input", path)
    assert code == cli.EXIT_TRUE


def test_cli_cocycle_check_broken_triple(tmp_path, capsys):
    cover = star_cover(corpus.FULL_TRIANGLE)
    doc = {
        "cover": docio.cover_to_doc(cover),
        "group": Z2_DOC,
        "values": {"a|b": 0, "b|c": 0, "a|c": 1},
    }
    path = write(tmp_path, "broken.json", doc)
    code, report = run(capsys, "cocycle-check", "--input", path)
    assert code == cli.EXIT_FALSE
    assert report["details"]["context"]["triple"] == ["a", "b", "c"]


def test_cli_cocycle_equiv(tmp_path, capsys):
    p1 = write(tmp_path, "c1.json", circle_cocycle_doc(1))
    p2 = write(tmp_path, "c2.json", circle_cocycle_doc(0))
    code, report = run(capsys, "cocycle-equiv", "--input", p1, p2)
    assert code == cli.EXIT_FALSE and report["verdict"] is False
    code, report = run(capsys, "cocycle-equiv", "--input", p1, p1)
    assert code == cli.EXIT_TRUE and "bridge" in report["details"]


def test_cli_bundle_build_modes_agree(tmp_path, capsys):
    path = write(tmp_path, "c.json", circle_cocycle_doc())
    code, direct = run(capsys, "bundle-build", "--input", path, "--mode", "direct")
    assert code == cli.EXIT_TRUE
    code, skeletal = run(
        capsys, "bundle-build", "--input", path, "--mode", "skeletal"
    )
    assert code == cli.EXIT_TRUE
    assert direct["details"]["bundle"]["total"] == \
        skeletal["details"]["bundle"]["total"]


def test_cli_pullback(tmp_path, capsys):
    path = write(tmp_path, "c.json", circle_cocycle_doc())
    code, built = run(capsys, "bundle-build", "--input", path)
    bundle_doc = built["details"]["bundle"]
    bpath = write(tmp_path, "bundle.json", bundle_doc)
    map_doc = {
        "source": {"maximal": [["z"]]},
        "vertexMap": {"z": "a"},
    }
    mpath = write(tmp_path, "map.json", map_doc)
    code, report = run(capsys, "pullback", "--input", bpath, mpath)
    assert code == cli.EXIT_TRUE
    assert len(report["details"]["bundle"]["fiber"]) == 2


def test_cli_classify(tmp_path, capsys):
    cpath = write(tmp_path, "cover.json", star_cover_doc(corpus.HOLLOW_TRIANGLE))
    gpath = write(tmp_path, "group.json", Z2_DOC)
    code, report = run(capsys, "classify", "--input", cpath, gpath)
    assert code == cli.EXIT_TRUE
    assert report["details"]["classes"] == 2
    assert report["details"]["homClasses"] == 2


def test_cli_gerbe_verbs(tmp_path, capsys):
    from cechfib import abelian_coefficients, cech_nerve, validate_gerbe_cocycle

    cover = star_cover(corpus.BOUNDARY_3SIMPLEX)
    nerve = cech_nerve(cover)
    pairs = sorted(k for k in nerve.witnesses if len(k) == 2)
    triples = sorted(k for k in nerve.witnesses if len(k) == 3)
    data = validate_gerbe_cocycle(
        cover, abelian_coefficients(corpus.Z2),
        {p: 0 for p in pairs},
        {t: (1 if t == triples[0] else 0) for t in triples},
        nerve=nerve,
    )
    path = write(tmp_path, "gerbe.json", docio.gerbe_to_doc(data))
    code, report = run(capsys, "gerbe-check", "--input", path)
    assert code == cli.EXIT_TRUE
    code, report = run(capsys, "gerbe-class", "--input", path)
    assert code == cli.EXIT_TRUE
    assert report["details"]["classCount"] == 2
    assert any(report["details"]["classLabel"])


def test_cli_bar_homology(tmp_path, capsys):
    path = write(tmp_path, "z2.json", Z2_DOC)
    code, report = run(capsys, "bar-homology", "--input", path, "--max-degree", "3")
    assert code == cli.EXIT_TRUE
    assert report["details"]["betti"] == [1, 0, 0, 0]
    assert report["details"]["torsion"] == [[], [2], [], [2]]


def test_cli_milnor_check(tmp_path, capsys):
    good = write(tmp_path, "m.json", {
        "t": ["1/2", "1/2"],
        "g": {"0|0": 0, "1|1": 0, "0|1": 1, "1|0": 1},
        "group": Z2_DOC,
    })
    code, report = run(capsys, "milnor-check", "--input", good)
    assert code == cli.EXIT_TRUE
    bad = write(tmp_path, "mbad.json", {
        "t": ["1/2", "1/2"],
        "g": {"0|0": 0, "1|1": 0, "0|1": 1, "1|0": 0},
        "group": docio.group_to_doc(corpus.S3),
    })
    code, report = run(capsys, "milnor-check", "--input", bad)
    assert code == cli.EXIT_FALSE


def test_cli_missing_file_is_input_error(tmp_path, capsys):
    code = cli.main(["homology", "--input", str(tmp_path / "nope.json")])
    assert code == cli.EXIT_INPUT


def test_cli_budget_exit_code(tmp_path, capsys):
    cover = star_cover(corpus.HOLLOW_TRIANGLE)
    s3_doc = docio.group_to_doc(corpus.S3)
    c1 = {
        "cover": docio.cover_to_doc(cover),
        "group": s3_doc,
        "values": {"a|b": 0, "b|c": 0, "a|c": 3},
    }
    c2 = {
        "cover": docio.cover_to_doc(cover),
        "group": s3_doc,
        "values": {"a|b": 0, "b|c": 0, "a|c": 0},
    }
    p1 = write(tmp_path, "c1.json", c1)
    p2 = write(tmp_path, "c2.json", c2)
    code = cli.main(["cocycle-equiv", "--input", p1, p2, "--budget", "2"])
    assert code == cli.EXIT_BUDGET


def test_cli_reports_are_deterministic(tmp_path, capsys):
    path = write(tmp_path, "x.json", HOLLOW_DOC)
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert cli.main(["homology", "--input", path, "--output", str(out1)]) == 0
    assert cli.main(["homology", "--input", path, "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_writes_no_output_on_input_error(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main([
        "homology", "--input", str(tmp_path / "nope.json"),
        "--output", str(out),
    ])
    assert code == cli.EXIT_INPUT
    assert not out.exists()


def test_cli_matches_library_results(tmp_path, capsys):
    """Golden parity: the CLI verb reproduces the library call exactly."""
    from cechfib import homology

    for x in (corpus.RP2_SIX, corpus.TORUS_SEVEN):
        path = write(tmp_path, "x.json", docio.complex_to_doc(x))
        code, report = run(capsys, "homology", "--input", path,
                           "--max-degree", "2")
        direct = homology(x, 2)
        assert report["details"]["betti"] == list(direct.betti_numbers())
        assert report["details"]["torsion"] == [
            list(t) for t in direct.torsion()
        ]
