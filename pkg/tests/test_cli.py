import json
from pathlib import Path

import pytest

from quiverhom.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = [
    ("ext1_a2_s1.txt", ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep"], 0),
    ("ext1_a2_s1.json", ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep", "--format", "json"], 0),
    ("ext1_a2_s1_minimal.txt", ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep", "--minimal"], 0),
    ("cor13_a3.txt", ["check-cor13", "--corpus", "a3"], 0),
    ("cor13_a3.json", ["check-cor13", "--corpus", "a3", "--format", "json"], 0),
    ("euler_a2.txt", ["euler", "@quivers/a2.quiver", "@reps/a2-s1.rep", "@reps/a2-s2.rep"], 0),
    ("closure_ainf.txt", ["closure", "@quivers/ainfinity.quiver", "--seed", "3"], 0),
    ("prop16_0_6.txt", ["prop16", "--max-n", "6"], 0),
    ("uniformize_broken.txt", ["trlifaj-uniformize", "@scenarios/ainf-broken.scn"], 1),
    ("verify_circular.json", ["trlifaj-verify-phi", "@scenarios/circular-witness.scn", "--format", "json"], 0),
]


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("golden, argv, code", CASES, ids=[c[0] for c in CASES])
def test_golden_reports(capsys, monkeypatch, golden, argv, code):
    monkeypatch.delenv("QUIVERHOM_FIELD", raising=False)
    got_code, out, _ = run(capsys, argv)
    assert got_code == code
    assert out == (GOLDEN / golden).read_text()


def test_ext1_prints_one_for_simple_source(capsys):
    code, out, _ = run(capsys, ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep"])
    assert code == 0 and "ext1: 1" in out


def test_json_mirrors_text(capsys):
    _, out, _ = run(capsys, ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep", "--format", "json"])
    doc = json.loads(out)
    assert doc["facts"]["ext1"] == 1 and doc["result"] == "pass"


def test_broken_uniformizer_names_generator(capsys):
    code, out, _ = run(capsys, ["trlifaj-uniformize", "@scenarios/ainf-broken.scn"])
    assert code == 1
    assert "first_violated_generator: g_{w*2,7}" in out


@pytest.mark.parametrize("scn", ["ainf-random", "circular-random", "decorated-random"])
def test_uniformize_scenarios_pass(capsys, scn):
    code, out, _ = run(capsys, ["trlifaj-uniformize", f"@scenarios/{scn}.scn"])
    assert code == 0, out


def test_field_option_and_environment(capsys, monkeypatch):
    code, out, _ = run(capsys, ["is-projective", "@quivers/a2.quiver", "@reps/a2-p1.rep", "--field", "fp", "7"])
    assert code == 0 and "field: GF(7)" in out
    monkeypatch.setenv("QUIVERHOM_FIELD", "fp 3")
    _, out, _ = run(capsys, ["is-projective", "@quivers/a2.quiver", "@reps/a2-p1.rep"])
    assert "field: GF(3)" in out
    _, out, _ = run(capsys, ["is-projective", "@quivers/a2.quiver", "@reps/a2-p1.rep", "--field", "q"])
    assert "field: QQ" in out


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.rep"
    bad.write_text("dim 1 2\ndim 2 1\nmap a1 = [[1]]\n")
    code, _, err = run(capsys, ["ext1", "@quivers/a2.quiver", str(bad)])
    assert code == 2 and "a1" in err
    code, _, err = run(capsys, ["ext1", "@quivers/a2.quiver", str(tmp_path / "missing.rep")])
    assert code == 2
    code, _, _ = run(capsys, ["ext1", "@quivers/a2.quiver", "@reps/a2-s1.rep", "--field", "fp", "6"])
    assert code == 2
    cyc = tmp_path / "cyc.rep"
    cyc.write_text("dim 0 1\ndim 1 1\n")
    code, _, err = run(capsys, ["ext1", "@quivers/circular4.quiver", str(cyc)])
    assert code == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["ext1", "--bogus", "@quivers/a2.quiver", "@reps/a2-s1.rep"])
    assert info.value.code == 2


def test_restrict_and_closure(capsys):
    code, out, _ = run(capsys, ["restrict", "@quivers/a3.quiver", "@reps/a3-p1.rep", "--seed", "2"])
    assert code == 0
    assert "check restrict_extend_identity: pass" in out
    assert "check ext_vanishing_restricts: pass" in out
    code, out, _ = run(capsys, ["closure", "@quivers/circular4.quiver", "--seed", "0"])
    assert code == 0 and "acyclic: no" in out


def test_check_cor13_on_files(capsys):
    code, out, _ = run(capsys, ["check-cor13", "@quivers/a2.quiver", "@reps/a2-s1.rep", "@reps/a2-p1.rep", "--verbose"])
    assert code == 0
    assert "@reps/a2-s1.rep | 1 | no | no | yes" in out


def test_corpus_run_small(capsys, tmp_path):
    out_file = tmp_path / "r.txt"
    code = main(["corpus-run", "--quivers", "a2", "--random", "20", "--euler-pairs", "10", "--output", str(out_file)])
    assert code == 0
    text = out_file.read_text()
    ids = [line.split()[0] for line in text.splitlines() if line.startswith("a2/")]
    assert ids == sorted(ids)
    assert text.endswith("overall pass\n")
