import json

from dimw import lattice as lat
from dimw.cli import catalog_summary, export_dot, run
from dimw.dimension import dimension_monoid


def test_dim_verb_partition_4(capsys):
    assert run(["dim", "--builtin", "partition:4", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["qosystem"]["points"]) == 1
    assert len(doc["p0"]) == 1


def test_dim_verb_m3(capsys):
    assert run(["dim", "--builtin", "M3", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["qosystem"]["points"]) == 1
    assert doc["p0"] == []


def test_check_all_n5(capsys):
    assert run(["check", "--all", "--builtin", "N5", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(v["status"] == "pass" for k, v in doc.items() if k != "v_modular")
    # the pentagon is the standard non-V-modular example
    assert doc["v_modular"]["status"] == "no"
    assert doc["v_modular"]["witness"] == [["c", "a"], ["0", "b"]]


def test_check_all_subspace(capsys):
    assert run(["check", "--all", "--builtin", "subspace:2,2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["v_modular"]["status"] == "yes"
    assert doc["transitivity_cancellativity"]["status"] == "pass"


def test_validate_and_props(capsys):
    assert run(["validate", "--builtin", "N5"]) == 0
    assert run(["props", "--builtin", "N5", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert doc["modular"] is False and doc["simple"] is False


def test_usage_errors():
    assert run(["props"]) == 2  # neither --builtin nor --file
    assert run(["frobnicate"]) == 2
    assert run([]) == 2


def test_error_exit_code(capsys):
    assert run(["props", "--builtin", "nonsense"]) == 1
    assert run(["props", "--file", "/nonexistent/lattice.json"]) == 1


def test_eval_and_compare(capsys):
    assert run(["eval", "--builtin", "N5", "--word", "0..c + c..a", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["values"]
    code = run(["compare", "--builtin", "N5",
                "--word", "0..a", "--word", "0..c + c..a"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "equal"
    assert run(["compare", "--builtin", "N5", "--word", "0..a"]) == 2


def test_word_multiplicity(capsys):
    assert run(["compare", "--builtin", "M3",
                "--word", "2*(0..a)", "--word", "0..1"]) == 0
    assert capsys.readouterr().out.strip() == "equal"


def test_dot_export(capsys):
    assert run(["dot", "--builtin", "chain:2"]) == 0
    out = capsys.readouterr().out
    assert out.count("->") == 1 and out.count("label=") == 2
    assert run(["dot", "--builtin", "N5"]) == 0
    out5 = capsys.readouterr().out
    assert out5.count("->") == 5
    assert run(["dot", "--builtin", "N5", "--labels"]) == 0
    labeled = capsys.readouterr().out
    assert 'label="p' in labeled


def test_dot_deterministic():
    N5 = lat.builtin("N5")
    D = dimension_monoid(N5)
    assert export_dot(N5, D) == export_dot(N5, dimension_monoid(lat.builtin("N5")))


def test_catalog(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "partition:4" in out and "-> 2" in out
    assert "boolean:3" in out and "(Z+)^3" in out
    assert "M3" in out


def test_catalog_summary_values():
    assert catalog_summary("partition:4")["headline"] == "2"
    assert catalog_summary("M3")["headline"] == "Z+"
    assert catalog_summary("boolean:3")["headline"] == "(Z+)^3"
    row = catalog_summary("coprod_c2_c1")
    assert row["classes"] == 5 and row["idempotent_classes"] == 0


def test_geom_verb(capsys):
    assert run(["geom", "--builtin", "subspace:2,2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["is_normal"]["status"] is True
    assert doc["least_n_distributive"] == 2


def test_file_round_trip(tmp_path, capsys):
    L = lat.builtin("N5")
    path = tmp_path / "n5.json"
    lat.save(L, path)
    assert run(["dim", "--file", str(path), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["qosystem"]["points"]) == 3


def test_check_failure_exit_code(tmp_path, capsys):
    # a sneaky non-lattice file trips validation with exit 1
    path = tmp_path / "bad.json"
    path.write_text('{"name": "bad", "elements": ["x", "y", "z"],'
                    ' "covers": [["x", "y"], ["x", "z"]]}')
    assert run(["validate", "--file", str(path)]) == 1


def test_json_outputs_are_deterministic(capsys):
    run(["dim", "--builtin", "coprod_c2_c1", "--json"])
    first = capsys.readouterr().out
    run(["dim", "--builtin", "coprod_c2_c1", "--json"])
    second = capsys.readouterr().out
    assert first == second
