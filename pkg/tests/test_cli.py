import json

import pytest

from vl.cli import main

from test_parser import FIG1


def make_project(tmp_path, source=FIG1, name="counter", stem="counter"):
    root = tmp_path / name
    (root / "src").mkdir(parents=True)
    (root / "vl.toml").write_text(f'[project]\nname = "{name}"\nversion = "0.1.0"\n')
    (root / "src" / f"{stem}.vl").write_text(source)
    return root


def test_new_scaffolds_and_builds(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["new", "blinky"]) == 0
    toml = (tmp_path / "blinky" / "vl.toml").read_text()
    assert 'name = "blinky"' in toml
    assert (tmp_path / "blinky" / "src" / "main.vl").is_file()
    assert main(["build", "--manifest", "blinky/vl.toml"]) == 0
    assert (tmp_path / "blinky" / "target" / "sv" / "main.sv").is_file()


def test_new_twice_is_exit_2(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["new", "x"]) == 0
    assert main(["new", "x"]) == 2
    assert "already exists" in capsys.readouterr().err


def test_new_bad_name_is_exit_2(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["new", "not-an-ident"]) == 2


def test_build_fig1_project(tmp_path):
    root = make_project(tmp_path)
    assert main(["build", "--manifest", str(root / "vl.toml")]) == 0
    sv = (root / "target" / "sv" / "counter.sv").read_text()
    assert "module Counter" in sv
    assert (root / "target" / "name_map.json").read_text() == "{}\n"


def test_check_reports_e0311_with_exit_1(tmp_path, capsys):
    src = "module M (\n    o_x: output logic,\n) {\n    assign o_x = 4'd16;\n}\n"
    root = make_project(tmp_path, src, name="lit", stem="main")
    assert main(["check", "--manifest", str(root / "vl.toml")]) == 1
    err = capsys.readouterr().err
    assert "error[E0311]" in err
    assert "src/main.vl:4:18" in err
    assert "^^^^^" in err  # caret spans all five characters of 4'd16


def test_check_json_mode(tmp_path, capsys):
    src = "module M (\n    o_x: output logic,\n) {\n    assign o_x = 4'd16;\n}\n"
    root = make_project(tmp_path, src, name="lit", stem="main")
    assert main(["check", "--format", "json", "--manifest", str(root / "vl.toml")]) == 1
    out = capsys.readouterr().out
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 1
    d = data[0]
    assert d["code"] == "E0311" and d["severity"] == "error"
    assert d["file"] == "src/main.vl" and (d["line"], d["column"]) == (4, 18)


def test_check_json_empty_array_on_clean(tmp_path, capsys):
    root = make_project(tmp_path)
    assert main(["check", "--format", "json", "--manifest", str(root / "vl.toml")]) == 0
    assert json.loads(capsys.readouterr().out) == []


def test_warning_only_exits_0(tmp_path, capsys):
    root = make_project(tmp_path, "module M () {\n    var x: logic;\n}\n", name="warn", stem="main")
    assert main(["check", "--manifest", str(root / "vl.toml")]) == 0
    assert "warning[W0304]" in capsys.readouterr().err


def test_fmt_rewrites_then_check_passes(tmp_path):
    messy = "module   M(a:input logic,b:output logic){assign b=a;}"
    root = make_project(tmp_path, messy, name="fmt", stem="main")
    assert main(["fmt", "--manifest", str(root / "vl.toml")]) == 0
    text = (root / "src" / "main.vl").read_text()
    assert text.startswith("module M (\n")
    assert main(["fmt", "--check", "--manifest", str(root / "vl.toml")]) == 0


def test_fmt_check_dry_run_writes_nothing(tmp_path, capsys):
    messy = "module   M(){}"
    root = make_project(tmp_path, messy, name="fmt2", stem="main")
    assert main(["fmt", "--check", "--manifest", str(root / "vl.toml")]) == 1
    assert (root / "src" / "main.vl").read_text() == messy
    assert "main.vl" in capsys.readouterr().out


def test_exit_code_contract_on_diag_corpus(tmp_path, capsys):
    import pathlib

    fixtures = sorted((pathlib.Path(__file__).parent / "fixtures" / "diag").glob("*.vl"))
    assert fixtures
    for fx in fixtures:
        root = make_project(tmp_path, fx.read_text(), name=f"p_{fx.stem}", stem="main")
        rc = main(["check", "--format", "json", "--manifest", str(root / "vl.toml")])
        data = json.loads(capsys.readouterr().out)
        severities = {d["severity"] for d in data}
        expected = 1 if "error" in severities else 0
        assert rc == expected, fx.name


def test_missing_manifest_is_exit_2(tmp_path, capsys):
    assert main(["check", "--manifest", str(tmp_path / "nope.toml")]) == 2
    assert "manifest not found" in capsys.readouterr().err


def test_usage_error_is_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_update_writes_lockfile(tmp_path):
    root = make_project(tmp_path)
    assert main(["update", "--manifest", str(root / "vl.toml")]) == 0
    assert (root / "vl.lock").read_text() == ""


def test_doc_command(tmp_path):
    fig6 = (
        "/// Sample docs.\n"
        "pub module Sample (\n"
        "    i_clk: input clock, /// Clock\n"
        ") {\n"
        "}\n"
    )
    root = make_project(tmp_path, fig6, name="docs", stem="sample")
    assert main(["doc", "--manifest", str(root / "vl.toml")]) == 0
    md = (root / "target" / "doc" / "Sample.md").read_text()
    assert "# Sample" in md and "| i_clk | input | logic | Clock |" in md
    assert (root / "target" / "doc" / "index.html").is_file()


def test_build_with_errors_emits_nothing(tmp_path):
    root = make_project(tmp_path, "module M (o: output logic) {}", name="bad", stem="main")
    assert main(["build", "--manifest", str(root / "vl.toml")]) == 1
    assert not (root / "target").exists()


def test_related_spans_render_in_order(tmp_path, capsys):
    src = "module Counter () {}\nmodule Counter () {}\n"
    root = make_project(tmp_path, src, name="dup", stem="main")
    assert main(["check", "--manifest", str(root / "vl.toml")]) == 1
    err = capsys.readouterr().err
    assert err.index("error[E0201]") < err.index("first declared here")
    # Two source excerpts: the duplicate and the original.
    assert err.count("src/main.vl:") == 2
