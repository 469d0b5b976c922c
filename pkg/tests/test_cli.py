import json

from indexdensity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_density_exact(capsys):
    code, out, _ = run(capsys, "density", "--group", "2",
                       "--set", '{"type": "multiples", "n": 3}')
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["exact"] == "1/6"
    assert doc["result"]["certified"] is True
    assert doc["kernel"] in ("fast", "pure")


def test_density_frobenius(capsys):
    code, out, _ = run(capsys, "density", "--group", "5",
                       "--set", '{"type": "multiples", "n": 3}',
                       "--frob", '{"conductor": 4, "residues": [1]}')
    assert code == 0
    assert json.loads(out)["result"]["exact"] == "1/12"


def test_missing_group_is_usage_error(capsys):
    code, _, err = run(capsys, "density",
                       "--set", '{"type": "kfree", "k": 2}')
    assert code == 2
    assert "group" in err


def test_invalid_set_is_usage_error(capsys):
    code, _, err = run(capsys, "density", "--group", "2",
                       "--set", '{"type": "nonsense"}')
    assert code == 2


def test_config_file_with_flag_override(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({
        "group": "2", "set": {"type": "multiples", "n": 3}, "x": 1000,
    }))
    code, out, _ = run(capsys, "count", "--config", str(cfgfile),
                       "--x", "5000")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["x"] == 5000  # flag wins over the file


def test_count_determinism(tmp_path, capsys):
    args = ("count", "--group", "2",
            "--set", '{"type": "kfree", "k": 2}', "--x", "20000")
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        code, _, _ = run(capsys, *args, "--out", str(path))
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_compare_exit_codes(capsys):
    code, out, _ = run(capsys, "compare", "--group", "2",
                       "--set", '{"type": "multiples", "n": 3}',
                       "--x", "100000")
    assert code == 0
    assert json.loads(out)["result"]["comparison"]["ok"] is True


def test_constants_subcommand(capsys):
    code, out, _ = run(capsys, "constants",
                       "--set", '{"type": "kfree", "k": 2}',
                       "--r", "1", "--target-error", "1e-8")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["A_global_hi"] - doc["result"]["A_global_lo"] <= 2e-8


def test_classify_subcommand(capsys):
    code, out, _ = run(capsys, "classify",
                       "--set", '{"type": "kfree", "k": 2}')
    assert code == 0
    assert json.loads(out)["result"]["kind"] == "klfree"


def test_degree_subcommand(capsys):
    code, out, _ = run(capsys, "degree", "--group", "2",
                       "--m", "8", "--n", "8")
    assert code == 0
    assert json.loads(out)["result"]["degree"] == 16
