from __future__ import annotations

import json

import pytest

from dmsx.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_lists_the_loop(capsys):
    code, out, _ = run(capsys, "algebra", "seed:disk_a1")
    assert code == 0
    assert "1-X" in out


def test_algebra_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "algebra", "seed:disk_a(2)")
    assert code == 0
    json.loads(out)


def test_validate_and_seed_listing(capsys):
    assert run(capsys, "validate", "seed:annulus(1,1)")[0] == 0
    code, out, _ = run(capsys, "seed")
    assert code == 0 and "disk_a" in out


def test_seed_writes_surface_json(capsys, tmp_path):
    code, out, _ = run(capsys, "seed", "disk_a(3)")
    assert code == 0
    path = tmp_path / "s.json"
    path.write_text(out)
    assert run(capsys, "validate", str(path))[0] == 0


def test_qint_of_disjoint_duals(capsys):
    code, out, _ = run(capsys, "qint", "seed:disk_a(3)", "dual:1", "dual:3")
    assert code == 0
    assert out.splitlines()[0] == "0"


def test_qint_and_qhom_agree(capsys):
    _, a, _ = run(capsys, "qint", "seed:disk_a(2)", "dual:2", "dual:1")
    _, b, _ = run(capsys, "qhom", "seed:disk_a(2)", "dual:2", "dual:1")
    assert a.splitlines()[0] == b.strip() == "q^X"


def test_string_command(capsys):
    code, out, _ = run(capsys, "--format", "json", "string", "seed:disk_a(2)", "dual:1")
    assert code == 0
    json.loads(out)


def test_unknown_arc_is_a_usage_error(capsys):
    code, _, err = run(capsys, "qint", "seed:disk_a(2)", "dual:7", "dual:1")
    assert code == 2
    assert "no arc" in err


def test_bad_seed_is_invalid_input(capsys):
    code, _, err = run(capsys, "validate", "seed:no_such_surface")
    assert code == 3
    assert err


def test_bad_curve_literal(capsys):
    assert run(capsys, "qint", "seed:disk_a(2)", "{oops", "dual:1")[0] == 2


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "verify" in out


def test_twist_of_dual(capsys):
    code, out, _ = run(capsys, "twist", "seed:disk_a(2)", "dual:1", "dual:2")
    assert code == 0
    assert "passages" in out or "start" in out


def test_twist_compare_agrees(capsys):
    for extra in ((), ("--inverse",)):
        code, out, _ = run(capsys, "twist-compare", "seed:disk_a(3)", "dual:2", "dual:1", *extra)
        assert code == 0
        assert "verdict: equal" in out


def test_verify_main(capsys):
    code, out, _ = run(capsys, "verify", "seed:disk_a2", "--depth", "2")
    assert code == 0
    assert "PASS" in out


@pytest.mark.parametrize("campaign", ["compose", "cones", "slide"])
def test_verify_other_campaigns_json(capsys, campaign):
    code, out, _ = run(capsys, "--format", "json", "verify", "seed:disk_a(2)", "--depth", "1", "--campaign", campaign)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and len(data["reports"]) == 1
