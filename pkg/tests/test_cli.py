import json

from germcalc.cli import (
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_PRECONDITION,
    EXIT_VERIFY_FAILED,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exp_example(capsys):
    code, out, _ = run(capsys, "exp", "--dim", "1", "--order", "4", "x1^2 d1")
    assert code == EXIT_OK
    assert out.strip() == "result: (x1 + x1^2 + x1^3 + x1^4)"


def test_global_options_before_subcommand(capsys):
    code, out, _ = run(capsys, "--dim", "1", "--order", "4", "exp", "x1^2 d1")
    assert code == EXIT_OK and "x1^4" in out


def test_soluble_length_example(capsys):
    code, out, _ = run(
        capsys,
        "soluble-length", "--dim", "1", "--order", "6", "--mode", "jet",
        "--gens", "x1 d1; x1^2 d1",
    )
    assert code == EXIT_OK
    assert out.strip() == "soluble-length: 2"


def test_log_round_trip(capsys):
    code, out, _ = run(capsys, "log", "--dim", "1", "--order", "4", "(x1 + x1^2 + x1^3 + x1^4)")
    assert code == EXIT_OK
    assert out.strip() == "result: x1^2 d1"


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "--dim", "1", "x1 d1", "x1^2 d1")
    assert code == EXIT_OK
    assert out.strip() == "result: x1^2 d1"


def test_compose_invert_commutator(capsys):
    code, out, _ = run(capsys, "invert", "--dim", "1", "--order", "3", "(x1 + x1^2)")
    assert code == EXIT_OK and "result: (x1 - x1^2 + 2*x1^3)" == out.strip()
    code, out, _ = run(
        capsys, "compose", "--dim", "1", "--order", "3", "(x1 + x1^2)", "(x1 - x1^2 + 2*x1^3)"
    )
    assert code == EXIT_OK and out.strip() == "result: (x1)"
    code, out, _ = run(
        capsys, "commutator", "--dim", "1", "--order", "4", "(x1 + x1^2)", "(2*x1)"
    )
    assert code == EXIT_OK


def test_jet_matrix_and_jc(capsys):
    code, out, _ = run(capsys, "jet-matrix", "--dim", "1", "--order", "2", "--diffeo", "(x1 + x1^2)")
    assert code == EXIT_OK and "basis: x1 x1^2" in out
    code, out, _ = run(capsys, "jordan-chevalley", "--matrix", "1,1;0,2")
    assert code == EXIT_OK
    assert "semisimple" in out and "unipotent" in out


def test_kappa_json(capsys):
    code, out, _ = run(
        capsys,
        "kappa", "--dim", "1", "--mode", "jet", "--order", "6", "--format", "json",
        "--gens", "x1 d1; x1^2 d1",
    )
    assert code == EXIT_OK
    assert json.loads(out) == {"kappa": [1, 1, 0]}


def test_exit_codes(capsys):
    code, _, err = run(capsys, "exp", "--dim", "1", "--order", "4", "x1 +")
    assert code == EXIT_PARSE_ERROR and "parse error" in err
    code, _, err = run(capsys, "exp", "--dim", "1", "--order", "4", "x1 d1")
    assert code == EXIT_PRECONDITION and "nilpotent" in err
    code, _, err = run(
        capsys,
        "nilpotency-class", "--dim", "1", "--degree-budget", "8",
        "--gens", "x1^2 d1; x1^3 d1",
    )
    assert code == EXIT_BUDGET


def test_verify_solvable_n3_requires_opt_in(capsys):
    code, _, err = run(capsys, "verify", "solvable", "--n", "3")
    assert code == EXIT_PRECONDITION and "heavy" in err


def test_verify_witness_json_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "witness", "--n", "1", "--format", "json")
    code2, out2, _ = run(capsys, "verify", "witness", "--n", "1", "--format", "json")
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["claims"][0]["claim_id"] == "group-witness-n1"
    assert payload["claims"][0]["status"] == "pass"


def test_verify_nilpotent_text(capsys):
    code, out, _ = run(capsys, "verify", "nilpotent", "--n", "2")
    assert code == EXIT_OK and "nilpotent-family-n2" in out


def test_env_var_default_format(capsys, monkeypatch):
    monkeypatch.setenv("GERMCALC_FORMAT", "json")
    code, out, _ = run(capsys, "bracket", "--dim", "1", "x1 d1", "x1^2 d1")
    assert code == EXIT_OK
    assert json.loads(out) == {"result": "x1^2 d1"}


def test_exp_with_time_scalar(capsys):
    # leading-minus values need the = form, as usual with argparse
    code, out, _ = run(
        capsys, "exp", "--dim", "1", "--order", "3", "--time=-1/2", "x1^2 d1"
    )
    assert code == EXIT_OK
    assert out.strip() == "result: (x1 - 1/2*x1^2 + 1/4*x1^3)"


def test_verify_intro_cli(capsys):
    code, out, _ = run(capsys, "verify", "intro", "--k-param", "3")
    assert code == EXIT_OK and "intro-nilpotency-k3" in out


def test_verify_all_end_to_end(capsys):
    import json as _json

    code, out, _ = run(capsys, "verify", "all", "--format", "json")
    assert code == EXIT_OK
    payload = _json.loads(out)
    ids = [c["claim_id"] for c in payload["claims"]]
    assert ids == sorted(ids)
    assert all(c["status"] == "pass" for c in payload["claims"])
    assert len(payload["claims"]) == 11
