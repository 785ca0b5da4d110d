import json

import pytest

from pcanon.cli import EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_canon_reports_star_member(capsys):
    code, out, _ = run(capsys, "canon", "--field", "rcf_sq_t", "--prime", "2")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert "strict_inclusion_witness" in json.dumps(rep)


def test_check_psi_matches_ground_truth(capsys):
    code, out, _ = run(capsys, "check", "--field", "f3_s_t", "--prime", "3", "--criterion", "psi")
    assert code == EXIT_OK
    assert json.loads(out)


def test_check_lemma44_counts(capsys):
    code, out, err = run(capsys, "check", "--field", "q2", "--prime", "2", "--criterion", "lemma44")
    assert code == EXIT_OK
    assert "200/200 equivalences hold" in out + err


def test_inapplicable_criterion_is_usage_error(capsys):
    code, _, _ = run(capsys, "check", "--field", "q2", "--prime", "2", "--criterion", "lemma43")
    assert code == EXIT_USAGE


def test_eval_exit_codes(capsys):
    assert run(capsys, "eval", "--field", "q2", "--formula", "exists y. y^2 = x", "--assign", "x=17")[0] == EXIT_OK
    assert run(capsys, "eval", "--field", "q2", "--formula", "x = = 1")[0] == EXIT_USAGE
    code = run(capsys, "eval", "--field", "q_v2", "--formula", "exists y. y^3 + y = x + 7", "--assign", "x=1",
               "--budget", "16")[0]
    assert code == EXIT_UNKNOWN


def test_unknown_field_is_usage_error(capsys):
    assert run(capsys, "canon", "--field", "no_such_field", "--prime", "2")[0] == EXIT_USAGE


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["canon", "--nope"])
    assert e.value.code == EXIT_USAGE


def test_json_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "canon", "--field", "q2", "--prime", "2", "--json", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text()) == json.loads(out)


def test_inline_field_descriptor(capsys):
    code, out, _ = run(capsys, "canon", "--field", '{"kind": "PAdic", "p": 3, "precision": 16}', "--prime", "3")
    assert code == EXIT_OK


def test_topology_two_bases(capsys):
    code, out, _ = run(capsys, "topology", "--field", "q2", "--samples", "60", "--depth", "3",
                       "--basis", '{"kind": "balls"}', "--basis", '{"kind": "ufa", "f": "X^2 - 5", "a": "1"}')
    assert code == EXIT_OK, out
    assert "equivalence" in json.loads(out)


def test_job_file(capsys, tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"command": "canon", "field": "c_t", "prime": 2}))
    code, out, _ = run(capsys, "job", str(job))
    assert code == EXIT_OK


def test_zoo_listing(capsys):
    code, out, _ = run(capsys, "zoo")
    assert code == EXIT_OK and "q2" in out


def test_same_seed_same_bytes(capsys):
    a = run(capsys, "check", "--field", "mixed_perfect", "--prime", "2", "--criterion", "psi", "--seed", "3")[1]
    b = run(capsys, "check", "--field", "mixed_perfect", "--prime", "2", "--criterion", "psi", "--seed", "3")[1]
    assert a == b
