#!/usr/bin/env python3
"""
Test suite for the disk invariant command line tool
"""

import io
import json
from contextlib import redirect_stderr, redirect_stdout
from functools import partial
from unittest import mock

import disk_closed
import disk_invariants_cli
from disk_invariants_cli import RunConfig, get_default_configuration, main
from localization import disk_edge_factor, verify_identities
from mirror_series import GUARD_ORDERS


def run_cli(*argv):
    """Run main() and capture (exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_default_configuration():
    config = get_default_configuration()
    assert config['max_degree'] == 9
    assert config['weight_samples'] == 3
    assert config['format'] == 'plain'
    assert RunConfig(degrees=(5,)).validate().p_max == 1


def test_invariants_json():
    code, out, _ = run_cli("--degrees", "5", "--max-degree", "3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload['geometry'] == {'degrees': [5], 'n': 5, 'l': 1, 'p_max': 1}
    assert payload['max_degree'] == 3
    assert payload['invariants'] == [{'d': 1, 'value': '30'}, {'d': 3, 'value': '4600'}]


def test_invariants_json_is_canonical():
    code, out, _ = run_cli("invariants", "--degrees", "3", "3", "--format", "json")
    assert code == 0
    assert json.dumps(json.loads(out), indent=2) == out.rstrip("\n")


def test_invariants_csv():
    code, out, _ = run_cli("--degrees", "5", "--max-degree", "1", "--format", "csv")
    assert code == 0
    assert out == "d,value\n1,30\n"


def test_invariants_plain():
    code, out, _ = run_cli("--degrees", "3", "--max-degree", "1")
    assert code == 0
    assert "X(3)" in out
    assert out.strip().splitlines()[-1].split() == ["1", "6"]


def test_invalid_degrees():
    code, out, err = run_cli("--degrees", "4")
    assert code == 2
    assert out == ""
    assert "degrees must be odd" in err

    code, _, err = run_cli("--degrees", "1")
    assert code == 2
    assert "n − l must be positive and even" in err


def test_invalid_options():
    assert run_cli("--degrees", "5", "--max-degree", "4")[0] == 2
    assert run_cli("--degrees", "5", "--format", "xml")[0] == 2
    assert run_cli("--max-degree", "5")[0] == 2
    code, _, err = run_cli("verify", "--degrees", "7", "--weight-samples", "1")
    assert code == 2
    assert "need ≥ 2 weight samples" in err


def test_verify_passes():
    code, out, err = run_cli("verify", "--degrees", "5", "--seed", "0")
    assert code == 0
    assert "RESULT: PASS" in out
    assert "✅" in err
    assert run_cli("verify", "--degrees", "3", "3", "--seed", "1")[0] == 0


def test_verify_json_is_deterministic():
    args = ("verify", "--degrees", "3", "3", "--seed", "1", "--max-degree", "5", "--format", "json")
    code, first, _ = run_cli(*args)
    assert code == 0
    _, second, _ = run_cli(*args)
    assert first == second
    payload = json.loads(first)
    assert payload['passed'] is True
    assert payload['seed'] == 1
    assert len(payload['weights']) == 3
    assert payload['failures'] == []


def test_invariants_are_computed_past_the_reported_degree():
    with mock.patch.object(disk_closed, "disk_potential_Q", wraps=disk_closed.disk_potential_Q) as spy:
        code, out, _ = run_cli("--degrees", "5", "--format", "json")
    assert code == 0
    assert [c.args[1] for c in spy.call_args_list] == [9 + GUARD_ORDERS]
    payload = json.loads(out)
    assert [entry['d'] for entry in payload['invariants']] == [1, 3, 5, 7, 9]


def test_verify_runs_at_the_guard_order():
    sample_spy = mock.patch.object(disk_invariants_cli, "sample_weights",
                                   wraps=disk_invariants_cli.sample_weights)
    verify_spy = mock.patch.object(disk_invariants_cli, "verify_identities",
                                   wraps=disk_invariants_cli.verify_identities)
    with sample_spy as sampled, verify_spy as verified:
        code, out, _ = run_cli("verify", "--degrees", "5", "--format", "json")
    assert code == 0
    assert sampled.call_args.args[1] == 9 + GUARD_ORDERS
    assert verified.call_args.args[2] == 9
    assert verified.call_args.kwargs['guard_orders'] == GUARD_ORDERS
    payload = json.loads(out)
    assert payload['max_degree'] == 9
    assert payload['guard_order'] == 9 + GUARD_ORDERS
    assert 'guard' in {check['identity'] for check in payload['checks']}


def test_verify_exits_one_when_guard_coefficients_disagree():
    corrupted = partial(disk_edge_factor, exponent_shift=1)
    with mock.patch.object(disk_invariants_cli, "verify_identities",
                           partial(verify_identities, edge_factor=corrupted)):
        code, out, err = run_cli("verify", "--degrees", "5")
    assert code == 1
    assert "RESULT: FAIL" in out
    assert "guard failed" in err
    assert "theorem failed" in err


def test_series_plain():
    code, out, _ = run_cli("series", "--degrees", "5")
    assert code == 0
    lines = out.splitlines()
    I_0 = next(line for line in lines if line.startswith("I_0 "))
    J = next(line for line in lines if line.startswith("J "))
    assert ": 1, 120, " in I_0
    assert ": 0, 770, " in J


def test_series_json_tau_is_odd():
    code, out, _ = run_cli("series", "--degrees", "3", "--format", "json")
    assert code == 0
    series = {entry['name']: entry for entry in json.loads(out)['series']}
    tau = series['tau']
    assert tau['variable'] == 'u'
    assert tau['coefficients'][1] == '6'
    assert all(c == '0' for c in tau['coefficients'][0::2])
    assert series['q(Q)']['coefficients'][:2] == ['0', '1']
    assert series['q(Q)']['variable'] == 'Q'
    assert series['J']['variable'] == 'q'


def test_inverse_mirror_map_is_labelled_in_Q():
    code, out, _ = run_cli("series", "--degrees", "5", "--max-degree", "3")
    assert code == 0
    line = next(line for line in out.splitlines() if line.startswith("q(Q) "))
    assert line.startswith("q(Q) (Q^0..Q^2): 0, 1, -770")

    code, out, _ = run_cli("series", "--degrees", "5", "--max-degree", "3", "--format", "csv")
    assert code == 0
    rows = [row.split(",") for row in out.splitlines()[1:]]
    assert {row[1] for row in rows if row[0] == 'q(Q)'} == {'Q'}
    assert {row[1] for row in rows if row[0] == 'J'} == {'q'}


def main_suite():
    from suite_runner import run_suite
    return run_suite("COMMAND LINE TEST SUITE", globals())


if __name__ == "__main__":
    success = main_suite()
    exit(0 if success else 1)
