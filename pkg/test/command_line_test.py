# Copyright 2024 The gnetm-toolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Module containing unit tests for the command line interface."""

import io
import json
import sys
from unittest.mock import patch

import pytest

import gnetm.command_line as command_line
from gnetm.matrices import deletion_audit


def invoke(*argv):
    """Run the CLI and return the exit code and the standard output."""
    stdout = io.StringIO()
    code = command_line.dispatch(list(argv), stdout)
    return code, stdout.getvalue()


class SilentController:
    """Controller without witness for 20."""

    def evaluate(self, ne):
        """Return None for 20, else (3, ne - 3)."""
        return None if ne == 20 else (3, ne - 3)


def test_command_line_version():
    """Verify correct handling of --version flag."""
    code, out = invoke("--version")
    assert code == 0
    assert out.startswith("gnetm ")


def test_command_line_no_command(capsys):
    """A missing command is a usage error."""
    code, _ = invoke()
    assert code == 1
    assert "a command is required" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["--unknown"],
        ["primes"],
        ["primes", "many"],
        ["crt", "3-2"],
        ["--output", "xml", "primes", "10"],
        ["run-machine"],
    ],
)
def test_command_line_invalid_args(argv, capsys):
    """Invalid arguments exit with code 1 and show the usage."""
    code, _ = invoke(*argv)
    assert code == 1
    assert "usage: gnetm" in capsys.readouterr().err


def test_command_line_help(capsys):
    """--help exits with code 0."""
    code, _ = invoke("--help")
    assert code == 0
    assert "run-machine" in capsys.readouterr().out


def test_gnetm_exits_with_code():
    """The console script exits with the dispatch code."""
    with patch.object(sys, "argv", ["gnetm", "--version"]):
        with pytest.raises(SystemExit) as exception:
            command_line.gnetm()

    assert exception.value.code == 0


def test_primes():
    """Test the primes command in every output format."""
    assert invoke("primes", "30") == (0, "2\n3\n5\n7\n11\n13\n17\n19\n23\n29\n")

    code, out = invoke("--output", "json", "primes", "10")
    assert code == 0
    assert json.loads(out) == {"limit": 10, "count": 4, "primes": [2, 3, 5, 7]}

    assert invoke("--output", "csv", "primes", "5") == (0, "prime\n2\n3\n5\n")
    assert invoke("primes", "1000000", "--count-only") == (0, "78498\n")


def test_partitions():
    """Test the partitions command."""
    code, out = invoke("partitions", "34")
    assert code == 0
    assert out == "34 = 3 + 31\n34 = 5 + 29\n34 = 11 + 23\n34 = 17 + 17\nphi=4\n"

    code, out = invoke("--output", "json", "partitions", "10")
    assert json.loads(out) == {"ne": 10, "pairs": [[3, 7], [5, 5]], "phi": 2}

    assert invoke("--output", "csv", "partitions", "10") == (0, "p,q\n3,7\n5,5\n")


def test_partitions_of_four():
    """4 without partitions is not a failure."""
    assert invoke("partitions", "4") == (0, "phi=0\n")
    assert invoke("partitions", "4", "--allow-two") == (0, "4 = 2 + 2\nphi=1\n")


def test_partitions_domain(capsys):
    """Odd values exit with code 1."""
    code, _ = invoke("partitions", "7")
    assert code == 1
    assert "Status: Error; Command: partitions" in capsys.readouterr().err


def test_phi_scan():
    """The scan writes one CSV record per even number."""
    code, out = invoke("phi-scan", "4", "20")
    assert code == 0
    assert out == "ne,phi\n4,0\n6,1\n8,1\n10,2\n12,1\n14,2\n16,2\n18,2\n20,2\n"

    code, out = invoke("--output", "json", "phi-scan", "6", "8")
    assert [json.loads(line) for line in out.splitlines()] == [
        {"ne": 6, "phi": 1},
        {"ne": 8, "phi": 1},
    ]


@patch("gnetm.command_line.report_falsification")
@patch("gnetm.command_line.partitions.phi_scan", return_value=iter([(6, 1), (8, 0), (10, 2)]))
def test_phi_scan_falsified(phi_scan_mock, report_mock):
    """An even number without partition exits with code 2 and is reported."""
    code, out = invoke("phi-scan", "6", "10")
    assert code == 2
    assert out == "ne,phi\n6,1\n8,0\n10,2\n"
    report_mock.assert_called_once_with("phi-scan", [8])


def test_modm():
    """Test the modm command."""
    code, out = invoke("modm", "34")
    assert code == 0
    assert out.splitlines()[0] == "34 = 31 (mod 3)"
    assert len(out.splitlines()) == 10

    code, out = invoke("--output", "json", "modm", "10", "--odd-complete")
    payload = json.loads(out)
    assert payload["kind"] == "odd-complete"
    assert [row["modulus"] for row in payload["rows"]] == [1, 3, 5, 7, 9]

    code, out = invoke("--output", "csv", "modm", "10")
    assert out == "modulus,residue,residue_is_prime\n3,7,True\n5,5,True\n7,3,True\n"


def test_crt(capsys):
    """Test the crt command and its errors."""
    assert invoke("crt", "3:2", "5:3", "7:2") == (0, "23\n")

    code, out = invoke("--output", "json", "crt", "3:2", "5:3")
    assert json.loads(out) == {"rows": [[3, 2], [5, 3]], "solution": 8, "modulus": 15}

    code, _ = invoke("crt", "6:1", "9:2")
    assert code == 1
    assert "not coprime" in capsys.readouterr().err


def test_table1():
    """Rows with and without a published count."""
    code, out = invoke("table1", "--rows", "100", "34")
    assert code == 0
    assert out.splitlines() == [
        "ne,r_theta_0.2,r_theta_0.5,r_theta_0.99,phi_computed,phi_paper,agree",
        "100,5,8,21,6,6,true",
        "34,3,5,13,4,,",
    ]


def test_table1_phi_limit():
    """Rows above the limit get no computed count."""
    code, out = invoke("--output", "json", "table1", "--rows", "3000000", "--phi-limit", "100")
    payload = json.loads(out)
    assert code == 0
    assert payload["r"] == {"0.2": 818, "0.5": 1443, "0.99": 3717}
    assert payload["phi_computed"] is None
    assert payload["phi_paper"] == 27502
    assert payload["agree"] is None


def test_matrix():
    """Test the matrix command."""
    assert invoke("matrix", "6") == (0, " 2  4  6\n 4  6  8\n 6  8 10\n")

    code, out = invoke("--output", "json", "matrix", "6", "--kind", "prime")
    assert json.loads(out) == {
        "ne": 6,
        "kind": "prime",
        "labels": [3, 5],
        "cells": [[6, 8], [8, 10]],
    }

    code, out = invoke("--output", "csv", "matrix", "6", "--kind", "max-antidiagonal")
    assert out == "label,1,3,5\n1,0,0,6\n3,0,6,0\n5,6,0,0\n"


def test_matrix_guard(capsys):
    """A dense matrix above the guard exits with code 3."""
    code, _ = invoke("--guard", "matrix_dense=10", "matrix", "20")
    assert code == 3
    assert "matrix_dense" in capsys.readouterr().err


def test_audit():
    """The audit writes one JSON line per even number."""
    code, out = invoke("audit", "6", "20")
    assert code == 0
    audits = [json.loads(line) for line in out.splitlines()]
    assert [audit["ne"] for audit in audits] == list(range(6, 21, 2))
    assert audits[-1]["interval_low_primes"] == 3
    assert audits[-1]["mismatch_count_exact"] == 6
    assert all(audit["contradiction"] for audit in audits)


@patch("gnetm.command_line.report_falsification")
def test_audit_without_survivor(report_mock):
    """An audit without surviving pair exits with code 2."""
    audit = deletion_audit(20)
    broken = type(audit)(**{**audit.__dict__, "contradiction": False})
    with patch("gnetm.command_line.matrices.audit_scan", return_value=[deletion_audit(18), broken]):
        code, _ = invoke("audit", "18", "20")

    assert code == 2
    report_mock.assert_called_once_with("audit", [20])


def test_run_machine():
    """The run report is written as JSON."""
    code, out = invoke("run-machine", "--limit", "100")
    report = json.loads(out)
    assert code == 0
    assert report["cells"] == 48
    assert report["failures"] == []
    assert report["controller"] == "basis2"
    assert not report["halted"]


def test_run_machine_trace():
    """Trace mode writes only the trace lines."""
    code, out = invoke("run-machine", "--start", "8", "--limit", "12", "--trace")
    assert code == 0
    assert out == "8\tT\t3+5\n10\tT\t3+7\n12\tT\t5+7\n"


def test_run_machine_metrics_file(tmp_path):
    """Metrics are written to the requested file."""
    path = tmp_path / "gnetm.prom"
    code, _ = invoke("run-machine", "--limit", "30", "--metrics-file", str(path))
    assert code == 0
    assert "gnetm_cells_total 13.0" in path.read_text()


@patch("gnetm.command_line.report_falsification")
@patch("gnetm.command_line.get_controller", return_value=SilentController())
def test_run_machine_falsified(get_controller_mock, report_mock):
    """A cell without witness exits with code 2."""
    code, out = invoke("run-machine", "--limit", "100", "--controller", "basis3")
    report = json.loads(out)
    assert code == 2
    assert report["failures"] == [20]
    assert report["halted"]
    assert report["cells"] == 8
    assert report["controller"] == "basis3"
    report_mock.assert_called_once_with("run-machine", [20])


def test_run_machine_cross_check():
    """Agreeing strategies keep the exit code at 0."""
    code, _ = invoke("run-machine", "--limit", "200", "--cross-check")
    assert code == 0


@patch("gnetm.command_line.cross_check", return_value=False)
def test_run_machine_cross_check_disagreement(cross_check_mock):
    """Disagreeing strategies exit with code 3."""
    code, _ = invoke("run-machine", "--limit", "100", "--cross-check")
    assert code == 3


def test_run_machine_invalid_range():
    """A start above the limit exits with code 1."""
    code, _ = invoke("run-machine", "--start", "100", "--limit", "20")
    assert code == 1


def test_selection():
    """Test the selection command."""
    code, out = invoke("--output", "json", "selection", "1000", "--seed", "3", "--trials", "50")
    payload = json.loads(out)
    assert code == 0
    assert payload["r"] == 26
    assert payload["trials"] == 50
    assert payload["seed"] == 3
    assert 0 <= payload["observed"] <= 1

    code, out = invoke("selection", "1000", "--r", "5", "--trials", "10")
    assert code == 0
    assert "r=5\n" in out
    assert "seed=" not in out


def test_selection_domain():
    """A probability outside (0, 1) exits with code 1."""
    code, _ = invoke("selection", "1000", "--theta", "100")
    assert code == 1


def test_bench():
    """The bench command writes a CSV row per workload."""
    code, out = invoke("bench", "--task", "sieve", "--sizes", "1000", "2000")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "task,n,elapsed_ms,throughput"
    assert [line.split(",")[:2] for line in lines[1:]] == [["sieve", "1000"], ["sieve", "2000"]]


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["--guard", "sieve_limit=10", "primes", "100"], 3),
        (["--guard", "memory=10", "primes", "100"], 1),
        (["--guard", "sieve_limit", "primes", "100"], 1),
        (["--threads", "0", "primes", "10"], 1),
        (["--log-level", "LOUD", "primes", "10"], 1),
    ],
)
def test_global_options(argv, expected):
    """Guard, thread and logging options are checked."""
    assert invoke(*argv)[0] == expected


def test_config_file(tmp_path):
    """Guards can come from the configuration file."""
    path = tmp_path / "gnetm.yaml"
    path.write_text("guards:\n  sieve_limit: 10\n")
    assert invoke("--config", str(path), "primes", "100")[0] == 3

    path.write_text("unknown: 1\n")
    assert invoke("--config", str(path), "primes", "100")[0] == 1


@patch("gnetm.command_line.primes.sieve", side_effect=RuntimeError("boom"))
def test_internal_error(sieve_mock, capsys):
    """Unexpected exceptions exit with code 3."""
    code, _ = invoke("primes", "10")
    assert code == 3
    assert "boom" in capsys.readouterr().err


def test_partitions_of_six():
    """The smallest even number with a partition."""
    assert invoke("partitions", "6") == (0, "6 = 3 + 3\nphi=1\n")


def test_table1_default_rows():
    """The default table has the eleven reference rows."""
    code, out = invoke("table1", "--phi-limit", "1000")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 12
    assert lines[1] == "100,5,8,21,6,6,true"
    assert lines[-1] == "1000000000,14926,26342,67862,,2274205,"


def test_scan_output_does_not_depend_on_threads():
    """Scans write the same bytes whatever the worker count."""
    with patch("gnetm.partitions.FFT_SCAN_LIMIT", 1000):
        single = invoke("--threads", "1", "phi-scan", "900", "1500")
        multi = invoke("--threads", "4", "phi-scan", "900", "1500")

    assert single == multi
    assert single[0] == 0


def test_run_machine_limit_above_guard(capsys):
    """A guard override refuses the run before any output is written."""
    code, out = invoke(
        "--guard", "dense_sieve_limit=70000", "run-machine", "--limit", "80000", "--trace"
    )
    assert code == 3
    assert out == ""
    assert "dense_sieve_limit" in capsys.readouterr().err
