import json
import subprocess
import sys

import pytest

from lcmsum.cli import fraction_decimal, main
from fractions import Fraction


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def test_fraction_decimal():
    assert fraction_decimal(Fraction(1, 3), 5) == "0.33333"
    assert fraction_decimal(Fraction(2, 3), 5) == "0.66667"
    assert fraction_decimal(Fraction(-1, 8), 3) == "-0.125"
    assert fraction_decimal(Fraction(5), 0) == "5"
    assert fraction_decimal(Fraction(11, 480), 10) == "0.0229166667"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def test_volume_command(capsys):
    code, out = run_cli(capsys, "volume", "--kind", "D_star", "--k", "3")
    assert code == 0 and out == "11/480\n"


def test_graph_command_deterministic(capsys):
    code, first = run_cli(capsys, "graph", "--k", "3")
    assert code == 0
    code, second = run_cli(capsys, "graph", "--k", "3")
    assert first == second
    assert first.splitlines()[0] == "k=3"


def test_qpoly_command(capsys):
    code, out = run_cli(capsys, "qpoly", "--k", "3")
    assert code == 0
    assert out == "coeffs=1,0,-9,16,-9,0,1,0\n"


def test_ism_command(capsys):
    code, out = run_cli(capsys, "ism", "--k", "4")
    assert code == 0
    assert "agree=yes" in out


def test_export_ieqs_matches_library(capsys):
    from lcmsum.polytope import build_polytope, export_ieqs

    code, out = run_cli(capsys, "export-ieqs", "--kind", "D_star3", "--k", "3")
    assert code == 0
    assert out == export_ieqs(build_polytope("D_star3", 3))
    assert "[1, -1, -1, 0]" in out


def test_rho_command_fields(capsys):
    code, out = run_cli(capsys, "rho", "--k", "2", "--digits", "12")
    assert code == 0
    fields = dict(line.split("=", 1) for line in out.splitlines())
    assert set(fields) == {"value", "abs_error", "primes_used",
                           "acceleration_order"}
    assert fields["value"].startswith("0.607927101854")
    assert int(fields["primes_used"]) > 0


def test_constants_command(capsys):
    code, out = run_cli(capsys, "constants", "--k", "3", "--digits", "8")
    assert code == 0
    fields = dict(line.split("=", 1) for line in out.splitlines())
    assert fields["c"].startswith("0.00016147")
    assert fields["vol_D"] == "11/3360"
    assert fields["theta1"] == "1/14"
    assert fields["theta2"] == "3/40"


def test_theta_command_k2_nota(capsys):
    code, out = run_cli(capsys, "theta", "--k", "2")
    assert code == 0
    assert "no power-saving exponent" in out


def test_brute_and_gwise_commands(capsys):
    code, bout = run_cli(capsys, "brute", "--k", "2", "--x", "6")
    assert code == 0
    code, gout = run_cli(capsys, "gwise", "--k", "2", "--x", "6")
    assert code == 0
    brute = dict(line.split("=", 1) for line in bout.splitlines()
                 if "=" in line and " " not in line.split("=")[0])
    gw = dict(line.split("=", 1) for line in gout.splitlines()
              if "=" in line and " " not in line.split("=")[0])
    assert gw["constrained_sum"] == brute["recip_lcm_sum"]
    assert gw["constrained_sum_gcd1"] == brute["recip_lcm_sum_coprime"]
    assert "tuples=36" in bout  # 6**2 raw pairs
    assert bout.split("coprime_tuples=")[1].strip() == \
        gout.split("gcd1_tuples=")[1].strip()


def test_alpha_command(capsys):
    code, out = run_cli(capsys, "alpha", "--k", "2", "--x", "4")
    assert code == 0
    assert "alpha(2,4)=5" in out
    assert "alpha_sum=19/4" in out
    # 1 + 3 + 3 + 5 tuples with lcm <= 4
    assert out.strip().endswith("tuples_with_lcm_le_x=12")


def test_identity_command(capsys):
    code, out = run_cli(capsys, "identity", "--k", "2", "--x", "12")
    assert code == 0 and "pass" in out


def test_report_text_and_csv(capsys):
    code, text = run_cli(capsys, "report", "--k", "2", "--x", "1,10,100")
    assert code == 0
    assert text.splitlines()[0].startswith("x")
    code, csv_text = run_cli(capsys, "report", "--k", "2", "--x", "1,10,100",
                             "--format", "csv")
    assert code == 0
    rows = csv_text.strip().splitlines()
    assert rows[0] == "x,sum,sum_over_logpow,c,ratio_to_c,flagged"
    assert rows[1].startswith("1,1/1,")
    assert rows[1].endswith("yes")


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "vol.txt"
    code, out = run_cli(capsys, "volume", "--kind", "T", "--k", "2",
                        "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text() == "1/6\n"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["volume", "--kind", "NOT_A_KIND"])
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys):
    assert main(["graph", "--k", "9"]) == 2


def test_resource_error_exit_code(capsys):
    assert main(["brute", "--k", "3", "--x", "10000"]) == 3


def test_entry_point_subprocess():
    out = subprocess.run(
        [sys.executable, "-m", "lcmsum.cli", "volume", "--kind", "D", "--k", "2"],
        capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == "1/3\n"


def test_threads_env_accepted(monkeypatch, capsys):
    monkeypatch.setenv("LCMSUM_THREADS", "4")
    code, out = run_cli(capsys, "volume", "--kind", "D", "--k", "2")
    assert code == 0 and out == "1/3\n"
    monkeypatch.setenv("LCMSUM_THREADS", "junk")
    with pytest.raises(SystemExit):
        main(["volume", "--kind", "D", "--k", "2"])


# ---------------------------------------------------------------------------
# verify battery (budgeted here; the full run is the acceptance suite)
# ---------------------------------------------------------------------------

def test_verify_budget_skips_and_exit_3(capsys):
    code, out = run_cli(capsys, "verify", "--budget", "0", "--format", "json")
    assert code == 3
    rows = json.loads(out)
    assert all(r["status"] == "skip" for r in rows[1:])
    required = {"check_name", "status", "expected", "actual", "tolerance",
                "runtime_ms"}
    assert all(set(r) == required for r in rows)


def test_verify_battery_globals_resolve():
    # budget runs may skip expensive checks, so broken references inside
    # them would otherwise surface only in full runs
    import builtins
    import dis

    import lcmsum.cli as cli

    for name, thunk in cli._checks():
        for ins in dis.get_instructions(thunk):
            if ins.opname == "LOAD_GLOBAL":
                g = ins.argval
                assert g in thunk.__globals__ or hasattr(builtins, g), \
                    f"check {name!r} references undefined global {g!r}"


def test_verify_json_schema_and_order(capsys):
    code, out = run_cli(capsys, "verify", "--budget", "20", "--format", "json")
    rows = json.loads(out)
    names = [r["check_name"] for r in rows]
    assert names[0] == "edge-count-formula"
    assert names == sorted(names, key=names.index)  # declaration order kept
    passed = [r for r in rows if r["status"] == "pass"]
    assert passed, "at least the cheap graph checks must run inside budget"
    assert all(r["status"] in ("pass", "skip") for r in rows)
