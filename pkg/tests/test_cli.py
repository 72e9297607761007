"""CLI behavior: subcommands, exit codes, JSON determinism."""

import json

from puiseux.cli import (
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNRESOLVED,
    EXIT_VERIFY,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAlgebraic:
    def test_basic(self, capsys):
        code, out, _ = run(
            capsys, "algebraic", "--bound", "9/2", "y^2 - y + x = 0"
        )
        assert code == EXIT_OK
        assert "x + x^2 + 2*x^3 + 5*x^4" in out
        assert "1 - x - x^2 - 2*x^3 - 5*x^4" in out

    def test_unresolved_exit_code(self, capsys):
        code, out, _ = run(capsys, "algebraic", "y^2 - 2*x = 0")
        assert code == EXIT_UNRESOLVED
        assert "unresolved" in out

    def test_algebraic_root_mode(self, capsys):
        code, out, _ = run(
            capsys, "algebraic", "--roots", "algebraic", "y^2 - 2*x = 0"
        )
        assert code == EXIT_OK

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "algebraic", "y^^2 = 0")
        assert code == EXIT_PARSE
        assert "parse error" in err


class TestOde:
    def test_free_constant_visible(self, capsys):
        code, out, _ = run(capsys, "ode", "--bound", "4", "dy/dx = y/x + x")
        assert code == EXIT_OK
        assert "C1*x + x^2" in out

    def test_json_deterministic(self, capsys):
        args = ("ode", "--json", "--bound", "3", "dy/dx = x^(-2)*y^2 - x^(-1)")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == EXIT_OK
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["schema"] == "1"
        assert len(payload["branches"]) == 2
        for b in payload["branches"]:
            assert b["verified"] is True

    def test_resonance_values(self, capsys):
        code, out, _ = run(
            capsys,
            "ode", "--bound", "4", "--resonance", "values=5",
            "dy/dx = x^(-2)*y^2",
        )
        assert code == EXIT_OK
        assert "x + 5*x^2 + 25*x^3" in out

    def test_rational_rhs(self, capsys):
        code, out, _ = run(capsys, "ode", "--bound", "3", "dy/dx = (y)/(1+y)")
        assert code == EXIT_OK
        assert "y = 0" in out
        assert "validity window" in out

    def test_center_reaches_constant_branches(self, capsys):
        code, out, _ = run(
            capsys, "ode", "--bound", "3", "--center", "1",
            "dy/dx = (y)/(1+y)",
        )
        assert code == EXIT_OK
        assert "1/2*x + 1/16*x^2" in out

    def test_fractional_sigma(self, capsys):
        code, out, _ = run(capsys, "ode", "--bound", "4", "dy/dx = y^(1/2)")
        assert code == EXIT_OK
        assert "1/4*x^2" in out

    def test_json_deterministic_across_processes(self):
        import subprocess
        import sys

        cmd = [
            sys.executable, "-m", "puiseux.cli",
            "ode", "--json", "--bound", "3", "dy/dx = x^(-2)*y^2 - x^(-1)",
        ]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout == second.stdout

    def test_json_schema_fields(self, capsys):
        code, out, _ = run(
            capsys, "ode", "--json", "--bound", "3", "dy/dx = y/x + x"
        )
        payload = json.loads(out)
        for b in payload["branches"]:
            for key in ("mu0", "c0", "case", "mu_r", "status", "series",
                        "residual_guarantee"):
                assert key in b


class TestWfactor:
    def test_case_a_witness(self, capsys):
        code, out, _ = run(capsys, "wfactor", "--levels", "3", "P=y^2; Q=1")
        assert code == EXIT_OK
        assert "case A" in out
        assert "(1)*y^-1 + (x)" in out

    def test_case_b_witness(self, capsys):
        code, out, _ = run(capsys, "wfactor", "--levels", "2", "P=1; Q=y")
        assert code == EXIT_OK
        assert "case B" in out
        assert "1/2" in out

    def test_json(self, capsys):
        code, out, _ = run(
            capsys, "wfactor", "--json", "--levels", "2", "P=y^2; Q=1"
        )
        payload = json.loads(out)
        assert payload["case"] == "A"
        assert payload["verified_levels"] == [True, True, True]


class TestVerify:
    def test_accepting(self, capsys):
        code, out, _ = run(
            capsys,
            "verify", "--ode", "dy/dx = x^(-2)*y^2",
            "--alpha", "1/(1-x)", "--roots", "x; x/(1-x)", "--k", "1,-1",
        )
        assert code == EXIT_OK
        assert "constant" in out

    def test_rejecting_exit_code(self, capsys):
        code, out, _ = run(
            capsys,
            "verify", "--ode", "dy/dx = x^(-2)*y^2",
            "--alpha", "1/(1-x)", "--roots", "x; x/(1-x)", "--k=-1,1",
        )
        assert code == EXIT_VERIFY
        assert "not-constant" in out

    def test_ghosts_flag(self, capsys):
        code, out, _ = run(
            capsys,
            "verify", "--ode", "dy/dx = x^(-2)*y^2",
            "--alpha", "1", "--roots", "0; x", "--k", "1,1", "--ghosts",
        )
        assert code == EXIT_VERIFY
        assert "1/2*x" in out and "ghost" in out
