"""Command-line interface: outputs, formats, and exit codes."""

import json

import pytest

from minset.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCompute:
    def test_exact(self, capsys):
        code, out, _ = run(capsys, "compute", "--set", "qr:6", "--exact")
        assert code == 0
        assert "mode: exact-automatic" in out
        assert "{1, 3, 4, 6, 7, 9, 22, 25, 28, 52, 55, 58, 82, 85, 88}" in out

    def test_bounded_base2(self, capsys):
        code, out, _ = run(capsys, "compute", "--set", "primes",
                           "--base", "2", "--bound", "100")
        assert code == 0
        assert "{10_2, 11_2}" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "compute", "--set", "pow2",
                           "--bound", str(1 << 20), "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert [e["value"] for e in doc["elements"]] == \
            ["1", "2", "4", "8", "65536"]
        assert doc["config"]["spec"] == "pow2"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "compute", "--set", "pow2",
                           "--bound", str(1 << 20), "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "digits,value,base"
        assert len(out.strip().splitlines()) == 6


class TestVerify:
    def test_verified_complete(self, capsys):
        code, out, _ = run(capsys, "verify", "--set", "3squares",
                           "--candidate", "1,2,3,4,5,6,8,9,70,77")
        assert code == 0
        assert "verified-complete" in out

    def test_candidate_file(self, capsys, tmp_path):
        path = tmp_path / "cand.txt"
        path.write_text("# three-squares candidate\n" +
                        "\n".join("1 2 3 4 5 6 8 9 70 77".split()) + "\n")
        code, out, _ = run(capsys, "verify", "--set", "3squares",
                           "--candidate-file", str(path))
        assert code == 0

    def test_undecided_exit_code(self, capsys):
        code, out, _ = run(capsys, "verify", "--set", "perfect",
                           "--candidate", "6,28")
        assert code == 2
        assert "mode: undecided" in out

    def test_non_member_is_an_error(self, capsys):
        code, _, err = run(capsys, "verify", "--set", "primes",
                           "--candidate", "2,3,9")
        assert code == 1
        assert "error:" in err


class TestOracle:
    def test_totient(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "totient", "--n", "990")
        assert code == 0
        assert "yes" in out and "991" in out

    def test_factor(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "factor", "--n", "5550")
        assert code == 0
        assert "2*3*5^2*37" in out

    def test_member(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "member",
                           "--set", "psi", "--n", "952")
        assert code == 0
        assert "yes" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "prime",
                           "--n", "555555555551", "--format", "json")
        assert code == 0
        assert json.loads(out)["result"] == "prime"


class TestOtherCommands:
    def test_families(self, capsys):
        code, out, _ = run(
            capsys, "families", "--set", "totient",
            "--candidate", "1,2,4,6,8,30,70,500,900,990,5590,9550")
        assert code == 0
        assert "residual: families" in out
        assert "55(5)^l0" in out

    def test_conjecture(self, capsys):
        code, out, _ = run(capsys, "conjecture", "pow2", "--max-exp", "100")
        assert code == 0
        assert "holds" in out

    def test_perfect(self, capsys):
        code, out, _ = run(capsys, "perfect", "--count", "12")
        assert code == 0
        assert "{6, 28}" in out and "{110_2}" in out

    def test_perfect_other_base(self, capsys):
        code, out, _ = run(capsys, "perfect", "--count", "12", "--base", "3")
        assert code == 0
        assert "{20_3, 1001_3}" in out


class TestErrors:
    def test_bad_spec(self, capsys):
        code, _, err = run(capsys, "compute", "--set", "blah")
        assert code == 1
        assert "usage error" in err and "position 0" in err

    def test_bad_candidate_digits(self, capsys):
        code, _, err = run(capsys, "verify", "--set", "primes",
                           "--candidate", "12", "--base", "2")
        assert code == 1

    def test_missing_candidate(self, capsys):
        code, _, err = run(capsys, "verify", "--set", "primes")
        assert code == 1
        assert "no candidate" in err

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
