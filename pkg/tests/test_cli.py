import json
import math

import pytest

from tetrablock.cli import (EXIT_BOUNDARY, EXIT_EXTERIOR, EXIT_INVARIANT,
                            EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, main,
                            parse_complex, parse_phi)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    @pytest.mark.parametrize("text, expected", [
        ("0.5", 0.5), ("0.5+0.3i", 0.5 + 0.3j), ("-0.3i", -0.3j),
        ("i", 1j), ("-i", -1j), ("2e-1i", 0.2j), ("1+j", 1 + 1j),
    ])
    def test_complex_literals(self, text, expected):
        assert parse_complex(text) == expected

    def test_phi_specs(self):
        assert parse_phi("id").is_automorphism
        assert parse_phi("const:-0.5")(0.2) == -0.5
        auto = parse_phi("auto:0.5")
        assert auto(0.5) == 0.0
        full = parse_phi("blaschke:1|0.9|0.5;-0.2")
        assert full.degree == 2 and full.scale == 0.9


class TestMember:
    def test_interior(self, capsys):
        code, out, _ = run(capsys, "member", "tetrablock", "0", "0.3", "0.5")
        assert code == EXIT_OK
        assert "interior" in out
        assert "0.7" in out

    def test_boundary(self, capsys):
        code, out, _ = run(capsys, "member", "tetrablock", "1", "0", "0")
        assert code == EXIT_BOUNDARY

    def test_exterior(self, capsys):
        code, out, _ = run(capsys, "member", "tetrablock", "0", "2", "0")
        assert code == EXIT_EXTERIOR

    def test_g2_with_guard(self, capsys):
        code, out, _ = run(capsys, "member", "g2", "--", "-0.8", "0.16")
        assert code == EXIT_OK
        assert "interior" in out

    def test_parse_error_exit(self, capsys):
        code, _, err = run(capsys, "member", "tetrablock", "0", "zz", "0")
        assert code == EXIT_USAGE
        assert "usage error" in err

    def test_wrong_arity(self, capsys):
        code, _, err = run(capsys, "member", "g2", "1", "2", "3")
        assert code == EXIT_USAGE

    def test_json_envelope(self, capsys):
        code, out, _ = run(capsys, "member", "tetrablock", "0", "0.3", "0.5",
                           "--json")
        env = json.loads(out)
        assert env["schema_version"] == 1
        assert env["command"] == "member"
        assert env["results"]["location"] == "interior"
        assert env["results"]["e_value"] == {"scale": "raw", "value": 0.7}
        assert "tolerance" in env["diagnostics"]

    def test_env_var_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("TETRA_DEFAULT_TOL", "1e-3")
        code, out, _ = run(capsys, "member", "tetrablock", "--json",
                           "0.9995", "0", "0")
        env = json.loads(out)
        assert env["diagnostics"]["tolerance"] == 1e-3
        assert code == EXIT_BOUNDARY


class TestDistance:
    def test_separation_pair_report(self, capsys):
        code, out, _ = run(capsys, "distance", "0,0,-0.5", "0,0.05,-0.5",
                           "--json")
        assert code == EXIT_OK
        env = json.loads(out)
        res = env["results"]
        assert res["p_e"]["m_scale"] == pytest.approx(0.1 / 1.45, abs=1e-6)
        assert res["c_lower"]["m_scale"] == pytest.approx(0.1 * math.sqrt(0.5),
                                                          abs=1e-6)
        assert res["k_upper"]["m_scale"] == pytest.approx(0.1, abs=1e-9)
        assert res["closed_form"]["m_scale"] == pytest.approx(0.1, abs=1e-12)
        assert res["sandwich_ok"] is True

    def test_coincident_pair(self, capsys):
        code, out, _ = run(capsys, "distance", "0.1,0.1,0.01", "0.1,0.1,0.01",
                           "--json")
        env = json.loads(out)
        assert env["results"]["p_e"]["m_scale"] == 0.0
        assert env["results"]["k_upper"]["m_scale"] == 0.0

    def test_exterior_rejected(self, capsys):
        code, _, err = run(capsys, "distance", "2,0,0", "0,0,0")
        assert code == EXIT_INVARIANT
        assert "invariant violation" in err


class TestGeodesic:
    def test_eval_tetra(self, capsys):
        code, out, _ = run(capsys, "geodesic", "eval", "--domain", "tetrablock",
                           "--C", "0", "--phi", "id", "--omega1", "1",
                           "--omega2", "1", "--lambda", "0.5", "--json")
        env = json.loads(out)
        point = env["results"]["point"]
        assert point[0]["re"] == pytest.approx(0.5)
        assert point[2]["re"] == pytest.approx(0.25)

    def test_eval_g2(self, capsys):
        code, out, _ = run(capsys, "geodesic", "eval", "--domain", "g2",
                           "--C", "1", "--omega", "1", "--lambda", "0.4",
                           "--json")
        env = json.loads(out)
        point = env["results"]["point"]
        assert point[0]["re"] == pytest.approx(-0.8)
        assert point[1]["re"] == pytest.approx(0.16)

    def test_verify_geodesic(self, capsys):
        code, out, _ = run(capsys, "geodesic", "verify", "--C", "0.5",
                           "--phi", "auto:0.5", "--json")
        env = json.loads(out)
        assert env["results"]["verdict"] == "geodesic-verified"
        assert code == EXIT_OK

    def test_invalid_params_exit(self, capsys):
        code, _, err = run(capsys, "geodesic", "eval", "--C", "0.5",
                           "--phi", "const:-0.4")
        assert code == EXIT_INVARIANT

    def test_solve_round_trip(self, capsys):
        code, out, _ = run(capsys, "geodesic", "solve",
                           "--point", "0.5,0.5,0.25", "--lambda0", "0.5",
                           "--json")
        env = json.loads(out)
        assert code == EXIT_OK
        assert env["results"]["found"] is True
        assert env["results"]["C"]["value"] == pytest.approx(0.0, abs=1e-9)
        assert env["results"]["residual"]["value"] < 1e-9

    def test_solve_not_found(self, capsys):
        code, out, _ = run(capsys, "geodesic", "solve",
                           "--point", "0,0.3,0", "--lambda0", "0.8", "--json")
        assert code == EXIT_VERIFICATION
        assert json.loads(out)["results"]["found"] is False


class TestVerifyCommand:
    def test_single_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "separation")
        assert code == EXIT_OK
        assert out.startswith("PASS separation")

    def test_json_deterministic(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "rho", "--seed", "5",
                         "--json")
        _, out2, _ = run(capsys, "verify", "--suite", "rho", "--seed", "5",
                         "--json")
        assert out1 == out2


class TestSweep:
    def test_separation_grid(self, capsys, tmp_path):
        out_file = tmp_path / "sweep.csv"
        code, out, _ = run(capsys, "sweep", "separation", "--c-min", "0.05",
                           "--c-max", "0.95", "--c-step", "0.05",
                           "--lam", "0.1", "--out", str(out_file))
        assert code == EXIT_OK
        lines = out_file.read_text().splitlines()
        assert len(lines) == 20  # header + 19 rows
        header = lines[0].split(",")
        assert header == sorted(header)
        # the separation flips sign as C grows: present for small C, gone
        # near the far end of the window
        def flag_near(c_target):
            rows = [row.split(",") for row in lines[1:]]
            best = min(rows, key=lambda r: abs(float(r[0]) - c_target))
            return best[5]

        assert flag_near(0.05) == "true" and flag_near(0.5) == "true"
        assert flag_near(0.9) == "false"

    def test_lempert_equality_column(self, capsys, tmp_path):
        out_file = tmp_path / "sweep.jsonl"
        code, _, _ = run(capsys, "sweep", "lempert", "--grid-n", "5",
                         "--out", str(out_file), "--format", "jsonl")
        assert code == EXIT_OK
        rows = [json.loads(line) for line in out_file.read_text().splitlines()]
        assert rows and all(row["equal_within_tol"] for row in rows)

    def test_empty_grid_header_only(self, capsys, tmp_path):
        out_file = tmp_path / "empty.csv"
        code, _, _ = run(capsys, "sweep", "separation", "--c-min", "0.9",
                         "--c-max", "0.1", "--out", str(out_file))
        assert code == EXIT_OK
        assert out_file.read_text().splitlines() == [
            "C,c_lower_m,lam_modulus,magic_lower_m,p_e_m,separated"]

    def test_io_error_exit(self, capsys):
        code, _, err = run(capsys, "sweep", "separation",
                           "--out", "/nonexistent-dir/x.csv")
        assert code == 74

    def test_csv_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, "sweep", "separation", "--out", str(a))
        run(capsys, "sweep", "separation", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
