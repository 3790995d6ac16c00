"""Command-line interface: exit codes, formats, determinism, error paths."""

import json
import math
import os

import jsonschema
import numpy as np
import pytest

from darboux.cli import main

DOCS = os.path.join(os.path.dirname(__file__), "..", "docs")


def run(argv, capsys=None):
    code = main(argv)
    if capsys is not None:
        return code, capsys.readouterr()
    return code


class TestTrace:
    def test_sphere_latitude_csv(self, tmp_path):
        out = tmp_path / "circle.csv"
        code = run(["trace", "--surface", "builtin:sphere?r=1",
                    "--axis", "0,0,1", "--angle", "45",
                    "--seed", "0,0.785398", "--length", "4.45",
                    "--step", "0.001", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("s,x,y,z,u,v,tx,")
        assert 4400 <= len(lines) - 1 <= 4500
        first = np.array([float(x) for x in lines[1].split(",")[1:4]])
        last = np.array([float(x) for x in lines[-1].split(",")[1:4]])
        assert np.linalg.norm(first - last) <= 1e-5

    def test_deterministic_bytes(self, tmp_path):
        args = ["trace", "--surface", "builtin:sphere?r=1", "--axis", "0,0,1",
                "--angle", "60", "--seed", "0,1.0", "--length", "1.0",
                "--step", "0.001"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_plane_domain_error_exit_2(self, capsys):
        code, captured = run(["trace", "--surface", "builtin:plane",
                              "--axis", "0,0,1", "--angle", "30",
                              "--seed", "0,0"], capsys)
        assert code == 2
        assert "no isophote at this level near guess" in captured.err
        assert "Traceback" not in captured.err

    def test_cylinder_singular_exit_2(self, capsys):
        code, captured = run(["trace", "--surface", "builtin:cylinder?r=1",
                              "--axis", "0,0,1", "--angle", "90",
                              "--seed", "0,0"], capsys)
        assert code == 2
        assert "singular" in captured.err

    def test_obj_output_closed_polyline(self, tmp_path):
        out = tmp_path / "circle.obj"
        code = run(["trace", "--surface", "builtin:sphere?r=1",
                    "--axis", "0,0,1", "--angle", "45",
                    "--seed", "0,0.785398", "--length", "4.45",
                    "--step", "0.01", "--format", "obj", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        vertices = [l for l in lines if l.startswith("v ")]
        polylines = [l for l in lines if l.startswith("l ")]
        assert len(polylines) == 1
        indices = polylines[0].split()[1:]
        assert indices[0] == "1" and indices[-1] == "1"  # closed
        assert len(indices) == len(vertices) + 1

    def test_json_output(self, tmp_path):
        out = tmp_path / "t.json"
        code = run(["trace", "--surface", "builtin:sphere?r=1",
                    "--axis", "0,0,1", "--angle", "45",
                    "--seed", "0,0.785398", "--length", "0.5",
                    "--step", "0.01", "--format", "json", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["kind"] == "trace"
        assert payload["termination"] == "length reached"
        assert len(payload["samples"]) == 51

    def test_family_sweep(self, tmp_path):
        out = tmp_path / "fam.csv"
        code = run(["trace", "--surface", "builtin:sphere?r=1",
                    "--axis", "0,0,1", "--angle", "45",
                    "--seed", "0,0.785398", "--length", "0.3",
                    "--step", "0.01", "--family", "30:60:3",
                    "--out", str(out)])
        assert code == 0
        for angle in ("30", "45", "60"):
            assert (tmp_path / f"fam_deg{angle}.csv").exists()

    def test_eps_sing_env_override(self, tmp_path, monkeypatch, capsys):
        # an absurdly large threshold makes every point look singular
        monkeypatch.setenv("DARBOUX_EPS_SING", "1e6")
        code, captured = run(["trace", "--surface", "builtin:sphere?r=1",
                              "--axis", "0,0,1", "--angle", "45",
                              "--seed", "0,0.785398", "--length", "0.5",
                              "--step", "0.01"], capsys)
        assert code == 2
        assert "singular" in captured.err


class TestTraceImplicit:
    def test_torus_csv_has_empty_chart_columns(self, tmp_path):
        out = tmp_path / "torus.csv"
        code = run(["trace-implicit", "--surface", "builtin:torus?R=2&r=0.5",
                    "--axis", "0,0,1", "--angle", "60",
                    "--seed", "2.5,0,0.1", "--length", "1.0",
                    "--step", "0.01", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        cells = lines[1].split(",")
        assert cells[4] == "" and cells[5] == ""

    def test_expression_surface(self, tmp_path):
        out = tmp_path / "s.csv"
        code = run(["trace-implicit", "--surface", "implicit:f=x^2+y^2+z^2-1",
                    "--axis", "0,0,1", "--angle", "45",
                    "--seed", "0.7,0,0.7", "--length", "0.5",
                    "--step", "0.01", "--out", str(out)])
        assert code == 0

    def test_implicit_plane_exit_2(self, capsys):
        code, captured = run(["trace-implicit", "--surface", "implicit:f=z",
                              "--axis", "0,0,1", "--angle", "0",
                              "--seed", "0,0,0"], capsys)
        assert code == 2
        assert "singular" in captured.err


class TestSeedFind:
    def test_parametric(self, capsys):
        code, captured = run(["seed-find", "--surface", "builtin:sphere?r=1",
                              "--axis", "0,0,1", "--angle", "60",
                              "--guess", "0,0.4"], capsys)
        assert code == 0
        u, v = (float(x) for x in captured.out.split())
        assert v == pytest.approx(math.pi / 6, abs=1e-11)

    def test_implicit(self, capsys):
        code, captured = run(["seed-find", "--surface", "builtin:sphere?r=1",
                              "--implicit", "--axis", "0,0,1", "--angle", "45",
                              "--guess", "0.6,0,0.8"], capsys)
        assert code == 0
        x, y, z = (float(t) for t in captured.out.split())
        assert z == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_no_level_exit_2(self, capsys):
        code, captured = run(["seed-find", "--surface", "builtin:plane",
                              "--axis", "0,0,1", "--angle", "30",
                              "--guess", "0,0"], capsys)
        assert code == 2


class TestClassify:
    def test_helix_on_cylinder_report(self, tmp_path):
        out = tmp_path / "report.json"
        code = run(["classify", "--surface", "builtin:cylinder?r=1",
                    "--curve", "param:u=s;v=s", "--samples", "200",
                    "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["verdicts"]["rel_normal_slant"]["is_constant"] is True
        assert report["verdicts"]["isophotic"]["is_constant"] is True
        assert report["flags"]["geodesic"]["value"] is True

    def test_report_validates_against_schema(self, tmp_path):
        out = tmp_path / "report.json"
        run(["classify", "--surface", "builtin:cylinder?r=1",
             "--curve", "param:u=s;v=s", "--samples", "64", "--out", str(out)])
        schema = json.load(open(os.path.join(DOCS, "report.schema.json")))
        jsonschema.validate(json.loads(out.read_text()), schema)

    def test_space_curve_on_implicit_surface(self, tmp_path):
        out = tmp_path / "report.json"
        code = run(["classify", "--surface", "implicit:f=x^2+y^2+z^2-1",
                    "--curve",
                    "space:x=0.7071067811865476*cos(s);"
                    "y=0.7071067811865476*sin(s);z=0.7071067811865476",
                    "--samples", "100", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["verdicts"]["isophotic"]["is_constant"] is True
        assert report["flags"]["line_of_curvature"]["value"] is True
        schema = json.load(open(os.path.join(DOCS, "report.schema.json")))
        jsonschema.validate(report, schema)

    def test_curve_off_surface_exit_2(self, capsys):
        code, captured = run(["classify", "--surface", "implicit:f=x^2+y^2+z^2-1",
                              "--curve", "space:x=2*cos(s);y=2*sin(s);z=0"],
                             capsys)
        assert code == 2

    def test_degenerate_line_still_reports(self, tmp_path):
        out = tmp_path / "line.json"
        code = run(["classify", "--surface", "builtin:plane",
                    "--curve", "param:u=s;v=0;s=0,5", "--samples", "50",
                    "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert "error" in report["verdicts"]["rel_normal_slant"]
        assert report["flags"]["geodesic"]["value"] is True
        schema = json.load(open(os.path.join(DOCS, "report.schema.json")))
        jsonschema.validate(report, schema)


class TestFrames:
    def test_csv_columns(self, capsys):
        code, captured = run(["frames", "--surface", "builtin:cylinder?r=1",
                              "--curve", "param:u=s;v=s", "--samples", "16"],
                             capsys)
        assert code == 0
        lines = captured.out.splitlines()
        assert lines[0] == "s,x,y,z,tx,ty,tz,vx,vy,vz,ux,uy,uz,kg,kn,tg"
        assert len(lines) == 17
        row = [float(x) for x in lines[1].split(",")]
        assert row[13] == pytest.approx(0.0, abs=1e-9)   # kg
        assert row[14] == pytest.approx(-0.5, abs=1e-9)  # kn
        assert row[15] == pytest.approx(0.5, abs=1e-9)   # tg

    def test_json(self, capsys):
        code, captured = run(["frames", "--surface", "builtin:cylinder?r=1",
                              "--curve", "param:u=s;v=s", "--samples", "8",
                              "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(captured.out)
        assert payload["kind"] == "frames"
        assert len(payload["samples"]) == 8


class TestUsageErrors:
    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 1

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["trace", "--surface", "builtin:sphere?r=1"])
        assert exc.value.code == 1

    def test_bad_axis(self, capsys):
        code, captured = run(["trace", "--surface", "builtin:sphere?r=1",
                              "--axis", "0,0,0", "--angle", "45",
                              "--seed", "0,0.7"], capsys)
        assert code == 2
        assert "nonzero" in captured.err

    def test_angle_out_of_range(self, capsys):
        code, captured = run(["trace", "--surface", "builtin:sphere?r=1",
                              "--axis", "0,0,1", "--angle", "200",
                              "--seed", "0,0.7"], capsys)
        assert code == 2

    def test_bad_surface_spec(self, capsys):
        code, captured = run(["catalog"], capsys)
        assert code == 0
        assert "sphere" in captured.out


class TestCatalog:
    def test_lists_builtins(self, capsys):
        code, captured = run(["catalog"], capsys)
        assert code == 0
        for name in ("sphere", "cylinder", "plane", "torus", "helicoid",
                     "ellipsoid", "monkey_saddle"):
            assert name in captured.out
