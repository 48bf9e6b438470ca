import json

import pytest

from magcoh.cli import main


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


UNSTABLE_CONF = (
    "delta_m_eff = 0.3 wb\n"
    "delta_B = -0.45 wb\n"
    "J = 0.02 wb\n"
    "P = 6e-3\n"
)

SWEEP_CONF = (
    "delta_m_eff = 0.3 wb\n"
    "P = 1e-5 mW\n"
    "delta_B = 0.2 wb\n"
    "axis1 = J\n"
    "axis1_min = 0.05 wb\n"
    "axis1_max = 0.6 wb\n"
    "axis1_points = 8\n"
    "pair_barnett = true\n"
)


class TestPoint:
    def test_empty_config_prints_baseline(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", "")
        assert main(["point", "--config", conf]) == 0
        out = capsys.readouterr().out
        assert "stable = True" in out
        assert "C_tot" in out

    def test_unstable_point_exits_3(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", UNSTABLE_CONF)
        assert main(["point", "--config", conf]) == 3
        err = capsys.readouterr().err
        assert "unstable" in err

    def test_out_file_and_meta(self, tmp_path):
        conf = write(tmp_path / "c.conf", "P = 6e-4 mW\n")
        out = tmp_path / "point.csv"
        assert main(["point", "--config", conf, "--out", str(out)]) == 0
        assert out.exists()
        meta = json.loads((tmp_path / "point.meta.json").read_text())
        assert meta["provenance"]["P"] == "set"
        assert meta["provenance"]["T"] == "default"
        assert "delta_a_choice" in meta

    def test_config_error_exits_2(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", "nope = 1\n")
        assert main(["point", "--config", conf]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["point", "--config", str(tmp_path / "missing.conf")]) == 2


class TestPair:
    def test_pair_prints_contrasts(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", "delta_m_eff = 0.3 wb\nJ = 0.3 wb\nP = 1e-5 mW\n")
        assert main(["pair", "--config", conf, "--deltaB-mag", "0.2 wb"]) == 0
        out = capsys.readouterr().out
        assert "I_b" in out

    def test_negative_magnitude_rejected(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", "")
        assert main(["pair", "--config", conf, "--deltaB-mag", "-0.1 wb"]) == 2


class TestSweep:
    def test_sweep_writes_csv_and_meta(self, tmp_path):
        conf = write(tmp_path / "c.conf", SWEEP_CONF)
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", conf, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 9  # header + 8 pair rows
        assert (tmp_path / "sweep.meta.json").exists()

    def test_sweep_without_axes_exits_2(self, tmp_path, capsys):
        conf = write(tmp_path / "c.conf", "T = 1\n")
        assert main(["sweep", "--config", conf, "--out", str(tmp_path / "x.csv")]) == 2

    def test_jsonl_format_override(self, tmp_path):
        conf = write(tmp_path / "c.conf", SWEEP_CONF)
        out = tmp_path / "sweep.jsonl"
        assert main(["sweep", "--config", conf, "--out", str(out), "--format", "jsonl"]) == 0
        first = json.loads(out.read_text().splitlines()[0])
        assert first["schema_version"] == 1

    def test_io_error_exits_5(self, tmp_path):
        conf = write(tmp_path / "c.conf", SWEEP_CONF)
        out = tmp_path / "no" / "dir" / "x.csv"
        assert main(["sweep", "--config", conf, "--out", str(out)]) == 5


class TestReproduce:
    def test_fig4_writes_dataset_and_meta(self, tmp_path):
        out = tmp_path / "rep"
        assert main(["reproduce", "fig4", "--out", str(out)]) == 0
        assert (out / "fig4.csv").exists()
        meta = json.loads((out / "fig4.meta.json").read_text())
        assert meta["preset"] == "fig4"
        assert meta["pair_barnett"] is True

    def test_determinism_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["reproduce", "fig4", "--out", str(out1)]) == 0
        assert main(["reproduce", "fig4", "--out", str(out2)]) == 0
        assert (out1 / "fig4.csv").read_bytes() == (out2 / "fig4.csv").read_bytes()
        assert (out1 / "fig4.meta.json").read_bytes() == (out2 / "fig4.meta.json").read_bytes()

    def test_unknown_figure_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["reproduce", "fig9", "--out", "x"])


class TestStabilityMap:
    def test_reduced_schema(self, tmp_path):
        conf = write(
            tmp_path / "c.conf",
            "delta_m_eff = 0.3 wb\nP = 6e-3\n"
            "axis1 = delta_B\naxis1_min = -0.5 wb\naxis1_max = 0.5 wb\naxis1_points = 9\n"
            "axis2 = J\naxis2_min = 0.0 wb\naxis2_max = 0.1 wb\naxis2_points = 5\n",
        )
        out = tmp_path / "stab.csv"
        assert main(["stability-map", "--config", conf, "--out", str(out)]) == 0
        header, *rows = out.read_text().splitlines()
        cols = header.split(",")
        assert cols[-2:] == ["stable", "abscissa"]
        assert "C_a" not in cols
        assert len(rows) == 45
        verdicts = {r.split(",")[cols.index("stable")] for r in rows}
        assert verdicts == {"true", "false"}  # this drive power straddles the boundary
