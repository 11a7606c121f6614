from cprplot.cli import main


def test_density_happy_path(density_files, tmp_path):
    out = tmp_path / "fig.png"
    assert main(["density", "--in", str(density_files), "--out", str(out),
                 "--overlay", "0.5"]) == 0
    assert out.exists()
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_trajectories_happy_path(series_file, tmp_path):
    out = tmp_path / "fig.png"
    assert main(["trajectories", "--in", str(series_file), "--out", str(out)]) == 0
    assert out.exists()


def test_critical_map_happy_path(map_files, tmp_path):
    out = tmp_path / "fig.png"
    assert main(["critical-map", "--in", str(map_files), "--out", str(out),
                 "--no-boundary"]) == 0
    assert out.exists()


def test_missing_input_exit_code(tmp_path):
    out = tmp_path / "fig.png"
    assert main(["density", "--in", str(tmp_path / "nope.rstar.csv"),
                 "--out", str(out)]) == 2
    assert not out.exists()


def test_schema_violation_exit_code(tmp_path):
    bad = tmp_path / "bad.rstar.csv"
    bad.write_text("wrong,header\n1,2\n")
    assert main(["density", "--in", str(bad), "--out", str(tmp_path / "f.png")]) == 2


def test_unwritable_output_exit_code(density_files, tmp_path):
    target = tmp_path / "no_such_dir" / "fig.png"
    assert main(["density", "--in", str(density_files), "--out", str(target)]) == 3


def test_usage_error_exit_code():
    assert main(["density"]) == 1
