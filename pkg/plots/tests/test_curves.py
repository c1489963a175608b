import csv

import pytest

from sfnplots.curves import (
    REQUIRED_COLUMNS,
    SWEEP_COLUMNS,
    CurveSpec,
    config_hash,
    gap_lines,
    load_rows,
    render,
)


def required_row(scheme="3d", eta="4", beta="0.0", value="5.0", censored="0", low="0"):
    return [
        scheme, eta, beta, value, "0.001", censored,
        "4", "1", "1024", "rayleigh", "2.0", "5000.0", low,
    ]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return str(path)


def test_single_point_renders(tmp_path):
    path = write_csv(tmp_path / "a.csv", REQUIRED_COLUMNS, [required_row()])
    out = tmp_path / "fig.png"
    render(CurveSpec(csv_paths=(path,), out_path=str(out)))
    assert out.exists() and out.stat().st_size > 0


def test_empty_csv_is_error_and_writes_nothing(tmp_path):
    path = write_csv(tmp_path / "a.csv", REQUIRED_COLUMNS, [])
    out = tmp_path / "fig.png"
    with pytest.raises(ValueError, match="no data rows"):
        render(CurveSpec(csv_paths=(path,), out_path=str(out)))
    assert not out.exists()


def test_headerless_file_is_error(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("")
    with pytest.raises(ValueError, match="empty file"):
        load_rows((str(path),), "required-ebn0")


def test_missing_column_named(tmp_path):
    header = [c for c in REQUIRED_COLUMNS if c != "target_ber"]
    path = write_csv(tmp_path / "a.csv", header, [])
    with pytest.raises(ValueError, match="target_ber"):
        load_rows((str(path),), "required-ebn0")


def test_unexpected_column_named(tmp_path):
    header = REQUIRED_COLUMNS + ["wall_time"]
    path = write_csv(tmp_path / "a.csv", header, [])
    with pytest.raises(ValueError, match="wall_time"):
        load_rows((str(path),), "required-ebn0")


def test_column_order_free(tmp_path):
    header = list(reversed(REQUIRED_COLUMNS))
    row = list(reversed(required_row()))
    path = write_csv(tmp_path / "a.csv", header, [row])
    rows = load_rows((str(path),), "required-ebn0")
    assert rows[0]["scheme"] == "3d"
    assert rows[0]["required_ebn0_db"] == "5.0"


def test_low_confidence_rows_refused(tmp_path):
    path = write_csv(
        tmp_path / "a.csv",
        REQUIRED_COLUMNS,
        [required_row(), required_row(beta="-6.0", low="1")],
    )
    out = tmp_path / "fig.png"
    with pytest.raises(ValueError, match="include-censored"):
        render(CurveSpec(csv_paths=(path,), out_path=str(out)))
    render(CurveSpec(csv_paths=(path,), out_path=str(out), include_censored=True))
    assert out.exists()


def test_censored_rows_never_plotted_as_values(tmp_path):
    # an admitted censored row (value inf) must not crash the renderer
    path = write_csv(
        tmp_path / "a.csv",
        REQUIRED_COLUMNS,
        [required_row(), required_row(beta="-30.0", value="inf", censored="1", low="1")],
    )
    out = tmp_path / "fig.png"
    render(CurveSpec(csv_paths=(path,), out_path=str(out), include_censored=True))
    assert out.exists()


def test_gap_lines_match_csv_arithmetic():
    rows = [
        dict(zip(REQUIRED_COLUMNS, required_row("3d", beta="-12.0", value="5.74"))),
        dict(zip(REQUIRED_COLUMNS, required_row("alamouti", beta="-12.0", value="11.05"))),
        dict(zip(REQUIRED_COLUMNS, required_row("golden", beta="-12.0", value="10.8"))),
    ]
    lines = gap_lines(rows)
    assert len(lines) == 2
    gaps = {line.split(" - ")[0].split(": ")[1]: line for line in lines}
    assert float(gaps["alamouti"].split("= ")[1].split(" dB")[0]) == 11.05 - 5.74
    assert float(gaps["golden"].split("= ")[1].split(" dB")[0]) == 10.8 - 5.74


def test_gap_needs_two_schemes():
    rows = [dict(zip(REQUIRED_COLUMNS, required_row("3d", beta="-12.0")))]
    assert gap_lines(rows) == []


def test_config_hash_tracks_config():
    a = dict(zip(REQUIRED_COLUMNS, required_row()))
    b = dict(a, scheme="golden", required_ebn0_db="9.9")
    c = dict(a, seed="7")
    assert config_hash([a]) == config_hash([a, b])  # scheme/value independent
    assert config_hash([a]) != config_hash([a, c])  # seed is config


def test_ber_waterfall_renders(tmp_path):
    rows = [
        ["sm", "4", "0.0", "3.0", "0.02", "0.3", "10000", "200", "4", "1",
         "1024", "rayleigh", "2.0", "5000.0", "0.002", "0"],
        ["sm", "4", "0.0", "5.0", "0.002", "0.1", "100000", "200", "4", "1",
         "1024", "rayleigh", "2.0", "5000.0", "0.0002", "0"],
    ]
    path = write_csv(tmp_path / "s.csv", SWEEP_COLUMNS, rows)
    out = tmp_path / "ber.png"
    render(CurveSpec(csv_paths=(path,), kind="ber", out_path=str(out)))
    assert out.exists() and out.stat().st_size > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        CurveSpec(csv_paths=("a.csv",), kind="scatter")
    with pytest.raises(ValueError):
        CurveSpec(csv_paths=())


def test_cli_success_and_gap_output(tmp_path, capsys):
    from sfnplots.cli import main

    path = write_csv(
        tmp_path / "a.csv",
        REQUIRED_COLUMNS,
        [
            required_row("3d", beta="-12.0", value="5.74"),
            required_row("alamouti", beta="-12.0", value="11.05"),
        ],
    )
    out = tmp_path / "fig.png"
    assert main(["plot", "--csv", path, "--out", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "alamouti - 3d = 5.3100000000000005 dB" in captured
    assert out.exists()


def test_cli_schema_error_exit_code(tmp_path, capsys):
    from sfnplots.cli import main

    path = write_csv(tmp_path / "bad.csv", REQUIRED_COLUMNS[:-1], [])
    assert main(["plot", "--csv", path, "--out", str(tmp_path / "f.png")]) == 2
    assert "low_confidence" in capsys.readouterr().err
