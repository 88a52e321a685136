"""Schema validation of the documented CSV/JSON inputs."""

import json

import numpy as np
import pytest

from epfigures import MissingColumn, SchemaMismatch, load_summary, load_table
from epfigures import schemas


def write(tmp_path, text, name="f.csv"):
    f = tmp_path / name
    f.write_text(text)
    return f


class TestLoadTable:
    def test_valid_trajectory(self, tmp_path):
        header = ",".join(schemas.TRAJECTORY)
        f = write(tmp_path, header + "\n" + ",".join(["0.5"] * 9) + "\n")
        tab = load_table(f, schemas.TRAJECTORY)
        assert set(tab) == set(schemas.TRAJECTORY)
        assert tab["x"] == pytest.approx([0.5])

    def test_string_columns(self, tmp_path):
        f = write(tmp_path, "T,direction,maxA\n0.2,cw,1.5\n0.2,ccw,0.3\n")
        tab = load_table(f, schemas.ADIABATICITY_SWEEP)
        assert list(tab["direction"]) == ["cw", "ccw"]
        assert tab["maxA"].dtype == np.float64

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaMismatch, match="does not exist"):
            load_table(tmp_path / "nope.csv", schemas.DRIVE)

    def test_empty_file(self, tmp_path):
        with pytest.raises(SchemaMismatch, match="empty"):
            load_table(write(tmp_path, ""), schemas.DRIVE)

    def test_header_only(self, tmp_path):
        with pytest.raises(SchemaMismatch, match="no data rows"):
            load_table(write(tmp_path, "t,ReJcd,ImJcd,deltaCD\n"), schemas.DRIVE)

    def test_missing_column(self, tmp_path):
        f = write(tmp_path, "t,ReJcd,deltaCD\n0,1,0\n")
        with pytest.raises(MissingColumn, match="ImJcd"):
            load_table(f, schemas.DRIVE)

    def test_extra_column_is_mismatch(self, tmp_path):
        f = write(tmp_path, "t,ReJcd,ImJcd,deltaCD,extra\n0,1,0,0,9\n")
        with pytest.raises(SchemaMismatch):
            load_table(f, schemas.DRIVE)

    def test_reordered_header_is_mismatch(self, tmp_path):
        f = write(tmp_path, "ReJcd,t,ImJcd,deltaCD\n1,0,0,0\n")
        with pytest.raises(SchemaMismatch):
            load_table(f, schemas.DRIVE)

    def test_ragged_row(self, tmp_path):
        f = write(tmp_path, "t,ReJcd,ImJcd,deltaCD\n0,1,0\n")
        with pytest.raises(SchemaMismatch, match="ragged"):
            load_table(f, schemas.DRIVE)

    def test_non_numeric(self, tmp_path):
        f = write(tmp_path, "t,ReJcd,ImJcd,deltaCD\n0,fast,0,0\n")
        with pytest.raises(SchemaMismatch, match="non-numeric"):
            load_table(f, schemas.DRIVE)


class TestLoadSummary:
    def payload(self):
        return {"T": 0.2, "direction": "cw", "cdMode": "full", "Dbar": 0.0,
                "DbarFine": 0.0, "xT": 1.0, "enclosedEPs": 1, "maxA": 2.0}

    def test_valid(self, tmp_path):
        f = write(tmp_path, json.dumps(self.payload()), "s.json")
        assert load_summary(f)["cdMode"] == "full"

    def test_bad_json(self, tmp_path):
        with pytest.raises(SchemaMismatch, match="invalid JSON"):
            load_summary(write(tmp_path, "{not json", "s.json"))

    def test_wrong_keys(self, tmp_path):
        p = self.payload()
        del p["maxA"]
        with pytest.raises(SchemaMismatch):
            load_summary(write(tmp_path, json.dumps(p), "s.json"))
