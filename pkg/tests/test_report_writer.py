import pandas as pd

from abelquot.certifier import verify_many
from abelquot.enumeration import transitive_groups
from abelquot.inequalities import sweep_margins
from abelquot.report_writer import (
    INDEX_COLUMNS,
    SWEEP_COLUMNS,
    catalog_index_frame,
    verify_frame,
    write_sweep_csv,
    write_verify_csv,
)

from . import c4, s5


def test_sweep_csv(tmp_path):
    result = sweep_margins(20604, 20700)
    path = tmp_path / "out" / "sweep.csv"
    write_sweep_csv(result.rows, str(path))
    frame = pd.read_csv(path)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert len(frame) == 97
    assert frame["n"].iloc[0] == 20604
    assert (frame["margin"] > 0).all()
    assert (frame["rhs_aux_hi"] < frame["theorem_rhs_lo"]).all()


def test_catalog_index():
    frame = catalog_index_frame(transitive_groups(4, use_cache=False))
    assert list(frame.columns) == INDEX_COLUMNS
    assert list(frame["order"]) == ["4", "4", "8", "12", "24"]
    assert list(frame["primitive"]) == [False, False, False, True, True]
    assert frame["label"].iloc[0] == "E4.1"


def test_verify_csv(tmp_path, c4, s5):
    reports = verify_many([c4, s5])
    frame = verify_frame(reports)
    assert list(frame["abelianization"]) == ["4", "2"]
    assert frame["holds"].all()
    path = tmp_path / "verify.csv"
    write_verify_csv(reports, str(path))
    written = pd.read_csv(path)
    assert list(written["label"]) == ["C4", "S5"]
    assert (
        written["log2_abelianization_hi"] <= written["theorem_rhs_lo"]
    ).all()
