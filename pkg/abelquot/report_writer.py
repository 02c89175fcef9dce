import os

import pandas as pd

from .blocks import minimal_block_system
from .stabchain import chain_of
from .structure import abelianization_order

SWEEP_COLUMNS = ["n", "r", "rhs_aux_hi", "theorem_rhs_lo", "margin"]
INDEX_COLUMNS = [
    "degree",
    "label",
    "order",
    "abelianization",
    "primitive",
    "r",
    "d",
    "file",
]


def sweep_frame(rows):
    """One row per degree with its tightest check (see SweepRow)."""
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def write_sweep_csv(rows, path):
    """Writes the sweep margins to a CSV file.

    Parameters
    ----------
    rows : list of SweepRow
        As produced by sweep_margins.
    path : str
        Output file; its directory is created if needed.
    """
    _ensure_parent(path)
    sweep_frame(rows).to_csv(path, index=False, float_format="%.6f")


def catalog_index_frame(catalog, file_names=None):
    """Index of a catalog: order, abelianization and block structure of
    every group.

    Parameters
    ----------
    catalog : TransitiveCatalog
        Groups to describe.
    file_names : list of str
        Group file name per group, if the catalog was written to disk.
    """
    records = []
    for k, group in enumerate(catalog.groups):
        system = minimal_block_system(group) if group.degree > 1 else None
        records.append(
            {
                "degree": group.degree,
                "label": group.label,
                "order": str(chain_of(group).order),
                "abelianization": str(abelianization_order(group)),
                "primitive": system is None,
                "r": system.block_size if system else "",
                "d": system.block_count if system else "",
                "file": file_names[k] if file_names else "",
            }
        )
    return pd.DataFrame(records, columns=INDEX_COLUMNS)


def write_catalog_index(frame, path):
    _ensure_parent(path)
    frame.to_csv(path, index=False)


def read_catalog_index(path):
    return pd.read_csv(
        path, dtype={"label": str, "file": str}, keep_default_na=False
    )


def verify_frame(reports):
    """Per-group verdicts of a verify run."""
    return pd.DataFrame(
        [
            {
                "label": report.label,
                "degree": report.degree,
                "order": str(report.order),
                "abelianization": str(report.abelianization_order),
                "log2_abelianization_hi": float(report.log2_abelianization.hi),
                "theorem_rhs_lo": float(report.theorem_rhs.lo),
                "certificate_bound_hi": float(report.certificate.bound.hi),
                "holds": report.holds,
                "kp_holds": report.kp_holds,
                "block_bounds_hold": report.block_bounds_hold,
            }
            for report in reports
        ]
    )


def write_verify_csv(reports, path):
    _ensure_parent(path)
    verify_frame(reports).to_csv(path, index=False, float_format="%.6f")


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
