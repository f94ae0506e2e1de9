import pandas as pd

from ..models import MetricRecord


def records_to_frame(records: list[MetricRecord]) -> pd.DataFrame:
    """Long format: one row per record."""
    return pd.DataFrame([r.as_row() for r in records])


def epoch_table(records: list[MetricRecord]) -> pd.DataFrame:
    """
    Wide per-epoch table: one column per metric name, block-indexed
    metrics as ``name[block]``.
    """
    rows: dict[int, dict] = {}
    for record in records:
        epoch = record.index["epoch"]
        column = record.name if "block" not in record.index else f"{record.name}[{record.index['block']}]"
        rows.setdefault(epoch, {"epoch": epoch})[column] = record.value
    frame = pd.DataFrame([rows[e] for e in sorted(rows)])
    leading = [c for c in ("epoch", "lr", "clean_acc", "adv_acc", "loss") if c in frame.columns]
    return frame[leading + [c for c in frame.columns if c not in leading]]
