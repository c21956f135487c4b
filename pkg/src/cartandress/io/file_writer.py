import json
import os
from typing import Any, Dict, List

import polars as pl

from cartandress.core.exceptions import DataSourceError
from cartandress.core.models import LagrangianResult, Report
from cartandress.io.storage_adapters import get_storage
from cartandress.utils.logger import setup_logger

logger = setup_logger()


def to_json(payload: Dict[str, Any]) -> str:
    """Stable JSON text: sorted keys, so equal reports differ only in their timestamp."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def density_table(rows: List[Dict[str, Any]]) -> pl.DataFrame:
    return pl.DataFrame(rows)


def suite_table(report: Report) -> pl.DataFrame:
    """One row per suite: name, max residual, tolerance, verdict."""
    return pl.DataFrame(
        {
            "suite": [s.name for s in report.suites],
            "max_residual": [s.max_residual for s in report.suites],
            "tolerance": [s.tolerance for s in report.suites],
            "verdict": [s.verdict for s in report.suites],
        }
    )


class FileWriter:
    """
    Report writer with local and S3 backend support.
    Implements ReportRepository protocol.
    """

    def __init__(self, storage=None):
        self.storage = storage or get_storage()

    def write_report(self, report: Report, path: str) -> str:
        """Write a verification report as JSON."""
        return self.write_json(report.to_dict(), path)

    def write_lagrangian(self, result: LagrangianResult, path: str) -> str:
        """Write the JSON result and the density table as CSV next to it."""
        final_path = self.write_json(result.to_dict(), path)
        self.write_csv(density_table(result.rows), os.path.splitext(path)[0] + ".csv")
        return final_path

    def write_json(self, payload: Dict[str, Any], path: str) -> str:
        try:
            final_path = self.storage.write_text(to_json(payload), path)
        except Exception as e:
            raise DataSourceError(f"Failed to write file: {path} ({e})") from e
        logger.info(f"Written successfully: {final_path}")
        return final_path

    def write_csv(self, df: pl.DataFrame, path: str, **kwargs) -> str:
        """Write DataFrame to CSV using configured storage backend."""
        if df is None or df.is_empty():
            raise DataSourceError("Cannot write empty DataFrame.")
        try:
            final_path = self.storage.write_csv(df, path, **kwargs)
        except Exception as e:
            raise DataSourceError(f"Failed to write file: {path} ({e})") from e
        logger.info(f"Written successfully: {final_path}")
        return final_path
