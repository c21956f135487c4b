import io
import os
from typing import Tuple

import polars as pl

from cartandress.core.exceptions import DataSourceError

try:
    import boto3
    S3_AVAILABLE = True
except ImportError:
    S3_AVAILABLE = False


def _env(name: str, default=None):
    return os.getenv(name, default)


class StorageAdapterError(DataSourceError):
    pass


class LocalDiskAdapter:
    """Handles report and scenario I/O on the local filesystem."""

    def __init__(self, base_dir: str = None):
        self.base_dir = base_dir or _env("LOCAL_DATA_DIR", ".")

    def _get_local_path(self, path: str) -> str:
        """Relative paths resolve under LOCAL_DATA_DIR; absolute paths are kept."""
        path = os.path.normpath(path)
        base = os.path.normpath(self.base_dir)

        if os.path.isabs(path) or base == "." or path.startswith(base + os.sep):
            return path
        return os.path.join(base, path)

    def read_text(self, path: str) -> str:
        with open(self._get_local_path(path), "r", encoding="utf-8") as f:
            return f.read()

    def write_text(self, text: str, path: str) -> str:
        full_path = self._get_local_path(path)
        parent = os.path.dirname(full_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(full_path, "w", encoding="utf-8") as f:
            f.write(text)
        return full_path

    def write_csv(self, df: pl.DataFrame, path: str, **kwargs) -> str:
        full_path = self._get_local_path(path)
        parent = os.path.dirname(full_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        df.write_csv(full_path, **kwargs)
        return full_path


class S3Adapter:
    """S3 storage adapter using boto3."""

    def __init__(self):
        if not S3_AVAILABLE:
            raise StorageAdapterError("boto3 not installed")
        self.s3 = boto3.client("s3", region_name=_env("AWS_REGION", "eu-central-1"))

    def _bucket_key(self, path: str, read: bool = False) -> Tuple[str, str]:
        """Extract S3 bucket and key from path."""
        bucket = _env("S3_INPUT_BUCKET") if read else _env("S3_OUTPUT_BUCKET")
        if not bucket:
            raise StorageAdapterError("S3 bucket not configured in ENV.")
        return bucket, path.lstrip("./")

    def read_text(self, path: str) -> str:
        bucket, key = self._bucket_key(path, read=True)
        obj = self.s3.get_object(Bucket=bucket, Key=key)
        return obj["Body"].read().decode("utf-8")

    def write_text(self, text: str, path: str) -> str:
        bucket, key = self._bucket_key(path)
        self.s3.upload_fileobj(io.BytesIO(text.encode("utf-8")), bucket, key)
        return f"s3://{bucket}/{key}"

    def write_csv(self, df: pl.DataFrame, path: str, **kwargs) -> str:
        bucket, key = self._bucket_key(path)
        buf = io.BytesIO()
        df.write_csv(buf, **kwargs)
        buf.seek(0)
        self.s3.upload_fileobj(buf, bucket, key)
        return f"s3://{bucket}/{key}"


def get_storage(backend: str = None):
    """Adapter for ``backend``, else the STORAGE_BACKEND environment variable (default local)."""
    backend = (backend or _env("STORAGE_BACKEND", "local")).lower()
    return S3Adapter() if backend == "s3" else LocalDiskAdapter()
