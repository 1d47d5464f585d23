"""File I/O utilities for JSON records, numeric CSV tables and manifests."""

import csv
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple


# 17 significant digits round-trip every float64 exactly
FLOAT_FORMAT = ".17g"


def format_float(value: float) -> str:
    """Format a float for CSV output without losing precision."""
    return format(float(value), FLOAT_FORMAT)


class FileIO:
    """Utilities for file input/output operations."""

    @staticmethod
    def write_json(file_path: str, data: Any) -> None:
        """Write a JSON document with sorted keys.

        Args:
            file_path: Output file path.
            data: JSON-serializable object.

        Raises:
            IOError: If file cannot be written.
        """
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
                f.write('\n')
        except Exception as e:
            raise IOError(f"Failed to write JSON file: {e}")

    @staticmethod
    def read_json(file_path: str) -> Any:
        """Read a JSON document.

        Raises:
            FileNotFoundError: If file doesn't exist.
            json.JSONDecodeError: If file contains invalid JSON.
            IOError: If file cannot be read.
        """
        path = Path(file_path)

        if not path.exists():
            raise FileNotFoundError(f"JSON file not found: {file_path}")

        try:
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise json.JSONDecodeError(f"Invalid JSON in file: {e.msg}", e.doc, e.pos)
        except Exception as e:
            raise IOError(f"Failed to read JSON file: {e}")

    @staticmethod
    def write_csv(file_path: str, header: Sequence[str],
                  rows: Sequence[Sequence[Any]]) -> None:
        """Write a CSV table; floats are written with 17 significant digits.

        Args:
            file_path: Output file path.
            header: Column names.
            rows: Row values (ints and strings are written as is).

        Raises:
            IOError: If file cannot be written.
        """
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(header)
                for row in rows:
                    writer.writerow([
                        format_float(v) if isinstance(v, float) else v
                        for v in row
                    ])
        except Exception as e:
            raise IOError(f"Failed to write CSV file: {e}")

    @staticmethod
    def read_csv(file_path: str) -> Tuple[List[str], List[List[str]]]:
        """Read a CSV table.

        Returns:
            Tuple of (header, rows) with raw string cells.

        Raises:
            FileNotFoundError: If file doesn't exist.
            IOError: If file cannot be read.
        """
        path = Path(file_path)

        if not path.exists():
            raise FileNotFoundError(f"CSV file not found: {file_path}")

        try:
            with open(path, 'r', encoding='utf-8', newline='') as f:
                reader = csv.reader(f)
                header = next(reader, [])
                rows = [row for row in reader if row]
            return header, rows
        except Exception as e:
            raise IOError(f"Failed to read CSV file: {e}")

    @staticmethod
    def checksum(file_path: str) -> str:
        """SHA-256 hex digest of a file."""
        digest = hashlib.sha256()
        with open(file_path, 'rb') as f:
            for chunk in iter(lambda: f.read(1 << 16), b''):
                digest.update(chunk)
        return digest.hexdigest()

    @staticmethod
    def manifest_entry(file_path: str, root: str) -> Dict[str, Any]:
        """Manifest record (relative name, size, checksum) for a written file."""
        path = Path(file_path)
        return {
            "file": str(path.relative_to(root)),
            "bytes": path.stat().st_size,
            "sha256": FileIO.checksum(str(path)),
        }

    @staticmethod
    def ensure_directory(dir_path: str) -> None:
        """Ensure directory exists, create if it doesn't.

        Args:
            dir_path: Directory path to ensure.

        Raises:
            IOError: If the directory cannot be created.
        """
        try:
            Path(dir_path).mkdir(parents=True, exist_ok=True)
        except Exception as e:
            raise IOError(f"Failed to create directory {dir_path}: {e}")
