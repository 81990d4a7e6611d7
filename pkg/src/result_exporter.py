"""
Export of results and reports as JSON documents or CSV tables
"""

import csv
import json
from io import StringIO
from pathlib import Path
from typing import Dict, List, Optional, Any

from models import ExportFormat


class ResultExporter:
    """Writes result payloads in the supported formats"""

    def export_to_json(self, payload: Any, output_path: Optional[str] = None) -> str:
        """
        Serialize a payload as indented JSON

        Args:
            payload: JSON-compatible document
            output_path: Optional file path to save (if None, returns string)

        Returns:
            JSON content as string
        """
        content = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
        self._save(content, output_path)
        return content

    def export_to_csv(self, rows: List[Dict], output_path: Optional[str] = None) -> str:
        """
        Serialize rows as CSV with a header taken from the first row

        Args:
            rows: Flat dictionaries sharing the same keys
            output_path: Optional file path to save

        Returns:
            CSV content as string
        """
        output = StringIO()
        if rows:
            writer = csv.DictWriter(output, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        content = output.getvalue()
        self._save(content, output_path)
        return content

    def _save(self, content: str, output_path: Optional[str]):
        if output_path:
            Path(output_path).parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', encoding='utf-8', newline='') as f:
                f.write(content)

    def export(self, payload: Any, rows: List[Dict], format: ExportFormat,
               output_path: Optional[str] = None) -> str:
        """
        Export in the requested format

        Args:
            payload: Document used for JSON
            rows: Table used for CSV
            format: ExportFormat enum
            output_path: Optional file path to save
        """
        if format == ExportFormat.JSON:
            return self.export_to_json(payload, output_path)
        elif format == ExportFormat.CSV:
            return self.export_to_csv(rows, output_path)
        else:
            raise ValueError(f"Unsupported format: {format}")

    def get_file_extension(self, format: ExportFormat) -> str:
        """Get appropriate file extension for format"""
        extensions = {
            ExportFormat.JSON: "json",
            ExportFormat.CSV: "csv",
        }
        return extensions.get(format, "txt")

    def get_mime_type(self, format: ExportFormat) -> str:
        """Get MIME type for format"""
        mime_types = {
            ExportFormat.JSON: "application/json",
            ExportFormat.CSV: "text/csv",
        }
        return mime_types.get(format, "text/plain")
