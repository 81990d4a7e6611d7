"""
Disk cache for exact optima

Brute-force optima are exponential to compute and instances recur across
benchmark runs, so results are keyed by a SHA256 of the canonical instance
JSON combined with an oracle fingerprint.
"""

import json
import hashlib
from pathlib import Path
from datetime import datetime, timedelta
from fractions import Fraction
from typing import List, Optional, Dict, Tuple

import click

from models import Instance, format_rational, parse_rational


ORACLE_VERSION = "bnb-1"


class OracleCache:
    """Exact optima stored as one JSON file per (instance, oracle settings)"""

    def __init__(self, cache_dir: str = "cache", ttl_days: int = 30):
        """
        Args:
            cache_dir: Directory holding the entries (created if missing)
            ttl_days: Age after which an entry is ignored and removed
        """
        self.cache_dir = Path(cache_dir)
        self.ttl_days = ttl_days
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _fingerprint(self, cap: int) -> str:
        """Fingerprint of the oracle settings that affect stored results"""
        settings = json.dumps({"version": ORACLE_VERSION, "cap": cap}, sort_keys=True)
        return hashlib.sha256(settings.encode()).hexdigest()[:16]

    def _entry_path(self, inst: Instance, cap: int) -> Path:
        canonical = json.dumps(inst.to_dict(), sort_keys=True)
        key = hashlib.sha256(f"{canonical}||{self._fingerprint(cap)}".encode()).hexdigest()[:32]
        return self.cache_dir / f"{key}.json"

    def _entries(self) -> List[Path]:
        return sorted(self.cache_dir.glob("*.json"))

    def _is_stale(self, entry: Dict) -> bool:
        age = datetime.now() - datetime.fromisoformat(entry["cached_at"])
        return age > timedelta(days=self.ttl_days)

    def get(self, inst: Instance, cap: int) -> Optional[Tuple[List[str], Fraction]]:
        """
        Look up the optimum of an instance

        Stale and unreadable entries are deleted and count as misses.

        Returns:
            (cover vertex ids, optimal cost), or None on a miss
        """
        path = self._entry_path(inst, cap)
        if not path.exists():
            self.misses += 1
            return None

        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if self._is_stale(entry):
                path.unlink()
                self.misses += 1
                return None
            found = list(entry["cover"]), parse_rational(entry["opt"], "cached opt")
        except Exception as e:
            click.echo(f"Warning: Cache read failed: {e}", err=True)
            path.unlink(missing_ok=True)
            self.misses += 1
            return None

        self.hits += 1
        return found

    def set(self, inst: Instance, cap: int, cover_ids: List[str], opt: Fraction) -> None:
        entry = {
            "cached_at": datetime.now().isoformat(),
            "n": inst.n,
            "oracle_fingerprint": self._fingerprint(cap),
            "cover": list(cover_ids),
            "opt": format_rational(opt),
        }
        try:
            self._entry_path(inst, cap).write_text(json.dumps(entry, indent=2), encoding="utf-8")
        except OSError as e:
            click.echo(f"Warning: Cache write failed: {e}", err=True)

    def clear(self) -> int:
        """Delete every entry and reset the counters; returns the number deleted"""
        entries = self._entries()
        for path in entries:
            path.unlink()
        self.hits = self.misses = 0
        return len(entries)

    def get_stats(self) -> Dict:
        entries = self._entries()
        lookups = self.hits + self.misses
        return {
            "entries": len(entries),
            "total_size_kb": sum(p.stat().st_size for p in entries) / 1024,
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": 100 * self.hits / lookups if lookups else 0,
            "ttl_days": self.ttl_days,
        }

    def cleanup_expired(self) -> int:
        """
        Delete stale and unreadable entries

        Returns:
            Number of entries deleted
        """
        removed = 0
        for path in self._entries():
            try:
                keep = not self._is_stale(json.loads(path.read_text(encoding="utf-8")))
            except Exception:
                keep = False
            if not keep:
                path.unlink()
                removed += 1
        return removed
