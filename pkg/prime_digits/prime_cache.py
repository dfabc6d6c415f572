"""
On-disk cache of sieved decades.

Each decade [10^n, 10^(n+1)) is stored as ``primes_<n>.bin``: consecutive
unsigned 64-bit little-endian prime values. ``manifest.json`` records, per
decade, the prime count, the byte length and the CRC-32 of the file body.

Writes go to a temporary file in the cache directory and are moved into
place with an atomic rename, so readers never observe a partial file.

Usage:
    from prime_digits.prime_cache import PrimeCache
    cache = PrimeCache("~/.cache/prime_digits")
    cache.store(5, primes)
    primes = cache.load(5)
"""

import json
import logging
import os
import tempfile
import threading
import zlib
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .errors import CacheIntegrityError

logger = logging.getLogger(__name__)

PRIME_DTYPE = np.dtype("<u8")
MANIFEST_NAME = "manifest.json"
MANIFEST_VERSION = "1.0"


class PrimeCache:
    """File-per-decade prime store with a checksummed manifest."""

    def __init__(self, base_dir: Union[str, Path]):
        """
        Initialize the cache, creating the directory if needed.

        Args:
            base_dir: Directory holding the decade files and the manifest
        """
        self.base_dir = Path(base_dir).expanduser()
        self.manifest_file = self.base_dir / MANIFEST_NAME
        self._lock = threading.Lock()

        self.base_dir.mkdir(parents=True, exist_ok=True)

    def decade_path(self, n: int) -> Path:
        return self.base_dir / f"primes_{n}.bin"

    def _load_manifest(self) -> Dict[str, Any]:
        """Load the manifest, or an empty one when none exists yet."""
        if not self.manifest_file.exists():
            return {"version": MANIFEST_VERSION, "entries": []}
        try:
            with open(self.manifest_file, "r", encoding="utf-8") as f:
                manifest = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise CacheIntegrityError(f"unreadable cache manifest {self.manifest_file}: {e}")
        if not isinstance(manifest, dict) or not isinstance(manifest.get("entries"), list):
            raise CacheIntegrityError(f"malformed cache manifest {self.manifest_file}")
        return manifest

    def entry(self, n: int) -> Optional[Dict[str, Any]]:
        """Manifest entry for decade n, or None when it is not cached."""
        for item in self._load_manifest()["entries"]:
            if item.get("n") == n:
                return item
        return None

    def load(self, n: int) -> Optional[np.ndarray]:
        """
        Read and verify a cached decade.

        Args:
            n: Decade exponent

        Returns:
            The primes as an int64 array, or None on a cache miss

        Raises:
            CacheIntegrityError: If the file disagrees with its manifest entry
        """
        item = self.entry(n)
        path = self.decade_path(n)
        if item is None and not path.exists():
            logger.debug("cache miss for decade %d", n)
            return None
        if item is None:
            raise CacheIntegrityError(f"{path.name} has no manifest entry")
        if not path.exists():
            raise CacheIntegrityError(f"manifest lists decade {n} but {path.name} is missing")

        body = path.read_bytes()
        if len(body) != item.get("byte_length"):
            raise CacheIntegrityError(
                f"{path.name} holds {len(body)} bytes, manifest expects {item.get('byte_length')}"
            )
        checksum = zlib.crc32(body)
        if checksum != item.get("checksum"):
            raise CacheIntegrityError(
                f"{path.name} checksum {checksum:#010x} does not match manifest {item.get('checksum', 0):#010x}"
            )
        primes = np.frombuffer(body, dtype=PRIME_DTYPE).astype(np.int64)
        if len(primes) != item.get("count"):
            raise CacheIntegrityError(
                f"{path.name} holds {len(primes)} primes, manifest expects {item.get('count')}"
            )
        logger.debug("cache hit for decade %d (%d primes)", n, len(primes))
        return primes

    def store(self, n: int, primes: np.ndarray) -> Path:
        """
        Write a decade and update the manifest atomically.

        Args:
            n: Decade exponent
            primes: Ascending primes of the decade

        Returns:
            Path of the written decade file
        """
        body = np.ascontiguousarray(primes, dtype=PRIME_DTYPE).tobytes()
        path = self.decade_path(n)

        with self._lock:
            self._atomic_write(path, body)

            try:
                manifest = self._load_manifest()
            except CacheIntegrityError:
                logger.warning("rebuilding unreadable manifest in %s", self.base_dir)
                manifest = {"version": MANIFEST_VERSION, "entries": []}
            entries = [item for item in manifest["entries"] if item.get("n") != n]
            entries.append({
                "n": n,
                "count": len(body) // PRIME_DTYPE.itemsize,
                "byte_length": len(body),
                "checksum": zlib.crc32(body),
                "written": datetime.now().isoformat(timespec="seconds"),
            })
            manifest["entries"] = sorted(entries, key=lambda item: item["n"])
            self._atomic_write(self.manifest_file,
                               json.dumps(manifest, indent=2).encode("utf-8"))

        logger.info("cached decade %d at %s", n, path)
        return path

    def _atomic_write(self, target: Path, data: bytes):
        fd, tmp_name = tempfile.mkstemp(dir=self.base_dir, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def get_stats(self) -> Dict[str, Any]:
        """Summary of what the cache holds."""
        entries = self._load_manifest()["entries"]
        total_bytes = sum(item.get("byte_length", 0) for item in entries)
        return {
            "decades": [item["n"] for item in entries],
            "total_primes": sum(item.get("count", 0) for item in entries),
            "total_size_mb": round(total_bytes / (1024 * 1024), 2),
            "base_directory": str(self.base_dir),
        }
