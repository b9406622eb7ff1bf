"""Line-oriented persistence for computed extremal values.

One record per line, space-separated, permutation and witness comma-joined:

    kind pattern param mode value status witness
    g    2,1     8     strict 4 exact  1,2,3,5
    p    2,1     2     strict 9 exact  1,1,1,2,2,2,1,2

Density records (kind ``g``) carry the extremal wave-free set; coloring
records (kind ``p``) carry the extremal coloring of [value-1].  Every exact
record must re-verify against the wave predicates, both on ``put`` and when
the file is loaded, and an exact record may never be contradicted by a later
exact record for the same key.  The store performs no symmetry closure:
looking up the reverse of a stored pattern misses.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

from .constructions import verify_coloring_wave_free
from .perm import Permutation
from .solvers import Coloring
from .waves import IntSet, Mode, find_wave, wave_predicate

__all__ = [
    "Record",
    "Store",
    "StoreError",
    "StoreConflictError",
    "DEFAULT_STORE_PATH",
    "STORE_PATH_ENV",
]

DEFAULT_STORE_PATH = "wavelab-cache.txt"
STORE_PATH_ENV = "WAVELAB_CACHE"


class StoreError(ValueError):
    """Malformed or unverifiable store content."""


class StoreConflictError(StoreError):
    """Two exact records disagree for the same key."""


@dataclass(frozen=True)
class Record:
    kind: str  # "g" | "p"
    pattern: Permutation
    parameter: int
    mode: Mode
    value: int
    status: str  # "exact" | "lower-bound"
    witness: IntSet | Coloring

    def __post_init__(self) -> None:
        if self.kind not in ("g", "p"):
            raise ValueError(f"kind must be 'g' or 'p', got {self.kind!r}")
        if self.status not in ("exact", "lower-bound"):
            raise ValueError(f"status must be 'exact' or 'lower-bound', got {self.status!r}")
        wave_predicate(self.mode)
        if self.parameter < 1:
            raise ValueError("parameter must be >= 1")

    @property
    def key(self) -> tuple[str, tuple[int, ...], int, str]:
        return (self.kind, self.pattern.values, self.parameter, self.mode)

    def verify(self) -> None:
        """Re-check the witness; raises StoreError when it fails."""
        if self.kind == "g":
            if not isinstance(self.witness, IntSet):
                raise StoreError("density record needs an integer-set witness")
            if self.witness.universe != self.parameter:
                raise StoreError(
                    f"witness universe {self.witness.universe} != n={self.parameter}"
                )
            if len(self.witness) != self.value:
                raise StoreError(
                    f"witness size {len(self.witness)} != value {self.value}"
                )
            if find_wave(self.witness, self.pattern, self.mode) is not None:
                raise StoreError(
                    f"witness {self.witness} contains a {self.mode} wave for {self.pattern}"
                )
        else:
            if not isinstance(self.witness, Coloring):
                raise StoreError("coloring record needs a coloring witness")
            if self.witness.domain_size != self.value - 1:
                raise StoreError(
                    f"extremal coloring domain {self.witness.domain_size} != value-1 "
                    f"= {self.value - 1}"
                )
            if self.witness.palette != self.parameter:
                raise StoreError(
                    f"extremal coloring palette {self.witness.palette} != r={self.parameter}"
                )
            if not verify_coloring_wave_free(self.witness, self.pattern, self.mode):
                raise StoreError(
                    f"extremal coloring has a monochromatic {self.mode} wave for {self.pattern}"
                )

    def to_line(self) -> str:
        wit = str(self.witness) or "-"
        return (
            f"{self.kind} {self.pattern} {self.parameter} {self.mode} "
            f"{self.value} {self.status} {wit}"
        )

    @classmethod
    def from_line(cls, line: str) -> "Record":
        parts = line.split()
        if len(parts) != 7:
            raise StoreError(f"expected 7 fields, got {len(parts)}: {line!r}")
        kind, pat_text, param_text, mode, value_text, status, wit_text = parts
        try:
            pattern = Permutation.parse(pat_text)
            parameter = int(param_text)
            value = int(value_text)
        except ValueError as exc:
            raise StoreError(f"unparseable record {line!r}: {exc}") from None
        if mode not in ("strict", "weak"):
            raise StoreError(f"bad mode in record: {line!r}")
        witness: IntSet | Coloring
        try:
            if kind == "g":
                if wit_text == "-":
                    witness = IntSet((), parameter)
                else:
                    witness = IntSet.parse(wit_text, universe=parameter)
            else:
                colors = () if wit_text == "-" else tuple(int(p) for p in wit_text.split(","))
                witness = Coloring(colors, parameter)
            return cls(kind, pattern, parameter, mode, value, status, witness)  # type: ignore[arg-type]
        except StoreError:
            raise
        except ValueError as exc:
            raise StoreError(f"bad witness in record {line!r}: {exc}") from None


class Store:
    """Append-only record file with an in-memory index.

    Single writer, many readers: each put writes one whole line and flushes.
    Loading verifies every record and rejects the file on the first bad one.
    """

    def __init__(self, path: str | os.PathLike[str]):
        self.path = os.fspath(path)
        self._lock = threading.Lock()
        self._records: dict[tuple, list[Record]] = {}
        if os.path.exists(self.path):
            with open(self.path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    try:
                        rec = Record.from_line(line)
                        rec.verify()
                        self._ingest(rec)
                    except StoreError as exc:
                        raise type(exc)(f"{self.path}:{lineno}: {exc}") from None

    def _ingest(self, rec: Record) -> None:
        bucket = self._records.setdefault(rec.key, [])
        if rec.status == "exact":
            for other in bucket:
                if other.status == "exact" and other.value != rec.value:
                    raise StoreConflictError(
                        f"exact value {rec.value} conflicts with stored exact "
                        f"value {other.value} for key {rec.key}"
                    )
        bucket.append(rec)

    def put(self, rec: Record) -> None:
        """Verify and durably append; identical exact re-puts are no-ops."""
        rec.verify()
        with self._lock:
            bucket = self._records.get(rec.key, [])
            if rec.status == "exact" and any(
                o.status == "exact" and o.value == rec.value for o in bucket
            ):
                return
            self._ingest(rec)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(rec.to_line() + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def get(
        self, kind: str, pattern: Permutation, parameter: int, mode: Mode
    ) -> Record | None:
        """Most authoritative record for the key: exact, else best lower bound."""
        bucket = self._records.get((kind, pattern.values, parameter, mode))
        if not bucket:
            return None
        for rec in bucket:
            if rec.status == "exact":
                return rec
        return max(enumerate(bucket), key=lambda iv: (iv[1].value, iv[0]))[1]
