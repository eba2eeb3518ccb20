"""Scan-record schema and deterministic CSV / JSON-lines serialization.

One record per (model, N) scan point.  Floats are written with ``%.12g``
(CSV) or shortest round-trip repr (JSON); both formats re-emit
byte-identically after a parse, and repeated runs of the same scan produce
byte-identical files.  ``schmidt_chi`` is empty/null for the free-fermion
model, where the Schmidt rank is not tracked.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import math

from .errors import ParseError

CSV_HEADER = "model,N,ell,E,E_A,E_tilde,E_A0,delta_E,W,Q,w_frac,q_frac,S,ent_gap,schmidt_chi"
FIELD_NAMES = tuple(CSV_HEADER.split(","))
MODELS = ("freefermion", "ising", "heisenberg")

# File-schema column -> dataclass attribute.
_ATTRS = {
    "model": "model", "N": "n", "ell": "ell", "E": "e", "E_A": "e_a",
    "E_tilde": "e_tilde", "E_A0": "e_a0", "delta_E": "delta_e", "W": "w",
    "Q": "q", "w_frac": "w_frac", "q_frac": "q_frac", "S": "s",
    "ent_gap": "ent_gap", "schmidt_chi": "schmidt_chi",
}


@dataclass(frozen=True)
class ScanRecord:
    """One scan point; attribute order matches the file schema."""

    model: str
    n: int
    ell: int
    e: float
    e_a: float
    e_tilde: float
    e_a0: float
    delta_e: float
    w: float
    q: float
    w_frac: float
    q_frac: float
    s: float
    ent_gap: float
    schmidt_chi: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParseError(f"unknown model {self.model!r}")
        if not isinstance(self.n, int) or not isinstance(self.ell, int):
            raise ParseError(f"sizes must be integers, got N={self.n!r}, ell={self.ell!r}")
        if self.n < 2 or not 1 <= self.ell < self.n:
            raise ParseError(f"invalid sizes N={self.n}, ell={self.ell}")
        for name in FIELD_NAMES[3:-1]:
            value = getattr(self, _ATTRS[name])
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParseError(f"field {name} must be finite, got {value!r}")
        if self.schmidt_chi is not None and (
            not isinstance(self.schmidt_chi, int) or self.schmidt_chi < 1
        ):
            raise ParseError(f"schmidt_chi must be a positive integer or absent, "
                             f"got {self.schmidt_chi!r}")

    def _values(self) -> list:
        return [self.model, self.n, self.ell, self.e, self.e_a, self.e_tilde,
                self.e_a0, self.delta_e, self.w, self.q, self.w_frac,
                self.q_frac, self.s, self.ent_gap, self.schmidt_chi]


def format_float(x: float) -> str:
    """12-significant-digit general format used by every CSV emitter."""
    return "%.12g" % x


def write_records(records, stream, fmt: str = "csv") -> None:
    """Serialize records to a text stream as CSV (with header) or JSON lines."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(FIELD_NAMES)
        for r in records:
            row = []
            for value in r._values():
                if isinstance(value, float):
                    row.append(format_float(value))
                elif value is None:
                    row.append("")
                else:
                    row.append(str(value))
            writer.writerow(row)
    elif fmt == "json":
        for r in records:
            obj = dict(zip(FIELD_NAMES, r._values()))
            stream.write(json.dumps(obj) + "\n")
    else:
        raise ParseError(f"unknown format {fmt!r}")


def records_text(records, fmt: str = "csv") -> str:
    buf = io.StringIO()
    write_records(records, buf, fmt)
    return buf.getvalue()


def _build(raw: dict, line: int) -> ScanRecord:
    try:
        chi = raw["schmidt_chi"]
        if chi in ("", None):
            chi = None
        else:
            chi = int(chi)
        rec = ScanRecord(
            model=str(raw["model"]), n=int(raw["N"]), ell=int(raw["ell"]),
            e=float(raw["E"]), e_a=float(raw["E_A"]), e_tilde=float(raw["E_tilde"]),
            e_a0=float(raw["E_A0"]), delta_e=float(raw["delta_E"]),
            w=float(raw["W"]), q=float(raw["Q"]), w_frac=float(raw["w_frac"]),
            q_frac=float(raw["q_frac"]), s=float(raw["S"]),
            ent_gap=float(raw["ent_gap"]), schmidt_chi=chi)
    except ParseError as exc:
        raise ParseError(f"line {line}: {exc}", line=line) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"line {line}: bad record ({exc})", line=line) from None
    return rec


def parse_records(text: str) -> list[ScanRecord]:
    """Parse scan records from CSV or JSON-lines text (format auto-detected).

    Raises ParseError with a 1-based line number on the first malformed
    line; an empty/blank input is an error too.
    """
    lines = text.splitlines()
    first = next((i for i, s in enumerate(lines) if s.strip()), None)
    if first is None:
        raise ParseError("no records found", line=1)
    records = []
    if lines[first].lstrip().startswith("{"):
        for i, s in enumerate(lines, start=1):
            if not s.strip():
                continue
            try:
                raw = json.loads(s)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {i}: invalid JSON ({exc.msg})", line=i) from None
            if not isinstance(raw, dict) or set(raw) != set(FIELD_NAMES):
                raise ParseError(f"line {i}: wrong field set", line=i)
            records.append(_build(raw, i))
    else:
        if lines[first].strip() != CSV_HEADER:
            raise ParseError(f"line {first + 1}: expected header {CSV_HEADER!r}",
                             line=first + 1)
        reader = csv.reader(lines[first + 1:])
        for offset, row in enumerate(reader, start=first + 2):
            if not row:
                continue
            if len(row) != len(FIELD_NAMES):
                raise ParseError(f"line {offset}: expected {len(FIELD_NAMES)} fields, "
                                 f"got {len(row)}", line=offset)
            records.append(_build(dict(zip(FIELD_NAMES, row)), offset))
    if not records:
        raise ParseError("no records found", line=len(lines))
    return records


def from_freefermion(energy: float, dec) -> ScanRecord:
    """Record from a free-fermion EnergyDecomposition plus the chain energy."""
    return ScanRecord(
        model="freefermion", n=dec.n, ell=dec.ell, e=energy, e_a=dec.e_a,
        e_tilde=dec.e_tilde, e_a0=dec.e_a0, delta_e=dec.delta_e, w=dec.w,
        q=dec.q, w_frac=dec.w_frac, q_frac=dec.q_frac, s=dec.s,
        ent_gap=dec.ent_gap, schmidt_chi=None)


def from_spin(kind: str, dec) -> ScanRecord:
    """Record from a ManyBodyDecomposition."""
    return ScanRecord(
        model=kind, n=dec.n, ell=dec.ell, e=dec.energy, e_a=dec.e_a,
        e_tilde=dec.e_tilde, e_a0=dec.e_a0, delta_e=dec.delta_e, w=dec.w,
        q=dec.q, w_frac=dec.w_frac, q_frac=dec.q_frac, s=dec.s,
        ent_gap=dec.ent_gap, schmidt_chi=dec.chi)
