"""Run-directory persistence: snapshots, CSV outputs, and the manifest.

Every scenario writes into one directory: a manifest.json naming every
output file with its content hash, energies.csv rows per monitored time,
and binary field snapshots with JSON sidecars.  The manifest is written
last and on every exit path, so a run directory is always inspectable.
"""

from __future__ import annotations

import hashlib
import json
import shutil
from pathlib import Path

from .energy import EnergyReport
from .grid import SpectralField, save_field


class OutdirExistsError(RuntimeError):
    """The output directory exists and --overwrite was not given."""


def _sha256(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def field_hash(f: SpectralField) -> str:
    return _sha256(f.samples.astype("<f8").tobytes())


class RunWriter:
    """Tracks files written into one run directory and assembles the manifest."""

    def __init__(self, outdir, overwrite: bool = False):
        self.outdir = Path(outdir)
        if self.outdir.exists() and any(self.outdir.iterdir()):
            if not overwrite:
                raise OutdirExistsError(
                    f"{self.outdir} exists and is not empty (use --overwrite)"
                )
            shutil.rmtree(self.outdir)
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.files: dict[str, str] = {}
        self.snapshots: list[dict] = []

    def add_text(self, name: str, text: str) -> None:
        data = text.encode()
        (self.outdir / name).write_bytes(data)
        self.files[name] = _sha256(data)

    def add_csv(self, name: str, header: str, rows) -> None:
        lines = [header]
        lines.extend(rows)
        self.add_text(name, "\n".join(lines) + "\n")

    def save_snapshot(self, f: SpectralField, t: float, index: int) -> None:
        name = f"u_{index:06d}.bin"
        save_field(f, self.outdir / name)
        self.files[name] = _sha256((self.outdir / name).read_bytes())
        sidecar = name[:-4] + ".json"
        self.files[sidecar] = _sha256((self.outdir / sidecar).read_bytes())
        self.snapshots.append({"file": name, "t": t})

    def energies_csv(self, reports: list[EnergyReport], name: str = "energies.csv") -> None:
        self.add_csv(name, EnergyReport.CSV_HEADER, (r.csv_row() for r in reports))

    def write_manifest(self, payload: dict) -> None:
        payload = dict(payload)
        payload["files"] = dict(sorted(self.files.items()))
        payload["snapshots"] = self.snapshots
        (self.outdir / "manifest.json").write_text(json.dumps(payload, indent=2) + "\n")
