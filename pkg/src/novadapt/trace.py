"""Run records, cost accounting and stopping rules shared by all engines."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field


@dataclass
class FevalCounter:
    """One unit per energy estimate and per single-operator gradient
    estimate; the proxy for measurement budget."""

    count: int = 0

    def add(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("counter can only increase")
        self.count += n


@dataclass(frozen=True)
class GammaStrategy:
    """Update-magnitude rule for non-variational steps.

    ``constant`` uses a fixed gamma; ``lower_bound`` the descent-safe
    1/(4 |H| |A|^2); ``second_derivative`` the Newton-like -1/E'' with a
    fallback when the curvature is not negative.
    """

    variant: str
    gamma: float | None = None
    fallback_gamma: float | None = None
    curvature_epsilon: float = 1e-8

    def __post_init__(self):
        if self.variant not in ("constant", "lower_bound", "second_derivative"):
            raise ValueError(f"unknown gamma strategy {self.variant!r}")
        if self.variant == "constant" and (self.gamma is None or self.gamma <= 0):
            raise ValueError("constant strategy needs gamma > 0")
        if self.fallback_gamma is not None and self.fallback_gamma <= 0:
            raise ValueError("fallback_gamma must be positive")


@dataclass(frozen=True)
class StoppingRule:
    max_operators: int = 200
    gradient_norm_threshold: float = 1e-6
    energy_error_target: float | None = None


@dataclass(frozen=True)
class IterationRecord:
    index: int
    label: str
    gradient: float
    eta: float
    energy: float
    energy_error: float
    fevals: int


CSV_COLUMNS = ("iter", "label", "gradient", "eta", "energy", "energy_error", "fevals")


@dataclass
class RunTrace:
    """Per-iteration history of one run plus enough metadata to rerun it."""

    algorithm: str
    seed: int | None
    config: dict
    initial_energy: float
    ground_energy: float | None = None
    records: list[IterationRecord] = field(default_factory=list)
    status: str = "running"
    switch_at: int | None = None
    flags: list[str] = field(default_factory=list)

    def record(self, label: str, gradient: float, eta: float, energy: float, fevals: int) -> IterationRecord:
        if self.records and fevals <= self.records[-1].fevals:
            raise ValueError("cumulative feval count must strictly increase")
        error = energy - self.ground_energy if self.ground_energy is not None else float("nan")
        rec = IterationRecord(len(self.records) + 1, label, gradient, eta, energy, error, fevals)
        self.records.append(rec)
        return rec

    @property
    def n_operators(self) -> int:
        return len(self.records)

    @property
    def final_energy(self) -> float:
        return self.records[-1].energy if self.records else self.initial_energy

    @property
    def final_error(self) -> float:
        if self.ground_energy is None:
            return float("nan")
        return self.final_energy - self.ground_energy

    @property
    def total_fevals(self) -> int:
        return self.records[-1].fevals if self.records else 0

    def energy_errors(self) -> list[float]:
        return [r.energy_error for r in self.records]

    def fevals_at_error(self, target: float) -> int | None:
        """Cumulative fevals at the first iteration with error <= target."""
        for rec in self.records:
            if rec.energy_error <= target:
                return rec.fevals
        return None

    def iterations_at_error(self, target: float) -> int | None:
        for rec in self.records:
            if rec.energy_error <= target:
                return rec.index
        return None

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.records:
            writer.writerow(
                [r.index, r.label, repr(r.gradient), repr(r.eta), repr(r.energy), repr(r.energy_error), r.fevals]
            )
        return buf.getvalue()

    def sidecar_dict(self, version: str) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "version": version,
            "config": self.config,
            "initial_energy": self.initial_energy,
            "ground_energy": self.ground_energy,
            "status": self.status,
            "switch_at": self.switch_at,
            "flags": self.flags,
            "n_operators": self.n_operators,
            "final_energy": self.final_energy,
            "total_fevals": self.total_fevals,
        }


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trace(trace: RunTrace, csv_path: str, json_path: str, version: str) -> None:
    atomic_write_text(csv_path, trace.to_csv_text())
    atomic_write_text(json_path, json.dumps(trace.sidecar_dict(version), indent=2, sort_keys=True) + "\n")
