"""Parameter-grid sweeps over (tau_L, tau_R) at fixed determinants.

Cells are independent, so the sweep is a plain work pool; results are
buffered and emitted in grid order regardless of worker count, making the
output file a deterministic function of the specification alone.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .certify import SearchConfig, certify
from .core import BcnfParams

#: Environment variable supplying the default worker count.
WORKERS_ENV = "BCNFCHAOS_WORKERS"

CSV_HEADER = "tau_L,tau_R,chi_chaos,beta,p_max,c,lambda_bound,fail_stage"


@dataclass(frozen=True)
class SweepSpec:
    """Endpoint-inclusive grid: value i of n is lo + i * (hi - lo) / (n - 1)."""

    tau_L_range: tuple[float, float, int]
    tau_R_range: tuple[float, float, int]
    delta_L: float
    delta_R: float
    search: SearchConfig = SearchConfig()
    workers: int = 1

    def __post_init__(self) -> None:
        for lo, hi, count in (self.tau_L_range, self.tau_R_range):
            if count < 1:
                raise ValueError("range counts must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SweepCell:
    tau_L: float
    tau_R: float
    chi_chaos: bool
    beta: float | None
    p_max: int | None
    c: float | None
    lambda_bound: float | None
    fail_stage: str


def grid_values(lo: float, hi: float, count: int) -> list[float]:
    """Endpoint-inclusive grid; a single-count range pins to lo."""
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _certify_cell(args: tuple) -> SweepCell:
    tau_L, tau_R, delta_L, delta_R, cfg = args
    try:
        cert = certify(BcnfParams(tau_L, tau_R, delta_L, delta_R), cfg)
        return SweepCell(
            tau_L=tau_L,
            tau_R=tau_R,
            chi_chaos=cert.chi_chaos,
            beta=cert.beta,
            p_max=cert.p_max,
            c=cert.expansion_c,
            lambda_bound=cert.lambda_bound,
            fail_stage=cert.fail_stage if cert.fail_stage is not None else "none",
        )
    except Exception as exc:  # a failed cell still records a row
        return SweepCell(
            tau_L=tau_L, tau_R=tau_R, chi_chaos=False,
            beta=None, p_max=None, c=None, lambda_bound=None,
            fail_stage=f"error:{type(exc).__name__}",
        )


def run_sweep(spec: SweepSpec) -> list[SweepCell]:
    """Certify every cell, row-major with tau_R outer and tau_L inner."""
    tasks = [
        (tau_L, tau_R, spec.delta_L, spec.delta_R, spec.search)
        for tau_R in grid_values(*spec.tau_R_range)
        for tau_L in grid_values(*spec.tau_L_range)
    ]
    if spec.workers == 1:
        return [_certify_cell(t) for t in tasks]
    chunk = max(1, len(tasks) // (spec.workers * 8))
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        return list(pool.map(_certify_cell, tasks, chunksize=chunk))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    # float() strips numpy scalars; + 0.0 canonicalises -0.0
    return repr(float(value) + 0.0) if isinstance(value, float) else str(value)


def render_csv(cells: list[SweepCell]) -> str:
    lines = [CSV_HEADER]
    for cell in cells:
        lines.append(",".join((
            _fmt(cell.tau_L),
            _fmt(cell.tau_R),
            _fmt(cell.chi_chaos),
            _fmt(cell.beta),
            _fmt(cell.p_max),
            _fmt(cell.c),
            _fmt(cell.lambda_bound),
            cell.fail_stage,
        )))
    return "\n".join(lines) + "\n"


def write_sweep(spec: SweepSpec, path: str) -> list[SweepCell]:
    cells = run_sweep(spec)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(cells))
    return cells
