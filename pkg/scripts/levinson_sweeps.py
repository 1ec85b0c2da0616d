#!/usr/bin/env python3
"""
Parameter Sweeps

Stratified random samples of (m, kappa) and nu for the square index
identity, kappa sweeps across the periodic thresholds, and eigenvalue-count
bound checks. Every sweep returns a pandas DataFrame, one row per parameter
point; points run on a thread pool capped by LEVLAB_THREADS and rows keep
the sample order so a fixed seed reproduces the same frame.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from index_theorems import verify_levinson, verify_periodic_levinson
from levinson_config import get_config
from levinson_errors import LevinsonError, RefusalError
from model_parameters import ModelParams, NuParams, classify, gamma
from point_spectrum import count_bounds, eigenvalue_count

logger = logging.getLogger(__name__)


def _run_parallel(func: Callable[[Any], Dict[str, Any]], items: Sequence[Any]) -> pd.DataFrame:
    workers = max(1, get_config().threads)
    if workers == 1:
        rows = [func(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(func, items))
    return pd.DataFrame(rows)


def _status(exc: LevinsonError) -> str:
    return "refused" if isinstance(exc, RefusalError) else "error"


def _kappa_from_varsigma(m: complex, log_varsigma: complex) -> complex:
    return cmath.exp(log_varsigma) * complex(gamma(m)) / complex(gamma(-m))


def sample_model_params(count: int, rng: np.random.Generator,
                        allow_periodic: bool = False) -> List[ModelParams]:
    """
    Stratified sample over sign(Re m), |Im m| bands and |varsigma|.

    Exceptional draws are rejected and redrawn.
    """
    bands = [(0.0, 0.3), (0.3, 1.0), (1.0, 1.8)]
    samples: List[ModelParams] = []
    i = 0
    while len(samples) < count:
        lo, hi = bands[i % len(bands)]
        sign_r = 1.0 if (i // len(bands)) % 2 == 0 else -1.0
        i += 1
        if allow_periodic and i % 4 == 0:
            m = complex(0.0, rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0))
        else:
            m = complex(sign_r * rng.uniform(0.05, 0.95), rng.choice([-1.0, 1.0]) * rng.uniform(lo, hi))
        log_varsigma = complex(rng.uniform(-4.0, 4.0), rng.uniform(-np.pi, np.pi))
        p = ModelParams(m=m, kappa=_kappa_from_varsigma(m, log_varsigma))
        if classify(p).exceptional:
            continue
        samples.append(p)
    return samples


def sample_nu_params(count: int, rng: np.random.Generator) -> List[NuParams]:
    """Half inside |Im nu| < pi/2, half outside."""
    samples = []
    for i in range(count):
        bound = np.pi / 2
        im = rng.uniform(-0.95, 0.95) * bound if i % 2 == 0 else rng.choice([-1.0, 1.0]) * rng.uniform(1.05, 2.0) * bound
        samples.append(NuParams(nu=complex(rng.uniform(-3.0, 3.0), im)))
    return samples


def _levinson_row(p) -> Dict[str, Any]:
    row: Dict[str, Any] = {"family": p.to_dict()["family"]}
    if isinstance(p, ModelParams):
        row.update(m_re=p.m.real, m_im=p.m.imag, kappa_re=p.kappa.real, kappa_im=p.kappa.imag)
    else:
        row.update(nu_re=p.nu.real, nu_im=p.nu.imag)
    try:
        report = verify_levinson(p)
        row.update(winding=report.winding, count=report.eigenvalue_count,
                   corner_max=report.residuals["corner_max"], status=report.verdict)
    except LevinsonError as e:
        logger.warning("Levinson sweep point %s: %s", p.to_dict(), e)
        row.update(status=_status(e), message=str(e))
    return row


def fredholm_sweep(count_m: int = 200, count_nu: int = 50, seed: Optional[int] = None) -> pd.DataFrame:
    """Square index identity on a stratified sample of both families."""
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    params = list(sample_model_params(count_m, rng)) + list(sample_nu_params(count_nu, rng))
    frame = _run_parallel(_levinson_row, params)
    logger.info("Fredholm sweep: %d points, %d passing", len(frame), int((frame["status"] == "pass").sum()))
    return frame


def periodic_kappas(n: float, points: int = 13, spread: float = 1.5, phase: float = 0.3) -> List[complex]:
    """|kappa| = e^{pi n t} for t log-spaced across [-spread, spread], crossing t = +-1."""
    return [math.exp(np.pi * n * t) * cmath.exp(1j * phase) for t in np.linspace(-spread, spread, points)]


def _periodic_row(item) -> Dict[str, Any]:
    n, kappa = item
    ratio = math.log(abs(kappa)) / n
    row: Dict[str, Any] = {"n": n, "kappa_re": kappa.real, "kappa_im": kappa.imag, "log_ratio": ratio}
    try:
        report = verify_periodic_levinson(n, kappa)
        row.update(winding=report.winding, trace=report.trace_value, status=report.verdict)
    except LevinsonError as e:
        row.update(status=_status(e), message=str(e))
    return row


def periodic_sweep(ns: Iterable[float] = (0.5, 1.0, 2.0),
                   kappas: Optional[Dict[float, Sequence[complex]]] = None) -> pd.DataFrame:
    """Periodic index identity along kappa sweeps crossing |kappa| = e^{+-pi n}."""
    items = []
    for n in ns:
        for kappa in (kappas or {}).get(n, periodic_kappas(n)):
            items.append((float(n), complex(kappa)))
    return _run_parallel(_periodic_row, items)


def _count_row(p: ModelParams) -> Dict[str, Any]:
    bound = count_bounds(p)
    count = eigenvalue_count(p)
    return {
        "m_re": p.m.real, "m_im": p.m.imag, "kappa_re": p.kappa.real, "kappa_im": p.kappa.imag,
        "bound_kind": bound.kind, "bound_low": bound.low, "bound_high": bound.high,
        "count": count, "within": bound.contains(count),
    }


def count_bounds_sweep(count: int = 1000, seed: Optional[int] = None) -> pd.DataFrame:
    """Enumerated eigenvalue counts against the {N, N+1} / infinite / zero bounds."""
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    return _run_parallel(_count_row, sample_model_params(count, rng, allow_periodic=True))


def save_frame(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info("Sweep written to %s", path)
    return path
