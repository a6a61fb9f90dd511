"""Message accounting and empirical communication-growth classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import nnls

from .model import MachineSpec, Trace, Verdict, run

RESIDUAL_THRESHOLD = 0.1


@dataclass(frozen=True)
class CommStats:
    word_length: int
    forward_upper: int = 0
    forward_lower: int = 0
    backward_upper: int = 0
    backward_lower: int = 0

    @property
    def forward_total(self) -> int:
        return self.forward_upper + self.forward_lower

    @property
    def backward_total(self) -> int:
        return self.backward_upper + self.backward_lower


def _sent(steps):
    upper = sum(1 for s in steps if s.sent_upper is not None)
    lower = sum(1 for s in steps if s.sent_lower is not None)
    return upper, lower


def count_messages(trace: Trace, backward_trace: Optional[Trace] = None) -> CommStats:
    fu, fl = _sent(trace.steps)
    bu = bl = 0
    if backward_trace is not None:
        if backward_trace.word != trace.word:
            raise ValueError(f"traces are for different words: {trace.word!r} vs {backward_trace.word!r}")
        bu, bl = _sent(backward_trace.steps)
    return CommStats(len(trace.word), fu, fl, bu, bl)


@dataclass
class Measurement:
    series: list = field(default_factory=list)  # (n, CommStats)
    rejected: list = field(default_factory=list)

    def rows(self):
        return [(n, s.forward_total, s.backward_total) for n, s in self.series]

    def to_csv(self) -> str:
        lines = ["n,forward,backward"]
        lines += [f"{n},{f},{b}" for n, f, b in self.rows()]
        return "\n".join(lines) + "\n"


def measure(spec: MachineSpec, words: Iterable[str], backward: bool = True) -> Measurement:
    """Communication of accepted words; rejected or looping words are set aside."""
    from .reverse import replay_backward

    out = Measurement()
    for w in words:
        trace = run(spec, w)
        if trace.verdict is not Verdict.ACCEPTED:
            out.rejected.append(w)
            continue
        back = None
        if backward and spec.has_reverse:
            back, _ = replay_backward(spec, w, trace.halt_config, max_steps=len(trace.steps))
        out.series.append((len(w), count_messages(trace, back)))
    return out


class BoundKind(enum.Enum):
    CONSTANT = "constant"
    LOGARITHMIC = "log"
    SQUARE_ROOT = "sqrt"
    LINEAR = "linear"
    OTHER = "other"


_BASIS = (
    (BoundKind.CONSTANT, lambda n: np.zeros_like(n)),
    (BoundKind.LOGARITHMIC, lambda n: np.log2(n + 1.0)),
    (BoundKind.SQUARE_ROOT, np.sqrt),
    (BoundKind.LINEAR, lambda n: n),
)


@dataclass(frozen=True)
class BoundClass:
    kind: BoundKind
    slope: float = 0.0
    intercept: float = 0.0
    residual: float = 0.0
    fits: tuple = ()  # (kind, slope, intercept, residual) for every basis tried


def _fit(g, y):
    if not np.any(g):
        b = max(float(y.mean()), 0.0)
        return 0.0, b, y - b
    coef, _ = nnls(np.column_stack([g, np.ones_like(g)]), y)
    return float(coef[0]), float(coef[1]), y - (coef[0] * g + coef[1])


def classify(points: Sequence) -> BoundClass:
    """Lowest growth class fitting ``count ≈ a·g(n) + b`` (a, b ≥ 0).

    The residual is the RMS error divided by the standard deviation of the
    counts, so a flat series fits only the constant class and scaling the
    counts leaves the result unchanged.
    """
    pts = sorted((float(n), float(c)) for n, c in points)
    if len({n for n, _ in pts}) < 3:
        raise ValueError("classify needs at least 3 points with distinct n")
    n = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    scale = float(np.std(y))
    fits = []
    for kind, basis in _BASIS:
        a, b, resid = _fit(basis(n), y)
        rms = math.sqrt(float(np.mean(resid ** 2)))
        norm = rms / scale if scale > 1e-12 else (0.0 if rms <= 1e-9 * (1 + abs(y.mean())) else math.inf)
        fits.append((kind, a, b, norm))
    for kind, a, b, norm in fits:
        if norm <= RESIDUAL_THRESHOLD:
            return BoundClass(kind, a, b, norm, tuple(fits))
    best = min(fits, key=lambda f: f[3])
    return BoundClass(BoundKind.OTHER, best[1], best[2], best[3], tuple(fits))


def read_csv(text: str, column: str = "forward"):
    """Parse ``n,forward,backward`` rows into (n, count) points."""
    import csv
    import io

    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or "n" not in reader.fieldnames:
        raise ValueError("CSV needs a header with columns n,forward,backward")
    pts = []
    for row in reader:
        if column == "max":
            value = max(int(row["forward"]), int(row["backward"]))
        else:
            value = int(row[column])
        pts.append((int(row["n"]), value))
    return pts
