"""Deterministic two-party Watson-Crick systems: simulation, reversibility, communication."""
from .model import (
    COMPLEMENTED,
    LEND,
    MOVE,
    NORMAL,
    REND,
    STAY,
    ComponentSpec,
    Configuration,
    MachineSpec,
    Rule,
    Trace,
    Verdict,
    accepts,
    run,
    validate,
)

__version__ = "0.1.0"
