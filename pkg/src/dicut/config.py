"""Configurations of directed edges: biases, validity, completeness.

A configuration records what the vector solution knows about one directed
constraint: the endpoint biases b1 (tail), b2 (head), and the relative
pairwise bias rho.  The parametrization (b1, b2, rho) is primary; the raw
pairwise bias b12 = b1 b2 + rho sqrt((1-b1^2)(1-b2^2)) is a derived view,
which avoids dividing by the vanishing normalizer at |b| = 1.

Completeness(theta) = (1 + b1 - b2 - b12)/4 is the probability mass the
constraint contributes in the intended integral solution.  Validity is the
four triangle inequalities; positivity is rho <= 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .interval import Interval

__all__ = [
    "Configuration",
    "ConfigDistribution",
    "ConfigBox",
    "pairwise_bias",
    "rho_from_pairwise",
    "completeness",
    "is_valid",
    "is_positive",
    "flip",
    "dist_completeness",
]

# triangle inequalities may sit exactly on zero; tolerate float noise
VALIDITY_TOL = 1e-12


@dataclass(frozen=True)
class Configuration:
    b1: float
    b2: float
    rho: float

    def __post_init__(self):
        for name in ("b1", "b2", "rho"):
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [-1, 1]")


def pairwise_bias(c: Configuration) -> float:
    """b12 = b1 b2 + rho sqrt((1-b1^2)(1-b2^2)); b1 b2 alone at |b| = 1."""
    s = (1.0 - c.b1 * c.b1) * (1.0 - c.b2 * c.b2)
    if s <= 0.0:
        return c.b1 * c.b2
    return c.b1 * c.b2 + c.rho * math.sqrt(s)


def rho_from_pairwise(b1: float, b2: float, b12: float) -> float:
    """Inverse view: relative pairwise bias from raw b12; 0 when degenerate."""
    s = (1.0 - b1 * b1) * (1.0 - b2 * b2)
    if s <= 0.0:
        return 0.0
    r = (b12 - b1 * b2) / math.sqrt(s)
    return min(1.0, max(-1.0, r))


def completeness(c: Configuration) -> float:
    return (1.0 + c.b1 - c.b2 - pairwise_bias(c)) / 4.0


def is_valid(c: Configuration) -> bool:
    """All four triangle inequalities on (b1, b2, b12), within tolerance."""
    b12 = pairwise_bias(c)
    t = VALIDITY_TOL
    return (
        1.0 - c.b1 - c.b2 + b12 >= -t
        and 1.0 + c.b1 - c.b2 - b12 >= -t
        and 1.0 - c.b1 + c.b2 - b12 >= -t
        and 1.0 + c.b1 + c.b2 + b12 >= -t
    )


def is_positive(c: Configuration) -> bool:
    return c.rho <= 0.0


def flip(c: Configuration) -> Configuration:
    """Mirror the edge: (b1, b2) -> (-b2, -b1); rho is unchanged."""
    return Configuration(-c.b2, -c.b1, c.rho)


@dataclass(frozen=True)
class ConfigDistribution:
    """Finitely supported distribution over configurations."""

    entries: tuple[tuple[Configuration, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty distribution")
        total = 0.0
        for c, w in self.entries:
            if w < 0.0:
                raise ValueError(f"negative weight {w} on {c}")
            total += w
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def configs(self) -> tuple[Configuration, ...]:
        return tuple(c for c, _ in self.entries)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.entries)

    @staticmethod
    def from_pairs(pairs) -> "ConfigDistribution":
        """Build from (Configuration, weight) pairs, normalizing weights."""
        pairs = [(c, float(w)) for c, w in pairs]
        total = sum(w for _, w in pairs)
        if total <= 0.0:
            raise ValueError("nonpositive total weight")
        if abs(total - 1.0) > 1e-9:
            warnings.warn(
                f"distribution weights sum to {total:.10g}; normalizing",
                stacklevel=2,
            )
        return ConfigDistribution(tuple((c, w / total) for c, w in pairs))

    @staticmethod
    def load(path) -> "ConfigDistribution":
        """Read the CSV format: header weight,b1,b2,{b12|rho}; # comments."""
        with open(path, encoding="utf-8") as fh:
            rows = [
                line.strip()
                for line in fh
                if line.strip() and not line.lstrip().startswith("#")
            ]
        if not rows:
            raise ValueError(f"no data in {path}")
        header = [f.strip().lower() for f in rows[0].split(",")]
        if header[:3] != ["weight", "b1", "b2"] or header[3] not in ("b12", "rho"):
            raise ValueError(f"bad header {rows[0]!r} in {path}")
        raw_b12 = header[3] == "b12"
        pairs = []
        for row in rows[1:]:
            fields = [float(f) for f in row.split(",")]
            if len(fields) != 4:
                raise ValueError(f"bad row {row!r} in {path}")
            w, b1, b2, last = fields
            rho = rho_from_pairwise(b1, b2, last) if raw_b12 else last
            pairs.append((Configuration(b1, b2, rho), w))
        return ConfigDistribution.from_pairs(pairs)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("weight,b1,b2,rho\n")
            for c, w in self.entries:
                fh.write(f"{w!r},{c.b1!r},{c.b2!r},{c.rho!r}\n")


def dist_completeness(d: ConfigDistribution) -> float:
    return sum(w * completeness(c) for c, w in d)


@dataclass(frozen=True)
class ConfigBox:
    """Axis-aligned box of configurations for branch-and-bound."""

    b1: Interval
    b2: Interval
    rho: Interval

    def __post_init__(self):
        for name in ("b1", "b2", "rho"):
            iv = getattr(self, name)
            if iv.lo < -1.0 or iv.hi > 1.0:
                raise ValueError(f"{name}={iv} escapes [-1, 1]")

    @property
    def widths(self) -> tuple[float, float, float]:
        return (self.b1.width, self.b2.width, self.rho.width)

    def midpoint(self) -> Configuration:
        return Configuration(self.b1.mid, self.b2.mid, self.rho.mid)

    def contains(self, c: Configuration) -> bool:
        return (
            self.b1.contains(c.b1)
            and self.b2.contains(c.b2)
            and self.rho.contains(c.rho)
        )
