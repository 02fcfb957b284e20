from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from fractions import Fraction

# Coefficients for random test sections and functions.
SAMPLE_COEFFICIENTS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2))


@dataclass(frozen=True)
class RunConfig:
    seed: int = 7
    trials: int = 8
    max_degree: int = 2
    max_cochain_degree: int = 2
    s_min: int = 0
    s_max: int = 2
    emit: str = "text"

    @property
    def s_range(self) -> range:
        return range(self.s_min, self.s_max + 1)

    def rng(self, label: str) -> random.Random:
        """Independent deterministic stream per named check."""
        return random.Random(f"{self.seed}:{label}")

    def to_dict(self) -> dict:
        return asdict(self)
