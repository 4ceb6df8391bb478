"""Mean-stress correction, S-N life and linear damage accumulation.

A cycle given by mean stress ``S_m`` and amplitude ``S_a`` is mapped to the
fully reversed (R = -1) amplitude with a four-branch Haigh approximation and
then to a life on the S-N curve

    N = 10 ** (C3 * ln((C2 - C1) / (S_a - C1)) ** (1 / C4))

Amplitudes at or below the fatigue limit ``C1`` never fail; amplitudes at or
above ``C2`` fail in one cycle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fdi.errors import ValidationError

SEGMENTS = ("flight", "ground", "gag")


@dataclass(frozen=True)
class LoadCycleBin:
    mean_stress: float  # MPa
    amplitude_stress: float  # MPa
    cycle_count: float
    segment: str = "flight"

    def __post_init__(self):
        if not self.amplitude_stress > 0:
            raise ValidationError(f"amplitude_stress must be > 0, got {self.amplitude_stress}")
        if not self.cycle_count >= 0:
            raise ValidationError(f"cycle_count must be >= 0, got {self.cycle_count}")
        if self.segment not in SEGMENTS:
            raise ValidationError(f"segment must be one of {SEGMENTS}, got {self.segment!r}")


@dataclass(frozen=True)
class LoadSpectrum:
    bins: tuple = ()

    def __iter__(self):
        return iter(self.bins)

    def __len__(self):
        return len(self.bins)

    def __add__(self, other):
        return LoadSpectrum(tuple(self.bins) + tuple(other.bins))

    def arrays(self):
        """(means, amplitudes, counts) as float arrays."""
        if not self.bins:
            return np.zeros(0), np.zeros(0), np.zeros(0)
        a = np.array([(b.mean_stress, b.amplitude_stress, b.cycle_count) for b in self.bins])
        return a[:, 0], a[:, 1], a[:, 2]

    def select(self, segment):
        return LoadSpectrum(tuple(b for b in self.bins if b.segment == segment))


def stress_ratio(bin):
    """Minimum over maximum stress of the cycle; ``-inf`` when the maximum is zero."""
    s_max = bin.mean_stress + bin.amplitude_stress
    s_min = bin.mean_stress - bin.amplitude_stress
    if s_max == 0:
        return float("-inf")
    return s_min / s_max


def equivalent_amplitude_array(mean, amplitude, m_sigma):
    """Vectorized R = -1 equivalent amplitude [MPa].

    Branches, in evaluation order:

    * maximum stress below zero (R > 1): ``S_a (1 - M)``
    * minimum stress at or below zero (R <= 0): ``S_a + M S_m``
    * 0 < R < 0.5: ``S_a (1 + M)(3 + M S_m / S_a) / (3 + M)``
    * 0.5 <= R < 1: ``S_a 3 (1 + M)^2 / (3 + M)``

    Adjacent branches coincide on their shared boundary.
    """
    m = np.asarray(mean, dtype=float)
    a = np.asarray(amplitude, dtype=float)
    s_max = m + a
    s_min = m - a
    k = m_sigma
    compressive = a * (1.0 - k)
    reversed_ = a + k * m
    low_r = (1.0 + k) * (3.0 * a + k * m) / (3.0 + k)
    high_r = a * 3.0 * (1.0 + k) ** 2 / (3.0 + k)
    return np.select(
        [s_max < 0, s_min <= 0, s_min < 0.5 * s_max],
        [compressive, reversed_, low_r],
        default=high_r,
    )


def equivalent_amplitude(bin, mat):
    return float(equivalent_amplitude_array(bin.mean_stress, bin.amplitude_stress, mat.m_sigma))


def _log10_life(amplitude, mat):
    """log10 of cycles to failure; +inf at or below the fatigue limit."""
    s = np.asarray(amplitude, dtype=float)
    inside = (s > mat.c1) & (s < mat.c2)
    ratio = np.where(inside, (mat.c2 - mat.c1) / np.where(inside, s - mat.c1, 1.0), np.e)
    log_n = mat.c3 * np.log(ratio) ** (1.0 / mat.c4)
    return np.where(s <= mat.c1, np.inf, np.where(s >= mat.c2, 0.0, log_n))


def cycles_to_failure(amplitude, mat):
    """S-N life of an R = -1 amplitude; ``inf`` at or below ``c1``, 1 at or above ``c2``."""
    n = 10.0 ** _log10_life(amplitude, mat)
    return float(n) if np.ndim(n) == 0 else n


def damage_per_cycle(mean, amplitude, mat):
    """1/N for each (mean, amplitude) pair; 0 below the fatigue limit."""
    eq = equivalent_amplitude_array(mean, amplitude, mat.m_sigma)
    return 10.0 ** -_log10_life(eq, mat)


def miner_damage(spectrum, mat):
    """Linear damage sum ``sum(n_i / N_i)`` of a :class:`LoadSpectrum`."""
    means, amps, counts = spectrum.arrays()
    if counts.size == 0:
        return 0.0
    terms = counts.astype(np.longdouble) * damage_per_cycle(means, amps, mat)
    return float(np.sum(terms))
