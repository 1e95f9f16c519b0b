"""Physical constants (CODATA 2018, SI) and the SI/CGS conversions used at output."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float  # J s
    c: float  # m / s


CODATA2018 = PhysicalConstants(hbar=1.054571817e-34, c=2.99792458e8)

# Read through the module (``constants.HBAR``) rather than imported by name,
# so every caller sees the same values.
HBAR = CODATA2018.hbar
C = CODATA2018.c

DYN_CM2_PER_PA = 10.0
DYN_PER_N = 1.0e5


def si_pressure_to_cgs(pressure):
    """N/m^2 -> dyn/cm^2."""
    return pressure * DYN_CM2_PER_PA


def cgs_pressure_to_si(pressure):
    """dyn/cm^2 -> N/m^2."""
    return pressure / DYN_CM2_PER_PA


def si_force_to_cgs(force):
    """N -> dyn."""
    return force * DYN_PER_N


def cgs_force_to_si(force):
    return force / DYN_PER_N
