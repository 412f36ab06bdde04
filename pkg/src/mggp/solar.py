"""Solar geometry on a horizontal surface and the Angstrom-Prescott model.

All angles are in degrees. ``day`` is the day of the year, 1..365 (no
leap-year handling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFit, PolarDayNight

#: Solar constant, W m^-2.
SOLAR_CONSTANT = 1367.0

MAX_DECLINATION = 23.45


def _sind(deg):
    # reduce first so whole turns give exact zeros
    return math.sin(math.radians(math.fmod(deg, 360.0)))


def _cosd(deg):
    return math.cos(math.radians(math.fmod(deg, 360.0)))


def _check_day(day):
    if not 1 <= day <= 365:
        raise ValueError(f"day of year must lie in 1..365, got {day}")


def declination(day):
    """Solar declination in degrees, ``23.45 * sin(360 (284 + n) / 365)``."""
    _check_day(day)
    return MAX_DECLINATION * _sind(360.0 * (284 + day) / 365.0)


def sunset_hour_angle(latitude, decl):
    """Sunset hour angle ``acos(-tan(lat) tan(decl))`` in degrees.

    Raises
    ------
    PolarDayNight
        When ``|tan(lat) tan(decl)| > 1``: the sun stays up (or down) all day.
    """
    arg = -math.tan(math.radians(latitude)) * math.tan(math.radians(decl))
    if not -1.0 <= arg <= 1.0:
        state = "polar day" if arg < -1.0 else "polar night"
        raise PolarDayNight(f"{state} at latitude {latitude} deg, declination {decl} deg")
    return math.degrees(math.acos(arg))


def day_length(omega_s):
    """Maximum possible sunshine duration in hours, ``(2/15) * omega_s``."""
    if not 0.0 <= omega_s <= 180.0:
        raise ValueError("sunset hour angle must lie in [0, 180] degrees")
    return 2.0 * omega_s / 15.0


def eccentricity_factor(day):
    return 1.0 + 0.033 * _cosd(360.0 * day / 365.0)


def geometric_factor(latitude, decl, omega_s):
    """``cos(lat) cos(decl) sin(ws) + (pi ws / 180) sin(lat) sin(decl)``."""
    return _cosd(latitude) * _cosd(decl) * _sind(omega_s) + (
        math.pi * omega_s / 180.0
    ) * _sind(latitude) * _sind(decl)


def extraterrestrial_irradiation(latitude, day):
    """Daily extraterrestrial irradiation on a horizontal plane, J m^-2 day^-1."""
    _check_day(day)
    decl = declination(day)
    omega_s = sunset_hour_angle(latitude, decl)
    scale = 24.0 * 3.6e3 * SOLAR_CONSTANT / math.pi
    return scale * eccentricity_factor(day) * geometric_factor(latitude, decl, omega_s)


@dataclass(frozen=True)
class SolarSummary:
    latitude: float
    day: int
    declination: float
    sunset_hour_angle: float
    day_length: float
    h0: float

    @property
    def h0_mj(self):
        return self.h0 / 1e6


def solar_summary(latitude, day):
    decl = declination(day)
    omega_s = sunset_hour_angle(latitude, decl)
    return SolarSummary(
        latitude, day, decl, omega_s, day_length(omega_s), extraterrestrial_irradiation(latitude, day)
    )


@dataclass(frozen=True)
class AngstromModel:
    """Clearness index as a line in the relative sunshine duration."""

    a: float
    b: float

    def predict(self, s_ratio):
        return self.a + self.b * np.asarray(s_ratio, dtype=float)


def angstrom_predict(model, s_ratio):
    return model.predict(s_ratio)


def angstrom_fit(s_ratios, clearness):
    """Ordinary least-squares line through (s_ratio, clearness) pairs."""
    s = np.asarray(s_ratios, dtype=float)
    h = np.asarray(clearness, dtype=float)
    if s.shape != h.shape or s.size < 2:
        raise ValueError("need two equal-length vectors with at least two points")
    ds = s - s.mean()
    sxx = float(ds @ ds)
    if sxx == 0.0:
        raise DegenerateFit("all sunshine ratios are equal")
    b = float(ds @ (h - h.mean())) / sxx
    return AngstromModel(a=float(h.mean() - b * s.mean()), b=b)
