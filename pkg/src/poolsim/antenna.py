"""Uniform planar array beam gains (azimuth-plane reduction).

Half-wavelength element spacing throughout.  Elevation is held at
broadside, so a rows x cols UPA contributes a flat factor `rows` times
the cols-element azimuth array factor; peak gain equals the element
count.

On top of the array factor every non-omni array applies a panel
element-pattern envelope: a quadratic-in-angle attenuation
min(12 (delta/theta_3dB)^2, A_max) dB away from the steering direction.
The envelope is 1 at the peak (so peak gain stays rows x cols) and
caps the far-out response the way a directional element and mounting
panel do; in particular it replaces the nonphysical mirror lobe a bare
line array would produce in the back half-plane.  Large (base-station
class) arrays use a narrow envelope; small (handset class, <= 64
elements) arrays use an essentially open one, since handsets cannot
mount a shielding panel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClusters

TWO_PI = 2.0 * math.pi

# Panel element-pattern envelope: attenuation relative to the steering
# direction is min(12 (delta/theta_3dB)^2, A_max) dB.  Arrays with more
# than SMALL_ARRAY_ELEMENTS elements count as base-station class.
SMALL_ARRAY_ELEMENTS = 64
PANEL_TH3_DEG = 45.0    # base-station class envelope width
PANEL_AMAX_DB = 30.0
HANDSET_TH3_DEG = 360.0  # handset class: envelope nearly flat
HANDSET_AMAX_DB = 30.0


@dataclass(frozen=True)
class ArrayGeometry:
    rows: int
    cols: int

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols

    @property
    def is_omni(self) -> bool:
        return self.rows == 1 and self.cols == 1


@dataclass(frozen=True)
class Beam:
    azimuth: float  # steering azimuth in [0, 2pi)


def wrap_pi(x):
    """Wrap angle(s) to (-pi, pi]."""
    return -np.mod(-np.asarray(x) + math.pi, TWO_PI) + math.pi


def ula_gain_u(n: int, u0, u):
    """Normalized n-element array factor power in sine space.

    gain = |sum_k exp(j pi k (u - u0))|^2 / n, peak n at u = u0.
    """
    x = np.asarray(u, dtype=float) - np.asarray(u0, dtype=float)
    s = np.sin(0.5 * math.pi * x)
    num = np.sin(0.5 * math.pi * n * x)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(np.abs(s) < 1e-12, float(n), num * num / (n * s * s))
    return g if g.ndim else float(g)


def ula_gain(n: int, steer_az, obs_az):
    """Array factor versus physical azimuths (boresight at 0)."""
    return ula_gain_u(n, np.sin(np.asarray(steer_az, dtype=float)),
                      np.sin(np.asarray(obs_az, dtype=float)))


def upa_gain(geom: ArrayGeometry, beam: Beam, obs_az):
    """Planar-array power gain toward obs_az for a beam steered at beam.azimuth."""
    return upa_gain_vec(geom.rows, geom.cols, beam.azimuth, obs_az)


def upa_gain_vec(rows: int, cols: int, steer_az, obs_az):
    """Vectorized UPA gain; broadcasts over steer/obs angle arrays.

    gain = rows * (cols-element array factor at the steering-relative
    angle) * panel envelope; peak = rows * cols at obs = steer; (1, 1)
    geometry is omnidirectional with gain 1 everywhere.
    """
    if rows == 1 and cols == 1:
        out = np.ones_like(np.asarray(obs_az, dtype=float))
        return out if out.ndim else 1.0
    if rows * cols <= SMALL_ARRAY_ELEMENTS:
        th3, amax = math.radians(HANDSET_TH3_DEG), HANDSET_AMAX_DB
    else:
        th3, amax = math.radians(PANEL_TH3_DEG), PANEL_AMAX_DB
    d_obs = wrap_pi(np.asarray(obs_az, dtype=float)
                    - np.asarray(steer_az, dtype=float))
    att_db = np.minimum(12.0 * (d_obs / th3) ** 2, amax)
    env = 10.0 ** (-0.1 * att_db)
    g = rows * ula_gain_u(cols, 0.0, np.sin(d_obs)) * env
    return g if g.ndim else float(g)


def best_beam(clusters, side: str = "aod") -> Beam:
    """Beam steered at the strongest cluster's angle; ties take the lowest index.

    side: "aod" for the BS end, "aoa" for the UE end.
    """
    if not clusters:
        raise EmptyClusters("cannot pick a beam from an empty cluster list")
    best = 0
    for i, c in enumerate(clusters):
        if c.fraction > clusters[best].fraction:
            best = i
    c = clusters[best]
    az = c.aod if side == "aod" else c.aoa
    return Beam(azimuth=float(np.mod(az, TWO_PI)))


def effective_gain(clusters, bs_beam: Beam, ue_beam: Beam,
                   bs_geom: ArrayGeometry, ue_geom: ArrayGeometry) -> float:
    """Long-term beamformed power gain over a link's cluster set."""
    if not clusters:
        raise EmptyClusters("effective gain needs at least one cluster")
    total = 0.0
    for c in clusters:
        total += (c.fraction
                  * upa_gain(bs_geom, bs_beam, c.aod)
                  * upa_gain(ue_geom, ue_beam, c.aoa))
    return total
