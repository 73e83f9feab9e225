"""Random BS/UE placement on a square region with torus wrap-around."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .errors import CoincidentPoints, ZeroNodes

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Topology:
    """Node positions in meters, operator-major ordering.

    ``bs_op[i]`` / ``ue_op[i]`` give each node's operator index; global
    node ids are the array indices (ties in later argmax steps resolve
    to the lowest id).
    """

    bs_pos: np.ndarray  # (B, 2)
    ue_pos: np.ndarray  # (U, 2)
    bs_op: np.ndarray   # (B,) int
    ue_op: np.ndarray   # (U,) int
    region_side: float

    @property
    def n_bs(self) -> int:
        return self.bs_pos.shape[0]

    @property
    def n_ue(self) -> int:
        return self.ue_pos.shape[0]

    def to_csv_lines(self) -> list[str]:
        lines = ["operator,kind,x,y"]
        for kind, pos, ops in (("bs", self.bs_pos, self.bs_op),
                               ("ue", self.ue_pos, self.ue_op)):
            for op, (x, y) in zip(ops, pos):
                lines.append(f"{op},{kind},{x:.6f},{y:.6f}")
        return lines


def _count(density_per_km2: float, area_km2: float, law: str,
           rng: np.random.Generator) -> int:
    mean = density_per_km2 * area_km2
    if law == "poisson":
        return int(rng.poisson(mean))
    return int(math.floor(mean + 0.5))


def drop_network(cfg: ScenarioConfig, drop_seed: int) -> Topology:
    """Sample one topology; identical (cfg geometry, seed) gives identical output."""
    rng = np.random.default_rng(np.random.SeedSequence([int(drop_seed)]))
    area = cfg.area_km2
    bs_chunks, ue_chunks, bs_ops, ue_ops = [], [], [], []
    for op in range(cfg.n_operators):
        n_bs = _count(cfg.bs_density_per_op, area, cfg.deployment_law, rng)
        if n_bs == 0:
            raise ZeroNodes(f"operator {op} received 0 BSs")
        bs_chunks.append(rng.random((n_bs, 2)) * cfg.region_side)
        bs_ops.append(np.full(n_bs, op, dtype=np.int64))
    for op in range(cfg.n_operators):
        n_ue = _count(cfg.ue_density_per_op, area, cfg.deployment_law, rng)
        if n_ue == 0:
            raise ZeroNodes(f"operator {op} received 0 UEs")
        ue_chunks.append(rng.random((n_ue, 2)) * cfg.region_side)
        ue_ops.append(np.full(n_ue, op, dtype=np.int64))
    return Topology(
        bs_pos=np.concatenate(bs_chunks),
        ue_pos=np.concatenate(ue_chunks),
        bs_op=np.concatenate(bs_ops),
        ue_op=np.concatenate(ue_ops),
        region_side=cfg.region_side,
    )


def _wrapped_delta(a, b, region_side: float):
    """Shortest signed displacement a -> b on the wrap-around axis."""
    half = region_side / 2.0
    return np.mod(np.asarray(b) - np.asarray(a) + half, region_side) - half


def torus_distance(p, q, region_side: float) -> float:
    """Euclidean distance with per-axis wrap-around."""
    d = np.abs(np.asarray(q, dtype=float) - np.asarray(p, dtype=float))
    d = np.minimum(d, region_side - d)
    return float(np.hypot(d[..., 0], d[..., 1]))


def bearing(p, q, region_side: float) -> float:
    """Azimuth in [0, 2pi) of the shortest wrap-around displacement p -> q."""
    dx = float(_wrapped_delta(p[0], q[0], region_side))
    dy = float(_wrapped_delta(p[1], q[1], region_side))
    if dx == 0.0 and dy == 0.0:
        raise CoincidentPoints(f"bearing undefined for coincident points {p}")
    return float(np.mod(math.atan2(dy, dx), TWO_PI))


def pairwise_torus(a_pos: np.ndarray, b_pos: np.ndarray, region_side: float):
    """All-pairs distances and bearings a -> b on the torus.

    Returns (dist, bearing) matrices of shape (len(a), len(b)); bearings
    for coincident pairs are returned as 0 (callers floor distances at
    1 m before use).
    """
    dx = _wrapped_delta(a_pos[:, None, 0], b_pos[None, :, 0], region_side)
    dy = _wrapped_delta(a_pos[:, None, 1], b_pos[None, :, 1], region_side)
    dist = np.hypot(dx, dy)
    az = np.mod(np.arctan2(dy, dx), TWO_PI)
    return dist, az
