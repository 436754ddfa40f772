"""Search for S0-integral points (t, s, x, y) fiber by fiber.

Fibers are visited by height max(|t|, |s|), then lexicographically. Each
fiber goes through the cheap local test first, optionally the dual Selmer
certificate, and only then the global solver. With several workers the
ordered fiber list is cut into chunks; the first success in the global
order wins, so the answer does not depend on the number of workers.
"""
from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from ..torsor import (
    DEFAULT_EFFORT, HASSE, INCONCLUSIVE, NO_ADELIC, SolveResult, adelic_report,
    _s0_part, hasse_certificate, solve,
)
from .model import Pencil, fiber

__all__ = ["SearchConfig", "PointSearch", "fibers_by_height", "find_integral_point",
           "verify_point", "THREADS_ENV"]

THREADS_ENV = "CONIC_DESCENT_THREADS"
CHUNK = 256


@dataclass(frozen=True)
class SearchConfig:
    height: int
    effort: int = DEFAULT_EFFORT
    threads: int = 1
    hasse: bool = False  # also require the dual Selmer certificate

    def __post_init__(self):
        if self.height <= 0:
            raise ValueError("height must be positive")
        if self.effort <= 0:
            raise ValueError("effort must be positive")
        if self.threads <= 0:
            raise ValueError("threads must be positive")


@dataclass(frozen=True)
class PointSearch:
    result: SolveResult
    t: Optional[int] = None
    s: Optional[int] = None
    height: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def found(self) -> bool:
        return self.result.found

    def to_json(self) -> dict:
        out = {"status": self.result.status, "height_bound": self.height}
        if self.found:
            out.update(t=self.t, s=self.s, x=str(self.result.x), y=str(self.result.y))
        return out


def fibers_by_height(height: int) -> Iterator[tuple[int, int]]:
    """Primitive (t, s) up to sign, ordered by max(|t|, |s|) then (t, s)."""
    for h in range(1, height + 1):
        ring = set()
        for k in range(-h, h + 1):
            ring.update({(h, k), (k, h), (-h, k), (k, -h)})
        for t, s in sorted(ring):
            if t < 0 or (t == 0 and s <= 0):
                continue
            if math.gcd(t, s) == 1:
                yield t, s


def verify_point(P: Pencil, t, s, x, y) -> bool:
    """Exact check of a p_A(t,s) x^2 + b p_B(t,s) y^2 = 1 with S0-integral entries."""
    t, s, x, y = (Fraction(q) for q in (t, s, x, y))
    if t == 0 and s == 0:
        return False
    lhs = P.a * _eval(P, P.A, t, s) * x * x + P.b * _eval(P, P.B, t, s) * y * y
    if lhs != 1:
        return False
    return all(_s0_part(q.denominator, P.s0)[1] == 1 for q in (t, s, x, y))


def _eval(P: Pencil, J: int, t: Fraction, s: Fraction) -> Fraction:
    out = Fraction(1)
    for i, (c, d) in enumerate(P.forms):
        if J >> i & 1:
            out *= c * t + d * s
    return out


def _try_fiber(P: Pencil, t: int, s: int, cfg: SearchConfig) -> tuple[str, SolveResult | None]:
    if P.p_set(P.full, t, s) == 0:
        return "degenerate", None
    z = fiber(P, t, s)
    rep = adelic_report(z)
    if not rep.soluble:
        return NO_ADELIC, None
    if cfg.hasse and hasse_certificate(z).status != HASSE:
        return "no_certificate", None
    res = solve(z, cfg.effort)
    if res.found:
        return "solved", res
    return res.status, None


def _run_chunk(P: Pencil, pts: list, cfg: SearchConfig):
    tally: Counter = Counter()
    for t, s in pts:
        tag, res = _try_fiber(P, t, s, cfg)
        tally[tag] += 1
        if res is not None:
            return (t, s, res), tally
    return None, tally


def _chunks(height: int) -> Iterator[list]:
    buf = []
    for pt in fibers_by_height(height):
        buf.append(pt)
        if len(buf) == CHUNK:
            yield buf
            buf = []
    if buf:
        yield buf


def _threads(cfg: SearchConfig) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return cfg.threads


def find_integral_point(P: Pencil, cfg: SearchConfig) -> PointSearch:
    tally: Counter = Counter()
    hit = None
    workers = _threads(cfg)
    if workers == 1:
        for chunk in _chunks(cfg.height):
            hit, part = _run_chunk(P, chunk, cfg)
            tally += part
            if hit:
                break
    else:
        with ProcessPoolExecutor(workers) as pool:
            futs = [pool.submit(_run_chunk, P, chunk, cfg) for chunk in _chunks(cfg.height)]
            for f in futs:  # in fiber order, so the first hit is the minimal one
                hit, part = f.result()
                tally += part
                if hit:
                    break
            for f in futs:
                f.cancel()
    stats = {"fibers": sum(tally.values()), **dict(sorted(tally.items()))}
    if hit is None:
        return PointSearch(SolveResult(INCONCLUSIVE, stats=stats), height=cfg.height, stats=stats)
    t, s, res = hit
    if not verify_point(P, t, s, res.x, res.y):
        raise AssertionError(f"solver returned a bad point on the fiber {(t, s)}")
    return PointSearch(res, t, s, cfg.height, stats)
