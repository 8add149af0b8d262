"""Reading, writing and generating Min-Diff DP instances.

File layout (whitespace separated): a header ``n m`` (``m`` may be absent),
followed by either the n(n-1)/2 upper-triangle distances in row-major order or
n(n-1)/2 ``i j d`` triples.  Triples may use 0- or 1-based indices; a
triple mentioning index ``n`` marks the file as 1-based.  MDPLIB files use the
triple layout.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .model import ConfigurationError, Instance, MinDiffError

FAMILIES = ("som", "gkd", "mdg-a", "mdg-b", "mdg-c")

PathLike = Union[str, os.PathLike]


class ParseError(MinDiffError, ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    m: int
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if not 1 < self.m < self.n:
            raise ConfigurationError(f"need 1 < m < n, got n={self.n}, m={self.m}")

    @property
    def name(self) -> str:
        return f"{self.family}_s{self.seed}_n{self.n}_m{self.m}"


def _parse_int(tok: str, what: str, path) -> int:
    try:
        val = float(tok)
    except ValueError:
        raise ParseError(f"{path}: {what} {tok!r} is not a number") from None
    if val != int(val):
        raise ParseError(f"{path}: {what} {tok!r} is not an integer")
    return int(val)


def read_instance(path: PathLike, m_override: Optional[int] = None) -> Instance:
    path = Path(path)
    lines = path.read_text().splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) not in (1, 2):
        raise ParseError(f"{path}: header must be 'n m' or 'n', got {lines[0]!r}")
    n = _parse_int(header[0], "element count", path)
    m = _parse_int(header[1], "subset size", path) if len(header) == 2 else None
    if m_override is not None:
        m = int(m_override)
    if m is None:
        raise ConfigurationError(f"{path}: header has no m and no override was given")
    if n < 2:
        raise ParseError(f"{path}: element count must be >= 2, got {n}")

    body = " ".join(lines[1:]).split()
    pairs = n * (n - 1) // 2
    dist = np.zeros((n, n))
    if len(body) == pairs:
        try:
            vals = np.array(body, dtype=np.float64)
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        iu = np.triu_indices(n, k=1)
        dist[iu] = vals
    elif len(body) == 3 * pairs:
        try:
            rows = np.array(body, dtype=np.float64).reshape(-1, 3)
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        ij = rows[:, :2]
        if np.any(ij != np.floor(ij)):
            raise ParseError(f"{path}: non-integer element index in triples")
        ij = ij.astype(np.int64)
        if ij.max() == n:
            ij = ij - 1
        if ij.min() < 0 or ij.max() >= n:
            raise ParseError(f"{path}: element index out of range for n={n}")
        dist[ij[:, 0], ij[:, 1]] = rows[:, 2]
    else:
        raise ParseError(
            f"{path}: expected {pairs} distances or {3 * pairs} triple tokens "
            f"for n={n}, found {len(body)} tokens"
        )
    # mirror whichever triangle was filled, then force the diagonal to zero
    dist = np.where(dist != 0, dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    if not np.array_equal(dist, dist.T):
        raise ParseError(f"{path}: conflicting values for (i, j) and (j, i)")
    return Instance(dist, m, name=path.stem)


def write_instance(instance: Instance, path: PathLike) -> None:
    n = instance.n
    out = [f"{n} {instance.m}"]
    d = instance.dist
    for i in range(n - 1):
        out.extend(f"{i} {j} {float(d[i, j])!r}" for j in range(i + 1, n))
    Path(path).write_text("\n".join(out) + "\n")


def generate(spec: InstanceSpec) -> Instance:
    """Synthetic instance in the style of one of the benchmark families.

    gkd: Euclidean distances of uniform points in [0,10]^2, 2 decimals.
    mdg-a / mdg-b: uniform reals in (0,10] / (0,1000], 2 decimals.
    mdg-c: uniform integers in [1,1000].  som: uniform integers in [1,9].
    These mimic the families; they are not the published benchmark files.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    iu = np.triu_indices(n, k=1)
    if spec.family == "gkd":
        pts = rng.uniform(0.0, 10.0, size=(n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        full = np.round(np.sqrt((diff**2).sum(axis=2)), 2)
        vals = np.maximum(full[iu], 0.01)
    elif spec.family == "mdg-a":
        vals = rng.integers(1, 1000, size=iu[0].size, endpoint=True) / 100.0
    elif spec.family == "mdg-b":
        vals = rng.integers(1, 100_000, size=iu[0].size, endpoint=True) / 100.0
    elif spec.family == "mdg-c":
        vals = rng.integers(1, 1000, size=iu[0].size, endpoint=True).astype(np.float64)
    else:
        vals = rng.integers(1, 9, size=iu[0].size, endpoint=True).astype(np.float64)
    dist = np.zeros((n, n))
    dist[iu] = vals
    dist += dist.T
    return Instance(dist, spec.m, name=spec.name)
