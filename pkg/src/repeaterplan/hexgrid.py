"""Axial hexagonal geometry for repeater layouts.

Cells are pointy-top hexagons addressed by axial ``(q, s)`` coordinates.
A cell of circumradius ``r`` has its repeater at the center; adjacent
repeaters sit ``sqrt(3) * r`` apart, which is also the amplified-signal reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .exceptions import InvalidParameterError

SQRT3 = math.sqrt(3.0)

# Usable (non-overlapping) area per cell for the three regular tilings,
# in units of r**2. The hexagon wins, which is why no other tiling exists here.
TILING_VALID_AREA = {"triangle": 1.3, "square": 2.0, "hexagon": 2.6}

# Axial unit steps, counter-clockwise starting east.
DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class HexCoord(NamedTuple):
    q: int
    s: int

    def __add__(self, other):
        return HexCoord(self.q + other[0], self.s + other[1])

    def __sub__(self, other):
        return HexCoord(self.q - other[0], self.s - other[1])

    @property
    def ring(self) -> int:
        return (abs(self.q) + abs(self.s) + abs(self.q + self.s)) // 2

    @property
    def norm(self) -> int:
        """Squared center distance in units of the neighbor spacing."""
        return self.q * self.q + self.q * self.s + self.s * self.s

    def rotate(self, steps: int = 1) -> "HexCoord":
        """Rotate counter-clockwise by ``steps`` * 60 degrees about the origin."""
        q, s = self
        for _ in range(steps % 6):
            q, s = -s, q + s
        return HexCoord(q, s)


ORIGIN = HexCoord(0, 0)


@dataclass(frozen=True)
class Cell:
    coord: HexCoord
    center: tuple[float, float]
    r: float
    repeater_id: int

    @property
    def reach(self) -> float:
        return SQRT3 * self.r

    def vertices(self) -> list[tuple[float, float]]:
        cx, cy = self.center
        out = []
        for k in range(6):
            a = math.radians(60 * k - 30)
            out.append((cx + self.r * math.cos(a), cy + self.r * math.sin(a)))
        return out


@dataclass(frozen=True)
class Tessellation:
    cells: tuple[Cell, ...]
    R: float
    r: float
    n_L: int
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.coord: c.repeater_id for c in self.cells})

    def __len__(self):
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __contains__(self, coord) -> bool:
        return HexCoord(*coord) in self._index

    def index_of(self, coord) -> int:
        return self._index[HexCoord(*coord)]

    def neighbor_ids(self, idx: int) -> list[int]:
        coord = self.cells[idx].coord
        return [self._index[n] for n in neighbors(coord) if n in self._index]

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for cell in self.cells:
            for j in self.neighbor_ids(cell.repeater_id):
                if cell.repeater_id < j:
                    pairs.append((cell.repeater_id, j))
        return pairs

    @property
    def reach(self) -> float:
        return SQRT3 * self.r


def _check_positive(**values):
    for name, value in values.items():
        if not (value > 0) or math.isinf(value):
            raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")


def hex_center(coord, r: float) -> tuple[float, float]:
    _check_positive(r=r)
    q, s = coord
    return (SQRT3 * r * (q + s / 2.0), 1.5 * r * s)


def nearest_coord(x: float, y: float, r: float) -> HexCoord:
    """Axial coordinate of the cell whose center is nearest to ``(x, y)``."""
    _check_positive(r=r)
    fs = y / (1.5 * r)
    fq = x / (SQRT3 * r) - fs / 2.0
    # cube rounding
    fz = -fq - fs
    q, s, z = round(fq), round(fs), round(fz)
    dq, ds, dz = abs(q - fq), abs(s - fs), abs(z - fz)
    if dq > ds and dq > dz:
        q = -s - z
    elif ds > dz:
        s = -q - z
    return HexCoord(int(q), int(s))


def rings_needed(R: float, r: float) -> int:
    """Smallest ring count ``n`` with ``r * sqrt(3 n^2 + 1) >= R``."""
    _check_positive(R=R, r=r)
    ratio = (R * R) / (r * r)
    n = math.ceil(math.sqrt(max(0.0, (ratio - 1.0) / 3.0)))
    # float guard around exact equality
    while n > 0 and r * math.sqrt(3 * (n - 1) ** 2 + 1) >= R:
        n -= 1
    while r * math.sqrt(3 * n * n + 1) < R:
        n += 1
    return n


def ring_bounds(n_L: int, r: float) -> tuple[float, float]:
    """Service radii bracketed by ``n_L`` rings: (lower, upper)."""
    lower = r * math.sqrt(3 * (n_L - 1) ** 2 + 1) if n_L > 0 else 0.0
    return lower, r * math.sqrt(3 * n_L * n_L + 1)


def hex_ring(k: int, center=ORIGIN) -> list[HexCoord]:
    if k == 0:
        return [HexCoord(*center)]
    c = HexCoord(*center) + (DIRECTIONS[4][0] * k, DIRECTIONS[4][1] * k)
    out = []
    for d in DIRECTIONS:
        for _ in range(k):
            out.append(c)
            c = c + d
    return out


def spiral(n_L: int, center=ORIGIN) -> list[HexCoord]:
    out = []
    for k in range(n_L + 1):
        out.extend(hex_ring(k, center))
    return out


def centered_hex_number(k: int) -> int:
    return 1 + 3 * k * (k + 1)


def tessellate(R: float, r: float) -> Tessellation:
    n_L = rings_needed(R, r)
    cells = tuple(
        Cell(coord=c, center=hex_center(c, r), r=r, repeater_id=i)
        for i, c in enumerate(spiral(n_L))
    )
    return Tessellation(cells=cells, R=float(R), r=float(r), n_L=n_L)


def neighbors(coord) -> list[HexCoord]:
    c = HexCoord(*coord)
    return [c + d for d in DIRECTIONS]


def hex_distance(a, b) -> int:
    return (HexCoord(*a) - b).ring


def euclidean(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])
