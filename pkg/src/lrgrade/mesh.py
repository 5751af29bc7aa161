"""Exact LR meshes on a square domain.

Coordinates are dyadic rationals stored as integer numerators over a single
shared power of two: a coordinate ``u`` on the domain ``[a, b]`` stands for
``a + (b - a) * u / 2**RESOLUTION_BITS``.  Every halving performed by the
refinement code stays on this grid, so all set and order comparisons on
meshlines and boxes are exact integer comparisons.

Meshlines are stored merged by maximal extent per ``(direction, fixed,
multiplicity)``, which makes constraint C1 (equal multiplicity along
contiguous aligned segments) structural.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Literal, NamedTuple, Sequence

import numpy as np

RESOLUTION_BITS = 30
FULL = 1 << RESOLUTION_BITS

Direction = Literal["H", "V"]
DIRECTIONS: tuple[Direction, Direction] = ("H", "V")


class MeshError(ValueError):
    """Raised when an operation would produce an invalid mesh."""


class MeshFormatError(ValueError):
    """Raised when an LRMESH/LRSET text cannot be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def other(direction: Direction) -> Direction:
    return "V" if direction == "H" else "H"


# --------------------------------------------------------------------------
# coordinates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    """The square ``[a, b]**2`` together with the integer coordinate frame."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not self.a < self.b:
            raise MeshError(f"empty domain [{self.a}, {self.b}]")

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def to_units(self, x) -> int:
        """Integer numerator of a real coordinate; rejects non-dyadic values."""
        t = (Fraction(x) - self.a) / self.length * FULL
        if t.denominator != 1:
            raise MeshError(f"coordinate {x} is not a dyadic point of the domain grid")
        return int(t)

    def to_real(self, u: int) -> Fraction:
        return self.a + self.length * Fraction(u, FULL)

    def to_float(self, u):
        return float(self.a) + float(self.length) * (np.asarray(u, dtype=float) / FULL)

    def from_float(self, x):
        """Real coordinates (floats) to fractional units, for evaluation only."""
        return (np.asarray(x, dtype=float) - float(self.a)) / float(self.length) * FULL


def format_decimal(x: Fraction) -> str:
    """Exact decimal text of a rational with a terminating expansion."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    digits = max(twos, fives)
    scaled = x * 10**digits
    assert scaled.denominator == 1
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    whole, frac = text[:-digits], text[-digits:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def parse_decimal(token: str, lineno: int | None = None) -> Fraction:
    try:
        return Fraction(Decimal(token))
    except (InvalidOperation, ValueError):
        raise MeshFormatError(f"not a decimal number: {token!r}", lineno) from None


# --------------------------------------------------------------------------
# value types
# --------------------------------------------------------------------------


class Box(NamedTuple):
    """Closed axis-aligned box in integer units.  Field order makes the
    natural tuple order lexicographic by lower-left corner."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    @property
    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    @property
    def diam_sq(self) -> int:
        return self.width**2 + self.height**2

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.x0 + self.x1, 2), Fraction(self.y0 + self.y1, 2)

    def extent(self, direction: Direction) -> tuple[int, int]:
        """Interval covered along a line of the given direction."""
        return (self.x0, self.x1) if direction == "H" else (self.y0, self.y1)

    def overlaps(self, other: "Box") -> bool:
        """Interiors intersect."""
        return self.x0 < other.x1 and other.x0 < self.x1 and self.y0 < other.y1 and other.y0 < self.y1

    def contains(self, other: "Box") -> bool:
        return self.x0 <= other.x0 and other.x1 <= self.x1 and self.y0 <= other.y0 and other.y1 <= self.y1


@dataclass(frozen=True, order=True)
class Meshline:
    """Maximal segment of constant multiplicity.

    ``direction`` is the direction of the segment itself: an ``"H"`` line has
    constant y (``fixed``) and spans ``[lo, hi]`` in x.
    """

    direction: Direction
    fixed: int
    lo: int
    hi: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise MeshError(f"unknown direction {self.direction!r}")
        if not self.lo < self.hi:
            raise MeshError(f"zero-length meshline {self}")
        if self.multiplicity < 1:
            raise MeshError(f"multiplicity must be positive: {self}")

    def contains_point(self, t: int) -> bool:
        return self.lo <= t <= self.hi


@dataclass(frozen=True)
class Segment:
    """A candidate line insertion (multiplicity one)."""

    direction: Direction
    fixed: int
    lo: int
    hi: int


# --------------------------------------------------------------------------
# the mesh
# --------------------------------------------------------------------------

_Segs = tuple[tuple[int, int, int], ...]  # sorted (lo, hi, mult)


class LRMesh:
    """Immutable LR mesh ``(M, p, mu)`` on a square domain.

    Parameters
    ----------
    domain : Domain
    degree : (p1, p2)
        Bidegree; vertical lines carry at most ``p1 + 1`` knots, horizontal
        lines at most ``p2 + 1``.
    lines : iterable of Meshline
        Merged to canonical form on construction.
    """

    __slots__ = ("domain", "degree", "_lines", "_boxes", "_box_array", "_fixed_sorted", "_cache")

    def __init__(self, domain: Domain, degree: tuple[int, int], lines: Iterable[Meshline], *, _boxes=None):
        p1, p2 = degree
        if p1 < 0 or p2 < 0:
            raise MeshError(f"negative degree {degree}")
        self.domain = domain
        self.degree = (int(p1), int(p2))
        table: dict[str, dict[int, list[tuple[int, int, int]]]] = {"H": {}, "V": {}}
        for ln in lines:
            table[ln.direction].setdefault(ln.fixed, []).append((ln.lo, ln.hi, ln.multiplicity))
        self._lines: dict[str, dict[int, _Segs]] = {
            d: {f: _merge(segs) for f, segs in sorted(table[d].items())} for d in DIRECTIONS
        }
        self._fixed_sorted = {d: tuple(self._lines[d]) for d in DIRECTIONS}
        self._boxes = None if _boxes is None else tuple(_boxes)
        self._box_array = None
        self._cache: dict = {}

    @classmethod
    def _from_table(cls, domain, degree, table, boxes=None) -> "LRMesh":
        self = object.__new__(cls)
        self.domain = domain
        self.degree = degree
        self._lines = table
        self._fixed_sorted = {d: tuple(sorted(table[d])) for d in DIRECTIONS}
        self._boxes = None if boxes is None else tuple(boxes)
        self._box_array = None
        self._cache = {}
        return self

    # -- line queries ------------------------------------------------------

    def max_multiplicity(self, direction: Direction) -> int:
        """Full multiplicity for lines of this direction (C2 bound)."""
        p1, p2 = self.degree
        return p1 + 1 if direction == "V" else p2 + 1

    def degree_along(self, direction: Direction) -> int:
        """Degree of the variable that runs along ``direction``."""
        return self.degree[0] if direction == "H" else self.degree[1]

    def lines(self) -> list[Meshline]:
        """All maximal meshlines, sorted by (direction, fixed, lo)."""
        out = []
        for d in DIRECTIONS:
            for f in self._fixed_sorted[d]:
                out.extend(Meshline(d, f, lo, hi, m) for lo, hi, m in self._lines[d][f])
        return out

    def segments_at(self, direction: Direction, fixed: int) -> _Segs:
        return self._lines[direction].get(fixed, ())

    def fixed_values(self, direction: Direction, lo: int | None = None, hi: int | None = None,
                     *, closed: bool = False) -> tuple[int, ...]:
        """Distinct fixed coordinates of lines of ``direction``, optionally
        restricted to the open (or closed) interval ``(lo, hi)``."""
        keys = self._fixed_sorted[direction]
        if lo is None:
            return keys
        if closed:
            i, j = bisect.bisect_left(keys, lo), bisect.bisect_right(keys, hi)
        else:
            i, j = bisect.bisect_right(keys, lo), bisect.bisect_left(keys, hi)
        return keys[i:j]

    def multiplicity_over(self, direction: Direction, fixed: int, lo: int, hi: int) -> int:
        """Multiplicity of the line at ``fixed`` if one segment covers
        ``[lo, hi]`` entirely, else 0."""
        for a, b, m in self._lines[direction].get(fixed, ()):
            if a <= lo and hi <= b:
                return m
            if a > lo:
                break
        return 0

    def multiplicity_at(self, direction: Direction, fixed: int, t: int) -> int:
        """Multiplicity of the line at ``fixed`` through the point ``t``
        (closed segments; 0 if none)."""
        best = 0
        for a, b, m in self._lines[direction].get(fixed, ()):
            if a <= t <= b:
                best = max(best, m)
        return best

    def crossings(self, direction: Direction, lo: int, hi: int | None = None,
                  window: tuple[int, int] | None = None) -> list[tuple[int, int]]:
        """Orthogonal lines met by a line of ``direction``.

        Returns sorted ``(position, multiplicity)`` pairs of the lines
        orthogonal to ``direction`` that contain the whole interval
        ``[lo, hi]`` of the transversal coordinate (a single point when
        ``hi`` is None), restricted to positions inside the closed ``window``.
        """
        if hi is None:
            hi = lo
        orth = other(direction)
        keys = self._fixed_sorted[orth] if window is None else self.fixed_values(orth, *window, closed=True)
        out = []
        for f in keys:
            m = self.multiplicity_over(orth, f, lo, hi) if lo != hi else self.multiplicity_at(orth, f, lo)
            if m:
                out.append((f, m))
        return out

    def is_tensor(self) -> bool:
        """Every line spans the whole domain."""
        for d in DIRECTIONS:
            for segs in self._lines[d].values():
                if len(segs) != 1 or segs[0][0] != 0 or segs[0][1] != FULL:
                    return False
        return True

    # -- boxes -------------------------------------------------------------

    @property
    def boxes(self) -> tuple[Box, ...]:
        if self._boxes is None:
            self._boxes = tuple(_partition_from_lines(self))
        return self._boxes

    @property
    def box_array(self) -> np.ndarray:
        """``(n, 4)`` int64 array of ``(x0, y0, x1, y1)`` rows, read-only."""
        if self._box_array is None:
            arr = np.array(self.boxes, dtype=np.int64).reshape(-1, 4)
            arr.setflags(write=False)
            self._box_array = arr
        return self._box_array

    def box_set(self) -> frozenset[Box]:
        if "box_set" not in self._cache:
            self._cache["box_set"] = frozenset(self.boxes)
        return self._cache["box_set"]

    # -- misc --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LRMesh):
            return NotImplemented
        return self.domain == other.domain and self.degree == other.degree and self._lines == other._lines

    def __hash__(self):
        return hash((self.domain, self.degree, tuple(self.lines())))

    def __repr__(self):
        return f"LRMesh(degree={self.degree}, lines={sum(len(v) for d in self._lines.values() for v in d.values())}, boxes={len(self.boxes)})"

    def refines(self, coarse: "LRMesh") -> bool:
        """Every line of ``coarse`` is present here with at least its multiplicity."""
        if coarse.domain != self.domain or coarse.degree != self.degree:
            return False
        for ln in coarse.lines():
            if self.multiplicity_over(ln.direction, ln.fixed, ln.lo, ln.hi) < ln.multiplicity:
                return False
        return True


def _merge(segs: Sequence[tuple[int, int, int]]) -> _Segs:
    """Canonical form: sort, fuse overlapping or touching runs of equal multiplicity."""
    out: list[list[int]] = []
    for lo, hi, m in sorted(segs):
        if out and out[-1][2] == m and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi, m])
    return tuple((a, b, m) for a, b, m in out)


def _partition_from_lines(mesh: LRMesh) -> list[Box]:
    """Faces of the line arrangement, via connected elementary cells."""
    xs = mesh.fixed_values("V")
    ys = mesh.fixed_values("H")
    if not xs or not ys or xs[0] != 0 or xs[-1] != FULL or ys[0] != 0 or ys[-1] != FULL:
        raise MeshError("mesh lacks its boundary lines")
    nx, ny = len(xs) - 1, len(ys) - 1
    parent = list(range(nx * ny))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i in range(1, nx):
        x = xs[i]
        for j in range(ny):
            if not mesh.multiplicity_over("V", x, ys[j], ys[j + 1]):
                union((i - 1) * ny + j, i * ny + j)
    for j in range(1, ny):
        y = ys[j]
        for i in range(nx):
            if not mesh.multiplicity_over("H", y, xs[i], xs[i + 1]):
                union(i * ny + j - 1, i * ny + j)

    groups: dict[int, list[int]] = {}
    for c in range(nx * ny):
        groups.setdefault(find(c), []).append(c)
    boxes = []
    for cells in groups.values():
        ii = [c // ny for c in cells]
        jj = [c % ny for c in cells]
        i0, i1, j0, j1 = min(ii), max(ii) + 1, min(jj), max(jj) + 1
        if (i1 - i0) * (j1 - j0) != len(cells):
            raise MeshError("box partition has a non-rectangular face (dangling meshline)")
        boxes.append(Box(xs[i0], ys[j0], xs[i1], ys[j1]))
    boxes.sort()
    return boxes


# --------------------------------------------------------------------------
# construction and validation
# --------------------------------------------------------------------------


def make_open_tensor_mesh(domain, degree: tuple[int, int], interior_x: Sequence = (),
                          interior_y: Sequence = ()) -> LRMesh:
    """Open tensor mesh with full-multiplicity boundary and simple interior lines.

    ``domain`` is a :class:`Domain` or a pair ``(a, b)``; interior coordinates
    are real values (anything :class:`fractions.Fraction` accepts).
    """
    if not isinstance(domain, Domain):
        domain = Domain(*domain)
    p1, p2 = degree
    if p1 < 0 or p2 < 0:
        raise MeshError(f"negative degree {degree}")
    ux = _interior_units(domain, interior_x)
    uy = _interior_units(domain, interior_y)
    lines = [
        Meshline("V", 0, 0, FULL, p1 + 1),
        Meshline("V", FULL, 0, FULL, p1 + 1),
        Meshline("H", 0, 0, FULL, p2 + 1),
        Meshline("H", FULL, 0, FULL, p2 + 1),
    ]
    lines += [Meshline("V", u, 0, FULL, 1) for u in ux]
    lines += [Meshline("H", u, 0, FULL, 1) for u in uy]
    xs, ys = [0, *ux, FULL], [0, *uy, FULL]
    boxes = sorted(Box(xs[i], ys[j], xs[i + 1], ys[j + 1]) for i in range(len(xs) - 1) for j in range(len(ys) - 1))
    return LRMesh(domain, (p1, p2), lines, _boxes=boxes)


def _interior_units(domain: Domain, values: Sequence) -> list[int]:
    out = [domain.to_units(v) for v in values]
    for u, v in zip(out, values):
        if not 0 < u < FULL:
            raise MeshError(f"interior coordinate {v} is not strictly inside the domain")
    if any(a >= b for a, b in zip(out, out[1:])):
        raise MeshError("interior coordinates must be strictly increasing (no duplicates)")
    return out


@dataclass(frozen=True)
class Violation:
    code: str  # "C1", "C2", "boundary", "anchor", "extent"
    detail: str


def validate_mesh(mesh: LRMesh) -> list[Violation]:
    """Constraint violations of ``mesh``; an empty list means the mesh is valid."""
    out: list[Violation] = []
    for d in DIRECTIONS:
        cap = mesh.max_multiplicity(d)
        for f in mesh.fixed_values(d):
            segs = mesh.segments_at(d, f)
            if not 0 <= f <= FULL:
                out.append(Violation("extent", f"{d} line at {f} outside the domain"))
            for (lo, hi, m) in segs:
                if lo < 0 or hi > FULL:
                    out.append(Violation("extent", f"{d} line at {f} spans [{lo}, {hi}] outside the domain"))
                if m > cap:
                    out.append(Violation("C2", f"{d} line at {f} [{lo}, {hi}] has multiplicity {m} > {cap}"))
            for (lo1, hi1, m1), (lo2, hi2, m2) in zip(segs, segs[1:]):
                if lo2 <= hi1 and m1 != m2:
                    out.append(Violation("C1", f"{d} line at {f}: contiguous segments [{lo1}, {hi1}] and "
                                               f"[{lo2}, {hi2}] have multiplicities {m1} and {m2}"))
        for f in (0, FULL):
            if mesh.segments_at(d, f) != ((0, FULL, cap),):
                out.append(Violation("boundary", f"boundary {d} line at {f} is not a full-multiplicity line"))
    for ln in mesh.lines():
        o = other(ln.direction)
        for end in (ln.lo, ln.hi):
            if not mesh.multiplicity_at(o, end, ln.fixed):
                out.append(Violation("anchor", f"endpoint {end} of {ln.direction} line at {ln.fixed} is dangling"))
    return out


def box_partition(mesh: LRMesh) -> list[Box]:
    """Boxes of the mesh, sorted lexicographically by lower-left corner."""
    return list(mesh.boxes)


# --------------------------------------------------------------------------
# insertion (procedure R2)
# --------------------------------------------------------------------------


def insert_segment(mesh: LRMesh, direction: Direction, fixed: int, span: tuple[int, int]) -> LRMesh:
    """Insert a multiplicity-one segment and return the refined mesh.

    Raises :class:`MeshError` on a dangling endpoint, zero length, a
    segment on the boundary, or a segment already contained in the mesh.
    """
    return _insert(mesh, Segment(direction, int(fixed), int(span[0]), int(span[1])), strict=True)


def insert_segments(mesh: LRMesh, segments: Iterable[Segment]) -> LRMesh:
    """Insert several segments, skipping those already present."""
    for seg in segments:
        mesh = _insert(mesh, seg, strict=False)
    return mesh


def _insert(mesh: LRMesh, seg: Segment, strict: bool) -> LRMesh:
    d, f, lo, hi = seg.direction, seg.fixed, seg.lo, seg.hi
    if d not in DIRECTIONS:
        raise MeshError(f"unknown direction {d!r}")
    if not lo < hi:
        raise MeshError("zero-length span")
    if not 0 < f < FULL:
        raise MeshError("segment lies on the domain boundary or outside it")
    if lo < 0 or hi > FULL:
        raise MeshError("segment leaves the domain")
    o = other(d)
    for end in (lo, hi):
        if not mesh.multiplicity_at(o, end, f):
            raise MeshError(f"dangling endpoint at {end} of {d} segment at {f}")
    old = mesh.segments_at(d, f)
    if any(m != 1 and a < hi and lo < b for a, b, m in old):
        raise MeshError("segment overlaps a line of higher multiplicity")
    new = _merge(old + ((lo, hi, 1),))
    if new == old:
        if strict:
            raise MeshError("segment is already contained in the mesh")
        return mesh

    table = {dd: dict(mesh._lines[dd]) for dd in DIRECTIONS}
    table[d][f] = new
    boxes = None
    if mesh._boxes is not None:
        boxes = _split_boxes(mesh.boxes, seg)
    return LRMesh._from_table(mesh.domain, mesh.degree, table, boxes)


def _split_boxes(boxes: Sequence[Box], seg: Segment) -> list[Box]:
    out = []
    f, lo, hi = seg.fixed, seg.lo, seg.hi
    for b in boxes:
        if seg.direction == "V":
            if b.x0 < f < b.x1 and b.y0 < hi and lo < b.y1:
                if not (lo <= b.y0 and b.y1 <= hi):
                    raise MeshError("segment ends inside a box")
                out += [Box(b.x0, b.y0, f, b.y1), Box(f, b.y0, b.x1, b.y1)]
                continue
        else:
            if b.y0 < f < b.y1 and b.x0 < hi and lo < b.x1:
                if not (lo <= b.x0 and b.x1 <= hi):
                    raise MeshError("segment ends inside a box")
                out += [Box(b.x0, b.y0, b.x1, f), Box(b.x0, f, b.x1, b.y1)]
                continue
        out.append(b)
    out.sort()
    return out


def crossing_count(mesh: LRMesh, direction: Direction, fixed: int, span: tuple[int, int]) -> int:
    """Orthogonal meshlines met by the closed segment, counting multiplicity."""
    lo, hi = span
    return sum(m for _, m in mesh.crossings(direction, fixed, window=(lo, hi)))


# --------------------------------------------------------------------------
# LRMESH v1 text format
# --------------------------------------------------------------------------

MESH_MAGIC = "LRMESH v1"


def format_mesh(mesh: LRMesh) -> str:
    dom = mesh.domain
    rows = [MESH_MAGIC, f"domain {format_decimal(dom.a)} {format_decimal(dom.b)}",
            f"degree {mesh.degree[0]} {mesh.degree[1]}"]
    for ln in mesh.lines():
        rows.append(
            f"line {ln.direction} {format_decimal(dom.to_real(ln.fixed))} "
            f"{format_decimal(dom.to_real(ln.lo))} {format_decimal(dom.to_real(ln.hi))} {ln.multiplicity}"
        )
    return "\n".join(rows) + "\n"


def parse_mesh(text: str) -> LRMesh:
    rows = [(i + 1, r.split()) for i, r in enumerate(text.splitlines())]
    rows = [(i, r) for i, r in rows if r and not r[0].startswith("#")]
    if not rows or " ".join(rows[0][1]) != MESH_MAGIC:
        raise MeshFormatError(f"missing '{MESH_MAGIC}' header", rows[0][0] if rows else 1)
    domain = degree = None
    lines = []
    for lineno, tok in rows[1:]:
        key = tok[0]
        if key == "domain":
            if len(tok) != 3:
                raise MeshFormatError("expected 'domain <a> <b>'", lineno)
            try:
                domain = Domain(parse_decimal(tok[1], lineno), parse_decimal(tok[2], lineno))
            except MeshError as exc:
                raise MeshFormatError(str(exc), lineno) from None
        elif key == "degree":
            if len(tok) != 3:
                raise MeshFormatError("expected 'degree <p1> <p2>'", lineno)
            try:
                degree = (int(tok[1]), int(tok[2]))
            except ValueError:
                raise MeshFormatError("degree must be two integers", lineno) from None
        elif key == "line":
            if domain is None or degree is None:
                raise MeshFormatError("'line' before 'domain' and 'degree'", lineno)
            if len(tok) != 6 or tok[1] not in DIRECTIONS:
                raise MeshFormatError("expected 'line <H|V> <fixed> <lo> <hi> <mult>'", lineno)
            try:
                f, lo, hi = (domain.to_units(parse_decimal(t, lineno)) for t in tok[2:5])
                lines.append(Meshline(tok[1], f, lo, hi, int(tok[5])))
            except (MeshError, ValueError) as exc:
                raise MeshFormatError(str(exc), lineno) from None
        else:
            raise MeshFormatError(f"unknown record {key!r}", lineno)
    if domain is None or degree is None:
        raise MeshFormatError("truncated file: missing domain or degree", rows[-1][0] + 1)
    mesh = LRMesh(domain, degree, lines)
    try:
        mesh.boxes
    except MeshError as exc:
        raise MeshFormatError(f"invalid mesh: {exc}", rows[-1][0]) from None
    return mesh
