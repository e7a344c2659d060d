"""Finitely presented groups, exact integer Smith normal form, first homology
images, and commutator-subgroup obstructions.

The abelianization of <gens | relators> is the cokernel of the relator
exponent matrix.  A Smith decomposition D = U A V with U, V unimodular turns
exponent vectors into canonical coordinates: one residue per invariant factor
plus one integer per free summand.  A word whose coordinate vector is nonzero
cannot lie in the commutator subgroup; a zero vector decides nothing, so the
verdict is Obstructed or Inconclusive, never "member".

All arithmetic is over Python integers, so there is no overflow and no
floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .words import Word, parse_word

__all__ = [
    "AbelianGroup",
    "INCONCLUSIVE",
    "OBSTRUCTED",
    "ObstructionEntry",
    "ObstructionVerdict",
    "Presentation",
    "PresentationError",
    "SNFResult",
    "abelianization",
    "builtin_obstruction_entries",
    "builtin_presentation",
    "commutator_obstruction",
    "det",
    "exponent_matrix",
    "h1_image",
    "invariant_factors_via_minors",
    "mat_mul",
    "parse_obstruction_entries",
    "parse_presentation",
    "smith_normal_form",
    "surface_h1",
]


class PresentationError(ValueError):
    """Malformed presentation or obstruction data."""


# --- presentations -----------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Finite presentation with optional conjugacy declarations mapping extra
    symbols to generators they are conjugate to (conjugates share homology
    classes, so they share the generator's coordinate image)."""

    gens: tuple[str, ...]
    relators: tuple[Word, ...]
    conjugates: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.gens)) != len(self.gens):
            raise PresentationError("duplicate generators")
        gens = set(self.gens)
        for rel in self.relators:
            for name in rel.generators():
                if name not in gens:
                    raise PresentationError(f"relator uses undeclared generator {name!r}")
        for sym, target in self.conjugates:
            if sym in gens:
                raise PresentationError(f"conjugate symbol {sym!r} shadows a generator")
            if target not in gens:
                raise PresentationError(f"conjugate target {target!r} is not a generator")

    @property
    def conjugate_map(self) -> dict[str, str]:
        return dict(self.conjugates)


def parse_presentation(text: str) -> Presentation:
    """Parse ``gens:``, ``rel:``, ``conj:`` lines; ``#`` starts a comment."""
    gens: tuple[str, ...] | None = None
    relators: list[Word] = []
    conjugates: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise PresentationError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key = key.strip()
        value = value.strip()
        try:
            if key == "gens":
                if gens is not None:
                    raise PresentationError("duplicate gens line")
                gens = tuple(value.split())
            elif key == "rel":
                relators.append(parse_word(value))
            elif key == "conj":
                parts = value.split()
                if len(parts) != 2:
                    raise PresentationError("conj takes exactly two symbols")
                conjugates.append((parts[0], parts[1]))
            else:
                raise PresentationError(f"unknown key {key!r}")
        except PresentationError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if gens is None:
        raise PresentationError("missing gens line")
    return Presentation(gens, tuple(relators), tuple(conjugates))


def exponent_matrix(p: Presentation) -> list[list[int]]:
    """Rows are relator exponent-sum vectors over the generators."""
    slot = {name: i for i, name in enumerate(p.gens)}
    rows = []
    for rel in p.relators:
        row = [0] * len(p.gens)
        for name, exp in rel.letters:
            row[slot[name]] += exp
        rows.append(row)
    return rows


# --- exact matrix helpers ----------------------------------------------------

def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if a and b and len(a[0]) != len(b):
        raise PresentationError(f"shape mismatch: {len(a[0])} columns vs {len(b)} rows")
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by cofactor expansion (matrices here are <= 6x6)."""
    m = len(a)
    if any(len(row) != m for row in a):
        raise PresentationError("determinant of a non-square matrix")
    if m == 0:
        return 1
    if m == 1:
        return a[0][0]
    total = 0
    rest = [row[1:] for row in a]
    for i in range(m):
        if a[i][0]:
            minor = [rest[j] for j in range(m) if j != i]
            total += (-1) ** i * a[i][0] * det(minor)
    return total


def _identity(m: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


@dataclass(frozen=True)
class SNFResult:
    """Diagonalization D = U A V with U, V unimodular and the diagonal in a
    divisibility chain d_1 | d_2 | ..., all entries nonnegative."""

    diagonal: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    rows: int
    cols: int

    def d_matrix(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, value in enumerate(self.diagonal):
            out[i][i] = value
        return out

    @property
    def rank(self) -> int:
        return sum(1 for value in self.diagonal if value)


def smith_normal_form(a: Sequence[Sequence[int]]) -> SNFResult:
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise PresentationError("ragged matrix")
    A = [[int(x) for x in row] for row in a]
    U = _identity(m)
    V = _identity(n)

    def row_sub(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_sub(i: int, j: int, q: int) -> None:
        # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing submatrix becomes the pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            A[t], A[pi] = A[pi], A[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in A:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]

        dirty = False
        for i in range(t + 1, m):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                if q:
                    row_sub(i, t, q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                if q:
                    col_sub(j, t, q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the submatrix for the chain to hold
        p = A[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
            continue
        t += 1

    for i in range(min(m, n)):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            U[i] = [-x for x in U[i]]
    diagonal = tuple(A[i][i] for i in range(min(m, n)))
    return SNFResult(
        diagonal,
        tuple(tuple(row) for row in U),
        tuple(tuple(row) for row in V),
        m,
        n,
    )


def invariant_factors_via_minors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Independent oracle: the product d_1 ... d_k equals the gcd of all k x k
    minors, so d_k = gcd_k / gcd_{k-1}.  Returns the nonzero chain with 1s."""
    m = len(a)
    n = len(a[0]) if m else 0
    out: list[int] = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                minor = det([[a[i][j] for j in cols] for i in rows])
                g = gcd(g, minor)
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


# --- abelianization and homology images --------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """Canonical form: invariant factors (each >= 2, in a divisibility chain)
    plus a free rank."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        for prev, cur in zip(self.invariant_factors, self.invariant_factors[1:]):
            if cur % prev:
                raise PresentationError(f"invariant factors out of chain: {self.invariant_factors}")
        if any(d < 2 for d in self.invariant_factors):
            raise PresentationError("invariant factors must be >= 2")

    @property
    def coordinate_count(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def __str__(self) -> str:
        parts = [f"Z{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class _H1Setup:
    group: AbelianGroup
    v: tuple[tuple[int, ...], ...]
    torsion_cols: tuple[tuple[int, int], ...]  # (column, modulus)
    free_cols: tuple[int, ...]


@lru_cache(maxsize=None)
def _h1_setup(p: Presentation) -> _H1Setup:
    rows = exponent_matrix(p)
    g = len(p.gens)
    if not rows:
        snf = SNFResult((), (), tuple(tuple(r) for r in _identity(g)), 0, g)
    else:
        snf = smith_normal_form(rows)
    torsion: list[tuple[int, int]] = []
    free: list[int] = []
    for j in range(g):
        d = snf.diagonal[j] if j < len(snf.diagonal) else 0
        if d == 1:
            continue
        if d == 0:
            free.append(j)
        else:
            torsion.append((j, d))
    group = AbelianGroup(tuple(d for _, d in torsion), len(free))
    return _H1Setup(group, snf.v, tuple(torsion), tuple(free))


def abelianization(p: Presentation) -> AbelianGroup:
    """Invariant-factor form of the abelianized presentation."""
    return _h1_setup(p).group


def _exponent_vector(p: Presentation, w: Word) -> list[int]:
    slot = {name: i for i, name in enumerate(p.gens)}
    conj = p.conjugate_map
    vec = [0] * len(p.gens)
    for name, exp in w.letters:
        target = conj.get(name, name)
        if target not in slot:
            raise PresentationError(f"word uses unbound symbol {name!r}")
        vec[slot[target]] += exp
    return vec


def h1_image(p: Presentation, w: Word) -> tuple[int, ...]:
    """Canonical coordinates of the word's class in the abelianization:
    residues modulo each invariant factor, then free integer coordinates."""
    setup = _h1_setup(p)
    vec = _exponent_vector(p, w)
    z = [sum(vec[i] * setup.v[i][j] for i in range(len(vec))) for j in range(len(vec))]
    coords = [z[j] % d for j, d in setup.torsion_cols]
    coords.extend(z[j] for j in setup.free_cols)
    return tuple(coords)


OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ObstructionVerdict:
    """Outcome of the homology test for commutator-subgroup membership."""

    status: str
    image: tuple[int, ...]
    group: AbelianGroup
    source: str

    @property
    def note(self) -> str:
        if self.status == OBSTRUCTED:
            return "nonzero class in the abelianization; not a product of commutators"
        return "zero class in the abelianization; membership undecided by this test"


def commutator_obstruction(p: Presentation, w: Word) -> ObstructionVerdict:
    image = h1_image(p, w)
    status = OBSTRUCTED if any(image) else INCONCLUSIVE
    return ObstructionVerdict(status, image, abelianization(p), source=f"word {w}")


# --- shipped data ------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionEntry:
    """A twist class with recorded image in H_1 of the mapping class group of
    a closed nonorientable surface (``surface`` is N2, N3, ...)."""

    surface: str
    label: str
    image: tuple[int, ...]
    citation: str

    def __post_init__(self) -> None:
        if not self.citation.strip():
            raise PresentationError(f"entry {self.surface}/{self.label}: empty citation")
        group, _ = surface_h1(self.surface)
        if len(self.image) != group.coordinate_count:
            raise PresentationError(
                f"entry {self.surface}/{self.label}: image length {len(self.image)} "
                f"does not match {group} ({group.coordinate_count} coordinates)"
            )

    def verdict(self) -> ObstructionVerdict:
        group, _ = surface_h1(self.surface)
        status = OBSTRUCTED if any(self.image) else INCONCLUSIVE
        return ObstructionVerdict(status, self.image, group, source=f"data entry {self.surface}/{self.label}")


# H1 of the mapping class group of N_g; Z2 + Z2 throughout 2 <= g <= 6.
_SURFACE_H1: dict[str, tuple[AbelianGroup, str]] = {
    "N2": (AbelianGroup((2, 2)), "Lickorish 1963: the whole mapping class group of N2 is Z2 + Z2"),
    "N3": (AbelianGroup((2, 2)), "Korkmaz 2002: H1 of the mapping class group of N3 is Z2 + Z2"),
    "N4": (AbelianGroup((2, 2)), "external: Korkmaz 2002, H1 of the mapping class group of N4 is Z2 + Z2"),
    "N5": (AbelianGroup((2, 2)), "external: Korkmaz 2002, H1 of the mapping class group of N5 is Z2 + Z2"),
    "N6": (AbelianGroup((2, 2)), "external: Korkmaz 2002, H1 of the mapping class group of N6 is Z2 + Z2"),
}


def surface_h1(surface: str) -> tuple[AbelianGroup, str]:
    try:
        return _SURFACE_H1[surface]
    except KeyError:
        raise PresentationError(f"no H1 data for surface {surface!r}") from None


def parse_obstruction_entries(text: str) -> tuple[ObstructionEntry, ...]:
    """One entry per line: ``surface; class-label; image-vector; citation``."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [part.strip() for part in line.split(";")]
        if len(parts) != 4:
            raise PresentationError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        surface, label, image_text, citation = parts
        try:
            image = tuple(int(x) for x in image_text.split())
        except ValueError:
            raise PresentationError(f"line {lineno}: bad image vector {image_text!r}") from None
        try:
            entries.append(ObstructionEntry(surface, label, image, citation))
        except PresentationError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    return tuple(entries)


def _data_text(filename: str) -> str:
    from importlib import resources

    return resources.files("twistcert").joinpath("data", filename).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def builtin_obstruction_entries() -> tuple[ObstructionEntry, ...]:
    return parse_obstruction_entries(_data_text("obstructions.txt"))


_BUILTIN_PRESENTATIONS = {
    "mcg-n2": "mcg_n2.pres",
    "h1-mcg-n3": "h1_mcg_n3.pres",
}


@lru_cache(maxsize=None)
def builtin_presentation(name: str) -> Presentation:
    try:
        filename = _BUILTIN_PRESENTATIONS[name]
    except KeyError:
        raise PresentationError(
            f"unknown builtin presentation {name!r}; have {sorted(_BUILTIN_PRESENTATIONS)}"
        ) from None
    return parse_presentation(_data_text(filename))
