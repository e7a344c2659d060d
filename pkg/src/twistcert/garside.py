"""Braid groups B_n (2 <= n <= 6) with an exact solution to the word problem.

Elements are stored in left-greedy normal form Delta^d x_1 ... x_k: d is the
infimum (power of the half twist Delta), and the x_i are permutation braids,
none the identity and none Delta, with every adjacent pair (x, y)
left-weighted: no Artin generator can be moved from the front of y to the
back of x.  The normal form is a complete invariant, so equality of elements
is plain tuple equality.

Permutation braids are tabulated per strand count.  S_n stays small for
n <= MAX_STRANDS, which covers every shipped model (only B_3 and B_4 are
used); the cap is a table-size guard, not a structural limit.  Word-form
generators are named ``s1`` ... ``s5``.

The module also carries the reduced Burau representation of B_3 over exact
integer Laurent polynomials.  It is faithful on three strands, which makes it
an independent equality oracle for B_3.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .words import Word

__all__ = [
    "MAX_STRANDS",
    "BraidElement",
    "BraidError",
    "LaurentMatrix",
    "LaurentPoly",
    "PermutationBraid",
    "braid_equals",
    "braid_from_word",
    "braid_invert",
    "braid_multiply",
    "burau3",
    "half_twist",
    "identity_braid",
]

MAX_STRANDS = 6


class BraidError(ValueError):
    """Strand mismatch, unknown generator, or an unsupported strand count."""


class _Table:
    """Dense descent/multiplication tables for the permutation braids of B_n.

    Permutations are one-line tuples acting on positions 0..n-1; composition
    (p * q)(i) = p(q(i)).  Right multiplication by the transposition s swaps
    the entries in slots s, s+1; left multiplication swaps the values s, s+1.
    """

    def __init__(self, n: int):
        self.n = n
        perms = [tuple(p) for p in itertools.permutations(range(n))]
        index = {p: i for i, p in enumerate(perms)}
        self.perms = perms
        self.index = index
        self.size = len(perms)
        self.identity = index[tuple(range(n))]
        self.delta = index[tuple(range(n - 1, -1, -1))]

        artin = []
        for s in range(n - 1):
            q = list(range(n))
            q[s], q[s + 1] = q[s + 1], q[s]
            artin.append(index[tuple(q)])
        self.artin = tuple(artin)

        size = self.size
        rmul = [[0] * size for _ in range(n - 1)]
        lmul = [[0] * size for _ in range(n - 1)]
        rdesc = [0] * size
        ldesc = [0] * size
        tau = [0] * size
        left_comp = [0] * size
        for x, p in enumerate(perms):
            pos = [0] * n
            for i, v in enumerate(p):
                pos[v] = i
            for s in range(n - 1):
                q = list(p)
                q[s], q[s + 1] = q[s + 1], q[s]
                rmul[s][x] = index[tuple(q)]
                lmul[s][x] = index[tuple(s + 1 if v == s else s if v == s + 1 else v for v in p)]
                if p[s] > p[s + 1]:
                    rdesc[x] |= 1 << s
                if pos[s] > pos[s + 1]:
                    ldesc[x] |= 1 << s
            tau[x] = index[tuple(n - 1 - p[n - 1 - i] for i in range(n))]
            # Delta = lift(w0 p^-1) lift(p), so lift(p)^-1 = Delta^-1 lift(w0 p^-1).
            left_comp[x] = index[tuple(n - 1 - pos[i] for i in range(n))]
        self.rmul = rmul
        self.lmul = lmul
        self.rdesc = rdesc
        self.ldesc = ldesc
        self.tau = tau
        self.left_comp = left_comp
        self._fix_cache: dict[tuple[int, int], tuple[int, int]] = {}

    def fix(self, x: int, y: int) -> tuple[int, int]:
        """Make the pair (x, y) left-weighted, preserving the product."""
        key = (x, y)
        cached = self._fix_cache.get(key)
        if cached is not None:
            return cached
        rmul, lmul, rdesc, ldesc = self.rmul, self.lmul, self.rdesc, self.ldesc
        a, b = x, y
        d = ldesc[b] & ~rdesc[a]
        while d:
            s = (d & -d).bit_length() - 1
            a = rmul[s][a]
            b = lmul[s][b]
            d = ldesc[b] & ~rdesc[a]
        self._fix_cache[key] = (a, b)
        return a, b


@lru_cache(maxsize=None)
def _table(n: int) -> _Table:
    if not 2 <= n <= MAX_STRANDS:
        raise BraidError(f"strand count {n} outside the supported range 2..{MAX_STRANDS}")
    return _Table(n)


def _normalize(tbl: _Table, factors: list[int]) -> tuple[int, tuple[int, ...]]:
    """Left-weight a factor sequence.  Returns (delta shift, factors): leading
    Delta factors are absorbed into the shift, identity factors are dropped."""
    ident = tbl.identity
    fs = [f for f in factors if f != ident]
    fix = tbl.fix
    changed = True
    while changed:
        changed = False
        for i in range(len(fs) - 1):
            a, b = fix(fs[i], fs[i + 1])
            if a != fs[i]:
                fs[i] = a
                fs[i + 1] = b
                changed = True
        if changed:
            fs = [f for f in fs if f != ident]
    shift = 0
    while fs and fs[0] == tbl.delta:
        fs.pop(0)
        shift += 1
    return shift, tuple(fs)


@dataclass(frozen=True)
class PermutationBraid:
    """A positive braid whose strands cross at most once pairwise, recorded as
    the induced permutation in one-line notation (1-based values)."""

    oneline: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "oneline", tuple(self.oneline))
        if sorted(self.oneline) != list(range(1, len(self.oneline) + 1)):
            raise BraidError(f"not a permutation of 1..{len(self.oneline)}: {self.oneline}")

    @property
    def n(self) -> int:
        return len(self.oneline)

    @property
    def is_identity(self) -> bool:
        return self.oneline == tuple(range(1, self.n + 1))

    @property
    def is_half_twist(self) -> bool:
        return self.oneline == tuple(range(self.n, 0, -1))

    def __str__(self) -> str:
        return "".join(str(v) for v in self.oneline)


@dataclass(frozen=True)
class BraidElement:
    """Left-greedy normal form Delta^inf x_1 ... x_k; ``factors`` holds table
    indices of the permutation factors (table order is deterministic)."""

    n: int
    inf: int
    factors: tuple[int, ...] = ()

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    @property
    def is_identity(self) -> bool:
        return self.inf == 0 and not self.factors

    def permutations(self) -> tuple[PermutationBraid, ...]:
        tbl = _table(self.n)
        return tuple(
            PermutationBraid(tuple(v + 1 for v in tbl.perms[f])) for f in self.factors
        )

    def __mul__(self, other: "BraidElement") -> "BraidElement":
        return braid_multiply(self, other)

    def inverse(self) -> "BraidElement":
        return braid_invert(self)

    def __pow__(self, k: int) -> "BraidElement":
        if k == 0:
            return identity_braid(self.n)
        base = self if k > 0 else braid_invert(self)
        out = base
        for _ in range(abs(k) - 1):
            out = braid_multiply(out, base)
        return out

    def __str__(self) -> str:
        if self.is_identity:
            return "e"
        inner = ", ".join(str(p) for p in self.permutations())
        return f"D^{self.inf} · [{inner}]"


def identity_braid(n: int) -> BraidElement:
    _table(n)
    return BraidElement(n, 0, ())


def half_twist(n: int) -> BraidElement:
    """The Garside element Delta (normal form: inf 1, no factors)."""
    _table(n)
    return BraidElement(n, 1, ())


_SIGMA_RE = re.compile(r"s([1-9])\Z")


def _flatten(word: Word, n: int, binding: Mapping[str, Word] | None) -> list[tuple[int, int]]:
    """Resolve a word to a flat list of (generator index, sign) letters."""
    out: list[tuple[int, int]] = []

    def emit_letter(name: str, exp: int) -> None:
        m = _SIGMA_RE.match(name)
        if not m:
            raise BraidError(f"unbound generator {name!r}; expected s1..s{n - 1}")
        i = int(m.group(1)) - 1
        if i >= n - 1:
            raise BraidError(f"generator {name!r} is not a generator of B_{n}")
        sign = 1 if exp > 0 else -1
        out.extend([(i, sign)] * abs(exp))

    def emit_word(w: Word, power: int) -> None:
        letters = w.letters if power > 0 else tuple((nm, -e) for nm, e in reversed(w.letters))
        for _ in range(abs(power)):
            for name, exp in letters:
                emit_letter(name, exp)

    for name, exp in word.letters:
        if binding is not None and name in binding:
            emit_word(binding[name], exp)
        else:
            emit_letter(name, exp)
    return out


def braid_from_word(word: Word, n: int, binding: Mapping[str, Word] | None = None) -> BraidElement:
    """Evaluate a word to normal form.  ``binding`` optionally maps generator
    names of ``word`` to words over the native generators s1..s{n-1}."""
    tbl = _table(n)
    flat = _flatten(word, n, binding)
    factors: list[int] = []
    dpows: list[int] = []
    for i, sign in flat:
        if sign > 0:
            factors.append(tbl.artin[i])
            dpows.append(0)
        else:
            factors.append(tbl.left_comp[tbl.artin[i]])
            dpows.append(-1)
    # Collect the interleaved Delta^-1 powers at the front; passing a factor
    # across Delta^d conjugates it by tau^d, and tau has order two.
    dtot = 0
    tau = tbl.tau
    for j in range(len(factors) - 1, -1, -1):
        if dtot & 1:
            factors[j] = tau[factors[j]]
        dtot += dpows[j]
    shift, fs = _normalize(tbl, factors)
    return BraidElement(n, dtot + shift, fs)


def _check_same_group(u: BraidElement, v: BraidElement) -> None:
    if u.n != v.n:
        raise BraidError(f"strand mismatch: B_{u.n} vs B_{v.n}")


def braid_multiply(u: BraidElement, v: BraidElement) -> BraidElement:
    _check_same_group(u, v)
    tbl = _table(u.n)
    if v.inf & 1:
        factors = [tbl.tau[x] for x in u.factors]
    else:
        factors = list(u.factors)
    factors.extend(v.factors)
    shift, fs = _normalize(tbl, factors)
    return BraidElement(u.n, u.inf + v.inf + shift, fs)


def braid_invert(u: BraidElement) -> BraidElement:
    tbl = _table(u.n)
    factors = [tbl.left_comp[x] for x in reversed(u.factors)]
    d = -u.inf
    tau = tbl.tau
    for j in range(len(factors) - 1, -1, -1):
        if d & 1:
            factors[j] = tau[factors[j]]
        d -= 1
    shift, fs = _normalize(tbl, factors)
    return BraidElement(u.n, d + shift, fs)


def braid_equals(u: BraidElement, v: BraidElement) -> bool:
    _check_same_group(u, v)
    return u == v


# --- reduced Burau representation of B_3 ------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in t: sorted (exponent, coefficient) pairs
    with nonzero coefficients."""

    terms: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(coeff: int, exponent: int = 0) -> "LaurentPoly":
        return LaurentPoly(((exponent, coeff),) if coeff else ())

    @staticmethod
    def from_dict(coeffs: dict[int, int]) -> "LaurentPoly":
        return LaurentPoly(tuple(sorted((e, c) for e, c in coeffs.items() if c)))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(acc)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = e1 + e2
                acc[key] = acc.get(key, 0) + c1 * c2
        return LaurentPoly.from_dict(acc)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(("- " if c < 0 else "+ ") + body)
        head = parts[0].replace("+ ", "").replace("- ", "-")
        return " ".join([head] + parts[1:])


_LP_ZERO = LaurentPoly()
_LP_ONE = LaurentPoly.of(1)


@dataclass(frozen=True)
class LaurentMatrix:
    """2x2 matrix over LaurentPoly."""

    rows: tuple[tuple[LaurentPoly, LaurentPoly], tuple[LaurentPoly, LaurentPoly]]

    @staticmethod
    def identity() -> "LaurentMatrix":
        return LaurentMatrix(((_LP_ONE, _LP_ZERO), (_LP_ZERO, _LP_ONE)))

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        a, b = self.rows, other.rows
        return LaurentMatrix(
            tuple(
                tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2))
                for i in range(2)
            )
        )

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.rows) + "]"


@lru_cache(maxsize=1)
def _burau_gens() -> dict[tuple[int, int], LaurentMatrix]:
    t = LaurentPoly.of(1, 1)
    tinv = LaurentPoly.of(1, -1)
    one, zero = _LP_ONE, _LP_ZERO
    return {
        (0, 1): LaurentMatrix(((-t, one), (zero, one))),
        (1, 1): LaurentMatrix(((one, zero), (t, -t))),
        (0, -1): LaurentMatrix(((-tinv, tinv), (zero, one))),
        (1, -1): LaurentMatrix(((one, zero), (one, -tinv))),
    }


def burau3(word: Word, binding: Mapping[str, Word] | None = None) -> LaurentMatrix:
    """Reduced Burau matrix of a B_3 word; faithful, hence an equality oracle."""
    gens = _burau_gens()
    out = LaurentMatrix.identity()
    for i, sign in _flatten(word, 3, binding):
        out = out * gens[(i, sign)]
    return out
