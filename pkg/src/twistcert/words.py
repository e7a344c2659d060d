"""Free-group words over named generators.

A word is a reduced sequence of letters, each letter a generator name with a
nonzero integer exponent; adjacent letters always carry distinct names.  Words
are pure syntax: free reduction is the only rewriting done here, and equality
inside a particular group is decided by the model modules that consume words.

Text syntax is whitespace separated: ``tb ta^2 tb ta^2`` denotes
t_b t_a^2 t_b t_a^2, and the single token ``e`` denotes the empty word.
Templates extend the syntax with parenthesised groups and a formal power
parameter ``n``, for example ``( tb ta^2 tb ta^2 )^n``; instantiating a
template at a concrete integer yields an ordinary word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "IDENTITY_TOKEN",
    "GroupNode",
    "LetterNode",
    "PowerExpr",
    "Template",
    "Word",
    "WordError",
    "commutator",
    "invert",
    "parse_template",
    "parse_word",
    "reduce",
]

IDENTITY_TOKEN = "e"
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class WordError(ValueError):
    """Malformed word text, or a letter outside the declared alphabet."""


def _merge(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for name, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            merged = out[-1][1] + exp
            if merged == 0:
                out.pop()
            else:
                out[-1] = (name, merged)
        else:
            out.append((name, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A reduced word; ``letters`` pairs are (generator, nonzero exponent)."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        prev = None
        for name, exp in self.letters:
            if exp == 0:
                raise WordError(f"zero exponent on {name!r}")
            if name == prev:
                raise WordError(f"unmerged letters {name!r}; build words via reduce()")
            prev = name

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.letters)

    def weight(self) -> int:
        """Total letter count with multiplicity (sum of |exponent|)."""
        return sum(abs(exp) for _, exp in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((name, -exp) for name, exp in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(_merge(self.letters + other.letters))

    def __pow__(self, k: int) -> "Word":
        if k == 0:
            return Word()
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def __str__(self) -> str:
        if not self.letters:
            return IDENTITY_TOKEN
        parts = []
        for name, exp in self.letters:
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(parts)


def _validate_name(name: str) -> str:
    if name == IDENTITY_TOKEN:
        raise WordError(f"{IDENTITY_TOKEN!r} is reserved for the identity word")
    if not _NAME_RE.match(name):
        raise WordError(f"bad generator name {name!r}")
    return name


def reduce(letters: Iterable[tuple[str, int]], alphabet: Sequence[str] | None = None) -> Word:
    """Freely reduce a raw letter sequence (zero exponents dropped, adjacent
    equal names merged, cancellations propagated)."""
    seq = tuple((_validate_name(str(name)), int(exp)) for name, exp in letters)
    if alphabet is not None:
        allowed = set(alphabet)
        for name, _ in seq:
            if name not in allowed:
                raise WordError(f"generator {name!r} not in alphabet {{{', '.join(alphabet)}}}")
    return Word(_merge(seq))


def invert(w: Word) -> Word:
    """Reverse the word and negate every exponent."""
    return w.inverse()


def commutator(x: Word, y: Word, inverses_first: bool = False) -> Word:
    """The reduced commutator x y x^-1 y^-1 (or x^-1 y^-1 x y)."""
    if inverses_first:
        return x.inverse() * y.inverse() * x * y
    return x * y * x.inverse() * y.inverse()


def _parse_int_exponent(text: str, token: str) -> int:
    try:
        exp = int(text)
    except ValueError:
        raise WordError(f"bad exponent in token {token!r}") from None
    if exp == 0:
        raise WordError(f"zero exponent in token {token!r}")
    return exp


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse the plain word syntax: ``name`` or ``name^k`` tokens, ``e`` for
    the identity.  Exponents are nonzero integers."""
    letters: list[tuple[str, int]] = []
    for token in text.split():
        if token == IDENTITY_TOKEN:
            continue
        name, sep, exp_text = token.partition("^")
        exp = _parse_int_exponent(exp_text, token) if sep else 1
        letters.append((name, exp))
    return reduce(letters, alphabet)


# --- templates: words with parenthesised groups and a power parameter -------

@dataclass(frozen=True)
class PowerExpr:
    """An exponent of the form n_coeff * n + const."""

    n_coeff: int = 0
    const: int = 0

    @property
    def uses_n(self) -> bool:
        return self.n_coeff != 0

    def at(self, n: int | None) -> int:
        if self.uses_n:
            if n is None:
                raise WordError("exponent uses the power parameter n but no value was given")
            return self.n_coeff * n + self.const
        return self.const

    def __str__(self) -> str:
        if not self.uses_n:
            return str(self.const)
        coeff = {1: "", -1: "-"}.get(self.n_coeff, str(self.n_coeff))
        out = f"{coeff}n"
        if self.const:
            out += f"{self.const:+d}"
        return out


_POWER_RE = re.compile(r"(-?)(\d*)n([+-]\d+)?\Z")


def _parse_power(text: str, token: str) -> PowerExpr:
    m = _POWER_RE.match(text)
    if m:
        sign, coeff_text, const_text = m.groups()
        coeff = int(coeff_text) if coeff_text else 1
        if sign:
            coeff = -coeff
        if coeff == 0:
            raise WordError(f"zero n-coefficient in token {token!r}")
        return PowerExpr(coeff, int(const_text) if const_text else 0)
    return PowerExpr(0, _parse_int_exponent(text, token))


@dataclass(frozen=True)
class LetterNode:
    name: str
    exp: PowerExpr = PowerExpr(0, 1)


@dataclass(frozen=True)
class GroupNode:
    body: tuple["Node", ...] = ()
    exp: PowerExpr = PowerExpr(0, 1)


Node = Union[LetterNode, GroupNode]


def _nodes_use_n(nodes: tuple[Node, ...]) -> bool:
    for node in nodes:
        if node.exp.uses_n:
            return True
        if isinstance(node, GroupNode) and _nodes_use_n(node.body):
            return True
    return False


def _expand(nodes: tuple[Node, ...], n: int | None) -> Word:
    out = Word()
    for node in nodes:
        k = node.exp.at(n)
        if isinstance(node, LetterNode):
            if k:
                out = out * Word(((node.name, k),))
        else:
            out = out * (_expand(node.body, n) ** k)
    return out


def _node_str(node: Node) -> str:
    exp = node.exp
    plain = not exp.uses_n and exp.const == 1
    if isinstance(node, LetterNode):
        return node.name if plain else f"{node.name}^{exp}"
    inner = " ".join(_node_str(child) for child in node.body)
    return f"( {inner} )" if plain else f"( {inner} )^{exp}"


@dataclass(frozen=True)
class Template:
    """Word template; ``at(n)`` instantiates the power parameter."""

    nodes: tuple[Node, ...] = ()

    @staticmethod
    def constant(word: Word) -> "Template":
        return Template(tuple(LetterNode(name, PowerExpr(0, exp)) for name, exp in word.letters))

    @property
    def uses_n(self) -> bool:
        return _nodes_use_n(self.nodes)

    def at(self, n: int | None = None) -> Word:
        return _expand(self.nodes, n)

    def __str__(self) -> str:
        if not self.nodes:
            return IDENTITY_TOKEN
        return " ".join(_node_str(node) for node in self.nodes)


def _parse_seq(tokens: list[str], pos: int, depth: int) -> tuple[list[Node], int, PowerExpr]:
    nodes: list[Node] = []
    while pos < len(tokens):
        token = tokens[pos]
        if token == "(":
            body, pos, exp = _parse_seq(tokens, pos + 1, depth + 1)
            nodes.append(GroupNode(tuple(body), exp))
            continue
        if token.startswith(")"):
            if depth == 0:
                raise WordError(f"unbalanced {token!r}")
            if token == ")":
                exp = PowerExpr(0, 1)
            elif token.startswith(")^"):
                exp = _parse_power(token[2:], token)
            else:
                raise WordError(f"bad group close token {token!r}")
            return nodes, pos + 1, exp
        if token == IDENTITY_TOKEN:
            pos += 1
            continue
        name, sep, exp_text = token.partition("^")
        exp = _parse_power(exp_text, token) if sep else PowerExpr(0, 1)
        _validate_name(name)
        nodes.append(LetterNode(name, exp))
        pos += 1
    if depth:
        raise WordError("missing ')'")
    return nodes, pos, PowerExpr(0, 1)


def parse_template(text: str) -> Template:
    """Parse template syntax: plain word tokens plus ``( ... )^k`` groups,
    with exponents that may be integers or linear in n (``n``, ``-n``, ``2n``)."""
    nodes, _, _ = _parse_seq(text.split(), 0, 0)
    return Template(tuple(nodes))
