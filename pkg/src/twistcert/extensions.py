"""Verification models: braid groups, their semidirect extensions by an
involutive automorphism, and the dihedral-type group Z x| Z.

A model evaluates words to elements with decidable equality.  Identities are
proved inside a model; a surface embedding that matches the model's generator
dictionary then transports them into the mapping class group of the surface,
because relations are preserved under every group homomorphism.  Each model
carries a ledger of the classical facts backing its dictionary; the ledger
entries are data and travel into certificates.

Registered models:

====== =======================================================================
B2-B6  plain braid groups; chain twist aliases ta, tb, ... for s1, s2, ...
B3xZ2  B3 extended by r with r s_i r = s_i^-1 (one-holed torus with an
       orientation-reversing involution fixing both chain curves)
B4xZ2  B4 extended by r with r s_1 r = s_3^-1, r s_2 r = s_2^-1,
       r s_3 r = s_1^-1 (two-holed torus, involution mirroring the chain)
ZsemiZ <y, f | f y f^-1 = y^-1>, elements (a, b) = y^a f^b (crosscap
       transposition y and a conjugator f inverting it)
====== =======================================================================

Extensions multiply by (g, e)(g', e') = (g phi^e(g'), e xor e'); equality is
componentwise, so flip-0 equality coincides with base equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .garside import BraidElement, braid_from_word, braid_multiply, identity_braid
from .words import Word, parse_word

__all__ = [
    "Alias",
    "BraidModel",
    "DihedralElement",
    "DihedralModel",
    "ExtendedElement",
    "ExtendedModel",
    "FLIP_SYMBOL",
    "ModelError",
    "dihedral_equals",
    "ext_equals",
    "get_model",
    "make_extension",
    "registered_models",
]

FLIP_SYMBOL = "r"


class ModelError(ValueError):
    """Unknown model, unbound symbol, or an invalid automorphism."""


@dataclass(frozen=True)
class Alias:
    """A named word over a model's native generators, with the classical fact
    that justifies reading it as the named mapping class."""

    word: Word
    citation: str
    is_twist: bool = True


def _substitute(word: Word, table: Mapping[str, Word]) -> Word:
    out = Word()
    for name, exp in word.letters:
        target = table.get(name)
        out = out * (target ** exp if target is not None else Word(((name, exp),)))
    return out


class BraidModel:
    """Braid group B_n evaluated through the Garside normal form."""

    def __init__(self, name: str, n: int, aliases: Mapping[str, Alias], citations: tuple[str, ...]):
        self.name = name
        self.n = n
        self.natives = tuple(f"s{i}" for i in range(1, n))
        self.aliases = dict(aliases)
        for alias_name, alias in self.aliases.items():
            for gen in alias.word.generators():
                if gen not in self.natives:
                    raise ModelError(f"alias {alias_name!r} uses non-native generator {gen!r}")
        self.citations = citations + tuple(
            f"{alias_name} = {alias.word}: {alias.citation}" for alias_name, alias in sorted(self.aliases.items())
        )

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.natives + tuple(sorted(self.aliases))

    @property
    def twist_symbols(self) -> frozenset[str]:
        twists = set(self.natives)
        twists.update(name for name, alias in self.aliases.items() if alias.is_twist)
        return frozenset(twists)

    def resolve(self, word: Word, binding: Mapping[str, Word] | None = None) -> Word:
        """Rewrite a word over natives: binding first, then model aliases."""
        if binding:
            word = _substitute(word, binding)
        return _substitute(word, {name: alias.word for name, alias in self.aliases.items()})

    def eval(self, word: Word, binding: Mapping[str, Word] | None = None) -> BraidElement:
        return braid_from_word(self.resolve(word, binding), self.n)

    def equals(self, u: Word, v: Word, binding: Mapping[str, Word] | None = None) -> bool:
        return self.eval(u, binding) == self.eval(v, binding)

    def identity(self) -> BraidElement:
        return identity_braid(self.n)

    def repr_element(self, element: BraidElement) -> str:
        return str(element)

    def relators(self) -> tuple[tuple[Word, Word], ...]:
        out = []
        for i in range(1, self.n - 1):
            out.append((parse_word(f"s{i} s{i + 1} s{i}"), parse_word(f"s{i + 1} s{i} s{i + 1}")))
        for i in range(1, self.n - 1):
            for j in range(i + 2, self.n):
                out.append((parse_word(f"s{i} s{j}"), parse_word(f"s{j} s{i}")))
        return tuple(out)


@dataclass(frozen=True)
class ExtendedElement:
    base: BraidElement
    flip: int

    def __str__(self) -> str:
        return f"({self.base}; r^{self.flip})"


class ExtendedModel:
    """Semidirect extension of a braid model by an involutive automorphism,
    with the extra generator ``r`` acting by the automorphism."""

    def __init__(self, name: str, base: BraidModel, phi: Mapping[str, Word],
                 aliases: Mapping[str, Alias], citations: tuple[str, ...]):
        self.name = name
        self.base = base
        self.n = base.n
        self.phi = dict(phi)
        self.natives = base.natives + (FLIP_SYMBOL,)
        self.aliases = dict(base.aliases)
        self.aliases.update(aliases)
        self.citations = base.citations + citations + tuple(
            f"{alias_name} = {alias.word}: {alias.citation}" for alias_name, alias in sorted(aliases.items())
        )

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.natives + tuple(sorted(self.aliases))

    @property
    def twist_symbols(self) -> frozenset[str]:
        twists = set(self.base.natives)
        twists.update(name for name, alias in self.aliases.items() if alias.is_twist)
        return frozenset(twists)

    def apply_automorphism(self, word: Word) -> Word:
        """Image of a native base word under the defining automorphism."""
        return _substitute(word, self.phi)

    def resolve(self, word: Word, binding: Mapping[str, Word] | None = None) -> Word:
        if binding:
            word = _substitute(word, binding)
        return _substitute(word, {name: alias.word for name, alias in self.aliases.items()})

    def eval(self, word: Word, binding: Mapping[str, Word] | None = None) -> ExtendedElement:
        resolved = self.resolve(word, binding)
        acc = self.base.identity()
        flip = 0
        run: list[tuple[str, int]] = []

        def close_run() -> None:
            nonlocal acc
            if not run:
                return
            chunk = Word(tuple(run))
            if flip:
                chunk = self.apply_automorphism(chunk)
            acc = braid_multiply(acc, braid_from_word(chunk, self.n))
            run.clear()

        for name, exp in resolved.letters:
            if name == FLIP_SYMBOL:
                close_run()
                flip ^= exp & 1
            else:
                run.append((name, exp))
        close_run()
        return ExtendedElement(acc, flip)

    def equals(self, u: Word, v: Word, binding: Mapping[str, Word] | None = None) -> bool:
        return self.eval(u, binding) == self.eval(v, binding)

    def repr_element(self, element: ExtendedElement) -> str:
        return str(element)


def make_extension(base: BraidModel, phi: Mapping[str, Word], name: str,
                   aliases: Mapping[str, Alias] | None = None,
                   citations: tuple[str, ...] = ()) -> ExtendedModel:
    """Build a validated extension: phi must fix every braid relator and be an
    involution on the generators."""
    phi = dict(phi)
    missing = set(base.natives) - set(phi)
    if missing:
        raise ModelError(f"automorphism images missing for {sorted(missing)}")
    for gen, image in phi.items():
        if gen not in base.natives:
            raise ModelError(f"automorphism defined on non-native generator {gen!r}")
        for used in image.generators():
            if used not in base.natives:
                raise ModelError(f"automorphism image of {gen!r} uses {used!r}")
    model = ExtendedModel(name, base, phi, aliases or {}, citations)
    for lhs, rhs in base.relators():
        if braid_from_word(model.apply_automorphism(lhs), base.n) != braid_from_word(
            model.apply_automorphism(rhs), base.n
        ):
            raise ModelError(f"automorphism does not preserve the relation {lhs} = {rhs}")
    for gen in base.natives:
        twice = model.apply_automorphism(phi[gen])
        if braid_from_word(twice, base.n) != braid_from_word(Word(((gen, 1),)), base.n):
            raise ModelError(f"automorphism is not an involution on {gen!r}")
    return model


@dataclass(frozen=True)
class DihedralElement:
    """(a, b) stands for y^a f^b in <y, f | f y f^-1 = y^-1>."""

    y_exp: int
    f_exp: int

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        sign = -1 if self.f_exp % 2 else 1
        return DihedralElement(self.y_exp + sign * other.y_exp, self.f_exp + other.f_exp)

    def __str__(self) -> str:
        return f"({self.y_exp}, {self.f_exp})"


class DihedralModel:
    """The group <y, f | f y f^-1 = y^-1>; normal form y^a f^b."""

    def __init__(self, name: str, aliases: Mapping[str, Alias], citations: tuple[str, ...]):
        self.name = name
        self.natives = ("y", "f")
        self.aliases = dict(aliases)
        self.citations = citations + tuple(
            f"{alias_name} = {alias.word}: {alias.citation}" for alias_name, alias in sorted(self.aliases.items())
        )

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.natives + tuple(sorted(self.aliases))

    @property
    def twist_symbols(self) -> frozenset[str]:
        return frozenset(name for name, alias in self.aliases.items() if alias.is_twist)

    def resolve(self, word: Word, binding: Mapping[str, Word] | None = None) -> Word:
        if binding:
            word = _substitute(word, binding)
        return _substitute(word, {name: alias.word for name, alias in self.aliases.items()})

    def eval(self, word: Word, binding: Mapping[str, Word] | None = None) -> DihedralElement:
        out = DihedralElement(0, 0)
        for name, exp in self.resolve(word, binding).letters:
            if name == "y":
                out = out * DihedralElement(exp, 0)
            elif name == "f":
                out = out * DihedralElement(0, exp)
            else:
                raise ModelError(f"unbound generator {name!r}; expected y, f")
        return out

    def equals(self, u: Word, v: Word, binding: Mapping[str, Word] | None = None) -> bool:
        return self.eval(u, binding) == self.eval(v, binding)

    def repr_element(self, element: DihedralElement) -> str:
        return str(element)


def ext_equals(u: Word, v: Word, model: ExtendedModel, binding: Mapping[str, Word] | None = None) -> bool:
    """Equality of two words in a semidirect extension model."""
    if not isinstance(model, ExtendedModel):
        raise ModelError(f"model {getattr(model, 'name', model)!r} is not an extension")
    return model.equals(u, v, binding)


def dihedral_equals(u: Word, v: Word) -> bool:
    """Equality of words written strictly over y, f in <y, f | f y f^-1 = y^-1>."""
    for word in (u, v):
        for name in word.generators():
            if name not in ("y", "f"):
                raise ModelError(f"unbound generator {name!r}; expected y, f")
    model = get_model("ZsemiZ")
    return model.equals(u, v)


# --- registry ----------------------------------------------------------------

_CHAIN_NAMES = ("ta", "tb", "tc", "td", "te")

_CHAIN_FACT = (
    "a chain of simple closed curves, consecutive ones meeting once and distant "
    "ones disjoint, induces a homomorphism from the braid group sending Artin "
    "generators to the chain twists (classical)"
)


def _chain_aliases(n: int) -> dict[str, Alias]:
    return {
        _CHAIN_NAMES[i - 1]: Alias(parse_word(f"s{i}"), f"twist about the {i}-th chain curve")
        for i in range(1, n)
    }


def _braid_model(n: int) -> BraidModel:
    aliases = _chain_aliases(n)
    citations = (f"B_{n} with the braid and far-commutation relations", _CHAIN_FACT)
    if n == 3:
        aliases["tc"] = Alias(
            parse_word("s1 s2") ** 6,
            "boundary twist of a one-holed torus around its twist chain: "
            "t_c = (t_a t_b)^6 (chain relation, classical)",
        )
        citations = (
            "the mapping class group of the one-holed torus is B_3, with the two "
            "chain twists t_a, t_b as Artin generators (classical)",
        ) + citations
    if n == 4:
        aliases["tde"] = Alias(
            parse_word("s1 s2 s3") ** 4,
            "product of the two boundary twists of a two-holed torus around its "
            "three-chain: t_d t_e = (t_a t_b t_c)^4 (chain relation, classical)",
        )
    return BraidModel(f"B{n}", n, aliases, citations)


_MIRROR_FACT_B3 = (
    "the one-holed torus admits an orientation-reversing involution fixing both "
    "chain curves; conjugating a twist by it yields the inverse twist, so "
    "r s_i r^-1 = s_i^-1"
)
_MIRROR_FACT_B4 = (
    "the two-holed torus admits an orientation-reversing involution exchanging "
    "the end curves of the three-chain and fixing the middle one; conjugation "
    "sends each chain twist to the inverse of its mirror image"
)
_PUSH_FACT = (
    "when the model subsurface embeds in a larger surface and the involution "
    "extends over it, every relation verified here pushes forward to the "
    "mapping class group of the larger surface"
)


@lru_cache(maxsize=None)
def get_model(name: str):
    """Look up a registered model by name."""
    if name in ("B2", "B3", "B4", "B5", "B6"):
        return _braid_model(int(name[1]))
    if name == "B3xZ2":
        base = get_model("B3")
        phi = {"s1": parse_word("s1^-1"), "s2": parse_word("s2^-1")}
        aliases = {
            "tgamma": Alias(
                parse_word("s1 s2") ** 6,
                "under an embedding of the one-holed torus with boundary glued to "
                "a curve gamma, the boundary twist (t_a t_b)^6 realizes t_gamma",
            )
        }
        return make_extension(base, phi, name, aliases, (_MIRROR_FACT_B3, _PUSH_FACT))
    if name == "B4xZ2":
        base = get_model("B4")
        phi = {
            "s1": parse_word("s3^-1"),
            "s2": parse_word("s2^-1"),
            "s3": parse_word("s1^-1"),
        }
        aliases = {
            "tgamma": Alias(
                parse_word("s1 s2 s3") ** 4,
                "capping one boundary of the two-holed torus with a Moebius band "
                "kills that boundary twist; the other boundary is glued to gamma, "
                "so (t_a t_b t_c)^4 = t_d t_e realizes t_gamma",
            )
        }
        return make_extension(base, phi, name, aliases, (_MIRROR_FACT_B4, _PUSH_FACT))
    if name == "ZsemiZ":
        aliases = {
            "tgamma": Alias(
                parse_word("y^2"),
                "the boundary twist of a one-holed Klein bottle is the square of "
                "the crosscap transposition y (classical)",
            )
        }
        citations = (
            "y is conjugate to y^-1 by a diffeomorphism f of the ambient surface, "
            "so the subgroup generated by their classes is a quotient of "
            "<y, f | f y f^-1 = y^-1>",
        )
        return DihedralModel(name, aliases, citations)
    raise ModelError(f"unknown model {name!r}")


def registered_models() -> tuple[str, ...]:
    return ("B3", "B4", "B3xZ2", "B4xZ2", "ZsemiZ")
