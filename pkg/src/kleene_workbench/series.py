"""Truncated power series over a registered instance: every word up to a length bound L."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import re
from typing import TYPE_CHECKING, Final, override

from frozendict import frozendict

from kleene_workbench import exceptions, semiring
from kleene_workbench.schemas import reports

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

    from kleene_workbench import ids

logger = logging.getLogger(__name__)

type Word = tuple[str, ...]

EPSILON: Final[Word] = ()
EPSILON_TEXT: Final = "eps"
RESERVED_WORDS: Final = frozenset({"e", EPSILON_TEXT, semiring.INF.value})
LETTER_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class InvalidAlphabetError(exceptions.BadParameterError):
    """Invalid alphabet error."""

    def __init__(self, *, letters: Iterable[str], reason: str) -> None:
        super().__init__(f"Invalid alphabet {','.join(letters)!r}: {reason}")


class UnknownLetterError(exceptions.BadParameterError):
    """Letter outside the alphabet."""

    def __init__(self, *, letter: str, alphabet: Alphabet) -> None:
        super().__init__(f"Letter {letter!r} is not in the alphabet {alphabet}")


class WordTooLongError(exceptions.BadParameterError):
    """Word longer than the truncation bound."""

    def __init__(self, *, word: str, bound: int) -> None:
        super().__init__(f"Word {word!r} is longer than the bound {bound}")


class SeriesMismatchError(exceptions.BadParameterError):
    """Series over different instances, alphabets or bounds were combined."""

    def __init__(self, *, left: TruncatedSeries, right: TruncatedSeries) -> None:
        super().__init__(
            f"Cannot combine a series over {left.instance}/{left.alphabet}/L={left.bound} "
            f"with one over {right.instance}/{right.alphabet}/L={right.bound}",
        )


@dataclasses.dataclass(frozen=True, slots=True)
class Alphabet:
    """Ordered set of letters; the order fixes the length-lexicographic order of words."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise InvalidAlphabetError(letters=self.letters, reason="it is empty")
        if len(set(self.letters)) != len(self.letters):
            raise InvalidAlphabetError(letters=self.letters, reason="letters repeat")
        for letter in self.letters:
            if not LETTER_PATTERN.match(letter):
                raise InvalidAlphabetError(letters=self.letters, reason=f"{letter!r} is not an identifier")
            if letter in RESERVED_WORDS:
                raise InvalidAlphabetError(letters=self.letters, reason=f"{letter!r} is reserved")

    @classmethod
    def parse(cls, text: str) -> Alphabet:
        """Parse a comma-separated letter list such as ``a,b``."""
        return cls(tuple(part.strip() for part in text.split(",")))

    def __contains__(self, letter: object) -> bool:
        return letter in self.letters

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @override
    def __str__(self) -> str:
        return ",".join(self.letters)

    def check_word(self, word: Word) -> None:
        for letter in word:
            if letter not in self.letters:
                raise UnknownLetterError(letter=letter, alphabet=self)

    def words(self, bound: int) -> Iterator[Word]:
        """All words of length at most ``bound`` in length-lexicographic order."""
        for length in range(bound + 1):
            yield from itertools.product(self.letters, repeat=length)

    def format_word(self, word: Word) -> str:
        """Render ε as ``eps``; join letters directly when all are single characters."""
        if not word:
            return EPSILON_TEXT
        separator = "" if all(len(letter) == 1 for letter in self.letters) else "."
        return separator.join(word)

    def sort_key(self, word: Word) -> tuple[int, tuple[int, ...]]:
        return len(word), tuple(self.letters.index(letter) for letter in word)


def format_word(word: Word, alphabet: Alphabet) -> str:
    return alphabet.format_word(word)


@dataclasses.dataclass(frozen=True, slots=True)
class TruncatedSeries:
    """Finite map from words of length ≤ ``bound`` to values; absent words have coefficient zero.

    Zero coefficients are never stored, so two series are equal exactly when
    their coefficients agree on every word up to the bound.
    """

    instance: ids.SemiringId
    alphabet: Alphabet
    bound: int
    coeffs: frozendict[Word, semiring.SemiringValue] = dataclasses.field(default_factory=frozendict)

    def __post_init__(self) -> None:
        if self.bound < 0:
            msg = f"Truncation bound must be non-negative, got {self.bound}"
            raise exceptions.BadParameterError(msg)
        for word, value in self.coeffs.items():
            self.alphabet.check_word(word)
            if len(word) > self.bound:
                raise WordTooLongError(word=self.alphabet.format_word(word), bound=self.bound)
            if value.instance != self.instance:
                raise semiring.InstanceMismatchError(left=self.instance, right=value.instance)
        nonzero = frozendict({w: v for w, v in self.coeffs.items() if not v.is_zero})
        object.__setattr__(self, "coeffs", nonzero)

    @classmethod
    def zero(cls, instance: ids.SemiringId, alphabet: Alphabet, bound: int) -> TruncatedSeries:
        return cls(instance, alphabet, bound)

    @classmethod
    def constant(cls, k: semiring.SemiringValue, alphabet: Alphabet, bound: int) -> TruncatedSeries:
        """The series k·ε."""
        return cls(k.instance, alphabet, bound, frozendict({EPSILON: k}))

    @classmethod
    def one(cls, instance: ids.SemiringId, alphabet: Alphabet, bound: int) -> TruncatedSeries:
        return cls.constant(semiring.one(instance), alphabet, bound)

    @classmethod
    def letter(cls, instance: ids.SemiringId, alphabet: Alphabet, bound: int, letter: str) -> TruncatedSeries:
        if letter not in alphabet:
            raise UnknownLetterError(letter=letter, alphabet=alphabet)
        return cls.characteristic(instance, alphabet, bound, [(letter,)])

    @classmethod
    def characteristic(
        cls,
        instance: ids.SemiringId,
        alphabet: Alphabet,
        bound: int,
        language: Iterable[Word],
    ) -> TruncatedSeries:
        """Coefficient one on every word of ``language``, zero elsewhere."""
        e = semiring.one(instance)
        coeffs = frozendict({word: e for word in language if len(word) <= bound})
        return cls(instance, alphabet, bound, coeffs)

    def coeff(self, word: Word) -> semiring.SemiringValue:
        if len(word) > self.bound:
            raise WordTooLongError(word=self.alphabet.format_word(word), bound=self.bound)
        self.alphabet.check_word(word)
        value = self.coeffs.get(word)
        return semiring.zero(self.instance) if value is None else value

    def __getitem__(self, word: Word) -> semiring.SemiringValue:
        return self.coeff(word)

    def support(self) -> list[Word]:
        """Words with a nonzero coefficient, in length-lexicographic order."""
        return sorted(self.coeffs, key=self.alphabet.sort_key)

    def items(self) -> list[tuple[Word, semiring.SemiringValue]]:
        return [(word, self.coeffs[word]) for word in self.support()]

    @property
    def is_proper(self) -> bool:
        return EPSILON not in self.coeffs

    def constant_term(self) -> semiring.SemiringValue:
        return self.coeff(EPSILON)

    def proper_part(self) -> TruncatedSeries:
        return self._with({w: v for w, v in self.coeffs.items() if w})

    def _with(self, coeffs: Mapping[Word, semiring.SemiringValue], bound: int | None = None) -> TruncatedSeries:
        return TruncatedSeries(self.instance, self.alphabet, self.bound if bound is None else bound, frozendict(coeffs))

    def check_compatible(self, other: TruncatedSeries) -> None:
        if (self.instance, self.alphabet, self.bound) != (other.instance, other.alphabet, other.bound):
            raise SeriesMismatchError(left=self, right=other)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self.check_compatible(other)
        coeffs = dict(self.coeffs)
        for word, value in other.coeffs.items():
            coeffs[word] = coeffs[word] + value if word in coeffs else value
        return self._with(coeffs)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        """Cauchy product: (r·s, w) is the sum of (r, u)(s, v) over all uv = w."""
        self.check_compatible(other)
        coeffs: dict[Word, semiring.SemiringValue] = {}
        for u, x in self.coeffs.items():
            for v, y in other.coeffs.items():
                if len(u) + len(v) > self.bound:
                    continue
                w = u + v
                coeffs[w] = coeffs[w] + x * y if w in coeffs else x * y
        return self._with(coeffs)

    def scale(self, k: semiring.SemiringValue) -> TruncatedSeries:
        if k.instance != self.instance:
            raise semiring.InstanceMismatchError(left=self.instance, right=k.instance)
        return self._with({w: k * v for w, v in self.coeffs.items()})

    def star(self) -> TruncatedSeries:
        """Star by enumerating factorizations into nonempty blocks.

        With c = (r, ε)*, (r*, ε) = c and for w ≠ ε, (r*, w) is the sum over all
        w = w_1 … w_n with every w_i ≠ ε of c (r, w_1) c (r, w_2) … (r, w_n) c.
        """
        c = self.constant_term().star()
        coeffs = {EPSILON: c}
        for word in self.alphabet.words(self.bound):
            if not word:
                continue
            acc = semiring.zero(self.instance)
            for cuts in itertools.product((False, True), repeat=len(word) - 1):
                term = c
                start = 0
                for end, cut in enumerate((*cuts, True), start=1):
                    if cut:
                        term = term * self.coeff(word[start:end]) * c
                        start = end
                acc += term
            coeffs[word] = acc
        return self._with(coeffs)

    def power(self, n: int) -> TruncatedSeries:
        result = TruncatedSeries.one(self.instance, self.alphabet, self.bound)
        for _ in range(n):
            result *= self
        return result

    def geometric_star(self) -> TruncatedSeries:
        """The partial sum r⁰ + r¹ + … + r^L; equals the star when r is proper."""
        acc = TruncatedSeries.zero(self.instance, self.alphabet, self.bound)
        term = TruncatedSeries.one(self.instance, self.alphabet, self.bound)
        for _ in range(self.bound + 1):
            acc += term
            term *= self
        return acc

    def restrict(self, bound: int) -> TruncatedSeries:
        """Drop every coefficient above a smaller bound."""
        if bound > self.bound:
            msg = f"Cannot extend a series truncated at {self.bound} to {bound}"
            raise exceptions.BadParameterError(msg)
        return self._with({w: v for w, v in self.coeffs.items() if len(w) <= bound}, bound)

    def leq(self, other: TruncatedSeries) -> bool:
        """Pointwise order."""
        self.check_compatible(other)
        return all(self.coeff(w).leq(other.coeff(w)) for w in self.coeffs.keys() | other.coeffs.keys())

    def to_dict(self) -> dict[str, str]:
        """Nonzero coefficients keyed by rendered word, in length-lexicographic order."""
        return {self.alphabet.format_word(w): str(v) for w, v in self.items()}

    def lines(self) -> list[str]:
        return [f"{word}: {value}" for word, value in self.to_dict().items()]

    @override
    def __str__(self) -> str:
        return "\n".join(self.lines())


def coeff(r: TruncatedSeries, w: Word) -> semiring.SemiringValue:
    return r.coeff(w)


def ser_add(r: TruncatedSeries, s: TruncatedSeries) -> TruncatedSeries:
    return r + s


def ser_mul(r: TruncatedSeries, s: TruncatedSeries) -> TruncatedSeries:
    return r * s


def ser_scale(k: semiring.SemiringValue, r: TruncatedSeries) -> TruncatedSeries:
    return r.scale(k)


def ser_star(r: TruncatedSeries) -> TruncatedSeries:
    return r.star()


def ser_leq(r: TruncatedSeries, s: TruncatedSeries) -> bool:
    return r.leq(s)


def geometric_star(r: TruncatedSeries) -> TruncatedSeries:
    return r.geometric_star()


def restrict(r: TruncatedSeries, bound: int) -> TruncatedSeries:
    return r.restrict(bound)


def proper_part(r: TruncatedSeries) -> TruncatedSeries:
    return r.proper_part()


def constant_term(r: TruncatedSeries) -> semiring.SemiringValue:
    return r.constant_term()


def support(r: TruncatedSeries) -> list[Word]:
    return r.support()


def characteristic(
    instance: ids.SemiringId,
    alphabet: Alphabet,
    bound: int,
    language: Iterable[Word],
) -> TruncatedSeries:
    return TruncatedSeries.characteristic(instance, alphabet, bound, language)


def char_word(instance: ids.SemiringId, alphabet: Alphabet, bound: int, word: Word) -> TruncatedSeries:
    alphabet.check_word(word)
    return TruncatedSeries.characteristic(instance, alphabet, bound, [word])


def compare(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries) -> reports.SeriesEqualityReport:
    lhs.check_compatible(rhs)
    return reports.SeriesEqualityReport(name=name, bound=lhs.bound, lhs=lhs.to_dict(), rhs=rhs.to_dict())


def check_scalar_star(k: semiring.SemiringValue, alphabet: Alphabet, bound: int) -> reports.SeriesEqualityReport:
    """Compare (k·ε)* computed in the series semiring with k*·ε."""
    lhs = TruncatedSeries.constant(k, alphabet, bound).star()
    rhs = TruncatedSeries.constant(k.star(), alphabet, bound)
    logger.debug("Scalar star check for %s at L=%d", k, bound)
    return compare("scalar-star", lhs, rhs)
