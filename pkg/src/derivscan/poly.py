"""Sparse multivariate polynomial arithmetic over exact rationals.

A polynomial in n variables is a finite map from exponent vectors
(length-n tuples of non-negative ints) to nonzero Fraction coefficients.
All arithmetic is exact; nothing here ever touches floating point.
Values are immutable and hashable, so they are safe to share across
threads and to use as dict keys.

Variables are written ``x1 .. xn``.  The canonical text form orders terms
by descending graded-lexicographic order (higher total degree first, ties
broken by comparing exponent tuples left to right) and always writes
explicit ``*`` and ``^``::

    -x1*x2 + 1
    3/2*x1^2*x3

The parser accepts exactly this grammar: integer and ``p/q`` rational
literals, variables ``x1 .. xn``, the operators ``+ - * ^``, and
parentheses.  Implicit multiplication (``x1x2``, ``2x1``) is a syntax
error.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]

#: Degree of the zero polynomial.  A real minus infinity keeps degree
#: arithmetic honest: it absorbs addition and loses every max().
MINUS_INFINITY: float = float("-inf")

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ArityError(ValueError):
    """Operands belong to polynomial rings with different variable counts."""


class ParseError(ValueError):
    """Input text does not conform to the polynomial grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    """Sort key realizing graded lexicographic order (ascending)."""
    return (sum(exponents), exponents)


def _raw(arity: int, terms: dict) -> "Polynomial":
    # Trusted constructor: terms must already be canonical.
    p = object.__new__(Polynomial)
    p._arity = arity
    p._terms = terms
    p._hash = None
    return p


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], Scalar] = ()):
        if arity < 1:
            raise ValueError(f"arity must be >= 1, got {arity}")
        canonical: dict[Exponents, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exponents, coeff in items:
            key = tuple(exponents)
            if len(key) != arity:
                raise ArityError(
                    f"exponent vector {key} has length {len(key)}, expected {arity}"
                )
            if any(e < 0 or not isinstance(e, int) for e in key):
                raise ValueError(f"exponents must be non-negative ints, got {key}")
            value = Fraction(coeff)
            if value:
                value = canonical.get(key, _ZERO) + value
                if value:
                    canonical[key] = value
                else:
                    del canonical[key]
        self._arity = arity
        self._terms = canonical
        self._hash = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "Polynomial":
        return _raw(arity, {})

    @classmethod
    def constant(cls, arity: int, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        if not value:
            return _raw(arity, {})
        return _raw(arity, {(0,) * arity: value})

    @classmethod
    def variable(cls, arity: int, index: int) -> "Polynomial":
        """The polynomial ``x<index>`` (1-based index)."""
        if not 1 <= index <= arity:
            raise ValueError(f"variable index {index} out of range 1..{arity}")
        exponents = [0] * arity
        exponents[index - 1] = 1
        return _raw(arity, {tuple(exponents): _ONE})

    @classmethod
    def monomial(cls, arity: int, exponents: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(arity, {tuple(exponents): coeff})

    # -- basic protocol ---------------------------------------------------

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        """Read-only view of the term map (no zero coefficients stored)."""
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._arity == other._arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self._arity, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._arity, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"Polynomial({self._arity}, {str(self)!r})"

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._arity, other)
        return NotImplemented

    def _check_arity(self, other: "Polynomial") -> None:
        if self._arity != other._arity:
            raise ArityError(f"arity mismatch: {self._arity} vs {other._arity}")

    # -- ring arithmetic --------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_arity(other)
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            total = terms.get(key, _ZERO) + coeff
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return _raw(self._arity, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return _raw(self._arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_arity(other)
        if not self._terms or not other._terms:
            return _raw(self._arity, {})
        out: dict[Exponents, Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                key = tuple(a + b for a, b in zip(ka, kb))
                total = out.get(key, _ZERO) + ca * cb
                if total:
                    out[key] = total
                else:
                    del out[key]
        return _raw(self._arity, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative int, got {exponent!r}")
        result = Polynomial.constant(self._arity, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = Fraction(factor)
        if not factor:
            return _raw(self._arity, {})
        return _raw(self._arity, {k: c * factor for k, c in self._terms.items()})

    # -- calculus and structure -------------------------------------------

    def partial_derivative(self, index: int) -> "Polynomial":
        """Formal partial derivative with respect to ``x<index>`` (1-based)."""
        if not 1 <= index <= self._arity:
            raise ValueError(f"variable index {index} out of range 1..{self._arity}")
        i = index - 1
        out: dict[Exponents, Fraction] = {}
        for key, coeff in self._terms.items():
            e = key[i]
            if e:
                dropped = key[:i] + (e - 1,) + key[i + 1 :]
                out[dropped] = coeff * e
        return _raw(self._arity, out)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at ``x_i = images[i-1]``; a ring homomorphism in self."""
        if len(images) != self._arity:
            raise ArityError(
                f"need {self._arity} substitution images, got {len(images)}"
            )
        if not images:
            raise ArityError("empty image list")
        target = images[0].arity
        for g in images:
            if g.arity != target:
                raise ArityError("substitution images must share one arity")
        powers: list[list[Polynomial]] = [[Polynomial.constant(target, 1)] for _ in images]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= k:
                cache.append(cache[-1] * images[i])
            return cache[k]

        out = Polynomial.zero(target)
        for key, coeff in self._terms.items():
            acc = Polynomial.constant(target, coeff)
            for i, e in enumerate(key):
                if e:
                    acc = acc * power(i, e)
            out = out + acc
        return out

    def rename_variables(self, new_arity: int, mapping: Mapping[int, int]) -> "Polynomial":
        """Move each variable ``x_i`` to ``x_{mapping[i]}`` in a ring of the
        given arity.  Every variable that actually occurs must be mapped,
        and no two occurring variables may collide."""
        out: dict[Exponents, Fraction] = {}
        for key, coeff in self._terms.items():
            fresh = [0] * new_arity
            for i, e in enumerate(key, start=1):
                if not e:
                    continue
                j = mapping.get(i)
                if j is None:
                    raise ValueError(f"variable x{i} occurs but is not mapped")
                if not 1 <= j <= new_arity:
                    raise ValueError(f"mapped index {j} out of range 1..{new_arity}")
                if fresh[j - 1]:
                    raise ValueError(f"two variables map onto x{j}")
                fresh[j - 1] = e
            out[tuple(fresh)] = coeff
        return _raw(new_arity, out)

    def degree_in(self, index: int) -> Union[int, float]:
        """Max exponent of ``x<index>``; MINUS_INFINITY for the zero polynomial."""
        if not 1 <= index <= self._arity:
            raise ValueError(f"variable index {index} out of range 1..{self._arity}")
        if not self._terms:
            return MINUS_INFINITY
        i = index - 1
        return max(key[i] for key in self._terms)

    def total_degree(self) -> Union[int, float]:
        if not self._terms:
            return MINUS_INFINITY
        return max(sum(key) for key in self._terms)

    def leading_term(self) -> tuple[Exponents, Fraction]:
        """Greatest term under graded lexicographic order; error on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = max(self._terms, key=grlex_key)
        return key, self._terms[key]

    def coefficient_of_power(self, index: int, power: int) -> "Polynomial":
        """Collect the terms with ``x<index>`` raised exactly to ``power``
        and strip that variable from them.  The result lives in the same
        ring with the chosen variable absent."""
        if not 1 <= index <= self._arity:
            raise ValueError(f"variable index {index} out of range 1..{self._arity}")
        i = index - 1
        out: dict[Exponents, Fraction] = {}
        for key, coeff in self._terms.items():
            if key[i] == power:
                out[key[:i] + (0,) + key[i + 1 :]] = coeff
        return _raw(self._arity, out)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self._arity}

    def constant_value(self) -> Fraction:
        if not self._terms:
            return _ZERO
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[(0,) * self._arity]


# -- canonical printing ----------------------------------------------------


def _monomial_string(exponents: Exponents, names: Sequence[str]) -> str:
    parts = []
    for i, e in enumerate(exponents):
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts)


def to_string(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text form: descending grlex, explicit ``*`` and ``^``.

    ``names`` overrides the default ``x1 .. xn`` variable names (used for
    report rendering; only the default names round-trip through parse).
    """
    if names is None:
        names = [f"x{i}" for i in range(1, p.arity + 1)]
    elif len(names) != p.arity:
        raise ArityError(f"need {p.arity} names, got {len(names)}")
    if not p:
        return "0"
    chunks: list[str] = []
    for key, coeff in p.sorted_terms():
        mono = _monomial_string(key, names)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)


# -- parsing ----------------------------------------------------------------

_TOKEN_KINDS = {"+", "-", "*", "^", "/", "(", ")"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_KINDS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable name needs an index, like x1", i)
            tokens.append(("var", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, arity: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.arity = arity

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str) -> tuple[str, str, int]:
        token = self.advance()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1] or 'end of input'!r}", token[2])
        return token

    def parse(self) -> Polynomial:
        result = self.expression()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return result

    def expression(self) -> Polynomial:
        negative = False
        if self.peek()[0] == "-":
            self.advance()
            negative = True
        elif self.peek()[0] == "+":
            self.advance()
        total = self.term()
        if negative:
            total = -total
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            total = total + rhs if op == "+" else total - rhs
        return total

    def term(self) -> Polynomial:
        total = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            total = total * self.factor()
        return total

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            token = self.expect("int")
            base = base ** int(token[1])
        return base

    def atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "int":
            numerator = int(value)
            if self.peek()[0] == "/":
                self.advance()
                den_token = self.expect("int")
                denominator = int(den_token[1])
                if denominator == 0:
                    raise ParseError("zero denominator", den_token[2])
                return Polynomial.constant(self.arity, Fraction(numerator, denominator))
            return Polynomial.constant(self.arity, numerator)
        if kind == "var":
            index = int(value[1:])
            if not 1 <= index <= self.arity:
                raise ParseError(
                    f"variable {value} out of range for arity {self.arity}", pos
                )
            return Polynomial.variable(self.arity, index)
        if kind == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text: str, arity: int) -> Polynomial:
    """Parse canonical polynomial text into a Polynomial of the given arity."""
    if arity < 1:
        raise ValueError(f"arity must be >= 1, got {arity}")
    return _Parser(text, arity).parse()
