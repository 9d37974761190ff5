"""Exact sparse polynomials in x, y, z, t and the parameter s.

A polynomial is a finite map from exponent vectors (e_x, e_y, e_z, e_t, e_s)
to rational coefficients.  Zero coefficients are never stored, so every
polynomial has exactly one representation and equality is a dictionary
comparison.  Coefficients are ``fractions.Fraction`` (arbitrary-precision),
which keeps determinant expansions and Jacobiator sums exact.

x, y, z, t are coordinates and may be differentiated; s is a deformation
parameter and is deliberately excluded from :class:`Var`, so no code path can
ever request d/ds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

__all__ = [
    "Expr",
    "Var",
    "Point4",
    "ParseError",
    "parse",
    "equals",
    "MAX_EXPONENT",
]

VAR_NAMES = ("x", "y", "z", "t", "s")

# Exponent of any single variable in a parsed literal; guards against typos
# like x^400 silently producing megabyte monomials.
MAX_EXPONENT = 64

Monomial = tuple[int, int, int, int, int]
Scalar = Union[int, Fraction]

_ZERO_MONOMIAL: Monomial = (0, 0, 0, 0, 0)


class Var(enum.Enum):
    """The four differentiation variables.  s is a parameter, not a Var."""

    X = 0
    Y = 1
    Z = 2
    T = 3

    @property
    def index(self) -> int:
        return self.value

    @property
    def name_lower(self) -> str:
        return VAR_NAMES[self.value]


VARS = (Var.X, Var.Y, Var.Z, Var.T)


@dataclass(frozen=True)
class Point4:
    """A point of R^4 together with a bound value for the parameter s."""

    x: float
    y: float
    z: float
    t: float
    s: float = 0.0

    def coords(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.t)

    def values(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y, self.z, self.t, self.s)


def _grlex_key(monomial: Monomial) -> tuple:
    # Graded lexicographic with x > y > z > t > s: total degree first,
    # then componentwise exponents.
    return (sum(monomial), monomial)


class Expr:
    """An immutable multivariate polynomial in canonical form."""

    __slots__ = ("_terms", "_hash", "_compiled")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        canon: dict[Monomial, Fraction] = {}
        if terms:
            for monomial, coeff in terms.items():
                if len(monomial) != 5 or any(
                    not isinstance(e, int) or e < 0 for e in monomial
                ):
                    raise ValueError(f"bad exponent vector {monomial!r}")
                q = Fraction(coeff)
                if q:
                    key = tuple(monomial)
                    acc = canon.get(key)
                    canon[key] = acc + q if acc is not None else q
                    if not canon[key]:
                        del canon[key]
        object.__setattr__(self, "_terms", canon)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_compiled", None)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return Expr()

    @staticmethod
    def one() -> "Expr":
        return Expr({_ZERO_MONOMIAL: 1})

    @staticmethod
    def constant(value: Scalar) -> "Expr":
        return Expr({_ZERO_MONOMIAL: Fraction(value)})

    @staticmethod
    def variable(which: Union[str, Var, int]) -> "Expr":
        """The polynomial x, y, z, t or s (s is allowed as a symbol here)."""
        if isinstance(which, Var):
            idx = which.index
        elif isinstance(which, int):
            idx = which
        else:
            try:
                idx = VAR_NAMES.index(which)
            except ValueError:
                raise ValueError(f"unknown variable {which!r}") from None
        if not 0 <= idx < 5:
            raise ValueError(f"variable index {idx} out of range")
        exps = [0, 0, 0, 0, 0]
        exps[idx] = 1
        return Expr({tuple(exps): 1})

    @staticmethod
    def monomial(exponents: Iterable[int], coeff: Scalar = 1) -> "Expr":
        return Expr({tuple(exponents): Fraction(coeff)})

    # -- ring structure -----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (deterministic)."""
        for monomial in sorted(self._terms, key=_grlex_key, reverse=True):
            yield monomial, self._terms[monomial]

    def __len__(self) -> int:
        return len(self._terms)

    def _coerce(self, other) -> "Expr | None":
        if isinstance(other, Expr):
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.constant(other)
        return None

    def __add__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for monomial, coeff in rhs._terms.items():
            acc = out.get(monomial)
            total = coeff if acc is None else acc + coeff
            if total:
                out[monomial] = total
            elif acc is not None:
                del out[monomial]
        return Expr(out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Expr":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in rhs._terms.items():
                monomial = (
                    m1[0] + m2[0],
                    m1[1] + m2[1],
                    m1[2] + m2[2],
                    m1[3] + m2[3],
                    m1[4] + m2[4],
                )
                acc = out.get(monomial)
                total = c1 * c2 if acc is None else acc + c1 * c2
                if total:
                    out[monomial] = total
                elif acc is not None:
                    del out[monomial]
        return Expr(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Expr.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self._terms.items()))
            )
        return self._hash

    # -- calculus and evaluation ----------------------------------------

    def differentiate(self, var: Var) -> "Expr":
        """Exact partial derivative with respect to one of x, y, z, t."""
        if not isinstance(var, Var):
            raise TypeError("differentiate expects a Var (s is a parameter)")
        i = var.index
        out: dict[Monomial, Fraction] = {}
        for monomial, coeff in self._terms.items():
            e = monomial[i]
            if e:
                lowered = list(monomial)
                lowered[i] = e - 1
                out[tuple(lowered)] = coeff * e
        return Expr(out)

    def evaluate(self, point: Point4) -> float:
        """Value at a point, summing terms in fixed graded-lex order."""
        vals = point.values()
        total = 0.0
        for monomial, coeff in self.terms():
            term = float(coeff)
            for v, e in zip(vals, monomial):
                if e:
                    term *= v**e
            total += term
        return total

    def evaluate_batch(self, coords: np.ndarray, s: float = 0.0) -> np.ndarray:
        """Vectorised evaluation on an (n, 4) array of (x, y, z, t) rows."""
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 4:
            raise ValueError("coords must have shape (n, 4)")
        total = np.zeros(coords.shape[0])
        for monomial, coeff in self.terms():
            term = np.full(coords.shape[0], float(coeff))
            for i in range(4):
                if monomial[i]:
                    term = term * coords[:, i] ** monomial[i]
            if monomial[4]:
                term = term * s ** monomial[4]
            total += term
        return total

    def compiled(self):
        """A fast ``f(x, y, z, t, s) -> float`` closure (cached)."""
        if self._compiled is None:
            if self.is_zero:
                fn = lambda x, y, z, t, s: 0.0  # noqa: E731
            else:
                body = str(self).replace("^", "**")
                fn = eval(f"lambda x, y, z, t, s: ({body})")  # noqa: S307
            object.__setattr__(self, "_compiled", fn)
        return self._compiled

    def substitute_s(self, value: Scalar) -> "Expr":
        """Exactly substitute a rational value for the parameter s."""
        q = Fraction(value)
        out: dict[Monomial, Fraction] = {}
        for monomial, coeff in self._terms.items():
            scaled = coeff * q ** monomial[4]
            key = monomial[:4] + (0,)
            acc = out.get(key)
            total = scaled if acc is None else acc + scaled
            if total:
                out[key] = total
            elif acc is not None:
                del out[key]
        return Expr(out)

    # -- structure queries ----------------------------------------------

    def degree_xyzt(self) -> int:
        """Total degree counting x, y, z, t only (s is a constant); -1 for 0."""
        if not self._terms:
            return -1
        return max(sum(m[:4]) for m in self._terms)

    def coordinate_degree_split(self) -> dict[int, "Expr"]:
        """Split into homogeneous parts by xyzt-degree (s kept symbolic)."""
        buckets: dict[int, dict[Monomial, Fraction]] = {}
        for monomial, coeff in self._terms.items():
            buckets.setdefault(sum(monomial[:4]), {})[monomial] = coeff
        return {deg: Expr(part) for deg, part in buckets.items()}

    def coefficient_of(self, var: Union[str, Var]) -> "Expr":
        """Coefficient of the degree-one monomial in ``var`` (Expr in s)."""
        if isinstance(var, Var):
            idx = var.index
        else:
            idx = VAR_NAMES.index(var)
        out: dict[Monomial, Fraction] = {}
        for monomial, coeff in self._terms.items():
            if monomial[idx] == 1 and sum(monomial[:4]) == 1:
                out[(0, 0, 0, 0, monomial[4])] = coeff
        return Expr(out)

    def uses_s(self) -> bool:
        return any(m[4] for m in self._terms)

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for idx, (monomial, coeff) in enumerate(self.terms()):
            factors = []
            for name, e in zip(VAR_NAMES, monomial):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = _format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_rational(mag)] + factors)
            if idx == 0:
                pieces.append(body if coeff > 0 else "-" + body)
            else:
                pieces.append((" + " if coeff > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Expr({self})"


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def equals(a: Expr, b: Expr) -> bool:
    """True iff a - b is the zero polynomial (exact, not numeric)."""
    return a == b


# -- parsing ---------------------------------------------------------------
#
# expr   := term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := base ('^' nat)?
# base   := var | rational | '(' expr ')' | '-' factor
# rational := int ('/' nat)?
#
# Whitespace is insignificant; implicit multiplication is rejected.


class ParseError(ValueError):
    """Syntax error with a 1-based column position."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        """(kind, value, 1-based column) of the next token; kind 'end' at EOF."""
        text, n = self.text, len(self.text)
        i = self.pos
        while i < n and text[i].isspace():
            i += 1
        self.pos = i
        if i >= n:
            return ("end", "", n + 1)
        ch = text[i]
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            return ("int", text[i:j], i + 1)
        if ch in "xyzts":
            return ("var", ch, i + 1)
        if ch in "+-*/^()":
            return (ch, ch, i + 1)
        raise ParseError(f"unexpected character {ch!r}", i + 1)

    def advance(self, token: tuple[str, str, int]) -> None:
        # peek() already skipped leading whitespace and left pos at the token.
        self.pos += len(token[1])


class _Parser:
    def __init__(self, text: str):
        self.tok = _Tokenizer(text)

    def parse(self) -> Expr:
        value = self.expr()
        kind, val, col = self.tok.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", col)
        return value

    def expr(self) -> Expr:
        value = self.term()
        while True:
            kind, _, _ = self.tok.peek()
            if kind == "+":
                self._eat("+")
                value = value + self.term()
            elif kind == "-":
                self._eat("-")
                value = value - self.term()
            else:
                return value

    def term(self) -> Expr:
        value = self.factor()
        while self.tok.peek()[0] == "*":
            self._eat("*")
            value = value * self.factor()
        return value

    def factor(self) -> Expr:
        base = self.base()
        if self.tok.peek()[0] == "^":
            self._eat("^")
            kind, digits, col = self.tok.peek()
            if kind != "int":
                raise ParseError("expected integer exponent after '^'", col)
            self._eat("int")
            exponent = int(digits)
            if exponent > MAX_EXPONENT:
                raise ParseError(
                    f"exponent {exponent} exceeds limit {MAX_EXPONENT}", col
                )
            return base**exponent
        return base

    def base(self) -> Expr:
        kind, value, col = self.tok.peek()
        if kind == "var":
            self._eat("var")
            return Expr.variable(value)
        if kind == "int":
            return Expr.constant(self.rational())
        if kind == "(":
            self._eat("(")
            inner = self.expr()
            k2, v2, c2 = self.tok.peek()
            if k2 != ")":
                raise ParseError(f"expected ')', found {v2!r}" if v2 else "expected ')'", c2)
            self._eat(")")
            return inner
        if kind == "-":
            self._eat("-")
            return -self.factor()
        raise ParseError(
            f"expected a variable, number or '(', found {value!r}" if value else "unexpected end of input",
            col,
        )

    def rational(self) -> Fraction:
        kind, digits, _ = self.tok.peek()
        assert kind == "int"
        self._eat("int")
        numerator = int(digits)
        if self.tok.peek()[0] == "/":
            self._eat("/")
            k2, d2, c2 = self.tok.peek()
            if k2 != "int":
                raise ParseError("expected integer denominator after '/'", c2)
            self._eat("int")
            denominator = int(d2)
            if denominator == 0:
                raise ParseError("zero denominator", c2)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def _eat(self, kind: str) -> None:
        token = self.tok.peek()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1]!r}", token[2])
        self.tok.advance(token)


def parse(text: str) -> Expr:
    """Parse an expression string into canonical form.

    Raises :class:`ParseError` (with a 1-based column) on malformed input
    or on an integer exponent above ``MAX_EXPONENT``.
    """
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    return _Parser(text).parse()


def is_finite_point(p: Point4) -> bool:
    return all(math.isfinite(v) for v in p.values())
