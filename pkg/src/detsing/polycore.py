"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` stores a map from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients.  Every polynomial carries the
:class:`VarSet` it lives in; the exponent tuple is indexed by that set.

Expression grammar accepted by :func:`parse_poly`::

    expr   := term (('+'|'-') term)*
    term   := unary ('*' unary)*
    unary  := ('+'|'-') unary | factor
    factor := atom ('^' uint)?
    atom   := rational | ident | '(' expr ')'

where ``rational`` is ``digits`` or ``digits/digits``.  Implicit
multiplication is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class PolySyntaxError(ValueError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class UnknownVariableError(PolySyntaxError):
    def __init__(self, name: str, pos: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown variable {name!r}", pos, text)


class VarSet:
    """Ordered set of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index = {}
        for i, name in enumerate(names):
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in index:
                raise ValueError(f"duplicate variable name {name!r}")
            index[name] = i
        self.names = names
        self._index = index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in {list(self.names)}") from None

    def extend(self, names: Iterable[str]) -> "VarSet":
        return VarSet(self.names + tuple(names))

    def without(self, names: Iterable[str]) -> "VarSet":
        drop = set(names)
        return VarSet(n for n in self.names if n not in drop)

    def fresh(self, stem: str = "t") -> str:
        """A variable name not present in this set."""
        name = stem
        k = 0
        while name in self._index:
            k += 1
            name = f"{stem}{k}"
        return name


def _grevlex_key(exps: Exponents):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarSet, terms: Mapping[Exponents, Scalar] = ()):
        n = len(vars)
        clean: Dict[Exponents, Fraction] = {}
        for exps, c in dict(terms).items():
            exps = tuple(exps)
            if len(exps) != n or any(k < 0 for k in exps):
                raise ValueError(f"bad exponent tuple {exps} for {n} variables")
            c = Fraction(c)
            if c:
                clean[exps] = c
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: VarSet, terms: Dict[Exponents, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, vars: VarSet) -> "Polynomial":
        return cls._raw(vars, {})

    @classmethod
    def constant(cls, vars: VarSet, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def one(cls, vars: VarSet) -> "Polynomial":
        return cls.constant(vars, 1)

    @classmethod
    def var(cls, vars: VarSet, name: str) -> "Polynomial":
        i = vars.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls._raw(vars, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, vars: VarSet, exps: Exponents, c: Scalar = 1) -> "Polynomial":
        return cls(vars, {tuple(exps): c})

    # predicates and accessors

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def used_vars(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.vars.names[i] for i in sorted(used))

    def coefficient_of(self, name: str, power: int = 1) -> "Polynomial":
        """Coefficient of ``name**power`` viewing self as a polynomial in ``name``."""
        i = self.vars.index(name)
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Polynomial._raw(self.vars, out)

    def sorted_terms(self):
        """Terms in descending graded-reverse-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grevlex_key(kv[0]), reverse=True)

    def to_vars(self, vars: VarSet) -> "Polynomial":
        """Re-express in another VarSet, matching variables by name."""
        if vars == self.vars:
            return self
        used = self.used_vars()
        missing = [v for v in used if v not in vars]
        if missing:
            raise ValueError(f"variables {missing} not in target {list(vars.names)}")
        pos = [(self.vars.index(v), vars.index(v)) for v in used]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for src, dst in pos:
                ne[dst] = e[src]
            out[tuple(ne)] = c
        return Polynomial._raw(vars, out)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise ValueError("polynomials live in different VarSets")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Polynomial.zero(self.vars)
            return Polynomial._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        # scalar division only
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.vars, other).terms
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if p == 1 else f"{name}^{p}"
                for name, p in zip(self.vars.names, e) if p
            )
            a = abs(c)
            if not mono:
                body = _format_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_format_coeff(a)}*{mono}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


# operations


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    i = p.vars.index(name)
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return Polynomial._raw(p.vars, out)


def evaluate(p: Polynomial, point: Union[Mapping[str, Scalar], Sequence[Scalar]]) -> Fraction:
    """Exact value of ``p`` at ``point`` (a name->value map or a vector in VarSet order)."""
    if isinstance(point, Mapping):
        values = [Fraction(point[n]) if n in point else None for n in p.vars.names]
        for e in p.terms:
            for i, k in enumerate(e):
                if k and values[i] is None:
                    raise KeyError(f"point does not assign {p.vars.names[i]!r}")
    else:
        if len(point) != len(p.vars):
            raise ValueError("point length does not match VarSet")
        values = [Fraction(v) for v in point]
    total = Fraction(0)
    for e, c in p.terms.items():
        term = c
        for v, k in zip(values, e):
            if k:
                term *= v ** k
        total += term
    return total


def substitute(p: Polynomial, bindings: Mapping[str, Polynomial],
               target: VarSet = None) -> Polynomial:
    """Simultaneously replace variables of ``p`` by polynomials.

    Unbound variables are carried over by name into ``target`` (default: the
    VarSet of the bindings, or of ``p`` when there are none).
    """
    if target is None:
        target = next(iter(bindings.values())).vars if bindings else p.vars
    images = []
    for name in p.vars.names:
        if name in bindings:
            img = bindings[name]
            if img.vars != target:
                img = img.to_vars(target)
            images.append(img)
        elif name in target:
            images.append(Polynomial.var(target, name))
        else:
            images.append(None)
    powers: Dict[Tuple[int, int], Polynomial] = {}

    def power(i, k):
        if (i, k) not in powers:
            if images[i] is None:
                raise ValueError(f"variable {p.vars.names[i]!r} has no image in target")
            powers[(i, k)] = images[i] ** k
        return powers[(i, k)]

    result = Polynomial.zero(target)
    for e, c in p.terms.items():
        term = Polynomial.constant(target, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: VarSet):
        self.text = text
        self.vars = vars
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return PolySyntaxError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.factor()

    def factor(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                raise self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        nxt = self.peek()
        if nxt[0] in ("num", "name") or nxt[:2] == ("op", "("):
            raise self.error("implicit multiplication is not allowed")
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Polynomial.constant(self.vars, Fraction(val))
        if kind == "name":
            if val not in self.vars:
                raise UnknownVariableError(val, pos, self.text)
            return Polynomial.var(self.vars, val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return p
        raise self.error("expected a number, variable or '('", tok)


def parse_poly(text: str, vars: Union[VarSet, Sequence[str]]) -> Polynomial:
    """Parse ``text`` into a canonical polynomial over ``vars``."""
    if not isinstance(vars, VarSet):
        vars = VarSet(vars)
    return _Parser(text, vars).parse()


def polys(vars: Union[VarSet, Sequence[str]], *texts: str):
    """Parse several expressions over one VarSet."""
    if not isinstance(vars, VarSet):
        vars = VarSet(vars)
    return [parse_poly(t, vars) for t in texts]
