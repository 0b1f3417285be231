"""Groebner bases over Q: normal forms, elimination, saturation, dimension.

Plain Buchberger with the Gebauer-Moeller pair update (coprime and chain
criteria) and normal selection strategy.  Intended for desk-scale ideals;
the pair and degree caps in :class:`GroebnerLimits` turn runaway
computations into a :class:`ResourceLimitError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .polycore import Exponents, Polynomial, VarSet, _grevlex_key


class ResourceLimitError(RuntimeError):
    """A Groebner computation exceeded its configured pair or degree cap."""

    def __init__(self, message: str, pairs: int = 0, degree: int = 0):
        self.pairs = pairs
        self.degree = degree
        super().__init__(message)


@dataclass
class GroebnerLimits:
    max_pairs: int = 50_000
    max_degree: int = 40


DEFAULT_LIMITS = GroebnerLimits()


def set_default_limits(max_pairs: Optional[int] = None, max_degree: Optional[int] = None) -> None:
    if max_pairs is not None:
        DEFAULT_LIMITS.max_pairs = max_pairs
    if max_degree is not None:
        DEFAULT_LIMITS.max_degree = max_degree


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` or ``block`` (front block of variable indices
    compared first by grevlex, ties broken by grevlex on the rest)."""

    kind: str = "grevlex"
    front: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    @classmethod
    def block(cls, vars: VarSet, front: Iterable[str]) -> "MonomialOrder":
        return cls("block", tuple(sorted(vars.index(v) for v in front)))

    def key(self, exps: Exponents):
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "lex":
            return exps
        head = tuple(exps[i] for i in self.front)
        tail = tuple(e for i, e in enumerate(exps) if i not in self.front)
        return (_grevlex_key(head), _grevlex_key(tail))


GREVLEX = MonomialOrder()
LEX = MonomialOrder("lex")


@dataclass
class IdealBasis:
    generators: List[Polynomial]
    vars: VarSet
    order: MonomialOrder = GREVLEX
    is_groebner: bool = False

    def leading_monomials(self) -> List[Exponents]:
        return [max(g.terms, key=self.order.key) for g in self.generators]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


# internal dict-level helpers


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Exponents, b: Exponents) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Elem:
    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


def _reduce(f: Dict[Exponents, Fraction], basis: Sequence[_Elem], key) -> Dict[Exponents, Fraction]:
    """Full multivariate division remainder of ``f`` by ``basis``."""
    f = dict(f)
    r: Dict[Exponents, Fraction] = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        for g in basis:
            if _divides(g.lm, m):
                q = tuple(a - b for a, b in zip(m, g.lm))
                coef = c / g.lc
                for gm, gc in g.terms.items():
                    nm = tuple(a + b for a, b in zip(gm, q))
                    v = f.get(nm, 0) - coef * gc
                    if v:
                        f[nm] = v
                    else:
                        f.pop(nm, None)
                break
        else:
            r[m] = c
            del f[m]
    return r


def _spoly(a: _Elem, b: _Elem) -> Dict[Exponents, Fraction]:
    l = _lcm(a.lm, b.lm)
    qa = tuple(x - y for x, y in zip(l, a.lm))
    qb = tuple(x - y for x, y in zip(l, b.lm))
    out: Dict[Exponents, Fraction] = {}
    for m, c in a.terms.items():
        nm = tuple(x + y for x, y in zip(m, qa))
        out[nm] = out.get(nm, 0) + c / a.lc
    for m, c in b.terms.items():
        nm = tuple(x + y for x, y in zip(m, qb))
        v = out.get(nm, 0) - c / b.lc
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return {m: c for m, c in out.items() if c}


def _update(G: List[int], B: List[Tuple[int, int]], h: int, elems: List[_Elem]):
    """Gebauer-Moeller installation of new element ``h``."""
    lm = lambda i: elems[i].lm
    hl = lm(h)
    C = [(h, g) for g in G]
    D = []
    while C:
        (_, g1) = C.pop(0)
        l1 = _lcm(hl, lm(g1))
        if _coprime(hl, lm(g1)) or not any(
            _divides(_lcm(hl, lm(g2)), l1) for (_, g2) in C + D
        ):
            D.append((h, g1))
    E = [(a, b) for (a, b) in D if not _coprime(lm(a), lm(b))]
    B_new = []
    for (g1, g2) in B:
        l12 = _lcm(lm(g1), lm(g2))
        if (_divides(hl, l12) and _lcm(lm(g1), hl) != l12 and _lcm(lm(g2), hl) != l12):
            continue
        B_new.append((g1, g2))
    B_new.extend(E)
    G_new = [g for g in G if not _divides(hl, lm(g))]
    G_new.append(h)
    return G_new, B_new


def _buchberger(polys: List[Dict[Exponents, Fraction]], order: MonomialOrder,
                limits: GroebnerLimits) -> List[Dict[Exponents, Fraction]]:
    key = order.key
    elems: List[_Elem] = []
    G: List[int] = []
    B: List[Tuple[int, int]] = []
    # inter-reduce the input first; keeps the pair set small
    polys = sorted((p for p in polys if p), key=lambda p: key(max(p, key=key)))
    for p in polys:
        r = _reduce(p, [elems[g] for g in G], key)
        if not r:
            continue
        elems.append(_Elem(r, key))
        G, B = _update(G, B, len(elems) - 1, elems)
    processed = 0
    while B:
        # normal strategy: smallest lcm first
        B.sort(key=lambda pr: key(_lcm(elems[pr[0]].lm, elems[pr[1]].lm)))
        i, j = B.pop(0)
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitError(
                f"Groebner basis exceeded {limits.max_pairs} S-pairs", pairs=processed)
        s = _spoly(elems[i], elems[j])
        r = _reduce(s, [elems[g] for g in G], key)
        if r:
            deg = max(sum(m) for m in r)
            if deg > limits.max_degree:
                raise ResourceLimitError(
                    f"Groebner basis exceeded degree {limits.max_degree}",
                    pairs=processed, degree=deg)
            elems.append(_Elem(r, key))
            G, B = _update(G, B, len(elems) - 1, elems)
    # reduced basis: minimal leading monomials, tails fully reduced, monic
    basis = [elems[g] for g in G]
    basis = [e for e in basis if not any(o is not e and _divides(o.lm, e.lm) for o in basis)]
    out = []
    for e in basis:
        others = [o for o in basis if o is not e]
        tail = dict(e.terms)
        del tail[e.lm]
        tail = _reduce(tail, others, key)
        tail[e.lm] = e.lc
        out.append({m: c / e.lc for m, c in tail.items()})
    out.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return out


def _common_vars(gens: Sequence[Polynomial], vars: Optional[VarSet]) -> VarSet:
    if vars is not None:
        return vars
    if not gens:
        raise ValueError("cannot infer a VarSet from an empty generator list")
    vs = gens[0].vars
    for g in gens:
        if g.vars != vs:
            raise ValueError("generators live in different VarSets")
    return vs


def groebner_basis(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
                   vars: Optional[VarSet] = None,
                   limits: Optional[GroebnerLimits] = None) -> IdealBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    vs = _common_vars(gens, vars)
    gens = [g.to_vars(vs) for g in gens]
    result = _buchberger([g.terms for g in gens], order, limits or DEFAULT_LIMITS)
    return IdealBasis([Polynomial._raw(vs, t) for t in result], vs, order, True)


def as_basis(ideal: Union[IdealBasis, Sequence[Polynomial]], vars: Optional[VarSet] = None) -> IdealBasis:
    if isinstance(ideal, IdealBasis):
        return ideal if ideal.is_groebner else groebner_basis(ideal.generators, ideal.order, ideal.vars)
    return groebner_basis(list(ideal), vars=vars)


def normal_form(p: Polynomial, basis: IdealBasis) -> Polynomial:
    if not basis.is_groebner:
        raise ValueError("normal_form needs a Groebner basis")
    p = p.to_vars(basis.vars)
    key = basis.order.key
    elems = [_Elem(g.terms, key) for g in basis.generators]
    return Polynomial._raw(basis.vars, _reduce(p.terms, elems, key))


def contains(basis: IdealBasis, p: Polynomial) -> bool:
    return normal_form(p, basis).is_zero()


def is_trivial(basis: IdealBasis) -> bool:
    if not basis.is_groebner:
        raise ValueError("is_trivial needs a Groebner basis")
    return any(g.is_constant() and not g.is_zero() for g in basis.generators)


def same_ideal(a: Sequence[Polynomial], b: Sequence[Polynomial], vars: Optional[VarSet] = None) -> bool:
    """Mutual normal-form reduction to zero."""
    vs = _common_vars(list(a) + list(b), vars)
    ga = groebner_basis(list(a), vars=vs)
    gb = groebner_basis(list(b), vars=vs)
    return all(contains(gb, p) for p in a) and all(contains(ga, p) for p in b)


def eliminate(gens: Sequence[Polynomial], drop: Iterable[str],
              vars: Optional[VarSet] = None,
              limits: Optional[GroebnerLimits] = None) -> List[Polynomial]:
    """Generators of the ideal intersected with the subring free of ``drop``."""
    vs = _common_vars(gens, vars)
    drop = list(drop)
    if not gens:
        return []
    order = MonomialOrder.block(vs, drop)
    gb = groebner_basis(gens, order, vs, limits)
    idx = [vs.index(v) for v in drop]
    return [g for g in gb.generators if all(not any(e[i] for i in idx) for e in g.terms)]


def saturate(gens: Sequence[Polynomial], f: Union[Polynomial, Sequence[Polynomial]],
             vars: Optional[VarSet] = None,
             limits: Optional[GroebnerLimits] = None) -> List[Polynomial]:
    """Generators of ``(I : f^oo)``; a list of factors is saturated one at a time."""
    if isinstance(f, Polynomial):
        factors = [f]
    else:
        factors = list(f)
    vs = _common_vars(list(gens) + factors, vars)
    current = [g.to_vars(vs) for g in gens]
    for h in factors:
        h = h.to_vars(vs)
        if h.is_zero():
            raise ValueError("cannot saturate by the zero polynomial")
        if h.is_constant():
            current = groebner_basis(current, vars=vs, limits=limits).generators if current else []
            continue
        t = vs.fresh("t")
        big = vs.extend([t])
        lifted = [g.to_vars(big) for g in current]
        lifted.append(Polynomial.var(big, t) * h.to_vars(big) - 1)
        kept = eliminate(lifted, [t], big, limits)
        current = [g.to_vars(vs) for g in kept]
    return groebner_basis(current, vars=vs, limits=limits).generators if current else []


def ideal_dimension(basis: IdealBasis, ambient: Optional[VarSet] = None) -> int:
    """Krull dimension of the vanishing set: size of a largest variable subset
    containing the support of no leading monomial.  -1 for the unit ideal."""
    if not basis.is_groebner:
        raise ValueError("ideal_dimension needs a Groebner basis")
    vs = ambient or basis.vars
    if ambient is not None and ambient != basis.vars:
        basis = IdealBasis([g.to_vars(vs) for g in basis.generators], vs, basis.order, True)
    if is_trivial(basis):
        return -1
    supports = [frozenset(i for i, k in enumerate(lm) if k) for lm in basis.leading_monomials()]
    n = len(vs)
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def dimension(gens: Sequence[Polynomial], vars: Optional[VarSet] = None,
              limits: Optional[GroebnerLimits] = None) -> int:
    """Convenience: dimension of V(gens) in the affine space of ``vars``."""
    vs = _common_vars(gens, vars)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return len(vs)
    return ideal_dimension(groebner_basis(gens, vars=vs, limits=limits))
