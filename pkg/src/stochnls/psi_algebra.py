"""Exact arithmetic in the Riccati variable Psi with symbolic coefficients.

The generalized Kudryashov construction works with rational functions

    u(Psi) = T(Psi) / V(Psi)

whose polynomial coefficients are themselves integer polynomials in the
unknown ansatz constants A0..AN, B0..BM, the wave number k and the combined
linear coefficient H.  Everything in this module is exact: coefficients are
Python ints, so expanding the cleared-denominator form of the reduced ODE
reproduces the coefficient-matching system term for term, with no rounding.

Differentiation uses the Riccati closure

    Psi'(xi) = Psi(xi)**2 - Psi(xi),

satisfied by Psi(xi) = 1/(1 + A*exp(xi)), which keeps every xi-derivative
inside the polynomial algebra.  The arbitrary constant A never enters this
layer; it only matters when profiles are evaluated numerically.

Representation:

  * SymbolId     one unknown: kind "A"/"B" with an index, or "k"/"H"
  * CoeffExpr    mapping {monomial: int}; a monomial is a sorted tuple of
                 (SymbolId, positive exponent) pairs
  * PsiPoly      tuple of CoeffExpr, entry i = coefficient of Psi**i
  * PsiRational  numerator/denominator pair of PsiPoly

Zero coefficients are never stored and trailing zero entries are trimmed,
so equal values have identical representations and ``==`` is structural.
The canonical text form orders terms graded-lexicographically over
(A0, ..., AN, B0, ..., BM, k, H), largest first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

_KIND_RANK = {"A": 0, "B": 1, "k": 2, "H": 3}


@dataclass(frozen=True)
class SymbolId:
    """One symbolic unknown of the ansatz algebra.

    ``kind`` is "A" or "B" (indexed ansatz coefficients) or "k"/"H"
    (unindexed).  Indexed kinds carry ``index >= 0``; k and H use -1.
    """

    kind: str
    index: int = -1

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind in ("A", "B"):
            if self.index < 0:
                raise ValueError(f"{self.kind}-symbols need a non-negative index")
        elif self.index != -1:
            raise ValueError(f"{self.kind} carries no index")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_KIND_RANK[self.kind], self.index)

    def __lt__(self, other: "SymbolId") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.kind in ("A", "B"):
            return f"{self.kind}{self.index}"
        return self.kind


def sym_a(i: int) -> SymbolId:
    return SymbolId("A", i)


def sym_b(j: int) -> SymbolId:
    return SymbolId("B", j)


SYM_K = SymbolId("k")
SYM_H = SymbolId("H")

# A monomial maps symbols to positive exponents, stored sorted for hashing.
Monomial = tuple[tuple[SymbolId, int], ...]

_EMPTY_MONOMIAL: Monomial = ()


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[SymbolId, int] = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items(), key=lambda it: it[0].sort_key))


def _monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class CoeffExpr:
    """Integer polynomial in the ansatz symbols, kept in canonical form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms is None:
            self._terms: dict[Monomial, int] = {}
        else:
            self._terms = {m: int(c) for m, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "CoeffExpr":
        return CoeffExpr()

    @staticmethod
    def integer(n: int) -> "CoeffExpr":
        return CoeffExpr({_EMPTY_MONOMIAL: n})

    @staticmethod
    def symbol(s: SymbolId, power: int = 1, coeff: int = 1) -> "CoeffExpr":
        if power < 0:
            raise ValueError("negative powers are not representable")
        if power == 0:
            return CoeffExpr.integer(coeff)
        return CoeffExpr({((s, power),): coeff})

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Largest monomial degree; -1 for the zero expression."""
        if not self._terms:
            return -1
        return max(_monomial_degree(m) for m in self._terms)

    def symbols(self) -> set[SymbolId]:
        out: set[SymbolId] = set()
        for m in self._terms:
            out.update(s for s, _ in m)
        return out

    def canonical(self) -> "CoeffExpr":
        """Idempotent normalization (construction already canonicalizes)."""
        return CoeffExpr(self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "CoeffExpr") -> "CoeffExpr":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return CoeffExpr(out)

    def __neg__(self) -> "CoeffExpr":
        return CoeffExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "CoeffExpr") -> "CoeffExpr":
        return self + (-other)

    def __mul__(self, other: "CoeffExpr") -> "CoeffExpr":
        out: dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _monomial_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return CoeffExpr(out)

    def scaled(self, n: int) -> "CoeffExpr":
        return CoeffExpr({m: n * c for m, c in self._terms.items()})

    def __pow__(self, n: int) -> "CoeffExpr":
        if n < 0:
            raise ValueError("negative powers are not representable")
        result = CoeffExpr.integer(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, s: SymbolId) -> "CoeffExpr":
        """Formal partial derivative with respect to one symbol."""
        out: dict[Monomial, int] = {}
        for m, c in self._terms.items():
            exps = dict(m)
            e = exps.get(s, 0)
            if e == 0:
                continue
            if e == 1:
                del exps[s]
            else:
                exps[s] = e - 1
            dm = tuple(sorted(exps.items(), key=lambda it: it[0].sort_key))
            out[dm] = out.get(dm, 0) + c * e
        return CoeffExpr(out)

    # -- evaluation and text -----------------------------------------------

    def evaluate(self, values: Mapping[SymbolId, complex]) -> complex:
        total = 0j
        for m, c in self._terms.items():
            prod = complex(c)
            for s, e in m:
                prod *= values[s] ** e
            total += prod
        return total

    def _sorted_terms(self) -> list[tuple[Monomial, int]]:
        universe = sorted(self.symbols(), key=lambda s: s.sort_key)
        pos = {s: i for i, s in enumerate(universe)}

        def key(item: tuple[Monomial, int]):
            m, _ = item
            vec = [0] * len(universe)
            for s, e in m:
                vec[pos[s]] = e
            # graded lex, descending: higher degree first, then higher
            # exponent on the earliest symbol first
            return (-_monomial_degree(m), tuple(-e for e in vec))

        return sorted(self._terms.items(), key=key)

    def canonical_text(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m, c in self._sorted_terms():
            factors = [f"{s}" if e == 1 else f"{s}^{e}" for s, e in m]
            body = "*".join([str(abs(c))] + factors) if m else str(abs(c))
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoeffExpr) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"CoeffExpr({self.canonical_text()})"


class PsiPoly:
    """Polynomial in Psi whose coefficients are CoeffExpr values.

    The zero polynomial is the empty coefficient tuple; otherwise the
    trailing (highest-degree) coefficient is nonzero.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[CoeffExpr] = ()):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self._coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "PsiPoly":
        return PsiPoly()

    @staticmethod
    def constant(c: CoeffExpr) -> "PsiPoly":
        return PsiPoly([c])

    @staticmethod
    def integer(n: int) -> "PsiPoly":
        return PsiPoly([CoeffExpr.integer(n)])

    @staticmethod
    def psi_power(i: int, coeff: CoeffExpr | None = None) -> "PsiPoly":
        c = coeff if coeff is not None else CoeffExpr.integer(1)
        return PsiPoly([CoeffExpr.zero()] * i + [c])

    # -- structure ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple[CoeffExpr, ...]:
        return self._coeffs

    def degree(self) -> int:
        """Degree in Psi; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, i: int) -> CoeffExpr:
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return CoeffExpr.zero()

    def canonical(self) -> "PsiPoly":
        return PsiPoly(self._coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "PsiPoly") -> "PsiPoly":
        n = max(len(self._coeffs), len(other._coeffs))
        return PsiPoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self) -> "PsiPoly":
        return PsiPoly([-c for c in self._coeffs])

    def __sub__(self, other: "PsiPoly") -> "PsiPoly":
        return self + (-other)

    def __mul__(self, other: "PsiPoly") -> "PsiPoly":
        if self.is_zero() or other.is_zero():
            return PsiPoly.zero()
        out = [CoeffExpr.zero()] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] = out[i + j] + a * b
        return PsiPoly(out)

    def __pow__(self, n: int) -> "PsiPoly":
        if n < 0:
            raise ValueError("negative powers are not representable")
        result = PsiPoly.integer(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scaled(self, c: "CoeffExpr | int") -> "PsiPoly":
        if isinstance(c, int):
            c = CoeffExpr.integer(c)
        return PsiPoly([c * a for a in self._coeffs])

    # -- calculus ----------------------------------------------------------

    def formal_derivative(self) -> "PsiPoly":
        """d/dPsi, ignoring the Riccati closure."""
        return PsiPoly(
            [self._coeffs[i].scaled(i) for i in range(1, len(self._coeffs))]
        )

    # -- evaluation and text -----------------------------------------------

    def evaluate(self, psi: complex, values: Mapping[SymbolId, complex]) -> complex:
        # Horner in Psi
        total = 0j
        for c in reversed(self._coeffs):
            total = total * psi + c.evaluate(values)
        return total

    def canonical_text(self) -> str:
        if not self._coeffs:
            return "Psi^0: 0"
        return "\n".join(
            f"Psi^{i}: {c.canonical_text()}" for i, c in enumerate(self._coeffs)
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PsiPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"PsiPoly(degree={self.degree()})"


# Psi' expressed inside the algebra: Psi**2 - Psi.
RICCATI_SHIFT = PsiPoly([CoeffExpr.zero(), CoeffExpr.integer(-1), CoeffExpr.integer(1)])


@dataclass(frozen=True)
class PsiRational:
    """Ratio of PsiPoly values; the denominator is never the zero polynomial."""

    numerator: PsiPoly
    denominator: PsiPoly

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")

    def evaluate(self, psi: complex, values: Mapping[SymbolId, complex]) -> complex:
        return self.numerator.evaluate(psi, values) / self.denominator.evaluate(
            psi, values
        )

    def cross_equal(self, other: "PsiRational") -> bool:
        """Exact equality of cross-products a.num*b.den == b.num*a.den."""
        return (
            self.numerator * other.denominator == other.numerator * self.denominator
        )


# ---------------------------------------------------------------------------
# Operations (free-function layer mirroring the published algebra)
# ---------------------------------------------------------------------------


def poly_add(a: PsiPoly, b: PsiPoly) -> PsiPoly:
    return a + b


def poly_mul(a: PsiPoly, b: PsiPoly) -> PsiPoly:
    return a * b


def riccati_derivative(p: PsiPoly) -> PsiPoly:
    """xi-derivative of p(Psi(xi)) under Psi' = Psi**2 - Psi.

    Equals (Psi**2 - Psi) * dp/dPsi; the degree rises by exactly one for
    non-constant p.
    """
    return RICCATI_SHIFT * p.formal_derivative()


def rat_derivative(r: PsiRational) -> PsiRational:
    """xi-derivative of T/V via the quotient rule under the Riccati closure.

    Returns (Psi**2 - Psi)(T'V - TV') / V**2 with T', V' the formal
    Psi-derivatives.
    """
    t, v = r.numerator, r.denominator
    num = RICCATI_SHIFT * (t.formal_derivative() * v - t * v.formal_derivative())
    return PsiRational(num, v * v)


def rat_second_derivative(r: PsiRational) -> PsiRational:
    """Second xi-derivative of T/V, assembled over the denominator V**3.

    Closed form of applying the quotient rule twice:

        (Psi^2-Psi)(2Psi-1)(T'V - TV')V + (Psi^2-Psi)^2 *
            (T''V^2 - TV''V - 2T'V'V + 2TV'^2)
        all over V^3.

    Agrees with rat_derivative applied twice after cross-multiplication.
    """
    t, v = r.numerator, r.denominator
    dt, dv = t.formal_derivative(), v.formal_derivative()
    ddt, ddv = dt.formal_derivative(), dv.formal_derivative()
    two_psi_minus_one = PsiPoly([CoeffExpr.integer(-1), CoeffExpr.integer(2)])
    first = RICCATI_SHIFT * two_psi_minus_one * (dt * v - t * dv) * v
    second = (RICCATI_SHIFT * RICCATI_SHIFT) * (
        ddt * v * v - t * ddv * v - dt * dv.scaled(2) * v + t * (dv * dv).scaled(2)
    )
    return PsiRational(first + second, v * v * v)


def clear_denominators(equation: PsiRational) -> PsiPoly:
    """Numerator of the reduced ODE once assembled over a common denominator.

    The Psi-coefficients of the returned polynomial are the equations of the
    coefficient-matching system.
    """
    return equation.numerator.canonical()
