"""Exact arithmetic in cyclotomic fields Q(zeta_e) and Galois actions.

Values are stored sparsely over the power basis zeta_e^0..zeta_e^(phi(e)-1)
after reduction modulo the e-th cyclotomic polynomial, with the conductor e
minimised; the representation is canonical, so equality of values is
equality of (conductor, coefficient) data.  No floating point anywhere;
coefficients are fractions.Fraction.

The distinguished Galois map used throughout the verifier fixes roots of
unity of 2-power order and squares those of odd order; sigma_exponent
computes its exponent on a given conductor.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import cyclotomic_poly, totient
from sympy.abc import x as _x

from .intarith import crt, odd_part, prime_factors, two_part

ZERO = Fraction(0)


@lru_cache(maxsize=None)
def _phi(e: int) -> int:
    return int(totient(e))


@lru_cache(maxsize=None)
def _cyclo_poly(e: int) -> tuple[int, ...]:
    """Coefficients of the e-th cyclotomic polynomial, low degree first."""
    from sympy import Poly

    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(e, _x), _x).all_coeffs()))


class _Reducer:
    """Lazily computed rows of x^i mod Phi_e for phi(e) <= i < e."""

    def __init__(self, e: int):
        self.e = e
        self.phi = _phi(e)
        self.poly = _cyclo_poly(e)
        self._rows: list[list[int] | None] = [None] * (e - self.phi)

    def row(self, i: int) -> list[int]:
        d = self.phi
        idx = i - d
        cached = self._rows[idx]
        if cached is not None:
            return cached
        if idx == 0:
            # x^phi = -(lower part of Phi)
            r = [-c for c in self.poly[:d]]
        else:
            prev = self.row(i - 1)
            r = [0] + prev[: d - 1]
            top = prev[d - 1]
            if top:
                for j in range(d):
                    r[j] -= top * self.poly[j]
        self._rows[idx] = r
        return r


@lru_cache(maxsize=None)
def _reducer(e: int) -> _Reducer:
    return _Reducer(e)


def _reduce_sparse(e: int, items) -> dict[int, Fraction]:
    """Reduce {exponent: coeff} modulo Phi_e; exponents land below phi(e)."""
    d = _phi(e)
    red = _reducer(e)
    dense = [ZERO] * d
    for i, c in items:
        if not c:
            continue
        i %= e
        if i < d:
            dense[i] += c
        else:
            for j, rj in enumerate(red.row(i)):
                if rj:
                    dense[j] += c * rj
    return {i: c for i, c in enumerate(dense) if c}


@lru_cache(maxsize=None)
def _unit_group_gens(n: int) -> tuple[int, ...]:
    """Generators of (Z/n)* via the CRT factor decomposition."""
    if n <= 2:
        return ()
    gens = []
    rest = n
    fac = []
    for p in prime_factors(n):
        pk = 1
        while rest % p == 0:
            rest //= p
            pk *= p
        fac.append(pk)
    for pk in fac:
        cof = n // pk
        if pk % 2 == 0:
            locals_ = [-1 % pk, 5 % pk] if pk % 8 == 0 else ([-1 % pk] if pk % 4 == 0 else [1])
        else:
            p = prime_factors(pk)[0]
            g = _primitive_root(p, pk)
            locals_ = [g]
        for gl in locals_:
            if gl == 1:
                continue
            # lift: congruent to gl mod pk, to 1 mod cofactor
            gens.append(crt(gl, pk, 1, cof))
    return tuple(g for g in gens if g % n != 1)


def _primitive_root(p: int, pk: int) -> int:
    """Primitive root modulo p^k for odd prime p."""
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in prime_factors(p - 1)):
            break
    else:
        raise AssertionError("no primitive root")
    if pk == p:
        return g
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g % pk


class CyclotomicNumber:
    """Immutable exact element of Q(zeta_e), canonical and conductor-minimal."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, items, *, _canonical: bool = False):
        if _canonical:
            self.e = e
            self.coeffs = items
            return
        reduced = _reduce_sparse(e, dict(items).items())
        e, reduced = _minimize_conductor(e, reduced)
        self.e = e
        self.coeffs = tuple(sorted(reduced.items()))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def rational(a) -> "CyclotomicNumber":
        a = Fraction(a)
        return CyclotomicNumber(1, ((0, a),) if a else (), _canonical=True)

    @staticmethod
    def zeta(e: int, k: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber(e, {k % e: Fraction(1)})

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_rational(self) -> bool:
        return self.e == 1

    def rational_value(self) -> Fraction:
        if self.e != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0][1] if self.coeffs else ZERO

    def lift_items(self, e: int):
        """Coefficient items viewed at conductor e (self.e must divide e)."""
        if e % self.e:
            raise ValueError("not a conductor multiple")
        f = e // self.e
        return [(i * f, c) for i, c in self.coeffs]

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        e = math.lcm(self.e, other.e)
        acc: dict[int, Fraction] = {}
        for i, c in self.lift_items(e):
            acc[i] = acc.get(i, ZERO) + c
        for i, c in other.lift_items(e):
            acc[i] = acc.get(i, ZERO) + c
        return CyclotomicNumber(e, acc)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.e, tuple((i, -c) for i, c in self.coeffs), _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                return CyclotomicNumber.rational(0)
            return CyclotomicNumber(self.e, tuple((i, c * f) for i, c in self.coeffs), _canonical=True)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return CyclotomicNumber.rational(0)
        e = math.lcm(self.e, other.e)
        a = self.lift_items(e)
        b = other.lift_items(e)
        acc: dict[int, Fraction] = {}
        for i, c in a:
            for j, d in b:
                k = (i + j) % e
                acc[k] = acc.get(k, ZERO) + c * d
        return CyclotomicNumber(e, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, CyclotomicNumber) and other.is_rational:
            return self * (Fraction(1) / other.rational_value())
        raise TypeError("division only by rationals")

    def galois(self, k: int) -> "CyclotomicNumber":
        """Apply zeta_e -> zeta_e^k (k coprime to the conductor)."""
        if math.gcd(k, self.e) != 1:
            raise ValueError(f"exponent {k} not coprime to conductor {self.e}")
        return CyclotomicNumber(self.e, {i * k % self.e: c for i, c in self.coeffs})

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1 % self.e) if self.e > 1 else self

    # -- comparisons / output --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.e == other.e and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.e, self.coeffs))

    def serialize(self) -> str:
        """Report form `cyc(e; c_0, ..., c_{phi(e)-1})` with exact rationals."""
        dense = [ZERO] * max(1, _phi(self.e))
        for i, c in self.coeffs:
            dense[i] = c
        return f"cyc({self.e}; " + ", ".join(str(c) for c in dense) + ")"

    def approx(self) -> complex:
        """Display-only floating approximation; never used in checks."""
        t = 2 * math.pi / self.e
        return sum(float(c) * complex(math.cos(t * i), math.sin(t * i)) for i, c in self.coeffs) if self.coeffs else 0j

    def __repr__(self):
        return self.serialize()


def _coerce(v):
    if isinstance(v, CyclotomicNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return CyclotomicNumber.rational(v)
    return NotImplemented


def _fixed_by(e: int, reduced: dict[int, Fraction], k: int) -> bool:
    image = _reduce_sparse(e, [(i * k % e, c) for i, c in reduced.items()])
    return image == reduced


def _subfield_rewrite(e: int, reduced: dict[int, Fraction], d: int) -> dict[int, Fraction] | None:
    """Express a value known to lie in Q(zeta_d) on the conductor-d basis."""
    phe, phd = _phi(e), _phi(d)
    f = e // d
    cols = []
    for j in range(phd):
        col = _reduce_sparse(e, [(j * f, Fraction(1))])
        cols.append([col.get(i, ZERO) for i in range(phe)])
    target = [reduced.get(i, ZERO) for i in range(phe)]
    sol = _solve_columns(cols, target)
    if sol is None:
        return None
    return {j: c for j, c in enumerate(sol) if c}


def _solve_columns(cols: list[list[Fraction]], target: list[Fraction]):
    """Solve sum_j x_j cols[j] = target exactly; None if inconsistent."""
    m = len(target)
    n = len(cols)
    aug = [[cols[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    piv_cols = []
    r = 0
    for cidx in range(n):
        sel = next((i for i in range(r, m) if aug[i][cidx]), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = Fraction(1) / aug[r][cidx]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][cidx]:
                f = aug[i][cidx]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(cidx)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    sol = [ZERO] * n
    for i, cidx in enumerate(piv_cols):
        sol[cidx] = aug[i][n]
    # consistency of non-pivot columns is implied by exactness of elimination
    return sol


def _minimize_conductor(e: int, reduced: dict[int, Fraction]):
    """Smallest d | e carrying the value, with its conductor-d coefficients."""
    if not reduced:
        return 1, {}
    if set(reduced) <= {0}:
        return 1, dict(reduced)
    changed = True
    while changed and e > 1:
        changed = False
        for p in prime_factors(e):
            d = e // p
            subgroup = [k for k in range(1, e) if k % d == 1 % d and math.gcd(k, e) == 1]
            if all(_fixed_by(e, reduced, k) for k in subgroup):
                rewritten = _subfield_rewrite(e, reduced, d)
                assert rewritten is not None  # fixed field membership guarantees it
                e, reduced = d, rewritten
                if set(reduced) <= {0}:
                    return 1, reduced
                changed = True
                break
    return e, reduced


def cyc_sum(values) -> CyclotomicNumber:
    """Exact sum of many values; lifts to the lcm conductor once."""
    values = [_coerce(v) for v in values]
    values = [v for v in values if not v.is_zero]
    if not values:
        return CyclotomicNumber.rational(0)
    e = 1
    for v in values:
        e = math.lcm(e, v.e)
    acc: dict[int, Fraction] = {}
    for v in values:
        for i, c in v.lift_items(e):
            acc[i] = acc.get(i, ZERO) + c
    return CyclotomicNumber(e, acc)


def sigma_exponent(e: int) -> int:
    """Exponent k on conductor e of the Galois map fixing 2-power-order
    roots of unity and squaring odd-order ones: k = 1 mod 2-part,
    k = 2 mod odd part."""
    if e < 1:
        raise ValueError("conductor must be positive")
    a2 = two_part(e)
    m = odd_part(e)
    if m == 1:
        return 1
    if a2 == 1:
        return 2 % e if e > 1 else 1
    return crt(1, a2, 2, m)


class GaloisMap:
    """zeta_e -> zeta_e^k with gcd(k, e) = 1, applied coefficientwise."""

    __slots__ = ("e", "k")

    def __init__(self, e: int, k: int):
        k %= e
        if math.gcd(k, e) != 1:
            raise ValueError(f"exponent {k} not coprime to {e}")
        self.e = e
        self.k = k

    def __call__(self, v: CyclotomicNumber) -> CyclotomicNumber:
        if self.e % v.e:
            raise ValueError(f"value of conductor {v.e} outside Q(zeta_{self.e})")
        return v.galois(self.k % v.e) if v.e > 1 else v

    def __repr__(self):
        return f"GaloisMap(e={self.e}, k={self.k})"


def galois_apply(v: CyclotomicNumber, g: GaloisMap) -> CyclotomicNumber:
    return g(v)


def sigma(v: CyclotomicNumber) -> CyclotomicNumber:
    """Apply the 2-power-fixing / odd-squaring map on v's own conductor."""
    return v.galois(sigma_exponent(v.e))


def cyc_arith(a: CyclotomicNumber, b: CyclotomicNumber | None, op: str) -> CyclotomicNumber:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conjugate":
        return a.conjugate()
    raise ValueError(f"unknown op {op!r}")


def quadratic_field_member(v: CyclotomicNumber, eta: int, p: int) -> bool:
    """Is v inside Q(sqrt(eta*p))?  Needs eta = +-1, p an odd prime with
    p = eta mod 4; rational membership is the degenerate case."""
    if eta not in (1, -1):
        raise ValueError("eta must be +1 or -1")
    if p % 4 != eta % 4:
        raise ValueError(f"require p = eta mod 4, got p={p}, eta={eta}")
    if v.is_rational:
        return True
    E = math.lcm(v.e, p)
    fixers = []
    gens = _unit_group_gens(E)
    neg = next((g for g in gens if _legendre(g % p, p) == -1), None)
    for g in gens:
        if _legendre(g % p, p) == 1:
            fixers.append(g)
        elif g != neg:
            fixers.append(g * neg % E)
    if neg is not None:
        fixers.append(neg * neg % E)
    # lifting may re-minimise; compare images in the lifted coordinates
    reduced = _reduce_sparse(E, v.lift_items(E))
    return all(_fixed_by(E, reduced, k % E) for k in fixers if k % E != 1)


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_p(p: int) -> CyclotomicNumber:
    """Quadratic Gauss sum: sqrt(p) for p = 1 mod 4, sqrt(-p) for p = 3 mod 4."""
    return cyc_sum(_legendre(a, p) * CyclotomicNumber.zeta(p, a) for a in range(1, p))
