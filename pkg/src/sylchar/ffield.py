"""Exact arithmetic in GF(p^k).

Elements are encoded as integers 0..q-1: the code of an element with
coefficient vector (c_0, ..., c_{k-1}) over GF(p) is sum c_i * p^i.  The
encoding is canonical, so two elements are equal iff their codes are.

Fields with q <= LOG_TABLE_CAP get exp/log tables (multiplication in
group-enumeration kernels is the hot path); larger fields fall back to
polynomial arithmetic on digit tuples.  Fields are immutable once built
and interned by (p, k).
"""

from __future__ import annotations

import math
from functools import lru_cache

from sympy import isprime

from .intarith import prime_factors

#: fields up to this size carry full exp/log (and q*q add) tables
LOG_TABLE_CAP = 1 << 16
ADD_TABLE_CAP = 1 << 10

#: refuse to build fields larger than this (configurable budget)
FIELD_BUDGET = 1 << 31


def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(f, g, mod, p):
    """f*g mod (mod) over GF(p); dense coefficient lists, low degree first."""
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    # reduce by the monic modulus
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(dm):
                out[i - dm + j] = (out[i - dm + j] - c * mod[j]) % p
    _poly_trim(out)
    return out


def _poly_powmod(f, e, mod, p):
    result = [1]
    base = list(f)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        # f mod g
        inv_lead = pow(g[-1], -1, p)
        while len(f) >= len(g) and f:
            c = f[-1] * inv_lead % p
            shift = len(f) - len(g)
            for j in range(len(g)):
                f[shift + j] = (f[shift + j] - c * g[j]) % p
            _poly_trim(f)
        f, g = g, f
    return f


def _is_irreducible(mod, p):
    """Monic degree-k polynomial irreducible over GF(p)?

    Tests x^(p^k) = x mod f together with gcd(x^(p^(k/l)) - x, f) = 1 for
    every prime l dividing k.
    """
    k = len(mod) - 1
    if k == 1:
        return True
    if mod[0] == 0:  # divisible by x
        return False
    x = [0, 1]
    xq = _poly_powmod(x, p**k, mod, p)
    if xq != x:
        return False
    for ell in prime_factors(k):
        xsub = _poly_powmod(x, p ** (k // ell), mod, p)
        diff = [(a - b) % p for a, b in zip(xsub + [0] * len(x), x + [0] * len(xsub))]
        _poly_trim(diff)
        g = _poly_gcd(list(mod), diff, p)
        if len(g) > 1:
            return False
    return True


class FiniteField:
    """GF(p^k) with canonical integer element codes."""

    def __init__(self, p: int, k: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("k must be >= 1")
        q = p**k
        if q > FIELD_BUDGET:
            raise ValueError(f"field size {q} exceeds budget {FIELD_BUDGET}")
        self.p = p
        self.k = k
        self.q = q
        self.zero = 0
        self.one = 1
        self.modulus = self._least_irreducible() if k > 1 else (0, 1)
        self._init_tables()
        self.generator = self._find_generator()
        self._embeddings: dict[tuple[int, int], list[int]] = {}

    # -- construction ---------------------------------------------------

    def _least_irreducible(self):
        """Monic irreducible of degree k with the least packed code."""
        p, k = self.p, self.k
        for tail in range(p**k):
            mod = [*self._digits(tail), 1]
            if _is_irreducible(mod, p):
                return tuple(mod)
        raise AssertionError("no irreducible polynomial found")  # impossible

    def _digits(self, code):
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return out

    def _pack(self, digits):
        out = 0
        for c in reversed(digits):
            out = out * self.p + c
        return out

    def _raw_mul(self, a, b):
        """Table-free multiplication via polynomial product mod modulus."""
        if self.k == 1:
            return a * b % self.p
        f = _poly_mulmod(self._digits(a), self._digits(b), list(self.modulus), self.p)
        return self._pack(f + [0] * (self.k - len(f)))

    def _raw_add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, mult = 0, 1
        for _ in range(self.k):
            out += (a % p + b % p) % p * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _init_tables(self):
        q = self.q
        if q <= ADD_TABLE_CAP:
            self._add_tab = [self._raw_add(a, b) for a in range(q) for b in range(q)]
        else:
            self._add_tab = None
        if q <= LOG_TABLE_CAP:
            self._exp = None  # filled once the generator is known
            self._log = None
        else:
            self._exp = self._log = None
        self._tabled = q <= LOG_TABLE_CAP

    def _find_generator(self):
        q = self.q
        if q == 2:
            g = 1
        else:
            factors = prime_factors(q - 1)
            g = None
            for cand in range(2, q):
                if all(self._raw_pow(cand, (q - 1) // ell) != 1 for ell in factors):
                    g = cand
                    break
            if g is None:
                raise AssertionError("no generator found")  # impossible
        if self._tabled:
            exp = [1] * (self.q - 1)
            for i in range(1, self.q - 1):
                exp[i] = self._raw_mul(exp[i - 1], g)
            log = [0] * self.q
            for i, v in enumerate(exp):
                log[v] = i
            self._exp, self._log = exp, log
        return g

    def _raw_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    # -- arithmetic on codes ---------------------------------------------

    def add(self, a, b):
        if self._add_tab is not None:
            return self._add_tab[a * self.q + b]
        return self._raw_add(a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self._pack([(-c) % self.p for c in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._tabled:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._raw_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self._tabled:
            return self._exp[-self._log[a] % (self.q - 1)]
        return self._raw_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inversion of zero field element")
            return 0 if e else 1
        if self._tabled:
            return self._exp[self._log[a] * e % (self.q - 1)]
        e %= self.q - 1
        return self._raw_pow(a, e)

    def frobenius(self, a, m=1):
        """a^(p^m); m = k acts as the identity on GF(p^k)."""
        if a == 0:
            return 0
        return self.pow(a, self.p ** (m % self.k))

    def element_order(self, a):
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        if self._tabled:
            d = self._log[a]
            return (self.q - 1) // math.gcd(self.q - 1, d)
        o = self.q - 1
        for ell in prime_factors(self.q - 1):
            while o % ell == 0 and self._raw_pow(a, o // ell) == 1:
                o //= ell
        return o

    def root_of_unity(self, d):
        """Element of exact multiplicative order d; needs d | q - 1."""
        if d < 1 or (self.q - 1) % d != 0:
            raise ValueError(f"{d} does not divide {self.q - 1}")
        return self.pow(self.generator, (self.q - 1) // d)

    def trace(self, a):
        """Absolute trace GF(p^k) -> GF(p), returned as an integer 0..p-1."""
        t = 0
        x = a
        for _ in range(self.k):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        assert t < self.p  # trace lands in the prime subfield
        return t

    # -- subfields --------------------------------------------------------

    def embedding_from(self, sub: "FiniteField") -> list[int]:
        """Code map GF(p^m) -> GF(p^k) for m | k, via the least root of
        sub.modulus in this field.  Cached."""
        key = (sub.p, sub.k)
        if key in self._embeddings:
            return self._embeddings[key]
        if sub.p != self.p or self.k % sub.k != 0:
            raise ValueError("not a subfield")
        if sub.k == 1:
            table = list(range(self.p))
        else:
            root = None
            for cand in range(self.q):
                acc, pw = 0, 1
                for c in sub.modulus:
                    acc = self.add(acc, self.mul(c, pw))
                    pw = self.mul(pw, cand)
                if acc == 0:
                    root = cand
                    break
            assert root is not None
            table = []
            for code in range(sub.q):
                acc, pw = 0, 1
                for c in sub._digits(code):
                    acc = self.add(acc, self.mul(c, pw))
                    pw = self.mul(pw, root)
                table.append(acc)
        self._embeddings[key] = table
        return table

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def ff_create(p: int, k: int) -> FiniteField:
    """Interned GF(p^k) with verified modulus and generator."""
    return FiniteField(p, k)


class FieldElement:
    """Convenience wrapper over (field, code) with operator overloads."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        if not 0 <= code < field.q:
            raise ValueError(f"code {code} out of range for {field}")
        self.field = field
        self.code = code

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("mixed fields")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._coerce(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._coerce(other)))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, m=1):
        return FieldElement(self.field, self.field.frobenius(self.code, m))

    def order(self):
        return self.field.element_order(self.code)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __repr__(self):
        return f"{self.field}#{self.code}"


def ff_arith(x: FieldElement, y: FieldElement | None, op: str) -> FieldElement:
    """Dispatch add/mul/inv/neg on FieldElements (single-op entry point)."""
    if op == "inv":
        return x.inv()
    if op == "neg":
        return -x
    if y is None:
        raise ValueError(f"binary op {op!r} needs two operands")
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")
