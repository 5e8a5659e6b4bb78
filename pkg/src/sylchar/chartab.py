"""Exact character tables of enumerated groups.

The method: reduce the commuting class-multiplication matrices modulo a
prime l = 1 (mod exponent) exceeding 2*sqrt(|G|), split their common
eigenvectors over GF(l) (the class algebra is split semisimple there, so
the splitting is deterministic and complete), read off degrees, and lift
each character value back to an exact sum of roots of unity through the
discrete-log averaging formula.  Every division is checked exact; any
failure aborts rather than approximating.

Row order is deterministic: the trivial character first, then by degree,
then by the serialised value tuple.
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy import isprime

from .cyclotomic import CyclotomicNumber, cyc_sum
from .engine import GroupData

MAX_CLASSES = 200


def _find_prime(e: int, bound: int) -> int:
    ell = e + 1
    while True:
        if ell > bound and isprime(ell):
            return ell
        ell += e


def _primitive_root_mod(ell: int) -> int:
    from .intarith import prime_factors

    for g in range(2, ell):
        if all(pow(g, (ell - 1) // f, ell) != 1 for f in prime_factors(ell - 1)):
            return g
    raise AssertionError("no primitive root")


def class_matrix(G: GroupData, j: int):
    """Structure-constant matrix A with A[i][k] = #{(x,y) in C_i x C_j :
    xy = rep_k}; each character's omega vector is an eigenvector."""
    cls = G.conjugacy_classes()
    k = len(cls)
    A = [[0] * k for _ in range(k)]
    mul, inv = G.mul, G.inv
    reps = [c.rep for c in cls]
    for y_idx in cls[j].indices:
        yinv = inv(G.elements[y_idx])
        for kk, rep in enumerate(reps):
            x = mul(rep, yinv)
            A[G.class_of(x)][kk] += 1
    return A


class CharacterTable:
    def __init__(self, group: GroupData, rows, degrees):
        self.group = group
        self.rows = rows            # tuple of tuples of CyclotomicNumber
        self.degrees = degrees      # tuple of ints
        self.exponent = group.exponent()
        cls = group.conjugacy_classes()
        self.class_sizes = tuple(c.size for c in cls)
        self.class_reps = tuple(c.rep for c in cls)
        self.class_orders = tuple(c.element_order for c in cls)
        self._row_index = {r: i for i, r in enumerate(rows)}

    @property
    def n_classes(self):
        return len(self.rows)

    def row_index(self, values) -> int:
        """Index of the row equal to the given value tuple; KeyError means
        the values do not form a row (table corruption upstream)."""
        return self._row_index[tuple(values)]

    def inner_product(self, f, g) -> CyclotomicNumber:
        """<f, g> = (1/|G|) sum |C| f(C) conj(g(C)), exact."""
        n = self.group.order
        terms = [f[c] * g[c].conjugate() * self.class_sizes[c]
                 for c in range(self.n_classes)]
        return cyc_sum(terms) * Fraction(1, n)

    def decompose(self, f):
        """Multiplicities of each irreducible in the class function f;
        aborts if any multiplicity is not a rational integer."""
        out = []
        for i, row in enumerate(self.rows):
            v = self.inner_product(f, row)
            if not v.is_rational or v.rational_value().denominator != 1:
                raise ArithmeticError(
                    f"non-integral multiplicity {v} against row {i}")
            out.append(int(v.rational_value()))
        return tuple(out)

    def central_character(self, i: int):
        """omega(z) = chi(z)/chi(1) on the centre, as {z: root of unity}."""
        d = self.degrees[i]
        out = {}
        for z in self.group.center_elements():
            c = self.group.class_of(z)
            out[z] = self.rows[i][c] / d
        return out

    def serialize_row(self, i: int) -> str:
        return "; ".join(v.serialize() for v in self.rows[i])


def dixon_table(G: GroupData) -> CharacterTable:
    cls = G.conjugacy_classes()
    k = len(cls)
    if k > MAX_CLASSES:
        raise ValueError(f"class count {k} exceeds budget {MAX_CLASSES}")
    n = G.order
    e = G.exponent()
    ell = _find_prime(e, 2 * math.isqrt(n) + 1)
    theta = pow(_primitive_root_mod(ell), (ell - 1) // e, ell)

    # -- split the common eigenvectors over GF(ell)
    subspaces = [[_unit_vec(k, i) for i in range(k)]]
    for j in range(1, k):
        if all(len(b) == 1 for b in subspaces):
            break
        A = class_matrix(G, j)
        A = [[v % ell for v in row] for row in A]
        new_subspaces = []
        for basis in subspaces:
            if len(basis) == 1:
                new_subspaces.append(basis)
                continue
            new_subspaces.extend(_split_subspace(A, basis, ell))
        subspaces = new_subspaces
    if any(len(b) != 1 for b in subspaces):
        raise ArithmeticError("class algebra failed to split; table aborted")

    eigvecs = []
    for basis in subspaces:
        v = basis[0]
        if v[0] == 0:
            raise ArithmeticError("eigenvector vanishes at the identity class")
        inv0 = pow(v[0], -1, ell)
        eigvecs.append([x * inv0 % ell for x in v])

    # -- degrees
    inv_class = G.power_class_map(-1)
    degrees = []
    for v in eigvecs:
        t = 0
        for j in range(k):
            t = (t + v[j] * v[inv_class[j]] * pow(cls[j].size, -1, ell)) % ell
        d2 = n * pow(t, -1, ell) % ell
        d = _sqrt_mod(d2, ell)
        degrees.append(d)
    if sum(d * d for d in degrees) != n:
        raise ArithmeticError("degree recovery failed the sum-of-squares check")

    # -- value lift
    rows = []
    for v, d in zip(eigvecs, degrees):
        # chi(g_c) mod ell
        chi_mod = [d * v[c] * pow(cls[c].size, -1, ell) % ell for c in range(k)]
        values = []
        for c in range(k):
            ec = cls[c].element_order
            if ec == 1:
                values.append(CyclotomicNumber.rational(d))
                continue
            pm = [G.power_class_map(t) for t in range(ec)]
            theta_c = pow(theta, e // ec, ell)
            inv_ec = pow(ec, -1, ell)
            coeffs = {}
            total = 0
            for s in range(ec):
                acc = 0
                for t in range(ec):
                    acc = (acc + chi_mod[pm[t][c]] * pow(theta_c, -s * t % (ell - 1), ell)) % ell
                m = acc * inv_ec % ell
                if m > d:
                    raise ArithmeticError(
                        f"root-of-unity multiplicity {m} exceeds the degree {d}")
                if m:
                    coeffs[s] = Fraction(m)
                total += m
            if total != d:
                raise ArithmeticError("multiplicities do not sum to the degree")
            values.append(CyclotomicNumber(ec, coeffs))
        rows.append(tuple(values))

    # -- deterministic row order: trivial first, then (degree, serialisation)
    one = CyclotomicNumber.rational(1)
    trivial = tuple(one for _ in range(k))

    def key(pair):
        row, d = pair
        return (0 if row == trivial else 1, d,
                tuple(v.serialize() for v in row))

    paired = sorted(zip(rows, degrees), key=key)
    rows = tuple(r for r, _ in paired)
    degrees = tuple(d for _, d in paired)
    if rows[0] != trivial:
        raise ArithmeticError("trivial character missing from the table")
    return CharacterTable(G, rows, degrees)


def _unit_vec(k, i):
    v = [0] * k
    v[i] = 1
    return v


def _split_subspace(A, basis, ell):
    """Split a basis (list of length-k vectors) into eigen-sub-bases of A."""
    k = len(basis[0])
    d = len(basis)
    # pivot positions of the (assumed RREF) basis
    pivots = [_pivot(b) for b in basis]
    R = [[0] * d for _ in range(d)]
    for jdx, b in enumerate(basis):
        y = [0] * k
        for r in range(k):
            ar = A[r]
            acc = 0
            for c in range(k):
                if b[c]:
                    acc += ar[c] * b[c]
            y[r] = acc % ell
        coords = [y[p] for p in pivots]
        # verify containment: y must equal sum coords_i basis_i
        resid = list(y)
        for i, co in enumerate(coords):
            if co:
                bi = basis[i]
                for c in range(k):
                    if bi[c]:
                        resid[c] = (resid[c] - co * bi[c]) % ell
        if any(resid):
            raise ArithmeticError("class matrix does not preserve the subspace")
        for i in range(d):
            R[i][jdx] = coords[i]
    grouped = []
    total = 0
    for lam in _eigenvalues(R, ell):
        shifted = [[(R[i][j] - (lam if i == j else 0)) % ell for j in range(d)]
                   for i in range(d)]
        sub = []
        for alpha in _kernel(shifted, ell):
            vec = [0] * k
            for i, a in enumerate(alpha):
                if a:
                    bi = basis[i]
                    for c in range(k):
                        if bi[c]:
                            vec[c] = (vec[c] + a * bi[c]) % ell
            sub.append(vec)
        if sub:
            grouped.append(_rref(sub, ell))
            total += len(sub)
    if total != d:
        raise ArithmeticError("eigenspace dimensions do not add up")
    return grouped


def _pivot(v):
    for i, x in enumerate(v):
        if x:
            return i
    raise ValueError("zero basis vector")


def _rref(vectors, ell):
    rows = [list(v) for v in vectors]
    cols = len(rows[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, ell)
        rows[r] = [x * inv % ell for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % ell for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows


def _char_poly_mod(R, ell):
    """Characteristic polynomial over GF(ell) via Hessenberg reduction."""
    d = len(R)
    H = [row[:] for row in R]
    for c in range(d - 2):
        piv = next((r for r in range(c + 1, d) if H[r][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            H[c + 1], H[piv] = H[piv], H[c + 1]
            for r in range(d):
                H[r][c + 1], H[r][piv] = H[r][piv], H[r][c + 1]
        inv = pow(H[c + 1][c], -1, ell)
        for r in range(c + 2, d):
            if H[r][c]:
                f = H[r][c] * inv % ell
                for j in range(d):
                    H[r][j] = (H[r][j] - f * H[c + 1][j]) % ell
                for j in range(d):
                    H[j][c + 1] = (H[j][c + 1] + f * H[j][r]) % ell
    # p_i = char poly of leading i x i block of the Hessenberg matrix
    polys = [[1]]
    for i in range(1, d + 1):
        # p_i(x) = (x - H[i-1][i-1]) p_{i-1}(x) - sum_{m} prod(subdiag) H[j][i-1] p_j(x)
        prev = polys[i - 1]
        cur = [0] + prev
        a = H[i - 1][i - 1]
        for idx in range(len(prev)):
            cur[idx] = (cur[idx] - a * prev[idx]) % ell
        prod = 1
        for j in range(i - 1, 0, -1):
            prod = prod * H[j][j - 1] % ell
            coef = prod * H[j - 1][i - 1] % ell
            pj = polys[j - 1]
            for idx in range(len(pj)):
                cur[idx] = (cur[idx] - coef * pj[idx]) % ell
        cur = [x % ell for x in cur]
        polys.append(cur)
    return polys[d]


def _eigenvalues(R, ell):
    """Roots in GF(ell) of the characteristic polynomial, ascending."""
    poly = _char_poly_mod(R, ell)
    out = []
    for lam in range(ell):
        acc = 0
        for c in reversed(poly):
            acc = (acc * lam + c) % ell
        if acc == 0:
            out.append(lam)
    return out


def _kernel(M, ell):
    d = len(M)
    rows = [row[:] for row in M]
    pivots = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, d) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, ell)
        rows[r] = [x * inv % ell for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % ell for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for fc in range(d):
        if fc in pivots:
            continue
        vec = [0] * d
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-rows[i][fc]) % ell
        basis.append(vec)
    return basis


def _sqrt_mod(a, ell):
    """The square root of a mod ell lying below ell/2 (the degree range)."""
    for d in range(ell):
        if d * d % ell == a:
            return d if d < ell - d else ell - d
    raise ArithmeticError(f"{a} is not a square mod {ell}")


# -- induction / restriction -------------------------------------------------


def induce(H: GroupData, G: GroupData, f) -> tuple:
    """Induce the class function f (values per H-class) from the subgroup H
    (its own GroupData over the same elements) to G; exact."""
    cls_G = G.conjugacy_classes()
    cls_H = H.conjugacy_classes()
    buckets: dict[int, list] = {}
    for hc, hcls in enumerate(cls_H):
        j = G.class_of(hcls.rep)
        buckets.setdefault(j, []).append(f[hc] * hcls.size)
    out = []
    for j, gcls in enumerate(cls_G):
        if j in buckets:
            centralizer = G.order // gcls.size
            out.append(cyc_sum(buckets[j]) * Fraction(centralizer, H.order))
        else:
            out.append(CyclotomicNumber.rational(0))
    return tuple(out)


def restrict_row(Gsub: GroupData, T: CharacterTable, i: int) -> tuple:
    """Restriction of row i of T to the subgroup (values per Gsub-class)."""
    vals = []
    for c in Gsub.conjugacy_classes():
        vals.append(T.rows[i][T.group.class_of(c.rep)])
    return tuple(vals)


def restrict_and_decompose(Gsub: GroupData, Tsub: CharacterTable,
                           T: CharacterTable, i: int):
    """Restrict row i of T to Gsub and decompose it in Tsub; returns the
    multiplicity vector."""
    return Tsub.decompose(restrict_row(Gsub, T, i))
