"""Matrix groups GL/SL/GU/SU and their central quotients over GF(q).

Matrices are flat tuples of field codes, row-major, length n*n.  Unitary
groups use the identity Hermitian form: M is unitary iff conj(M)^T M = I,
where conj is the entrywise q-power Frobenius on GF(q^2).  Projective
elements are canonical coset representatives: the lexicographically least
matrix in the central orbit.

Conjugacy in GL is decided by rational canonical forms; in the other
kinds by eigenvalue multisets (semisimple split case) or by a constrained
search through the space of intertwining matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .ffield import FiniteField, ff_create
from .intarith import prime_power

LINEAR_KINDS = ("GL", "SL", "PGL", "PSL")
UNITARY_KINDS = ("GU", "SU", "PGU", "PSU")
MATRIX_OF = {"PGL": "GL", "PSL": "SL", "PGU": "GU", "PSU": "SU",
             "GL": "GL", "SL": "SL", "GU": "GU", "SU": "SU"}


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int
    q: int

    def __post_init__(self):
        if self.kind not in MATRIX_OF:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        prime_power(self.q)

    # -- basic attributes -------------------------------------------------

    @property
    def eps(self) -> int:
        return 1 if self.kind in LINEAR_KINDS else -1

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def is_projective(self) -> bool:
        return self.kind.startswith("P")

    @property
    def matrix_kind(self) -> str:
        return MATRIX_OF[self.kind]

    @property
    def field(self) -> FiniteField:
        p, a = prime_power(self.q)
        return ff_create(p, a if self.eps == 1 else 2 * a)

    @property
    def frob_power(self) -> int:
        """m with x -> x^(p^m) the conjugation of the unitary form (0 if linear)."""
        return 0 if self.eps == 1 else prime_power(self.q)[1]

    def matrix_spec(self) -> "GroupSpec":
        return GroupSpec(self.matrix_kind, self.n, self.q)

    def __str__(self):
        return f"{self.kind}({self.n},{self.q},{'+1' if self.eps == 1 else '-1'})"

    @staticmethod
    def parse(text: str) -> "GroupSpec":
        text = text.strip()
        try:
            kind, rest = text.split("(", 1)
            parts = [s.strip() for s in rest.rstrip(")").split(",")]
            n, q = int(parts[0]), int(parts[1])
            spec = GroupSpec(kind.strip(), n, q)
            if len(parts) >= 3:
                eps = int(parts[2])
                if eps != spec.eps:
                    raise ValueError(f"epsilon {eps:+d} conflicts with kind {kind}")
            return spec
        except (ValueError, IndexError) as exc:
            raise ValueError(f"bad group spec {text!r}: {exc}") from None

    # -- orders and centres ----------------------------------------------

    def order(self) -> int:
        return group_order(self)

    def center_scalar_codes(self) -> tuple[int, ...]:
        """Codes c with c*I central in the underlying matrix group."""
        F = self.field
        q, n, eps = self.q, self.n, self.eps
        if self.matrix_kind in ("GL", "GU"):
            d = q - eps
        else:
            d = math.gcd(n, q - eps)
        if d == 1:
            return (F.one,)
        z = F.root_of_unity(d)
        out, cur = [], F.one
        for _ in range(d):
            out.append(cur)
            cur = F.mul(cur, z)
        return tuple(sorted(out))


def group_order(spec: GroupSpec) -> int:
    """Order formulas: |GL_n^eps(q)| = q^(n(n-1)/2) prod (q^i - eps^i)."""
    n, q, eps = spec.n, spec.q, spec.eps
    gl = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        gl *= q**i - eps**i
    kind = spec.kind
    if kind in ("GL", "GU"):
        return gl
    if kind in ("SL", "SU"):
        return gl // (q - eps)
    if kind in ("PGL", "PGU"):
        return gl // (q - eps)
    # PSL / PSU
    return gl // (q - eps) // math.gcd(n, q - eps)


# -- matrix primitives ----------------------------------------------------


def mat_identity(F: FiniteField, n: int) -> tuple[int, ...]:
    return tuple(F.one if i == j else 0 for i in range(n) for j in range(n))


def mat_scalar(F: FiniteField, n: int, c: int) -> tuple[int, ...]:
    return tuple(c if i == j else 0 for i in range(n) for j in range(n))


def mat_mul(F: FiniteField, n: int, A, B) -> tuple[int, ...]:
    mul, add = F.mul, F.add
    out = [0] * (n * n)
    for i in range(n):
        base = i * n
        for k in range(n):
            a = A[base + k]
            if a:
                kb = k * n
                for j in range(n):
                    b = B[kb + j]
                    if b:
                        out[base + j] = add(out[base + j], mul(a, b))
    return tuple(out)


def mat_transpose(n: int, A) -> tuple[int, ...]:
    return tuple(A[j * n + i] for i in range(n) for j in range(n))


def mat_frobenius(F: FiniteField, A, m: int) -> tuple[int, ...]:
    frob = F.frobenius
    return tuple(frob(a, m) for a in A)


def mat_conj_transpose(F: FiniteField, n: int, A, m: int) -> tuple[int, ...]:
    return mat_transpose(n, mat_frobenius(F, A, m))


def mat_det(F: FiniteField, n: int, A) -> int:
    rows = [list(A[i * n:(i + 1) * n]) for i in range(n)]
    det = F.one
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = F.neg(det)
        det = F.mul(det, rows[c][c])
        inv = F.inv(rows[c][c])
        for r in range(c + 1, n):
            f = F.mul(rows[r][c], inv)
            if f:
                for j in range(c, n):
                    rows[r][j] = F.sub(rows[r][j], F.mul(f, rows[c][j]))
    return det


def mat_inv(F: FiniteField, n: int, A) -> tuple[int, ...]:
    rows = [list(A[i * n:(i + 1) * n]) + [F.one if j == i else 0 for j in range(n)]
            for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix not invertible")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = F.inv(rows[c][c])
        rows[c] = [F.mul(v, inv) for v in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[r], rows[c])]
    return tuple(rows[i][n + j] for i in range(n) for j in range(n))


def mat_pow(F: FiniteField, n: int, A, e: int) -> tuple[int, ...]:
    if e < 0:
        return mat_pow(F, n, mat_inv(F, n, A), -e)
    R = mat_identity(F, n)
    while e:
        if e & 1:
            R = mat_mul(F, n, R, A)
        A = mat_mul(F, n, A, A)
        e >>= 1
    return R


def mat_order(F: FiniteField, n: int, A, cap: int = 10**7) -> int:
    I = mat_identity(F, n)
    X = A
    for k in range(1, cap + 1):
        if X == I:
            return k
        X = mat_mul(F, n, X, A)
    raise BudgetExceeded("element order exceeds cap")


def mat_trace(F: FiniteField, n: int, A) -> int:
    t = 0
    for i in range(n):
        t = F.add(t, A[i * n + i])
    return t


# -- membership and centre ---------------------------------------------


def contains(spec: GroupSpec, M) -> bool:
    """Defining-condition membership for the underlying matrix kind; for
    projective kinds, membership of the representative in the matrix kind."""
    F, n = spec.field, spec.n
    if len(M) != n * n:
        raise ValueError("wrong matrix size")
    if any(not 0 <= a < F.q for a in M):
        raise ValueError("entry outside field")
    det = mat_det(F, n, M)
    if det == 0:
        return False
    kind = spec.matrix_kind
    if kind in ("SL", "SU") and det != F.one:
        return False
    if kind in ("GU", "SU"):
        if mat_mul(F, n, mat_conj_transpose(F, n, M, spec.frob_power), M) != mat_identity(F, n):
            return False
    return True


def project(spec: GroupSpec, M) -> tuple[int, ...]:
    """Canonical coset representative modulo the central scalars: the
    lexicographically least matrix in the orbit."""
    if not spec.is_projective:
        return M
    F, n = spec.field, spec.n
    best = M
    for c in spec.center_scalar_codes():
        if c == F.one:
            continue
        cand = tuple(F.mul(c, a) for a in M)
        if cand < best:
            best = cand
    return best


# -- automorphisms --------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismDesc:
    """field_power m: entrywise x -> x^(p^m); graph: inverse-transpose
    twisted by the antidiagonal permutation; diagonal_conjugator: optional
    conjugating matrix.  Applied as diagonal o graph o field."""

    field_power: int = 0
    graph: bool = False
    diagonal_conjugator: tuple[int, ...] | None = None

    def is_identity(self) -> bool:
        return self.field_power == 0 and not self.graph and self.diagonal_conjugator is None

    def describe(self) -> str:
        parts = []
        if self.field_power:
            parts.append(f"field:m={self.field_power}")
        if self.graph:
            parts.append("graph")
        if self.diagonal_conjugator is not None:
            parts.append("diag")
        return "*".join(parts) or "id"


@lru_cache(maxsize=None)
def _antidiag(field_key, n: int):
    F = ff_create(*field_key)
    return tuple(F.one if i + j == n - 1 else 0 for i in range(n) for j in range(n))


def apply_automorphism(spec: GroupSpec, M, aut: AutomorphismDesc):
    F, n = spec.field, spec.n
    out = M
    if aut.field_power:
        out = mat_frobenius(F, out, aut.field_power)
    if aut.graph:
        n0 = _antidiag((F.p, F.k), n)
        out = mat_mul(F, n, n0, mat_mul(F, n, mat_transpose(n, mat_inv(F, n, out)), n0))
    if aut.diagonal_conjugator is not None:
        d = aut.diagonal_conjugator
        out = mat_mul(F, n, d, mat_mul(F, n, out, mat_inv(F, n, d)))
    if spec.is_projective:
        out = project(spec, out)
    return out


def inverse_automorphism_apply(spec: GroupSpec, M, aut: AutomorphismDesc):
    """Apply the inverse of aut (used for the character-level action)."""
    F, n = spec.field, spec.n
    out = M
    if aut.diagonal_conjugator is not None:
        d = aut.diagonal_conjugator
        out = mat_mul(F, n, mat_inv(F, n, d), mat_mul(F, n, out, d))
    if aut.graph:
        n0 = _antidiag((F.p, F.k), n)
        out = mat_mul(F, n, n0, mat_mul(F, n, mat_transpose(n, mat_inv(F, n, out)), n0))
    if aut.field_power:
        out = mat_frobenius(F, out, (-aut.field_power) % F.k)
    if spec.is_projective:
        out = project(spec, out)
    return out


# -- polynomials over a field (low-degree-first code lists) ---------------


def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _ptrim(out)


def _pdivmod(F, f, g):
    f = list(f)
    if not g:
        raise ZeroDivisionError
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = F.inv(g[-1])
    while len(f) >= len(g) and f:
        c = F.mul(f[-1], inv)
        shift = len(f) - len(g)
        q[shift] = c
        for j in range(len(g)):
            f[shift + j] = F.sub(f[shift + j], F.mul(c, g[j]))
        _ptrim(f)
    return _ptrim(q), f


def _pmonic(F, f):
    if not f or f[-1] == F.one:
        return list(f)
    inv = F.inv(f[-1])
    return [F.mul(inv, c) for c in f]


def char_poly(F: FiniteField, n: int, M) -> tuple[int, ...]:
    """det(xI - M) via Smith form of the characteristic matrix."""
    facs = invariant_factors(F, n, M)
    out = [F.one]
    for f in facs:
        out = _pmul(F, out, list(f))
    return tuple(out)


def invariant_factors(F: FiniteField, n: int, M) -> tuple[tuple[int, ...], ...]:
    """Nonconstant invariant factors f_1 | f_2 | ... of xI - M, monic.

    Equality of these lists is exactly GL_n-conjugacy.
    """
    # polynomial matrix xI - M
    P = [[([F.neg(M[i * n + j])] if M[i * n + j] or i == j else [])
          for j in range(n)] for i in range(n)]
    for i in range(n):
        e = P[i][i]
        P[i][i] = _ptrim(([e[0]] if e else [0]) + [F.one])
    for t in range(n):
        while True:
            # pick the minimal-degree nonzero pivot in the trailing block
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    if P[i][j] and (piv is None or len(P[i][j]) < len(P[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                P[t][t] = []
                break
            pi, pj = piv
            P[t], P[pi] = P[pi], P[t]
            for row in P:
                row[t], row[pj] = row[pj], row[t]
            dirty = False
            for i in range(t + 1, n):
                if P[i][t]:
                    q, r = _pdivmod(F, P[i][t], P[t][t])
                    if q:
                        for j in range(t, n):
                            P[i][j] = _ptrim([F.sub(a, b) for a, b in
                                              _zip_pad(F, P[i][j], _pmul(F, q, P[t][j]))])
                    if _ptrim(list(r)):
                        dirty = True
            for j in range(t + 1, n):
                if P[t][j]:
                    q, r = _pdivmod(F, P[t][j], P[t][t])
                    if q:
                        for i in range(t, n):
                            P[i][j] = _ptrim([F.sub(a, b) for a, b in
                                              _zip_pad(F, P[i][j], _pmul(F, q, P[i][t]))])
                    if _ptrim(list(r)):
                        dirty = True
            if dirty:
                continue
            if any(P[i][t] for i in range(t + 1, n)) or any(P[t][j] for j in range(t + 1, n)):
                continue
            # divisibility fix-up: pivot must divide the rest of the block
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if P[i][j] and _pdivmod(F, P[i][j], P[t][t])[1]:
                        offender = i
                        break
                if offender:
                    break
            if offender is None:
                break
            for j in range(t, n):
                P[t][j] = _ptrim([F.add(a, b) for a, b in _zip_pad(F, P[t][j], P[offender][j])])
    diag = [_pmonic(F, P[i][i]) for i in range(n)]
    facs = [tuple(f) for f in diag if len(f) > 1]
    facs.sort(key=len)
    return tuple(facs)


def _zip_pad(F, f, g):
    L = max(len(f), len(g))
    return zip(list(f) + [0] * (L - len(f)), list(g) + [0] * (L - len(g)))


rational_canonical_form = invariant_factors


def eigenvalue_multiset(F: FiniteField, n: int, M):
    """Sorted (eigenvalue code, multiplicity) pairs if the characteristic
    polynomial splits over F; None otherwise."""
    poly = list(char_poly(F, n, M))
    out = []
    for root in range(F.q):
        mult = 0
        while len(poly) > 1:
            q, r = _pdivmod(F, poly, [F.neg(root), F.one])
            if r:
                break
            poly = q
            mult += 1
        if mult:
            out.append((root, mult))
        if len(poly) == 1:
            break
    if len(poly) > 1:
        return None
    return tuple(sorted(out))


def is_semisimple_split(F: FiniteField, n: int, M) -> bool:
    """Diagonalisable over F: char poly splits and eigenspaces fill n."""
    ev = eigenvalue_multiset(F, n, M)
    if ev is None:
        return False
    total = 0
    for root, mult in ev:
        shifted = tuple(F.sub(a, root) if i % (n + 1) == 0 else a
                        for i, a in enumerate(M))
        total += n - _mat_rank(F, n, shifted)
    return total == n


def _mat_rank(F: FiniteField, n: int, A) -> int:
    rows = [list(A[i * n:(i + 1) * n]) for i in range(n)]
    rank = 0
    for c in range(n):
        piv = next((r for r in range(rank, n) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][c])
        for r in range(rank + 1, n):
            if rows[r][c]:
                f = F.mul(rows[r][c], inv)
                rows[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# -- conjugacy -------------------------------------------------------------


def intertwiner_basis(F: FiniteField, n: int, A, B):
    """Basis of {X : X A = B X} as flat matrices (kernel of a linear map)."""
    # unknowns X[r][s]; equation coefficients: sum_s X[r][s] A[s][c] - sum_s B[r][s] X[s][c] = 0
    rows = []
    for r in range(n):
        for c in range(n):
            row = [0] * (n * n)
            for s in range(n):
                row[r * n + s] = F.add(row[r * n + s], A[s * n + c])
                row[s * n + c] = F.sub(row[s * n + c], B[r * n + s])
            rows.append(row)
    return _kernel_basis(F, rows, n * n)


def _kernel_basis(F, rows, width):
    m = len(rows)
    rank = 0
    pivots = []
    for c in range(width):
        piv = next((r for r in range(rank, m) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][c])
        rows[rank] = [F.mul(v, inv) for v in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * width
        vec[fc] = F.one
        for r, pc in enumerate(pivots):
            vec[pc] = F.neg(rows[r][fc])
        basis.append(tuple(vec))
    return basis


def _iter_combinations(F: FiniteField, basis, cap):
    """All nonzero F-linear combinations of the basis, lexicographic in
    coefficient codes; deterministic."""
    d = len(basis)
    total = F.q**d
    if total > cap:
        raise BudgetExceeded(f"intertwiner search space {total} exceeds cap {cap}")
    width = len(basis[0]) if basis else 0
    coeffs = [0] * d
    for counter in range(1, total):
        # increment base-q counter
        i = 0
        while True:
            coeffs[i] += 1
            if coeffs[i] < F.q:
                break
            coeffs[i] = 0
            i += 1
        vec = [0] * width
        for ci, c in enumerate(coeffs):
            if c:
                bv = basis[ci]
                for j in range(width):
                    if bv[j]:
                        vec[j] = F.add(vec[j], F.mul(c, bv[j]))
        yield tuple(vec)


def find_conjugator(spec: GroupSpec, A, B, cap: int = 300_000):
    """First X in the spec's matrix group with X A X^-1 = B, scanning the
    intertwiner space deterministically; None if no such X exists."""
    F, n = spec.field, spec.n
    if invariant_factors(F, n, A) != invariant_factors(F, n, B):
        return None
    basis = intertwiner_basis(F, n, A, B)
    if not basis:
        return None
    mspec = spec.matrix_spec()
    for X in _iter_combinations(F, basis, cap):
        if mat_det(F, n, X) == 0:
            continue
        if contains(mspec, X):
            return X
    return None


def are_conjugate(spec: GroupSpec, A, B, cap: int = 300_000, want_conjugator: bool = False):
    """Conjugacy of A and B inside the group of spec.

    GL-kinds use invariant-factor equality; GU/SU semisimple split elements
    use eigenvalue multisets (centralisers are connected products of
    unitary blocks, so the multiset decides); everything else searches the
    intertwiner space under the kind's determinant/form constraint.
    Projective kinds quantify over central scalar twists.
    """
    F, n = spec.field, spec.n
    scalars = spec.center_scalar_codes() if spec.is_projective else (F.one,)
    for lam in scalars:
        B2 = tuple(F.mul(lam, b) for b in B) if lam != F.one else B
        res = _conjugate_matrix(spec, A, B2, cap, want_conjugator)
        if want_conjugator:
            ok, g = res
            if ok:
                return True, g
        elif res:
            return True
    return (False, None) if want_conjugator else False


def _conjugate_matrix(spec: GroupSpec, A, B, cap, want_conjugator):
    F, n = spec.field, spec.n
    kind = spec.matrix_kind
    same_rcf = invariant_factors(F, n, A) == invariant_factors(F, n, B)
    if not same_rcf:
        return (False, None) if want_conjugator else False
    if kind == "GL" and not want_conjugator:
        return True
    if not want_conjugator and kind in ("SL", "GU", "SU"):
        evA = eigenvalue_multiset(F, n, A)
        if evA is not None and is_semisimple_split(F, n, A):
            if kind in ("GU", "SU"):
                # split semisimple: unitary block centralisers surject onto
                # every determinant, so the multiset decides
                return evA == eigenvalue_multiset(F, n, B)
            # SL: determinants of the GL-centraliser cover F* for split
            # semisimple elements (diagonal blocks), so GL-conjugacy decides
            return True
    g = find_conjugator(spec, A, B, cap)
    if want_conjugator:
        return (g is not None), g
    return g is not None


# -- matrix literals -------------------------------------------------------


def format_matrix(F: FiniteField, n: int, M) -> str:
    """Literal form `GF(q):[g^0,g^2;0,g^1]`: discrete-log indices or 0."""
    rows = []
    for i in range(n):
        cells = []
        for j in range(n):
            a = M[i * n + j]
            if a == 0:
                cells.append("0")
            elif F._tabled:
                cells.append(f"g^{F._log[a]}")
            else:
                cells.append(f"#{a}")
        rows.append(",".join(cells))
    return f"GF({F.q}):[" + ";".join(rows) + "]"


def parse_matrix(text: str):
    """Inverse of format_matrix; returns (field, n, matrix)."""
    head, body = text.split(":", 1)
    q = int(head.strip()[3:-1])
    p, k = prime_power(q)
    F = ff_create(p, k)
    body = body.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"bad matrix literal {text!r}")
    rows = body[1:-1].split(";")
    n = len(rows)
    out = []
    for row in rows:
        cells = row.split(",")
        if len(cells) != n:
            raise ValueError("matrix literal is not square")
        for cell in cells:
            cell = cell.strip()
            if cell == "0":
                out.append(0)
            elif cell.startswith("g^"):
                out.append(F.pow(F.generator, int(cell[2:])))
            elif cell.startswith("#"):
                out.append(int(cell[1:]))
            else:
                raise ValueError(f"bad cell {cell!r}")
    return F, n, tuple(out)
