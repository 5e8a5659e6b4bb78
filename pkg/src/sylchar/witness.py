"""Constructive witness elements and their verification.

A witness is a semisimple element of GL_n^eps(q) with odd order whose
conjugacy class separates it from its square and its central translates
while staying stable under declared outer automorphisms (the S1-S4
checklist).  The constructions are block-scalar matrices commuting with
the standard Sylow 2-subgroup, and for characteristic 2 a rank-one torus
element diag(z, 1, .., 1, z^-1).

Refusal is data: when the self-normalising criteria fire, no witness can
exist and build_z raises WitnessRefusal citing the conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .ffield import ff_create
from .intarith import is_two_power, odd_part, prime_power, two_adic, two_part
from .matgroup import (
    GroupSpec,
    are_conjugate,
    contains,
    group_order,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_order,
    format_matrix,
)
from .sylow2 import QDescription, sn2s_with_Q


class WitnessRefusal(RuntimeError):
    """No witness exists; carries the self-normalising conditions that fired."""

    def __init__(self, reason: str, conditions=()):
        super().__init__(reason)
        self.conditions = tuple(conditions)


@dataclass
class WitnessElement:
    spec: GroupSpec                 # the ambient GL_n^eps(q)
    matrix: tuple
    eigenvalues: tuple              # sorted (code, multiplicity) pairs
    construction: dict = dc_field(default_factory=dict)
    eig_field: object = None        # where the eigenvalue codes live
                                    # (defaults to the spec's field)

    def __post_init__(self):
        if self.eig_field is None:
            self.eig_field = self.spec.field

    def literal(self) -> str:
        return format_matrix(self.spec.field, self.spec.n, self.matrix)


@dataclass
class SReport:
    verdicts: dict
    element: WitnessElement

    @property
    def all_pass(self) -> bool:
        return all(v[0] for v in self.verdicts.values())

    def lines(self):
        for key in ("S1", "S2", "S3", "S4"):
            ok, ev = self.verdicts[key]
            yield f"{key}: {'PASS' if ok else 'FAIL'} ({ev})"


def _eigs_of_diag(F, n, M):
    """Eigenvalue multiset of a diagonal matrix, as sorted (code, mult)."""
    from collections import Counter

    diag = [M[i * n + i] for i in range(n)]
    if any(M[i * n + j] for i in range(n) for j in range(n) if i != j):
        raise ValueError("not diagonal")
    return tuple(sorted(Counter(diag).items()))


def build_z(n: int, q: int, eps: int, Q: QDescription | None = None) -> WitnessElement:
    """Block-scalar witness along the 2-adic parts of n: the largest block
    carries lambda^b, the second a primitive (q-eps)_odd (or subfield) root
    lambda, the rest are identity; b makes the determinant 1.

    Refuses (with the fired conditions) whenever the self-normalising
    criteria hold, since then every such element is forced to be central.
    """
    if Q is None:
        Q = QDescription()
    if q % 2 == 0:
        raise ValueError("q must be odd here")
    verdict, fired = sn2s_with_Q(n, q, eps, Q)
    if verdict:
        raise WitnessRefusal(
            f"self-normalising criteria hold (conditions {fired}); "
            f"no non-central witness exists", fired)
    if is_two_power(n):
        raise ValueError("n must not be a 2-power (need at least two blocks)")
    p, a = prime_power(q)
    if eps == 1 and Q.field_powers:
        m = math.gcd(*Q.field_powers) if len(Q.field_powers) > 1 else Q.field_powers[0]
        modulus = odd_part(p**m - 1)
        mode = f"subfield:m={m}"
    else:
        m = None
        modulus = odd_part(q - eps)
        mode = "full-field"
    if modulus == 1:
        raise WitnessRefusal("no odd-order scalars available "
                             f"((q-eps)_odd = 1 in mode {mode})")
    spec = GroupSpec("GL" if eps == 1 else "GU", n, q)
    F = spec.field
    parts = two_adic(n)
    lam2 = F.root_of_unity(modulus)
    b = (-pow(2, -(parts[1] - parts[0]), modulus)) % modulus
    lam1 = F.pow(lam2, b)
    blocks = [lam1, lam2] + [F.one] * (len(parts) - 2)
    M = list(mat_identity(F, n))
    offset = 0
    for lam, r in zip(blocks, parts):
        for i in range(2**r):
            M[(offset + i) * n + (offset + i)] = lam
        offset += 2**r
    M = tuple(M)
    assert mat_det(F, n, M) == F.one
    assert contains(spec, M)
    order = mat_order(F, n, M)
    assert order % 2 == 1
    if len(parts) == 2 and lam1 == lam2:
        raise AssertionError(
            "degenerate block scalars after the criteria gate; arithmetic bug")
    return WitnessElement(
        spec=spec,
        matrix=M,
        eigenvalues=_eigs_of_diag(F, n, M),
        construction={"mode": mode, "modulus": modulus, "b": b,
                      "parts": parts, "order": order,
                      "lambda_codes": tuple(blocks)},
    )


# -- S conditions -------------------------------------------------------------


def _centralizer_order_split(spec: GroupSpec, eigs) -> int:
    """|C| for a split semisimple element: product of GL/GU block orders
    over the eigenvalue multiplicities."""
    kind = "GL" if spec.eps == 1 else "GU"
    out = 1
    for _, mult in eigs:
        out *= group_order(GroupSpec(kind, mult, spec.q))
    return out


def _multiset_pow(F, eigs, e: int):
    from collections import Counter

    c = Counter()
    for code, mult in eigs:
        c[F.pow(code, e)] += mult
    return tuple(sorted(c.items()))


def _multiset_scale(F, eigs, s):
    from collections import Counter

    c = Counter()
    for code, mult in eigs:
        c[F.mul(code, s)] += mult
    return tuple(sorted(c.items()))


def check_S_conditions(w: WitnessElement, Q: QDescription | None = None) -> SReport:
    """S1: odd order and odd 2-part-free index of the centralizer;
    S2: not conjugate to the square; S3: not conjugate to any nontrivial
    central translate; S4: conjugate to every declared field/graph image.
    All conjugacy here is eigenvalue-multiset conjugacy of split
    semisimple elements of GL_n^eps(q)."""
    if Q is None:
        Q = QDescription()
    spec, n = w.spec, w.spec.n
    F = w.eig_field  # eigenvalue codes may live in an extension field
    p = spec.p
    eigs = w.eigenvalues
    verdicts = {}

    order = mat_order(spec.field, n, w.matrix)
    if p == 2:
        s1 = order % 2 == 1
        ev = f"order {order}; p=2 so the odd part of any index is odd"
    else:
        cent = _centralizer_order_split(spec, eigs)
        index = group_order(spec) // cent
        s1 = order % 2 == 1 and two_part(index) == 1
        ev = f"order {order}; [G:C] = {index} with 2-part {two_part(index)}"
    verdicts["S1"] = (s1, ev)

    sq = _multiset_pow(F, eigs, 2)
    verdicts["S2"] = (sq != eigs, f"eigs {eigs} vs squared {sq}")

    emb = (F.embedding_from(spec.field)
           if F is not spec.field else None)
    bad = []
    for c in spec.center_scalar_codes():
        if c == spec.field.one:
            continue
        cc = emb[c] if emb else c
        if _multiset_scale(F, eigs, cc) == eigs:
            bad.append(c)
    verdicts["S3"] = (not bad, f"central translates colliding: {bad or 'none'}")

    images = []
    if Q.graph:
        images.append(("graph", _multiset_pow(F, eigs, -1)))
    if Q.involutary_field:
        images.append(("field:inv", _multiset_pow(F, eigs, spec.q)))
    for m in Q.field_powers:
        images.append((f"field:m={m}", _multiset_pow(F, eigs, p**m)))
    s4 = all(img == eigs for _, img in images)
    verdicts["S4"] = (s4, "; ".join(f"{name}:{'=' if img == eigs else '!='}"
                                    for name, img in images) or "Q declares no field/graph part")
    return SReport(verdicts=verdicts, element=w)


def s2_matches_brute(w: WitnessElement, budget: int = 200_000) -> bool:
    """Cross-check: multiset verdict for S2 equals the conjugator-search
    verdict inside GL_n^eps(q)."""
    spec, F, n = w.spec, w.spec.field, w.spec.n
    sq = mat_mul(F, n, w.matrix, w.matrix)
    multiset_verdict = _multiset_pow(F, w.eigenvalues, 2) == w.eigenvalues
    brute = are_conjugate(spec, w.matrix, sq, cap=budget)
    return multiset_verdict == brute


# -- characteristic 2 witness -------------------------------------------------


def p2_alpha0_witness(n: int, q: int, eps: int, allow_experimental: bool = False) -> WitnessElement:
    """diag(z0, 1, .., 1, z0^-1) in SL_n^eps(q), q = 2^a: z0 of order
    dividing 2^m - 1 with z0^2 != z0^-1 when the odd part m of a exceeds 1,
    of order 5 when a is a 2-power.  The q = 4 linear case has no rational
    diagonal representative and falls back to a companion-block realisation
    (experimental, opt-in)."""
    p, a = prime_power(q)
    if p != 2:
        raise ValueError("this construction is specific to characteristic 2")
    if n < 3:
        raise ValueError("need n >= 3")
    if q == 2:
        raise ValueError("q = 2 has no usable torus here")
    m = odd_part(a)
    spec = GroupSpec("GL" if eps == 1 else "GU", n, q)
    F = spec.field

    if m > 1:
        d = 2**m - 1  # >= 7, so z0^3 != 1 automatically
        zcode = F.root_of_unity(d)
        branch = f"order-{d} (subfield GF(2^{m}))"
    else:
        if (q * q - 1) % 5:
            raise ValueError("field too small for an order-5 element")
        branch = "order-5"
        if eps == 1 and (q - 1) % 5:
            # q = 4: the order-5 eigenvalues live outside GF(q); realise the
            # witness as a companion block instead of a diagonal
            if not allow_experimental:
                raise WitnessRefusal(
                    "q = 4 linear branch needs the experimental companion "
                    "realisation; pass allow_experimental=True")
            return _p2_companion_witness(spec, n, q)
        zcode = F.root_of_unity(5)

    zinv = F.inv(zcode)
    if eps == 1:
        M = list(mat_identity(F, n))
        M[0] = zcode
        M[(n - 1) * n + (n - 1)] = zinv
        M = tuple(M)
    else:
        M = _unitary_diag_witness(spec, zcode)
    assert contains(spec, M) and mat_det(F, n, M) == F.one
    w = WitnessElement(spec=spec, matrix=M,
                       eigenvalues=_eigs_of_diag(F, n, M) if eps == 1 else _eigs_general(spec, M),
                       construction={"branch": branch, "z0": zcode})
    assert mat_order(F, n, w.matrix) % 2 == 1
    return w


def _unitary_diag_witness(spec: GroupSpec, zcode):
    """Place diag(z0, 1, .., 1, z0^-1) inside the identity-form unitary
    group: directly when z0 has norm 1, else transported from the
    antidiagonal form (which needs z0 in GF(q))."""
    from .engine import unitary_form_change

    F, n, q = spec.field, spec.n, spec.q
    zinv = F.inv(zcode)
    M = list(mat_identity(F, n))
    M[0] = zcode
    M[(n - 1) * n + (n - 1)] = zinv
    M = tuple(M)
    if F.pow(zcode, q + 1) == F.one:
        return M
    D = unitary_form_change(q, n)
    out = mat_mul(F, n, D, mat_mul(F, n, M, mat_inv(F, n, D)))
    if not contains(spec, out):
        raise ValueError("z0 admits no rational unitary realisation")
    return out


def _eigs_general(spec, M):
    from .matgroup import eigenvalue_multiset

    ev = eigenvalue_multiset(spec.field, spec.n, M)
    if ev is None:
        raise ValueError("eigenvalues do not split over the defining field")
    return ev


def _p2_companion_witness(spec: GroupSpec, n: int, q: int):
    """q = 4, eps = +1: companion block of x^2 + cx + 1 with c the trace of
    an order-5 element of GF(16); eigenvalues are that element and its
    inverse.  Found by a deterministic scan over the q - 1 candidate traces."""
    F = spec.field
    big = ff_create(2, F.k * 2)
    emb = big.embedding_from(F)
    z0 = big.root_of_unity(5)
    cbig = big.add(z0, big.inv(z0))
    c = next(x for x in range(F.q) if emb[x] == cbig)
    M = list(mat_identity(F, n))
    M[0 * n + 0] = 0
    M[0 * n + 1] = F.one
    M[1 * n + 0] = F.one
    M[1 * n + 1] = c
    M = tuple(M)
    assert contains(spec, M) and mat_det(F, n, M) == F.one
    assert mat_order(F, n, M) == 5
    from collections import Counter

    eig_pairs = tuple(sorted(Counter({z0: 1, big.inv(z0): 1,
                                      big.one: n - 2}).items()))
    return WitnessElement(spec=spec, matrix=M, eigenvalues=eig_pairs,
                          construction={"branch": "order-5 companion (experimental)",
                                        "trace_code": c, "eig_field": big.q},
                          eig_field=big)


# -- 2-power pre-images --------------------------------------------------------


def two_power_preimage(spec: GroupSpec, sbar):
    """Scan the centre coset of a projective element for a 2-power-order
    pre-image in GL_n^eps(q).  Returns (element_or_None, transcript)."""
    if not spec.is_projective:
        raise ValueError("spec must be projective")
    mspec = spec.matrix_spec()
    gl = GroupSpec("GL" if spec.eps == 1 else "GU", spec.n, spec.q)
    F, n = gl.field, spec.n
    transcript = []
    found = None
    for c in gl.center_scalar_codes():
        cand = tuple(F.mul(c, x) for x in sbar)
        o = mat_order(F, n, cand)
        transcript.append((c, o))
        if found is None and o & (o - 1) == 0:
            found = cand
    if found is not None:
        assert mat_order(F, n, found) & (mat_order(F, n, found) - 1) == 0
    return found, transcript


# -- torus degeneracy ----------------------------------------------------------


def torus_degenerate(n: int, q: int, eps: int, budget: int = 10**6) -> bool:
    """Does some root (ratio of diagonal entries) vanish on the whole
    rational diagonal torus of SL_n^eps(q)?  The torus is enumerated: for
    eps = +1 tuples over GF(q)* with product 1, for eps = -1 tuples of
    norm-1 scalars with product 1 (identity Hermitian form)."""
    d = q - eps
    if d ** (n - 1) > budget:
        raise ValueError("torus too large to enumerate")
    spec = GroupSpec("GL" if eps == 1 else "GU", n, q)
    F = spec.field
    if d == 0:
        raise ValueError("bad parameters")
    mu = []
    if eps == 1:
        gen = F.generator if q > 2 else F.one
        cur = F.one
        for _ in range(d):
            mu.append(cur)
            cur = F.mul(cur, gen)
    else:
        z = F.root_of_unity(q + 1)
        cur = F.one
        for _ in range(d):
            mu.append(cur)
            cur = F.mul(cur, z)
    mu = sorted(set(mu))
    # does some coordinate pair agree on every torus element?
    pair_diff = [[False] * n for _ in range(n)]

    def rec(i, acc, prod):
        if i == n - 1:
            last = F.inv(prod)
            if last not in mu_set:
                return
            full = acc + [last]
            for r in range(n):
                for c in range(n):
                    if r != c and full[r] != full[c]:
                        pair_diff[r][c] = True
            return
        for v in mu:
            rec(i + 1, acc + [v], F.mul(prod, v))

    mu_set = set(mu)
    rec(0, [], F.one)
    for r in range(n):
        for c in range(n):
            if r != c and not pair_diff[r][c]:
                return True
    return False


# -- SL_4 identities -----------------------------------------------------------


def _sl4_unipotents(F):
    I2 = (F.one, 0, 0, F.one)
    J = (F.one, F.one, 0, F.one)

    def blockdiag(A, B):
        out = [0] * 16
        for i in range(2):
            for j in range(2):
                out[i * 4 + j] = A[i * 2 + j]
                out[(2 + i) * 4 + (2 + j)] = B[i * 2 + j]
        return tuple(out)

    return [blockdiag(J, J), blockdiag(J, I2), blockdiag(I2, J), blockdiag(I2, I2)]


def sl4_torus_identity(q: int, twisted: bool) -> bool:
    """For t = diag(2a, a, a^-1, (2a)^-1): t u t^-1 = u^2 for the four
    block unipotents, and t^-1 F'(t) is diagonal and centralises u; a runs
    over the rational points of the quadratic extension so the Frobenius
    part is non-vacuous."""
    p, k = prime_power(q)
    if p == 2:
        raise ValueError("q must be odd")
    F = ff_create(p, 2 * k)
    two = 2 % p
    perm = [2, 3, 0, 1]  # the double transposition (1,3)(2,4)
    us = _sl4_unipotents(F)
    for acode in range(1, F.q):
        a = acode
        t = [0] * 16
        t[0] = F.mul(two, a)
        t[5] = a
        t[10] = F.inv(a)
        t[15] = F.inv(F.mul(two, a))
        t = tuple(t)
        tinv = mat_inv(F, 4, t)
        for u in us:
            if mat_mul(F, 4, t, mat_mul(F, 4, u, tinv)) != mat_mul(F, 4, u, u):
                return False
            ft = tuple(F.frobenius(x, k) for x in t)
            if twisted:
                ft = tuple(ft[perm[i] * 4 + perm[j]] for i in range(4) for j in range(4))
            s = mat_mul(F, 4, tinv, ft)
            if any(s[i * 4 + j] for i in range(4) for j in range(4) if i != j):
                return False
            if mat_mul(F, 4, s, u) != mat_mul(F, 4, u, s):
                return False
    return True


def sl4_nonregular_square_conjugacy(q: int, cap: int = 200_000):
    """Explicit det-1 conjugators carrying each non-regular unipotent of
    SL_4(q) to its square; returns {partition: conjugator}."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    p, k = prime_power(q)
    F = ff_create(p, k)
    spec = GroupSpec("SL", 4, q)
    I = mat_identity(F, 4)

    def jordan(partition):
        M = list(I)
        pos = 0
        for part in partition:
            for i in range(part - 1):
                M[(pos + i) * 4 + (pos + i + 1)] = F.one
            pos += part
        return tuple(M)

    from .matgroup import find_conjugator

    out = {}
    for partition in ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1)):
        u = jordan(tuple(sorted(partition, reverse=True)))
        usq = mat_mul(F, 4, u, u)
        if u == usq:
            out[partition] = I
            continue
        g = find_conjugator(spec, u, usq, cap=cap)
        if g is None:
            raise ArithmeticError(f"no SL_4({q}) conjugator for partition {partition}")
        assert mat_mul(F, 4, mat_mul(F, 4, g, u), mat_inv(F, 4, g)) == usq
        assert mat_det(F, 4, g) == F.one
        out[partition] = g
    return out
