"""Generalised Gelfand-Graev characters for GL_n(q) and SL_n(q), p odd.

The construction: a Jordan partition determines a weight grading of the
standard basis (each block contributes d-1, d-3, ..., 1-d, merged in
descending order); U(level) is the unipotent subgroup supported on
positions where the weight drops by at least the level.  The linear
character of U(2) attached to a nilpotent e in the exact-degree-2 layer is
x -> additive_character(trace(e^T (x - 1))), and the GGGR is its induction
to the group, scaled down by the square root of [U(1):U(2)] (an even power
of q, asserted).
"""

from __future__ import annotations

from fractions import Fraction

from .chartab import CharacterTable, induce
from .cyclotomic import CyclotomicNumber
from .engine import GroupData, SubgroupHandle
from .intarith import prime_power
from .matgroup import mat_identity, mat_mul

from dataclasses import dataclass


@dataclass(frozen=True)
class NilpotentData:
    partition: tuple[int, ...]
    weights: tuple[int, ...]
    labels: tuple[tuple[int, int], ...]   # adapted-basis labels (block, slot)
    e: tuple                               # nilpotent matrix, adapted basis
    u: tuple                               # e + 1


def jordan_cocharacter(partition) -> tuple[int, ...]:
    """Merged descending weight vector of the blocks d-1, d-3, ..., 1-d."""
    partition = tuple(sorted(partition, reverse=True))
    if any(d < 1 for d in partition):
        raise ValueError("partition parts must be positive")
    tagged = []
    for b, d in enumerate(partition):
        for s in range(d):
            tagged.append((d - 1 - 2 * s, b, s))
    tagged.sort(key=lambda t: (-t[0], t[1], t[2]))
    return tuple(t[0] for t in tagged)


def build_nilpotent(F, partition) -> NilpotentData:
    partition = tuple(sorted(partition, reverse=True))
    n = sum(partition)
    tagged = []
    for b, d in enumerate(partition):
        for s in range(d):
            tagged.append((d - 1 - 2 * s, b, s))
    tagged.sort(key=lambda t: (-t[0], t[1], t[2]))
    weights = tuple(t[0] for t in tagged)
    labels = tuple((b, s) for _, b, s in tagged)
    pos = {lab: i for i, lab in enumerate(labels)}
    e = [0] * (n * n)
    for b, d in enumerate(partition):
        for s in range(d - 1):
            e[pos[(b, s)] * n + pos[(b, s + 1)]] = F.one
    enil = tuple(e)
    u = tuple(v if i % (n + 1) else F.add(v, F.one)
              for i, v in enumerate(enil))
    nil = NilpotentData(partition=partition, weights=weights, labels=labels,
                        e=enil, u=u)
    for i in range(n):
        for j in range(n):
            if enil[i * n + j] and weights[i] - weights[j] != 2:
                raise AssertionError("nilpotent escapes the degree-2 layer")
    return nil


def weight_positions(weights, level: int):
    n = len(weights)
    return tuple((i, j) for i in range(n) for j in range(n)
                 if i != j and weights[i] - weights[j] >= level)


def weight_subgroup_elements(F, weights, level: int, budget: int = 200_000):
    """All members of U(level): unipotent matrices supported (off the
    diagonal) on positions with weight drop >= level."""
    n = len(weights)
    pos = weight_positions(weights, level)
    total = F.q ** len(pos)
    if total > budget:
        raise ValueError(f"|U({level})| = {total} over budget")
    out = []
    base = list(mat_identity(F, n))
    for counter in range(total):
        m = base[:]
        c = counter
        for (i, j) in pos:
            m[i * n + j] = c % F.q
            c //= F.q
        out.append(tuple(m))
    return out


def kawanaka_map(F, n, x):
    """x - 1; on restricted unipotent pieces this is the required
    unipotent-to-nilpotent isomorphism."""
    return tuple(v if i % (n + 1) else F.sub(v, F.one) for i, v in enumerate(x))


def weight_level(weights, M, F):
    """Largest i such that M - 1 is supported on weight drops >= i
    (0 for the identity... infinity conventionally; returns n*4 cap)."""
    n = len(weights)
    best = 4 * n
    for i in range(n):
        for j in range(n):
            if (i != j or True) and M[i * n + j] != (F.one if i == j else 0):
                drop = weights[i] - weights[j]
                best = min(best, drop)
    return best


def additive_character_value(F, code) -> CyclotomicNumber:
    """zeta_p raised to the absolute trace of the field element."""
    t = F.trace(code)
    if t == 0:
        return CyclotomicNumber.rational(1)
    return CyclotomicNumber.zeta(F.p, t)


def phi_u(F, nil: NilpotentData, x) -> CyclotomicNumber:
    """Linear character of U(2): additive character of trace(e^T (x-1))."""
    n = len(nil.weights)
    acc = 0
    # trace(e^T N) = sum over supported positions of e of e_ij * N_ij
    for i in range(n):
        for j in range(n):
            if nil.e[i * n + j]:
                nij = x[i * n + j] if i != j else F.sub(x[i * n + j], F.one)
                acc = F.add(acc, F.mul(nil.e[i * n + j], nij))
    return additive_character_value(F, acc)


def gggr_character(G: GroupData, nil: NilpotentData, e_override=None):
    """The GGGR attached to the partition, as exact values per class of G.

    e_override replaces the base nilpotent (used when comparing against the
    GGGR of a power of u placed into the same weight filtration)."""
    spec = G.spec
    if spec is None:
        raise ValueError("needs a spec-built group")
    F = spec.field
    p, _ = prime_power(spec.q)
    if p == 2:
        raise ValueError("defined here for odd characteristic only")
    n = spec.n
    weights = nil.weights
    u1 = weight_subgroup_elements(F, weights, 1)
    u2 = weight_subgroup_elements(F, weights, 2)
    index = len(u1) // len(u2)
    # the index is q^(number of drop-exactly-1 position pairs), even in type A
    import math

    power = round(math.log(index, F.q)) if index > 1 else 0
    if F.q**power != index or power % 2:
        raise AssertionError(f"[U(1):U(2)] = {index} is not an even power of q")
    scale = Fraction(1, F.q ** (power // 2))

    H = SubgroupHandle(G, u2).as_group()
    nil_eff = nil if e_override is None else NilpotentData(
        partition=nil.partition, weights=nil.weights, labels=nil.labels,
        e=e_override, u=tuple(v if i % (n + 1) else F.add(v, F.one)
                              for i, v in enumerate(e_override)))
    f = []
    for c in H.conjugacy_classes():
        f.append(phi_u(F, nil_eff, c.rep))
    # linear character: verify the homomorphism property on the generators
    ind = induce(H, G, tuple(f))
    return tuple(v * scale for v in ind)


def gggr_is_regular_character(G: GroupData, values) -> bool:
    """Does the class function equal the regular character?"""
    for c, cls in enumerate(G.conjugacy_classes()):
        expect = G.order if cls.element_order == 1 else 0
        if values[c] != CyclotomicNumber.rational(expect):
            return False
    return True


def find_power_representative(G: GroupData, nil: NilpotentData, k: int):
    """First conjugate (in enumeration order) of u^k lying in U(2) with its
    displacement supported on exact weight-drop 2: the base point for the
    GGGR of u^k inside the same filtration."""
    spec = G.spec
    F = spec.field
    n = spec.n
    weights = nil.weights
    uk = G.power(nil.u, k)
    exact2 = set(weight_positions(weights, 2))
    strict = {(i, j) for (i, j) in exact2 if weights[i] - weights[j] == 2}
    mul, inv = G.mul, G.inv
    for x in G.elements:
        v = mul(mul(x, uk), inv(x))
        ok = True
        for i in range(n):
            if not ok:
                break
            for j in range(n):
                if i == j:
                    if v[i * n + j] != F.one:
                        ok = False
                        break
                elif v[i * n + j]:
                    if (i, j) not in strict:
                        ok = False
                        break
        if ok:
            return kawanaka_map(F, n, v)
    raise ArithmeticError("no representative of the power class meets the "
                          "exact degree-2 layer")


def verify_gggr_galois(G: GroupData, nil: NilpotentData, k: int,
                       values=None) -> bool:
    """Exact check that applying the Galois map zeta_p -> zeta_p^k to the
    GGGR of u gives the GGGR of u^k."""
    spec = G.spec
    p = spec.p
    if k % p == 0:
        raise ValueError("power must be coprime to p")
    if values is None:
        values = gggr_character(G, nil)
    lhs = tuple(v.galois(k % v.e) if v.e > 1 else v for v in values)
    e2 = find_power_representative(G, nil, k)
    rhs = gggr_character(G, nil, e_override=e2)
    return lhs == rhs


def gggr_value_field_report(values, spec, T: CharacterTable | None = None):
    """Field-of-values report: every value lies in Q(sqrt(eta p)) with
    p = eta mod 4; integrality in the square-field / odd-n / even-quotient
    cases."""
    import math as _math

    from .cyclotomic import quadratic_field_member
    from .intarith import odd_part

    p, a = prime_power(spec.q)
    eta = 1 if p % 4 == 1 else -1
    in_quad = all(quadratic_field_member(v, eta, p) for v in values)
    n, q, eps = spec.n, spec.q, spec.eps
    force_rational = (a % 2 == 0) or (n % 2 == 1) or ((n // _math.gcd(n, q - eps)) % 2 == 0)
    all_rational_int = all(v.is_rational and v.rational_value().denominator == 1
                           for v in values)
    return {
        "eta": eta,
        "in_quadratic_field": in_quad,
        "integrality_forced": force_rational,
        "all_rational_integers": all_rational_int,
        "ok": in_quad and (not force_rational or all_rational_int),
    }
