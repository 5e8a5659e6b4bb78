"""Explicit enumeration of small matrix groups and structural algorithms.

GroupData holds a fully enumerated group: element tuples in breadth-first
order, an index map, conjugacy classes in a deterministic order (element
order, then class size, then lexicographically least representative),
centralizer orders, centre, and power maps.  Everything downstream
(normalizers, generic Sylow 2-subgroups, central quotients) works through
it.  Enumeration is budgeted; groups over budget must be handled
symbolically by the callers.
"""

from __future__ import annotations

import math
import pickle
from functools import lru_cache

from .ffield import FiniteField
from .intarith import odd_part, two_part
from .matgroup import (
    BudgetExceeded,
    GroupSpec,
    contains,
    group_order,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_scalar,
)

DEFAULT_BUDGET = 200_000

CACHE_FORMAT = "sylchar-group-cache-v1"


class ConjClass:
    __slots__ = ("rep", "rep_index", "size", "indices", "element_order")

    def __init__(self, rep, rep_index, size, indices, element_order):
        self.rep = rep
        self.rep_index = rep_index
        self.size = size
        self.indices = indices
        self.element_order = element_order


class SubgroupHandle:
    """Subgroup of an enumerated group: element set plus a generating set."""

    __slots__ = ("parent", "element_set", "gens")

    def __init__(self, parent: "GroupData", elements, gens=None):
        self.parent = parent
        self.element_set = frozenset(elements)
        self.gens = list(gens) if gens is not None else sorted(self.element_set)

    @property
    def order(self) -> int:
        return len(self.element_set)

    def __contains__(self, x):
        return x in self.element_set

    def sorted_elements(self):
        return sorted(self.element_set)

    def as_group(self) -> "GroupData":
        return GroupData(
            elements=self.sorted_elements(),
            mul=self.parent.mul,
            inv=self.parent.inv,
            identity=self.parent.identity,
            gens=self.gens,
        )

    def __eq__(self, other):
        return isinstance(other, SubgroupHandle) and self.element_set == other.element_set

    def __hash__(self):
        return hash(self.element_set)


class GroupData:
    """Immutable enumerated group with deterministic derived data."""

    def __init__(self, elements, mul, inv, identity, gens, spec: GroupSpec | None = None):
        self.spec = spec
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.gens = list(gens)
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.order = len(self.elements)
        self._orders = None
        self._classes = None
        self._class_of = None
        self._center = None
        self._power_maps = {}

    # -- element data ------------------------------------------------------

    def element_order(self, x) -> int:
        i = self.index[x]
        return self.element_orders()[i]

    def element_orders(self):
        if self._orders is None:
            orders = [0] * self.order
            mul = self.mul
            e = self.identity
            for i, x in enumerate(self.elements):
                k, y = 1, x
                while y != e:
                    y = mul(y, x)
                    k += 1
                orders[i] = k
            self._orders = orders
        return self._orders

    def exponent(self) -> int:
        out = 1
        for o in set(self.element_orders()):
            out = math.lcm(out, o)
        return out

    def power(self, x, e: int):
        if e < 0:
            x = self.inv(x)
            e = -e
        r = self.identity
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def p_part(self, x, p: int):
        """g_p of the commuting factorisation g = g_p g_{p'}."""
        o = self.element_order(x)
        pp = 1
        while o % p == 0:
            o //= p
            pp *= p
        if pp == 1:
            return self.identity
        # exponent = 0 mod o, = 1 mod pp
        c = o * pow(o, -1, pp) if pp > 1 else 0
        return self.power(x, c % (o * pp))

    def p_prime_part(self, x, p: int):
        o = self.element_order(x)
        pp = 1
        while o % p == 0:
            o //= p
            pp *= p
        if o == 1:
            return self.identity
        c = pp * pow(pp, -1, o)
        return self.power(x, c % (o * pp))

    # -- conjugacy classes ---------------------------------------------------

    def conjugacy_classes(self):
        if self._classes is None:
            self._compute_classes()
        return self._classes

    def class_of(self, x) -> int:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of[self.index[x]]

    def _compute_classes(self):
        mul, inv = self.mul, self.inv
        gens = self.gens if self.gens else self.elements
        seen = [False] * self.order
        raw = []
        orders = self.element_orders()
        for start in range(self.order):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            queue = [self.elements[start]]
            while queue:
                x = queue.pop()
                for g in gens:
                    y = mul(mul(g, x), inv(g))
                    j = self.index[y]
                    if not seen[j]:
                        seen[j] = True
                        orbit.append(j)
                        queue.append(y)
            raw.append(orbit)
        keyed = []
        for orbit in raw:
            rep = min(self.elements[i] for i in orbit)
            keyed.append((orders[orbit[0]], len(orbit), rep, orbit))
        keyed.sort(key=lambda t: (t[0], t[1], t[2]))
        classes = []
        class_of = [0] * self.order
        for ci, (o, size, rep, orbit) in enumerate(keyed):
            for i in orbit:
                class_of[i] = ci
            classes.append(ConjClass(rep, self.index[rep], size, tuple(sorted(orbit)), o))
        self._classes = classes
        self._class_of = class_of

    def centralizer_order(self, class_index: int) -> int:
        return self.order // self.conjugacy_classes()[class_index].size

    def power_class_map(self, m: int):
        """Class-level map [g] -> [g^m]."""
        if m not in self._power_maps:
            cls = self.conjugacy_classes()
            self._power_maps[m] = tuple(self.class_of(self.power(c.rep, m)) for c in cls)
        return self._power_maps[m]

    def center_elements(self):
        if self._center is None:
            mul = self.mul
            self._center = [x for x in self.elements
                            if all(mul(x, g) == mul(g, x) for g in self.gens)]
            self._center.sort()
        return self._center

    # -- subgroups ----------------------------------------------------------

    def subgroup(self, gens) -> SubgroupHandle:
        elems = self.closure(gens)
        return SubgroupHandle(self, elems, gens)

    def closure(self, gens):
        e = self.identity
        mul = self.mul
        seen = {e}
        queue = [e]
        gens = list(gens)
        while queue:
            x = queue.pop()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def centralizer(self, x) -> SubgroupHandle:
        mul = self.mul
        elems = [g for g in self.elements if mul(g, x) == mul(x, g)]
        return SubgroupHandle(self, elems)

    def normalizer(self, H: SubgroupHandle) -> SubgroupHandle:
        mul, inv = self.mul, self.inv
        hset = H.element_set
        gens = H.gens
        elems = []
        for g in self.elements:
            gi = inv(g)
            if all(mul(mul(g, h), gi) in hset for h in gens):
                elems.append(g)
        return SubgroupHandle(self, elems)

    def sylow_2(self) -> SubgroupHandle:
        """Generic Sylow 2-subgroup by normalizer climbing, deterministic."""
        target = two_part(self.order)
        if target == 1:
            return SubgroupHandle(self, [self.identity], [])
        orders = self.element_orders()
        # deterministic seed: first element (in enumeration order) whose
        # 2-part has maximal order among elements, taken as its odd-power
        seed = None
        for i, x in enumerate(self.elements):
            if orders[i] > 1 and two_part(orders[i]) > 1:
                seed = self.power(x, odd_part(orders[i]))
                break
        assert seed is not None
        gens = [seed]
        sub = self.subgroup(gens)
        while sub.order < target:
            N = self.normalizer(sub)
            grown = False
            for y in N.sorted_elements():
                if y in sub.element_set:
                    continue
                oy = self.element_order(y)
                if oy & (oy - 1):  # not a 2-power
                    y2 = self.power(y, odd_part(oy))
                    if y2 in sub.element_set or y2 == self.identity:
                        continue
                    y = y2
                cand_gens = gens + [y]
                cand = self.subgroup(cand_gens)
                if cand.order & (cand.order - 1) == 0:
                    gens, sub, grown = cand_gens, cand, True
                    break
            if not grown:
                raise AssertionError("sylow climbing stalled")  # impossible
        return SubgroupHandle(self, sub.element_set, gens)

    # -- quotients ------------------------------------------------------------

    def quotient_by_central(self, Z):
        """Quotient by a central subgroup, with canonical (lex-least) coset
        representatives; returns (GroupData, projection)."""
        zelems = sorted(Z.element_set if isinstance(Z, SubgroupHandle) else Z)
        center = set(self.center_elements())
        if not set(zelems) <= center:
            raise ValueError("subgroup is not central")
        mul = self.mul

        def proj(x):
            return min(mul(x, z) for z in zelems)

        seen = {}
        reps = []
        for x in self.elements:
            r = proj(x)
            if r not in seen:
                seen[r] = True
                reps.append(r)

        def qmul(a, b):
            return proj(mul(a, b))

        def qinv(a):
            return proj(self.inv(a))

        qgens = []
        gseen = set()
        for g in self.gens:
            r = proj(g)
            if r not in gseen:
                gseen.add(r)
                qgens.append(r)
        q = GroupData(reps, qmul, qinv, proj(self.identity), qgens, spec=None)
        return q, proj

    def __repr__(self):
        name = str(self.spec) if self.spec else "group"
        return f"<GroupData {name} order={self.order}>"


# -- constructive generators ------------------------------------------------


def _sl_generators(F: FiniteField, n: int):
    """Transvection generators of SL_n(q): a full F_p-basis of the (1,2) and
    (2,1) root groups plus unit transvections along the remaining
    superdiagonal; commutators reach every other root position."""
    basis = []
    pw = F.one
    for _ in range(F.k):
        basis.append(pw)
        pw = F.mul(pw, F.generator)
    gens = []
    ident = mat_identity(F, n)
    for b in basis:
        for (i, j) in ((0, 1), (1, 0)):
            m = list(ident)
            m[i * n + j] = b
            gens.append(tuple(m))
    for i in range(1, n - 1):
        for (r, c) in ((i, i + 1), (i + 1, i)):
            m = list(ident)
            m[r * n + c] = F.one
            gens.append(tuple(m))
    return gens


def _gl_generators(F: FiniteField, n: int):
    gens = _sl_generators(F, n) if n >= 2 else []
    d = list(mat_identity(F, n))
    d[0] = F.generator
    gens.append(tuple(d))
    return gens


@lru_cache(maxsize=None)
def unitary_form_change(q: int, n: int):
    """D with conj(D)^T D = antidiag(1..1) over GF(q^2): conjugation by D
    carries the antidiagonal-form unitary group onto the identity-form one."""
    from .intarith import prime_power

    p, a = prime_power(q)
    from .ffield import ff_create

    F = ff_create(p, 2 * a)
    nbar = lambda x: F.frobenius(x, a)

    def B(x, y):
        tot = 0
        for i in range(n):
            tot = F.add(tot, F.mul(nbar(x[i]), y[n - 1 - i]))
        return tot

    basis = [tuple(F.one if t == i else 0 for t in range(n)) for i in range(n)]
    ortho = []
    remaining = list(basis)
    while remaining:
        v = None
        for cand in remaining:
            if B(cand, cand):
                v = cand
                break
        if v is None:
            # characteristic-2-style isotropic basis: mix two vectors
            found = False
            for i1 in range(len(remaining)):
                for i2 in range(i1 + 1, len(remaining)):
                    for lam in range(1, F.q):
                        cand = tuple(F.add(a_, F.mul(lam, b_))
                                     for a_, b_ in zip(remaining[i1], remaining[i2]))
                        if B(cand, cand):
                            v = cand
                            remaining.pop(i2)
                            remaining.insert(0, cand)
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            assert v is not None, "nondegenerate Hermitian form has anisotropic vectors"
            v = remaining.pop(0)
        else:
            remaining.remove(v)
        c = B(v, v)
        s = next(s for s in range(1, F.q) if F.pow(s, q + 1) == F.inv(c))
        v = tuple(F.mul(s, x) for x in v)
        ortho.append(v)
        remaining = [tuple(F.sub(w[t], F.mul(B(v, w), v[t])) for t in range(n))
                     for w in remaining]
    V = tuple(ortho[j][i] for i in range(n) for j in range(n))  # columns = ortho
    return mat_inv(F, n, V)


def _unitary_generators(spec: GroupSpec):
    """Generators of GU/SU_n(q) in the identity-form realisation.

    Candidates are the root elements and torus of the antidiagonal-form
    group, transported by the cached form-change conjugator and filtered
    through the membership predicate; enumeration later verifies the order
    formula, with a deterministic ambient scan as repair for the tiny
    degenerate cases (q = 2) where root subgroups undergenerate.
    """
    F, n, q = spec.field, spec.n, spec.q
    a = spec.frob_power
    want_su = spec.matrix_kind == "SU"
    nbar = lambda x: F.frobenius(x, a)
    ident = mat_identity(F, n)
    cand: list[tuple[int, ...]] = []

    if n == 1:
        cand.append((F.root_of_unity(q + 1),))
    else:
        # transvection-like elements I + b E_{i, n+1-i} with b + conj(b) = 0;
        # the solution set is a GF(q)-line, so b0 times an F_p-basis of GF(q)
        # generates the whole root group
        b0 = next(b for b in range(1, F.q) if F.add(b, nbar(b)) == 0)
        gq = F.pow(F.generator, q + 1)  # generates the GF(q)* subgroup
        trace0 = []
        w = F.one
        for _ in range(a):
            trace0.append(F.mul(b0, w))
            w = F.mul(w, gq)
        for i in range(n // 2):
            for b in trace0:
                m = list(ident)
                m[i * n + (n - 1 - i)] = b
                cand.append(tuple(m))
                m = list(ident)
                m[(n - 1 - i) * n + i] = b
                cand.append(tuple(m))
        # long root elements I + c E_ij - conj(c) E_{n-1-j, n-1-i}: valid
        # whenever neither index is the middle one and j != n-1-i
        mid = (n - 1) // 2 if n % 2 else None
        for i in range(n):
            for j in range(n):
                if i == j or i + j == n - 1 or i == mid or j == mid:
                    continue
                pw = F.one
                for _ in range(F.k):
                    m = list(ident)
                    m[i * n + j] = F.add(m[i * n + j], pw)
                    m[(n - 1 - j) * n + (n - 1 - i)] = F.sub(
                        m[(n - 1 - j) * n + (n - 1 - i)], nbar(pw))
                    cand.append(tuple(m))
                    pw = F.mul(pw, F.generator)
        # middle-coupled roots (n odd): I + a E_{i,mid} - conj(a) E_{mid,n-1-i}
        # + b E_{i,n-1-i} with b + conj(b) + a conj(a) = 0
        if mid is not None:
            for i in range(mid):
                pw = F.one
                for _ in range(F.k):
                    bv = next(b for b in range(F.q)
                              if F.add(F.add(b, nbar(b)), F.mul(pw, nbar(pw))) == 0)
                    m = list(ident)
                    m[i * n + mid] = pw
                    m[mid * n + (n - 1 - i)] = F.neg(nbar(pw))
                    m[i * n + (n - 1 - i)] = bv
                    cand.append(tuple(m))
                    pw = F.mul(pw, F.generator)
        if n == 2:
            # antidiagonal Weyl element [[0,c],[c^-q,0]]; for SU force det 1
            if want_su:
                c = next(c for c in range(1, F.q)
                         if F.neg(F.mul(c, F.inv(nbar(c)))) == F.one)
            else:
                c = F.one
            cand.append((0, c, F.inv(nbar(c)), 0))
        else:
            w = [0] * (n * n)
            for i in range(n):
                w[i * n + (n - 1 - i)] = F.one
            if n % 4 in (2, 3):  # reversal has sign -1; fix the determinant
                w[0 * n + (n - 1)] = F.neg(F.one)
            cand.append(tuple(w))
        # torus elements of the antidiagonal form: entries pair off as
        # (lambda, lambda^-q); a middle entry (n odd) needs norm 1
        t = F.generator
        d = list(ident)
        d[0] = t
        d[(n - 1) * n + (n - 1)] = F.inv(nbar(t))
        cand.append(tuple(d))  # det t^(1-q) of full order q+1; GU only
        if n % 2 == 1 and n >= 3:
            d = list(d)
            mid = (n // 2) * n + (n // 2)
            d[mid] = F.pow(t, q - 1)  # norm 1; fixes the determinant to 1
            cand.append(tuple(d))
        if n >= 4:
            d = list(ident)
            d[0] = t
            d[(n - 1) * n + (n - 1)] = F.inv(nbar(t))
            d[1 * n + 1] = F.inv(t)
            d[(n - 2) * n + (n - 2)] = nbar(t)
            cand.append(tuple(d))  # det 1

    D = unitary_form_change(q, n)
    Dinv = mat_inv(F, n, D)
    mspec = GroupSpec(spec.matrix_kind, n, q)
    out = []
    for g in cand:
        if want_su and mat_det(F, n, g) != F.one:
            continue
        gt = mat_mul(F, n, D, mat_mul(F, n, g, Dinv))
        if contains(mspec, gt) and gt not in out:
            out.append(gt)
    return out


def spec_generators(spec: GroupSpec):
    F, n = spec.field, spec.n
    kind = spec.matrix_kind
    if kind in ("GU", "SU"):
        return _unitary_generators(spec)
    if kind == "GL":
        if n == 1:
            return [(F.generator,)]
        return _gl_generators(F, n)
    if n == 1:
        return [(F.one,)]
    return _sl_generators(F, n)


# -- enumeration -------------------------------------------------------------

_ENUM_CACHE: dict[str, GroupData] = {}


def enumerate_group(spec: GroupSpec | str, budget: int = DEFAULT_BUDGET,
                    cache_dir=None) -> GroupData:
    """Fully enumerate the group of the spec (product-closure BFS), verify
    the order formula, and derive the projective quotient when asked for.
    Results are memoised per spec string."""
    if isinstance(spec, str):
        spec = GroupSpec.parse(spec)
    key = str(spec)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    target = group_order(spec)
    if target > budget:
        raise BudgetExceeded(f"|{spec}| = {target} exceeds budget {budget}")

    if spec.is_projective:
        mspec = spec.matrix_spec()
        g = enumerate_group(mspec, budget=group_order(mspec), cache_dir=cache_dir)
        zcodes = mspec.center_scalar_codes()
        Z = SubgroupHandle(g, [mat_scalar(spec.field, spec.n, c) for c in zcodes])
        q, _ = g.quotient_by_central(Z)
        q.spec = spec
        if q.order != target:
            raise RuntimeError(f"projective order mismatch for {spec}: {q.order} != {target}")
        _ENUM_CACHE[key] = q
        return q

    cached = _load_cache(cache_dir, key)
    F, n = spec.field, spec.n
    mul = lambda a, b: mat_mul(F, n, a, b)
    inv = lambda a: mat_inv(F, n, a)
    ident = mat_identity(F, n)
    gens = spec_generators(spec)
    if cached is not None:
        g = GroupData(cached, mul, inv, ident, gens, spec=spec)
        if g.order == target:
            _ENUM_CACHE[key] = g
            return g
        # stale/corrupt cache: fall through to recompute
    elems = _closure(mul, ident, gens, budget)
    if len(elems) < target:
        elems, gens = _augment(spec, mul, ident, gens, elems, target, budget)
    if len(elems) != target:
        raise RuntimeError(
            f"enumeration of {spec} produced {len(elems)} elements, expected {target}")
    g = GroupData(elems, mul, inv, ident, gens, spec=spec)
    _ENUM_CACHE[key] = g
    _store_cache(cache_dir, key, g.elements)
    return g


def group_from_generators(F: FiniteField, n: int, gens, budget: int = DEFAULT_BUDGET,
                          name: str | None = None) -> GroupData:
    mul = lambda a, b: mat_mul(F, n, a, b)
    inv = lambda a: mat_inv(F, n, a)
    ident = mat_identity(F, n)
    for g in gens:
        if mat_det(F, n, g) == 0:
            raise ValueError("generator is not invertible")
    elems = _closure(mul, ident, gens, budget)
    return GroupData(elems, mul, inv, ident, list(gens), spec=None)


def _closure(mul, ident, gens, budget):
    seen = {ident: 0}
    order_list = [ident]
    queue = [ident]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                if len(order_list) >= budget:
                    raise BudgetExceeded(
                        f"closure exceeded budget {budget} (partial count {len(order_list)})")
                seen[y] = len(order_list)
                order_list.append(y)
                queue.append(y)
    return order_list


def _augment(spec, mul, ident, gens, elems, target, budget):
    """Deterministic repair when the seed generators undergenerate: scan the
    ambient matrix space in code order for missing members."""
    F, n = spec.field, spec.n
    space = F.q ** (n * n)
    if space > 5_000_000:
        raise RuntimeError(f"generators undergenerate {spec} and the ambient "
                           f"space is too large to scan")
    elems = list(elems)
    gens = list(gens)
    seen = set(elems)
    mspec = spec.matrix_spec()
    for code in range(space):
        if len(elems) >= target:
            break
        m = []
        c = code
        for _ in range(n * n):
            m.append(c % F.q)
            c //= F.q
        m = tuple(m)
        if m in seen:
            continue
        if not contains(mspec, m):
            continue
        gens.append(m)
        elems = _closure(mul, ident, gens, budget)
        seen = set(elems)
    return elems, gens


# -- disk cache ---------------------------------------------------------------


def _cache_path(cache_dir, key):
    import os

    safe = key.replace("(", "_").replace(")", "").replace(",", "_")
    return os.path.join(cache_dir, f"{safe}.grp")


def _load_cache(cache_dir, key):
    if not cache_dir:
        return None
    import os

    path = _cache_path(cache_dir, key)
    if not os.path.exists(path):
        return None
    try:
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("format") != CACHE_FORMAT or payload.get("spec") != key:
            return None
        elems = payload["elements"]
        if len(elems) != payload.get("count"):
            return None
        return [tuple(e) for e in elems]
    except Exception:
        return None


def _store_cache(cache_dir, key, elements):
    if not cache_dir:
        return
    import os

    os.makedirs(cache_dir, exist_ok=True)
    payload = {"format": CACHE_FORMAT, "spec": key,
               "count": len(elements), "elements": [list(e) for e in elements]}
    with open(_cache_path(cache_dir, key), "wb") as fh:
        pickle.dump(payload, fh, protocol=4)
