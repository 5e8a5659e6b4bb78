"""Actions on character tables: Galois maps and group automorphisms.

A Galois map is applied valuewise to a row; a group automorphism acts
through the class permutation it induces.  Both must permute the rows of
an exact table; failure to land on a row signals corruption upstream and
raises.
"""

from __future__ import annotations

from .chartab import CharacterTable
from .cyclotomic import CyclotomicNumber, sigma_exponent
from .engine import GroupData
from .intarith import p_part
from .matgroup import AutomorphismDesc, inverse_automorphism_apply


def sigma_row(T: CharacterTable, i: int) -> tuple:
    """Row i with the odd-squaring Galois map applied to every value."""
    k = sigma_exponent(T.exponent)
    return tuple(v.galois(k % v.e) if v.e > 1 else v for v in T.rows[i])


def sigma_on_character(T: CharacterTable, i: int) -> int:
    """Index of the image row of row i under the 2-power-fixing,
    odd-squaring Galois map."""
    try:
        return T.row_index(sigma_row(T, i))
    except KeyError:
        raise ArithmeticError(
            f"Galois image of row {i} is not a table row; table corrupt") from None


def sigma_permutation(T: CharacterTable) -> tuple[int, ...]:
    return tuple(sigma_on_character(T, i) for i in range(T.n_classes))


def galois_on_character(T: CharacterTable, i: int, k: int) -> int:
    """Row index of the image of row i under zeta -> zeta^k (k coprime to
    the table conductor)."""
    row = tuple(v.galois(k % v.e) if v.e > 1 else v for v in T.rows[i])
    try:
        return T.row_index(row)
    except KeyError:
        raise ArithmeticError(
            f"Galois image (k={k}) of row {i} is not a table row") from None


def class_permutation(G: GroupData, aut: AutomorphismDesc) -> tuple[int, ...]:
    """pi with pi[c] = class of a(rep_c)."""
    if G.spec is None:
        raise ValueError("automorphism action needs a spec-built group")
    from .matgroup import apply_automorphism

    cls = G.conjugacy_classes()
    out = []
    for c in cls:
        img = apply_automorphism(G.spec, c.rep, aut)
        out.append(G.class_of(img))
    return tuple(out)


def automorphism_on_character(G: GroupData, T: CharacterTable,
                              aut: AutomorphismDesc, i: int) -> int:
    """Index of chi^a where chi^a(g) = chi(a^-1(g))."""
    if G.spec is None:
        raise ValueError("automorphism action needs a spec-built group")
    cls = G.conjugacy_classes()
    row = T.rows[i]
    new = []
    for c in cls:
        pre = inverse_automorphism_apply(G.spec, c.rep, aut)
        new.append(row[G.class_of(pre)])
    try:
        return T.row_index(tuple(new))
    except KeyError:
        raise ArithmeticError(
            f"automorphism image of row {i} is not a table row "
            f"(does the map stabilise the group?)") from None


def automorphism_permutation(G: GroupData, T: CharacterTable,
                             aut: AutomorphismDesc) -> tuple[int, ...]:
    return tuple(automorphism_on_character(G, T, aut, i) for i in range(T.n_classes))


def odd_degree_rows(T: CharacterTable) -> tuple[int, ...]:
    return tuple(i for i, d in enumerate(T.degrees) if d % 2 == 1)


def all_odd_sigma_fixed(T: CharacterTable) -> bool:
    return all(sigma_on_character(T, i) == i for i in odd_degree_rows(T))


def q_invariant_odd_rows(G: GroupData, T: CharacterTable, Q) -> tuple[int, ...]:
    """Odd-degree rows fixed by every automorphism in the list Q."""
    rows = odd_degree_rows(T)
    for aut in Q:
        perm = automorphism_permutation(G, T, aut)
        rows = tuple(i for i in rows if perm[i] == i)
    return rows


def check_unip_square(G: GroupData, T: CharacterTable) -> bool:
    """chi(u)^sigma = chi(u^2) for every p-power-order class u and row chi
    (p the defining characteristic)."""
    if G.spec is None:
        raise ValueError("needs a spec-built group")
    p = G.spec.p
    k = sigma_exponent(T.exponent)
    sq = G.power_class_map(2)
    cls = G.conjugacy_classes()
    for c, cl in enumerate(cls):
        o = cl.element_order
        if o != p_part(o, p):
            continue
        for row in T.rows:
            v = row[c]
            img = v.galois(k % v.e) if v.e > 1 else v
            if img != row[sq[c]]:
                return False
    return True


def class_is_ambient_invariant(Gsub: GroupData, G: GroupData, g) -> bool:
    """Is the Gsub-class of g invariant under conjugation by all of G?
    Generators suffice: the class-permutation action is a homomorphism."""
    target = Gsub.class_of(g)
    mul, inv = G.mul, G.inv
    for t in G.gens:
        img = mul(mul(t, g), inv(t))
        if Gsub.class_of(img) != target:
            return False
    return True


def check_class_invariant_ratio(Gsub: GroupData, Tsub: CharacterTable,
                                G: GroupData, T: CharacterTable,
                                chi: int, chit: int, class_idx: int) -> bool:
    """Exact identity chi(g) * chit(1) = chit(g) * chi(1) for a Gsub-class
    that is G-invariant, where row chit of T covers row chi of Tsub."""
    from .chartab import restrict_and_decompose

    rep = Tsub.class_reps[class_idx]
    if not class_is_ambient_invariant(Gsub, G, rep):
        raise ValueError("class is not invariant under the ambient group")
    mults = restrict_and_decompose(Gsub, Tsub, T, chit)
    if mults[chi] == 0:
        raise ValueError("the ambient row does not cover the given row")
    lhs = Tsub.rows[chi][class_idx] * T.degrees[chit]
    rhs = T.rows[chit][G.class_of(rep)] * Tsub.degrees[chi]
    return lhs == rhs


def central_characters_match_sigma(T: CharacterTable) -> bool:
    """deg(chi^sigma) = deg(chi) and omega_{chi^sigma} = sigma o omega_chi."""
    k = sigma_exponent(T.exponent)
    perm = sigma_permutation(T)
    for i in range(T.n_classes):
        j = perm[i]
        if T.degrees[i] != T.degrees[j]:
            return False
        wi = T.central_character(i)
        wj = T.central_character(j)
        for z, v in wi.items():
            img = v.galois(k % v.e) if v.e > 1 else v
            if wj[z] != img:
                return False
    return True
