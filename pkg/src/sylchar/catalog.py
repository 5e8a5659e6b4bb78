"""Catalog orchestration: which groups get which checks, and the report.

Each check returns a CheckRecord with a verdict in {PASS, FAIL, SKIP,
FINDING}; FINDING marks a documented criterion/oracle divergence (the
n = 2 cases) that is reported but never fails a run.  Reports are
deterministic except for the elapsed_ms timing fields.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .chartab import dixon_table, restrict_and_decompose
from .cyclotomic import CyclotomicNumber, sigma_exponent
from .engine import DEFAULT_BUDGET, SubgroupHandle, enumerate_group, group_from_generators
from .galois import (
    all_odd_sigma_fixed,
    automorphism_permutation,
    central_characters_match_sigma,
    check_unip_square,
    odd_degree_rows,
    q_invariant_odd_rows,
    sigma_permutation,
)
from .intarith import odd_part, two_adic, two_part
from .matgroup import (
    AutomorphismDesc,
    BudgetExceeded,
    GroupSpec,
    group_order,
    mat_identity,
    mat_inv,
    mat_mul,
)
from .sylow2 import (
    QDescription,
    build_sylow,
    cf3_z_elements,
    index_two_part_check,
    predicted_normalizer_order,
    psl_is_simple,
    sn2s_simple,
    sn2s_with_Q,
    sylow_subgroup_order,
)
from .witness import (
    WitnessRefusal,
    build_z,
    check_S_conditions,
    p2_alpha0_witness,
    s2_matches_brute,
    sl4_nonregular_square_conjugacy,
    sl4_torus_identity,
    torus_degenerate,
)

PASS, FAIL, SKIP, FINDING = "PASS", "FAIL", "SKIP", "FINDING"

SCHEMA = "sylchar-report-v1"


@dataclass
class CheckRecord:
    check: str
    params: dict
    verdict: str
    statement: str
    evidence: dict = dc_field(default_factory=dict)
    elapsed_ms: float = 0.0
    repro: str = ""

    def to_dict(self):
        return {
            "check": self.check,
            "params": self.params,
            "verdict": self.verdict,
            "statement": self.statement,
            "evidence": self.evidence,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "repro": self.repro,
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rec = fn(*args, **kwargs)
        dt = (time.perf_counter() - t0) * 1000
        if isinstance(rec, CheckRecord):
            rec.elapsed_ms = dt
        return rec

    return wrapper


# -- tables and caches shared across checks -----------------------------------

_TABLES = {}


def table_for(spec_str: str, budget: int = DEFAULT_BUDGET):
    if spec_str not in _TABLES:
        _TABLES[spec_str] = dixon_table(enumerate_group(spec_str, budget=budget))
    return _TABLES[spec_str]


# -- individual checks ---------------------------------------------------------


@_timed
def navarro_check(spec_str: str, budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """Self-normalising Sylow 2-subgroup iff every odd-degree irreducible
    is fixed by the odd-squaring Galois map; both sides brute-forced."""
    params = {"spec": spec_str}
    repro = f"sylchar verify --only navarro:{spec_str}"
    try:
        g = enumerate_group(spec_str, budget=budget)
    except BudgetExceeded as e:
        return CheckRecord("navarro", params, SKIP, str(e), repro=repro,
                           statement=_NAVARRO_STMT)
    P = g.sylow_2()
    N = g.normalizer(P)
    lhs = N.order == P.order
    T = table_for(spec_str, budget)
    rhs = all_odd_sigma_fixed(T)
    verdict = PASS if lhs == rhs else FAIL
    return CheckRecord(
        "navarro", params, verdict, _NAVARRO_STMT,
        evidence={"sylow_order": P.order, "normalizer_order": N.order,
                  "self_normalising": lhs, "all_odd_sigma_fixed": rhs,
                  "odd_degrees": sorted(T.degrees[i] for i in odd_degree_rows(T))},
        repro=repro)


_NAVARRO_STMT = ("group has a self-normalising Sylow 2-subgroup exactly when "
                 "every odd-degree irreducible character is fixed by the Galois "
                 "map that fixes 2-power-order roots of unity and squares "
                 "odd-order ones")


@_timed
def table_invariants_check(spec_str: str, budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """Exact orthogonality (rows and columns), degree bookkeeping, and the
    squared-unipotent value identity for one group's table."""
    params = {"spec": spec_str}
    repro = f"sylchar verify --only table:{spec_str}"
    g = enumerate_group(spec_str, budget=budget)
    T = table_for(spec_str, budget)
    k = T.n_classes
    n = g.order
    problems = []
    if sum(d * d for d in T.degrees) != n:
        problems.append("sum of squared degrees")
    if len(T.rows) != len(g.conjugacy_classes()):
        problems.append("row count")
    if any(v != CyclotomicNumber.rational(1) for v in T.rows[0]):
        problems.append("first row not trivial")
    if any(n % d for d in T.degrees):
        problems.append("degree does not divide the order")
    one = CyclotomicNumber.rational(1)
    zero = CyclotomicNumber.rational(0)
    for i in range(k):
        for j in range(i, k):
            v = T.inner_product(T.rows[i], T.rows[j])
            if v != (one if i == j else zero):
                problems.append(f"row orthogonality ({i},{j})")
    # column orthogonality: sum_chi chi(g_i) conj(chi(g_j)) = delta * |C(g_i)|
    from .cyclotomic import cyc_sum

    for i in range(k):
        for j in range(i, k):
            s = cyc_sum(T.rows[r][i] * T.rows[r][j].conjugate() for r in range(k))
            expect = CyclotomicNumber.rational(n // T.class_sizes[i]) if i == j else zero
            if s != expect:
                problems.append(f"column orthogonality ({i},{j})")
    if g.spec is not None and not check_unip_square(g, T):
        problems.append("squared-unipotent identity")
    # power-map consistency: chi(g^2) is chi at the image class (definitional
    # via the class map; asserted through the squared-unipotent check above)
    verdict = PASS if not problems else FAIL
    return CheckRecord(
        "table", params, verdict,
        "exact row/column orthogonality, degree bookkeeping, and the "
        "odd-squaring identity on p-power-order classes",
        evidence={"classes": k, "degrees": list(T.degrees),
                  "conductor": T.exponent, "problems": problems},
        repro=repro)


@_timed
def sigma_action_check(spec_str: str, budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """The odd-squaring Galois map permutes rows, preserving degrees and
    central characters."""
    params = {"spec": spec_str}
    T = table_for(spec_str, budget)
    perm = sigma_permutation(T)
    ok = sorted(perm) == list(range(T.n_classes))
    ok = ok and all(T.degrees[i] == T.degrees[perm[i]] for i in range(T.n_classes))
    ok = ok and central_characters_match_sigma(T)
    return CheckRecord(
        "sigma-permutation", params, PASS if ok else FAIL,
        "the odd-squaring Galois map permutes table rows and preserves "
        "degrees and central characters",
        evidence={"permutation": list(perm)},
        repro=f"sylchar galois --spec {spec_str} --action sigma")


@_timed
def carter_fong_check(n: int, q: int, eps: int, budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """Constructed Sylow order, brute normalizer order, and the
    block-scalar factorisation of every normalizer element."""
    params = {"n": n, "q": q, "eps": eps}
    spec = GroupSpec("GL" if eps == 1 else "GU", n, q)
    repro = f"sylchar sylow --spec {spec} --brute-check"
    dec = build_sylow(n, q, eps)
    g = enumerate_group(spec, budget=budget)
    P = SubgroupHandle(g, g.closure(dec.gens), dec.gens)
    problems = []
    if P.order != two_part(g.order):
        problems.append(f"built Sylow order {P.order} != 2-part {two_part(g.order)}")
    N = g.normalizer(P)
    if N.order != dec.normalizer_order:
        problems.append(f"normalizer order {N.order} != predicted {dec.normalizer_order}")
    zs = cf3_z_elements(n, q, eps)
    zset = [(z, mat_inv(spec.field, n, z)) for z in zs] or [(g.identity, g.identity)]
    bad = 0
    for x in N.element_set:
        if not any(mat_mul(spec.field, n, x, zi) in P.element_set for _, zi in zset):
            bad += 1
    if bad:
        problems.append(f"{bad} normalizer elements fail the x*z factorisation")
    return CheckRecord(
        "carter-fong", params, PASS if not problems else FAIL,
        "the wreath-tower Sylow 2-subgroup has the formula order, its "
        "normalizer order is |P| times the odd part of (q-eps) per block, "
        "and every normalizer element is a Sylow element times a "
        "block-scalar matrix",
        evidence={"sylow_order": P.order, "normalizer_order": N.order,
                  "predicted": dec.normalizer_order,
                  "z_count": len(zs), "problems": problems},
        repro=repro)


@_timed
def sylow_tower_check(q: int, eps: int) -> CheckRecord:
    """|S_{r+1}| = 2 |S_r|^2 for every wreathing step (r = 1, 2): closures
    confirm r+1 = 2, the order formula does r+1 = 3 (that group is far
    beyond enumeration).  The non-wreathed base step r = 0 carries the
    extra factor (q+eps)_2/2 when q = -eps (mod 4); it is recorded, not
    judged."""
    from .sylow2 import doubling_step_factor

    params = {"q": q, "eps": eps}
    problems = []
    details = {}
    kind = "GL" if eps == 1 else "GU"
    measured = {}
    for r in (1, 2):
        dec = build_sylow(2**r, q, eps)
        if not dec.order_verified:
            problems.append(f"S_{r} closure not verified")
        measured[r] = dec.order
    for r in (1, 2):
        nxt = sylow_subgroup_order(r + 1, q, eps)
        ok = nxt == 2 * measured[r] ** 2
        details[f"r={r}"] = {"S_r": measured[r], "S_r+1": nxt,
                             "method": "closure" if r + 1 <= 2 else "order formula",
                             "ok": ok}
        if not ok:
            problems.append(f"doubling identity fails at r={r}")
    details["r=0 (base, not a wreathing step)"] = {
        "factor_over_2S0sq": doubling_step_factor(0, q, eps),
        "expected_factor": two_part(q + eps) // 2 if (q + eps) % 4 == 0 else 1,
    }
    base = details["r=0 (base, not a wreathing step)"]
    if base["factor_over_2S0sq"] != base["expected_factor"]:
        problems.append("base-step factor off the closed form")
    return CheckRecord(
        "sylow-tower", params, PASS if not problems else FAIL,
        "each wreathing step doubles the square of the Sylow order; the "
        "non-wreathed base step carries the documented (q+eps)_2/2 factor",
        evidence={"steps": details, "problems": problems},
        repro=f"sylchar sylow --spec {kind}(4,{q},{eps:+d})")


@_timed
def index_identity_check(m: int, q: int, eps: int) -> CheckRecord:
    params = {"m": m, "q": q, "eps": eps}
    ok = index_two_part_check(m, q, eps)
    return CheckRecord(
        "index-two-part", params, PASS if ok else FAIL,
        "the 2-part of [GL_{2m} : GL_m x GL_m] equals 2^(number of 2-adic "
        "parts of m)",
        evidence={"t": len(two_adic(m))},
        repro=f"sylchar verify --only index-two-part:{m},{q},{eps}")


@_timed
def sn2s_criterion_check(n: int, q: int, eps: int, budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """Arithmetic self-normalising criterion against the brute-force
    normalizer; for n = 2 the divergence is a documented finding with both
    epsilon readings reported, the oracle staying authoritative."""
    params = {"n": n, "q": q, "eps": eps}
    spec = GroupSpec("PSL" if eps == 1 else "PSU", n, q)
    repro = f"sylchar verify --only sn2s:{spec}"
    criterion = sn2s_simple(n, q, eps)
    g = enumerate_group(spec, budget=budget)
    P = g.sylow_2()
    N = g.normalizer(P)
    oracle = N.order == P.order
    evidence = {"criterion": criterion, "oracle": oracle,
                "sylow_order": P.order, "normalizer_order": N.order}
    if n >= 3:
        verdict = PASS if criterion == oracle else FAIL
    else:
        evidence["criterion_linear"] = sn2s_simple(n, q, 1)
        evidence["criterion_unitary"] = sn2s_simple(n, q, -1)
        agree = criterion == oracle
        evidence["agrees"] = agree
        verdict = PASS if agree else FINDING
    return CheckRecord(
        "sn2s-criterion", params, verdict,
        "the arithmetic criterion for a self-normalising Sylow 2-subgroup "
        "matches the brute-force normalizer computation (documented "
        "divergences at n = 2 are findings, oracle authoritative)",
        evidence=evidence, repro=repro)


def _parse_qdesc(text: str) -> QDescription:
    """Parse 'graph,field:m=1,field:inv,diag' into a QDescription."""
    graph = inv = diag = False
    powers = []
    if text.strip():
        for tok in text.split(","):
            tok = tok.strip()
            if tok == "graph":
                graph = True
            elif tok == "field:inv":
                inv = True
            elif tok.startswith("field:m="):
                powers.append(int(tok[8:]))
            elif tok == "diag":
                diag = True
            elif tok:
                raise ValueError(f"bad Q token {tok!r}")
    return QDescription(graph=graph, involutary_field=inv,
                        field_powers=tuple(powers), diagonal=diag)


@_timed
def witness_case_check(n: int, q: int, eps: int, qdesc: str,
                       expect: str, expect_conditions=(),
                       budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """One witness case: either the criteria fire and the builder must
    refuse citing exactly the expected conditions, or they do not and the
    built element must pass S1-S4 (with the multiset/brute cross-check
    when the ambient group is enumerable)."""
    params = {"n": n, "q": q, "eps": eps, "Q": qdesc or "trivial"}
    repro = f"sylchar witness --spec GL({n},{q},{eps:+d})" + (
        f" --Q \"{qdesc}\"" if qdesc else "")
    Q = _parse_qdesc(qdesc)
    try:
        w = build_z(n, q, eps, Q)
        outcome = "witness"
    except WitnessRefusal as e:
        outcome = "refuse"
        conds = tuple(e.conditions)
    if outcome != expect:
        return CheckRecord("witness", params, FAIL, _WITNESS_STMT,
                           evidence={"expected": expect, "got": outcome},
                           repro=repro)
    if outcome == "refuse":
        ok = conds == tuple(expect_conditions)
        return CheckRecord(
            "witness", params, PASS if ok else FAIL, _WITNESS_STMT,
            evidence={"outcome": "refuse", "conditions": list(conds),
                      "expected_conditions": list(expect_conditions)},
            repro=repro)
    rep = check_S_conditions(w, Q)
    evidence = {"outcome": "witness", "element": w.literal(),
                "construction": {k: (list(v) if isinstance(v, tuple) else v)
                                 for k, v in w.construction.items()},
                "s_report": {k: [v[0], v[1]] for k, v in rep.verdicts.items()}}
    ok = rep.all_pass
    if group_order(w.spec) <= budget:
        cross = s2_matches_brute(w, budget)
        evidence["s2_brute_agrees"] = cross
        ok = ok and cross
    return CheckRecord("witness", params, PASS if ok else FAIL, _WITNESS_STMT,
                       evidence=evidence, repro=repro)


_WITNESS_STMT = ("when no self-normalising criterion fires, a block-scalar "
                 "element of determinant 1 and odd order exists that is "
                 "separated from its square and its central translates and "
                 "is stable under the declared outer automorphisms; when one "
                 "fires, the builder refuses citing it")


@_timed
def p2_witness_check(n: int, q: int, eps: int) -> CheckRecord:
    """Characteristic-2 witness: the rank-one torus element passes the
    checklist under the full declared field 2-group."""
    params = {"n": n, "q": q, "eps": eps}
    repro = f"sylchar witness --spec SL({n},{q},{eps:+d}) --char2"
    from .intarith import prime_power

    p, a = prime_power(q)
    m = odd_part(a)
    powers = []
    if m > 1:
        powers.append(m if eps == 1 else m)
    elif a >= 2:
        powers.append(2)
    Q = QDescription(field_powers=tuple(powers)) if powers else QDescription()
    try:
        w = p2_alpha0_witness(n, q, eps, allow_experimental=True)
    except (WitnessRefusal, ValueError) as e:
        return CheckRecord("witness-char2", params, FAIL, _P2_STMT,
                           evidence={"error": str(e)}, repro=repro)
    rep = check_S_conditions(w, Q)
    return CheckRecord(
        "witness-char2", params, PASS if rep.all_pass else FAIL, _P2_STMT,
        evidence={"element": w.literal(),
                  "branch": w.construction.get("branch"),
                  "s_report": {k: [v[0], v[1]] for k, v in rep.verdicts.items()}},
        repro=repro)


_P2_STMT = ("in characteristic 2 the element diag(z,1,..,1,z^-1) with z of "
            "the prescribed odd order passes the separation checklist and is "
            "stable under the declared field automorphisms")


@_timed
def torus_degeneracy_check() -> CheckRecord:
    cases = [
        ((2, 2, 1), True),
        ((3, 2, -1), False),
        ((2, 4, 1), False),
        ((3, 2, 1), True),
        ((2, 2, -1), False),
        ((3, 3, 1), False),
        ((4, 2, -1), False),
    ]
    results = {}
    ok = True
    for (n, q, eps), expect in cases:
        got = torus_degenerate(n, q, eps)
        results[f"({n},{q},{eps:+d})"] = got
        ok = ok and got == expect
    return CheckRecord(
        "torus-degeneracy", {}, PASS if ok else FAIL,
        "some root kills the whole rational diagonal torus exactly for the "
        "smallest split fields",
        evidence={"degenerate": results},
        repro="sylchar verify --only torus-degeneracy")


@_timed
def gggr_case_check(spec_str: str, partition, galois_power: int | None = None,
                    budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """One GGGR: integral non-negative multiplicities, the value-field
    report, the regular-character degenerate case, and (when requested)
    the Galois-power comparison."""
    from .gggr import (
        build_nilpotent,
        gggr_character,
        gggr_is_regular_character,
        gggr_value_field_report,
        verify_gggr_galois,
    )

    params = {"spec": spec_str, "partition": list(partition)}
    repro = (f"sylchar gggr --spec {spec_str} --partition "
             + ",".join(str(x) for x in partition))
    g = enumerate_group(spec_str, budget=budget)
    T = table_for(spec_str, budget)
    nil = build_nilpotent(g.spec.field, tuple(partition))
    vals = gggr_character(g, nil)
    problems = []
    mults = T.decompose(vals)
    if any(m < 0 for m in mults):
        problems.append("negative multiplicity")
    if all(p == 1 for p in partition):
        if not gggr_is_regular_character(g, vals):
            problems.append("trivial-partition case is not the regular character")
    field_rep = gggr_value_field_report(vals, g.spec, T)
    if not field_rep["ok"]:
        problems.append("value-field membership")
    evidence = {"multiplicities": list(mults), "value_field": field_rep,
                "degree": vals[0].serialize()}
    if galois_power is not None:
        gal = verify_gggr_galois(g, nil, galois_power, values=vals)
        evidence["galois_power"] = galois_power
        evidence["galois_equality"] = gal
        if not gal:
            problems.append("Galois image is not the power's GGGR")
    verdict = PASS if not problems else FAIL
    evidence["problems"] = problems
    return CheckRecord(
        "gggr", params, verdict,
        "the induced character attached to the partition has non-negative "
        "integral multiplicities, lands in the predicted value field, and "
        "its Galois image equals the corresponding power's character",
        evidence=evidence, repro=repro)


@_timed
def sl4_identity_check(q: int) -> CheckRecord:
    params = {"q": q}
    ok_plain = sl4_torus_identity(q, False)
    ok_tw = sl4_torus_identity(q, True)
    return CheckRecord(
        "sl4-torus", params, PASS if ok_plain and ok_tw else FAIL,
        "the scaling torus element conjugates each block unipotent to its "
        "square with a Frobenius defect inside the connected centraliser",
        evidence={"untwisted": ok_plain, "twisted": ok_tw},
        repro=f"sylchar verify --only sl4-torus:{q}")


@_timed
def sl4_conjugator_check(q: int = 3) -> CheckRecord:
    params = {"q": q}
    from .matgroup import format_matrix
    from .ffield import ff_create
    from .intarith import prime_power

    p, k = prime_power(q)
    F = ff_create(p, k)
    try:
        out = sl4_nonregular_square_conjugacy(q)
    except ArithmeticError as e:
        return CheckRecord("sl4-square-conjugacy", params, FAIL,
                           _SL4SQ_STMT, evidence={"error": str(e)})
    ev = {str(list(part)): format_matrix(F, 4, g) for part, g in out.items()}
    return CheckRecord("sl4-square-conjugacy", params, PASS, _SL4SQ_STMT,
                       evidence={"conjugators": ev},
                       repro=f"sylchar verify --only sl4-square-conjugacy:{q}")


_SL4SQ_STMT = ("every non-regular unipotent element of SL_4 is conjugate to "
               "its square by an explicit determinant-1 matrix")


@_timed
def condition_FI_check(spec_str: str, qdesc: str,
                       budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """For the simple group: if every Q-invariant odd-degree character is
    Galois-fixed then the Q-fixed part of N(P)/P is trivial."""
    params = {"spec": spec_str, "Q": qdesc or "trivial"}
    repro = f"sylchar verify --only condition-FI:{spec_str}"
    g = enumerate_group(spec_str, budget=budget)
    auts = _concrete_automorphisms(g.spec, qdesc)
    P = g.sylow_2()
    auts = [_stabilize(g, P, a) for a in auts]
    T = table_for(spec_str, budget)
    inv_rows = q_invariant_odd_rows(g, T, auts)
    perm = sigma_permutation(T)
    h = all(perm[i] == i for i in inv_rows)
    c = _q_fixed_cosets_trivial(g, P, auts)
    ok = (not h) or c
    return CheckRecord(
        "condition-FI", params, PASS if ok else FAIL,
        "if every Q-invariant odd-degree character is fixed by the "
        "odd-squaring map, the Q-fixed part of N(P)/P is trivial",
        evidence={"h_all_invariant_odd_fixed": h, "c_fixed_part_trivial": c,
                  "q_invariant_odd_rows": list(inv_rows)},
        repro=repro)


@_timed
def condition_IF_check(spec_str: str, qdesc: str,
                       budget: int = DEFAULT_BUDGET) -> CheckRecord:
    """For the quasisimple group: when the Sylow hypothesis holds, every
    Q-invariant odd-degree character over a fixed central character is
    Galois-fixed; hypothesis failure is a SKIP."""
    params = {"spec": spec_str, "Q": qdesc or "trivial"}
    repro = f"sylchar verify --only condition-IF:{spec_str}"
    g = enumerate_group(spec_str, budget=budget)
    auts = _concrete_automorphisms(g.spec, qdesc)
    S2 = g.sylow_2()
    Z = SubgroupHandle(g, g.center_elements())
    P = SubgroupHandle(g, g.closure(list(S2.gens) + list(Z.element_set)),
                       list(S2.gens) + sorted(Z.element_set))
    auts = [_stabilize(g, P, a) for a in auts]
    hypothesis = _q_fixed_cosets_trivial(g, P, auts)
    if not hypothesis:
        return CheckRecord(
            "condition-IF", params, SKIP,
            _IF_STMT, evidence={"hypothesis": False,
                                "note": "hypothesis-not-met; check skipped by design"},
            repro=repro)
    T = table_for(spec_str, budget)
    k_sigma = sigma_exponent(T.exponent)
    perm = sigma_permutation(T)
    inv_rows = q_invariant_odd_rows(g, T, auts)
    zelems = sorted(Z.element_set)
    lam_reports = []
    bad = []
    seen_lams = {}
    for i in range(T.n_classes):
        om = tuple(sorted((z, T.rows[i][g.class_of(z)] / T.degrees[i])
                          for z in zelems))
        seen_lams.setdefault(om, []).append(i)
    for om, rows in sorted(seen_lams.items(), key=lambda kv: kv[1][0]):
        lam_sigma_fixed = all(
            (v.galois(k_sigma % v.e) if v.e > 1 else v) == v for _, v in om)
        lam_q_inv = True  # central characters here come from rows; the row
        # filter below enforces Q-invariance of the character itself
        if not lam_sigma_fixed:
            continue
        rows_over = [i for i in rows if i in inv_rows]
        fixed = [i for i in rows_over if perm[i] == i]
        lam_reports.append({
            "lambda": [v.serialize() for _, v in om],
            "q_invariant_odd_rows": rows_over,
            "sigma_fixed_rows": fixed,
        })
        bad.extend(i for i in rows_over if perm[i] != i)
    return CheckRecord(
        "condition-IF", params, PASS if not bad else FAIL, _IF_STMT,
        evidence={"hypothesis": True, "per_lambda": lam_reports,
                  "counterexample_rows": bad},
        repro=repro)


_IF_STMT = ("when the extended Sylow normalizer hypothesis holds, every "
            "Q-invariant odd-degree character lying over a fixed central "
            "character is fixed by the odd-squaring map")


def _concrete_automorphisms(spec: GroupSpec, qdesc: str):
    q = _parse_qdesc(qdesc)
    out = []
    if q.graph:
        out.append(AutomorphismDesc(graph=True))
    if q.involutary_field:
        out.append(AutomorphismDesc(field_power=spec.frob_power))
    for m in q.field_powers:
        out.append(AutomorphismDesc(field_power=m))
    return out


def _stabilize(g, P, aut: AutomorphismDesc) -> AutomorphismDesc:
    """Replace aut by inner*aut so that it stabilises P (repair by
    conjugating with a deterministic element carrying aut(P) onto P)."""
    from .matgroup import apply_automorphism

    spec = g.spec
    image = {apply_automorphism(spec, x, aut) for x in P.element_set}
    if image == P.element_set:
        return aut
    mul, inv = g.mul, g.inv
    igens = [apply_automorphism(spec, x, aut) for x in P.gens]
    pset = P.element_set
    for c in g.elements:
        ci = inv(c)
        if all(mul(mul(c, y), ci) in pset for y in igens):
            if {mul(mul(c, y), ci) for y in image} == pset:
                d = aut.diagonal_conjugator
                comp = c if d is None else mul(c, d)
                return AutomorphismDesc(field_power=aut.field_power,
                                        graph=aut.graph,
                                        diagonal_conjugator=comp)
    raise RuntimeError("could not conjugate the automorphism onto the Sylow")


def _q_fixed_cosets_trivial(g, P, auts) -> bool:
    """C_{N(P)/P}(Q) = 1 by explicit action on canonical coset reps."""
    from .matgroup import apply_automorphism

    N = g.normalizer(P)
    pset = P.element_set
    mul = g.mul
    # canonical representative of xP: lexicographically least member
    elems = N.sorted_elements()
    sorted_p = sorted(pset)

    def coset_rep(x):
        return min(mul(x, h) for h in sorted_p)

    reps = sorted({coset_rep(x) for x in elems})
    for r in reps:
        if r in pset:
            continue
        if all(coset_rep(apply_automorphism(g.spec, r, a)) == r for a in auts):
            return False
    return True


@_timed
def form_independence_check() -> CheckRecord:
    """Run one unitary group under both Hermitian forms (identity and
    antidiagonal) and compare every structural verdict."""
    from .engine import _closure, _unitary_generators, unitary_form_change
    from .matgroup import mat_conj_transpose

    spec = GroupSpec("GU", 2, 3)
    F, n = spec.field, spec.n
    g_id = enumerate_group(spec)
    D = unitary_form_change(3, 2)
    Dinv = mat_inv(F, n, D)
    # transport every element back to the antidiagonal form and re-derive
    elems_anti = [mat_mul(F, n, Dinv, mat_mul(F, n, x, D)) for x in g_id.elements]
    J = tuple([0, F.one, F.one, 0])
    ok_form = all(
        mat_mul(F, n, mat_conj_transpose(F, n, x, spec.frob_power),
                mat_mul(F, n, J, x)) == J for x in elems_anti[:50])
    gens_anti = [mat_mul(F, n, Dinv, mat_mul(F, n, x, D)) for x in g_id.gens]
    g_anti = group_from_generators(F, n, gens_anti, budget=len(elems_anti) + 1)
    T_id = table_for(str(spec))
    T_anti = dixon_table(g_anti)
    same = {
        "order": g_id.order == g_anti.order,
        "class_sizes": sorted(c.size for c in g_id.conjugacy_classes())
        == sorted(c.size for c in g_anti.conjugacy_classes()),
        "degrees": sorted(T_id.degrees) == sorted(T_anti.degrees),
        "sylow_order": g_id.sylow_2().order == g_anti.sylow_2().order,
        "normalizer_order": g_id.normalizer(g_id.sylow_2()).order
        == g_anti.normalizer(g_anti.sylow_2()).order,
        "odd_sigma_fixed": all_odd_sigma_fixed(T_id) == all_odd_sigma_fixed(T_anti),
        "form_condition_holds": ok_form,
    }
    ok = all(same.values())
    return CheckRecord(
        "hermitian-form-independence", {"spec": str(spec)},
        PASS if ok else FAIL,
        "all structural verdicts agree between the identity-form and "
        "antidiagonal-form realisations of the same unitary group",
        evidence=same, repro="sylchar verify --only hermitian-form-independence")


# -- the default catalog -------------------------------------------------------


def default_catalog():
    """(check-id, callable) pairs in deterministic execution order."""
    tasks = []

    table_groups = []
    for q in (3, 4, 5, 7, 8, 9, 11, 13):
        table_groups.append(f"SL(2,{q})")
        table_groups.append(f"PSL(2,{q})")
    table_groups += ["GL(2,3)", "GL(2,5)", "GL(2,7)",
                     "SL(3,3)", "PSL(3,3)", "GU(2,3)", "SU(3,2)", "PSU(3,2)",
                     "SU(3,3)", "PSU(3,3)"]

    for s in table_groups:
        tasks.append((f"navarro:{s}", lambda s=s: navarro_check(s)))
    for s in table_groups:
        tasks.append((f"table:{s}", lambda s=s: table_invariants_check(s)))
        tasks.append((f"sigma:{s}", lambda s=s: sigma_action_check(s)))

    # Sylow structure sweep: every odd-q case within the enumeration budget
    cf_cases = []
    for eps in (1, -1):
        for n in range(2, 9):
            for q in (3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27):
                kind = "GL" if eps == 1 else "GU"
                try:
                    if group_order(GroupSpec(kind, n, q)) <= DEFAULT_BUDGET:
                        cf_cases.append((n, q, eps))
                except ValueError:
                    continue
    for (n, q, eps) in cf_cases:
        tasks.append((f"carter-fong:{n},{q},{eps}",
                      lambda n=n, q=q, eps=eps: carter_fong_check(n, q, eps)))
    for eps in (1, -1):
        for q in (3, 5, 7):
            tasks.append((f"sylow-tower:{q},{eps}",
                          lambda q=q, eps=eps: sylow_tower_check(q, eps)))
    for m in (1, 2, 3):
        for q in (3, 5, 7):
            for eps in (1, -1):
                tasks.append((f"index-two-part:{m},{q},{eps}",
                              lambda m=m, q=q, eps=eps: index_identity_check(m, q, eps)))

    sn2s_cases = [(2, q, 1) for q in (5, 7, 9, 11, 13)] + \
        [(2, 4, 1), (2, 8, 1), (3, 3, 1), (3, 3, -1)]
    for (n, q, eps) in sn2s_cases:
        tasks.append((f"sn2s:{n},{q},{eps}",
                      lambda n=n, q=q, eps=eps: sn2s_criterion_check(n, q, eps)))

    witness_cases = [
        # (n, q, eps, Q, expectation, conditions)
        (5, 7, 1, "", "witness", ()),
        (5, 13, 1, "", "witness", ()),
        (11, 7, 1, "", "witness", ()),
        (5, 5, -1, "", "witness", ()),
        (5, 49, 1, "field:m=1", "witness", ()),
        (3, 7, 1, "", "refuse", (1,)),
        (3, 13, 1, "", "refuse", (1,)),
        (3, 5, 1, "", "refuse", (1,)),
        (6, 7, 1, "", "refuse", (1,)),
        (6, 5, -1, "", "refuse", (1,)),
        (6, 7, -1, "", "refuse", (1,)),
        (4, 5, 1, "", "refuse", (1,)),
        (4, 3, 1, "", "refuse", (1,)),
        (5, 7, 1, "graph", "refuse", (2,)),
        (5, 5, -1, "field:inv", "refuse", (2,)),
        (7, 25, 1, "field:m=1", "refuse", (3,)),
        (7, 81, 1, "field:m=2", "refuse", (4,)),
        (6, 169, 1, "field:m=1", "refuse", (5,)),
        (5, 9, 1, "field:m=1", "refuse", (1, 3, 5)),
        (6, 25, 1, "field:m=1", "refuse", (1, 3, 5)),
    ]
    for (n, q, eps, qd, expect, conds) in witness_cases:
        tasks.append((f"witness:{n},{q},{eps},{qd or 'trivial'}",
                      lambda n=n, q=q, eps=eps, qd=qd, expect=expect, conds=conds:
                      witness_case_check(n, q, eps, qd, expect, conds)))

    for (n, q, eps) in [(3, 8, 1), (3, 4, -1), (3, 16, 1), (4, 8, 1), (3, 4, 1)]:
        tasks.append((f"witness-char2:{n},{q},{eps}",
                      lambda n=n, q=q, eps=eps: p2_witness_check(n, q, eps)))

    tasks.append(("torus-degeneracy", torus_degeneracy_check))

    gggr_cases = [
        ("SL(2,3)", (2,), 2),
        ("SL(2,3)", (1, 1), None),
        ("GL(2,3)", (2,), 2),
        ("GL(2,3)", (1, 1), None),
        ("SL(2,5)", (2,), 2),
        ("SL(2,7)", (2,), 2),
        ("SL(2,9)", (2,), 2),
        ("SL(3,3)", (3,), 2),
        ("SL(3,3)", (2, 1), 2),
    ]
    for (s, part, k) in gggr_cases:
        pname = ",".join(str(x) for x in part)
        tasks.append((f"gggr:{s}:{pname}",
                      lambda s=s, part=part, k=k: gggr_case_check(s, part, k)))

    for q in (3, 5, 7, 9, 11):
        tasks.append((f"sl4-torus:{q}", lambda q=q: sl4_identity_check(q)))
    tasks.append(("sl4-square-conjugacy:3", lambda: sl4_conjugator_check(3)))

    fi_cases = [("PSL(2,7)", ""), ("PSL(2,9)", "field:m=1"), ("PSL(3,3)", ""),
                ("PSL(2,5)", ""), ("PSU(3,3)", "")]
    for (s, qd) in fi_cases:
        tasks.append((f"condition-FI:{s}", lambda s=s, qd=qd: condition_FI_check(s, qd)))
    if_cases = [("SL(2,7)", ""), ("SL(2,9)", "field:m=1"), ("SL(2,5)", ""),
                ("SL(3,3)", "")]
    for (s, qd) in if_cases:
        tasks.append((f"condition-IF:{s}", lambda s=s, qd=qd: condition_IF_check(s, qd)))

    tasks.append(("hermitian-form-independence", form_independence_check))
    return tasks


def run_catalog(only=None, workers: int = 1, budget: int = DEFAULT_BUDGET):
    """Execute the catalog (optionally filtered by id prefix) and build the
    report; entries always assemble in catalog order."""
    tasks = default_catalog()
    if only:
        tasks = [(tid, fn) for tid, fn in tasks
                 if any(tid == o or tid.startswith(o) for o in only)]
    records: list[CheckRecord | None] = [None] * len(tasks)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(fn): i for i, (tid, fn) in enumerate(tasks)}
            for fut, i in futures.items():
                records[i] = fut.result()
    else:
        for i, (tid, fn) in enumerate(tasks):
            records[i] = fn()
    out = []
    for (tid, _), rec in zip(tasks, records):
        d = rec.to_dict()
        d["id"] = tid
        out.append(d)
    counts = {}
    for d in out:
        counts[d["verdict"]] = counts.get(d["verdict"], 0) + 1
    return {
        "schema": SCHEMA,
        "records": out,
        "summary": {"counts": counts, "total": len(out),
                    "failed": counts.get(FAIL, 0)},
    }


def report_to_json(report: dict, include_timing: bool = True) -> str:
    if not include_timing:
        report = json.loads(json.dumps(report))
        for rec in report["records"]:
            rec.pop("elapsed_ms", None)
    return json.dumps(report, indent=2, sort_keys=True)


def report_to_text(report: dict) -> str:
    lines = []
    for rec in report["records"]:
        lines.append(f"[{rec['verdict']:7s}] {rec['id']}")
        if rec["verdict"] == FAIL:
            lines.append(f"          repro: {rec['repro']}")
            lines.append(f"          evidence: {json.dumps(rec['evidence'], sort_keys=True)}")
        elif rec["verdict"] in (SKIP, FINDING):
            lines.append(f"          note: {json.dumps(rec['evidence'], sort_keys=True)}")
    c = report["summary"]["counts"]
    lines.append("-" * 60)
    lines.append("  ".join(f"{k}={v}" for k, v in sorted(c.items())))
    return "\n".join(lines)
