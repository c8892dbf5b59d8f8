"""Assertion lists for the registered examples."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .lattice import Lattice, hnf, intersect
from .nilgroup import Elem, central_data, sg_closure, translation_subgroup
from .registry import (
    TEMPLATE_POOL,
    TEMPLATES,
    intertwines,
    make_example,
    template_name,
    theta_closed,
    theta_recurrence,
)
from .selfsim import Engine, cycle_type, parse_word, perm_cycles
from .vend import (
    bounds_report,
    center_restriction,
    core_compute,
    derived_chain,
    f_eval,
    finite_state_predict,
    group_invariants,
    image_data,
    is_injective,
    pq_theorem_check,
    prop3_data,
    simplicity_decide,
    strong_simplicity,
    thm13_check,
    triple_validate,
)


@dataclass
class Checklist:
    name: str
    params: dict
    items: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def flag(self, label: str, detail=None):
        """A claim that fails on this instance; reported, never asserted."""
        self.flags.append({"claim": label, "detail": detail})

    def add(self, label: str, ok: bool, detail=None):
        self.items.append({"check": label, "pass": bool(ok), "detail": detail})
        return ok

    @property
    def ok(self) -> bool:
        return all(it["pass"] for it in self.items)

    def to_json(self):
        return {
            "example": self.name,
            "params": self.params,
            "pass": self.ok,
            "checks": self.items,
            "flags": self.flags,
        }


THETA_TABLE = {
    3: (3, 0),
    4: (16, 4, 0),
    5: (80, 80, 0, 0),
    6: (384, 1152, 256, 0, 0),
}


# ---------------------------------------------------------------------------

def _adding_machine(c: Checklist, max_pairs: int):
    t = make_example("adding-machine")
    c.add("valid, m = 2", triple_validate(t).ok and t.m == 2)
    E = Engine([t])
    one = E.elem(Elem(0, (1,)))
    kids, perm = E.decompose(one)
    c.add("1 = (0, 1) with the swap at the root", kids == (E.elem(Elem(0, (0,))), one) and perm == (1, 0),
          {"children": [str(k) for k in kids], "perm": perm_cycles(perm)})
    c.add("111 maps to 000", E.act_vertex(one, (1, 1, 1)) == (0, 0, 0))
    cycles = all(cycle_type(E.level_perm(one, d)) == [2 ** d] for d in range(1, 13))
    c.add("level d action is one 2^d-cycle, d <= 12", cycles)
    order8 = E.order(one, 255, 8, max_pairs)
    c.add("order of level-8 action = 256", order8.level_order == 256, order8.to_json())
    faithful = {k: E.is_trivial(E.elem(Elem(0, (k,))), max_pairs).verdict for k in range(-8, 9) if k}
    c.add("no nonzero k in [-8, 8] acts trivially", all(v == "NotEqual" for v in faithful.values()))
    st = E.states(one, 10)
    c.add("two states", st.finite and len(st.states) == 2, st.to_json())
    c.add("simple", simplicity_decide(t).status == "Simple")
    c.add("finite-state prediction", finite_state_predict(t)["verdict"] == "Predicted")
    c.add("level transitive for d <= 10", all(E.level_transitive([one], d) for d in range(1, 11)))


def example1_r_sequence(steps: int) -> list[int]:
    """r_1..r_steps by t_i = r_{i-1}^-1 mod 2^(i-2), r_i = 1 + 4 t_i."""
    r = [None, 1, 1]
    for i in range(3, steps + 1):
        mod = 2 ** (i - 2)
        t = pow(r[i - 1], -1, mod) if mod > 1 else 0
        r.append(1 + 4 * t)
    return r[1:steps + 1]


def recovered_r(L: Lattice, i: int):
    """(d, r) with L = <(d, 0), (r, 2)>, r reduced mod d, or None."""
    bottom = intersect(L, hnf([(1, 0)], 2))
    if bottom.rank != 1 or (0, 1) in L:
        return None
    d = bottom.basis[0][0]
    r = next((x for x in range(d) if (x, 2) in L), None)
    if r is None:
        return None
    return d, r


def _example1(c: Checklist, steps: int, max_states: int):
    t = make_example("example1")
    chain, reason = derived_chain(t, steps)
    c.add("chain reaches the requested length", len(chain) == steps + 1, reason)
    c.add("[G : G(i)] = 2^i", all(s.index_in_G == 2 ** s.i for s in chain),
          [s.index_in_G for s in chain])
    if len(chain) > 1:
        c.add("G(1) = <alpha, beta^2>, H(1) = <alpha^2, beta^2>",
              chain[1].Gi.W == hnf([(1, 0), (0, 2)], 2) and chain[1].Hi.W == hnf([(2, 0), (0, 2)], 2))
    rs = example1_r_sequence(steps)
    rec_ok, cong_ok, lat_ok = True, True, True
    recs = {}
    for s in chain[1:]:
        i = s.i
        got = recovered_r(s.Gi.W, i)
        recs[i] = got
        if got is None or got[0] != 2 ** (i - 1):
            rec_ok = False
            continue
        if s.Gi.W != hnf([(2 ** (i - 1), 0), (rs[i - 1], 2)], 2):
            lat_ok = False
        if i >= 4:
            # the lattice fixes r_i mod 2^(i-1), hence t_i mod 2^(i-3)
            r_prev = recs[i - 1][1]
            t_rec = (got[1] - 1) // 4
            if (t_rec * r_prev - 1) % 2 ** (i - 3):
                cong_ok = False
    c.add("G(i) = <(2^(i-1), 0), (r_i, 2)> with r_1 = r_2 = 1", rec_ok and lat_ok and rs[:2] == [1, 1][:len(rs)],
          {"r": rs})
    c.add("recovered r_i satisfy t_i r_(i-1) = 1 to the precision the lattices fix", cong_ok)
    if steps >= 3:
        c.add("G(3) = <alpha^4, alpha^5 beta^2>", chain[3].Gi.W == hnf([(4, 0), (5, 2)], 2))
    E = Engine([t])
    st = E.states(E.elem(Elem(0, (1, 0))), max_states)
    c.add(f"states(alpha) exceed {max_states}", not st.finite)
    fp = finite_state_predict(t)
    c.add("finite-state prediction fails", fp["verdict"] == "NotPredicted", fp)


def homomorphism_pairs(t, pairs: int, depth: int, seed: int = 0, radius: int = 3):
    """Pairs (g, h) where the portrait of phi(gh) differs from phi(g) then phi(h)."""
    rng = random.Random(seed)
    E = Engine([t])
    G = t.G
    bad = []

    def rand_elem():
        k = rng.randint(-radius, radius) if G.is_affine else 0
        return Elem(k, tuple(rng.randint(-radius, radius) for _ in range(G.n)))

    for _ in range(pairs):
        g, h = rand_elem(), rand_elem()
        lhs = E.portrait(E.elem(g), depth).compose(E.portrait(E.elem(h), depth))
        rhs = E.portrait(E.elem(G.mul(g, h)), depth)
        if lhs != rhs:
            bad.append((g, h))
    return bad


def _heisenberg_intro(c: Checklist, bound: int):
    t = make_example("heisenberg-intro")
    c.add("valid, m = 4", triple_validate(t).ok and t.m == 4)
    c.add("f(x^2) = b", f_eval(t, Elem(2, (0, 0))) == Elem(0, (1, 0)))
    c.add("injective", is_injective(t))
    c.add("simple", simplicity_decide(t).status == "Simple")
    st = strong_simplicity(t, bound)
    c.add(f"no invariant subgroup found up to bound {bound}", st.verdict == "NoWitnessUpTo", st.to_json())
    bad = homomorphism_pairs(t, 100, 5)
    c.add("portraits respect products on 100 random pairs at depth 5", not bad, [str(b) for b in bad[:3]])


def _power_f22(c: Checklist, n: int):
    t = make_example("power-f22", n=n)
    idata = image_data(t)
    c.add("recurrent candidate, m' = 1", idata.m_prime == 1)
    c.add("simple", simplicity_decide(t).status == "Simple")
    b = bounds_report(t).data["thm15"]
    c.add(f"gamma_2 index {n * n} is a k-number dividing q", b.get("holds") is True
          and b["gamma_c_index"] == n * n and b["k"] == n * n and b["q"] == n * n, b)
    G = t.G
    U = translation_subgroup(G, hnf([(0, n ** 4)], 2))
    rep = thm13_check(t, U).data
    c.add(f"divisor pair for U = <z^{n ** 4}>", rep["verdict"] == "PairFound", rep)
    flag = rep.get("U_in_Uf", {})
    c.add("special case U <= U^f reported as a flag", flag.get("flag") is not None, flag)
    if flag.get("flag"):
        c.flag("[U^f : U] divides m'", flag)


def _example2(c: Checklist, n: int):
    t = make_example("example2", n=n)
    p3 = prop3_data(t)
    G = t.G
    ZG = central_data(G).center
    L_expected = sg_closure(G, ZG.generators() + [Elem(n, (0, 0))])
    R_expected = sg_closure(G, ZG.generators() + [Elem(1, (0, 0))])
    c.add(f"L = Z(G)<a^{n}>", p3.L == L_expected, p3.L.to_json())
    c.add("sqrt L = Z(G)<a>", p3.rootL == R_expected, p3.rootL.to_json())
    c.add("L differs from sqrt L", p3.L != p3.rootL)
    c.add("both abelian and semi-invariant", all(p3.checks[k] for k in (
        "L_abelian", "sqrtL_abelian", "L_semi_invariant", "sqrtL_semi_invariant")), p3.checks)


def _example33(c: Checklist, max_pairs: int):
    t = make_example("example33")
    G = t.G
    c.add("f([a^3, b^2]) = [a^2, b^3]", f_eval(t, G.comm(Elem(3, (0, 0)), Elem(0, (2, 0))))
          == G.comm(Elem(2, (0, 0)), Elem(0, (3, 0))))
    r = core_compute(t, 8)
    z6 = translation_subgroup(G, hnf([(0, 6)], 2))
    ZH = translation_subgroup(G, intersect(t.H.W, central_data(G).center.W))
    c.add("core is exactly <z^6> = Z(H) within 8 iterations", r.exact and r.core == z6 == ZH, r.to_json())
    c.add("not simple", r.status == "NotSimple")
    E = Engine([t])
    triv = [E.is_trivial(E.elem(Elem(0, (0, 6 * k))), max_pairs).verdict for k in range(-3, 4) if k]
    c.add("z^(6k) acts trivially", all(v == "Equal" for v in triv))
    zr = E.is_trivial(E.elem(Elem(0, (0, 1))), max_pairs)
    c.add("z acts nontrivially", zr.verdict == "NotEqual", zr.to_json())
    rep = thm13_check(t, z6).data
    c.add("U = <z^6>: pair (1, 1)", rep["verdict"] == "PairFound" and rep["pair"] == [1, 1], rep)


def _example4(c: Checklist):
    t = make_example("example4")
    K, ZH, A = center_restriction(t)
    imgs = hnf([K.coords(f_eval(t, Elem(0, r)).v) for r in ZH.basis], K.rank)
    c.add("f maps Z(H) onto Z(G)", imgs == Lattice.full(K.rank))
    mp = image_data(t).m_prime
    c.add("f is not an epimorphism", mp != 1, {"m_prime": mp})


def _example5(c: Checklist, n: int, p: int, bound: int):
    t = make_example("example5", n=n, p=p)
    c.add(f"valid, index {p}^{n}", triple_validate(t).ok and t.m == p ** n)
    idata = image_data(t)
    c.add("epimorphism and injective", idata.m_prime == 1 and idata.injective)
    c.add("simple", simplicity_decide(t).status == "Simple")
    # x'^(p-1) (p v_n)^-1 = x^(p-1) v_n^-1 is a fixed point of f
    g = Elem(p - 1, tuple(-1 if j == n - 1 else 0 for j in range(n)))
    fixed = p > 1 and f_eval(t, g) == g
    c.add("f fixes x^(p-1) v_n^-1", fixed, str(g))
    st = strong_simplicity(t, bound)
    if st.verdict == "WitnessFound":
        c.flag("strongly simple", {"invariant_subgroup": st.witness.to_json(), "method": st.method})


def _sec54(c: Checklist, n: int, bound: int):
    th = theta_recurrence(n)
    if n in THETA_TABLE:
        c.add(f"theta_{n} = {THETA_TABLE[n]}", th == tuple(THETA_TABLE[n]))
    c.add("closed formula agrees for 2 <= k <= 16",
          all(theta_recurrence(k) == theta_closed(k) for k in range(2, 17)))
    c.add("x^2 f = f x for n <= 12", all(intertwines(k) for k in range(2, 13)))
    t = make_example("sec54", n=n)
    s, cls, _ = group_invariants(t.G)
    c.add("index 4, class n, s = 2", t.m == 4 and cls == n and s == 2, {"m": t.m, "c": cls, "s": s})
    c.add("simple", simplicity_decide(t).status == "Simple")
    br = bounds_report(t, bound).data
    c.add("s <= l(4)", br["thm10"]["holds"] is True)
    if n >= 3:
        st = strong_simplicity(t, bound)
        ok = st.verdict == "WitnessFound"
        if n == 3:
            ok = ok and st.witness.W == hnf([(1, 3, 1)], 3)
        c.add("invariant subgroup found and verified", ok, st.to_json())
        c.add("class exceeds l(4), so not strongly simple", br["thm12"]["holds"] is False
              and br["thm12"]["status"] == "consistent", br["thm12"])
    pq = pq_theorem_check(t)
    c.add("degree 2*2 structure items", pq["verdict"] == "Pass", pq)


def _sec21(c: Checklist, max_pairs: int):
    E = Engine(atoms=make_example("sec21-atoms"))
    w = lambda s: parse_word(E, s)  # noqa: E731
    pres = E.verify_presentation()
    c.add("candidate presentation verified on the tree", pres["ok"], pres)
    kids, perm = E.decompose(w("z"))
    c.add("z = (e, z, e, z)(1,2)(3,4)", [str(k) for k in kids] == ["e", "z", "e", "z"]
          and perm_cycles(perm) == "(1,2)(3,4)")
    for lhs, rhs in [("[alpha,beta]", "z"), ("[alpha,beta,alpha]", "e"), ("[alpha,beta,beta]", "e"),
                     ("[alpha,beta,kappa]", "e"), ("[alpha,kappa]", "e"), ("[beta,kappa]", "alpha^-2")]:
        r = E.equal(w(lhs), w(rhs), max_pairs)
        c.add(f"{lhs} = {rhs}", r.verdict == "Equal", r.to_json())
    bad = []
    for i in range(-3, 4):
        for j in range(-3, 4):
            for k in range(-3, 4):
                if (i, j, k) == (0, 0, 0):
                    continue
                r = E.is_trivial(w(f"alpha^{i}*beta^{j}*z^{k}"), max_pairs)
                if r.verdict != "NotEqual" or len(r.witness) > 10:
                    bad.append([i, j, k])
    c.add("alpha^i beta^j z^k moves a vertex at depth <= 10", not bad, bad[:5])
    st = E.states(w("alpha"), 10)
    c.add("alpha has at most 10 states", st.finite, st.to_json())


def _templates(c: Checklist, max_pairs: int, depth: int = 6):
    E = Engine(atoms=make_example("eight-templates"))
    z = E.atom("z")
    failures = []
    for shape in TEMPLATES:
        for h1 in TEMPLATE_POOL:
            for h2 in TEMPLATE_POOL:
                x = E.atom(template_name(shape, h1, h2))
                r = E.is_trivial(E.comm(x, z), max_pairs)
                lp = E.level_perm(E.mul(x, z), depth) == E.level_perm(E.mul(z, x), depth)
                if r.verdict != "Equal" or not lp:
                    failures.append(template_name(shape, h1, h2))
    c.add(f"all templates commute with z (certified, and checked on level {depth})", not failures, failures)


def verify_example(name: str, params: dict | None = None, max_pairs: int = 10000,
                   max_states: int = 200) -> Checklist:
    params = dict(params or {})
    c = Checklist(name, params)
    bound = params.pop("bound", 3)
    if name == "adding-machine":
        _adding_machine(c, max_pairs)
    elif name == "example1":
        _example1(c, params.get("steps", 12), max_states)
    elif name == "heisenberg-intro":
        _heisenberg_intro(c, bound)
    elif name == "power-f22":
        _power_f22(c, params.get("n", 2))
    elif name == "example2":
        _example2(c, params.get("n", 3))
    elif name == "example33":
        _example33(c, max_pairs)
    elif name == "example4":
        _example4(c)
    elif name == "example5":
        _example5(c, params.get("n", 2), params.get("p", 3), bound)
    elif name == "sec54":
        _sec54(c, params.get("n", 3), bound)
    elif name == "sec21-atoms":
        _sec21(c, max_pairs)
    elif name == "eight-templates":
        _templates(c, max_pairs)
    else:
        raise KeyError(f"unknown example {name!r}")
    return c


VERIFY_PARAMS = {"example1": ("steps",)}
