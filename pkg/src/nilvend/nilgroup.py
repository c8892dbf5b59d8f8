"""Two group backends: free abelian Z^n and Z^n x| <x> with a unipotent action.

An element ``Elem(k, v)`` stands for x^k v.  The action is on the right,
x^-1 v x = v X, so

    (k1, v1)(k2, v2) = (k1 + k2, v1 X^k2 + v2)

and for a translation (0, v) one gets [x, (0, v)] = (0, v (I - X)) with the
commutator [g, h] = g^-1 h^-1 g h.  Free abelian elements use k = 0.

A subgroup is described by ``(W, e, u0)``: the lattice W of its pure
translations, the smallest positive x-exponent e occurring in it (0 if
none) and the translation u0 of one element x^e u0.  Since conjugation by
that element acts on W through X^e, W X^e = W is part of the contract.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .arith import identity, mat_inv, mat_mul, mat_pow, mat_sub, vec_mat, to_int
from .lattice import (
    INFINITE,
    Lattice,
    hnf,
    hnf_with_transform,
    index as lattice_index,
    intersect,
    lattice_sum,
    rational_kernel_lattice,
    saturate,
    snf,
    xgcd,
)


@dataclass(frozen=True)
class Elem:
    k: int
    v: tuple

    def __repr__(self):
        return f"({self.k}, {list(self.v)})"

    def to_json(self):
        return {"k": self.k, "v": list(self.v)}


@lru_cache(maxsize=4096)
def _xpow(X: tuple, k: int) -> tuple:
    return tuple(tuple(to_int(x) for x in r) for r in mat_pow(X, k))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


@dataclass(frozen=True)
class GroupDesc:
    """``kind`` is "abelian" (Z^n) or "affine" (Z^n x| <x> acting by X)."""

    kind: str
    n: int
    X: tuple

    @classmethod
    def free_abelian(cls, n: int) -> "GroupDesc":
        return cls("abelian", n, tuple(identity(n)))

    @classmethod
    def affine(cls, X) -> "GroupDesc":
        X = tuple(tuple(to_int(x) for x in r) for r in X)
        n = len(X)
        if any(len(r) != n for r in X):
            raise ValueError("action matrix must be square")
        N = mat_sub(X, identity(n))
        if n and any(any(r) for r in mat_pow(N, n)):
            raise ValueError("action matrix is not unipotent")
        return cls("affine", n, X)

    @property
    def is_affine(self) -> bool:
        return self.kind == "affine"

    def xpow(self, k: int) -> tuple:
        return _xpow(self.X, k)

    def identity(self) -> Elem:
        return Elem(0, (0,) * self.n)

    def elem(self, k, v) -> Elem:
        v = tuple(to_int(x) for x in v)
        if len(v) != self.n:
            raise ValueError(f"translation has length {len(v)}, expected {self.n}")
        if k and not self.is_affine:
            raise ValueError("free abelian elements have no x-part")
        return Elem(int(k), v)

    def translation(self, v) -> Elem:
        return self.elem(0, v)

    def mul(self, a: Elem, b: Elem) -> Elem:
        if len(a.v) != self.n or len(b.v) != self.n:
            raise ValueError("rank mismatch")
        if b.k == 0:
            return Elem(a.k, _add(a.v, b.v))
        return Elem(a.k + b.k, _add(vec_mat(a.v, self.xpow(b.k)), b.v))

    def prod(self, *elems: Elem) -> Elem:
        out = self.identity()
        for e in elems:
            out = self.mul(out, e)
        return out

    def inv(self, a: Elem) -> Elem:
        if a.k == 0:
            return Elem(0, _neg(a.v))
        return Elem(-a.k, _neg(vec_mat(a.v, self.xpow(-a.k))))

    def pow(self, a: Elem, m: int) -> Elem:
        if m < 0:
            return self.pow(self.inv(a), -m)
        result = self.identity()
        base = a
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def comm(self, a: Elem, b: Elem) -> Elem:
        """[a, b] = a^-1 b^-1 a b."""
        return self.prod(self.inv(a), self.inv(b), a, b)

    def conj(self, a: Elem, g: Elem) -> Elem:
        """a^g = g^-1 a g."""
        return self.prod(self.inv(g), a, g)

    def nilpotency_matrix(self) -> tuple:
        return mat_sub(self.X, identity(self.n))

    def is_abelian_group(self) -> bool:
        return not self.is_affine or self.X == tuple(identity(self.n))

    def to_json(self):
        if self.is_affine:
            return {"type": "affine", "rank": self.n, "x_matrix": [list(r) for r in self.X]}
        return {"type": "abelian", "rank": self.n}


# ---------------------------------------------------------------------------
# subgroup descriptors

@dataclass(frozen=True)
class SubgroupDesc:
    W: Lattice
    e: int
    u0: tuple

    @property
    def n(self) -> int:
        return self.W.n

    def h0(self) -> Elem:
        return Elem(self.e, self.u0)

    def generators(self) -> list[Elem]:
        """Polycyclic generating sequence: x^e u0 first (if e > 0), then the W basis."""
        gens = [Elem(self.e, self.u0)] if self.e else []
        return gens + [Elem(0, r) for r in self.W.basis]

    def hirsch(self) -> int:
        return self.W.rank + (1 if self.e else 0)

    def to_json(self):
        return {"lattice": self.W.to_rows(), "e": self.e, "u0": list(self.u0)}

    def __repr__(self):
        return f"SubgroupDesc(W={self.W.to_rows()}, e={self.e}, u0={list(self.u0)})"


def make_subgroup(G: GroupDesc, W: Lattice, e: int = 0, u0=None) -> SubgroupDesc:
    """Validate and canonicalize a descriptor."""
    if W.n != G.n:
        raise ValueError("lattice rank does not match the group")
    if e < 0:
        raise ValueError("x-step must be nonnegative")
    if e and not G.is_affine:
        raise ValueError("free abelian groups have no x-part")
    u0 = tuple(u0) if u0 is not None else (0,) * G.n
    if e == 0:
        u0 = (0,) * G.n
    else:
        moved = hnf([vec_mat(r, G.xpow(e)) for r in W.basis], G.n) if W.basis else W
        if moved != W:
            raise ValueError(f"lattice {W.to_rows()} is not stable under X^{e}")
        u0 = W.residue(u0)
    return SubgroupDesc(W, e, u0)


def whole_group(G: GroupDesc) -> SubgroupDesc:
    return SubgroupDesc(Lattice.full(G.n), 1 if G.is_affine else 0, (0,) * G.n)


def trivial_subgroup(G: GroupDesc) -> SubgroupDesc:
    return SubgroupDesc(Lattice.zero(G.n), 0, (0,) * G.n)


def translation_subgroup(G: GroupDesc, L: Lattice) -> SubgroupDesc:
    return make_subgroup(G, L, 0)


def _tau(G: GroupDesc, S: SubgroupDesc, j: int) -> tuple:
    return G.pow(S.h0(), j).v


def sg_member(G: GroupDesc, S: SubgroupDesc, g: Elem) -> bool:
    if S.e == 0:
        return g.k == 0 and g.v in S.W
    if g.k % S.e:
        return False
    j = g.k // S.e
    t = _tau(G, S, j)
    return tuple(a - b for a, b in zip(g.v, t)) in S.W


def sg_coords(G: GroupDesc, S: SubgroupDesc, g: Elem):
    """(j, c) with g = h0^j * prod(w_i^c_i), or None when g is not in S."""
    if S.e == 0:
        if g.k:
            return None
        c = S.W.coords(g.v)
        return None if c is None else (0, c)
    if g.k % S.e:
        return None
    j = g.k // S.e
    rest = G.mul(G.pow(S.h0(), -j), g)
    c = S.W.coords(rest.v)
    return None if c is None else (j, c)


def _moved_lattice(G: GroupDesc, W: Lattice, k: int) -> Lattice:
    if k == 0 or W.is_zero():
        return W
    return hnf([vec_mat(r, G.xpow(k)) for r in W.basis], G.n)


def coset_rep(G: GroupDesc, S: SubgroupDesc, g: Elem) -> Elem:
    """Canonical representative of the right coset S g.

    The x-exponent is reduced mod e; the translation of x^k' t is then only
    defined modulo W X^k' (left multiplication by (0, w) adds w X^k').
    """
    if S.e:
        j = g.k // S.e
        g = G.mul(G.pow(S.h0(), -j), g)
    return Elem(g.k, _moved_lattice(G, S.W, g.k).residue(g.v))


def sg_index(G: GroupDesc, S: SubgroupDesc):
    if not S.W.is_full_rank():
        return INFINITE
    base = lattice_index(Lattice.full(G.n), S.W)
    if G.is_affine:
        return INFINITE if S.e == 0 else S.e * base
    return base


def _lattice_residues(L: Lattice):
    """All canonical residues of a full-rank HNF lattice, lexicographic."""
    diag = [L.basis[i][i] for i in range(L.n)]
    return [tuple(t) for t in itertools.product(*(range(d) for d in diag))]


def sg_transversal(G: GroupDesc, S: SubgroupDesc) -> list[Elem]:
    """Canonical right transversal ordered by x-exponent, then translation."""
    if sg_index(G, S) is INFINITE:
        raise ValueError("subgroup has infinite index; no finite transversal")
    steps = range(S.e) if G.is_affine else range(1)
    out = []
    for a in steps:
        for t in _lattice_residues(_moved_lattice(G, S.W, a)):
            out.append(Elem(a, t))
    return out


def sg_contains(G: GroupDesc, S: SubgroupDesc, T: SubgroupDesc) -> bool:
    return all(sg_member(G, S, g) for g in T.generators())


# ---------------------------------------------------------------------------
# closure with optional companion tracking

class Tracker:
    """Group operations for companion elements carried through a closure."""

    def __init__(self, mul, inv, identity):
        self.mul = mul
        self.inv = inv
        self.identity = identity

    def pow(self, a, m: int):
        if m < 0:
            a, m = self.inv(a), -m
        result = self.identity
        base = a
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def combine(self, items, coeffs):
        out = self.identity
        for a, c in zip(items, coeffs):
            if c:
                out = self.mul(out, self.pow(a, c))
        return out

    @classmethod
    def of_group(cls, G: GroupDesc) -> "Tracker":
        return cls(G.mul, G.inv, G.identity())


def _hnf_tracked(rows, comps, n, tracker):
    H, U = hnf_with_transform(rows, n)
    if tracker is None:
        return H, None
    return H, [tracker.combine(comps, U[i]) for i in range(len(H))]


def sg_closure(G: GroupDesc, gens, companions=None, tracker: Tracker | None = None):
    """Subgroup generated by ``gens``.

    With ``companions`` and ``tracker`` given, every product taken on the
    generators is mirrored on the companions; returns ``(S, comp)`` where
    ``comp`` holds companions of S.generators().  Used to pull back along
    homomorphisms and to lift from quotients.
    """
    tracked = companions is not None
    if tracked and tracker is None:
        raise ValueError("companions need a tracker")
    gens = list(gens)
    comps = list(companions) if tracked else [None] * len(gens)
    if not G.is_affine and any(g.k for g in gens):
        raise ValueError("free abelian group element with x-part")

    e = 0
    g0, c0 = G.identity(), (tracker.identity if tracked else None)
    for g, c in zip(gens, comps):
        if g.k == 0:
            continue
        d, s, t = xgcd(e, g.k)
        if d == e:
            continue
        g0 = G.mul(G.pow(g0, s), G.pow(g, t))
        if tracked:
            c0 = tracker.mul(tracker.pow(c0, s), tracker.pow(c, t))
        e = d
    if e and g0.k < 0:
        g0 = G.inv(g0)
        if tracked:
            c0 = tracker.inv(c0)

    rows, rcomps = [], []
    for g, c in zip(gens, comps):
        if e:
            q = g.k // e
            w = G.mul(g, G.pow(g0, -q))
            if tracked:
                c = tracker.mul(c, tracker.pow(c0, -q))
        else:
            w = g
        rows.append(w.v)
        rcomps.append(c)

    H, Hc = _hnf_tracked(rows, rcomps, G.n, tracker if tracked else None)
    if e:
        while True:
            moved = [vec_mat(r, G.xpow(e)) for r in H]
            movedc = [tracker.mul(tracker.mul(tracker.inv(c0), c), c0) for c in Hc] if tracked else []
            H2, Hc2 = _hnf_tracked(list(H) + moved, (Hc or []) + movedc, G.n, tracker if tracked else None)
            if H2 == H:
                break
            H, Hc = H2, Hc2
    W = Lattice(G.n, tuple(H))
    if e:
        u0 = W.residue(g0.v)
        if tracked:
            diff = tuple(a - b for a, b in zip(g0.v, u0))
            coeffs = W.coords(diff)
            c0 = tracker.mul(c0, tracker.combine(Hc, [-x for x in coeffs]))
        S = SubgroupDesc(W, e, u0)
    else:
        S = SubgroupDesc(W, 0, (0,) * G.n)
    if not tracked:
        return S
    return S, ([c0] if e else []) + list(Hc)


def sg_intersection(G: GroupDesc, S1: SubgroupDesc, S2: SubgroupDesc, max_steps: int = 100000) -> SubgroupDesc:
    W = intersect(S1.W, S2.W)
    if S1.e == 0 or S2.e == 0:
        return SubgroupDesc(W, 0, (0,) * G.n)
    E = lcm(S1.e, S2.e)
    g1 = G.pow(S1.h0(), E // S1.e)
    g2 = G.pow(S2.h0(), E // S2.e)
    Wsum = lattice_sum(S1.W, S2.W)
    d1 = tuple(a - b for a, b in zip(g1.v, g2.v))
    if d1 not in saturate(Wsum):
        return SubgroupDesc(W, 0, (0,) * G.n)
    Y = G.xpow(E)
    delta = d1
    t = 1
    while Wsum.residue(delta) != (0,) * G.n:
        t += 1
        if t > max_steps:
            raise RuntimeError("intersection period search exceeded its cap")
        delta = _add(vec_mat(delta, Y), d1)
    # delta = A1(t) - A2(t) = w2 - w1 with w1 in W1, w2 in W2
    stacked = list(S1.W.basis) + list(S2.W.basis)
    Hs, U = hnf_with_transform(stacked, G.n)
    hc = Lattice(G.n, tuple(Hs)).coords(delta)
    lam = [sum(hc[i] * U[i][j] for i in range(len(Hs))) for j in range(len(stacked))]
    r1 = S1.W.rank
    w1 = _neg(vec_mat(lam[:r1], S1.W.basis)) if r1 else (0,) * G.n
    A1 = G.pow(S1.h0(), t * E // S1.e)
    return make_subgroup(G, W, t * E, _add(A1.v, w1))


def sg_conjugate(G: GroupDesc, S: SubgroupDesc, g: Elem) -> SubgroupDesc:
    """S^g = g^-1 S g."""
    W = _moved_lattice(G, S.W, g.k)
    if S.e == 0:
        return SubgroupDesc(W, 0, (0,) * G.n)
    h = G.conj(S.h0(), g)
    return make_subgroup(G, W, S.e, h.v)


def sg_relative_index(G: GroupDesc, S: SubgroupDesc, T: SubgroupDesc):
    """[S : T] for T contained in S."""
    if not sg_contains(G, S, T):
        raise ValueError("relative index needs T inside S")
    if T.W.rank < S.W.rank or (S.e and not T.e):
        return INFINITE
    step = T.e // S.e if S.e else 1
    return step * lattice_index(S.W, T.W)


def sg_is_normal(G: GroupDesc, S: SubgroupDesc, gens: list[Elem] | None = None) -> bool:
    gens = gens if gens is not None else group_generators(G)
    for g in gens:
        for h in (g, G.inv(g)):
            if sg_conjugate(G, S, h) != S:
                return False
    return True


def group_generators(G: GroupDesc) -> list[Elem]:
    out = []
    if G.is_affine:
        out.append(Elem(1, (0,) * G.n))
    for i in range(G.n):
        out.append(Elem(0, tuple(int(i == j) for j in range(G.n))))
    return out


def sg_is_abelian(G: GroupDesc, S: SubgroupDesc) -> bool:
    if S.e == 0 or S.W.is_zero():
        return True
    return _moved_lattice(G, S.W, S.e) == S.W and all(
        tuple(vec_mat(r, G.xpow(S.e))) == tuple(r) for r in S.W.basis
    )


# ---------------------------------------------------------------------------
# central series

@dataclass(frozen=True)
class CentralData:
    upper: tuple   # Z_0 .. Z_c as SubgroupDesc
    lower: tuple   # gamma_1 .. gamma_{c+1}
    c: int
    s: int
    h: int

    @property
    def center(self) -> SubgroupDesc:
        return self.upper[1]


def nilpotency_class(G: GroupDesc) -> int:
    if G.is_abelian_group():
        return 1
    N = G.nilpotency_matrix()
    P = N
    c = 1
    while any(any(r) for r in P):
        P = mat_mul(P, N)
        c += 1
    return c


def central_data(G: GroupDesc) -> CentralData:
    if G.is_abelian_group():
        W = whole_group(G)
        T = trivial_subgroup(G)
        return CentralData((T, W), (W, T), 1, 1, G.n + (1 if G.is_affine else 0))
    c = nilpotency_class(G)
    N = G.nilpotency_matrix()
    upper = [trivial_subgroup(G)]
    P = N
    for i in range(1, c + 1):
        if i == c:
            upper.append(whole_group(G))
        else:
            upper.append(SubgroupDesc(rational_kernel_lattice(P), 0, (0,) * G.n))
            P = mat_mul(P, N)
    lower = [whole_group(G)]
    gam = hnf([tuple(to_int(x) for x in r) for r in N], G.n)
    for _ in range(2, c + 2):
        lower.append(SubgroupDesc(gam, 0, (0,) * G.n))
        gam = hnf([tuple(to_int(x) for x in vec_mat(r, N)) for r in gam.basis], G.n) if gam.basis else gam
    return CentralData(tuple(upper), tuple(lower), c, 2, G.n + 1)


def center(G: GroupDesc) -> SubgroupDesc:
    return central_data(G).center


def subgroup_center(G: GroupDesc, S: SubgroupDesc) -> SubgroupDesc:
    """Centre of S when S has finite index (it is then S meet Z(G))."""
    return sg_intersection(G, S, center(G))


def subgroup_lower_term(G: GroupDesc, S: SubgroupDesc, i: int) -> SubgroupDesc:
    """gamma_i(S) for i >= 2 (S abelian when e = 0)."""
    if i < 2:
        return S
    if S.e == 0 or G.is_abelian_group():
        return trivial_subgroup(G)
    M = mat_sub(G.xpow(S.e), identity(G.n))
    L = S.W
    for _ in range(i - 1):
        if L.is_zero():
            break
        L = hnf([tuple(to_int(x) for x in vec_mat(r, M)) for r in L.basis], G.n)
    return SubgroupDesc(L, 0, (0,) * G.n)


# ---------------------------------------------------------------------------
# isolator

def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def isolator(G: GroupDesc, S: SubgroupDesc) -> SubgroupDesc:
    P = saturate(S.W)
    if S.e == 0:
        return SubgroupDesc(P, 0, (0,) * G.n)
    for step in _divisors(S.e):
        d = S.e // step
        # (x^step w)^d = x^e * w * sum_{i<d} X^(step*i); need it in h0 * P
        M = [[0] * G.n for _ in range(G.n)]
        for i in range(d):
            Xi = G.xpow(step * i)
            M = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(M, Xi)]
        rows = [tuple(r) for r in M] + list(P.basis)
        Hs, U = hnf_with_transform(rows, G.n)
        span = Lattice(G.n, tuple(Hs))
        c = span.coords(S.u0)
        if c is None:
            continue
        lam = [sum(c[i] * U[i][j] for i in range(len(Hs))) for j in range(len(rows))]
        w = tuple(lam[: G.n])
        return make_subgroup(G, P, step, w)
    raise AssertionError("x-step of the isolator must divide e")


# ---------------------------------------------------------------------------
# quotients by pure X-invariant translation lattices

@dataclass(frozen=True)
class Quotient:
    """G / K for a pure X-invariant lattice K of translations.

    ``T`` is unimodular with its last rows spanning K; quotient coordinates
    of v are the leading entries of v T^-1.  When the induced action is
    trivial the quotient is returned as a free abelian group whose
    coordinates are (k, v').
    """

    G: GroupDesc
    K: Lattice
    Q: GroupDesc
    T: tuple
    Tinv: tuple
    abelian_embed: bool

    @property
    def r(self) -> int:
        return self.G.n - self.K.rank

    def project(self, g: Elem) -> Elem:
        c = vec_mat(g.v, self.Tinv)[: self.r]
        c = tuple(to_int(x) for x in c)
        if self.abelian_embed:
            return Elem(0, (g.k,) + c if self.G.is_affine else c)
        return Elem(g.k, c)

    def lift(self, q: Elem) -> Elem:
        if self.abelian_embed and self.G.is_affine:
            k, c = q.v[0], q.v[1:]
        elif self.abelian_embed:
            k, c = 0, q.v
        else:
            k, c = q.k, q.v
        full = tuple(c) + (0,) * self.K.rank
        return Elem(k, tuple(to_int(x) for x in vec_mat(full, self.T)))

    def project_subgroup(self, S: SubgroupDesc) -> SubgroupDesc:
        imgs = [self.project(g) for g in S.generators()]
        return sg_closure(self.Q, imgs)

    def kernel_subgroup(self) -> SubgroupDesc:
        return SubgroupDesc(self.K, 0, (0,) * self.G.n)

    def preimage_subgroup(self, S: SubgroupDesc) -> SubgroupDesc:
        gens = [self.lift(g) for g in S.generators()]
        gens += [Elem(0, r) for r in self.K.basis]
        return sg_closure(self.G, gens)


def quotient_by_lattice(G: GroupDesc, K: Lattice) -> Quotient:
    if saturate(K) != K:
        raise ValueError("quotient lattice must be pure")
    if _moved_lattice(G, K, 1) != K:
        raise ValueError("quotient lattice must be invariant under X")
    n, r = G.n, K.rank
    if r == 0:
        T = tuple(identity(n))
    else:
        _, _, V = snf(K.basis)
        Vinv = mat_inv(V)
        rows = [tuple(to_int(x) for x in row) for row in Vinv]
        T = tuple(rows[r:] + rows[:r])
    Tinv = tuple(tuple(to_int(x) for x in row) for row in mat_inv(T))
    M = mat_mul(mat_mul(T, G.X), Tinv)
    q = n - r
    Xq = tuple(tuple(to_int(M[i][j]) for j in range(q)) for i in range(q))
    if G.is_affine and Xq == tuple(identity(q)):
        Q = GroupDesc.free_abelian(q + 1)
        return Quotient(G, K, Q, T, Tinv, True)
    if not G.is_affine:
        return Quotient(G, K, GroupDesc.free_abelian(q), T, Tinv, True)
    return Quotient(G, K, GroupDesc.affine(Xq), T, Tinv, False)


def quotient_by_center(G: GroupDesc) -> Quotient:
    if G.is_abelian_group():
        raise ValueError("quotient by the centre needs a nonabelian group")
    return quotient_by_lattice(G, center(G).W)
