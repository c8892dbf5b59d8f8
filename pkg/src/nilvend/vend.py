"""Triples (G, H, f): validation, evaluation, cores, derived triples and index checks.

f comes in one of two forms.  On a free abelian G it is a rational matrix A
with H A inside Z^n.  On an affine G it is the list of images of
H.generators(), i.e. of x^e u0 followed by the HNF basis rows of W.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .arith import (
    all_roots_inside_unit_circle,
    as_rat,
    charpoly,
    factor_int_poly,
    identity,
    mat_inv,
    mat_mul,
    mat_sub,
    mat_scale,
    normalize_entries,
    rat_str,
    to_int,
    vec_mat,
)
from .lattice import (
    INFINITE,
    Lattice,
    hnf,
    intersect,
    invariant_core,
    map_image,
    rational_kernel_lattice,
)
from .nilgroup import (
    Elem,
    GroupDesc,
    SubgroupDesc,
    Tracker,
    central_data,
    coset_rep,
    group_generators,
    isolator,
    make_subgroup,
    quotient_by_center,
    sg_closure,
    sg_conjugate,
    sg_contains,
    sg_coords,
    sg_index,
    sg_intersection,
    sg_is_abelian,
    sg_is_normal,
    sg_member,
    sg_relative_index,
    sg_transversal,
    subgroup_center,
    subgroup_lower_term,
    translation_subgroup,
    trivial_subgroup,
    whole_group,
)


# ---------------------------------------------------------------------------
# data

@dataclass(frozen=True)
class HomDesc:
    matrix: tuple | None = None
    images: tuple | None = None

    @property
    def is_matrix(self) -> bool:
        return self.matrix is not None

    def to_json(self):
        if self.is_matrix:
            return {"matrix": [[rat_str(x) for x in r] for r in self.matrix]}
        return {"images": [g.to_json() for g in self.images]}


@dataclass(frozen=True)
class Triple:
    name: str
    G: GroupDesc
    H: SubgroupDesc
    f: HomDesc
    Y: tuple

    @property
    def m(self) -> int:
        return len(self.Y)

    @property
    def n(self) -> int:
        return self.G.n


def make_triple(name: str, G: GroupDesc, H: SubgroupDesc, f: HomDesc, Y=None) -> Triple:
    if Y is None:
        Y = sg_transversal(G, H)
    return Triple(name, G, H, f, tuple(Y))


def matrix_hom(A) -> HomDesc:
    return HomDesc(matrix=normalize_entries(tuple(tuple(as_rat(x) for x in r) for r in A)))


def images_hom(images) -> HomDesc:
    return HomDesc(images=tuple(images))


@dataclass
class ValidationReport:
    ok: bool
    m: object
    problems: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "m": _num(self.m), "problems": self.problems}


def _num(x):
    return "infinite" if x is INFINITE else x


# ---------------------------------------------------------------------------
# evaluation

def f_eval(t: Triple, h: Elem) -> Elem:
    if t.f.is_matrix:
        if h.k or h.v not in t.H.W:
            raise ValueError(f"{h} is not in H")
        img = vec_mat(h.v, t.f.matrix)
        return Elem(0, tuple(to_int(x) for x in img))
    c = sg_coords(t.G, t.H, h)
    if c is None:
        raise ValueError(f"{h} is not in H")
    j, coeffs = c
    G = t.G
    imgs = t.f.images
    out = G.identity()
    if t.H.e:
        out = G.pow(imgs[0], j)
        lat = imgs[1:]
    else:
        lat = imgs
    for img, ci in zip(lat, coeffs):
        if ci:
            out = G.mul(out, G.pow(img, ci))
    return out


def generator_images(t: Triple) -> list[Elem]:
    return [f_eval(t, g) for g in t.H.generators()]


def triple_validate(t: Triple) -> ValidationReport:
    G, H = t.G, t.H
    problems = []
    m = sg_index(G, H)
    if m is INFINITE:
        problems.append({"check": "finite index", "detail": "H has infinite index"})
    if t.f.is_matrix:
        A = t.f.matrix
        if G.is_affine:
            problems.append({"check": "form", "detail": "matrix form needs a free abelian group"})
        elif len(A) != G.n or any(len(r) != G.n for r in A):
            problems.append({"check": "form", "detail": f"matrix must be {G.n}x{G.n}"})
        else:
            for r in H.W.basis:
                img = vec_mat(r, A)
                if any(as_rat(x).denominator != 1 for x in img):
                    problems.append({
                        "check": "integrality",
                        "detail": f"image of {list(r)} is {[rat_str(x) for x in img]}",
                    })
    else:
        gens = H.generators()
        imgs = t.f.images
        if len(imgs) != len(gens):
            problems.append({
                "check": "form",
                "detail": f"{len(imgs)} images given for {len(gens)} generators of H",
            })
        else:
            for img in imgs:
                if len(img.v) != G.n or (img.k and not G.is_affine):
                    problems.append({"check": "form", "detail": f"image {img} is not in G"})
            if not problems:
                problems.extend(_relation_problems(t))
    if m is not INFINITE:
        if len(t.Y) != m:
            problems.append({"check": "transversal", "detail": f"{len(t.Y)} representatives for index {m}"})
        else:
            reps = [coset_rep(G, H, y) for y in t.Y]
            if len(set(reps)) != len(reps):
                problems.append({"check": "transversal", "detail": "two representatives share a coset"})
    return ValidationReport(not problems, m, problems)


def _relation_problems(t: Triple) -> list:
    G, H = t.G, t.H
    imgs = t.f.images
    lat_imgs = imgs[1:] if H.e else imgs
    out = []
    for (i, a), (j, b) in itertools.combinations(enumerate(lat_imgs), 2):
        if G.mul(a, b) != G.mul(b, a):
            out.append({
                "check": "relation",
                "detail": f"images of w{i} and w{j} do not commute: {a}, {b}",
            })
    if H.e:
        h0img = imgs[0]
        Xe = G.xpow(H.e)
        for i, w in enumerate(H.W.basis):
            moved = vec_mat(w, Xe)
            c = H.W.coords(moved)
            rhs = G.identity()
            for img, ci in zip(lat_imgs, c):
                rhs = G.mul(rhs, G.pow(img, ci))
            lhs = G.conj(lat_imgs[i], h0img)
            if lhs != rhs:
                out.append({
                    "check": "relation",
                    "detail": (
                        f"f(h0)^-1 f(w{i}) f(h0) = {lhs} but f(w{i} X^{H.e}) = {rhs}"
                    ),
                })
    return out


def require_valid(t: Triple) -> Triple:
    rep = triple_validate(t)
    if not rep.ok:
        raise ValueError(f"invalid triple {t.name}: {rep.problems}")
    return t


# ---------------------------------------------------------------------------
# image data

@dataclass
class ImageData:
    Hf: SubgroupDesc
    m_prime: object
    recurrent_candidate: bool
    injective: bool

    def to_json(self):
        return {
            "Hf": self.Hf.to_json(),
            "m_prime": _num(self.m_prime),
            "epimorphism": self.m_prime == 1,
            "injective": self.injective,
        }


def image_subgroup(t: Triple, S: SubgroupDesc) -> SubgroupDesc:
    """f(S) for S inside H."""
    if t.f.is_matrix:
        L = map_image(S.W, t.f.matrix, t.n) if S.W.basis else Lattice.zero(t.n)
        return translation_subgroup(t.G, L)
    return sg_closure(t.G, [f_eval(t, g) for g in S.generators()])


def image_data(t: Triple) -> ImageData:
    Hf = image_subgroup(t, t.H)
    mp = sg_index(t.G, Hf)
    injective = Hf.hirsch() == t.H.hirsch()
    return ImageData(Hf, mp, mp == 1, injective)


def is_injective(t: Triple) -> bool:
    return image_data(t).injective


# ---------------------------------------------------------------------------
# f-inverse on H^f (injective f)

class Pullback:
    """f^-1 on H^f, computed by a closure that mirrors products on H."""

    def __init__(self, t: Triple):
        self.t = t
        G = t.G
        gens = t.H.generators()
        imgs = [f_eval(t, g) for g in gens]
        self.Hf, self.comps = sg_closure(G, imgs, gens, Tracker.of_group(G))
        for y, c in zip(self.Hf.generators(), self.comps):
            if f_eval(t, c) != y:
                raise AssertionError("tracked closure produced a wrong preimage")

    def preimage_elem(self, y: Elem) -> Elem:
        G = self.t.G
        c = sg_coords(G, self.Hf, y)
        if c is None:
            raise ValueError(f"{y} is not in the image of f")
        j, coeffs = c
        out = G.identity()
        comps = self.comps
        if self.Hf.e:
            out = G.pow(comps[0], j)
            comps = comps[1:]
        for ci, comp in zip(coeffs, comps):
            if ci:
                out = G.mul(out, G.pow(comp, ci))
        return out

    def preimage(self, K: SubgroupDesc) -> SubgroupDesc:
        """f^-1(K) inside H."""
        G = self.t.G
        KH = sg_intersection(G, K, self.Hf)
        return sg_closure(G, [self.preimage_elem(y) for y in KH.generators()])


# ---------------------------------------------------------------------------
# centre triple and quotient triple

class CenterMapError(ValueError):
    pass


def center_restriction(t: Triple):
    """(Z(G) lattice K, Z(H) lattice, matrix of f on Z(H) in K coordinates).

    Raises CenterMapError when f does not send Z(H) into Z(G).
    """
    G = t.G
    if t.f.is_matrix:
        K = Lattice.full(G.n)
        return K, t.H.W, t.f.matrix
    if G.is_abelian_group():
        raise CenterMapError("affine group with trivial action is not supported here")
    K = central_data(G).center.W
    ZH = intersect(t.H.W, K)
    rows_z, rows_f = [], []
    for r in ZH.basis:
        img = f_eval(t, Elem(0, r))
        if img.k or img.v not in K:
            raise CenterMapError(f"f sends central element {list(r)} to non-central {img}")
        rows_z.append(K.coords(r))
        rows_f.append(K.coords(img.v))
    if not rows_z:
        return K, ZH, ()
    A = normalize_entries(mat_mul(mat_inv(rows_z), rows_f))
    return K, ZH, A


def _lattice_from_coords(K: Lattice, coords_lattice: Lattice) -> Lattice:
    rows = [vec_mat(c, K.basis) for c in coords_lattice.basis]
    return hnf(rows, K.n) if rows else Lattice.zero(K.n)


def center_core(t: Triple) -> SubgroupDesc:
    """Largest f-invariant lattice inside Z(H) with image in Z(G)."""
    K, ZH, A = center_restriction(t)
    if ZH.is_zero():
        return trivial_subgroup(t.G)
    if t.f.is_matrix:
        return translation_subgroup(t.G, invariant_core(ZH, A))
    zh_coords = hnf([K.coords(r) for r in ZH.basis], K.rank)
    core_coords = invariant_core(zh_coords, A)
    return translation_subgroup(t.G, _lattice_from_coords(K, core_coords))


@dataclass(frozen=True)
class QuotientTriple:
    triple: Triple
    quotient: object  # nilgroup.Quotient


def quotient_triple_by_center(t: Triple) -> QuotientTriple:
    """(G/Z(G), HZ(G)/Z(G), induced f); needs f(Z(H)) inside Z(G)."""
    G = t.G
    center_restriction(t)  # raises when the induced map is not well defined
    Q = quotient_by_center(G)
    gens = t.H.generators()
    Hbar, lifts = sg_closure(Q.Q, [Q.project(g) for g in gens], gens, Tracker.of_group(G))
    imgs = [Q.project(f_eval(t, c)) for c in lifts]
    if Q.Q.is_affine:
        f = images_hom(imgs)
    else:
        B = [r for r in Hbar.W.basis]
        A = normalize_entries(mat_mul(mat_inv(B), [g.v for g in imgs]))
        f = matrix_hom(A)
    qt = make_triple(f"{t.name}/Z", Q.Q, Hbar, f)
    require_valid(qt)
    return QuotientTriple(qt, Q)


# ---------------------------------------------------------------------------
# simplicity and cores

@dataclass
class SimplicityReport:
    status: str                 # Simple | NotSimple | Undecided
    center_core: SubgroupDesc | None
    note: str = ""

    def to_json(self):
        return {
            "status": self.status,
            "center_core": self.center_core.to_json() if self.center_core else None,
            "note": self.note,
        }


def simplicity_decide(t: Triple) -> SimplicityReport:
    if t.f.is_matrix:
        core = invariant_core(t.H.W, t.f.matrix)
        S = translation_subgroup(t.G, core)
        return SimplicityReport("Simple" if core.is_zero() else "NotSimple", S)
    if not is_injective(t):
        return SimplicityReport(
            "Undecided", None,
            "f has a nontrivial kernel; the centre criterion only applies to monomorphisms",
        )
    try:
        cc = center_core(t)
    except CenterMapError as exc:
        return SimplicityReport("Undecided", None, str(exc))
    if cc.W.is_zero():
        return SimplicityReport("Simple", cc, "decided on the centre: f simple iff f restricted to Z(H) is")
    return SimplicityReport("NotSimple", cc, "nontrivial f-invariant central lattice")


@dataclass
class CoreReport:
    status: str                 # Simple | NotSimple | Undecided
    center_core: SubgroupDesc
    exact: bool
    core: SubgroupDesc | None   # when exact
    lower: SubgroupDesc
    upper: SubgroupDesc
    iterations: int
    note: str = ""

    def to_json(self):
        out = {
            "status": self.status,
            "center_core": self.center_core.to_json(),
            "iterations": self.iterations,
        }
        if self.exact:
            out["result"] = {"kind": "Exact", "core": self.core.to_json()}
        else:
            out["result"] = {
                "kind": "Bounded",
                "lower": self.lower.to_json(),
                "upper": self.upper.to_json(),
            }
        if self.note:
            out["note"] = self.note
        return out


def _exact(t, cc, K, iters, note="") -> CoreReport:
    status = "Simple" if K.hirsch() == 0 else "NotSimple"
    return CoreReport(status, cc, True, K, K, K, iters, note)


def _is_trivial(S: SubgroupDesc) -> bool:
    return S.e == 0 and S.W.is_zero()


def core_compute(t: Triple, max_iter: int = 32) -> CoreReport:
    G = t.G
    if t.f.is_matrix:
        K = translation_subgroup(G, invariant_core(t.H.W, t.f.matrix))
        return _exact(t, K, K, 0)
    injective = is_injective(t)
    try:
        lower = center_core(t)
    except CenterMapError:
        lower = trivial_subgroup(G)
    if injective and _is_trivial(lower):
        return _exact(t, lower, lower, 0, "trivial centre core of a monomorphism")

    upper = t.H
    note = ""
    if injective:
        try:
            qt = quotient_triple_by_center(t)
            sub = core_compute(qt.triple, max_iter)
            bound = sub.core if sub.exact else sub.upper
            upper = sg_intersection(G, t.H, qt.quotient.preimage_subgroup(bound))
        except CenterMapError as exc:
            note = str(exc)
    if upper == lower:
        return _exact(t, lower, lower, 0, "centre core meets the quotient bound")
    if not injective:
        return CoreReport(
            "NotSimple" if not _is_trivial(lower) else "Undecided",
            lower, False, None, lower, upper, 0,
            "non-injective f: only bounds are reported",
        )
    pull = Pullback(t)
    gens = group_generators(G)
    gens = gens + [G.inv(g) for g in gens]
    K = upper
    for it in range(1, max_iter + 1):
        nxt = sg_intersection(G, K, pull.preimage(K))
        for g in gens:
            nxt = sg_intersection(G, nxt, sg_conjugate(G, K, g))
        if nxt == K:
            return _exact(t, lower, K, it, note)
        K = nxt
    status = "NotSimple" if not _is_trivial(lower) else "Undecided"
    return CoreReport(status, lower, False, None, lower, K, max_iter, "iteration cap reached")


def is_f_invariant(t: Triple, K: SubgroupDesc) -> bool:
    if not sg_contains(t.G, t.H, K):
        return False
    return all(sg_member(t.G, K, f_eval(t, g)) for g in K.generators())


def is_semi_invariant(t: Triple, K: SubgroupDesc) -> bool:
    """(K meet H)^f inside K."""
    KH = sg_intersection(t.G, K, t.H)
    return all(sg_member(t.G, K, f_eval(t, g)) for g in KH.generators())


def verify_core(t: Triple, K: SubgroupDesc) -> bool:
    return is_f_invariant(t, K) and sg_is_normal(t.G, K)


# ---------------------------------------------------------------------------
# strong simplicity

@dataclass
class StrongReport:
    verdict: str                 # StronglySimple | WitnessFound | NoWitnessUpTo
    witness: SubgroupDesc | None
    bound: int
    method: str = ""

    def to_json(self):
        out = {"verdict": self.verdict, "bound": self.bound}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.method:
            out["method"] = self.method
        return out


def integer_eigenvalues(A) -> list[int]:
    """Integer roots of charpoly(A), largest first."""
    chi = charpoly(A)
    d = chi.denominator_lcm()
    prim = chi * d
    _, factors = factor_int_poly(prim)
    roots = []
    for fac, _ in factors:
        if fac.degree == 1 and abs(fac.lead) == 1:
            roots.append(-to_int(fac.coeffs[0]) * to_int(fac.lead))
    return sorted(set(roots), reverse=True)


def lattice_map_matrix(t: Triple):
    """Rational matrix of f on span(W) when f(W) consists of translations, else None."""
    W = t.H.W
    if not W.is_full_rank():
        return None
    imgs = [f_eval(t, Elem(0, r)) for r in W.basis]
    if any(g.k for g in imgs):
        return None
    return normalize_entries(mat_mul(mat_inv(W.basis), [g.v for g in imgs]))


def _cyclic_subgroup(G: GroupDesc, g: Elem) -> SubgroupDesc:
    if g.k == 0:
        return translation_subgroup(G, hnf([g.v], G.n))
    if g.k < 0:
        g = G.inv(g)
    return make_subgroup(G, Lattice.zero(G.n), g.k, g.v)


def _power_of(G: GroupDesc, g: Elem, y: Elem):
    """Integer s with g^s = y, or None."""
    if g.k:
        if y.k % g.k:
            return None
        s = y.k // g.k
        return s if G.pow(g, s) == y else None
    if y.k:
        return None
    piv = next(i for i, x in enumerate(g.v) if x)
    if y.v[piv] % g.v[piv]:
        return None
    s = y.v[piv] // g.v[piv]
    return s if tuple(s * x for x in g.v) == y.v else None


def strong_simplicity(t: Triple, bound: int = 3, max_elements: int = 20000) -> StrongReport:
    G = t.G
    if t.f.is_matrix:
        core = invariant_core(t.H.W, t.f.matrix)
        if core.is_zero():
            return StrongReport("StronglySimple", None, bound, "abelian: invariant core is trivial")
        return StrongReport("WitnessFound", translation_subgroup(G, core), bound, "abelian invariant core")
    A = lattice_map_matrix(t)
    if A is not None:
        for lam in integer_eigenvalues(A):
            E = rational_kernel_lattice(mat_sub(A, mat_scale(lam, identity(G.n))))
            K = translation_subgroup(G, intersect(E, t.H.W))
            if not K.W.is_zero() and is_f_invariant(t, K):
                return StrongReport("WitnessFound", K, bound, f"eigenlattice for eigenvalue {lam}")
    gens = t.H.generators()
    count = 0
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        first = next((c for c in coeffs if c), 0)
        if first <= 0:
            continue
        count += 1
        if count > max_elements:
            break
        g = G.identity()
        for gen, c in zip(gens, coeffs):
            if c:
                g = G.mul(g, G.pow(gen, c))
        s = _power_of(G, g, f_eval(t, g))
        if s is None:
            continue
        K = _cyclic_subgroup(G, g)
        if is_f_invariant(t, K):
            return StrongReport("WitnessFound", K, bound, f"cyclic subgroup, f(g) = g^{s}")
    return StrongReport("NoWitnessUpTo", None, bound, "eigenlattices and bounded cyclic search")


# ---------------------------------------------------------------------------
# derived chain

@dataclass
class ChainStep:
    i: int
    Gi: SubgroupDesc
    Hi: SubgroupDesc
    index_in_G: object
    degree: object
    prop2_hypothesis: bool | None

    def to_json(self):
        return {
            "i": self.i,
            "G_i": self.Gi.to_json(),
            "H_i": self.Hi.to_json(),
            "index_in_G": _num(self.index_in_G),
            "degree": _num(self.degree),
            "G=Z(G)H^fH": self.prop2_hypothesis,
        }


def _product_covers(G: GroupDesc, A: SubgroupDesc, B: SubgroupDesc, whole: SubgroupDesc) -> bool:
    """Whether the set A B (A, B subgroups of ``whole``) is all of ``whole``."""
    ia = sg_relative_index(G, whole, A)
    if ia is INFINITE:
        return False
    return sg_relative_index(G, B, sg_intersection(G, A, B)) == ia


def derived_chain(t: Triple, steps: int) -> tuple[list[ChainStep], str]:
    G = t.G
    Gi, Hi = whole_group(G), t.H
    out = []
    reason = "completed"
    for i in range(steps + 1):
        try:
            Hf = image_subgroup(t, Hi)
            Z = subgroup_center(G, Gi) if G.is_affine and not G.is_abelian_group() else Gi
            ZHf = sg_closure(G, Z.generators() + Hf.generators())
            prop2 = _product_covers(G, ZHf, Hi, Gi)
        except (RuntimeError, ValueError) as exc:
            reason = f"stopped at step {i}: {exc}"
            break
        out.append(ChainStep(i, Gi, Hi, sg_index(G, Gi), sg_relative_index(G, Gi, Hi), prop2))
        if i == steps:
            break
        if Hf == Gi:
            reason = "stationary: f maps H(i) onto G(i)"
            break
        Gi = Hf
        Hi = sg_intersection(G, Hi, Gi)
    return out, reason


# ---------------------------------------------------------------------------
# quotient by the centre: L and its isolator

@dataclass
class Prop3Data:
    L: SubgroupDesc
    rootL: SubgroupDesc
    checks: dict
    quotient: Triple | None

    def to_json(self):
        return {
            "L": self.L.to_json(),
            "sqrtL": self.rootL.to_json(),
            "checks": self.checks,
            "quotient_triple": triple_to_json(self.quotient) if self.quotient else None,
        }


def prop3_data(t: Triple, max_iter: int = 32) -> Prop3Data:
    G = t.G
    if t.f.is_matrix or G.is_abelian_group():
        W = whole_group(G)
        return Prop3Data(W, W, {"abelian": True, "semi_invariant": True}, None)
    if not is_injective(t):
        raise ValueError("needs an injective f")
    qt = quotient_triple_by_center(t)
    sub = core_compute(qt.triple, max_iter)
    if not sub.exact:
        raise ValueError("quotient core not exact within the iteration cap")
    L = qt.quotient.preimage_subgroup(sub.core)
    R = isolator(G, L)
    checks = {
        "L_abelian": sg_is_abelian(G, L),
        "sqrtL_abelian": sg_is_abelian(G, R),
        "L_semi_invariant": is_semi_invariant(t, L),
        "sqrtL_semi_invariant": is_semi_invariant(t, R),
        "L_contains_center": sg_contains(G, L, central_data(G).center),
        "L_equals_sqrtL": L == R,
    }
    return Prop3Data(L, R, checks, qt.triple)


# ---------------------------------------------------------------------------
# numeric bounds

def prime_factors(m: int) -> dict[int, int]:
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def l_of(m: int) -> int:
    return sum(prime_factors(m).values())


def a_of(m: int) -> int:
    return max(prime_factors(m).values(), default=0)


def is_k_number(x: int, k: int) -> bool:
    return all(k % p == 0 for p in prime_factors(x))


@dataclass
class BoundsReport:
    data: dict

    def to_json(self):
        return self.data


def group_invariants(G: GroupDesc) -> tuple[int, int, int]:
    cd = central_data(G)
    return cd.s, cd.c, cd.h


def thm15_data(t: Triple) -> dict:
    G = t.G
    cd = central_data(G)
    c = cd.c
    H = t.H
    Zc1 = cd.upper[c - 1]
    HZ = sg_closure(G, H.generators() + Zc1.generators())
    k = sg_index(G, HZ)
    ZG = cd.center
    ZH = sg_intersection(G, H, ZG)
    q = sg_relative_index(G, ZG, ZH)
    gG = cd.lower[c - 1]
    gH = subgroup_lower_term(G, H, c) if c >= 2 else H
    gi = sg_relative_index(G, gG, gH)
    out = {"k": _num(k), "q": _num(q), "gamma_c_index": _num(gi)}
    if INFINITE in (k, q, gi):
        out["holds"] = None
        return out
    out["k_number"] = is_k_number(gi, k)
    out["divides_q"] = q % gi == 0
    out["holds"] = out["k_number"] and out["divides_q"]
    return out


def bounds_report(t: Triple, strong_bound: int = 3) -> BoundsReport:
    G = t.G
    m = t.m
    idata = image_data(t)
    s, c, h = group_invariants(G)
    lm, am = l_of(m), a_of(m)
    simp = simplicity_decide(t)
    data = {
        "m": m,
        "m_prime": _num(idata.m_prime),
        "l(m)": lm,
        "a(m)": am,
        "s(G)": s,
        "c(G)": c,
        "h(G)": h,
        "simplicity": simp.status,
    }
    if simp.status == "Simple":
        data["thm10"] = {"inequality": f"{s} <= {lm}", "holds": s <= lm}
    else:
        data["thm10"] = {"inequality": f"{s} <= {lm}", "holds": None, "note": "inapplicable: not decided simple"}
    strong = strong_simplicity(t, strong_bound)
    if c > lm:
        verdict = "consistent" if strong.verdict == "WitnessFound" else "no witness found yet"
        data["thm12"] = {
            "inequality": f"{c} <= {lm}",
            "holds": False,
            "conclusion": "not strongly simple is forced",
            "witness_search": strong.verdict,
            "status": verdict,
        }
    else:
        data["thm12"] = {
            "inequality": f"{c} <= {lm}",
            "holds": True,
            "witness_search": strong.verdict,
            "status": "consistent",
        }
    if idata.m_prime == 1:
        data["thm15"] = thm15_data(t)
    else:
        data["thm15"] = {"holds": None, "note": "inapplicable: f is not an epimorphism"}
    return BoundsReport(data)


# ---------------------------------------------------------------------------
# index relation for a subgroup U of H

@dataclass
class IndexReport:
    data: dict

    def to_json(self):
        return self.data


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def thm13_check(t: Triple, U: SubgroupDesc) -> IndexReport:
    G = t.G
    if not sg_contains(G, t.H, U):
        raise ValueError("U must lie in H")
    Uf = image_subgroup(t, U)
    V = sg_closure(G, U.generators() + Uf.generators())
    l = sg_relative_index(G, V, U)
    lp = sg_relative_index(G, V, Uf)
    m = t.m
    mp = image_data(t).m_prime
    data = {"U": U.to_json(), "Uf": Uf.to_json(), "V": V.to_json(), "l": _num(l), "l_prime": _num(lp),
            "m": m, "m_prime": _num(mp)}
    if INFINITE in (l, lp, mp):
        data["verdict"] = "Inapplicable"
        return IndexReport(data)
    pair = None
    for m1 in _divisors(m):
        for m1p in _divisors(mp):
            if l * m1p == lp * m1:
                pair = (m1, m1p)
                break
        if pair:
            break
    data["verdict"] = "PairFound" if pair else "Violated"
    data["pair"] = list(pair) if pair else None
    # the stronger reading [U^f : U] | m' for U <= U^f is reported, never asserted
    if sg_contains(G, Uf, U):
        idx = sg_relative_index(G, Uf, U)
        data["U_in_Uf"] = {
            "index_Uf_over_U": idx,
            "divides_m_prime": mp % idx == 0,
            "divides_m": m % idx == 0,
            "flag": None if mp % idx == 0 else "[U^f : U] does not divide m'; only the pair relation holds",
        }
    return IndexReport(data)


# ---------------------------------------------------------------------------
# degree pq checks

def pq_theorem_check(t: Triple, max_iter: int = 32) -> dict:
    G = t.G
    m = t.m
    if l_of(m) != 2:
        return {"verdict": "Inapplicable", "note": f"degree {m} is not a product of two primes"}
    simp = simplicity_decide(t)
    if simp.status != "Simple":
        return {"verdict": "Inapplicable", "note": f"simplicity is {simp.status}"}
    cd = central_data(G)
    p3 = prop3_data(t, max_iter)
    L = p3.L
    items = {}
    # (i) L free abelian (abelian subgroup of a T-group) and G/L free abelian
    gamma2 = cd.lower[1]
    items["i"] = sg_is_abelian(G, L) and sg_contains(G, L, gamma2) and isolator(G, L) == L
    # (ii) G = H H^f
    Hf = image_data(t).Hf
    items["ii"] = sg_relative_index(G, Hf, sg_intersection(G, t.H, Hf)) == m
    # (iii) Z_{c-1}(G) <= L
    items["iii"] = sg_contains(G, L, cd.upper[cd.c - 1])
    # (iv) Z(G) = isolator of gamma_c(G)
    items["iv"] = isolator(G, cd.lower[cd.c - 1]) == cd.center
    return {
        "verdict": "Pass" if all(items.values()) else "Fail",
        "items": items,
        "L": L.to_json(),
    }


# ---------------------------------------------------------------------------
# finite-state heuristic

def finite_state_predict(t: Triple) -> dict:
    if not t.f.is_matrix:
        return {"verdict": "Inapplicable", "note": "needs the abelian matrix form"}
    chi = charpoly(t.f.matrix)
    inside = all_roots_inside_unit_circle(chi)
    note = "criterion stated for simple triples of degree 2" if t.m == 2 else "heuristic: degree is not 2"
    return {"verdict": "Predicted" if inside else "NotPredicted", "charpoly": str(chi), "note": note}


# ---------------------------------------------------------------------------
# serialization

def triple_to_json(t: Triple) -> dict:
    return {
        "name": t.name,
        "group": t.G.to_json(),
        "subgroup": t.H.to_json(),
        "f": t.f.to_json(),
        "transversal": [y.to_json() for y in t.Y],
    }


def make_example(name: str, **params):
    from .registry import make_example as _make

    return _make(name, **params)
