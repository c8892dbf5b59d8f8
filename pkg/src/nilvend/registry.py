"""Constructors for the worked examples."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .arith import mat_mul, vec_mat
from .lattice import Lattice, hnf
from .nilgroup import Elem, GroupDesc, make_subgroup
from .selfsim import Presentation, atom_table
from .vend import images_hom, make_triple, matrix_hom, require_valid


def _heisenberg() -> GroupDesc:
    return GroupDesc.affine([[1, 1], [0, 1]])


def adding_machine():
    G = GroupDesc.free_abelian(1)
    H = make_subgroup(G, hnf([(2,)], 1))
    return require_valid(make_triple("adding-machine", G, H, matrix_hom([[Fraction(1, 2)]])))


def example1():
    G = GroupDesc.free_abelian(2)
    H = make_subgroup(G, hnf([(2, 0), (0, 1)], 2))
    A = [[Fraction(1, 2), 1], [1, 0]]
    return require_valid(make_triple("example1", G, H, matrix_hom(A)))


def heisenberg_intro():
    G = _heisenberg()
    H = make_subgroup(G, hnf([(1, 0), (0, 2)], 2), 2, (0, 0))
    imgs = [Elem(0, (1, 0)), Elem(1, (0, 0)), Elem(0, (0, -1))]
    return require_valid(make_triple("heisenberg-intro", G, H, images_hom(imgs)))


def power_f22(n: int = 2):
    if n < 2:
        raise ValueError("n must be at least 2")
    G = _heisenberg()
    H = make_subgroup(G, hnf([(n, 0), (0, n * n)], 2), n, (0, 0))
    imgs = [Elem(1, (0, 0)), Elem(0, (1, 0)), Elem(0, (0, 1))]
    return require_valid(make_triple(f"power-f22(n={n})", G, H, images_hom(imgs)))


def example2(n: int = 3):
    if n < 2:
        raise ValueError("n must be at least 2")
    G = _heisenberg()
    H = make_subgroup(G, hnf([(n, 0), (0, n * n)], 2), n, (0, 0))
    imgs = [Elem(n, (0, 0)), Elem(0, (1, 0)), Elem(0, (0, n))]
    return require_valid(make_triple(f"example2(n={n})", G, H, images_hom(imgs)))


def example33():
    G = _heisenberg()
    H = make_subgroup(G, hnf([(2, 0), (0, 6)], 2), 3, (0, 0))
    imgs = [Elem(2, (0, 0)), Elem(0, (3, 0)), Elem(0, (0, 6))]
    return require_valid(make_triple("example33", G, H, images_hom(imgs)))


def example4():
    G = _heisenberg()
    H = make_subgroup(G, hnf([(4, 0), (0, 4)], 2), 4, (0, 0))
    imgs = [Elem(2, (0, 0)), Elem(0, (2, 0)), Elem(0, (0, 1))]
    return require_valid(make_triple("example4", G, H, images_hom(imgs)))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def example5(n: int = 2, p: int = 3):
    if n < 2 or not _is_prime(p):
        raise ValueError("need n >= 2 and p prime")
    X = [[1 if j == i or j == i + 1 else 0 for j in range(n)] for i in range(n)]
    G = GroupDesc.affine(X)
    W = hnf([tuple(p if j == i else 0 for j in range(n)) for i in range(n)], n)
    u0 = tuple(1 if j == n - 1 else 0 for j in range(n))
    H = make_subgroup(G, W, 1, u0)
    imgs = [Elem(1, (0,) * n)]
    imgs += [Elem(0, tuple(1 if j == i else 0 for j in range(n))) for i in range(n)]
    return require_valid(make_triple(f"example5(n={n},p={p})", G, H, images_hom(imgs)))


# ---------------------------------------------------------------------------
# the degree 4 sequence

def theta_recurrence(n: int) -> tuple:
    """theta_n by the recurrence, theta_2 = (1/2,)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    table = {2: (Fraction(1, 2),)}
    for k in range(3, n + 1):
        prev = table[k - 1]
        row = [4 * prev[0] + Fraction(2) ** (2 * k - 6)]
        for i in range(2, k):
            if i <= k // 2:
                older = table[k - 2][i - 2] if k - 2 >= 2 and i - 2 < len(table[k - 2]) else 0
                above = prev[i - 1] if i - 1 < len(prev) else 0
                row.append(2 ** (i + 1) * (above + Fraction(2) ** (k - 4) * older))
            else:
                row.append(Fraction(0))
        table[k] = tuple(row)
    return table[n]


def theta_closed(n: int) -> tuple:
    out = []
    for i in range(1, n):
        e = (2 * n - i - 6) * (i + 1) // 2 + 1
        out.append(Fraction(n, i) * comb(n - i - 1, i - 1) * Fraction(2) ** e)
    return tuple(out)


def x_matrix(n: int) -> tuple:
    if n == 2:
        return ((1, 1), (0, 1))
    sub = x_matrix(n - 1)
    top = (1, 2 ** (n - 2)) + (0,) * (n - 2)
    return (top,) + tuple((0,) + r for r in sub)


def f_matrix(n: int) -> tuple:
    if n == 2:
        return ((Fraction(1), Fraction(1, 2)), (Fraction(0), Fraction(1, 2)))
    sub = f_matrix(n - 1)
    top = (Fraction(2 ** (n - 2)),) + theta_recurrence(n)
    return (top,) + tuple((Fraction(0),) + r for r in sub)


def w_lattice(n: int) -> Lattice:
    rows = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n - 2)]
    rows.append(tuple(1 if j in (n - 2, n - 1) else 0 for j in range(n)))
    rows.append(tuple(2 if j == n - 1 else 0 for j in range(n)))
    return hnf(rows, n)


def intertwines(n: int) -> bool:
    X, F = x_matrix(n), f_matrix(n)
    return mat_mul(mat_mul(X, X), F) == mat_mul(F, X)


def sec54(n: int = 3):
    if n < 2:
        raise ValueError("n must be at least 2")
    if theta_recurrence(n) != theta_closed(n):
        raise AssertionError(f"theta recurrence and closed formula differ at n = {n}")
    G = GroupDesc.affine(x_matrix(n))
    W = w_lattice(n)
    H = make_subgroup(G, W, 2, (0,) * n)
    F = f_matrix(n)
    imgs = [Elem(1, (0,) * n)]
    for r in W.basis:
        img = vec_mat(r, F)
        if any(x.denominator != 1 for x in img):
            raise AssertionError(f"f_{n} does not map W_{n} integrally")
        imgs.append(Elem(0, tuple(int(x) for x in img)))
    return require_valid(make_triple(f"sec54(n={n})", G, H, images_hom(imgs)))


# ---------------------------------------------------------------------------
# directly defined automorphisms of the 4-ary tree

SEC21_ATOMS = {
    "z": (("e", "z", "e", "z"), "(1,2)(3,4)"),
    "alpha": (("alpha", "alpha*z", "alpha", "alpha"), "(1,2)"),
    "beta": (("z", "z", "z^-1*beta", "z^-1*beta"), "(1,3)(2,4)"),
    "kappa": (("alpha^3*kappa^2", "alpha^3*kappa^2", "alpha*kappa^2", "alpha*kappa^2"), "()"),
}


# candidate structure Z^3 x| <beta> on (alpha, kappa, z):
# alpha^beta = alpha z, kappa^beta = kappa alpha^2, z^beta = z
SEC21_PRESENTATION = Presentation("beta", ("alpha", "kappa", "z"), ((1, 0, 1), (2, 1, 0), (0, 0, 1)))


def sec21_atoms():
    return atom_table(4, SEC21_ATOMS, SEC21_PRESENTATION)


# shapes of the centralizer elements of z: which children carry an extra z,
# and the root permutation
TEMPLATES = {
    "x1": ((False, False, False, False), "()"),
    "x2": ((False, True, False, False), "(1,2)"),
    "x3": ((False, False, False, True), "(3,4)"),
    "x4": ((False, True, False, True), "(1,2)(3,4)"),
    "x5": ((False, False, False, False), "(1,3)(2,4)"),
    "x6": ((False, True, False, True), "(1,4)(2,3)"),
    "x7": ((False, False, False, True), "(1,3,2,4)"),
    "x8": ((False, True, False, False), "(1,4,2,3)"),
}

TEMPLATE_POOL = ("e", "z")


def template_name(shape: str, h1: str, h2: str) -> str:
    return f"{shape}_{h1}_{h2}"


def eight_templates():
    table = dict(SEC21_ATOMS)
    for shape, (extra, cycles) in TEMPLATES.items():
        for h1 in TEMPLATE_POOL:
            for h2 in TEMPLATE_POOL:
                hs = (h1, h1, h2, h2)
                kids = tuple(f"{h}*z" if x else h for h, x in zip(hs, extra))
                table[template_name(shape, h1, h2)] = (kids, cycles)
    return atom_table(4, table, SEC21_PRESENTATION)


# ---------------------------------------------------------------------------

EXAMPLES = {
    "adding-machine": (adding_machine, {}),
    "example1": (example1, {}),
    "heisenberg-intro": (heisenberg_intro, {}),
    "power-f22": (power_f22, {"n": 2}),
    "example2": (example2, {"n": 3}),
    "example33": (example33, {}),
    "example4": (example4, {}),
    "example5": (example5, {"n": 2, "p": 3}),
    "sec54": (sec54, {"n": 3}),
    "sec21-atoms": (sec21_atoms, {}),
    "eight-templates": (eight_templates, {}),
}


def make_example(name: str, **params):
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}")
    ctor, defaults = EXAMPLES[name]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"example {name} takes no parameter(s) {sorted(unknown)}")
    return ctor(**{**defaults, **params})


def example_params(name: str) -> dict:
    return dict(EXAMPLES[name][1])

