"""Exact scalars, matrices and univariate polynomials over Q.

Matrices are tuples of row tuples holding ``int`` or ``Fraction`` entries.
Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

MAX_FACTOR_DEGREE = 24


class DegreeCapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars

def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def rat_str(x) -> str:
    """Serialize a rational as ``"p/q"`` (``"p"`` when q == 1)."""
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_int(x) -> int:
    x = as_rat(x)
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return x.numerator


def common_denominator(values) -> int:
    return reduce(lcm, (as_rat(v).denominator for v in values), 1)


def primitive_int_vector(vec) -> tuple:
    """Scale a rational vector to a primitive integer vector (first nonzero > 0)."""
    d = common_denominator(vec)
    ints = [to_int(as_rat(v) * d) for v in vec]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


# ---------------------------------------------------------------------------
# matrices

def mat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def rat_mat(rows) -> tuple:
    return tuple(tuple(as_rat(x) for x in r) for r in rows)


def shape(A) -> tuple[int, int]:
    if not A:
        return (0, 0)
    return (len(A), len(A[0]))


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> tuple:
    return tuple((0,) * c for _ in range(r))


def transpose(A) -> tuple:
    return tuple(zip(*A))


def mat_mul(A, B) -> tuple:
    if A and B and len(A[0]) != len(B):
        raise ValueError(f"dimension mismatch {shape(A)} x {shape(B)}")
    if not A:
        return ()
    cols = list(zip(*B)) if B else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def vec_mat(v, A) -> tuple:
    """Row vector times matrix."""
    if len(v) != len(A):
        raise ValueError(f"dimension mismatch: vector {len(v)} vs matrix {shape(A)}")
    if not A:
        return ()
    ncols = len(A[0])
    out = [0] * ncols
    for x, row in zip(v, A):
        if x:
            for j in range(ncols):
                out[j] += x * row[j]
    return tuple(out)


def mat_add(A, B) -> tuple:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B) -> tuple:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A) -> tuple:
    return tuple(tuple(c * a for a in r) for r in A)


def mat_pow(A, k: int) -> tuple:
    n = len(A)
    if k < 0:
        return mat_pow(mat_inv(A), -k)
    result = identity(n)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def normalize_entries(A) -> tuple:
    """Turn integral Fractions back into ints."""
    return tuple(
        tuple(x.numerator if isinstance(x, Fraction) and x.denominator == 1 else x for x in r)
        for r in A
    )


def is_integral(A) -> bool:
    return all(as_rat(x).denominator == 1 for r in A for x in r)


def mat_inv(A) -> tuple:
    """Exact inverse over Q; integral results come back as ints."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix is not square")
    M = [[as_rat(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                c = M[i][col]
                M[i] = [a - c * b for a, b in zip(M[i], M[col])]
    return normalize_entries(tuple(tuple(r[n:]) for r in M))


def rank(A) -> int:
    return len(row_echelon(A)[0])


def row_echelon(A):
    """Reduced row echelon form over Q: (nonzero rows, pivot columns)."""
    M = [[as_rat(x) for x in r] for r in A]
    if not M:
        return [], []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r], pivots


def left_nullspace(A) -> list[tuple]:
    """Basis (over Q) of {v : v A = 0}, each vector scaled to a primitive integer vector."""
    At = transpose(A) if A else ()
    nrows = len(A)
    if nrows == 0:
        return []
    if not A[0]:
        return [tuple(int(i == j) for j in range(nrows)) for i in range(nrows)]
    R, pivots = row_echelon(At)
    free = [c for c in range(nrows) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * nrows
        v[fcol] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[fcol]
        basis.append(primitive_int_vector(v))
    return basis


def solve_left(rows, targets):
    """Find a rational matrix A with rows[i] A = targets[i] for all i.

    ``rows`` must span Q^n.  Returns None when the system is inconsistent.
    """
    n = len(rows[0])
    R, pivots = row_echelon(rows)
    if len(R) < n:
        raise ValueError("rows do not span the ambient space")
    # pick n independent rows greedily
    chosen = []
    span = []
    for i, r in enumerate(rows):
        if rank(span + [r]) > len(span):
            span.append(r)
            chosen.append(i)
        if len(chosen) == n:
            break
    B = [rows[i] for i in chosen]
    T = [targets[i] for i in chosen]
    A = mat_mul(mat_inv(B), T)
    for r, t in zip(rows, targets):
        if tuple(as_rat(x) for x in vec_mat(r, A)) != tuple(as_rat(x) for x in t):
            return None
    return normalize_entries(A)


def det(A):
    n = len(A)
    M = [[as_rat(x) for x in r] for r in A]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d.numerator if d.denominator == 1 else d


# ---------------------------------------------------------------------------
# polynomials

class RatPoly:
    """Univariate polynomial over Q, coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RatPoly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other):
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return RatPoly(), self
        quo = [Fraction(0)] * dq
        lead = other.lead
        for i in range(dq - 1, -1, -1):
            c = rem[i + other.degree] / lead
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return RatPoly(quo), RatPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        return RatPoly(c / self.lead for c in self.coeffs)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, A) -> tuple:
        """Horner evaluation p(A) for a square matrix A."""
        n = len(A)
        acc = zeros(n, n)
        for c in reversed(self.coeffs):
            acc = mat_add(mat_mul(acc, A), mat_scale(c, identity(n)))
        return normalize_entries(acc)

    def reversed(self):
        return RatPoly(reversed(self.coeffs))

    def denominator_lcm(self) -> int:
        return common_denominator(self.coeffs)

    def int_coeffs(self) -> tuple:
        return tuple(to_int(c) for c in self.coeffs)

    def __repr__(self):
        return f"RatPoly({[rat_str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{rat_str(abs(c))}*{mono}"
            else:
                body = rat_str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _poly(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    return RatPoly.const(p)


def charpoly(A) -> RatPoly:
    """det(xI - A), via the Faddeev-LeVerrier recursion over Q."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("charpoly needs a square matrix")
    if n == 0:
        return RatPoly.const(1)
    A = rat_mat(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = zeros(n, n)
    for k in range(1, n + 1):
        M = mat_add(mat_mul(A, M), mat_scale(coeffs[n - k + 1], identity(n)))
        AM = mat_mul(A, M)
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return RatPoly(coeffs)


def _primitive_part(p: RatPoly) -> tuple[Fraction, RatPoly]:
    d = p.denominator_lcm()
    ints = [to_int(c * d) for c in p.coeffs]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, d), RatPoly(Fraction(c, g) for c in ints)


def _factor_sort_key(item):
    p, _ = item
    return (p.degree, tuple(p.int_coeffs()[::-1]))


def factor_int_poly(p: RatPoly) -> tuple[int, list[tuple[RatPoly, int]]]:
    """Factor an integer polynomial over Z.

    Returns ``(content, [(irreducible primitive factor, multiplicity), ...])``
    with each factor having positive leading coefficient, sorted by degree and
    then by coefficients (leading first) so output is byte-stable.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not p.is_integral():
        raise ValueError("factor_int_poly needs integer coefficients")
    if p.degree > MAX_FACTOR_DEGREE:
        raise DegreeCapError(f"degree {p.degree} exceeds the factorization cap {MAX_FACTOR_DEGREE}")
    if p.degree == 0:
        return to_int(p.coeffs[0]), []
    # sympy's Zassenhaus (squarefree split, Hensel lifting, recombination)
    from sympy import Poly, symbols

    x = symbols("x")
    sp = Poly(list(reversed(p.int_coeffs())), x, domain="ZZ")
    content, factors = sp.factor_list()
    content = int(content)
    out = []
    for fac, mult in factors:
        cs = [int(c) for c in reversed(fac.all_coeffs())]
        if cs[-1] < 0:
            cs = [-c for c in cs]
            if mult % 2:
                content = -content
        out.append((RatPoly(cs), int(mult)))
    out.sort(key=_factor_sort_key)
    return content, out


def monic_integral_part(chi: RatPoly) -> RatPoly:
    """Product (with multiplicity) of the monic irreducible factors of chi lying in Z[x]."""
    if not chi.is_monic():
        raise ValueError("monic_integral_part needs a monic polynomial")
    _, prim = _primitive_part(chi)
    _, factors = factor_int_poly(prim)
    g = RatPoly.const(1)
    for fac, mult in factors:
        if fac.degree > 0 and abs(fac.lead) == 1:
            g = g * fac.monic() ** mult
    return g


def all_roots_inside_unit_circle(p: RatPoly) -> bool:
    """True iff every complex root of p has modulus < 1 (Schur-Cohn recursion).

    With a_0 the constant and a_n the leading coefficient, the roots lie in
    the open disc iff |a_0| < |a_n| and the degree n-1 polynomial
    (a_n p(z) - a_0 p*(z)) / z does too, p* being the reversed polynomial.
    A root on the circle makes some step fail |a_0| < |a_n|.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    while p.degree > 0:
        a0, an = p.coeffs[0], p.lead
        if abs(a0) >= abs(an):
            return False
        q = an * p - a0 * p.reversed()
        # the constant term cancels; divide by z
        p = RatPoly(q.coeffs[1:])
    return True
