"""Lazy wreath recursion for automorphisms of the m-ary rooted tree.

An expression is a normalized word of letters.  A letter is either a group
element of a registered triple, ``("T", triple_id, Elem)``, or a power of a
directly defined atom, ``("A", name, exponent)``.  Adjacent letters of the
same kind merge, so identical words mean identical expressions; semantic
equality goes through bisimulation.

Actions are on the right and permutations compose left to right: in a
product ``a b`` the permutation of ``a`` is applied first.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

from .nilgroup import Elem, GroupDesc, coset_rep, sg_member
from .vend import Triple, f_eval


# ---------------------------------------------------------------------------
# permutations (tuples p with p[y] the image of y)

def perm_identity(m: int) -> tuple:
    return tuple(range(m))


def perm_then(p: tuple, q: tuple) -> tuple:
    """Apply p, then q."""
    return tuple(q[p[y]] for y in range(len(p)))


def perm_inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for y, py in enumerate(p):
        out[py] = y
    return tuple(out)


def perm_cycles(p: tuple) -> str:
    """1-based cycle notation, fixed points omitted; "()" for the identity."""
    seen, parts = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, y = [], start
        while y not in seen:
            seen.add(y)
            cyc.append(y + 1)
            y = p[y]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, m: int) -> tuple:
    """Inverse of perm_cycles."""
    if re.sub(r"\s", "", text) and not re.fullmatch(r"(\s*\([\d,\s]*\))+\s*", text):
        raise ValueError(f"not in cycle notation: {text!r}")
    p = list(range(m))
    used = set()
    for body in re.findall(r"\(([^()]*)\)", text):
        pts = [int(s) - 1 for s in body.split(",") if s.strip()]
        if any(not 0 <= a < m for a in pts) or used & set(pts) or len(set(pts)) != len(pts):
            raise ValueError(f"not a permutation of {m} points: {text}")
        used |= set(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    return tuple(p)


# ---------------------------------------------------------------------------
# expressions

@dataclass(frozen=True)
class AutExpr:
    letters: tuple = ()

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self):
        if not self.letters:
            return "e"
        parts = []
        for let in self.letters:
            if let[0] == "A":
                parts.append(let[1] if let[2] == 1 else f"{let[1]}^{let[2]}")
            else:
                g = let[2]
                parts.append(f"{{{g.k};{','.join(map(str, g.v))}}}")
        return "*".join(parts)


IDENTITY = AutExpr()


def _letter_key(let):
    if let[0] == "A":
        return (0, let[1], let[2], ())
    return (1, let[1], let[2].k, let[2].v)


@dataclass(frozen=True)
class Presentation:
    """Candidate group Z^n x| <top> for a set of atoms.

    ``lattice`` names the atoms playing the basis vectors and ``X`` is the
    action of ``top`` on them (rows: images of the basis under conjugation).
    Nothing is assumed: Engine.verify_presentation checks it on the tree.
    """

    top: str
    lattice: tuple
    X: tuple

    def group(self) -> GroupDesc:
        return GroupDesc.affine(self.X)

    def generator(self, name: str) -> Elem:
        n = len(self.lattice)
        if name == self.top:
            return Elem(1, (0,) * n)
        i = self.lattice.index(name)
        return Elem(0, tuple(1 if j == i else 0 for j in range(n)))

    def names(self) -> set:
        return {self.top, *self.lattice}

    def to_json(self):
        return {"top": self.top, "lattice": list(self.lattice), "X": [list(r) for r in self.X]}


@dataclass(frozen=True)
class AtomTable:
    m: int
    atoms: dict  # name -> (children: tuple of AutExpr, perm)
    presentation: Presentation | None = None

    def __post_init__(self):
        for name, (children, perm) in self.atoms.items():
            if len(children) != self.m or sorted(perm) != list(range(self.m)):
                raise ValueError(f"atom {name} has the wrong arity")
            for c in children:
                for let in c.letters:
                    if let[0] == "A" and let[1] not in self.atoms:
                        raise ValueError(f"atom {name} refers to undefined {let[1]}")

    def to_json(self):
        out = {
            "m": self.m,
            "atoms": {
                name: {"children": [str(c) for c in ch], "perm": perm_cycles(p)}
                for name, (ch, p) in sorted(self.atoms.items())
            },
        }
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_json()
        return out


def _merge(letters: list, let, mul) -> None:
    """Append one letter to a reduced word in place."""
    if letters:
        last = letters[-1]
        if last[0] == let[0] == "A" and last[1] == let[1]:
            e = last[2] + let[2]
            letters.pop()
            if e:
                letters.append(("A", let[1], e))
            return
        if last[0] == let[0] == "T" and last[1] == let[1]:
            g = mul(let[1], last[2], let[2])
            letters.pop()
            if any(g.v) or g.k:
                letters.append(("T", let[1], g))
            return
    letters.append(let)


def _is_trivial_letter(let) -> bool:
    if let[0] == "A":
        return let[2] == 0
    return not let[2].k and not any(let[2].v)


# ---------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class StatesResult:
    finite: bool
    states: tuple

    def to_json(self):
        return {
            "kind": "Finite" if self.finite else "Exceeded",
            "count": len(self.states),
            "states": [str(s) for s in self.states],
        }


@dataclass(frozen=True)
class EqualResult:
    verdict: str          # Equal | NotEqual | Unknown
    witness: str | None   # vertex as a digit string
    explored: int

    def to_json(self):
        out = {"verdict": self.verdict, "explored": self.explored}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class OrderResult:
    kind: str             # Finite | ExceedsBound
    n: int | None
    level_order: int

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "level_order": self.level_order}


@dataclass(frozen=True)
class Portrait:
    perm: tuple
    children: tuple | None  # None at the truncation depth

    def compose(self, other: "Portrait") -> "Portrait":
        """Portrait of self followed by other."""
        perm = perm_then(self.perm, other.perm)
        if self.children is None or other.children is None:
            return Portrait(perm, None)
        kids = tuple(
            self.children[y].compose(other.children[self.perm[y]])
            for y in range(len(self.perm))
        )
        return Portrait(perm, kids)

    def to_json(self):
        out = {"perm": perm_cycles(self.perm)}
        if self.children is not None:
            out["children"] = [c.to_json() for c in self.children]
        return out


# ---------------------------------------------------------------------------
# engine

class Engine:
    """Decomposition engine; the memo table is its only mutable state.

    Not safe for concurrent use: give each worker its own engine.
    """

    def __init__(self, triples=(), atoms: AtomTable | None = None):
        self.triples: dict[str, Triple] = {t.name: t for t in triples}
        self.atoms = atoms
        ms = {t.m for t in self.triples.values()}
        if atoms is not None:
            ms.add(atoms.m)
        if len(ms) != 1:
            raise ValueError(f"inconsistent tree degrees: {sorted(ms)}")
        self.m = ms.pop()
        self._memo: dict[tuple, tuple] = {}
        self._verified = None
        self._coset_index = {}
        for name, t in self.triples.items():
            reps = {coset_rep(t.G, t.H, y): i for i, y in enumerate(t.Y)}
            self._coset_index[name] = reps

    # construction -------------------------------------------------------

    def _mul_elem(self, tid, a, b):
        return self.triples[tid].G.mul(a, b)

    def normalize(self, letters) -> AutExpr:
        out: list = []
        for let in letters:
            if not _is_trivial_letter(let):
                _merge(out, let, self._mul_elem)
        return AutExpr(tuple(out))

    def elem(self, g: Elem, triple: str | None = None) -> AutExpr:
        tid = triple or self._only_triple()
        return self.normalize([("T", tid, g)])

    def atom(self, name: str, exp: int = 1) -> AutExpr:
        if self.atoms is None or name not in self.atoms.atoms:
            raise KeyError(f"unknown atom {name}")
        return self.normalize([("A", name, exp)])

    def _only_triple(self) -> str:
        if len(self.triples) != 1:
            raise ValueError("specify which triple the element belongs to")
        return next(iter(self.triples))

    def mul(self, *exprs: AutExpr) -> AutExpr:
        return self.normalize([let for a in exprs for let in a.letters])

    def inv_letter(self, let):
        if let[0] == "A":
            return ("A", let[1], -let[2])
        return ("T", let[1], self.triples[let[1]].G.inv(let[2]))

    def inv(self, a: AutExpr) -> AutExpr:
        return self.normalize([self.inv_letter(let) for let in reversed(a.letters)])

    def pow(self, a: AutExpr, k: int) -> AutExpr:
        if k < 0:
            a, k = self.inv(a), -k
        return self.normalize(list(a.letters) * k)

    def comm(self, *exprs: AutExpr) -> AutExpr:
        """Left-normed commutator, [a, b] = a^-1 b^-1 a b."""
        acc = exprs[0]
        for b in exprs[1:]:
            acc = self.mul(self.inv(acc), self.inv(b), acc, b)
        return acc

    # decomposition ------------------------------------------------------

    def decompose(self, a: AutExpr) -> tuple[tuple, tuple]:
        key = a.letters
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not key:
            res = ((IDENTITY,) * self.m, perm_identity(self.m))
        elif len(key) == 1:
            res = self._decompose_letter(key[0])
        else:
            res = self._decompose_letter(key[0])
            for let in key[1:]:
                res = self._combine(res, self._decompose_letter(let))
        self._memo[key] = res
        return res

    def _combine(self, da, db):
        ca, pa = da
        cb, pb = db
        kids = tuple(self.mul(ca[y], cb[pa[y]]) for y in range(self.m))
        return kids, perm_then(pa, pb)

    def _invert(self, d):
        c, p = d
        pinv = perm_inverse(p)
        return tuple(self.inv(c[pinv[y]]) for y in range(self.m)), pinv

    def _decompose_letter(self, let):
        key = (let,)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if let[0] == "T":
            res = self._decompose_elem(let[1], let[2])
        else:
            name, e = let[1], let[2]
            if e == 1:
                res = self.atoms.atoms[name]
            elif e == -1:
                res = self._invert(self.atoms.atoms[name])
            else:
                s = 1 if e > 0 else -1
                res = self._combine(
                    self._decompose_letter(("A", name, s)),
                    self._decompose_letter(("A", name, e - s)),
                )
        self._memo[key] = res
        return res

    def _decompose_elem(self, tid: str, g: Elem):
        t = self.triples[tid]
        G, H = t.G, t.H
        index = self._coset_index[tid]
        kids, perm = [], []
        for y in t.Y:
            yg = G.mul(y, g)
            j = index[coset_rep(G, H, yg)]
            h = G.mul(yg, G.inv(t.Y[j]))
            if not sg_member(G, H, h):
                raise AssertionError(f"transversal is broken: {h} is not in H")
            kids.append(self.elem(f_eval(t, h), tid))
            perm.append(j)
        return tuple(kids), tuple(perm)

    # actions ------------------------------------------------------------

    def act_vertex(self, a: AutExpr, word) -> tuple:
        out = []
        for d in word:
            if not 0 <= d < self.m:
                raise ValueError(f"digit {d} out of range for degree {self.m}")
            kids, perm = self.decompose(a)
            out.append(perm[d])
            a = kids[d]
        return tuple(out)

    def portrait(self, a: AutExpr, depth: int) -> Portrait:
        kids, perm = self.decompose(a)
        if depth <= 1:
            return Portrait(perm, None) if depth == 1 else Portrait(perm_identity(self.m), None)
        return Portrait(perm, tuple(self.portrait(c, depth - 1) for c in kids))

    def level_perm(self, a: AutExpr, depth: int) -> tuple:
        """Permutation of the m^depth vertices of a level in lexicographic order."""
        cache: dict = {}

        def rec(x: AutExpr, d: int) -> tuple:
            if d == 0:
                return (0,)
            key = (x.letters, d)
            hit = cache.get(key)
            if hit is not None:
                return hit
            kids, perm = self.decompose(x)
            block = self.m ** (d - 1)
            out = [0] * (block * self.m)
            for y in range(self.m):
                sub = rec(kids[y], d - 1)
                base, img = y * block, perm[y] * block
                for s in range(block):
                    out[base + s] = img + sub[s]
            res = tuple(out)
            cache[key] = res
            return res

        return rec(a, depth)

    # state exploration --------------------------------------------------

    def states(self, a: AutExpr, max_states: int) -> StatesResult:
        seen = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for c in self.decompose(x)[0]:
                if c not in seen:
                    if len(seen) >= max_states:
                        return StatesResult(False, tuple(seen))
                    seen[c] = None
                    queue.append(c)
        return StatesResult(True, tuple(seen))

    def canonical_conjugate(self, a: AutExpr) -> AutExpr:
        """Cyclically reduced, lexicographically least rotation of a.

        It is conjugate to a, which is all triviality testing needs.
        """
        letters = list(a.letters)
        while len(letters) > 1:
            merged = self.normalize([letters[-1], letters[0]]).letters
            if len(merged) == 2:
                break
            letters = letters[1:-1] + list(merged)
            letters = list(self.normalize(letters).letters)
        if len(letters) <= 1:
            return AutExpr(tuple(letters))
        rots = [letters[i:] + letters[:i] for i in range(len(letters))]
        best = min(rots, key=lambda w: [_letter_key(x) for x in w])
        return AutExpr(tuple(best))

    def is_trivial(self, a: AutExpr, max_pairs: int = 10000) -> EqualResult:
        """Breadth-first search over states up to conjugacy.

        A set R of words closed in this sense (identity permutation, every
        child conjugate to a member) consists of trivial automorphisms, by
        induction on the level.
        """
        start = self.canonical_conjugate(a)
        seen = {start}
        queue = deque([(start, ())])
        while queue:
            x, path = queue.popleft()
            if self._known_trivial(x):
                continue
            kids, perm = self.decompose(x)
            moved = next((y for y in range(self.m) if perm[y] != y), None)
            if moved is not None:
                return EqualResult("NotEqual", _digits(path + (moved,)), len(seen))
            for y, c in enumerate(kids):
                cc = self.canonical_conjugate(c)
                if cc not in seen:
                    if len(seen) >= max_pairs:
                        return EqualResult("Unknown", None, len(seen))
                    seen.add(cc)
                    queue.append((cc, path + (y,)))
        return EqualResult("Equal", None, len(seen))

    # presentations --------------------------------------------------------

    def evaluate(self, a: AutExpr):
        """Image of an atom word in the candidate group, or None."""
        pres = self.atoms.presentation if self.atoms is not None else None
        if pres is None:
            return None
        G = pres.group()
        names = pres.names()
        out = G.identity()
        for let in a.letters:
            if let[0] != "A" or let[1] not in names:
                return None
            out = G.mul(out, G.pow(pres.generator(let[1]), let[2]))
        return out

    def relators(self) -> list[tuple[str, AutExpr]]:
        pres = self.atoms.presentation
        G = pres.group()
        gens = {name: self.atom(name) for name in pres.names()}
        out = []
        for i, a in enumerate(pres.lattice):
            for b in pres.lattice[i + 1:]:
                out.append((f"[{a},{b}]", self.comm(gens[a], gens[b])))
        top = gens[pres.top]
        for i, a in enumerate(pres.lattice):
            row = G.conj(pres.generator(a), Elem(1, (0,) * G.n)).v
            rhs = self.mul(*(self.pow(gens[b], c) for b, c in zip(pres.lattice, row)))
            lhs = self.mul(self.inv(top), gens[a], top)
            out.append((f"{pres.top}^-1*{a}*{pres.top} = {rhs}", self.mul(lhs, self.inv(rhs))))
        return out

    def verify_presentation(self) -> dict:
        """Check the candidate presentation up to congruence.

        Every relator must fix the first level and each of its children must
        evaluate to the identity of the candidate group.  By induction on the
        level every relator then acts trivially on every level, so any word
        that is trivial in the candidate group is trivial on the tree.
        """
        if self._verified is not None:
            return self._verified
        if self.atoms is None or self.atoms.presentation is None:
            self._verified = {"ok": False, "failures": ["no presentation"]}
            return self._verified
        failures = []
        G = self.atoms.presentation.group()
        for label, r in self.relators():
            kids, perm = self.decompose(r)
            if perm != perm_identity(self.m):
                failures.append(f"{label}: root permutation {perm_cycles(perm)}")
                continue
            for y, c in enumerate(kids):
                val = self.evaluate(c)
                if val is None or val != G.identity():
                    failures.append(f"{label}: child {y + 1} evaluates to {val}")
        self._verified = {"ok": not failures, "failures": failures, "relators": len(self.relators())}
        return self._verified

    def _known_trivial(self, a: AutExpr) -> bool:
        if self.atoms is None or self.atoms.presentation is None or not a.letters:
            return False
        val = self.evaluate(a)
        if val is None or val.k or any(val.v):
            return False
        return self.verify_presentation()["ok"]

    def equal(self, a: AutExpr, b: AutExpr, max_pairs: int = 10000) -> EqualResult:
        """a = b iff a b^-1 is trivial; a moved vertex of a b^-1 separates a and b.

        Conjugation in the search changes which vertex is moved, so a
        witness is recovered by a direct scan of the level it was found at.
        """
        res = self.is_trivial(self.mul(a, self.inv(b)), max_pairs)
        if res.verdict != "NotEqual":
            return res
        depth = len(res.witness)
        pa, pb = self.level_perm(a, depth), self.level_perm(b, depth)
        idx = next(i for i in range(len(pa)) if pa[i] != pb[i])
        return EqualResult("NotEqual", _digits(_index_to_word(idx, self.m, depth)), res.explored)

    def order(self, a: AutExpr, max_n: int, depth: int, max_pairs: int = 10000) -> OrderResult:
        lp = self.level_perm(a, depth)
        lo = _perm_order(lp)
        for k in range(lo, max_n + 1, lo):
            if self.is_trivial(self.pow(a, k), max_pairs).verdict == "Equal":
                return OrderResult("Finite", k, lo)
        return OrderResult("ExceedsBound", None, lo)

    def level_transitive(self, gens, depth: int) -> bool:
        perms = [self.level_perm(g, depth) for g in gens]
        size = self.m ** depth
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for p in perms:
                if p[v] not in seen:
                    seen.add(p[v])
                    stack.append(p[v])
        return len(seen) == size


def _digits(word) -> str:
    return "".join(str(d) for d in word)


def _index_to_word(idx: int, m: int, depth: int) -> tuple:
    out = []
    for _ in range(depth):
        idx, r = divmod(idx, m)
        out.append(r)
    return tuple(reversed(out))


def _perm_order(p: tuple) -> int:
    from math import lcm

    seen, order = set(), 1
    for s in range(len(p)):
        if s in seen:
            continue
        n, y = 0, s
        while y not in seen:
            seen.add(y)
            y = p[y]
            n += 1
        order = lcm(order, n)
    return order


def cycle_type(p: tuple) -> list[int]:
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen:
            continue
        n, y = 0, s
        while y not in seen:
            seen.add(y)
            y = p[y]
            n += 1
        out.append(n)
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# word syntax: factors joined by '*' or spaces, each optionally raised to ^k.
# A factor is an atom name, x (the group's x), e<i> (i-th basis translation),
# {k;v1,...,vn} (the element x^k v), a parenthesized word, or a left-normed
# commutator [w1,w2,...].

_TOKEN = re.compile(r"\s*(\{[^}]*\}|[A-Za-z_][A-Za-z_0-9]*|\^|-?\d+|[*()\[\],])")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse word at position {pos}: {text!r}")
        out.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_word(engine: Engine, text: str, triple: str | None = None) -> AutExpr:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'a token'} in {text!r}")
        pos += 1
        return tok

    def word():
        parts = [factor()]
        while peek() not in (None, ")", "]", ","):
            if peek() == "*":
                take("*")
            parts.append(factor())
        return engine.mul(*parts)

    def factor():
        tok = take()
        if tok == "(":
            base = word()
            take(")")
        elif tok == "[":
            items = [word()]
            while peek() == ",":
                take(",")
                items.append(word())
            take("]")
            if len(items) < 2:
                raise ValueError("a commutator needs at least two entries")
            base = engine.comm(*items)
        else:
            base = primary(tok)
        if peek() == "^":
            take("^")
            base = engine.pow(base, int(take()))
        return base

    def primary(tok):
        if tok in ("e", "1"):
            return IDENTITY
        if engine.atoms is not None and tok in engine.atoms.atoms:
            return engine.atom(tok)
        tid = triple or (engine._only_triple() if engine.triples else None)
        if tid is None:
            raise ValueError(f"unknown name {tok!r}")
        G = engine.triples[tid].G
        if tok.startswith("{"):
            k, _, vs = tok[1:-1].partition(";")
            v = [int(s) for s in vs.split(",")] if vs.strip() else [0] * G.n
            return engine.elem(G.elem(int(k), v), tid)
        if tok == "x":
            return engine.elem(G.elem(1, [0] * G.n), tid)
        mt = re.fullmatch(r"e(\d+)", tok)
        if mt and 1 <= int(mt.group(1)) <= G.n:
            v = [0] * G.n
            v[int(mt.group(1)) - 1] = 1
            return engine.elem(G.elem(0, v), tid)
        raise ValueError(f"unknown name {tok!r}")

    out = word()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return out


def atom_table(m: int, table: dict, presentation: Presentation | None = None) -> AtomTable:
    """Build a table from {name: (children words, cycle string)}."""
    names = set(table)
    stub = AtomTable(m, {n: ((IDENTITY,) * m, perm_identity(m)) for n in names})
    eng = Engine(atoms=stub)
    atoms = {}
    for name, (children, cycles) in table.items():
        kids = tuple(parse_word(eng, w) for w in children)
        atoms[name] = (kids, parse_cycles(cycles, m))
    return AtomTable(m, atoms, presentation)
