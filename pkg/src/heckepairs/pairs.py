"""Catalog of concrete Hecke pairs: canonicalizers, lengths, metadata.

Each pair bundles a group backend with a membership test for H, generators
of H for orbit closure, exact right- and double-coset canonicalizers, an
optional validated length, and (where a closed form exists) direct coset
ball enumerators. Everything is exact rational arithmetic.
"""

import math
from fractions import Fraction

import numpy as np

from .errors import ConfigError, PairSanityError
from .groups import (
    AxbElement,
    DihedralElement,
    IntegerElement,
    LengthFunction,
    MatrixElement,
    SemidirectElement,
    coordinate_sum_length,
    dihedral_abs_length,
)


class HeckePair:
    """A group with an almost-normal subgroup, plus canonical-form machinery.

    The canonicalizers are the load-bearing part: `coset_rep(g)` is a fixed
    representative of Hg and `double_rep(g)` of HgH, both exact, so their
    element keys serve as dictionary keys for cosets. `h_elements` is None
    when H is infinite; orbit closure then relies on `h_generators` alone.

    Instances are immutable after build apart from three append-only caches
    (decompositions, action rows, balls); concurrent readers are safe.
    """

    def __init__(self, name, params, identity, contains, h_generators,
                 coset_rep, double_rep, length=None, candidate_lengths=None,
                 h_elements=None, g_generators=None, random_element=None,
                 ball_rights=None, ball_doubles=None, rd_status="unknown",
                 notes=""):
        self.name = name
        self.params = dict(params)
        self.identity = identity
        self.contains = contains
        self.h_generators = tuple(h_generators)
        self.coset_rep = coset_rep
        self.double_rep = double_rep
        self.length = length
        self.candidate_lengths = dict(candidate_lengths or {})
        self.h_elements = tuple(h_elements) if h_elements is not None else None
        self.g_generators = tuple(g_generators) if g_generators else None
        self._random_element = random_element
        self._ball_rights = ball_rights
        self._ball_doubles = ball_doubles
        self.rd_status = rd_status
        self.notes = notes
        # append-only caches, keyed on canonical element keys
        self.decompose_cache = {}
        self.action_cache = {}
        self.ball_cache = {}

    @property
    def signature(self):
        return (self.name, tuple(sorted(self.params.items())))

    @property
    def h_is_finite(self):
        return self.h_elements is not None

    def random_element(self, rng):
        """Deterministic sample given a numpy Generator."""
        return self._random_element(rng)

    def h_sample(self, depth=3):
        """A finite, deterministic sample of H for validation checks.

        All of H when H is finite, otherwise short words in h_generators.
        """
        if self.h_elements is not None:
            return self.h_elements
        out = {self.identity}
        frontier = [self.identity]
        for _ in range(depth):
            nxt = []
            for g in frontier:
                for s in self.h_generators:
                    x = g * s
                    if x not in out:
                        out.add(x)
                        nxt.append(x)
            frontier = nxt
        return tuple(sorted(out, key=lambda g: g.key))

    def validate_length(self, length=None, sample=None, tol=None, rng=None):
        """Run the length-axiom checks against this pair's data."""
        from .groups import validate_length as _vl

        if length is None:
            length = self.length
        if length is None:
            raise ConfigError("pair %r has no length attached" % self.name)
        if sample is None:
            if rng is None:
                rng = np.random.default_rng(0)
            sample = [self.random_element(rng) for _ in range(30)]
        if tol is None and not length.exact:
            tol = 1e-9
        return _vl(length, self.identity, sample, self.h_sample(), tol=tol)

    def __repr__(self):
        return "HeckePair(%r, %r)" % (self.name, self.params)


def _sanity_check(pair, n_samples=25, seed=7):
    """Seeded spot check of the canonicalizer contracts; raises on failure."""
    rng = np.random.default_rng(seed)
    hs = pair.h_sample(depth=2)[:6]
    e = pair.identity
    if not pair.contains(e):
        raise PairSanityError("identity not in H for %r" % pair.name, witness=e)
    sample = [e] + [pair.random_element(rng) for _ in range(n_samples)]
    for g in sample:
        r = pair.coset_rep(g)
        if pair.coset_rep(r) != r:
            raise PairSanityError(
                "right-coset canonicalizer not idempotent on %r" % pair.name,
                witness=g,
            )
        if not pair.contains(r * g.inv()):
            raise PairSanityError(
                "coset representative left its coset on %r" % pair.name,
                witness=g,
            )
        d = pair.double_rep(g)
        if pair.double_rep(d) != d:
            raise PairSanityError(
                "double-coset canonicalizer not idempotent on %r" % pair.name,
                witness=g,
            )
        if pair.double_rep(r) != d:
            raise PairSanityError(
                "right and double canonicalizers disagree on %r" % pair.name,
                witness=g,
            )
        for h in hs:
            if pair.coset_rep(h * g) != r:
                raise PairSanityError(
                    "coset rep not H-left-invariant on %r" % pair.name,
                    witness=(h, g),
                )
            if pair.double_rep(h * g) != d or pair.double_rep(g * h) != d:
                raise PairSanityError(
                    "double rep not H-bi-invariant on %r" % pair.name,
                    witness=(h, g),
                )


# ---------------------------------------------------------------------------
# dihedral: G = Z x| Z/2 (infinite dihedral), H = the flip subgroup of order 2.


def _build_dihedral(params):
    if params:
        raise ConfigError("dihedral takes no params, got %r" % (params,))
    e = DihedralElement(0, 1)
    flip = DihedralElement(0, -1)

    def coset_rep(g):
        # Hg = {(n, eps), (-n, -eps)}; pick the one with eps = +1
        return DihedralElement(g.eps * g.n, 1)

    def double_rep(g):
        return DihedralElement(abs(g.n), 1)

    def random_element(rng):
        return DihedralElement(int(rng.integers(-30, 31)), 1 if rng.integers(2) == 0 else -1)

    def ball_rights(r):
        rr = math.floor(r)
        if rr < 0:
            return []
        out = [e]
        for m in range(1, rr + 1):
            out.append(DihedralElement(-m, 1))
            out.append(DihedralElement(m, 1))
        return out

    def ball_doubles(r):
        rr = math.floor(r)
        if rr < 0:
            return []
        return [DihedralElement(m, 1) for m in range(rr + 1)]

    return HeckePair(
        "dihedral", {}, e,
        contains=lambda g: g.n == 0,
        h_generators=(flip,),
        coset_rep=coset_rep,
        double_rep=double_rep,
        length=dihedral_abs_length(),
        h_elements=(e, flip),
        g_generators=(DihedralElement(1, 1), DihedralElement(-1, 1), flip),
        random_element=random_element,
        ball_rights=ball_rights,
        ball_doubles=ball_doubles,
        rd_status="expected",
        notes="Gelfand pair; commutative convolution algebra.",
    )


# ---------------------------------------------------------------------------
# finite_index: G = Z, H = nZ (default n = 2). Normal, so every degree is 1.


def _build_finite_index(params):
    params = dict(params)
    n = params.pop("n", 2)
    if params:
        raise ConfigError("finite_index: unknown params %r" % (params,))
    n = int(n)
    if n < 1:
        raise ConfigError("finite_index: n must be >= 1, got %r" % n)
    e = IntegerElement(0)

    def coset_rep(g):
        return IntegerElement(g.n % n)

    def random_element(rng):
        return IntegerElement(int(rng.integers(-50, 51)))

    def ball(r):
        if r < 0:
            return []
        return [IntegerElement(k) for k in range(n)]

    # coset space is finite, so the zero length still has finite balls here
    zero = LengthFunction("zero", "zero", lambda g: 0, locally_finite=True)

    return HeckePair(
        "finite_index", {"n": n}, e,
        contains=lambda g: g.n % n == 0,
        h_generators=(IntegerElement(n), IntegerElement(-n)),
        coset_rep=coset_rep,
        double_rep=coset_rep,
        length=zero,
        h_elements=None,
        g_generators=(IntegerElement(1), IntegerElement(-1)),
        random_element=random_element,
        ball_rights=ball,
        ball_doubles=ball,
        rd_status="expected",
        notes="Normal finite-index subgroup; group algebra of Z/%d." % n,
    )


# ---------------------------------------------------------------------------
# gl2q: G = GL(2,Q) with positive determinant, H = SL(2,Z).


def _primitive_parts(g):
    """Write g = c * P with c > 0 rational and P a primitive integer matrix."""
    rows = g.rows
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in rows]
    c0 = 0
    for row in ints:
        for v in row:
            c0 = math.gcd(c0, abs(v))
    c = Fraction(c0, den)
    prim = tuple(tuple(Fraction(v // c0) for v in row) for row in ints)
    return c, MatrixElement(prim)


def _hnf_2x2(m):
    """Unique form [[a,b],[0,d]], a,d>0, 0<=b<d, over left SL(2,Z) action.

    Input: integer matrix with positive determinant, given as a MatrixElement.
    Uses only determinant-one row operations (shear and quarter rotation).
    """
    (a, b), (c, d) = ((int(x) for x in row) for row in m.rows)
    while c != 0:
        q = a // c
        a, b = a - q * c, b - q * d
        a, b, c, d = -c, -d, a, b
    if a < 0:
        a, b, d = -a, -b, -d
    b -= (b // d) * d
    return MatrixElement(((a, b), (0, d)))


def _build_gl2q(params):
    if params:
        raise ConfigError("gl2q takes no params, got %r" % (params,))
    e = MatrixElement(((1, 0), (0, 1)))
    S = MatrixElement(((0, -1), (1, 0)))
    T = MatrixElement(((1, 1), (0, 1)))

    def contains(g):
        return all(x.denominator == 1 for row in g.rows for x in row) and g.det() == 1

    def coset_rep(g):
        if g.det() <= 0:
            raise ConfigError("gl2q needs positive determinant, got %r" % (g,))
        c, prim = _primitive_parts(g)
        h = _hnf_2x2(prim)
        return MatrixElement(tuple(tuple(c * x for x in row) for row in h.rows))

    def double_rep(g):
        if g.det() <= 0:
            raise ConfigError("gl2q needs positive determinant, got %r" % (g,))
        c, prim = _primitive_parts(g)
        m = prim.det()
        # primitive integer matrices have coprime elementary divisors (1, m)
        return MatrixElement(((c, 0), (0, c * m)))

    def det_prim_log(g):
        _, prim = _primitive_parts(g)
        return math.log(float(prim.det()))

    pool = (
        T, T.inv(), S, S.inv(),
        MatrixElement(((1, 0), (0, 2))),
        MatrixElement(((2, 0), (0, 1))),
        MatrixElement(((1, 0), (0, 3))),
        MatrixElement(((2, 0), (0, 2))),
        MatrixElement(((Fraction(1, 2), 0), (0, Fraction(1, 2)))),
    )

    def random_element(rng):
        g = e
        for _ in range(int(rng.integers(0, 5))):
            g = g * pool[int(rng.integers(len(pool)))]
        return g

    cand = LengthFunction(
        "log-det-prim", "log-norm", det_prim_log, locally_finite=False, exact=False
    )

    return HeckePair(
        "gl2q", {}, e,
        contains=contains,
        h_generators=(S, S.inv(), T, T.inv()),
        coset_rep=coset_rep,
        double_rep=double_rep,
        length=None,
        candidate_lengths={"log-det-prim": cand},
        h_elements=None,
        g_generators=None,
        random_element=random_element,
        rd_status="unknown",
        notes="Classical Hecke-operator pair; double cosets indexed by "
              "(scale, primitive determinant).",
    )


# ---------------------------------------------------------------------------
# bost_connes: G = {x -> a x + b : a in Q>0, b in Q}, H = integer translations.


def _build_bost_connes(params):
    if params:
        raise ConfigError("bost_connes takes no params, got %r" % (params,))
    e = AxbElement(1, 0)

    def contains(g):
        return g.a == 1 and g.b.denominator == 1

    def coset_rep(g):
        # H(a,b) = {(a, b + n a)}; normalize b into [0, a)
        b = g.b - math.floor(g.b / g.a) * g.a
        return AxbElement(g.a, b)

    def double_rep(g):
        # right H-translates shift b by integers; Z + aZ = (1/q)Z for a = p/q
        q = g.a.denominator
        step = Fraction(1, q)
        b = g.b - math.floor(g.b / step) * step
        return AxbElement(g.a, b)

    a_pool = (
        Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(1, 3),
        Fraction(3, 2), Fraction(2, 3), Fraction(5, 2), Fraction(4, 3),
    )
    b_dens = (1, 2, 3, 4, 6)

    def random_element(rng):
        a = a_pool[int(rng.integers(len(a_pool)))]
        b = Fraction(int(rng.integers(-8, 9)), b_dens[int(rng.integers(len(b_dens)))])
        return AxbElement(a, b)

    cand = LengthFunction(
        "abs-log-a", "log-norm",
        lambda g: abs(math.log(float(g.a))),
        locally_finite=False, exact=False,
    )

    return HeckePair(
        "bost_connes", {}, e,
        contains=contains,
        h_generators=(AxbElement(1, 1), AxbElement(1, -1)),
        coset_rep=coset_rep,
        double_rep=double_rep,
        length=None,
        candidate_lengths={"abs-log-a": cand},
        h_elements=None,
        g_generators=None,
        random_element=random_element,
        rd_status="unknown",
        notes="Degrees are asymmetric: deg(a, b) is the numerator of a, "
              "deg of the inverse its denominator.",
    )


# ---------------------------------------------------------------------------
# sl3: G = SL(3,Z), H = the order-two subgroup generated by a swap-flip T.


def _e3(i, j, v):
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rows[i][j] = v
    return MatrixElement(tuple(tuple(row) for row in rows))


_SL3_T = MatrixElement(((0, 1, 0), (1, 0, 0), (0, 0, -1)))


def _build_sl3(params):
    if params:
        raise ConfigError("sl3 takes no params, got %r" % (params,))
    e = _e3(0, 0, 1)
    T = _SL3_T

    def contains(g):
        return g == e or g == T

    def coset_rep(g):
        tg = T * g
        return g if g.key <= tg.key else tg

    def double_rep(g):
        best = g
        for x in (T * g, g * T, T * g * T):
            if x.key < best.key:
                best = x
        return best

    gens = []
    for i in range(3):
        for j in range(3):
            if i != j:
                gens.append(_e3(i, j, 1))
                gens.append(_e3(i, j, -1))
    gens.append(T)

    def random_element(rng):
        g = e
        for _ in range(int(rng.integers(0, 5))):
            g = g * gens[int(rng.integers(len(gens)))]
        return g

    return HeckePair(
        "sl3", {}, e,
        contains=contains,
        h_generators=(T,),
        coset_rep=coset_rep,
        double_rep=double_rep,
        length=None,
        h_elements=(e, T),
        g_generators=tuple(gens),
        random_element=random_element,
        rd_status="non-example",
        notes="H is not normal: conjugating T by a shear leaves H.",
    )


# ---------------------------------------------------------------------------
# semidirect: G = Z^rank x| Z/2 for an order-two coordinate action.


def _l1_shell(rank, m):
    """Integer vectors with |v|_1 = m, in ascending lexicographic order."""
    if rank == 1:
        return [(0,)] if m == 0 else [(-m,), (m,)]
    out = []
    for first in range(-m, m + 1):
        for rest in _l1_shell(rank - 1, m - abs(first)):
            out.append((first,) + rest)
    return out


def _build_semidirect(params):
    params = dict(params)
    rank = int(params.pop("rank", 2))
    action = params.pop("action", "swap")
    if params:
        raise ConfigError("semidirect: unknown params %r" % (params,))
    if rank < 1:
        raise ConfigError("semidirect: rank must be >= 1, got %r" % rank)
    e = SemidirectElement((0,) * rank, 0, action)
    flip = SemidirectElement((0,) * rank, 1, action)

    def alpha(v):
        return tuple(-x for x in v) if action == "negate" else tuple(reversed(v))

    def coset_rep(g):
        return SemidirectElement(g.vec if g.flip == 0 else alpha(g.vec), 0, action)

    def double_rep(g):
        v = g.vec if g.flip == 0 else alpha(g.vec)
        return SemidirectElement(min(v, alpha(v)), 0, action)

    def random_element(rng):
        v = tuple(int(x) for x in rng.integers(-6, 7, size=rank))
        return SemidirectElement(v, int(rng.integers(2)), action)

    def ball_rights(r):
        rr = math.floor(r)
        if rr < 0:
            return []
        out = []
        for m in range(rr + 1):
            out.extend(SemidirectElement(v, 0, action) for v in _l1_shell(rank, m))
        return out

    def ball_doubles(r):
        rr = math.floor(r)
        if rr < 0:
            return []
        out = []
        for m in range(rr + 1):
            out.extend(
                SemidirectElement(v, 0, action)
                for v in _l1_shell(rank, m)
                if v <= alpha(v)
            )
        return out

    gens = [flip]
    for i in range(rank):
        for sgn in (1, -1):
            v = [0] * rank
            v[i] = sgn
            gens.append(SemidirectElement(tuple(v), 0, action))

    return HeckePair(
        "semidirect", {"rank": rank, "action": action}, e,
        contains=lambda g: all(x == 0 for x in g.vec),
        h_generators=(flip,),
        coset_rep=coset_rep,
        double_rep=double_rep,
        length=coordinate_sum_length(),
        h_elements=(e, flip),
        g_generators=tuple(gens),
        random_element=random_element,
        ball_rights=ball_rights,
        ball_doubles=ball_doubles,
        rd_status="expected",
        notes="Free abelian group with an order-two coordinate action "
              "(%r) by the finite subgroup." % action,
    )


_BUILDERS = {
    "dihedral": _build_dihedral,
    "finite_index": _build_finite_index,
    "gl2q": _build_gl2q,
    "bost_connes": _build_bost_connes,
    "sl3": _build_sl3,
    "semidirect": _build_semidirect,
}

_DESCRIPTIONS = {
    "dihedral": "infinite dihedral group over its flip subgroup",
    "finite_index": "integers over an index-n subgroup (param n, default 2)",
    "gl2q": "positive-determinant rational 2x2 matrices over SL(2,Z)",
    "bost_connes": "rational ax+b maps over integer translations",
    "sl3": "SL(3,Z) over an order-two non-normal subgroup",
    "semidirect": "Z^rank with an order-two action (params rank, action)",
}


def catalog_list():
    """Descriptors for every built-in pair (builds each with default params)."""
    out = []
    for name in sorted(_BUILDERS):
        pair = build_pair(name)
        out.append({
            "name": name,
            "description": _DESCRIPTIONS[name],
            "rd_status": pair.rd_status,
            "length": pair.length.name if pair.length is not None else None,
            "candidate_lengths": sorted(pair.candidate_lengths),
            "h_finite": pair.h_is_finite,
            "params": pair.params,
        })
    return out


def build_pair(name, params=None):
    """Construct a catalog pair and run its seeded sanity sample."""
    if name not in _BUILDERS:
        raise ConfigError(
            "unknown pair %r (catalog: %s)" % (name, ", ".join(sorted(_BUILDERS)))
        )
    pair = _BUILDERS[name](params or {})
    _sanity_check(pair)
    return pair
