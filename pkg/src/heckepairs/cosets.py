"""Coset keys, double-coset decomposition, degrees, and length balls."""

from bisect import bisect_right

from .errors import BudgetExceededError, UnsupportedLengthError
from .groups import enumerate_word_ball


class CosetKey:
    """Canonical key of a right coset Hg.

    Wraps the canonical representative element; equality and hashing ignore
    the cached length, so keys with and without lengths interoperate.
    """

    __slots__ = ("rep", "length")
    kind = "right"

    def __init__(self, rep, length=None):
        self.rep = rep
        self.length = length

    @property
    def key(self):
        return self.rep.key

    def __eq__(self, other):
        return type(other) is type(self) and self.rep == other.rep

    def __hash__(self):
        return hash((self.kind, self.rep))

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self.rep.key)


class DoubleCosetKey(CosetKey):
    """Canonical key of a double coset HgH."""

    __slots__ = ()
    kind = "double"


def coset_key(pair, g, length=None):
    rep = pair.coset_rep(g)
    return CosetKey(rep, length(rep) if length is not None else None)


def double_key(pair, g, length=None):
    rep = pair.double_rep(g)
    return DoubleCosetKey(rep, length(rep) if length is not None else None)


def decompose_double_coset(pair, g, budget=10 ** 6, h_generators=None):
    """The right cosets inside HgH, as a sorted tuple of CosetKeys.

    Orbit closure of the coset of g under right multiplication by generators
    of H. Almost-normality makes the orbit finite; the budget turns a
    divergent orbit into a diagnosable error instead of a hang.
    """
    drep = pair.double_rep(g)
    use_cache = h_generators is None
    if use_cache:
        hit = pair.decompose_cache.get(drep)
        if hit is not None:
            return hit
    gens = pair.h_generators if h_generators is None else tuple(h_generators)
    start = pair.coset_rep(drep)
    visited = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = pair.coset_rep(x * s)
                if y not in visited:
                    visited.add(y)
                    if len(visited) > budget:
                        raise BudgetExceededError(
                            "double coset of %r not almost normal within "
                            "budget %d" % (g, budget),
                            partial_size=len(visited),
                        )
                    nxt.append(y)
        frontier = nxt
    out = tuple(CosetKey(rep) for rep in sorted(visited, key=lambda r: r.key))
    if use_cache:
        pair.decompose_cache[drep] = out
    return out


def degree(pair, g, budget=10 ** 6):
    """Number of right cosets in HgH; 1 iff HgH = Hg."""
    return len(decompose_double_coset(pair, g, budget=budget))


class BallIndex:
    """Ordered set of coset keys of length <= radius, with shell structure.

    Keys are sorted by (length, canonical key); a smaller ball over the same
    length is always a prefix of a larger one, which `prefix` exploits.
    """

    def __init__(self, kind, radius, keys):
        keys = sorted(keys, key=lambda k: (k.length, k.key))
        for k in keys:
            if k.length is None:
                raise ValueError("BallIndex keys need lengths")
            if k.length > radius:
                raise ValueError(
                    "key %r has length %r beyond radius %r" % (k, k.length, radius)
                )
        self.kind = kind
        self.radius = radius
        self.keys = tuple(keys)
        self._slots = {k.rep: i for i, k in enumerate(self.keys)}
        self._length_list = [k.length for k in self.keys]

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __contains__(self, key):
        return key.rep in self._slots

    def index(self, key):
        """Position of a key (or anything with a .rep) in the ball order."""
        return self._slots[key.rep]

    def lengths_present(self):
        out = []
        for v in self._length_list:
            if not out or out[-1] != v:
                out.append(v)
        return out

    def shell(self, value):
        """All keys with length exactly `value`."""
        return tuple(k for k in self.keys if k.length == value)

    def select(self, pred):
        """Keys whose length satisfies a predicate (exact caller-side compare)."""
        return tuple(k for k in self.keys if pred(k.length))

    def prefix(self, radius):
        """The sub-ball of keys with length <= radius (prefix of this order)."""
        cut = bisect_right(self._length_list, radius)
        return BallIndex(self.kind, radius, self.keys[:cut])


class PairBall:
    """A double-coset ball and the matching right-coset ball."""

    __slots__ = ("double", "right")

    def __init__(self, double, right):
        self.double = double
        self.right = right


def enumerate_ball(pair, length, radius, budget=10 ** 6, gens=None):
    """All double cosets of length <= radius plus the parallel right ball.

    length=None uses the pair's attached length. Pairs with closed-form ball
    providers use them; otherwise a word-length ball of the whole group is
    projected (the induced double-coset length is the minimum word length
    over the double coset, which is H-bi-invariant by construction).
    """
    if length is None:
        length = pair.length
    if length is None:
        raise UnsupportedLengthError(
            "pair %r has no length; pass one explicitly" % pair.name
        )
    cache_key = (length.name, radius)
    hit = pair.ball_cache.get(cache_key)
    if hit is not None:
        return hit

    if (
        pair._ball_doubles is not None
        and pair.length is not None
        and length.name == pair.length.name
    ):
        doubles = [DoubleCosetKey(rep, length(rep)) for rep in pair._ball_doubles(radius)]
        rights = [CosetKey(rep, length(rep)) for rep in pair._ball_rights(radius)]
    elif length.kind == "word":
        if gens is None:
            gens = pair.g_generators
        if gens is None:
            raise UnsupportedLengthError(
                "word-length ball needs generators for pair %r" % pair.name
            )
        if radius < 0:
            doubles, rights = [], []
        else:
            dlen = {}
            for g in enumerate_word_ball(gens, int(radius), budget=budget):
                drep = pair.double_rep(g)
                if drep not in dlen:
                    dlen[drep] = length(g)
            doubles = [DoubleCosetKey(rep, l) for rep, l in dlen.items()]
            rights = []
            for d in doubles:
                for ck in decompose_double_coset(pair, d.rep, budget=budget):
                    rights.append(CosetKey(ck.rep, d.length))
    else:
        raise UnsupportedLengthError(
            "no ball enumeration for length %r on pair %r" % (length.name, pair.name)
        )

    ball = PairBall(
        BallIndex("double", radius, doubles),
        BallIndex("right", radius, rights),
    )
    pair.ball_cache[cache_key] = ball
    return ball


def reachable_coset_ball(pair, directions, depth, budget=10 ** 6):
    """Right cosets reachable from H in <= depth convolution steps.

    `directions` is an iterable of double-coset keys (or elements); one step
    from coset Hx reaches the cosets {H a x : a in rights(D)} for each
    direction D. The reported "length" of a key is its discovery depth, which
    gives a monotone exhaustion usable when no locally finite length exists.
    """
    decs = []
    for d in directions:
        g = d.rep if isinstance(d, CosetKey) else d
        decs.append(decompose_double_coset(pair, g, budget=budget))
    start = pair.coset_rep(pair.identity)
    found = {start: 0}
    frontier = [start]
    for level in range(1, depth + 1):
        nxt = []
        for x in frontier:
            for dec in decs:
                for a in dec:
                    y = pair.coset_rep(a.rep * x)
                    if y not in found:
                        found[y] = level
                        if len(found) > budget:
                            raise BudgetExceededError(
                                "reachable set exceeded budget %d" % budget,
                                partial_size=len(found),
                            )
                        nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    keys = [CosetKey(rep, lv) for rep, lv in found.items()]
    return BallIndex("right", depth, keys)
