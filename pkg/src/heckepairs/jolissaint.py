"""Corner-block seminorms over length projections, and the length derivation.

For a finitely supported element f with max support length ell, the corner
compressions (1-P_N) f P_{N-N^alpha} live entirely inside narrow length
windows, so each level-N seminorm is the norm of two small exact matrices.
Thresholds like "L <= N - N^alpha" are evaluated in exact rational
arithmetic (no rounding of N^alpha), and vanishing beyond N >= ell^(1/alpha)
is decided without building anything.
"""

import math
from bisect import bisect_right
from fractions import Fraction

from .algebra import QQi, apply_regular_rep, convolve, l2_norm_sq, norms
from .cosets import BallIndex, enumerate_ball
from .errors import ConfigError, UnsupportedLengthError
from .operators import ActionTable, block_operator_norm, norm_upper


class JolissaintParams:
    """Corner-seminorm parameters: exponent alpha in (0,1), weight q, level N."""

    __slots__ = ("alpha", "q", "n")

    def __init__(self, alpha, q=1, n=None):
        self.alpha = Fraction(alpha)
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie strictly between 0 and 1")
        self.q = int(q)
        if self.q < 1:
            raise ConfigError("q must be a positive integer")
        self.n = None if n is None else int(n)
        if self.n is not None and self.n < 1:
            raise ConfigError("N must be a positive integer")

    def __repr__(self):
        return "JolissaintParams(alpha=%s, q=%d, n=%r)" % (self.alpha, self.q, self.n)


def length_le_pow(value, n, alpha):
    """Exact test of value <= n**alpha for rational value, integer n >= 1."""
    v = Fraction(value)
    if v <= 0:
        return True
    return v ** alpha.denominator <= Fraction(n) ** alpha.numerator


def length_le_n_minus_pow(value, n, alpha):
    """Exact test of value <= n - n**alpha."""
    d = Fraction(n) - Fraction(value)
    if d < 0:
        return False
    return d ** alpha.denominator >= Fraction(n) ** alpha.numerator


def vanishing_threshold(ell, alpha):
    """Smallest integer N with ell <= N**alpha; corner blocks vanish there on.

    A support of max length ell cannot move a column of length <= N - N^alpha
    past N (or back), so rho(f, N) = 0 exactly for every N at or beyond this.
    """
    ell = Fraction(ell)
    if ell <= 1:
        return 1
    p, q = alpha.numerator, alpha.denominator
    lq = ell ** q
    n0 = max(1, int(round(float(ell) ** (q / p))))
    while Fraction(n0) ** p < lq:
        n0 += 1
    while n0 > 1 and Fraction(n0 - 1) ** p >= lq:
        n0 -= 1
    return n0


def _cut(lengths, pred):
    # lengths is sorted; pred is True on a prefix. Returns the prefix end.
    lo, hi = 0, len(lengths)
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(lengths[mid]):
            lo = mid + 1
        else:
            hi = mid
    return lo


def _window(ball, lo_excl, n, alpha, shift=0):
    """Keys of the ball with lo_excl < length <= n - n^alpha + shift."""
    lengths = ball._length_list
    start = bisect_right(lengths, lo_excl)
    end = _cut(lengths, lambda L: length_le_n_minus_pow(Fraction(L) - shift, n, alpha))
    if end <= start:
        return BallIndex("right", ball.radius, ())
    return BallIndex("right", ball.radius, ball.keys[start:end])


class RhoResult:
    """One corner-seminorm level: N^q (||upper block|| + ||lower block||)."""

    __slots__ = ("n", "value", "block1_norm", "block2_norm", "block1_shape",
                 "block2_shape", "vanished")

    def __init__(self, n, value, block1_norm=0.0, block2_norm=0.0,
                 block1_shape=(0, 0), block2_shape=(0, 0), vanished=False):
        self.n = n
        self.value = value
        self.block1_norm = block1_norm
        self.block2_norm = block2_norm
        self.block1_shape = block1_shape
        self.block2_shape = block2_shape
        self.vanished = vanished

    def __repr__(self):
        return "RhoResult(N=%d, value=%.12g, blocks=%sx%s)" % (
            self.n, self.value, self.block1_shape, self.block2_shape,
        )


def corner_seminorm(pair, f, length=None, params=None, ball=None, budget=10 ** 6):
    """rho at one level N: the exact corner blocks of lambda(f) and their norms.

    Block 1 is (1-P_N) f P_{N-N^alpha}: columns are the right cosets with
    length in (N-ell, N-N^alpha], rows those in (N, N-N^alpha+ell]; block 2
    is the transposed window pattern for P_{N-N^alpha} f (1-P_N). Outside
    those windows the compressions are identically zero, so the matrices are
    the full blocks and the norms carry no truncation error.
    """
    if params is None or params.n is None:
        raise ConfigError("corner_seminorm needs params with a level N")
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    n, alpha, q = params.n, params.alpha, params.q
    if f.is_zero():
        return RhoResult(n, 0.0, vanished=True)
    ell = f.max_support_length(length)
    if length_le_pow(ell, n, alpha):
        # support too short to cross the corner: exact zero, no assembly
        return RhoResult(n, 0.0, vanished=True)
    if ball is None:
        ball = enumerate_ball(pair, length, n + math.ceil(ell), budget=budget).right
    cols = _window(ball, Fraction(n) - Fraction(ell), n, alpha)
    rows = _window(ball, Fraction(n), n, alpha, shift=Fraction(ell))
    if len(cols) == 0 or len(rows) == 0:
        return RhoResult(n, 0.0, block1_shape=(len(rows), len(cols)),
                         block2_shape=(len(cols), len(rows)))
    b1 = ActionTable(pair, f.support, cols, rows, allow_missing=True).matrix_for(f)
    b2 = ActionTable(pair, f.support, rows, cols, allow_missing=True).matrix_for(f)
    n1 = block_operator_norm(b1)
    n2 = block_operator_norm(b2)
    return RhoResult(
        n, float(n ** q) * (n1 + n2), n1, n2, b1.shape, b2.shape,
    )


def rho(pair, f, length=None, params=None, **kw):
    """Float value of the level-N corner seminorm."""
    return corner_seminorm(pair, f, length=length, params=params, **kw).value


class NuResult:
    """Exact sup over levels: max of rho over N below the vanishing threshold."""

    __slots__ = ("value", "argmax_n", "rows", "threshold", "alpha", "q")

    def __init__(self, value, argmax_n, rows, threshold, alpha, q):
        self.value = value
        self.argmax_n = argmax_n
        self.rows = rows
        self.threshold = threshold
        self.alpha = alpha
        self.q = q

    def __repr__(self):
        return "NuResult(value=%.12g, argmax_N=%r, levels=%d)" % (
            self.value, self.argmax_n, len(self.rows),
        )


def jolissaint_seminorm(pair, f, length=None, alpha=Fraction(1, 2), q=1,
                        budget=10 ** 6):
    """nu = sup_N rho(f, N), computed exactly over the finite active range.

    rho vanishes for every N at or beyond the support threshold, so the sup
    is a max over N in [1, threshold). Ties break toward the smaller N.
    """
    proto = JolissaintParams(alpha, q)
    alpha, q = proto.alpha, proto.q
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    if f.is_zero():
        return NuResult(0.0, None, [], 1, alpha, q)
    ell = f.max_support_length(length)
    threshold = vanishing_threshold(ell, alpha)
    if threshold <= 1:
        return NuResult(0.0, None, [], threshold, alpha, q)
    ball = enumerate_ball(
        pair, length, (threshold - 1) + math.ceil(ell), budget=budget
    ).right
    rows = []
    best_val = 0.0
    best_n = None
    for n in range(1, threshold):
        res = corner_seminorm(
            pair, f, length=length,
            params=JolissaintParams(alpha, q, n), ball=ball,
        )
        rows.append(res)
        if res.value > best_val:
            best_val = res.value
            best_n = n
    return NuResult(best_val, best_n, rows, threshold, alpha, q)


def nu(pair, f, length=None, alpha=Fraction(1, 2), q=1, budget=10 ** 6):
    """Float value of the sup-over-levels seminorm."""
    return jolissaint_seminorm(pair, f, length=length, alpha=alpha, q=q,
                               budget=budget).value


class SubmultReport:
    """One-sided product inequality record.

    lhs is the exact-block seminorm of the product; rhs replaces the two
    operator norms by Schur upper bounds, so lhs <= rhs is a sound check of
    the submultiplicativity inequality whenever it holds.
    """

    __slots__ = ("ok", "lhs", "rhs", "alpha", "q", "nu_half_1", "nu_half_2",
                 "upper_1", "upper_2", "degenerate")

    def __init__(self, ok, lhs, rhs, alpha, q, nu_half_1, nu_half_2,
                 upper_1, upper_2, degenerate):
        self.ok = ok
        self.lhs = lhs
        self.rhs = rhs
        self.alpha = alpha
        self.q = q
        self.nu_half_1 = nu_half_1
        self.nu_half_2 = nu_half_2
        self.upper_1 = upper_1
        self.upper_2 = upper_2
        self.degenerate = degenerate

    def __repr__(self):
        return "SubmultReport(%s: %.9g <= %.9g)" % (
            "ok" if self.ok else "FAIL", self.lhs, self.rhs,
        )


def submultiplicativity_check(pair, f1, f2, length=None, alpha=Fraction(1, 2),
                              q=1, slack=1e-9):
    """Check nu_{a,q}(f1*f2) <= nu_{a/2,q}(f1)||f2|| + nu_{a/2,q}(f2)||f1||.

    Operator norms on the right are replaced by their Schur upper bounds.
    When both halved seminorms vanish (all support lengths <= 1) the right
    side degenerates to 0 while the left need not; the report flags that
    case as `degenerate` rather than hiding it.
    """
    alpha = Fraction(alpha)
    length = length or pair.length
    prod = convolve(pair, f1, f2)
    lhs = jolissaint_seminorm(pair, prod, length=length, alpha=alpha, q=q).value
    half = alpha / 2
    nu1 = jolissaint_seminorm(pair, f1, length=length, alpha=half, q=q).value
    nu2 = jolissaint_seminorm(pair, f2, length=length, alpha=half, q=q).value
    u1 = norm_upper(pair, f1)
    u2 = norm_upper(pair, f2)
    rhs = nu1 * u2 + nu2 * u1
    ok = lhs <= rhs + slack * max(1.0, rhs)
    degenerate = nu1 == 0.0 and nu2 == 0.0 and lhs > 0.0
    return SubmultReport(ok, lhs, rhs, alpha, q, nu1, nu2, u1, u2, degenerate)


class TailProfile:
    """Squared projection tails ||(1-P_k) f||^2 and the weighted norms."""

    __slots__ = ("rows", "norm_reports", "length_name")

    def __init__(self, rows, norm_reports, length_name):
        self.rows = rows
        self.norm_reports = norm_reports
        self.length_name = length_name


def sobolev_tail_profile(pair, f, length=None, s_list=(0, 1, 2)):
    """Tail table ||(1-P_k) f||_2^2 for k = 0..ceil(ell), plus norms per s.

    Tails beyond the max support length are identically zero, so the table
    is complete. Exact in exact mode.
    """
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    from .cosets import decompose_double_coset

    per_double = []
    for dk, c in f.terms.items():
        L = length(dk.rep)
        w = c.abs_sq() if f.mode == "exact" else abs(c) ** 2
        per_double.append((L, w * len(decompose_double_coset(pair, dk.rep))))
    ell = max((L for L, _ in per_double), default=0)
    zero = Fraction(0) if f.mode == "exact" else 0.0
    rows = []
    for k in range(0, math.ceil(ell) + 1):
        rows.append((k, sum((w for L, w in per_double if L > k), zero)))
    reports = {s: norms(f, length=length, s=s) for s in s_list}
    return TailProfile(rows, reports, length.name)


def project(xi, radius, length=None):
    """Zero out the coefficients at keys of length > radius.

    Works on right-coset vectors and on algebra elements alike; idempotent,
    never norm-increasing, and P_r P_t = P_min(r,t) exactly.
    """
    length = length or xi.pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % xi.pair.name)
    kept = [(k, c) for k, c in xi.terms.items() if length(k.rep) <= radius]
    return type(xi)(xi.pair, kept, xi.mode)


def _scale_by_length(vec, length):
    terms = []
    for k, c in vec.terms.items():
        L = length(k.rep)
        terms.append((k, c * Fraction(L) if vec.mode == "exact" else c * float(L)))
    return type(vec)(vec.pair, terms, vec.mode)


def derivation_apply(pair, f, xi, length=None):
    """The commutator i[d_L, lambda(f)] applied to xi.

    d_L multiplies each coset coefficient by its length; the result is
    i*(d_L(f * xi) - f * d_L(xi)). Exact when the length is exact.
    """
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    if xi.mode == "exact" and not length.exact:
        raise ConfigError("exact derivation needs an exact length")
    d1 = _scale_by_length(apply_regular_rep(pair, f, xi), length)
    d2 = apply_regular_rep(pair, f, _scale_by_length(xi, length))
    diff = d1 - d2
    unit = QQi(0, 1) if xi.mode == "exact" else 1j
    return diff.scale(unit)
