"""Finite truncations of the regular representation and norm brackets.

Truncation is column-exact: the codomain ball is padded by the support
length of f, so every column of the matrix is the complete image of its
basis vector. Compressions onto growing domains are then genuine lower
bounds for the operator norm and monotone in the radius.
"""

import math

import numpy as np

from .algebra import _action_outputs, l1_norm
from .cosets import enumerate_ball, reachable_coset_ball
from .errors import UnsupportedLengthError


class ActionTable:
    """Index pattern of the module action between two coset balls.

    For each double coset D, stores the (row, col) pairs where delta_D sends
    domain column col to codomain row. Every (row, col) pair belongs to at
    most one D, so assembling a matrix for f is a scatter per double coset.
    """

    def __init__(self, pair, doubles, domain, codomain, allow_missing=False):
        self.pair = pair
        self.domain = domain
        self.codomain = codomain
        self.tables = {}
        for dk in doubles:
            rows, cols = [], []
            for j, ck in enumerate(domain.keys):
                for rep in _action_outputs(pair, dk, ck):
                    i = codomain._slots.get(rep)
                    if i is None:
                        if not allow_missing:
                            raise UnsupportedLengthError(
                                "codomain ball misses an image coset of %r" % (dk,)
                            )
                        continue
                    rows.append(i)
                    cols.append(j)
            self.tables[dk.rep] = (
                np.asarray(rows, dtype=np.int64),
                np.asarray(cols, dtype=np.int64),
            )

    def matrix_for(self, f):
        """Dense float/complex matrix of lambda(f) on this index pattern."""
        vals = {}
        any_imag = False
        for dk, c in f.terms.items():
            z = c.to_complex() if f.mode == "exact" else complex(c)
            vals[dk.rep] = z
            any_imag = any_imag or z.imag != 0
        dtype = np.complex128 if any_imag else np.float64
        m = np.zeros((len(self.codomain), len(self.domain)), dtype=dtype)
        for rep, z in vals.items():
            rows, cols = self.tables[rep]
            m[rows, cols] += z if any_imag else z.real
        return m

    def matvec_int(self, coeffs, vec):
        """Exact integer action: coeffs maps double reps to ints, vec is int64."""
        out = np.zeros(len(self.codomain), dtype=np.int64)
        for rep, c in coeffs.items():
            rows, cols = self.tables[rep]
            np.add.at(out, rows, c * vec[cols])
        return out


class TruncatedOperator:
    """lambda(f) compressed to a domain ball, with column-exact codomain."""

    def __init__(self, domain, codomain, matrix, support_length):
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        self.support_length = support_length

    @property
    def shape(self):
        return self.matrix.shape


def truncate(pair, f, length=None, radius=0):
    """Matrix of lambda(f) on the right-coset ball of the given radius."""
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    ell = f.max_support_length(length)
    ball_dom = enumerate_ball(pair, length, radius).right
    ball_cod = enumerate_ball(pair, length, radius + ell).right
    table = ActionTable(pair, f.support, ball_dom, ball_cod)
    return TruncatedOperator(ball_dom, ball_cod, table.matrix_for(f), ell)


def _power_phase(a, v, tol, max_iter):
    # Stop on the Gram residual ||A^H A v - s2 v||: for a symmetric matrix the
    # Rayleigh value s2 is then within `res` of an exact eigenvalue, so the
    # returned sigma carries an error bound, not just a small last step.
    v = v / np.linalg.norm(v)
    sigma = 0.0
    res = 0.0
    for it in range(1, max_iter + 1):
        w = a @ v
        s2 = float(np.vdot(w, w).real)
        sigma = math.sqrt(s2)
        u = a.conj().T @ w
        res = float(np.linalg.norm(u - s2 * v))
        if res <= tol * max(s2, 1.0):
            return sigma, it, res, True
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            # the start vector lies in the kernel of the Gram operator
            return sigma, it, res, True
        v = u / nu
    return sigma, max_iter, res, False


def top_singular_value(a, tol=1e-10, max_iter=10 ** 4, seed=0):
    """Largest singular value via power iteration on the Gram operator.

    Runs two deterministic phases: one from the all-ones vector and one from
    a seeded random vector, and keeps the larger estimate. The second phase
    exists because the all-ones vector can be an exact non-top eigenvector
    (circulant symmetry), which a residual test alone cannot detect.

    Returns (sigma, iterations, residual, converged). sigma is always a
    valid lower bound for the true norm.
    """
    a = np.asarray(a)
    if a.size == 0 or not np.any(a):
        return 0.0, 0, 0.0, True
    n = a.shape[1]
    ones = np.ones(n, dtype=a.dtype)
    s1, it1, r1, c1 = _power_phase(a, ones, tol, max_iter)
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    if np.iscomplexobj(a):
        v0 = v0 + 1j * rng.standard_normal(n)
    s2, it2, r2, c2 = _power_phase(a, v0.astype(a.dtype), tol, max_iter)
    if s2 > s1:
        return s2, it1 + it2, r2, c2
    return s1, it1 + it2, r1, c1


def block_operator_norm(a, tol=1e-10, max_iter=10 ** 4, seed=0):
    """Spectral norm of a dense block: exact SVD when small, else power."""
    a = np.asarray(a, dtype=np.float64) if not np.iscomplexobj(a) else np.asarray(a)
    if a.size == 0:
        return 0.0
    if max(a.shape) <= 64:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    return top_singular_value(a, tol=tol, max_iter=max_iter, seed=seed)[0]


def norm_upper(pair, f):
    """Schur-test upper bound sqrt(||f||_1 ||f*||_1) for ||lambda(f)||.

    Every column of lambda(f) has absolute sum ||f||_1 (right-coset l1) and
    every row has absolute sum ||f*||_1; for inversion-stable supports the
    two coincide and the bound is plain ||f||_1.
    """
    return math.sqrt(l1_norm(f) * l1_norm(f.involution()))


class NormBracket:
    """A certified lower bound and an upper bound for one convolution norm."""

    def __init__(self, lower, upper, method, iterations, residual, converged,
                 radius, domain_size, codomain_size):
        self.lower = lower
        self.upper = upper
        self.method = method
        self.iterations = iterations
        self.residual = residual
        self.converged = converged
        self.radius = radius
        self.domain_size = domain_size
        self.codomain_size = codomain_size

    def __repr__(self):
        return "NormBracket(lower=%.12g, upper=%.12g, r=%r, %s)" % (
            self.lower, self.upper, self.radius,
            "converged" if self.converged else "NOT converged",
        )


def norm_lower(pair, f, length=None, radius=6, tol=1e-10, max_iter=10 ** 4, seed=0):
    """Lower/upper bracket for ||lambda(f)||.

    With a locally finite length the domain is the right-coset ball of the
    given radius. Without one, the domain is the set of cosets reachable
    from H in `radius` convolution steps along supp(f) and supp(f*), which
    is still an exhaustion, so the lower bound stays monotone in radius.
    """
    if f.is_zero():
        return NormBracket(0.0, 0.0, "zero", 0, 0.0, True, radius, 0, 0)
    length = length or pair.length
    dom = cod = None
    if length is not None:
        try:
            ell = f.max_support_length(length)
            dom = enumerate_ball(pair, length, radius).right
            cod = enumerate_ball(pair, length, radius + ell).right
            method = "power-gram/ball"
        except UnsupportedLengthError:
            dom = cod = None
    if dom is None:
        dirs = list(f.support) + list(f.involution().support)
        dom = reachable_coset_ball(pair, dirs, radius)
        cod = reachable_coset_ball(pair, dirs, radius + 1)
        method = "power-gram/reachable"
    table = ActionTable(pair, f.support, dom, cod)
    sigma, iters, res, conv = top_singular_value(
        table.matrix_for(f), tol=tol, max_iter=max_iter, seed=seed
    )
    return NormBracket(
        sigma, norm_upper(pair, f), method, iters, res, conv,
        radius, len(dom), len(cod),
    )
