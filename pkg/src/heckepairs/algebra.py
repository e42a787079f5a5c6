"""Convolution algebra elements, the regular-representation action, norms.

Elements carry a coefficient mode: "exact" uses Gaussian rationals (QQi),
"float" uses complex. Mixing modes in one operation is an error, never a
silent coercion. All identity checks in the test suite run in exact mode.
"""

import math
from fractions import Fraction

from .cosets import CosetKey, DoubleCosetKey, coset_key, decompose_double_coset, double_key
from .errors import ConvolutionAuditError, ModeMismatchError, UnsupportedLengthError


class QQi:
    """Gaussian rational re + im*i with exact components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("QQi components must be exact (int/Fraction/str)")
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_qqi(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_qqi(other)
        return QQi(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_qqi(other) - self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_qqi(other)
        return QQi(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self):
        return QQi(self.re, -self.im)

    def abs_sq(self):
        return self.re * self.re + self.im * self.im

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def is_real_nonneg(self):
        return self.im == 0 and self.re >= 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = _as_qqi(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return "QQi(%s)" % (self.re,)
        return "QQi(%s, %s)" % (self.re, self.im)


def _as_qqi(c):
    if isinstance(c, QQi):
        return c
    if isinstance(c, (int, Fraction)):
        return QQi(c)
    if isinstance(c, str):
        return QQi(Fraction(c))
    raise TypeError("cannot treat %r as an exact coefficient" % (c,))


def _coerce(c, mode):
    if mode == "exact":
        try:
            return _as_qqi(c)
        except TypeError:
            raise ModeMismatchError(
                "exact mode needs rational coefficients, got %r" % (c,)
            )
    if isinstance(c, QQi):
        raise ModeMismatchError("QQi coefficient in float mode; convert explicitly")
    return complex(c)


def _check_same(a, b):
    if a.pair.signature != b.pair.signature:
        raise ModeMismatchError("elements belong to different pairs")
    if a.mode != b.mode:
        raise ModeMismatchError("mixed exact/float operands")


class _Supported:
    """Shared plumbing for finitely supported coefficient maps."""

    key_type = None

    def __init__(self, pair, terms=None, mode="exact"):
        if mode not in ("exact", "float"):
            raise ModeMismatchError("mode must be 'exact' or 'float'")
        self.pair = pair
        self.mode = mode
        data = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for key, c in items:
                if type(key) is not self.key_type:
                    raise TypeError(
                        "%s wants %s keys, got %r"
                        % (type(self).__name__, self.key_type.__name__, key)
                    )
                c = _coerce(c, mode)
                if key in data:
                    c = data[key] + c
                if c:
                    data[key] = c
                elif key in data:
                    del data[key]
        self.terms = data

    @property
    def support(self):
        return tuple(self.terms)

    def sorted_terms(self):
        """(key, coeff) pairs in deterministic canonical order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].key)

    def coefficient(self, key):
        zero = QQi() if self.mode == "exact" else 0j
        return self.terms.get(key, zero)

    def is_zero(self):
        return not self.terms

    def is_nonneg(self):
        if self.mode == "exact":
            return all(c.is_real_nonneg() for c in self.terms.values())
        return all(c.imag == 0 and c.real >= 0 for c in self.terms.values())

    def _binop(self, other, op):
        _check_same(self, other)
        data = dict(self.terms)
        for k, c in other.terms.items():
            v = op(data.get(k, _coerce(0, self.mode)), c)
            if v:
                data[k] = v
            elif k in data:
                del data[k]
        return type(self)(self.pair, data, self.mode)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _coerce(c, self.mode)
        return type(self)(
            self.pair, [(k, c * v) for k, v in self.terms.items()], self.mode
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.pair.signature == other.pair.signature
            and self.mode == other.mode
            and self.terms == other.terms
        )

    __hash__ = None  # container semantics; elements are not dict keys

    def __len__(self):
        return len(self.terms)

    def max_support_length(self, length=None):
        """Largest length over the support; 0 for the zero element."""
        length = length or self.pair.length
        if length is None:
            raise UnsupportedLengthError("pair %r has no length" % self.pair.name)
        return max((length(k.rep) for k in self.terms), default=0)

    def to_float(self):
        """Explicit exact -> float conversion (float input passes through)."""
        if self.mode == "float":
            return self
        return type(self)(
            self.pair,
            [(k, c.to_complex()) for k, c in self.terms.items()],
            "float",
        )

    def __repr__(self):
        inside = ", ".join(
            "%r: %r" % (k.key, c) for k, c in self.sorted_terms()[:4]
        )
        if len(self.terms) > 4:
            inside += ", ..."
        return "%s(%s; {%s})" % (type(self).__name__, self.pair.name, inside)


class HeckeElement(_Supported):
    """Finitely supported function on double cosets."""

    key_type = DoubleCosetKey

    @classmethod
    def zero(cls, pair, mode="exact"):
        return cls(pair, None, mode)

    @classmethod
    def delta(cls, pair, g, coeff=1, mode="exact"):
        """coeff times the characteristic function of HgH."""
        return cls(pair, [(double_key(pair, g), coeff)], mode)

    def involution(self):
        """f*(g) = conj(f(g^-1)); support maps through inversion."""
        out = []
        for k, c in self.terms.items():
            kk = double_key(self.pair, k.rep.inv())
            cc = c.conj() if self.mode == "exact" else c.conjugate()
            out.append((kk, cc))
        return HeckeElement(self.pair, out, self.mode)


class L2Vector(_Supported):
    """Finitely supported function on right cosets."""

    key_type = CosetKey

    @classmethod
    def zero(cls, pair, mode="exact"):
        return cls(pair, None, mode)

    @classmethod
    def delta(cls, pair, g, coeff=1, mode="exact"):
        """coeff times the characteristic function of Hg."""
        return cls(pair, [(coset_key(pair, g), coeff)], mode)

    @classmethod
    def delta_identity(cls, pair, mode="exact"):
        return cls.delta(pair, pair.identity, mode=mode)

    def inner(self, other):
        """<self, other> in ell^2 of the right cosets (conjugate-linear right)."""
        _check_same(self, other)
        if self.mode == "exact":
            acc = QQi()
            for k, c in self.terms.items():
                d = other.terms.get(k)
                if d is not None:
                    acc = acc + c * d.conj()
            return acc
        acc = 0j
        for k, c in self.terms.items():
            d = other.terms.get(k)
            if d is not None:
                acc += c * d.conjugate()
        return acc

    def norm_sq(self):
        if self.mode == "exact":
            acc = Fraction(0)
            for c in self.terms.values():
                acc += c.abs_sq()
            return acc
        return sum(abs(c) ** 2 for c in self.terms.values())


def spread(f):
    """The right-coset function behind a Hecke element.

    Each double coset's coefficient is replicated onto every right coset it
    contains; distinct doubles contribute disjoint right cosets.
    """
    out = []
    for d, c in f.terms.items():
        for a in decompose_double_coset(f.pair, d.rep):
            out.append((a, c))
    return L2Vector(f.pair, out, f.mode)


def _action_outputs(pair, dkey, ckey):
    """Output coset reps of (delta_D * delta_c), one per right coset of D.

    The map a -> H(a c0) over right-coset representatives a of D is
    injective (distinct a stay in distinct right cosets after right
    translation), so each output receives the coefficient exactly once.
    """
    probe = (dkey.rep, ckey.rep)
    hit = pair.action_cache.get(probe)
    if hit is None:
        hit = tuple(
            pair.coset_rep(a.rep * ckey.rep)
            for a in decompose_double_coset(pair, dkey.rep)
        )
        pair.action_cache[probe] = hit
    return hit


def apply_regular_rep(pair, f, xi):
    """The module action (f * xi)(Hg) = sum over right cosets Hk of
    f(g k^-1) xi(k), computed exactly on finite supports."""
    _check_same(f, xi)
    zero = QQi() if f.mode == "exact" else 0j
    acc = {}
    for dkey, c in f.terms.items():
        for ckey, v in xi.terms.items():
            w = c * v
            for rep in _action_outputs(pair, dkey, ckey):
                out = CosetKey(rep)
                acc[out] = acc.get(out, zero) + w
    return L2Vector(pair, acc, f.mode)


def convolve(pair, f1, f2):
    """Convolution product in the Hecke algebra.

    Computed through the module action on the spread of f2, then re-bucketed
    by double coset. In exact mode the result is audited: the value must be
    literally constant across each double coset's right cosets, anything else
    indicates a canonicalizer bug and raises.
    """
    _check_same(f1, f2)
    vec = apply_regular_rep(pair, f1, spread(f2))
    zero = QQi() if f1.mode == "exact" else 0j
    by_double = {}
    for ckey, v in vec.terms.items():
        dk = double_key(pair, ckey.rep)
        by_double.setdefault(dk, {})[ckey] = v
    out = []
    for dk, got in by_double.items():
        rights = decompose_double_coset(pair, dk.rep)
        values = [got.get(a, zero) for a in rights]
        first = values[0]
        if f1.mode == "exact":
            for v in values[1:]:
                if v != first:
                    raise ConvolutionAuditError(
                        "convolution value not constant on double coset %r: %r"
                        % (dk, values)
                    )
        out.append((dk, first))
    return HeckeElement(pair, out, f1.mode)


def l2_norm_sq(f):
    """||f||_2^2 over right cosets: sum of |coeff|^2 * degree per double."""
    if f.mode == "exact":
        acc = Fraction(0)
        for d, c in f.terms.items():
            acc += c.abs_sq() * len(decompose_double_coset(f.pair, d.rep))
        return acc
    return sum(
        abs(c) ** 2 * len(decompose_double_coset(f.pair, d.rep))
        for d, c in f.terms.items()
    )


def l1_norm(f):
    """||f||_1 over right cosets (float; exact only when coefficients are real)."""
    acc = 0.0
    for d, c in f.terms.items():
        a = c.abs_sq() if f.mode == "exact" else abs(c) ** 2
        acc += math.sqrt(float(a)) * len(decompose_double_coset(f.pair, d.rep))
    return acc


class NormsReport:
    """All norms of one element: plain floats plus exact squares when possible."""

    def __init__(self, s, length_name, l1, l2_sq, sobolev_sq, prime_sq, exact):
        self.s = s
        self.length_name = length_name
        self.l1 = l1
        self.l2_sq = l2_sq
        self.sobolev_sq = sobolev_sq
        self.prime_sq = prime_sq
        self.exact = exact
        self.l2 = math.sqrt(float(l2_sq))
        self.sobolev = math.sqrt(float(sobolev_sq))
        self.prime = math.sqrt(float(prime_sq))

    def __repr__(self):
        return (
            "NormsReport(s=%r, l1=%.6g, l2=%.6g, sobolev=%.6g, prime=%.6g)"
            % (self.s, self.l1, self.l2, self.sobolev, self.prime)
        )


def _weight(length_value, s, exact):
    base = 1 + length_value
    if exact:
        return Fraction(base) ** (2 * s)
    return float(base) ** (2 * float(s))


def norms(f, length=None, s=1):
    """l1, l2 and the weighted norms of one Hecke element.

    The weighted norm sums over right cosets; its primed variant sums over
    double cosets, so prime <= weighted always. Exact squares are reported
    whenever the length is exact, s is a nonnegative integer, and f is in
    exact mode.
    """
    pair = f.pair
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    exact = f.mode == "exact" and length.exact and isinstance(s, int) and s >= 0
    l2_sq = Fraction(0) if exact else 0.0
    sob_sq = Fraction(0) if exact else 0.0
    prime_sq = Fraction(0) if exact else 0.0
    for d, c in f.terms.items():
        a = c.abs_sq() if f.mode == "exact" else abs(c) ** 2
        if not exact:
            a = float(a)
        deg = len(decompose_double_coset(pair, d.rep))
        w = _weight(length(d.rep), s, exact)
        l2_sq += a * deg
        sob_sq += a * deg * w
        prime_sq += a * w
    return NormsReport(s, length.name, l1_norm(f), l2_sq, sob_sq, prime_sq, exact)


def sobolev_inner(f1, f2, length=None, s=1):
    """<f1, f2>_{s,L} over right cosets; exact (QQi) in exact mode."""
    _check_same(f1, f2)
    pair = f1.pair
    length = length or pair.length
    if length is None:
        raise UnsupportedLengthError("pair %r has no length" % pair.name)
    exact = f1.mode == "exact" and length.exact and isinstance(s, int) and s >= 0
    acc = QQi() if f1.mode == "exact" else 0j
    for d, c in f1.terms.items():
        other = f2.terms.get(d)
        if other is None:
            continue
        deg = len(decompose_double_coset(pair, d.rep))
        w = _weight(length(d.rep), s, exact)
        if f1.mode == "exact":
            if not exact:
                raise ModeMismatchError(
                    "inexact weights with exact coefficients; use to_float()"
                )
            acc = acc + c * other.conj() * QQi(w * deg)
        else:
            acc += c * other.conjugate() * (w * deg)
    return acc
