"""Exact arithmetic in Z[tau] and Q(tau), base-tau digit words, and the
binary-sequence quotient map onto [0,1].

tau = (sqrt(5)-1)/2 is the positive root of x^2 + x = 1, so tau^2 = 1 - tau
and every power of tau (positive or negative) lies in Z[tau].  All
comparisons are decided by integer sign analysis, never by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


def _sign_u_v_sqrt5(u, v):
    # sign of u + v*sqrt(5), exact
    if u == 0 and v == 0:
        return 0
    if u >= 0 and v >= 0:
        return 1
    if u <= 0 and v <= 0:
        return -1
    if u > 0:  # v < 0
        return 1 if u * u > 5 * v * v else -1
    return 1 if 5 * v * v > u * u else -1


@dataclass(frozen=True)
class ZTau:
    """a + b*tau with integer a, b.  The pair (a, b) is the unique representation."""

    a: int
    b: int

    def __add__(self, other: ZTau) -> ZTau:
        return ZTau(self.a + other.a, self.b + other.b)

    def __sub__(self, other: ZTau) -> ZTau:
        return ZTau(self.a - other.a, self.b - other.b)

    def __neg__(self) -> ZTau:
        return ZTau(-self.a, -self.b)

    def __mul__(self, other: ZTau) -> ZTau:
        # (a+bt)(c+dt) = ac + (ad+bc) t + bd t^2,  t^2 = 1 - t
        a, b, c, d = self.a, self.b, other.a, other.b
        return ZTau(a * c + b * d, a * d + b * c - b * d)

    def sign(self) -> int:
        # 2(a + b*tau) = (2a - b) + b*sqrt(5)
        return _sign_u_v_sqrt5(2 * self.a - self.b, self.b)

    def __lt__(self, other: ZTau) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: ZTau) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: ZTau) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: ZTau) -> bool:
        return (self - other).sign() >= 0

    def to_qtau(self) -> QTau:
        return QTau(Fraction(self.a), Fraction(self.b))

    def __float__(self) -> float:
        return self.a + self.b * ((5 ** 0.5 - 1) / 2)

    def __str__(self) -> str:
        return format_ztau(self.a, self.b)

    def __repr__(self) -> str:
        return f"ZTau({self.a}, {self.b})"


@dataclass(frozen=True)
class QTau:
    """a + b*tau with rational a, b (field Q(tau))."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(x) -> QTau:
        if isinstance(x, QTau):
            return x
        if isinstance(x, ZTau):
            return x.to_qtau()
        return QTau(Fraction(x), Fraction(0))

    def __add__(self, other) -> QTau:
        other = QTau.of(other)
        return QTau(self.a + other.a, self.b + other.b)

    def __sub__(self, other) -> QTau:
        other = QTau.of(other)
        return QTau(self.a - other.a, self.b - other.b)

    def __neg__(self) -> QTau:
        return QTau(-self.a, -self.b)

    def __mul__(self, other) -> QTau:
        other = QTau.of(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return QTau(a * c + b * d, a * d + b * c - b * d)

    def inverse(self) -> QTau:
        # conjugate tau' = -(1+tau); norm (a+bt)(a+bt') = a^2 - ab - b^2
        n = self.a * self.a - self.a * self.b - self.b * self.b
        if n == 0:
            raise ZeroDivisionError("QTau division by zero")
        return QTau((self.a - self.b) / n, -self.b / n)

    def __truediv__(self, other) -> QTau:
        return self * QTau.of(other).inverse()

    def sign(self) -> int:
        # clear denominators, then integer sign analysis
        d = self.a.denominator * self.b.denominator
        u = (2 * self.a - self.b) * d
        v = self.b * d
        return _sign_u_v_sqrt5(u.numerator, v.numerator)

    def __lt__(self, other) -> bool:
        return (self - QTau.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - QTau.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - QTau.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - QTau.of(other)).sign() >= 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, (QTau, ZTau, int)):
            return NotImplemented
        other = QTau.of(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_ztau(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def to_ztau(self) -> ZTau:
        if not self.is_ztau():
            raise DomainError(f"{self!r} is not in Z[tau]")
        return ZTau(int(self.a), int(self.b))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * ((5 ** 0.5 - 1) / 2)

    def __str__(self) -> str:
        return format_ztau(self.a, self.b)

    def __repr__(self) -> str:
        return f"QTau({self.a!r}, {self.b!r})"


ZERO = ZTau(0, 0)
ONE = ZTau(1, 0)
TAU = ZTau(0, 1)
TAU2 = ZTau(1, -1)  # tau^2 = 1 - tau
TAU_INV = ZTau(1, 1)  # 1/tau = 1 + tau


def tau_pow(n: int) -> ZTau:
    """Exact tau^n for any integer n (tau is a unit of Z[tau])."""
    out = ONE
    step = TAU if n >= 0 else TAU_INV
    for _ in range(abs(n)):
        out = out * step
    return out


def tau_pow_q(n: int) -> QTau:
    return tau_pow(n).to_qtau()


def cmp(x, y) -> int:
    """-1, 0, +1 ordering of two ZTau/QTau values, exact."""
    return (QTau.of(x) - QTau.of(y)).sign()


def as_tau_power_sum(x, max_exp: int = 64):
    """Greedy decomposition x = sum of distinct tau^k (k >= 0), or None.

    Used for readable printing of values like tau^4 + tau^7.
    """
    v = QTau.of(x)
    if v.sign() < 0:
        return None
    exps = []
    k = 0
    while v.sign() > 0:
        if k > max_exp:
            return None
        p = tau_pow_q(k)
        if p <= v:
            exps.append(k)
            v = v - p
        k += 1
    return exps


def format_ztau(a, b) -> str:
    """Render a + b*tau as 'a+b t', with tau-power sugar when available."""
    exps = as_tau_power_sum(QTau(Fraction(a), Fraction(b)), max_exp=40)
    if exps and exps != [0]:
        def term(k):
            return "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
        return "+".join(term(k) for k in exps)
    if b == 0:
        return str(a)
    bs = "t" if b == 1 else ("-t" if b == -1 else f"{b} t")
    if a == 0:
        return bs
    return f"{a}+{bs}" if b > 0 else f"{a}{bs}"


def parse_ztau(text: str) -> ZTau:
    """Parse 'a+b t' (and 't^k' sugar) back into a ZTau."""
    s = text.replace(" ", "")
    if not s:
        raise DomainError("empty ZTau literal")
    total = ZERO
    # split into signed terms
    terms, cur = [], ""
    for ch in s:
        if ch in "+-" and cur:
            terms.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    terms.append(cur)
    for t in terms:
        if not t or t in "+-":
            raise DomainError(f"bad ZTau literal {text!r}")
        neg = t.startswith("-")
        t = t.lstrip("+-")
        if "t^" in t:
            coef, _, exp = t.partition("t^")
            val = tau_pow(int(exp))
            val = val * ZTau(int(coef) if coef else 1, 0)
        elif t.endswith("t"):
            coef = t[:-1]
            val = TAU * ZTau(int(coef) if coef else 1, 0)
        else:
            val = ZTau(int(t), 0)
        total = total - val if neg else total + val
    return total


# ---------------------------------------------------------------------------
# Eventually periodic binary words


@dataclass(frozen=True)
class EPWord:
    """The infinite binary word prefix . period period period ...

    Canonical form: the period is primitive (not a power of a shorter word)
    and the prefix is shortest (no trailing symbol of the prefix equals the
    last symbol of the period).
    """

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise DomainError("EPWord period must be nonempty")
        if set(self.prefix + self.period) - {"0", "1"}:
            raise DomainError("EPWord symbols must be 0/1")

    def canonical(self) -> EPWord:
        per = self.period
        for d in range(1, len(per)):
            if len(per) % d == 0 and per == per[:d] * (len(per) // d):
                per = per[:d]
                break
        pre = self.prefix
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        return EPWord(pre, per)

    def head(self, n: int) -> str:
        if n <= len(self.prefix):
            return self.prefix[:n]
        rest = n - len(self.prefix)
        reps = rest // len(self.period) + 1
        return self.prefix + (self.period * reps)[:rest]

    def symbol(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"

    @staticmethod
    def parse(text: str) -> EPWord:
        s = text.strip()
        if "(" in s:
            if not s.endswith(")"):
                raise DomainError(f"bad EPWord literal {text!r}")
            pre, _, rest = s.partition("(")
            return EPWord(pre, rest[:-1]).canonical()
        # plain finite word means word . 0^omega
        return EPWord(s, "0").canonical()


def epword(prefix: str, period: str = "0") -> EPWord:
    return EPWord(prefix, period).canonical()


def q1(w: EPWord) -> EPWord:
    """Double every 0; the image is again eventually periodic."""

    def double(s):
        return "".join("00" if c == "0" else "1" for c in s)

    return EPWord(double(w.prefix), double(w.period)).canonical()


def _q2_sum(w: EPWord) -> QTau:
    # sum over n>=1 of tau^(n+1) * w_n, split at the prefix/period boundary
    total = ZERO
    for i, c in enumerate(w.prefix):
        if c == "1":
            total = total + tau_pow(i + 2)
    s = ZERO
    for j, c in enumerate(w.period):
        if c == "1":
            s = s + tau_pow(j + 1)
    p, per = len(w.prefix), len(w.period)
    tail = tau_pow_q(p + 1) * s.to_qtau() / (ONE.to_qtau() - tau_pow_q(per))
    return total.to_qtau() + tail


def q2(w: EPWord) -> QTau:
    """Exact value sum tau^(n+1) w_n of an eventually periodic digit word."""
    return _q2_sum(w)


def q2_subtractive(w: EPWord) -> QTau:
    """The equivalent form 1 - sum tau^(n+1) (1 - w_n)."""

    def flip(s):
        return "".join("1" if c == "0" else "0" for c in s)

    return ONE.to_qtau() - _q2_sum(EPWord(flip(w.prefix), flip(w.period)))


def q(w: EPWord) -> QTau:
    """Order-preserving quotient of binary sequences onto [0,1]."""
    return q2(q1(w))


@lru_cache(maxsize=None)
def _q_cylinder_split(word: str) -> QTau:
    # shared boundary value q(word + 1 0^omega) = q(word + 0 1^omega)
    return q(EPWord(word + "1", "0").canonical())


def q_preimages(x: ZTau, max_depth: int = 4096) -> tuple[EPWord, EPWord]:
    """The two q-preimages of a point of Z[tau] in (0,1).

    Returned as (tail-0 word, tail-1 word); the first is the upper (plus
    side) preimage, the second the lower (minus side) one.
    """
    if not (ZERO < x < ONE):
        raise DomainError("q_preimages needs x strictly between 0 and 1")
    xq = x.to_qtau()
    w = ""
    for _ in range(max_depth):
        s = _q_cylinder_split(w)
        c = cmp(xq, s)
        if c == 0:
            return (epword(w + "1", "0"), epword(w + "0", "1"))
        w += "0" if c < 0 else "1"
    raise DomainError("q_preimages did not terminate; input not in Z[tau]?")


def expansion_value(w: EPWord) -> QTau:
    """Value of a digit word under q2 (digit n weighs tau^(n+1))."""
    return q2(w)


def canonical_expansions(x: ZTau) -> tuple[EPWord, EPWord]:
    """The two base-tau digit words of x in Z[tau] with 0 < x < 1.

    Both satisfy q2(word) == x exactly; every finite run of 0s has even
    length.  The first has the form b 1 (0), the second the form b 0 0 (1).
    """
    hi, lo = q_preimages(x)
    return (q1(hi), q1(lo))


def word_side(w: EPWord) -> str:
    """Which blowup side an eventually periodic word approaches its value from.

    '+' for tail 0^omega (except the all-zero word), '-' for tail 1^omega
    (except all-one), '' otherwise (value not in Z[tau], or an endpoint).
    """
    w = w.canonical()
    if w.period == "0":
        return "" if w.prefix == "" else "+"
    if w.period == "1":
        return "" if w.prefix == "" else "-"
    return ""
