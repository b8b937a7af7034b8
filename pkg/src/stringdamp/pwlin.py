"""Exact algebra of piecewise-linear functions.

A :class:`PiecewiseLinear` lives either on the torus ``[0, P)`` (periodic) or on
a finite segment ``[0, L]``.  Each segment is half-open and left-closed, so the
value at a breakpoint is the value of the segment that starts there.  Jumps are
allowed everywhere; the boundary history of the dry-friction flow is full of
them.

All operations return new objects.  Arrays stored on an instance are marked
read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

#: Breakpoints closer than this are merged.
BREAK_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """Possibly discontinuous piecewise-linear function.

    Attributes:
        breakpoints: Strictly increasing segment starts, first one ``0``.
        values: Value of each segment at its own start (left value).
        slopes: Slope of each segment.
        domain_length: ``P`` for torus functions, ``L`` for finite segments.
        periodic: Whether ``x`` is reduced modulo ``domain_length``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    domain_length: float = TWO_PI
    periodic: bool = True

    def __post_init__(self):
        b = _frozen(self.breakpoints)
        v = _frozen(self.values)
        s = _frozen(self.slopes)
        if not (b.ndim == v.ndim == s.ndim == 1) or not (len(b) == len(v) == len(s)):
            raise ValueError("breakpoints, values and slopes must be 1-d of equal length")
        if len(b) == 0:
            raise ValueError("at least one segment is required")
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")
        if b[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if b[-1] >= self.domain_length:
            raise ValueError("breakpoints must lie below domain_length")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(s))):
            raise ValueError("values and slopes must be finite")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "slopes", s)
        object.__setattr__(self, "domain_length", float(self.domain_length))
        object.__setattr__(self, "periodic", bool(self.periodic))

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: float, domain_length: float = TWO_PI, periodic: bool = True):
        return cls([0.0], [c], [0.0], domain_length, periodic)

    @classmethod
    def from_points(cls, xs: Sequence[float], ys: Sequence[float],
                    domain_length: float = TWO_PI, periodic: bool = True):
        """Continuous interpolant through ``(xs[i], ys[i])``.

        ``xs`` must start at 0.  On a torus the last node connects back to
        ``(domain_length, ys[0])``; on a segment it is extended to
        ``domain_length`` by a node ``(domain_length, ys[-1])`` unless already
        given.
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if len(xs) != len(ys) or len(xs) == 0:
            raise ValueError("xs and ys must be nonempty and of equal length")
        P = float(domain_length)
        if periodic:
            x_end, y_end = np.append(xs[1:], P), np.append(ys[1:], ys[0])
            keep = xs < P
        else:
            if xs[-1] < P:
                xs, ys = np.append(xs, P), np.append(ys, ys[-1])
            x_end, y_end = xs[1:], ys[1:]
            xs, ys = xs[:-1], ys[:-1]
            keep = np.ones(len(xs), dtype=bool)
        slopes = (y_end - ys) / (x_end - xs)
        return cls(xs[keep], ys[keep], slopes[keep], P, periodic)

    @classmethod
    def step(cls, xs: Sequence[float], levels: Sequence[float],
             domain_length: float = TWO_PI, periodic: bool = True):
        """Piecewise-constant function with ``levels[i]`` on ``[xs[i], xs[i+1])``."""
        return cls(xs, levels, np.zeros(len(levels)), domain_length, periodic)

    # -- basic structure ----------------------------------------------------

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints)

    @property
    def ends(self) -> np.ndarray:
        """Right end of every segment."""
        return np.append(self.breakpoints[1:], self.domain_length)

    @property
    def right_limits(self) -> np.ndarray:
        """Limit of every segment at its right end."""
        return self.values + self.slopes * (self.ends - self.breakpoints)

    def _same_domain(self, other: "PiecewiseLinear"):
        if (abs(self.domain_length - other.domain_length) > BREAK_TOL
                or self.periodic != other.periodic):
            raise ValueError("functions live on different domains")

    def _reduce(self, x):
        x = np.asarray(x, dtype=float)
        if self.periodic:
            x = np.mod(x, self.domain_length)
            # mod can round up to P itself
            return np.where(x >= self.domain_length, 0.0, x)
        if np.any((x < 0) | (x > self.domain_length)):
            raise ValueError("x outside the domain of a non-periodic function")
        return x

    def segment_index(self, x) -> np.ndarray:
        x = self._reduce(x)
        return np.searchsorted(self.breakpoints, x, side="right") - 1

    def __call__(self, x):
        x = self._reduce(x)
        k = np.searchsorted(self.breakpoints, x, side="right") - 1
        out = self.values[k] + self.slopes[k] * (x - self.breakpoints[k])
        return float(out) if out.ndim == 0 else out

    def __repr__(self):
        kind = "periodic" if self.periodic else "segment"
        return (f"PiecewiseLinear({self.n_segments} pieces, {kind}, "
                f"length={self.domain_length:.6g})")

    # -- resampling core ----------------------------------------------------

    def _resample(self, xs: np.ndarray, length: float, offset: float = 0.0,
                  sign: float = 1.0):
        """Values/slopes of ``x -> f(offset + sign*x)`` on segments starting at ``xs``.

        The source segment is located by the midpoint of each target segment
        and then extrapolated to the target's left end, which keeps the result
        right even when a source breakpoint was merged away by deduplication.
        """
        ends = np.append(xs[1:], length)
        mids = 0.5 * (xs + ends)
        src = offset + sign * mids
        if self.periodic:
            src = np.mod(src, self.domain_length)
        else:
            src = np.clip(src, 0.0, self.domain_length)
        k = np.searchsorted(self.breakpoints, src, side="right") - 1
        k = np.clip(k, 0, self.n_segments - 1)
        vals = self.values[k] + self.slopes[k] * (src - self.breakpoints[k])
        vals = vals + sign * self.slopes[k] * (xs - mids)
        return vals, sign * self.slopes[k]

    def refine(self, points: Iterable[float]) -> "PiecewiseLinear":
        """Same function with extra breakpoints inserted."""
        xs = merge_breakpoints([self.breakpoints, np.asarray(list(points), dtype=float)],
                               self.domain_length)
        vals, slopes = self._resample(xs, self.domain_length)
        return PiecewiseLinear(xs, vals, slopes, self.domain_length, self.periodic)

    def simplify(self, tol: float = 1e-13) -> "PiecewiseLinear":
        """Merge neighbouring segments that continue each other."""
        keep = [0]
        rl = self.right_limits
        for i in range(1, self.n_segments):
            j = keep[-1]
            continuous = abs(rl[i - 1] - self.values[i]) <= tol
            if not (continuous and abs(self.slopes[i] - self.slopes[j]) <= tol):
                keep.append(i)
        keep = np.array(keep)
        return PiecewiseLinear(self.breakpoints[keep], self.values[keep],
                               self.slopes[keep], self.domain_length, self.periodic)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PiecewiseLinear):
            return combine(self, other, 1.0, 1.0)
        return PiecewiseLinear(self.breakpoints, self.values + float(other), self.slopes,
                               self.domain_length, self.periodic)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PiecewiseLinear):
            return combine(self, other, 1.0, -1.0)
        return self + (-float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self * -1.0

    def __mul__(self, a):
        a = float(a)
        return PiecewiseLinear(self.breakpoints, a * self.values, a * self.slopes,
                               self.domain_length, self.periodic)

    __rmul__ = __mul__

    # -- geometry on the torus ----------------------------------------------

    def shift(self, tau: float) -> "PiecewiseLinear":
        """Periodic translate ``x -> f(x + tau)``."""
        self._need_periodic("shift")
        P = self.domain_length
        moved = np.mod(self.breakpoints - tau, P)
        xs = merge_breakpoints([moved, [0.0]], P)
        vals, slopes = self._resample(xs, P, offset=tau)
        return PiecewiseLinear(xs, vals, slopes, P, True)

    def reflect(self) -> "PiecewiseLinear":
        """``x -> f(-x) = f(P - x)`` on the torus."""
        self._need_periodic("reflect")
        P = self.domain_length
        xs = merge_breakpoints([np.mod(P - self.breakpoints, P)], P)
        vals, slopes = self._resample(xs, P, offset=P, sign=-1.0)
        return PiecewiseLinear(xs, vals, slopes, P, True)

    def masked(self, lo: float, hi: float) -> "PiecewiseLinear":
        """Copy that vanishes outside ``[lo, hi)``."""
        xs = merge_breakpoints([self.breakpoints, [lo, hi]], self.domain_length)
        vals, slopes = self._resample(xs, self.domain_length)
        ends = np.append(xs[1:], self.domain_length)
        mids = 0.5 * (xs + ends)
        inside = (mids >= lo) & (mids < hi)
        return PiecewiseLinear(xs, np.where(inside, vals, 0.0), np.where(inside, slopes, 0.0),
                               self.domain_length, self.periodic)

    def window(self, a: float, b: float, periodic: bool = False,
               length: float | None = None) -> "PiecewiseLinear":
        """``y -> f(a + y)`` for ``y`` in ``[0, b - a)``.

        With ``length`` larger than ``b - a`` the result is padded with zeros up
        to ``length``; ``periodic`` selects the kind of the returned function.
        """
        if b <= a:
            raise ValueError("empty window")
        L = float(b - a) if length is None else float(length)
        inner = min(b - a, L)
        local = self.breakpoints - a
        if self.periodic:
            local = np.mod(local, self.domain_length)
        pts = local[(local > 0) & (local < inner)]
        xs = merge_breakpoints([[0.0], pts, [inner] if inner < L else []], L)
        vals, slopes = self._resample(xs, L, offset=a)
        ends = np.append(xs[1:], L)
        inside = 0.5 * (xs + ends) < inner
        return PiecewiseLinear(xs, np.where(inside, vals, 0.0), np.where(inside, slopes, 0.0),
                               L, periodic)

    def derivative(self) -> "PiecewiseLinear":
        """Piecewise-constant derivative (jumps carry no Dirac mass here)."""
        return PiecewiseLinear(self.breakpoints, self.slopes, np.zeros(self.n_segments),
                               self.domain_length, self.periodic)

    def antiderivative(self, zero_mean: bool = False) -> "PiecewiseLinear":
        """Integral ``x -> int_0^x f`` of a piecewise-constant function.

        Only piecewise-constant input stays piecewise linear, so sloped input is
        rejected.  With ``zero_mean`` the constant is chosen to kill the mean.
        """
        if np.any(self.slopes != 0.0):
            raise ValueError("antiderivative of sloped pieces is not piecewise linear")
        widths = self.ends - self.breakpoints
        starts = np.concatenate([[0.0], np.cumsum(self.values * widths)[:-1]])
        F = PiecewiseLinear(self.breakpoints, starts, self.values,
                            self.domain_length, self.periodic)
        if zero_mean:
            F = F - F.integrate(0.0, self.domain_length) / self.domain_length
        return F

    # -- norms and integrals ------------------------------------------------

    def sup(self) -> float:
        return float(max(self.values.max(), self.right_limits.max()))

    def inf(self) -> float:
        return float(min(self.values.min(), self.right_limits.min()))

    def sup_norm(self, quotient_constants: bool = False) -> float:
        return sup_norm(self, quotient_constants)

    def integrate(self, a: float = 0.0, b: float | None = None, mode: str = "plain") -> float:
        return integrate(self, a, self.domain_length if b is None else b, mode)

    def cos_moment(self, n: int) -> float:
        """``int_0^P f(x) cos(n x) dx`` in closed form."""
        return _trig_moment(self, n, np.cos)

    def sin_moment(self, n: int) -> float:
        """``int_0^P f(x) sin(n x) dx`` in closed form."""
        return _trig_moment(self, n, np.sin)

    def _need_periodic(self, what):
        if not self.periodic:
            raise ValueError(f"{what} needs a periodic function")

    # -- exchange format ----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"#pwl period={self.domain_length:.17g} periodic={int(self.periodic)}"]
        for b, v, s in zip(self.breakpoints, self.values, self.slopes):
            lines.append(f"{b:.17g},{v:.17g},{s:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PiecewiseLinear":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not rows or not rows[0].startswith("#pwl"):
            raise ValueError("missing '#pwl' header")
        header = dict(tok.split("=", 1) for tok in rows[0].split()[1:])
        try:
            P = float(header["period"])
            periodic = header["periodic"] == "1"
        except KeyError as exc:
            raise ValueError(f"header lacks {exc}") from None
        data = np.array([[float(t) for t in r.split(",")] for r in rows[1:]], dtype=float)
        if data.ndim != 2 or data.shape[1] != 3:
            raise ValueError("segment lines must read 'breakpoint,left_value,slope'")
        return cls(data[:, 0], data[:, 1], data[:, 2], P, periodic)


def merge_breakpoints(groups, domain_length: float, tol: float = BREAK_TOL) -> np.ndarray:
    """Sorted union of breakpoint arrays, deduplicated within ``tol``.

    Always contains ``0``; points at or beyond ``domain_length`` are dropped.
    """
    arrs = [np.asarray(g, dtype=float).ravel() for g in groups]
    pts = np.sort(np.concatenate(arrs + [np.zeros(1)]))
    pts = pts[(pts >= 0.0) & (pts < domain_length - tol)]
    keep = np.empty(len(pts), dtype=bool)
    last = -np.inf
    for i, p in enumerate(pts):
        keep[i] = p - last > tol
        if keep[i]:
            last = p
    out = pts[keep]
    out[0] = 0.0
    return out


def evaluate(f: PiecewiseLinear, x):
    """Evaluate ``f`` at ``x`` with the left-closed segment convention."""
    return f(x)


def combine(f: PiecewiseLinear, g: PiecewiseLinear, a: float, b: float) -> PiecewiseLinear:
    """``a*f + b*g`` on the union of both breakpoint sets."""
    f._same_domain(g)
    xs = merge_breakpoints([f.breakpoints, g.breakpoints], f.domain_length)
    fv, fs = f._resample(xs, f.domain_length)
    gv, gs = g._resample(xs, f.domain_length)
    return PiecewiseLinear(xs, a * fv + b * gv, a * fs + b * gs, f.domain_length, f.periodic)


def even_odd_parts(f: PiecewiseLinear) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """Split a torus function into ``(f(x) + f(-x))/2`` and ``(f(x) - f(-x))/2``."""
    f._need_periodic("even_odd_parts")
    r = f.reflect()
    return combine(f, r, 0.5, 0.5), combine(f, r, 0.5, -0.5)


def sup_norm(f: PiecewiseLinear, quotient_constants: bool = False) -> float:
    """Sup norm, or half the oscillation when constants are factored out.

    Linear pieces attain their extrema at segment ends, so looking at left
    values and right limits is exact.
    """
    if quotient_constants:
        return 0.5 * (f.sup() - f.inf())
    return float(max(np.abs(f.values).max(), np.abs(f.right_limits).max()))


def refine_crossings(f: PiecewiseLinear, level: float) -> PiecewiseLinear:
    """Insert a breakpoint wherever a piece crosses ``+level`` or ``-level``.

    Afterwards ``f - level`` and ``f + level`` keep one sign on each segment
    (or vanish identically there; see :func:`segments_at_level`).
    """
    b, v, s = f.breakpoints, f.values, f.slopes
    widths = f.ends - b
    roots = []
    for lv in {float(level), -float(level)}:
        moving = s != 0.0
        x = np.full(len(b), -1.0)
        with np.errstate(over="ignore"):  # tiny slopes give inf, which never hits
            x[moving] = (lv - v[moving]) / s[moving]
        hit = moving & (x > BREAK_TOL) & (x < widths - BREAK_TOL)
        roots.append(b[hit] + x[hit])
    if not any(len(r) for r in roots):
        return f
    return f.refine(np.concatenate(roots))


def segments_at_level(f: PiecewiseLinear, level: float, tol: float = 1e-14) -> np.ndarray:
    """Mask of segments on which ``|f|`` equals ``level`` identically."""
    flat = np.abs(f.slopes) <= tol
    return flat & (np.abs(np.abs(f.values) - abs(level)) <= tol)


def _pieces_in(f: PiecewiseLinear, a: float, b: float):
    """Yield ``(lo, hi, value_at_lo, slope)`` for the parts of ``f`` on ``[a, b]``.

    For a torus function ``[a, b]`` may extend past the period once.
    """
    if b < a:
        raise ValueError("inverted integration bounds")
    P = f.domain_length
    if f.periodic:
        if b - a > P + BREAK_TOL:
            raise ValueError("interval longer than one period")
        shift = math.floor(a / P) * P
        a0, b0 = a - shift, b - shift
        spans = [(a0, min(b0, P), 0.0)]
        if b0 > P:
            spans.append((0.0, b0 - P, P))
    else:
        if a < -BREAK_TOL or b > P + BREAK_TOL:
            raise ValueError("bounds outside the domain")
        spans = [(max(a, 0.0), min(b, P), 0.0)]
    ends = f.ends
    for lo, hi, _ in spans:
        for k in range(f.n_segments):
            x0, x1 = max(lo, f.breakpoints[k]), min(hi, ends[k])
            if x1 > x0:
                yield x0, x1, f.values[k] + f.slopes[k] * (x0 - f.breakpoints[k]), f.slopes[k]


def integrate(f: PiecewiseLinear, a: float, b: float, mode: str = "plain") -> float:
    """Closed-form integral of ``f``, ``|f|`` or ``f**2`` over ``[a, b]``."""
    if mode not in ("plain", "abs", "square"):
        raise ValueError(f"unknown mode {mode!r}")
    if b < a:
        raise ValueError("inverted integration bounds")
    if mode == "abs":
        f = refine_crossings(f, 0.0)
    total = 0.0
    for x0, x1, y0, s in _pieces_in(f, a, b):
        w = x1 - x0
        y1 = y0 + s * w
        if mode == "plain":
            total += 0.5 * (y0 + y1) * w
        elif mode == "abs":
            total += 0.5 * abs(y0 + y1) * w
        else:
            total += w * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0
    return float(total)


def _trig_moment(f: PiecewiseLinear, n: int, trig) -> float:
    if n == 0:
        return f.integrate() if trig is np.cos else 0.0
    b, e = f.breakpoints, f.ends
    alpha = f.values - f.slopes * b  # piece = alpha + slope*x
    if trig is np.cos:
        # d/dx[(alpha + s x) sin(nx)/n + s cos(nx)/n^2] = (alpha + s x) cos(nx)
        def F(x):
            return (alpha + f.slopes * x) * np.sin(n * x) / n + f.slopes * np.cos(n * x) / n**2
    else:
        def F(x):
            return -(alpha + f.slopes * x) * np.cos(n * x) / n + f.slopes * np.sin(n * x) / n**2
    return float(np.sum(F(e) - F(b)))


def concatenate(pieces: Sequence[PiecewiseLinear]) -> PiecewiseLinear:
    """Glue functions end to end into one non-periodic function."""
    bs, vs, ss = [], [], []
    offset = 0.0
    for p in pieces:
        bs.append(p.breakpoints + offset)
        vs.append(p.values)
        ss.append(p.slopes)
        offset += p.domain_length
    return PiecewiseLinear(np.concatenate(bs), np.concatenate(vs), np.concatenate(ss),
                           offset, False)
