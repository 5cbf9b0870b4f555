"""Finite representations of infinite runs: timed mask schedules and signals.

Infinite mask sequences are stored as lassos (finite prefix + repeating
cycle).  A timed schedule places the k-th mask at an exact rational instant;
the cycle slots recur with a fixed rational period, so the schedule covers an
unbounded, strictly increasing time sequence with finitely many data.

A run started from a state is a piecewise-constant signal R -> {0,1}^n with an
initial value, finitely many pre-periodic breakpoints, and a tail that is
either constant (the final value exists) or periodic (the limit does not
exist).  Because the state space is finite and the schedule is eventually
periodic, the tail classification is exact, not heuristic.

All times are fractions.Fraction; equality and ordering are therefore
bit-exact.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import (
    Bits,
    Mask,
    State,
    TruthTable,
    WidthMismatchError,
    apply_masked,
    check_same_width,
    union_states,
)

Time = Fraction


def as_time(value) -> Fraction:
    """Coerce ints/strings/fractions to an exact rational time."""
    return Fraction(value)


@dataclass(frozen=True)
class LassoMaskSequence:
    """The infinite mask sequence prefix . cycle . cycle . ...

    The sequence is progressive (every coordinate selected infinitely often)
    exactly when the union of the cycle masks covers all coordinates; that is
    a derived property here, not a construction requirement.
    """

    prefix: tuple[Mask, ...]
    cycle: tuple[Mask, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        check_same_width(*self.prefix, *self.cycle)

    @classmethod
    def of(cls, prefix: Sequence[Mask], cycle: Sequence[Mask]) -> "LassoMaskSequence":
        return cls(tuple(prefix), tuple(cycle))

    @property
    def width(self) -> int:
        return self.cycle[0].width

    @property
    def is_progressive(self) -> bool:
        return union_states(self.cycle).is_full

    def mask_at(self, k: int) -> Mask:
        """The k-th mask (k >= 0) of the represented infinite sequence."""
        if k < 0:
            raise IndexError("mask index must be >= 0")
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]


def full_update_sequence(width: int) -> LassoMaskSequence:
    """The all-coordinates-every-step schedule's mask sequence."""
    return LassoMaskSequence((), (Bits.full(width),))


@dataclass(frozen=True)
class ProgressiveFunction:
    """A timed progressive mask schedule.

    times lists one instant per prefix mask followed by one per cycle slot;
    cycle slot k then recurs at times[...k] + m*period for every m >= 1.  The
    combined time sequence must be strictly increasing, which pins down the
    constraint first-cycle-time + period > last-cycle-time.  The mask lasso
    must be progressive; a schedule whose cycle never touches some coordinate
    is rejected at construction.
    """

    masks: LassoMaskSequence
    times: tuple[Fraction, ...]
    period: Fraction

    def __post_init__(self):
        expected = len(self.masks.prefix) + len(self.masks.cycle)
        if len(self.times) != expected:
            raise ValueError(
                f"need {expected} times (prefix + one cycle pass), got {len(self.times)}"
            )
        for t in self.times:
            if not isinstance(t, Fraction):
                raise TypeError(f"times must be Fraction, got {type(t).__name__}")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if not isinstance(self.period, Fraction) or self.period <= 0:
            raise ValueError("period must be a positive rational")
        if self.cycle_times[0] + self.period <= self.cycle_times[-1]:
            raise ValueError("period too short: first cycle repeat would not come last")
        if not self.masks.is_progressive:
            raise ValueError("mask cycle is not progressive (some coordinate never fires)")

    @classmethod
    def of(cls, masks: LassoMaskSequence, times, period) -> "ProgressiveFunction":
        return cls(masks, tuple(as_time(t) for t in times), as_time(period))

    @classmethod
    def uniform(cls, masks: LassoMaskSequence, start=0, step=1) -> "ProgressiveFunction":
        """Schedule the k-th mask at start + k*step, cycling every q*step."""
        start, step = as_time(start), as_time(step)
        count = len(masks.prefix) + len(masks.cycle)
        times = tuple(start + k * step for k in range(count))
        return cls(masks, times, step * len(masks.cycle))

    @property
    def width(self) -> int:
        return self.masks.width

    @property
    def prefix_times(self) -> tuple[Fraction, ...]:
        return self.times[: len(self.masks.prefix)]

    @property
    def cycle_times(self) -> tuple[Fraction, ...]:
        return self.times[len(self.masks.prefix):]

    def time_at(self, k: int) -> Fraction:
        """The instant of the k-th mask firing (k >= 0)."""
        if k < 0:
            raise IndexError("event index must be >= 0")
        p = len(self.masks.prefix)
        if k < p:
            return self.times[k]
        m, r = divmod(k - p, len(self.masks.cycle))
        return self.cycle_times[r] + m * self.period

    def mask_at(self, k: int) -> Mask:
        return self.masks.mask_at(k)

    def suffix_after(self, t_prime) -> "ProgressiveFunction":
        """Drop every firing at instants <= t_prime; the rest is again a valid
        progressive schedule (the cycle part is untouched, only shifted)."""
        t_prime = as_time(t_prime)
        new_prefix_masks = []
        new_prefix_times = []
        for t, nu in zip(self.prefix_times, self.masks.prefix):
            if t > t_prime:
                new_prefix_masks.append(nu)
                new_prefix_times.append(t)
        # First full cycle pass strictly after t_prime.
        c0 = self.cycle_times[0]
        m_star = 0
        while c0 + m_star * self.period <= t_prime:
            m_star += 1
        for m in range(m_star):
            for t, nu in zip(self.cycle_times, self.masks.cycle):
                if t + m * self.period > t_prime:
                    new_prefix_masks.append(nu)
                    new_prefix_times.append(t + m * self.period)
        shift = m_star * self.period
        masks = LassoMaskSequence(tuple(new_prefix_masks), self.masks.cycle)
        times = tuple(new_prefix_times) + tuple(t + shift for t in self.cycle_times)
        return ProgressiveFunction(masks, times, self.period)


def canonical_surjection(rho: ProgressiveFunction) -> LassoMaskSequence:
    """The mask sequence of rho with all all-zero masks removed.

    Progressiveness guarantees the cycle keeps at least one mask, so the
    result is a well-formed lasso with no zero masks anywhere.
    """
    prefix = tuple(nu for nu in rho.masks.prefix if not nu.is_zero)
    cycle = tuple(nu for nu in rho.masks.cycle if not nu.is_zero)
    return LassoMaskSequence(prefix, cycle)


def discrete_run(phi: TruthTable, alpha: LassoMaskSequence, mu: State, k: int) -> State:
    """The discrete-time run: mu itself at k = -1, else the fold of the first
    k+1 masks of alpha applied to mu."""
    if not alpha.width == mu.width == phi.width:
        raise WidthMismatchError(
            f"mixed widths: masks {alpha.width}, state {mu.width}, table {phi.width}"
        )
    if k < -1:
        raise ValueError(f"discrete time must be >= -1, got {k}")
    state = mu
    for j in range(k + 1):
        state = apply_masked(phi, alpha.mask_at(j), state)
    return state


@dataclass(frozen=True)
class ConstantTail:
    """After the last breakpoint the signal holds its last value forever."""


@dataclass(frozen=True)
class PeriodicTail:
    """From pattern[0]'s instant on, the signal repeats with the given period.

    pattern lists (absolute start instant, value) segments of one period; the
    j-th segment ends where the next begins, the last at pattern[0] + period.
    At least two distinct values are required; an all-equal pattern would be a
    constant tail and must be encoded as one.
    """

    pattern: tuple[tuple[Fraction, State], ...]
    period: Fraction

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("periodic tail needs a nonempty pattern")
        offsets = [t for t, _ in self.pattern]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("pattern instants must be strictly increasing")
        if self.period <= 0:
            raise ValueError("period must be positive")
        if offsets[0] + self.period <= offsets[-1]:
            raise ValueError("period too short for the pattern span")
        if len({v for _, v in self.pattern}) < 2:
            raise ValueError("periodic tail must visit at least two distinct states")


Tail = Union[ConstantTail, PeriodicTail]


@dataclass(frozen=True)
class Signal:
    """A piecewise-constant function R -> {0,1}^n.

    Value is `initial` before the first breakpoint, then breakpoints[j].value
    on [breakpoints[j].time, next time).  A ConstantTail extends the last
    value to +infinity; a PeriodicTail takes over from its first instant,
    which must lie beyond every breakpoint.
    """

    initial: State
    breakpoints: tuple[tuple[Fraction, State], ...]
    tail: Tail

    def __post_init__(self):
        times = [t for t, _ in self.breakpoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")
        widths = {self.initial.width} | {v.width for _, v in self.breakpoints}
        if isinstance(self.tail, PeriodicTail):
            widths |= {v.width for _, v in self.tail.pattern}
            if times and self.tail.pattern[0][0] <= times[-1]:
                raise ValueError("periodic tail must start after the last breakpoint")
        if len(widths) != 1:
            raise WidthMismatchError("signal mixes widths")

    @property
    def width(self) -> int:
        return self.initial.width

    @classmethod
    def constant(cls, mu: State) -> "Signal":
        return cls(mu, (), ConstantTail())

    def value_at(self, t) -> State:
        return eval_signal(self, t)


def eval_signal(x: Signal, t) -> State:
    """The value x(t), exactly."""
    t = as_time(t)
    if isinstance(x.tail, PeriodicTail):
        start = x.tail.pattern[0][0]
        if t >= start:
            m = (t - start) // x.tail.period
            t_reduced = t - m * x.tail.period
            offsets = [o for o, _ in x.tail.pattern]
            j = bisect_right(offsets, t_reduced) - 1
            return x.tail.pattern[j][1]
    if not x.breakpoints or t < x.breakpoints[0][0]:
        return x.initial
    times = [bt for bt, _ in x.breakpoints]
    return x.breakpoints[bisect_right(times, t) - 1][1]


def final_value(x: Signal) -> Optional[State]:
    """The limit value at +infinity, when it exists (constant tail only)."""
    if isinstance(x.tail, PeriodicTail):
        return None
    if x.breakpoints:
        return x.breakpoints[-1][1]
    return x.initial


def signal_values(x: Signal) -> frozenset[State]:
    """Every value the signal takes over all of R."""
    values = {x.initial} | {v for _, v in x.breakpoints}
    if isinstance(x.tail, PeriodicTail):
        values |= {v for _, v in x.tail.pattern}
    return frozenset(values)


def _simulate(phi: TruthTable, rho: ProgressiveFunction, mu: State):
    """Unroll the run until the (cycle slot, state) pair repeats.

    Returns (events, entry, period_steps): events[k] = (time of step k, state
    after step k); from step `entry` on, the event values repeat every
    `period_steps` steps (with times shifted by a whole number of schedule
    periods).  Termination is guaranteed: there are only q * 2^n distinct
    (slot, state) pairs.
    """
    p = len(rho.masks.prefix)
    q = len(rho.masks.cycle)
    events: list[tuple[Fraction, State]] = []
    state = mu
    for k in range(p):
        state = apply_masked(phi, rho.mask_at(k), state)
        events.append((rho.time_at(k), state))
    seen: dict[tuple[int, State], int] = {}
    k = p
    while True:
        slot = (k - p) % q
        key = (slot, state)
        if key in seen:
            return events, seen[key], k - seen[key]
        seen[key] = k
        state = apply_masked(phi, rho.mask_at(k), state)
        events.append((rho.time_at(k), state))
        k += 1


def continuous_run(phi: TruthTable, rho: ProgressiveFunction, mu: State) -> Signal:
    """The run of phi from mu under the schedule rho, as an exact signal.

    The value is mu before the first firing and the fold of the first k+1
    masks on [t_k, t_{k+1}).  The tail is constant exactly when the state
    stops changing inside the detected recurrence, else periodic with period
    a whole multiple of rho's schedule period.
    """
    if not phi.width == rho.width == mu.width:
        raise WidthMismatchError(
            f"mixed widths: table {phi.width}, schedule {rho.width}, state {mu.width}"
        )
    events, entry, period_steps = _simulate(phi, rho, mu)
    block_values = {events[k][1] for k in range(entry, entry + period_steps)}
    if len(block_values) == 1:
        breakpoints = list(events[: entry + 1])
        # Trim no-op steps at the end: they do not change the function.
        while breakpoints:
            prev = breakpoints[-2][1] if len(breakpoints) >= 2 else mu
            if breakpoints[-1][1] == prev:
                breakpoints.pop()
            else:
                break
        return Signal(mu, tuple(breakpoints), ConstantTail())
    pattern = tuple(events[k] for k in range(entry, entry + period_steps))
    period = rho.time_at(entry + period_steps) - rho.time_at(entry)
    return Signal(mu, tuple(events[:entry]), PeriodicTail(pattern, period))


def _merged_cyclic_segments(tail: PeriodicTail) -> list[tuple[State, Fraction]]:
    """One period of the tail as (value, duration) segments with equal
    neighbours merged cyclically, so consecutive segments always differ."""
    offsets = [o for o, _ in tail.pattern]
    values = [v for _, v in tail.pattern]
    durations = []
    for j in range(len(offsets)):
        end = offsets[j + 1] if j + 1 < len(offsets) else offsets[0] + tail.period
        durations.append(end - offsets[j])
    segments: list[tuple[State, Fraction]] = []
    for v, d in zip(values, durations):
        if segments and segments[-1][0] == v:
            segments[-1] = (v, segments[-1][1] + d)
        else:
            segments.append((v, d))
    # Cyclic wrap: last and first may still agree.
    if len(segments) > 1 and segments[0][0] == segments[-1][0]:
        v, d = segments.pop()
        segments[0] = (v, segments[0][1] + d)
    return segments


def detect_period(x: Signal) -> Optional[tuple[Fraction, Fraction]]:
    """Minimal tail period T0 and the earliest breakpoint-aligned witness t'
    with x(t) = x(t + T0) for all t >= t'; None when the limit exists.

    Minimality scans rotations of the merged one-period segment word over the
    divisors of its length; any period of a step function must map segment
    boundaries to segment boundaries, so the scan is complete.
    """
    if not isinstance(x.tail, PeriodicTail):
        return None
    segments = _merged_cyclic_segments(x.tail)
    s = len(segments)
    t_min = x.tail.period
    for r in range(1, s):
        if s % r != 0:
            continue
        if all(segments[j] == segments[(j + r) % s] for j in range(s)):
            t_min = sum((d for _, d in segments[:r]), Fraction(0))
            break
    anchor = x.tail.pattern[0][0]
    witness = anchor
    for u, _ in reversed(x.breakpoints):
        if _periodic_from(x, u, t_min, anchor):
            witness = u
        else:
            break
    return t_min, witness


def _periodic_from(x: Signal, u: Fraction, t0: Fraction, anchor: Fraction) -> bool:
    """Check x(t) = x(t + t0) for all t in [u, anchor); beyond the anchor the
    shift is a period by construction."""
    probes = {u}
    for t, _ in x.breakpoints:
        if u <= t < anchor:
            probes.add(t)
        if u <= t - t0 < anchor:
            probes.add(t - t0)
    # Boundaries of the shifted side also fall at tail instants minus t0.
    span = anchor - u + x.tail.period + t0
    reps = int(span // x.tail.period) + 2
    for m in range(reps):
        for o, _ in x.tail.pattern:
            t = o + m * x.tail.period - t0
            if u <= t < anchor:
                probes.add(t)
    return all(eval_signal(x, t) == eval_signal(x, t + t0) for t in sorted(probes))


def run_values(phi: TruthTable, rho: ProgressiveFunction, mu: State, count: int) -> list[State]:
    """The first `count` step values of the run (value on [t_k, t_{k+1}) for
    k = 0..count-1), computed by plain folding, independent of Signal."""
    out = []
    state = mu
    for k in range(count):
        state = apply_masked(phi, rho.mask_at(k), state)
        out.append(state)
    return out


def runs_agree(phi: TruthTable, rho: ProgressiveFunction, mu: State) -> bool:
    """Cross-check the signal construction against direct discrete folding.

    Compares the signal's value at every firing instant (and one instant
    before the first) with the discrete-time run over the same masks, through
    the whole pre-periodic part plus two extra tail periods.  Always true;
    exists as a self-test of the two independent code paths.
    """
    x = continuous_run(phi, rho, mu)
    _, entry, period_steps = _simulate(phi, rho, mu)
    horizon = entry + 2 * period_steps + 2
    if eval_signal(x, rho.time_at(0) - 1) != discrete_run(phi, rho.masks, mu, -1):
        return False
    for k in range(horizon):
        if eval_signal(x, rho.time_at(k)) != discrete_run(phi, rho.masks, mu, k):
            return False
    return True
