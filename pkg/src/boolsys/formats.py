"""Text formats for tables, bijections, schedules, families and witnesses.

All bit strings are written coordinate 1 first, and rows are rendered in
increasing integer encoding (coordinate 1 is the least significant bit).
Rationals are written as `p/q` or plain integers.  Parsers accept blank lines
and `#` comments, report positions, and attach a stable diagnostic code to
every failure so callers can branch without string matching.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .core import MAX_WIDTH, Bits, TruthTable
from .omega import StateBijection
from .runs import LassoMaskSequence, ProgressiveFunction
from .bifurcation import ParamFamily
from .conjugacy import ConjugacyWitness

# Diagnostic codes
SYNTAX = "syntax"
DUPLICATE_ROW = "duplicate-row"
MISSING_ROW = "missing-row"
WIDTH_MISMATCH = "width-mismatch"
NOT_BIJECTIVE = "not-bijective"
NON_INCREASING_TIMES = "non-increasing-times"
NON_PROGRESSIVE_CYCLE = "non-progressive-cycle"
BAD_COUNT = "bad-count"
BAD_VALUE = "bad-value"


class ParseError(ValueError):
    """A diagnostic with position and a stable code."""

    def __init__(self, message: str, code: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message} [{code}]")
        self.message = message
        self.code = code
        self.line = line
        self.column = column


def _content_lines(text: str):
    """(line_number, stripped_content) for non-blank, non-comment lines."""
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield number, stripped


def _parse_bits(token: str, line: int, column: int, width: Optional[int]) -> Bits:
    if not token or any(c not in "01" for c in token):
        raise ParseError(f"expected a bit string, got {token!r}", SYNTAX, line, column)
    if width is not None and len(token) != width:
        raise ParseError(
            f"bit string {token!r} has width {len(token)}, expected {width}",
            WIDTH_MISMATCH, line, column)
    if len(token) > MAX_WIDTH:
        raise ParseError(f"width {len(token)} exceeds the cap of {MAX_WIDTH}",
                         BAD_VALUE, line, column)
    return Bits.from_string(token)


def _parse_header(line_no: int, content: str, key: str) -> int:
    if not content.startswith(f"{key}="):
        raise ParseError(f"expected `{key}=<width>` header", SYNTAX, line_no)
    try:
        width = int(content[len(key) + 1:])
    except ValueError:
        raise ParseError(f"bad width {content[len(key) + 1:]!r}", SYNTAX, line_no,
                         len(key) + 2) from None
    if width < 1:
        raise ParseError(f"width must be positive, got {width}", BAD_VALUE, line_no)
    if width > MAX_WIDTH:
        raise ParseError(f"width {width} exceeds the cap of {MAX_WIDTH}",
                         BAD_VALUE, line_no)
    return width


def _parse_mapping_rows(lines, width: int, what: str) -> list[Optional[Bits]]:
    """Shared reader for `<bits> -> <bits>` blocks; checks duplicates and
    completeness."""
    rows: list[Optional[Bits]] = [None] * (1 << width)
    last_line = 0
    for line_no, content in lines:
        last_line = line_no
        if "->" not in content:
            raise ParseError("expected `<bits> -> <bits>` row", SYNTAX, line_no)
        left, _, right = content.partition("->")
        key = _parse_bits(left.strip(), line_no, 1, width)
        out = _parse_bits(right.strip(), line_no, content.index("->") + 3, width)
        if rows[key.value] is not None:
            raise ParseError(f"duplicate input {key.to01()}", DUPLICATE_ROW, line_no)
        rows[key.value] = out
    for value, out in enumerate(rows):
        if out is None:
            raise ParseError(
                f"missing input {Bits(width, value).to01()} in {what}",
                MISSING_ROW, last_line + 1)
    return rows


def parse_truth_table(text: str) -> TruthTable:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", SYNTAX, 1)
    width = _parse_header(*lines[0], key="n")
    rows = _parse_mapping_rows(lines[1:], width, "truth table")
    return TruthTable(width, tuple(rows))


def render_truth_table(phi: TruthTable) -> str:
    lines = [f"n={phi.width}"]
    for value, out in enumerate(phi.outputs):
        lines.append(f"{Bits(phi.width, value).to01()} -> {out.to01()}")
    return "\n".join(lines) + "\n"


def parse_bijection(text: str) -> StateBijection:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", SYNTAX, 1)
    width = _parse_header(*lines[0], key="n")
    rows = _parse_mapping_rows(lines[1:], width, "bijection")
    values = sorted(row.value for row in rows)
    if values != list(range(1 << width)):
        raise ParseError("outputs do not form a permutation", NOT_BIJECTIVE,
                         lines[-1][0])
    return StateBijection(width, tuple(rows))


def render_bijection(h: StateBijection) -> str:
    lines = [f"n={h.width}"]
    for value, out in enumerate(h.forward):
        lines.append(f"{Bits(h.width, value).to01()} -> {out.to01()}")
    return "\n".join(lines) + "\n"


def _parse_rational(token: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {token!r}", BAD_VALUE, line) from None


def _split_csv(raw: str) -> list[str]:
    raw = raw.strip()
    if not raw:
        return []
    return [tok.strip() for tok in raw.split(",")]


def parse_rho(text: str) -> ProgressiveFunction:
    """Format: `times: t0,t1,...; prefix: <mask>,...; cycle: <mask>,...;
    period: T` (separators may be `;` or newlines; prefix may be empty)."""
    fields: dict[str, tuple[str, int]] = {}
    for line_no, content in _content_lines(text):
        for chunk in content.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            key, sep, value = chunk.partition(":")
            if not sep:
                raise ParseError(f"expected `key: value`, got {chunk!r}", SYNTAX, line_no)
            key = key.strip()
            if key not in ("times", "prefix", "cycle", "period"):
                raise ParseError(f"unknown field {key!r}", SYNTAX, line_no)
            if key in fields:
                raise ParseError(f"duplicate field {key!r}", DUPLICATE_ROW, line_no)
            fields[key] = (value.strip(), line_no)
    for required in ("times", "cycle", "period"):
        if required not in fields:
            raise ParseError(f"missing field {required!r}", MISSING_ROW, 1)
    times_raw, times_line = fields["times"]
    times = tuple(_parse_rational(tok, times_line) for tok in _split_csv(times_raw))
    prefix_raw, prefix_line = fields.get("prefix", ("", 1))
    prefix = tuple(_parse_bits(tok, prefix_line, 1, None) for tok in _split_csv(prefix_raw))
    cycle_raw, cycle_line = fields["cycle"]
    cycle = tuple(_parse_bits(tok, cycle_line, 1, None) for tok in _split_csv(cycle_raw))
    if not cycle:
        raise ParseError("cycle must be nonempty", BAD_COUNT, cycle_line)
    widths = {m.width for m in prefix} | {m.width for m in cycle}
    if len(widths) != 1:
        raise ParseError("masks mix widths", WIDTH_MISMATCH, cycle_line)
    period_raw, period_line = fields["period"]
    period = _parse_rational(period_raw, period_line)
    if len(times) != len(prefix) + len(cycle):
        raise ParseError(
            f"{len(times)} times for {len(prefix)} prefix + {len(cycle)} cycle masks",
            BAD_COUNT, times_line)
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ParseError("times must be strictly increasing", NON_INCREASING_TIMES,
                         times_line)
    masks = LassoMaskSequence(prefix, cycle)
    if not masks.is_progressive:
        raise ParseError("cycle not progressive: some coordinate never fires",
                         NON_PROGRESSIVE_CYCLE, cycle_line)
    try:
        return ProgressiveFunction(masks, times, period)
    except ValueError as exc:
        raise ParseError(str(exc), BAD_VALUE, period_line) from None


def render_rho(rho: ProgressiveFunction) -> str:
    times = ",".join(str(t) for t in rho.times)
    prefix = ",".join(m.to01() for m in rho.masks.prefix)
    cycle = ",".join(m.to01() for m in rho.masks.cycle)
    return f"times: {times}; prefix: {prefix}; cycle: {cycle}; period: {rho.period}\n"


def parse_family(text: str) -> ParamFamily:
    """Format: `n=<state width> m=<param width>` then one `lambda=<bits>`
    block per parameter, each followed by 2^n truth-table rows."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", SYNTAX, 1)
    header_line, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("expected header `n=<width> m=<width>`", SYNTAX, header_line)
    n = _parse_header(header_line, parts[0], key="n")
    m = _parse_header(header_line, parts[1], key="m")
    blocks: list[Optional[list]] = [None] * (1 << m)
    current: Optional[int] = None
    current_rows: list = []

    def close_block():
        if current is None:
            return
        rows = _parse_mapping_rows(current_rows, n, f"lambda={Bits(m, current).to01()}")
        blocks[current] = rows

    for line_no, content in lines[1:]:
        if content.startswith("lambda="):
            close_block()
            lam = _parse_bits(content[len("lambda="):].strip(), line_no, 8, m)
            if blocks[lam.value] is not None:
                raise ParseError(f"duplicate lambda {lam.to01()}", DUPLICATE_ROW, line_no)
            current = lam.value
            current_rows = []
        else:
            if current is None:
                raise ParseError("rows before any `lambda=` block", SYNTAX, line_no)
            current_rows.append((line_no, content))
    close_block()
    for value, rows in enumerate(blocks):
        if rows is None:
            raise ParseError(f"missing lambda {Bits(m, value).to01()}", MISSING_ROW,
                             lines[-1][0] + 1)
    tables = tuple(TruthTable(n, tuple(rows)) for rows in blocks)
    return ParamFamily(n, m, tables)


def render_family(family: ParamFamily) -> str:
    lines = [f"n={family.state_width} m={family.param_width}"]
    for lam in family.lambdas():
        lines.append(f"lambda={lam.to01()}")
        table = family.member(lam)
        for value, out in enumerate(table.outputs):
            lines.append(f"{Bits(family.state_width, value).to01()} -> {out.to01()}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> ConjugacyWitness:
    """Two bijection blocks introduced by `h:` and `h':` markers."""
    h_lines: list[str] = []
    h_prime_lines: list[str] = []
    bucket: Optional[list[str]] = None
    saw_h = saw_h_prime = False
    for line_no, content in _content_lines(text):
        if content == "h:":
            bucket, saw_h = h_lines, True
        elif content == "h':":
            bucket, saw_h_prime = h_prime_lines, True
        elif bucket is None:
            raise ParseError("expected `h:` block first", SYNTAX, line_no)
        else:
            bucket.append(content)
    if not saw_h or not saw_h_prime:
        raise ParseError("witness needs both `h:` and `h':` blocks", MISSING_ROW, 1)
    h = parse_bijection("\n".join(h_lines))
    h_prime = parse_bijection("\n".join(h_prime_lines))
    try:
        return ConjugacyWitness(h, h_prime)
    except ValueError as exc:
        raise ParseError(str(exc), BAD_VALUE, 1) from None


def render_witness(w: ConjugacyWitness) -> str:
    return "h:\n" + render_bijection(w.h) + "h':\n" + render_bijection(w.h_prime)
