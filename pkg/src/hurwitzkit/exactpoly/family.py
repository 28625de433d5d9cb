"""Family files: exact covers ``p(X) - t q(X)`` depending on a rational parameter,
with a manifest of expected properties that :func:`verify_family` checks.

Format (one statement per line, ``#`` starts a comment)::

    family <name>
    param alpha = <rational>          default specialization
    let <name> = <expression>         helper polynomial in X and alpha
    p = <expression>
    q = <expression>
    expect <check> <arguments>

Expressions use ``+ - * / ^`` and parentheses; juxtaposition multiplies
(``33/2X^5``).  Division is only by nonzero constants.

Checks: ``degree n``, ``branch_points k``, ``profiles ct, ct, ...``,
``subcover_degrees d, d, ...``, ``disc_square true|false`` (over Q(t)),
``disc_square_mod true|false`` (over GF(prime)(t)), ``sturm <t0> <count>``,
``irreducible_at <t0>`` and ``frobenius_types <group-file> <samples>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..permgroup import CycleType, PermGroup, read_group_file
from .fields import is_prime, primes_below
from .poly import Poly, PolyError
from . import ramification as ram
from . import fp


class FamilyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FamilyError(f"unexpected character {text[pos]!r} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, env: dict[str, Poly]):
        self.toks = _tokenize(text)
        self.i = 0
        self.env = env
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.toks:
            raise FamilyError("empty expression")
        v = self.sum()
        if self.i != len(self.toks):
            raise FamilyError(f"trailing input in {self.text!r}")
        return v

    def sum(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        v = self.product()
        if sign < 0:
            v = -v
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                w = self.product()
                v = v + w if val == "+" else v - w
            else:
                return v

    def product(self) -> Poly:
        v = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                v = v * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if d.deg != 0:
                    raise FamilyError(f"division by a non-constant in {self.text!r}")
                v = v.scale(1 / Fraction(d.lc))
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                v = v * self.power()
            else:
                return v

    def power(self) -> Poly:
        v = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                raise FamilyError(f"exponent must be a non-negative integer in {self.text!r}")
            v = v ** e
        return v

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly.const(val)
        if kind == "name":
            if val not in self.env:
                raise FamilyError(f"unknown name {val!r}")
            return self.env[val]
        if kind == "op" and val == "(":
            v = self.sum()
            if self.take() != ("op", ")"):
                raise FamilyError(f"missing ')' in {self.text!r}")
            return v
        raise FamilyError(f"unexpected token {val!r} in {self.text!r}")


def parse_expression(text: str, env: dict[str, Poly] | None = None) -> Poly:
    """Evaluate a polynomial expression in ``X`` over the rationals."""
    base = {"X": Poly.x()}
    base.update(env or {})
    return _Parser(text, base).parse()


# ---------------------------------------------------------------------------
# single-polynomial files

def read_poly_text(text: str) -> Poly:
    """``term <coeff> <exp>`` lines or one ``coeffs c0 c1 ...`` line."""
    terms: dict[int, Fraction] = {}
    dense = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "term" and len(parts) == 3:
                k = int(parts[2])
                if k < 0:
                    raise ValueError
                terms[k] = terms.get(k, Fraction(0)) + Fraction(parts[1])
            elif parts[0] == "coeffs" and len(parts) > 1 and dense is None:
                dense = [Fraction(c) for c in parts[1:]]
            elif parts[0] == "param":
                continue
            else:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise FamilyError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    if dense is not None and terms:
        raise FamilyError("mixing 'term' and 'coeffs' lines")
    if dense is not None:
        return Poly(dense)
    if not terms:
        raise FamilyError("no polynomial data")
    return Poly([terms.get(k, 0) for k in range(max(terms) + 1)])


def format_poly_terms(f: Poly) -> str:
    return "\n".join(f"term {c} {k}" for k, c in enumerate(f.c) if c) + "\n"


# ---------------------------------------------------------------------------
# family files

@dataclass
class Expectation:
    check: str
    args: str
    lineno: int


@dataclass
class Family:
    name: str
    alpha: Fraction | None
    lets: list[tuple[str, str]]
    p_expr: str
    q_expr: str
    expectations: list[Expectation]
    path: Path | None = None
    lines: dict[str, int] = field(default_factory=dict)     # 'p', 'q' or a let name -> line

    def _where(self, key: str) -> str:
        n = self.lines.get(key)
        if n is None:
            return str(self.path or "<family>")
        return f"{self.path or '<family>'}:{n}"

    def instantiate(self, alpha=None) -> tuple[Poly, Poly]:
        a = self.alpha if alpha is None else Fraction(alpha)
        env: dict[str, Poly] = {}
        if a is not None:
            env["alpha"] = Poly.const(a)
        for name, expr in self.lets + [("p", self.p_expr), ("q", self.q_expr)]:
            try:
                env[name] = parse_expression(expr, env)
            except (PolyError, FamilyError, ZeroDivisionError) as exc:
                raise FamilyError(f"{self._where(name)}: {exc}") from None
        return env["p"], env["q"]


_CHECKS = ("degree", "branch_points", "profiles", "subcover_degrees", "disc_square",
           "disc_square_mod", "sturm", "irreducible_at", "frobenius_types")


def parse_family(text: str, path: Path | None = None) -> Family:
    name, alpha, lets, p, q, exps = None, None, [], None, None, []
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("family "):
                name = line.split(None, 1)[1].strip()
            elif line.startswith("param "):
                m = re.fullmatch(r"param\s+alpha\s*=\s*(\S+)", line)
                if not m:
                    raise FamilyError("expected 'param alpha = <rational>'")
                alpha = Fraction(m.group(1))
            elif line.startswith("let "):
                m = re.fullmatch(r"let\s+([A-Za-z_]\w*)\s*=\s*(.+)", line)
                if not m or m.group(1) in ("X", "alpha"):
                    raise FamilyError("expected 'let <name> = <expression>'")
                lets.append((m.group(1), m.group(2)))
                where[m.group(1)] = lineno
            elif re.match(r"p\s*=", line):
                p = line.split("=", 1)[1].strip()
                where["p"] = lineno
            elif re.match(r"q\s*=", line):
                q = line.split("=", 1)[1].strip()
                where["q"] = lineno
            elif line.startswith("expect "):
                parts = line.split(None, 2)
                if len(parts) < 3 or parts[1] not in _CHECKS:
                    raise FamilyError(f"unknown expectation {line!r}")
                exps.append(Expectation(parts[1], parts[2].strip(), lineno))
            else:
                raise FamilyError(f"unrecognized statement {line!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise FamilyError(f"{path or '<family>'}:{lineno}: {exc}") from None
    if p is None or q is None:
        raise FamilyError("family file needs both 'p =' and 'q =' lines")
    fam = Family(name or (path.stem if path else "family"), alpha, lets, p, q, exps, path, where)
    if alpha is not None:
        fam.instantiate()       # surface expression errors with their line now
    return fam


def read_family(path) -> Family:
    path = Path(path)
    return parse_family(path.read_text(encoding="utf-8"), path)


# ---------------------------------------------------------------------------
# verification

@dataclass
class CheckResult:
    check: str
    expected: str
    observed: str
    passed: bool


@dataclass
class FamilyReport:
    family: str
    alpha: Fraction | None
    prime: int
    degree: int
    profiles: list[ram.RamificationProfile] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t not in ("true", "false"):
        raise FamilyError(f"expected true/false, got {text!r}")
    return t == "true"


def _types(text: str) -> list[CycleType]:
    return [CycleType.parse(s) for s in text.split(",") if s.strip()]


def _multiset(types) -> list[str]:
    return sorted(str(t) for t in types)


def irreducibility_evidence(f: Poly, primes: int = 12, start: int = 1 << 16) -> tuple[bool, list[int]]:
    """Prove irreducibility over Q from factor patterns modulo several primes.

    Returns ``(proved, primes_used)``; ``proved`` is True when no proper
    factor degree is compatible with every pattern.
    """
    n = f.deg
    used, patterns = [], []
    for pr in primes_below(start):
        if len(used) >= primes:
            break
        try:
            g = ram.reduce_mod(f, pr)
        except ram.CoverError:
            continue
        if len(g) - 1 != n or len(fp.gcd(g, fp.deriv(g, pr), pr)) > 1:
            continue
        used.append(pr)
        patterns.append(fp.factor_degrees(g, pr))
        if not ram.possible_factor_degree_sums(patterns, n):
            return True, used
    return False, used


def group_cycle_types(group: PermGroup) -> set[str]:
    return {str(c.representative.cycle_type()) for c in group.conjugacy_classes()}


def verify_family(fam: Family, alpha=None, prime: int = 31, seed: int = 0,
                  base_dir: Path | None = None) -> FamilyReport:
    if not is_prime(prime):
        raise FamilyError(f"{prime} is not prime")
    a = fam.alpha if alpha is None else Fraction(alpha)
    p, q = fam.instantiate(a)
    ram.check_cover(p, q)
    n = ram.cover_degree(p, q)
    rep = FamilyReport(fam.name, a, prime, n)
    base_dir = base_dir or (fam.path.parent if fam.path else Path.cwd())
    cache: dict[str, object] = {}

    def disc():
        if "disc" not in cache:
            cache["disc"] = ram.discriminant_in_t(p, q)
        return cache["disc"]

    def profiles():
        if "prof" not in cache:
            cache["prof"] = ram.branch_profiles(p, q, disc())
            rep.profiles = cache["prof"]
        return cache["prof"]

    def add(check, expected, observed, ok):
        rep.checks.append(CheckResult(check, str(expected), str(observed), bool(ok)))

    for e in fam.expectations:
        c, args = e.check, e.args
        if c == "degree":
            add(c, int(args), n, int(args) == n)
        elif c == "branch_points":
            k = ram.branch_point_count(profiles())
            add(c, int(args), k, int(args) == k)
        elif c == "profiles":
            want = _multiset(_types(args))
            got = _multiset(ram.expand_profiles(profiles()))
            add(c, ", ".join(want), ", ".join(got), want == got)
        elif c == "subcover_degrees":
            want = sorted((int(x) for x in args.split(",")), reverse=True)
            res = _subcover(p, q, prime, seed)
            add(c, want, res, res == want)
        elif c == "disc_square":
            want = _bool(args)
            got = ram.is_square_in_function_field(disc())
            add(c, want, got, want == got)
        elif c == "disc_square_mod":
            want = _bool(args)
            pm, qm = p.map(_field(prime)), q.map(_field(prime))
            got = ram.is_square_in_function_field(ram.discriminant_in_t(pm, qm))
            add(f"{c} {prime}", want, got, want == got)
        elif c == "sturm":
            t0, count = args.split()
            got = ram.sturm_count(p - q.scale(Fraction(t0)))
            add(f"sturm t={t0}", int(count), got, got == int(count))
        elif c == "irreducible_at":
            t0 = Fraction(args)
            ok, used = irreducibility_evidence(p - q.scale(t0))
            add(f"irreducible t={t0}", True, f"{ok} (primes {used[0]}..{used[-1]})" if used else ok, ok)
        elif c == "frobenius_types":
            gfile, samples = args.split()
            G = read_group_file(base_dir / gfile)
            allowed = group_cycle_types(G)
            got = ram.dedekind_cycle_samples(p, q, prime, range(1, int(samples) + 1))
            bad = sorted({str(s.cycle_type) for s in got if s.cycle_type and str(s.cycle_type) not in allowed})
            used = sum(1 for s in got if s.cycle_type)
            add(f"frobenius mod {prime}", "all sampled types in group",
                f"{used} samples, {len(bad)} foreign types" + (f": {bad}" if bad else ""), not bad)
    return rep


def _field(prime):
    from .fields import PrimeField
    return PrimeField(prime)


def _subcover(p: Poly, q: Poly, prime: int, seed: int) -> list[int]:
    from .bivariate import subcover_factor_degrees
    primes = [prime] + [x for x in (101, 1009, 10007) if x != prime]
    return subcover_factor_degrees(p, q, primes=primes[:3], seed=seed).degrees
