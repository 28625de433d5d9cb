"""Command-line entry point.

Every report is plain text: a header, the effective configuration, a
timestamp line, the command's findings, then a ``KEY=VALUE`` trailer.
Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import config
from .exactpoly.fields import is_prime

DATA_DIR = Path(__file__).with_name("data")
ENV_PREFIX = "HURWITZKIT_"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration

@dataclass
class JobConfig:
    command: str
    inputs: list[str]
    prime: int = config.DEFAULT_PRIME
    alpha: Fraction | None = None
    precision_bits: int | None = None
    seed: int = 0
    budget_elements: int = config.CLASS_CAP
    threads: int = 1
    out: str | None = None

    def validate(self):
        if not (3 <= self.prime < 1 << 20) or not is_prime(self.prime):
            raise UsageError(f"--prime must be an odd prime below 2^20 (got {self.prime})")
        if self.precision_bits is not None and not 53 <= self.precision_bits <= 4096:
            raise UsageError(f"--precision-bits must lie in [53, 4096] (got {self.precision_bits})")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        if self.budget_elements < 1:
            raise UsageError("--budget-elements must be positive")
        if not 1 <= self.threads <= 256:
            raise UsageError("--threads must lie in [1, 256]")

    def echo(self) -> list[str]:
        d = asdict(self)
        d["inputs"] = " ".join(self.inputs)
        d["alpha"] = "default" if self.alpha is None else str(self.alpha)
        d["precision_bits"] = "default" if self.precision_bits is None else d["precision_bits"]
        d["out"] = d["out"] or "-"
        return [f"config.{k} = {v}" for k, v in d.items()]


_FLAG_TYPES: dict[str, Callable] = {
    "prime": int, "alpha": Fraction, "precision_bits": int, "seed": int,
    "budget_elements": int, "threads": int, "out": str,
}


def _apply_env(args: argparse.Namespace):
    for name, conv in _FLAG_TYPES.items():
        if getattr(args, name, None) is None:
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                try:
                    setattr(args, name, conv(raw))
                except (ValueError, ZeroDivisionError):
                    raise UsageError(f"environment {ENV_PREFIX + name.upper()}={raw!r} is not valid") from None


def _job(args, command: str, inputs: list[str]) -> JobConfig:
    _apply_env(args)
    kw = {k: getattr(args, k) for k in _FLAG_TYPES if getattr(args, k, None) is not None}
    job = JobConfig(command, inputs, **kw)
    job.validate()
    return job


def resolve(path: str) -> Path:
    """A path as given, or else the bundled data file of that name."""
    p = Path(path)
    if p.exists():
        return p
    q = DATA_DIR / path
    if q.exists():
        return q
    raise UsageError(f"no such file: {path}")


# ---------------------------------------------------------------------------
# reports

@dataclass
class Report:
    job: JobConfig
    lines: list[str] = field(default_factory=list)
    trailer: dict[str, str] = field(default_factory=dict)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    started: float = field(default_factory=time.monotonic)

    def say(self, text: str = ""):
        self.lines.extend(text.splitlines() or [""])

    def check(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok)))
        self.say(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def render(self) -> str:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        elapsed = time.monotonic() - self.started
        out = [f"hurwitzkit {self.job.command}"]
        out.extend(self.job.echo())
        out.append(f"timestamp: {stamp} elapsed {elapsed:.2f}s")
        out.append("")
        out.extend(self.lines)
        out.append("")
        tr = dict(self.trailer)
        tr["CHECKS"] = str(len(self.checks))
        tr["FAILED"] = str(sum(1 for _, ok in self.checks if not ok))
        tr["STATUS"] = "PASS" if self.passed else "FAIL"
        out.extend(f"{k}={v}" for k, v in tr.items())
        return "\n".join(out) + "\n"


def _emit(rep: Report, extra: tuple[str, str] | None = None) -> int:
    """Print the report; ``extra`` is (path, text) written alongside when --out is set."""
    text = rep.render()
    sys.stdout.write(text)
    if rep.job.out and extra is not None:
        Path(rep.job.out).write_text(extra[1], encoding="utf-8")
    elif rep.job.out:
        Path(rep.job.out).write_text(text, encoding="utf-8")
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# commands

def cmd_nielsen_enum(args) -> int:
    from .nielsen import enumerate_straight_nielsen, format_tuples, is_rational_class, read_type_file

    job = _job(args, "nielsen enum", [args.type_file])
    T = read_type_file(resolve(args.type_file))
    rep = Report(job)
    res = enumerate_straight_nielsen(T, class_cap=job.budget_elements)
    rational = [is_rational_class(T.group, r) for r in T.representatives]
    rep.say(f"group degree {T.group.degree}, order {T.group.order()}")
    rep.say("classes: " + ", ".join(str(d) for d in T.classes))
    rep.say(f"{res.count} inner classes ({res.straight_count} straight tuples, {res.candidates} candidates examined)")
    rep.say("rational classes: " + ", ".join(str(x).lower() for x in rational))
    for k, t in enumerate(res.representatives[: args.show], 1):
        rep.say(f"representative {k}: " + " ".join(str(e) for e in t.entries))
    if args.expect is not None:
        rep.check("inner class count", res.count == args.expect, f"expected {args.expect}, found {res.count}")
    rep.trailer.update(INNER_CLASSES=str(res.count), STRAIGHT_TUPLES=str(res.straight_count),
                       RIGID=str(res.count == 1).lower(), RATIONAL=str(all(rational)).lower())
    return _emit(rep, (job.out, format_tuples(res.representatives, f"{res.count} inner classes")) if job.out else None)


def cmd_braid_orbit(args) -> int:
    from .nielsen import (braid_orbits, enumerate_straight_nielsen, genus_from_cycle_types,
                          hurwitz_curve_braid_types, read_tuples, read_type_file, NielsenResult, braid_orbit)

    job = _job(args, "braid orbit", [args.type_file] + ([args.tuples] if args.tuples else []))
    T = read_type_file(resolve(args.type_file))
    rep = Report(job)
    if args.tuples:
        seeds = read_tuples(resolve(args.tuples))
        orbits = []
        for t in seeds:
            if any(o.index.lookup(t.key()) >= 0 for o in orbits):
                continue
            orbits.append(braid_orbit(T, t))
    else:
        res = enumerate_straight_nielsen(T, class_cap=job.budget_elements)
        orbits = braid_orbits(res)
    sizes = [len(o) for o in orbits]
    rep.say(f"{len(orbits)} braid orbit(s) of sizes {', '.join(map(str, sizes))}")
    words = args.words if args.words is not None else (list(config.HURWITZ_CURVE_WORDS) if T.r == 4 else [])
    trailer_types = []
    for k, orb in enumerate(orbits, 1):
        if not words:
            continue
        types = hurwitz_curve_braid_types(orb, words)
        for w, ct in zip(words, types):
            rep.say(f"orbit {k} word {w}: {ct}")
        trailer_types.append(";".join(str(c) for c in types))
        if args.words is None:
            g = genus_from_cycle_types(len(orb), types)
            rep.say(f"orbit {k} genus {g}")
            rep.trailer[f"GENUS_{k}"] = str(g)
    if args.expect_orbits is not None:
        rep.check("orbit count", len(orbits) == args.expect_orbits, f"expected {args.expect_orbits}, found {len(orbits)}")
    rep.trailer.update(ORBITS=str(len(orbits)), ORBIT_SIZES=",".join(map(str, sizes)))
    if trailer_types:
        rep.trailer["WORD_TYPES"] = "|".join(trailer_types)
    return _emit(rep)


def cmd_verify_family(args) -> int:
    from .exactpoly.family import read_family, verify_family

    job = _job(args, "verify family", [args.family_file])
    fam = read_family(resolve(args.family_file))
    rep = Report(job)
    res = verify_family(fam, alpha=job.alpha, prime=job.prime, seed=job.seed)
    rep.say(f"family {res.family} at alpha = {res.alpha}, degree {res.degree}")
    for pr in res.profiles:
        rep.say("  " + pr.describe())
    for c in res.checks:
        detail = f"expected {c.expected}" + ("" if c.passed else f"; observed {c.observed}")
        if c.passed and c.observed != c.expected:
            detail += f" (observed {c.observed})"
        rep.check(c.check, c.passed, detail)
    rep.trailer.update(FAMILY=res.family, DEGREE=str(res.degree))
    return _emit(rep)


def _cover_input(path: Path, job: JobConfig):
    """``(p, q, branch points, bits)`` from a cover file or a family file."""
    from .numcover.cover import numeric_branch_data
    from .numcover.io import read_cover
    from .numcover.scalars import precision, scalar

    if path.suffix == ".fam":
        from .exactpoly.family import read_family

        fam = read_family(path)
        p, q = fam.instantiate(job.alpha)
        bits = job.precision_bits or 128
        data = numeric_branch_data(p, q, bits)
        with precision(bits):
            pc = [scalar(Fraction(c), bits) for c in p.c]
            qc = [scalar(Fraction(c), bits) for c in q.c]
        return pc, qc, [b for b, _ in data], bits
    cf = read_cover(path)
    if not cf.branch_points:
        raise UsageError(f"{path}: no branch_point lines")
    bits = job.precision_bits or cf.bits
    with precision(bits):
        pc = [scalar(c, bits) for c in cf.num.coeffs]
        qc = [scalar(c, bits) for c in cf.den.coeffs]
        bps = [b if isinstance(b, str) else scalar(b, bits) for b in cf.branch_points]
    return pc, qc, bps, bits


def cmd_monodromy(args) -> int:
    from .numcover.io import format_certificate
    from .numcover.monodromy import monodromy
    from .permgroup import PermGroup

    job = _job(args, "monodromy", [args.input])
    p, q, bps, bits = _cover_input(resolve(args.input), job)
    rep = Report(job)
    cert = monodromy(p, q, [b if isinstance(b, str) else complex(b) for b in bps], bits=bits, threads=job.threads)
    order = PermGroup(cert.permutations, cert.degree).order()
    rep.say(format_certificate(cert).rstrip())
    rep.say(f"group order {order}")
    rep.check("product one", cert.product_one)
    rep.check("tracking residual", cert.max_residual < args.tolerance,
              f"{cert.max_residual:.3e} < {args.tolerance:.1e}")
    if args.expect_order is not None:
        rep.check("group order", order == args.expect_order, f"expected {args.expect_order}, found {order}")
    if args.expect_types:
        from .permgroup import CycleType

        want = sorted(str(CycleType.parse(t)) for t in args.expect_types.split(","))
        got = sorted(str(ct) for ct in cert.cycle_types())
        rep.check("cycle types", want == got, f"expected {', '.join(want)}; found {', '.join(got)}")
    rep.trailer.update(DEGREE=str(cert.degree), GROUP_ORDER=str(order), BITS=str(bits),
                       CYCLE_TYPES=",".join(str(c) for c in cert.cycle_types()),
                       PRODUCT_ONE=str(cert.product_one).lower(), MAX_RESIDUAL=f"{cert.max_residual:.3e}")
    return _emit(rep, (job.out, format_certificate(cert)) if job.out else None)


def _parse_target(text: str, bits: int):
    from .numcover.scalars import parse_complex, precision

    with precision(bits):
        return parse_complex(text.replace(",", " "), bits)


def cmd_deform(args) -> int:
    from .numcover.cover import from_polynomials, deform
    from .numcover.io import cover_file_from, format_cover
    from .numcover.monodromy import monodromy

    job = _job(args, "deform", [args.input])
    p, q, bps, bits = _cover_input(resolve(args.input), job)
    bits = job.precision_bits or max(bits, 128)
    rep = Report(job)
    finite = [b for b in bps if not isinstance(b, str)]
    targets = [_parse_target(t, bits) for t in args.targets]
    if len(targets) != len(finite):
        raise UsageError(f"{len(finite)} finite branch points but {len(targets)} targets")
    # ramification shape from the monodromy at the start
    cert = monodromy([complex(x) for x in p], [complex(x) for x in q],
                     [b if isinstance(b, str) else complex(b) for b in bps], threads=job.threads)
    shape = {}
    for lab, perm in zip(cert.branch_points, cert.permutations):
        shape[lab if isinstance(lab, str) else complex(lab)] = perm.cycle_type()
    order = sorted(range(len(finite)), key=lambda i: (complex(finite[i]).real, complex(finite[i]).imag))
    finite = [finite[i] for i in order]
    targets = [targets[i] for i in order]
    pts = finite + ([b for b in bps if isinstance(b, str)] or [])
    types = [shape[b if isinstance(b, str) else complex(b)] for b in pts]
    if not any(isinstance(b, str) for b in pts):
        from .permgroup import CycleType

        pts.append("infinity")
        types.append(CycleType((1,) * cert.degree))
    cover = from_polynomials(p, q, pts, types, bits)
    out, drep = deform(cover, targets, steps=args.steps, bits=bits)
    rep.say(f"start branch points: {', '.join(_fmt_point(b) for b in cover.branch_points)}")
    rep.say(f"end branch points:   {', '.join(_fmt_point(b) for b in out.branch_points)}")
    rep.say(f"continuation steps {drep.steps}, rejected {drep.rejected}")
    rep.say(f"start types {', '.join(drep.start_types)}; end types {', '.join(drep.end_types)}")
    rep.check("monodromy preserved", bool(drep.monodromy_preserved))
    rep.check("residual", out.residual < 2.0 ** (-bits / 2), f"{out.residual:.3e} at {bits} bits")
    rep.trailer.update(BITS=str(bits), STEPS=str(drep.steps), RESIDUAL=f"{out.residual:.3e}",
                       MONODROMY_PRESERVED=str(bool(drep.monodromy_preserved)).lower())
    text = format_cover(cover_file_from(out, [f"deformed from {args.input}"]))
    if not job.out:
        rep.say("")
        rep.say(text.rstrip())
    return _emit(rep, (job.out, text) if job.out else None)


def _fmt_point(b) -> str:
    if isinstance(b, str):
        return "inf"
    z = complex(b)
    return f"{z.real:.10g}{z.imag:+.3g}i"


def cmd_cover_export(args) -> int:
    from .exactpoly.family import read_family
    from .numcover.cover import from_exact
    from .numcover.io import cover_file_from, format_cover

    job = _job(args, "cover export", [args.family_file])
    fam = read_family(resolve(args.family_file))
    p, q = fam.instantiate(job.alpha)
    bits = job.precision_bits or 128
    rep = Report(job)
    cover = from_exact(p, q, bits)
    rep.say(f"family {fam.name}, degree {cover.degree}, residual {cover.residual:.3e}")
    for b, ct in zip(cover.branch_points, cover.cycle_types()):
        rep.say(f"  {_fmt_point(b)}: {ct}")
    rep.check("residual", cover.residual < 2.0 ** (-bits / 2), f"{cover.residual:.3e}")
    text = format_cover(cover_file_from(cover, [f"{fam.name} at alpha = {fam.alpha if job.alpha is None else job.alpha}"]))
    if not job.out:
        rep.say("")
        rep.say(text.rstrip())
    return _emit(rep, (job.out, text) if job.out else None)


def cmd_recognize(args) -> int:
    from .recognize import interpolate_dependency, read_samples, recognize_algebraic, recognize_rational

    job = _job(args, "recognize", [args.samples] if args.samples else [])
    rep = Report(job)
    if args.value is not None:
        import gmpy2

        parts = args.value.replace(",", " ").split()
        digits = max(len(s.lstrip("+-").replace(".", "").split("e")[0].split("E")[0]) for s in parts)
        bits = job.precision_bits or max(53, int(digits * 3.3219))
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            z = gmpy2.mpc(gmpy2.mpfr(parts[0]), gmpy2.mpfr(parts[1]) if len(parts) > 1 else 0)
            rat = recognize_rational(z.real, args.height, bits=bits) if len(parts) == 1 or z.imag == 0 else None
            val = recognize_algebraic(z, args.max_degree, args.height, bits=bits)
        if rat is not None:
            rep.say(f"rational: {rat}")
            rep.trailer["RATIONAL"] = str(rat)
        if val is None:
            rep.check("algebraic recognition", False, "inconclusive (no candidate passes margin and residual)")
        else:
            rep.say(val.provenance())
            rep.say(f"minimal polynomial candidate: {val}")
            rep.say(f"residual {val.residual:.3e}, margin {val.margin:.3e}")
            rep.check("algebraic recognition", True, str(val))
            rep.trailer["POLYNOMIAL"] = str(val)
        return _emit(rep)
    if not args.samples or not args.degrees:
        raise UsageError("recognize needs a samples file with --degrees, or --value")
    try:
        db, dg = (int(x) for x in args.degrees.split(","))
    except ValueError:
        raise UsageError("--degrees expects two integers such as 2,1") from None
    samples = read_samples(resolve(args.samples))
    dep = interpolate_dependency(samples, (db, dg))
    rep.say(f"{len(samples)} samples, degree bounds ({db}, {dg})")
    rep.say(f"dependency: {dep} = 0")
    rep.check("vanishes on all samples", all(dep(b, g) == 0 for b, g in samples))
    rep.trailer.update(DEPENDENCY=str(dep), TOTAL_DEGREE=str(dep.total_degree()))
    return _emit(rep)


# ---------------------------------------------------------------------------
# parser

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    g = c.add_argument_group("job options (environment: HURWITZKIT_<NAME>)")
    g.add_argument("--prime", type=int, help=f"prime for modular checks (default {config.DEFAULT_PRIME})")
    g.add_argument("--alpha", type=Fraction, help="family parameter (default: the file's value)")
    g.add_argument("--precision-bits", dest="precision_bits", type=int, help="working precision in bits")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--budget-elements", dest="budget_elements", type=int,
                   help=f"largest conjugacy class to enumerate (default {config.CLASS_CAP})")
    g.add_argument("--threads", type=int, help="worker threads for loop lifting (default 1)")
    g.add_argument("--out", help="write the main artifact (tuples, certificate, cover) here")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="hurwitzkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="group", required=True)

    ni = sub.add_parser("nielsen", help="Nielsen classes").add_subparsers(dest="action", required=True)
    a = ni.add_parser("enum", parents=[common], help="count inner Nielsen classes of a type file")
    a.add_argument("type_file")
    a.add_argument("--expect", type=int, help="required inner class count")
    a.add_argument("--show", type=int, default=3, help="representatives to print")
    a.set_defaults(func=cmd_nielsen_enum)

    br = sub.add_parser("braid", help="braid group action").add_subparsers(dest="action", required=True)
    a = br.add_parser("orbit", parents=[common], help="braid orbits and braid-word cycle types")
    a.add_argument("type_file")
    a.add_argument("--tuples", help="seed orbits from a tuples file instead of enumerating")
    a.add_argument("--words", nargs="+", help="braid words such as 'Q1^2' (default: Hurwitz curve words)")
    a.add_argument("--expect-orbits", dest="expect_orbits", type=int)
    a.set_defaults(func=cmd_braid_orbit)

    ve = sub.add_parser("verify", help="exact verification").add_subparsers(dest="action", required=True)
    a = ve.add_parser("family", parents=[common], help="check a family file's expectations")
    a.add_argument("family_file")
    a.set_defaults(func=cmd_verify_family)

    a = sub.add_parser("monodromy", parents=[common], help="numerical monodromy of a cover or family file")
    a.add_argument("input")
    a.add_argument("--expect-order", dest="expect_order", type=int)
    a.add_argument("--expect-types", dest="expect_types", help="comma-separated cycle types")
    a.add_argument("--tolerance", type=float, default=1e-10, help="largest accepted tracking residual")
    a.set_defaults(func=cmd_monodromy)

    a = sub.add_parser("deform", parents=[common], help="move finite branch points to targets")
    a.add_argument("input")
    a.add_argument("--targets", nargs="+", required=True,
                   help="one 're' or 're,im' per finite branch point, in order of real part")
    a.add_argument("--steps", type=int, default=16)
    a.set_defaults(func=cmd_deform)

    co = sub.add_parser("cover", help="cover files").add_subparsers(dest="action", required=True)
    a = co.add_parser("export", parents=[common], help="refined cover file from a family file")
    a.add_argument("family_file")
    a.set_defaults(func=cmd_cover_export)

    a = sub.add_parser("recognize", parents=[common], help="dependencies from samples, or recognize a value")
    a.add_argument("samples", nargs="?")
    a.add_argument("--degrees", help="degree bounds 'dbeta,dgamma'")
    a.add_argument("--value", help="decimal value 're' or 're,im' to recognize as algebraic")
    a.add_argument("--max-degree", dest="max_degree", type=int, default=4)
    a.add_argument("--height", type=int, default=10 ** 6)
    a.set_defaults(func=cmd_recognize)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        # parse errors carry file:line prefixes from the readers
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
