"""Cover files and certificate reports.

A cover file looks like::

    degree 27
    precision_bits 256
    branch_point -1.27905355339615e+00 0.00000000000000e+00
    branch_point inf
    num_coeff 0 4.14720000000000e+04 0.00000000000000e+00
    ...
    den_coeff 0 ...

``num`` is ``p`` and ``den`` is ``q`` in ``p(X) - t q(X)``.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..permgroup import format_group
from .monodromy import INF, MonodromyCertificate
from .scalars import format_complex, parse_complex, precision, use_mp


class CoverFileError(ValueError):
    pass


@dataclass
class ComplexApproxPolynomial:
    coeffs: list                   # low-first working scalars
    bits: int = 53

    def __post_init__(self):
        use_mp(self.bits)
        while len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            self.coeffs.pop()
        if not self.coeffs:
            raise ValueError("empty polynomial")
        if self.coeffs[-1] != 0 and abs(complex(self.coeffs[-1])) < 1e-300:
            raise ValueError("leading coefficient underflows")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass
class CoverFile:
    degree: int
    bits: int
    branch_points: list            # working scalars or INF
    num: ComplexApproxPolynomial
    den: ComplexApproxPolynomial
    comments: list[str] = field(default_factory=list)


def _digits(bits: int) -> int:
    return max(17, int(math.ceil(bits * math.log10(2))) + 2)


def format_cover(cf: CoverFile) -> str:
    d = _digits(cf.bits)
    lines = ["# " + c for c in cf.comments]
    lines.append(f"degree {cf.degree}")
    lines.append(f"precision_bits {cf.bits}")
    for b in cf.branch_points:
        lines.append("branch_point inf" if isinstance(b, str) else f"branch_point {format_complex(b, d)}")
    for k, c in enumerate(cf.num.coeffs):
        lines.append(f"num_coeff {k} {format_complex(c, d)}")
    for k, c in enumerate(cf.den.coeffs):
        lines.append(f"den_coeff {k} {format_complex(c, d)}")
    return "\n".join(lines) + "\n"


def parse_cover(text: str, source: str = "<cover>") -> CoverFile:
    degree = bits = None
    bps: list = []
    num: dict[int, object] = {}
    den: dict[int, object] = {}

    def fail(lineno, msg):
        raise CoverFileError(f"{source}:{lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            if key == "degree":
                degree = int(rest[0])
            elif key == "precision_bits":
                bits = int(rest[0])
                use_mp(bits)
            elif key in ("branch_point", "num_coeff", "den_coeff"):
                if bits is None:
                    fail(lineno, "precision_bits must come before coefficients and branch points")
                if key == "branch_point":
                    if len(rest) == 1 and rest[0].lower() in ("inf", "infinity"):
                        bps.append(INF)
                    elif len(rest) == 2:
                        with precision(bits):
                            bps.append(parse_complex(" ".join(rest), bits))
                    else:
                        fail(lineno, "expected 'branch_point <re> <im>' or 'branch_point inf'")
                else:
                    if len(rest) != 3:
                        fail(lineno, f"expected '{key} <k> <re> <im>'")
                    k = int(rest[0])
                    target = num if key == "num_coeff" else den
                    if k < 0 or k in target:
                        fail(lineno, f"bad or repeated coefficient index {k}")
                    with precision(bits):
                        target[k] = parse_complex(" ".join(rest[1:]), bits)
            else:
                fail(lineno, f"unknown keyword {key!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, CoverFileError):
                raise
            fail(lineno, str(exc) or "malformed line")
    if degree is None or bits is None:
        raise CoverFileError(f"{source}: missing degree or precision_bits")
    if not num or not den:
        raise CoverFileError(f"{source}: numerator and denominator coefficients are required")

    def dense(d):
        top = max(d)
        zero = next(iter(d.values())) * 0
        return [d.get(k, zero) for k in range(top + 1)]

    with precision(bits):
        p = ComplexApproxPolynomial(dense(num), bits)
        q = ComplexApproxPolynomial(dense(den), bits)
    if max(p.degree, q.degree) != degree:
        raise CoverFileError(f"{source}: degree {degree} does not match the coefficients")
    return CoverFile(degree, bits, bps, p, q)


def read_cover(path) -> CoverFile:
    path = Path(path)
    return parse_cover(path.read_text(encoding="utf-8"), str(path))


def cover_file_from(cover, comments: Sequence[str] = ()) -> CoverFile:
    """Cover file view of a :class:`~hurwitzkit.numcover.cover.CoverApproximation`."""
    p, q = cover.polynomials()
    with precision(cover.bits):
        return CoverFile(cover.degree, cover.bits, [b if isinstance(b, str) else b for b in cover.branch_points],
                         ComplexApproxPolynomial(list(p), cover.bits), ComplexApproxPolynomial(list(q), cover.bits),
                         list(comments))


def write_cover(cf: CoverFile, path) -> None:
    Path(path).write_text(format_cover(cf), encoding="utf-8")


def format_certificate(cert: MonodromyCertificate) -> str:
    """Group-file block of the permutations plus a residual report in comments."""
    lines = [f"basepoint {cert.basepoint.real:.12e} {cert.basepoint.imag:.12e}",
             f"bits {cert.bits}",
             f"tracking_steps {cert.steps}",
             f"max_residual {cert.max_residual:.3e}",
             f"product_one {str(cert.product_one).lower()}"]
    for b, p in zip(cert.branch_points, cert.permutations):
        where = "inf" if isinstance(b, str) else f"{complex(b).real:.12e} {complex(b).imag:.12e}"
        lines.append(f"loop {where}: {p.cycle_type()}")
    return format_group(cert.permutations, "\n".join(lines))
