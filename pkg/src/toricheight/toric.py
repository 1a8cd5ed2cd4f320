"""Arithmetic of projective monomial (toric) data: degrees, normalized
heights, Chow and Hilbert weights, orbit decomposition, and the standard
constructions (inverse, power, translate, join, Segre, Veronese, monomial
image)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import EnumerationCapError, LatticeHypothesisError
from .exactnum import (
    LogLinearNumber,
    Place,
    approximate,
    as_fraction,
    as_loglinear,
    certified_sign,
    log_abs,
    relevant_places,
    value_sign,
)
from .geomkernel import Face, FaceLattice, Polytope, convex_hull, face_lattice, lattice_normalize
from .roof import Roof, roof_from_weight, roof_integral

__all__ = [
    "MonomialPair",
    "HeightReport",
    "DEFAULT_ENUMERATION_CAP",
    "weight_vector",
    "degree",
    "normalized_height",
    "chow_weight",
    "hilbert_weight",
    "arithmetic_hilbert_norm",
    "hilbert_asymptotic_gap",
    "hilbert_asymptotic_gap_exact",
    "symmetric_height_sum",
    "invert",
    "power",
    "translate",
    "orbit_decomposition",
    "join",
    "segre",
    "veronese",
    "monomial_image",
    "function_field_height",
]

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class MonomialPair:
    """Exponent vectors in Z^n with nonzero rational coefficients; the data
    of the monomial map s -> (c_0 s^{a_0} : ... : c_N s^{a_N})."""

    exponents: tuple[tuple[int, ...], ...]
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.coefficients):
            raise ValueError("exponents and coefficients must have equal length")
        if not self.exponents:
            raise ValueError("need at least one monomial")
        n = len(self.exponents[0])
        if any(len(a) != n for a in self.exponents):
            raise ValueError("exponent vectors must share one dimension")
        if any(c == 0 for c in self.coefficients):
            raise ValueError("zero coefficients are not allowed; drop them first")

    @classmethod
    def make(cls, exponents, coefficients) -> "MonomialPair":
        return cls(
            tuple(tuple(int(x) for x in a) for a in exponents),
            tuple(as_fraction(c) for c in coefficients),
        )

    @classmethod
    def dropping_zeros(cls, exponents, coefficients):
        """Build a pair after removing zero coordinates; returns the pair
        together with the kept index map."""
        kept = tuple(i for i, c in enumerate(coefficients) if as_fraction(c) != 0)
        if not kept:
            raise ValueError("all coefficients vanish")
        pair = cls.make([exponents[i] for i in kept], [coefficients[i] for i in kept])
        return pair, kept

    @property
    def n_ambient(self) -> int:
        return len(self.exponents[0])

    @property
    def size(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class HeightReport:
    """A height value with its per-place breakdown.

    ``value == scale * sum(contribution over places)``: for normalized
    heights the contributions are local roof integrals and the scale is
    (dim+1)!; for multiheights the contributions are local mixed integrals
    and the scale is 1.
    """

    value: LogLinearNumber
    per_place: tuple[tuple[Place, LogLinearNumber], ...]
    degree: int
    dim: int
    scale: int

    def place_map(self) -> dict[Place, LogLinearNumber]:
        return dict(self.per_place)

    def decimal(self, bits: int = 128) -> str:
        return approximate(self.value, bits)[0]


def weight_vector(pair: MonomialPair, v: Place) -> list[LogLinearNumber]:
    """Componentwise log of the v-adic absolute values of the coefficients."""
    return [log_abs(c, v) for c in pair.coefficients]


def _normalized_exponents(pair: MonomialPair):
    return lattice_normalize(pair.exponents)


def degree(pair: MonomialPair) -> int:
    """Lattice-normalized volume degree: r! times the volume of the hull of
    the exponents measured in their difference lattice."""
    coords, r, _ = _normalized_exponents(pair)
    if r == 0:
        return 1
    vol = convex_hull([tuple(map(Fraction, b)) for b in coords]).volume()
    d = vol * factorial(r)
    if d.denominator != 1:
        raise ArithmeticError("lattice volume was not integral")
    return int(d)


def _local_roof(coords, pair, v) -> Roof:
    return roof_from_weight(coords, weight_vector(pair, v))


def normalized_height(pair: MonomialPair) -> HeightReport:
    """Canonical height of the projective monomial variety: (r+1)! times
    the sum over places of the local roof integrals."""
    coords, r, _ = _normalized_exponents(pair)
    per = []
    total = LogLinearNumber()
    for v in relevant_places(pair.coefficients):
        local = as_loglinear(roof_integral(_local_roof(coords, pair, v)))
        per.append((v, local))
        total = total + local
    scale = factorial(r + 1)
    return HeightReport(total * scale, tuple(per), degree(pair), r, scale)


def _require_full_lattice(exponents):
    exponents = [tuple(int(x) for x in a) for a in exponents]
    n = len(exponents[0])
    coords, r, basis = lattice_normalize(exponents)
    identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    if r != n or basis != identity:
        raise LatticeHypothesisError(
            "exponent differences must generate the full integer lattice; normalize first"
        )
    return exponents, n


def chow_weight(exponents, weights) -> LogLinearNumber:
    """Weighted degree of the associated one-parameter degeneration:
    (n+1)! times the integral of the roof of the weights."""
    exponents, n = _require_full_lattice(exponents)
    roof = roof_from_weight(exponents, [_weight_value(w) for w in weights])
    return as_loglinear(roof_integral(roof) * factorial(n + 1))


def _weight_value(w):
    if isinstance(w, LogLinearNumber):
        return w
    return as_fraction(w)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def hilbert_weight(exponents, weights, degree_d: int, cap: int = DEFAULT_ENUMERATION_CAP):
    """Sum over the degree-d monomial fibers of the maximal weight of a
    representative, enumerated exhaustively."""
    exponents, n = _require_full_lattice(exponents)
    weights = [_weight_value(w) for w in weights]
    if len(weights) != len(exponents):
        raise ValueError("exponents and weights must have equal length")
    if degree_d < 0:
        raise ValueError("degree must be nonnegative")
    count = comb(degree_d + len(exponents) - 1, len(exponents) - 1)
    if count > cap:
        raise EnumerationCapError(
            f"{count} monomials of degree {degree_d} exceed the cap {cap}"
        )
    fibers: dict[tuple[int, ...], object] = {}
    for lam in _compositions(degree_d, len(exponents)):
        key = tuple(sum(l * a[j] for l, a in zip(lam, exponents)) for j in range(n))
        val = sum((l * w for l, w in zip(lam, weights)), Fraction(0))
        cur = fibers.get(key)
        if cur is None or value_sign(val - cur) > 0:
            fibers[key] = val
    return as_loglinear(sum(fibers.values(), Fraction(0)))


def arithmetic_hilbert_norm(
    pair: MonomialPair, degree_d: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> LogLinearNumber:
    """Sum over places of the local Hilbert weights of the normalized
    exponents with the coefficient weight vectors."""
    coords, _, _ = _normalized_exponents(pair)
    total = LogLinearNumber()
    for v in relevant_places(pair.coefficients):
        total = total + hilbert_weight(coords, weight_vector(pair, v), degree_d, cap)
    return total


def hilbert_asymptotic_gap_exact(
    pair: MonomialPair, degree_d: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> LogLinearNumber:
    """|(r+1)! H(D)/D^{r+1} - height|, exactly."""
    _, r, _ = _normalized_exponents(pair)
    h_norm = arithmetic_hilbert_norm(pair, degree_d, cap)
    height = normalized_height(pair).value
    gap = h_norm * factorial(r + 1) / (degree_d ** (r + 1)) - height
    return abs(gap)


def hilbert_asymptotic_gap(
    pair: MonomialPair, degree_d: int, cap: int = DEFAULT_ENUMERATION_CAP, bits: int = 64
) -> float:
    """Certified decimal value of the finite-degree gap; a convergence
    diagnostic rather than an exact identity."""
    text, _ = approximate(hilbert_asymptotic_gap_exact(pair, degree_d, cap), bits)
    return float(text)


def symmetric_height_sum(pair: MonomialPair) -> LogLinearNumber:
    """(r+1)! times the sum over places of the full lifted-polytope
    volumes; equals the height of the pair plus the height of its
    coefficient-wise inverse."""
    coords, r, _ = _normalized_exponents(pair)
    total = LogLinearNumber()
    for v in relevant_places(pair.coefficients):
        tau = weight_vector(pair, v)
        pts = [(*map(Fraction, b), t) for b, t in zip(coords, tau)]
        total = total + as_loglinear(convex_hull(pts).volume())
    return total * factorial(r + 1)


def invert(pair: MonomialPair) -> MonomialPair:
    return MonomialPair(pair.exponents, tuple(1 / c for c in pair.coefficients))


def power(pair: MonomialPair, k: int) -> MonomialPair:
    if k < 1:
        raise ValueError("power must be positive")
    return MonomialPair(pair.exponents, tuple(c**k for c in pair.coefficients))


def translate(pair: MonomialPair, shift, gamma) -> MonomialPair:
    gamma = as_fraction(gamma)
    if gamma == 0:
        raise ValueError("scale factor must be nonzero")
    shift = tuple(int(x) for x in shift)
    return MonomialPair(
        tuple(tuple(a + s for a, s in zip(e, shift)) for e in pair.exponents),
        tuple(gamma * c for c in pair.coefficients),
    )


def orbit_decomposition(pair: MonomialPair):
    """One torus orbit per face of the exponent polytope: each face keeps
    exactly the monomials whose exponent lies on it."""
    hull = convex_hull([tuple(map(Fraction, a)) for a in pair.exponents])
    lattice = face_lattice(hull)
    out = []
    for face in lattice.faces:
        fp = lattice.face_polytope(face)
        kept = [
            i
            for i, a in enumerate(pair.exponents)
            if fp.contains(tuple(map(Fraction, a)))
        ]
        sub = MonomialPair(
            tuple(pair.exponents[i] for i in kept),
            tuple(pair.coefficients[i] for i in kept),
        )
        out.append((face, sub))
    return out


def join(p1: MonomialPair, p2: MonomialPair) -> MonomialPair:
    """Join construction: exponents embedded in Z^{1+n+p} with a marker
    coordinate, coefficients concatenated."""
    n, p = p1.n_ambient, p2.n_ambient
    exps = [(1, *a, *([0] * p)) for a in p1.exponents]
    exps += [(0, *([0] * n), *b) for b in p2.exponents]
    return MonomialPair(tuple(exps), p1.coefficients + p2.coefficients)


def segre(p1: MonomialPair, p2: MonomialPair) -> MonomialPair:
    """Segre product: concatenated exponent pairs with coefficient
    products."""
    exps = tuple((*a, *b) for a in p1.exponents for b in p2.exponents)
    coeffs = tuple(c1 * c2 for c1 in p1.coefficients for c2 in p2.coefficients)
    return MonomialPair(exps, coeffs)


def veronese(pair: MonomialPair, degree_d: int) -> MonomialPair:
    """Degree-d Veronese re-embedding: one monomial per exponent tuple of
    total degree d in the original coordinates."""
    if degree_d < 1:
        raise ValueError("degree must be positive")
    n = pair.n_ambient
    exps = []
    coeffs = []
    for b in _compositions(degree_d, pair.size):
        exps.append(
            tuple(sum(bi * a[j] for bi, a in zip(b, pair.exponents)) for j in range(n))
        )
        coeff = Fraction(1)
        for bi, c in zip(b, pair.coefficients):
            coeff *= c**bi
        coeffs.append(coeff)
    return MonomialPair(tuple(exps), tuple(coeffs))


def monomial_image(pair: MonomialPair, image_exponents, image_coefficients) -> MonomialPair:
    """Image of the variety under a monomial map of the ambient projective
    space, given by equal-degree exponent rows and nonzero coefficients."""
    rows = [tuple(int(x) for x in b) for b in image_exponents]
    betas = [as_fraction(c) for c in image_coefficients]
    if len(rows) != len(betas) or not rows:
        raise ValueError("image data must pair exponent rows with coefficients")
    if any(len(b) != pair.size for b in rows):
        raise ValueError("image exponent rows must match the pair size")
    if any(min(b) < 0 for b in rows):
        raise ValueError("image exponents must be nonnegative")
    degrees = {sum(b) for b in rows}
    if len(degrees) != 1:
        raise ValueError("image exponent rows must share one total degree")
    if any(b == 0 for b in betas):
        raise ValueError("zero image coefficients are not allowed")
    n = pair.n_ambient
    exps = []
    coeffs = []
    for b, beta in zip(rows, betas):
        exps.append(tuple(sum(bi * a[j] for bi, a in zip(b, pair.exponents)) for j in range(n)))
        coeff = beta
        for bi, c in zip(b, pair.coefficients):
            coeff *= c**bi
        coeffs.append(coeff)
    return MonomialPair(tuple(exps), tuple(coeffs))


def function_field_height(exponents, weights) -> Fraction:
    """Height over the rational function field: (n+1)! times the full
    volume of the hull of the integrally lifted exponents."""
    exponents, n = _require_full_lattice(exponents)
    lifts = [int(w) for w in weights]
    if len(lifts) != len(exponents):
        raise ValueError("exponents and weights must have equal length")
    pts = [(*map(Fraction, a), Fraction(t)) for a, t in zip(exponents, lifts)]
    return convex_hull(pts).volume() * factorial(n + 1)
