"""Multi-modular computation of RURs of systems with rational coefficients.

A separating form is chosen modulo a first prime, then kept fixed.  Each
further prime gives a reduced RUR image; images that agree on the quotient
dimension, the leading monomials of the Groebner basis and the degree of the
squarefree first polynomial are combined coefficient-wise by CRT and lifted
by rational reconstruction.  A lifted candidate is accepted only after an
exact check: it must match the image at an unused prime, and substituting
``X_i = f_i / f0`` into every generator must vanish modulo the first
polynomial over QQ.
"""

from __future__ import annotations

import logging
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import (
    BadPrime,
    EmptyVariety,
    NeedMorePrimes,
    NotInvertible,
    Refuted,
    StrategyExhausted,
    UnsupportedCharacteristic,
)
from .fields import QQ, CrtAccumulator, PrimeField, crt_combine, prime_sequence, rational_reconstruct
from .groebner import quotient_structure
from .mpoly import System
from .rur import (
    ReducedRUR,
    find_separating_form,
    full_ideal_rur,
    las_vegas_radical_rur,
)
from .upoly import UPoly

log = logging.getLogger(__name__)


@dataclass
class ModularConfig:
    prime_bits: int = 31
    batch_size: int = 2
    max_primes: int = 400
    seed: int | None = 0
    threads: int = 1
    bound: int = 10
    full: bool = False
    pair_limit: int | None = None


@dataclass
class ModularImage:
    prime: int
    dimension: int
    fingerprint: tuple
    form: tuple
    rur: ReducedRUR
    full: ReducedRUR | None = None

    @property
    def key(self) -> tuple:
        return (self.dimension, self.fingerprint, self.rur.first.degree)

    def vectors(self) -> list:
        """Coefficient lists padded to a shape that depends only on ``key``."""
        return _rur_vectors(self.rur, self.full)


def _padded(p: UPoly, n: int) -> list:
    c = list(p.coeffs)
    if len(c) > n:
        raise ValueError("polynomial longer than its slot")
    return c + [0] * (n - len(c))


def _rur_vectors(rur: ReducedRUR, full: ReducedRUR | None) -> list:
    d = rur.first.degree
    out = [_padded(rur.first, d + 1), _padded(rur.f0, max(d, 1))]
    out += [_padded(c, max(d, 1)) for c in rur.coords]
    if full is not None:
        out.append(_padded(full.first, full.first.degree + 1))
    return out


def reduce_system(system: System, p: int) -> System:
    try:
        return system.change_field(PrimeField(p))
    except NotInvertible as exc:
        raise BadPrime(f"p = {p} divides a coefficient denominator") from exc


def compute_image(system: System, p: int, t: Sequence, full: bool = False,
                  pair_limit: int | None = None) -> ModularImage:
    """Reduced RUR of the system modulo ``p`` for the fixed form ``t``.

    Raises :class:`BadPrime` when ``p`` is not usable for this form.
    """
    sp = reduce_system(system, p)
    q = quotient_structure(sp, pair_limit=pair_limit)
    D = q.dimension
    if p <= D:
        raise BadPrime(f"p = {p} does not exceed D = {D}")
    if D == 0:
        raise BadPrime(f"unit ideal modulo {p}")
    try:
        out = las_vegas_radical_rur(q, t)
    except (UnsupportedCharacteristic, ValueError) as exc:
        raise BadPrime(str(exc)) from exc
    if not out.success:
        raise BadPrime(f"form not separating modulo {p}: {out.reason}")
    fr = full_ideal_rur(q, t, out.rur) if full else None
    return ModularImage(p, D, q.gb.fingerprint(), tuple(t), out.rur, fr)


def _image_or_none(args):
    system, p, t, full, pair_limit = args
    try:
        return compute_image(system, p, t, full, pair_limit)
    except BadPrime as exc:
        log.info("bad prime %d: %s", p, exc)
        return None


# --- lifting -----------------------------------------------------------------

@dataclass
class LiftState:
    """CRT grid over the images accepted so far."""

    grid: list = dc_field(default_factory=list)
    shape: tuple | None = None
    primes: list = dc_field(default_factory=list)
    candidate: list | None = None

    def add(self, image: ModularImage):
        vecs = image.vectors()
        shape = tuple(len(v) for v in vecs)
        if self.shape is None:
            self.shape = shape
            self.grid = [[CrtAccumulator() for _ in v] for v in vecs]
        elif shape != self.shape:
            raise ValueError("image shape differs from the grid")
        p = image.prime
        self.grid = [[crt_combine(a, r, p) for a, r in zip(row, v)]
                     for row, v in zip(self.grid, vecs)]
        self.primes.append(p)
        self.candidate = None

    @property
    def modulus(self) -> int:
        return self.grid[0][0].modulus if self.grid else 1

    def reconstruct(self) -> list:
        out = []
        for row in self.grid:
            vals = []
            for a in row:
                x = rational_reconstruct(a.residue, a.modulus)
                if x is None:
                    raise NeedMorePrimes(f"reconstruction failed after {len(self.primes)} primes")
                vals.append(x.numerator if x.denominator == 1 else x)
            out.append(vals)
        self.candidate = out
        return out


def _rur_from_vectors(vecs: list, form: tuple, with_full: bool, field=QQ,
                      dimension=None) -> tuple:
    first = UPoly(vecs[0], field)
    f0 = UPoly(vecs[1], field)
    ncoords = len(vecs) - 2 - (1 if with_full else 0)
    coords = [UPoly(v, field) for v in vecs[2:2 + ncoords]]
    rad = ReducedRUR(first, f0, coords, tuple(form), field, "radical", dimension=dimension)
    full = None
    if with_full:
        full = ReducedRUR(UPoly(vecs[-1], field), f0, coords, tuple(form), field, "full",
                          dimension=dimension)
    return rad, full


def lift(images: Sequence[ModularImage], state: LiftState | None = None) -> tuple:
    """CRT and rational reconstruction of compatible images.

    Returns ``(radical, full_or_None)`` over QQ or raises
    :class:`NeedMorePrimes`.
    """
    if not images:
        raise NeedMorePrimes("no images")
    state = state if state is not None else LiftState()
    for img in images:
        if img.prime not in state.primes:
            state.add(img)
    vecs = state.reconstruct()
    ref = images[0]
    return _rur_from_vectors(vecs, ref.form, ref.full is not None, QQ, ref.dimension)


def reduce_rur(rur: ReducedRUR, p: int) -> ReducedRUR:
    """Image of a rational RUR modulo ``p``."""
    F = PrimeField(p)
    try:
        conv = [UPoly([F.convert(c) for c in u.coeffs], F, raw=True) for u in rur.polynomials()]
    except NotInvertible as exc:
        raise BadPrime(f"p = {p} divides a denominator of the candidate") from exc
    return ReducedRUR(conv[0], conv[1], conv[2:], rur.form, F, rur.kind, dimension=rur.dimension)


# --- verification ----------------------------------------------------------

def back_substitute(system: System, rur: ReducedRUR):
    """Exact check that every generator vanishes on the parametrized points.

    For a generator of total degree ``d`` the homogenized substitution
    ``sum c * prod f_i^{e_i} * f0^{d - |e|}`` must be ``0 mod fbar``.
    Raises :class:`Refuted` naming the first failing generator.
    """
    F = rur.field
    fbar = rur.fbar
    if fbar.degree < 1:
        raise Refuted("first polynomial is constant")
    coords = [c % fbar for c in rur.coords]
    f0 = rur.f0 % fbar
    powers = [[UPoly.one(F)] for _ in range(len(coords) + 1)]
    bases = coords + [f0]

    def power(i, e):
        row = powers[i]
        while len(row) <= e:
            row.append((row[-1] * bases[i]) % fbar)
        return row[e]

    polys = system.change_field(F).polys if system.field != F else system.polys
    for idx, g in enumerate(polys):
        d = g.total_degree()
        acc = UPoly.zero(F)
        for mono, c in g.terms.items():
            term = power(len(coords), d - sum(mono))
            for i, e in enumerate(mono):
                if e:
                    term = (term * power(i, e)) % fbar
            acc = acc + term.scale(c)
        if acc % fbar:
            raise Refuted(f"generator {idx + 1} does not vanish on the RUR")
    if rur.kind == "full" and rur.first % fbar:
        raise Refuted("squarefree part does not divide the first polynomial")


def _same_rur(a: ReducedRUR, b: ReducedRUR) -> bool:
    return a.first == b.first and a.f0 == b.f0 and list(a.coords) == list(b.coords)


def stabilize_and_verify(system: System, candidate: ReducedRUR, prime: int,
                         full: ReducedRUR | None = None, pair_limit: int | None = None) -> bool:
    """Accept ``candidate`` or raise :class:`Refuted`.

    The candidate reduced modulo the unused ``prime`` must equal the image
    computed there, and back-substitution over QQ must pass.  A bad
    verification prime propagates as :class:`BadPrime`.
    """
    img = compute_image(system, prime, candidate.form, full is not None, pair_limit)
    if not _same_rur(reduce_rur(candidate, prime), img.rur):
        raise Refuted(f"candidate differs from the image modulo {prime}")
    if full is not None:
        if reduce_rur(full, prime).first != img.full.first:
            raise Refuted(f"full first polynomial differs from the image modulo {prime}")
        if full.first.degree != img.dimension:
            raise Refuted("full first polynomial does not have degree D")
    back_substitute(system, candidate)
    if full is not None:
        back_substitute(system, full)
    return True


# --- driver -------------------------------------------------------------------

@dataclass
class DriveResult:
    radical: ReducedRUR
    full: ReducedRUR | None
    form: tuple
    dimension: int
    primes_used: int = 0
    attempts: int = 1
    verified: bool = False


def _drive_prime_field(system: System, strategy: str, config: ModularConfig, verify: bool) -> DriveResult:
    q = quotient_structure(system, pair_limit=config.pair_limit)
    t, rad, attempts = find_separating_form(q, strategy, config.bound, config.seed)
    full = full_ideal_rur(q, t, rad) if config.full else None
    if verify:
        back_substitute(system, rad)
        if full is not None:
            back_substitute(system, full)
    return DriveResult(rad, full, tuple(t), q.dimension, 0, attempts, verify)


def _choose_form(system: System, primes, strategy: str, config: ModularConfig):
    """Search a separating form modulo the first usable prime."""
    rng = random.Random(config.seed)
    empty = 0
    for _ in range(config.max_primes):
        p = next(primes)
        try:
            sp = reduce_system(system, p)
        except BadPrime:
            continue
        q = quotient_structure(sp, pair_limit=config.pair_limit)
        if q.dimension == 0:
            # two primes agreeing on the unit ideal settle it
            empty += 1
            if empty == 2:
                raise EmptyVariety("the system has no solutions (unit ideal)")
            continue
        if p <= q.dimension:
            continue
        try:
            t, rad, attempts = find_separating_form(q, strategy, config.bound, rng)
        except StrategyExhausted:
            continue
        full = full_ideal_rur(q, t, rad) if config.full else None
        img = ModularImage(p, q.dimension, q.gb.fingerprint(), tuple(t), rad, full)
        return img, attempts
    raise StrategyExhausted("no prime produced a separating form")


def _map_images(system, primes: list, t, config: ModularConfig) -> list:
    args = [(system, p, t, config.full, config.pair_limit) for p in primes]
    if config.threads > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as ex:
            return list(ex.map(_image_or_none, args))
    return [_image_or_none(a) for a in args]


def _best_group(groups: dict) -> list:
    """Majority vote over image keys; ties go to the larger quotient."""
    return max(groups.values(), key=lambda g: (len(g), g[0].dimension))


def drive(system: System, strategy: str = "certified", config: ModularConfig | None = None,
          verify: bool = True) -> DriveResult:
    """Reduced RUR of ``system`` over its own field.

    Over a prime field this is a single run.  Over QQ images are collected
    in doubling batches until a lifted candidate passes
    :func:`stabilize_and_verify`.
    """
    config = config or ModularConfig()
    if system.field.characteristic:
        return _drive_prime_field(system, strategy, config, verify)
    primes = prime_sequence(config.prime_bits)
    first, attempts = _choose_form(system, primes, strategy, config)
    t = first.form
    groups = defaultdict(list)
    groups[first.key].append(first)
    used = 1
    batch = config.batch_size
    while used < config.max_primes:
        group = _best_group(groups)
        state = LiftState()
        try:
            rad, full = lift(group, state)
        except NeedMorePrimes:
            rad = None
        if rad is not None:
            try:
                vp = next(primes)
                used += 1
                stabilize_and_verify(system, rad, vp, full, config.pair_limit)
                return DriveResult(rad, full, t, group[0].dimension, used, attempts, True)
            except BadPrime as exc:
                log.info("verification prime unusable: %s", exc)
            except Refuted as exc:
                log.info("candidate refuted: %s", exc)
        new = [next(primes) for _ in range(batch)]
        used += len(new)
        for img in _map_images(system, new, t, config):
            if img is not None:
                groups[img.key].append(img)
        batch *= 2
    raise Refuted(f"no verified RUR within {config.max_primes} primes")

