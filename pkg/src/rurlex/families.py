"""Classical benchmark systems and small handcrafted ones."""

from __future__ import annotations

from fractions import Fraction

from .fields import QQ
from .mpoly import PolyRing, System


def katsura(n: int, field=QQ) -> System:
    """Katsura-n in the ``n + 1`` unknowns ``x0 .. xn``."""
    names = [f"x{i}" for i in range(n + 1)]
    R = PolyRing(names, field)
    x = R.gens

    def u(k):
        k = abs(k)
        return x[k] if k <= n else R.zero()

    polys = [x[0] + sum((2 * x[i] for i in range(1, n + 1)), R.zero()) - 1]
    for m in range(n):
        s = R.zero()
        for l in range(-n, n + 1):
            s = s + u(l) * u(m - l)
        polys.append(s - x[m])
    return System(R, polys, f"katsura{n}")


def noon(n: int, field=QQ) -> System:
    """``10 x_i sum_{j != i} x_j^2 - 11 x_i + 10``."""
    names = [f"x{i + 1}" for i in range(n)]
    R = PolyRing(names, field)
    x = R.gens
    polys = []
    for i in range(n):
        s = sum((x[j] ** 2 for j in range(n) if j != i), R.zero())
        polys.append(x[i] * s * 10 - x[i] * 11 + 10)
    return System(R, polys, f"noon{n}")


def reimer(n: int, field=QQ) -> System:
    """``2 sum_i (-1)^(i+1) x_i^(j+1) - 1`` for ``j = 1 .. n``."""
    names = [f"x{i + 1}" for i in range(n)]
    R = PolyRing(names, field)
    x = R.gens
    polys = []
    for j in range(1, n + 1):
        s = R.zero()
        for i in range(n):
            s = s + x[i] ** (j + 1) * (2 if i % 2 == 0 else -2)
        polys.append(s - 1)
    return System(R, polys, f"reimer{n}")


def _product(ideals, R) -> list:
    """Generators of the product of the given ideals."""
    gens = [R.one()]
    for I in ideals:
        gens = [g * h for g in gens for h in I]
    return gens


def fat_points_2d(field=QQ) -> System:
    """``<x^2, xy, y^2> . <x - 1, y - 2> . <x + 2, y - 1/3>``.

    Three points, the origin with a non-cyclic local algebra of length 3;
    the quotient has dimension 5 and no form generates it.
    """
    R = PolyRing(["x", "y"], field)
    x, y = R.gens
    I1 = [x ** 2, x * y, y ** 2]
    I2 = [x - 1, y - 2]
    I3 = [x + 2, y - R.constant(Fraction(1, 3))]
    return System(R, _product([I1, I2, I3], R), "fatpoints2")


def fat_points_3d(field=QQ) -> System:
    """``<x, y, z>^2 . <x - 1, y - 1, z^2 + 1> . <x + 1, y - 3, (2z - 1)^2>``.

    A length-4 non-cyclic point at the origin, a conjugate pair of points
    and a double point; dimension 8.
    """
    R = PolyRing(["x", "y", "z"], field)
    x, y, z = R.gens
    m = [x, y, z]
    I1 = [a * b for i, a in enumerate(m) for b in m[i:]]
    I2 = [x - 1, y - 1, z ** 2 + 1]
    I3 = [x + 1, y - 3, (z * 2 - 1) ** 2]
    return System(R, _product([I1, I2, I3], R), "fatpoints3")


FAMILIES = {
    "katsura": katsura,
    "noon": noon,
    "reimer": reimer,
}


def named_system(name: str) -> System:
    """``katsura3``, ``noon4``, ``fatpoints2`` and so on."""
    if name == "fatpoints2":
        return fat_points_2d()
    if name == "fatpoints3":
        return fat_points_3d()
    for fam, make in FAMILIES.items():
        if name.startswith(fam) and name[len(fam):].isdigit():
            return make(int(name[len(fam):]))
    raise KeyError(name)
