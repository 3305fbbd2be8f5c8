"""Counter-based random instance generation.

Reproducibility contract: the generator is a fixed 64-bit mixing function
over (seed, stream, counter), so identical specs yield bit-identical
instances on every platform.  No platform RNG is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One round of the splitmix64 mixing function."""
    x = (x + _GAMMA) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


class CounterRng:
    """Deterministic counter-based generator: value(k) = mix(base + k)."""

    __slots__ = ("_base", "_counter")

    def __init__(self, seed: int, stream: int = 0):
        base = splitmix64(seed & _MASK)
        base = splitmix64((base ^ (stream & _MASK)) & _MASK)
        self._base = base
        self._counter = 0

    def _next(self) -> int:
        v = splitmix64((self._base + self._counter) & _MASK)
        self._counter += 1
        return v

    def u01(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self._next() >> 11) * (2.0**-53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.u01()

    def integer(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self.u01() * n) % n

    def complex_in_disk(self, radius: float = 1.0) -> complex:
        r = radius * math.sqrt(self.u01())
        phi = 2.0 * math.pi * self.u01()
        return complex(r * math.cos(phi), r * math.sin(phi))


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for one family of random instances; identical spec fields
    always regenerate bit-identical instances."""

    kind: str = "polynomial"  # or "blaschke"
    seed: int = 0
    max_s: int = 6
    max_mult: int = 4
    max_degree: int = 12
    region_radius: float = 1.0
    min_separation: float = 0.05
    bias_interior_multiplicity: bool = False


def _draw_locations(
    rng: CounterRng, count: int, radius: float, min_sep: float
) -> list[complex]:
    locs: list[complex] = []
    attempts = 0
    while len(locs) < count:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("could not place separated points; relax the instance parameters")
        z = rng.complex_in_disk(radius)
        if all(abs(z - q) >= min_sep for q in locs):
            locs.append(z)
    return locs


def _draw_multiplicities(
    rng: CounterRng, s: int, max_mult: int, max_degree: int
) -> list[int]:
    mults = [1] * s
    budget = max_degree - s
    while budget > 0 and rng.u01() < 0.45:
        j = rng.integer(s)
        if mults[j] < max_mult:
            mults[j] += 1
            budget -= 1
        else:
            budget -= 1  # burn budget so the loop always terminates
    return mults


def random_polynomial(spec: InstanceSpec, index: int):
    """Instance `index` of the polynomial family described by `spec`."""
    from .poly import FactoredPolynomial

    rng = CounterRng(spec.seed, stream=index)
    s = 2 + rng.integer(max(1, spec.max_s - 1))
    locs = _draw_locations(rng, s, spec.region_radius, spec.min_separation)
    mults = _draw_multiplicities(rng, s, spec.max_mult, spec.max_degree)
    if spec.bias_interior_multiplicity and s >= 3 and rng.u01() < 0.5:
        # stress configurations with a heavily weighted root deep inside the
        # hull of the others: move one root to the centroid and pile the
        # remaining degree budget onto it
        centroid = sum(locs[1:], 0j) / (s - 1)
        jitter = rng.complex_in_disk(0.05 * spec.region_radius)
        candidate = centroid + jitter
        if all(
            abs(candidate - q) >= spec.min_separation for q in locs[1:]
        ):
            locs[0] = candidate
            room = spec.max_degree - sum(mults)
            mults[0] = min(spec.max_mult, mults[0] + room)
    return FactoredPolynomial(list(zip(locs, mults)))


def random_blaschke(spec: InstanceSpec, index: int):
    """Instance `index` of the Blaschke family: zero at 0 plus random zeros."""
    from .blaschke import make_blaschke

    rng = CounterRng(spec.seed, stream=index)
    s = 2 + rng.integer(max(1, spec.max_s - 1))
    locs = [0j]
    attempts = 0
    while len(locs) < s:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("could not place separated zeros; relax the instance parameters")
        z = rng.complex_in_disk(spec.region_radius)
        if all(abs(z - q) >= spec.min_separation for q in locs):
            locs.append(z)
    mults = _draw_multiplicities(rng, s, spec.max_mult, spec.max_degree)
    return make_blaschke(list(zip(locs, mults)))


def polynomial_corpus(
    seed: int,
    count: int,
    max_s: int = 6,
    max_degree: int = 12,
    max_mult: int = 4,
    region_radius: float = 1.0,
):
    spec = InstanceSpec(
        kind="polynomial",
        seed=seed,
        max_s=max_s,
        max_mult=max_mult,
        max_degree=max_degree,
        region_radius=region_radius,
    )
    return [random_polynomial(spec, i) for i in range(count)]


def blaschke_corpus(
    seed: int,
    count: int,
    max_s: int = 5,
    max_mult: int = 3,
    max_degree: int = 15,
    region_radius: float = 0.8,
):
    spec = InstanceSpec(
        kind="blaschke",
        seed=seed,
        max_s=max_s,
        max_mult=max_mult,
        max_degree=max_degree,
        region_radius=region_radius,
    )
    return [random_blaschke(spec, i) for i in range(count)]
